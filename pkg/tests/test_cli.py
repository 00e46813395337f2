import json
import subprocess
import sys

import pytest

from greeneval.cli import main

TABLE1_EXPECTED = {"FloWaveNet": 81.6, "GANSynth": 32.4, "SampleRNN": 42.0,
                   "SING": 52.0, "WaveGAN": 24.0}


def run(argv, capsys):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def read_estimated(path):
    import csv
    with open(path, newline="", encoding="utf-8") as fh:
        return {row["label"]: row for row in csv.DictReader(fh)}


class TestEstimate:
    def test_fills_worst_case_energies(self, table1_path, tmp_path, capsys):
        code, out, err = run(["estimate", str(table1_path),
                              "--out", str(tmp_path / "o")], capsys)
        assert code == 0
        rows = read_estimated(tmp_path / "o" / "estimated.csv")
        for label, kwh in TABLE1_EXPECTED.items():
            assert float(rows[label]["e_train_kwh"]) == kwh
            assert rows[label]["e_train_method"] == "worst_case_spec"

    def test_measured_energy_left_untouched(self, table2_path, tmp_path, capsys):
        code, out, err = run(["estimate", str(table2_path),
                              "--out", str(tmp_path / "o")], capsys)
        assert code == 0
        rows = read_estimated(tmp_path / "o" / "estimated.csv")
        assert float(rows["WaveFlow 3"]["e_train_kwh"]) == 725.4
        assert rows["WaveFlow 3"]["e_train_method"] == "measured"
        assert "725.4 kWh (measured)" in out

    def test_unresolved_hardware_lists_nearest(self, tmp_path, capsys):
        records = tmp_path / "r.csv"
        records.write_text("label,hardware,gpu_count,train_hours\nm,XYZ,1,10\n")
        code, out, err = run(["estimate", str(records),
                              "--out", str(tmp_path / "o")], capsys)
        assert code == 2
        assert err.startswith("E_HARDWARE:")
        assert "XYZ" in err and "nearest" in err

    def test_missing_hours_is_domain_error(self, tmp_path, capsys):
        records = tmp_path / "r.csv"
        records.write_text("label,hardware,gpu_count,train_hours\nm,V100,1,\n")
        code, out, err = run(["estimate", str(records),
                              "--out", str(tmp_path / "o")], capsys)
        assert code == 2
        assert err.startswith("E_DOMAIN:")

    def test_custom_catalog(self, tmp_path, capsys):
        catalog = tmp_path / "cat.jsonl"
        catalog.write_text('{"name": "Z1", "max_power_watts": 100}\n')
        records = tmp_path / "r.csv"
        records.write_text("label,hardware,gpu_count,train_hours\nm,z1,2,10\n")
        code, out, err = run(["estimate", str(records), "--catalog", str(catalog),
                              "--out", str(tmp_path / "o")], capsys)
        assert code == 0
        assert float(read_estimated(tmp_path / "o" / "estimated.csv")
                     ["m"]["e_train_kwh"]) == 2.0

    def test_does_not_mutate_input(self, table1_path, tmp_path, capsys):
        before = table1_path.read_bytes()
        run(["estimate", str(table1_path), "--out", str(tmp_path / "o")], capsys)
        assert table1_path.read_bytes() == before


class TestPareto:
    def test_training_space(self, table2_path, tmp_path, capsys):
        out_dir = tmp_path / "o"
        code, out, err = run(["pareto", str(table2_path),
                              "--out", str(out_dir)], capsys)
        assert code == 0
        assert "dominated: WaveFlow 3 (dominated by WaveFlow 4)" in out
        front = json.loads((out_dir / "front.json").read_text())
        assert front["optimal"] == ["WaveFlow 1", "WaveFlow 2", "WaveFlow 4",
                                    "WaveFlow 5"]
        assert front["dominated"] == [{"label": "WaveFlow 3",
                                       "dominated_by": ["WaveFlow 4"]}]
        assert (out_dir / "report.csv").exists()
        assert (out_dir / "scatter.svg").exists()

    def test_generation_space(self, table2_path, tmp_path, capsys):
        code, out, err = run(["pareto", str(table2_path),
                              "--objectives", "quality_loss,e_gen_wh",
                              "--out", str(tmp_path / "o")], capsys)
        assert code == 0
        front = json.loads((tmp_path / "o" / "front.json").read_text())
        assert len(front["optimal"]) == 5
        assert front["dominated"] == []
        # generation energy is always reported relative to its workload
        assert front["objectives"][1] == \
            "E_gen (Wh per 100 s of 22.05 kHz audio)"

    def test_single_objective_minimum(self, table2_path, tmp_path, capsys):
        code, out, err = run(["pareto", str(table2_path),
                              "--objectives", "e_train_kwh",
                              "--out", str(tmp_path / "o")], capsys)
        assert code == 0
        front = json.loads((tmp_path / "o" / "front.json").read_text())
        assert front["optimal"] == ["WaveFlow 1"]
        assert not (tmp_path / "o" / "scatter.svg").exists()

    def test_duplicate_objectives_rejected(self, table2_path, tmp_path, capsys):
        code, out, err = run(["pareto", str(table2_path),
                              "--objectives", "e_gen_wh,e_gen_wh",
                              "--out", str(tmp_path / "o")], capsys)
        assert code == 2
        assert err.startswith("E_INPUT:") and "distinct" in err

    def test_unknown_objective_lists_available(self, table2_path, tmp_path,
                                               capsys):
        code, out, err = run(["pareto", str(table2_path),
                              "--objectives", "speed",
                              "--out", str(tmp_path / "o")], capsys)
        assert code == 2
        assert err.startswith("E_INPUT:")
        assert "available objectives" in err

    def test_incomplete_records_error_by_default(self, table1_path, tmp_path,
                                                 capsys):
        code, out, err = run(["pareto", str(table1_path),
                              "--out", str(tmp_path / "o")], capsys)
        assert code == 2
        assert "--exclude-incomplete" in err

    def test_exclude_incomplete_warns_and_drops(self, tmp_path, capsys):
        records = tmp_path / "r.csv"
        records.write_text(
            "label,hardware,gpu_count,train_hours,quality_loss,e_train_kwh\n"
            "a,,,,0.2,10\n"
            "b,,,,0.1,\n")
        code, out, err = run(["pareto", str(records), "--exclude-incomplete",
                              "--out", str(tmp_path / "o")], capsys)
        assert code == 0
        assert "excluding 'b'" in err
        front = json.loads((tmp_path / "o" / "front.json").read_text())
        assert front["optimal"] == ["a"]

    def test_no_complete_records_fails(self, table1_path, tmp_path, capsys):
        code, out, err = run(["pareto", str(table1_path), "--exclude-incomplete",
                              "--out", str(tmp_path / "o")], capsys)
        assert code == 2
        assert err.splitlines()[-1].startswith("E_INPUT:")

    def test_overwrite_needs_force(self, table2_path, tmp_path, capsys):
        out_dir = tmp_path / "o"
        assert run(["pareto", str(table2_path), "--out", str(out_dir)],
                   capsys)[0] == 0
        code, out, err = run(["pareto", str(table2_path), "--out", str(out_dir)],
                             capsys)
        assert code == 2
        assert err.startswith("E_EXISTS:")
        assert run(["pareto", str(table2_path), "--out", str(out_dir),
                    "--force"], capsys)[0] == 0

    def test_byte_identical_reruns(self, table2_path, tmp_path, capsys):
        for name in ("a", "b"):
            assert run(["pareto", str(table2_path),
                        "--out", str(tmp_path / name)], capsys)[0] == 0
        for artifact in ("report.csv", "front.json", "scatter.svg"):
            assert (tmp_path / "a" / artifact).read_bytes() == \
                (tmp_path / "b" / artifact).read_bytes()


class TestIngest:
    def test_constant_power(self, tmp_path, capsys):
        trace = tmp_path / "t.csv"
        trace.write_text("t_seconds,watts\n0,250\n3600,250\n7200,250\n")
        code, out, err = run(["ingest", str(trace), "--gap-threshold", "4000"],
                             capsys)
        assert code == 0
        assert "integrated: 500.0 Wh" in out

    def test_sing_replay_extrapolation(self, tmp_path, capsys):
        # 50 one-hour epochs at a constant 648 W, extrapolated to 100 epochs,
        # must land on 64.8 kWh.
        trace = tmp_path / "t.csv"
        lines = ["t_seconds,watts"]
        lines += [f"{600 * i},648" for i in range(301)]
        trace.write_text("\n".join(lines) + "\n")
        marks = tmp_path / "m.csv"
        marks.write_text("epoch_index,t_seconds\n" +
                         "\n".join(f"{i},{3600 * i}" for i in range(51)) + "\n")
        code, out, err = run(["ingest", str(trace), "--marks", str(marks),
                              "--total-epochs", "100",
                              "--gap-threshold", "1000"], capsys)
        assert code == 0
        extrapolated = float(out.split("extrapolated: ")[1].split(" kWh")[0])
        assert abs(extrapolated - 64.8) <= 1e-6 * 64.8

    def test_malformed_trace_has_line_number(self, tmp_path, capsys):
        trace = tmp_path / "t.csv"
        trace.write_text("0,250\n10,nope\n")
        code, out, err = run(["ingest", str(trace)], capsys)
        assert code == 2
        assert err.startswith("E_PARSE:")
        assert ":2:" in err or ":2 " in err or err.rstrip().endswith(":2") \
            or f"{trace}:2" in err

    def test_gap_warning_on_stderr(self, tmp_path, capsys):
        trace = tmp_path / "t.csv"
        trace.write_text("0,100\n3600,100\n")
        code, out, err = run(["ingest", str(trace)], capsys)
        assert code == 0
        assert "warning: trace gap" in err

    def test_marks_require_total_epochs(self, tmp_path, capsys):
        trace = tmp_path / "t.csv"
        trace.write_text("0,100\n10,100\n")
        code, out, err = run(["ingest", str(trace), "--marks", str(trace)],
                             capsys)
        assert code == 2
        assert err.startswith("E_INPUT:")


class TestFlops:
    def write_stack(self, tmp_path, payload):
        path = tmp_path / "stack.json"
        path.write_text(payload)
        return path

    def test_two_layer_linear(self, tmp_path, capsys):
        stack = self.write_stack(tmp_path, json.dumps({"layers": [
            {"kind": "linear", "in": 4, "out": 3},
            {"kind": "linear", "in": 3, "out": 2},
        ]}))
        code, out, err = run(["flops", str(stack), "--input-shape", "4"], capsys)
        assert code == 0
        assert "params: 23" in out
        assert "fpo: 36" in out

    def test_empty_stack(self, tmp_path, capsys):
        stack = self.write_stack(tmp_path, '{"layers": []}')
        code, out, err = run(["flops", str(stack), "--input-shape", "4"], capsys)
        assert code == 0
        assert "params: 0" in out and "fpo: 0" in out

    def test_unsupported_kind(self, tmp_path, capsys):
        stack = self.write_stack(tmp_path,
                                 '{"layers": [{"kind": "transformer"}]}')
        code, out, err = run(["flops", str(stack), "--input-shape", "4"], capsys)
        assert code == 2
        assert err.startswith("E_UNSUPPORTED_LAYER:")
        assert "transformer" in err

    def test_mac_factor_flag(self, tmp_path, capsys):
        stack = self.write_stack(tmp_path, json.dumps({"layers": [
            {"kind": "linear", "in": 3, "out": 2},
        ]}))
        code, out, err = run(["flops", str(stack), "--input-shape", "3",
                              "--mac-factor", "1"], capsys)
        assert code == 0
        assert "fpo: 6" in out


class TestReport:
    def test_emits_tables_fronts_and_figure(self, table2_path, tmp_path, capsys):
        out_dir = tmp_path / "o"
        code, out, err = run(["report", str(table2_path), "--out", str(out_dir)],
                             capsys)
        assert code == 0
        for name in ("report.csv", "front_training.json", "scatter_training.svg",
                     "front_generation.json", "scatter_generation.svg",
                     "fronts.svg"):
            assert (out_dir / name).exists(), name
        training = json.loads((out_dir / "front_training.json").read_text())
        assert training["dominated"][0]["label"] == "WaveFlow 3"
        generation = json.loads((out_dir / "front_generation.json").read_text())
        assert generation["dominated"] == []
        assert (out_dir / "fronts.svg").read_text().startswith("<?xml")

    def test_table_only_when_no_quality(self, table1_path, tmp_path, capsys):
        out_dir = tmp_path / "o"
        code, out, err = run(["report", str(table1_path), "--out", str(out_dir)],
                             capsys)
        assert code == 0
        assert (out_dir / "report.csv").exists()
        assert not (out_dir / "fronts.svg").exists()
        assert "skipped" in err


def test_console_entry_point_runs(table2_path, tmp_path):
    result = subprocess.run(
        [sys.executable, "-m", "greeneval", "pareto", str(table2_path),
         "--out", str(tmp_path / "o")],
        capture_output=True, text=True)
    assert result.returncode == 0
    assert "WaveFlow 3" in result.stdout


def test_version_flag(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["--version"])
    assert exc.value.code == 0
