"""Command-line front-end: estimate, pareto, ingest, flops, report.

Every command is deterministic (same inputs and flags give byte-identical
outputs), never mutates its input files, and fails with a single-line
``E_CODE: message`` on stderr plus a nonzero exit code.
"""

from __future__ import annotations

import argparse
import difflib
import sys
import warnings
from pathlib import Path

from . import __version__
from .catalog import Catalog, load_catalog_file, seed_catalog
from .core import (
    DomainError,
    EvalPoint,
    HardwareSpec,
    InputError,
    OutputExistsError,
    ToolError,
    UnknownHardwareError,
)
from .energy import worst_case_kwh
from .flops import TensorShape, layer_fpo, layer_params, output_shape, \
    parse_stack_file, stack_totals
from .pareto import FrontResult, pareto_front
from .power import extrapolate_training, integrate_trace, parse_marks_file, \
    parse_trace_file
from .records import Dataset, OBJECTIVES, load_records_file, objective_value, \
    with_estimated_training_energy, write_records
from .report import ReportSpec, emit_scatter, emit_table, format_number, \
    front_document

MEASURED_METHOD = "measured"

PARETO_SPACES = (("training", ("quality_loss", "e_train_kwh")),
                 ("generation", ("quality_loss", "e_gen_wh")))


def _load_catalog_arg(path: str | None) -> Catalog:
    if path is None:
        return seed_catalog()
    return load_catalog_file(path)


def _prepare_out(out_dir: str, names: list[str], force: bool) -> dict[str, Path]:
    directory = Path(out_dir)
    directory.mkdir(parents=True, exist_ok=True)
    paths = {name: directory / name for name in names}
    if not force:
        existing = [str(p) for p in paths.values() if p.exists()]
        if existing:
            raise OutputExistsError(
                f"output file(s) already exist: {', '.join(existing)} "
                f"(pass --force to overwrite)")
    return paths


def _write(path: Path, text: str) -> None:
    path.write_text(text, encoding="utf-8")
    print(f"wrote {path}")


# ---------------------------------------------------------------------------
# estimate
# ---------------------------------------------------------------------------

def cmd_estimate(args: argparse.Namespace) -> int:
    catalog = _load_catalog_arg(args.catalog)
    dataset = load_records_file(args.records)
    paths = _prepare_out(args.out, ["estimated.csv"], args.force)

    augmented = []
    for record in dataset.records:
        if record.e_train_kwh is not None:
            method = record.e_train_method or MEASURED_METHOD
            augmented.append(with_estimated_training_energy(
                record, record.e_train_kwh, method))
            print(f"{record.label}: {format_number(record.e_train_kwh, 1)} kWh "
                  f"({method})")
            continue
        if record.hardware is None:
            raise InputError(
                f"record {record.label!r} names no hardware; cannot estimate")
        entry = catalog.lookup(record.hardware.name)
        if entry is None:
            known = catalog.known_names()
            nearest = difflib.get_close_matches(
                record.hardware.name, known, n=3, cutoff=0.3) or known
            raise UnknownHardwareError(
                f"hardware {record.hardware.name!r} (record {record.label!r}) "
                f"not found in catalog; nearest entries: {', '.join(nearest)}")
        if record.train_hours is None:
            raise DomainError(
                f"record {record.label!r} has no train_hours; cannot estimate")
        estimate = worst_case_kwh(
            HardwareSpec(name=entry.name, max_power_watts=entry.max_power_watts,
                         count=record.hardware.count),
            record.train_hours)
        augmented.append(with_estimated_training_energy(
            record, estimate.kwh, estimate.method.value))
        print(f"{record.label}: {format_number(estimate.kwh, 1)} kWh "
              f"({estimate.method.value})")

    _write(paths["estimated.csv"],
           write_records(Dataset(records=tuple(augmented), source=dataset.source)))
    return 0


# ---------------------------------------------------------------------------
# pareto
# ---------------------------------------------------------------------------

def _collect_points(dataset: Dataset, objectives: list[str],
                    exclude_incomplete: bool):
    included_records, points = [], []
    for record in dataset.records:
        values, missing = [], []
        for key in objectives:
            value = objective_value(record, key)
            if value is None:
                missing.append(key)
            else:
                values.append(value)
        if missing:
            if not exclude_incomplete:
                raise InputError(
                    f"record {record.label!r} is missing objective(s) "
                    f"{', '.join(missing)}; pass --exclude-incomplete to drop "
                    f"such records")
            print(f"warning: excluding {record.label!r}: missing "
                  f"{', '.join(missing)}", file=sys.stderr)
            continue
        included_records.append(record)
        points.append(EvalPoint(label=record.label, objectives=tuple(values)))
    return included_records, points


def _parse_objectives(flag: str) -> list[str]:
    keys = [k.strip() for k in flag.split(",") if k.strip()]
    if not keys:
        raise InputError("at least one objective is required")
    if len(set(keys)) != len(keys):
        raise InputError(f"objectives must be distinct, got {flag!r}")
    for key in keys:
        if key not in OBJECTIVES:
            raise InputError(f"unknown objective {key!r}; available objectives: "
                             f"{', '.join(sorted(OBJECTIVES))}")
    return keys


def _contextual_spec(keys: list[str], records) -> ReportSpec:
    # Generation energy is only meaningful relative to its workload, so the
    # label carries the records' workload description when they agree on one.
    spec = ReportSpec.for_objectives(keys)
    if "e_gen_wh" not in keys:
        return spec
    descs = {r.gen_workload_desc for r in records if r.gen_workload_desc}
    if len(descs) != 1:
        return spec
    labels = list(spec.objective_labels)
    labels[keys.index("e_gen_wh")] = f"E_gen (Wh per {descs.pop()})"
    return ReportSpec(objectives=spec.objectives,
                      objective_labels=tuple(labels),
                      rounding=spec.rounding, formats=spec.formats)


def _print_front(front: FrontResult) -> None:
    print(f"optimal: {', '.join(front.optimal) or 'none'}")
    if front.dominated:
        for d in front.dominated:
            print(f"dominated: {d.label} (dominated by "
                  f"{', '.join(d.dominated_by)})")
    else:
        print("dominated: none")


def cmd_pareto(args: argparse.Namespace) -> int:
    objectives = _parse_objectives(args.objectives)
    dataset = load_records_file(args.records)
    included, points = _collect_points(dataset, objectives,
                                       args.exclude_incomplete)
    if not points:
        raise InputError("no records with a complete set of the selected "
                         "objectives")
    front = pareto_front(points)
    spec = _contextual_spec(objectives, included)

    names = ["report.csv", "front.json"]
    two_dimensional = len(objectives) == 2
    if two_dimensional:
        names.append("scatter.svg")
    paths = _prepare_out(args.out, names, args.force)

    _print_front(front)
    _write(paths["report.csv"], emit_table(included, spec))
    _write(paths["front.json"], front_document(front, points, spec))
    if two_dimensional:
        _write(paths["scatter.svg"], emit_scatter(front, points, spec))
    else:
        print(f"note: scatter image skipped ({len(objectives)} objective(s), "
              f"needs exactly 2)", file=sys.stderr)
    return 0


# ---------------------------------------------------------------------------
# ingest
# ---------------------------------------------------------------------------

def cmd_ingest(args: argparse.Namespace) -> int:
    if (args.marks is None) != (args.total_epochs is None):
        raise InputError("--marks and --total-epochs must be given together")
    trace = parse_trace_file(args.trace)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        integrated = integrate_trace(trace, gap_threshold_s=args.gap_threshold)
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    print(f"integrated: {integrated.wh} Wh ({integrated.kwh} kWh) "
          f"[{integrated.method.value}]")
    if args.marks is not None:
        marks = parse_marks_file(args.marks)
        predicted = extrapolate_training(trace, marks, args.total_epochs)
        print(f"extrapolated: {predicted.kwh} kWh for {args.total_epochs} "
              f"epochs from {len(marks) - 1} completed "
              f"[{predicted.method.value}]")
    return 0


# ---------------------------------------------------------------------------
# flops
# ---------------------------------------------------------------------------

def _parse_shape(flag: str) -> TensorShape:
    try:
        dims = tuple(int(part) for part in flag.split(","))
    except ValueError:
        raise InputError(f"--input-shape must be comma-separated integers, "
                         f"got {flag!r}") from None
    return TensorShape(dims)


def cmd_flops(args: argparse.Namespace) -> int:
    layers = parse_stack_file(args.stack)
    shape = _parse_shape(args.input_shape)
    totals = stack_totals(layers, shape, mac_factor=args.mac_factor)

    fmt_shape = lambda s: "x".join(str(d) for d in s.dims)
    print("layer  kind      params      fpo         out_shape")
    print(f"input  -         -           -           {fmt_shape(shape)}")
    current = shape
    for i, layer in enumerate(layers):
        fpo = layer_fpo(layer, current, mac_factor=args.mac_factor)
        current = output_shape(layer, current)
        print(f"{i:<6d} {layer.kind:<9s} {layer_params(layer):<11d} "
              f"{fpo:<11d} {fmt_shape(current)}")
    print(f"params: {totals.params}")
    print(f"fpo: {totals.fpo}")
    if args.mac_factor == 2:
        print("convention: multiply-accumulate = 2 FPO; forward pass only; "
              "activations excluded")
    else:
        print("convention: multiplications only (mac-factor 1); forward pass "
              "only; activations excluded")
    return 0


# ---------------------------------------------------------------------------
# report
# ---------------------------------------------------------------------------

def cmd_report(args: argparse.Namespace) -> int:
    from .figures import render_front_panels

    dataset = load_records_file(args.records)
    present = [key for key in ("quality_loss", "e_train_kwh", "e_gen_wh",
                               "param_count", "train_hours")
               if any(objective_value(r, key) is not None
                      for r in dataset.records)]
    if not present:
        raise InputError("records carry no reportable numeric columns")

    spaces = []
    for name, keys in PARETO_SPACES:
        rows = [(r, [objective_value(r, k) for k in keys])
                for r in dataset.records]
        complete = [(r, vals) for r, vals in rows
                    if all(v is not None for v in vals)]
        skipped = len(rows) - len(complete)
        if not complete:
            print(f"note: {name} space skipped (no records with "
                  f"{' and '.join(keys)})", file=sys.stderr)
            continue
        if skipped:
            print(f"warning: {name} space drops {skipped} record(s) with "
                  f"missing objectives", file=sys.stderr)
        spaces.append((name, keys, complete))

    names = ["report.csv"]
    for name, _, _ in spaces:
        names.extend([f"front_{name}.json", f"scatter_{name}.svg"])
    if spaces:
        names.append("fronts.svg")
    paths = _prepare_out(args.out, names, args.force)

    _write(paths["report.csv"],
           emit_table(dataset.records, ReportSpec.for_objectives(present)))

    panels = []
    for name, keys, complete in spaces:
        points = [EvalPoint(label=r.label, objectives=tuple(vals))
                  for r, vals in complete]
        front = pareto_front(points)
        spec = _contextual_spec(list(keys), [r for r, _ in complete])
        print(f"{name} space:")
        _print_front(front)
        _write(paths[f"front_{name}.json"], front_document(front, points, spec))
        _write(paths[f"scatter_{name}.svg"], emit_scatter(front, points, spec))
        panels.append((front, points, spec, f"{name} cost"))
    if panels:
        render_front_panels(panels, paths["fronts.svg"])
        print(f"wrote {paths['fronts.svg']}")
    return 0


# ---------------------------------------------------------------------------
# Parser wiring
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="greeneval",
        description="Evaluate models jointly on quality and energy: "
                    "worst-case energy estimation, power-trace ingestion, "
                    "parameter/FPO counting, and Pareto-front reports.")
    parser.add_argument("--version", action="version",
                        version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    est = sub.add_parser("estimate",
                         help="fill worst-case training energy from a catalog")
    est.add_argument("records", help="records CSV file")
    est.add_argument("--catalog", metavar="PATH",
                     help="hardware catalog (JSON Lines); default: built-in")
    est.add_argument("--out", metavar="DIR", default="out",
                     help="output directory (default: out)")
    est.add_argument("--force", action="store_true",
                     help="overwrite existing output files")
    est.set_defaults(func=cmd_estimate)

    par = sub.add_parser("pareto",
                         help="classify records into optimal/dominated sets")
    par.add_argument("records", help="records CSV file")
    par.add_argument("--objectives", metavar="LIST",
                     default="quality_loss,e_train_kwh",
                     help="comma-separated objective columns "
                          "(default: quality_loss,e_train_kwh)")
    par.add_argument("--exclude-incomplete", action="store_true",
                     help="drop records missing a selected objective "
                          "(with a warning) instead of failing")
    par.add_argument("--out", metavar="DIR", default="out")
    par.add_argument("--force", action="store_true")
    par.set_defaults(func=cmd_pareto)

    ing = sub.add_parser("ingest",
                         help="integrate a power trace and predict training "
                              "energy")
    ing.add_argument("trace", help="power trace CSV file (t_seconds,watts)")
    ing.add_argument("--marks", metavar="PATH",
                     help="epoch marks CSV file (epoch_index,t_seconds)")
    ing.add_argument("--total-epochs", type=int, metavar="N",
                     help="planned epoch count for extrapolation")
    ing.add_argument("--gap-threshold", type=float, default=60.0,
                     metavar="SECONDS",
                     help="warn when sample spacing exceeds this (default 60)")
    ing.set_defaults(func=cmd_ingest)

    flo = sub.add_parser("flops",
                         help="count parameters and floating-point operations")
    flo.add_argument("stack", help="layer-stack JSON file")
    flo.add_argument("--input-shape", required=True, metavar="DIMS",
                     help="comma-separated input shape without batch "
                          "dimension, e.g. 1,100")
    flo.add_argument("--mac-factor", type=int, choices=(1, 2), default=2,
                     help="FPO per multiply-accumulate (default 2)")
    flo.set_defaults(func=cmd_flops)

    rep = sub.add_parser("report",
                         help="emit the full table, fronts, and figures for "
                              "a records file")
    rep.add_argument("records", help="records CSV file")
    rep.add_argument("--out", metavar="DIR", default="out")
    rep.add_argument("--force", action="store_true")
    rep.set_defaults(func=cmd_report)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ToolError as exc:
        print(f"{exc.code}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
