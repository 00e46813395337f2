import random

import pytest

from greeneval.core import DimensionError, EvalPoint, InputError
from greeneval.pareto import dominance_matrix, dominates, pareto_front

from oracles import brute_force_front

TRAIN_SPACE = [
    ("WF1", (0.148, 407.7)),
    ("WF2", (0.136, 437.6)),
    ("WF3", (0.132, 725.4)),
    ("WF4", (0.124, 644.8)),
    ("WF5", (0.114, 1011.2)),
]
GEN_SPACE = [
    ("WF1", (0.148, 1.349)),
    ("WF2", (0.136, 1.382)),
    ("WF3", (0.132, 2.382)),
    ("WF4", (0.124, 2.512)),
    ("WF5", (0.114, 3.871)),
]


def points(pairs):
    return [EvalPoint(label=l, objectives=v) for l, v in pairs]


def random_instance(rng: random.Random, n: int, k: int, integer: bool):
    if integer:
        values = lambda: tuple(float(rng.randint(0, 3)) for _ in range(k))
    else:
        values = lambda: tuple(rng.uniform(0.0, 1.0) for _ in range(k))
    return [EvalPoint(label=f"p{i}", objectives=values()) for i in range(n)]


class TestDominates:
    def test_training_space_witness(self):
        wf4 = EvalPoint("WF4", (0.124, 644.8))
        wf3 = EvalPoint("WF3", (0.132, 725.4))
        assert dominates(wf4, wf3)
        assert not dominates(wf3, wf4)

    def test_never_dominates_itself(self):
        p = EvalPoint("p", (1.0, 2.0))
        assert not dominates(p, p)

    def test_incomparable_pair(self):
        a, b = EvalPoint("a", (1.0, 2.0)), EvalPoint("b", (2.0, 1.0))
        assert not dominates(a, b)
        assert not dominates(b, a)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionError):
            dominates(EvalPoint("a", (1.0,)), EvalPoint("b", (1.0, 2.0)))

    def test_antisymmetry_random(self):
        rng = random.Random(101)
        for _ in range(2000):
            k = rng.randint(1, 5)
            a = EvalPoint("a", tuple(rng.randint(0, 3) for _ in range(k)))
            b = EvalPoint("b", tuple(rng.randint(0, 3) for _ in range(k)))
            assert not (dominates(a, b) and dominates(b, a))

    def test_transitivity_random(self):
        rng = random.Random(102)
        hits = 0
        for _ in range(2000):
            k = rng.randint(1, 4)
            a, b, c = (EvalPoint(n, tuple(rng.randint(0, 2) for _ in range(k)))
                       for n in "abc")
            if dominates(a, b) and dominates(b, c):
                hits += 1
                assert dominates(a, c)
        assert hits > 10  # the premise must actually fire


class TestParetoFront:
    def test_training_space(self):
        front = pareto_front(points(TRAIN_SPACE))
        assert front.optimal == ("WF1", "WF2", "WF4", "WF5")
        assert len(front.dominated) == 1
        assert front.dominated[0].label == "WF3"
        assert front.dominated[0].dominated_by == ("WF4",)

    def test_generation_space_all_optimal(self):
        front = pareto_front(points(GEN_SPACE))
        assert front.optimal == ("WF1", "WF2", "WF3", "WF4", "WF5")
        assert front.dominated == ()

    def test_single_point(self):
        front = pareto_front([EvalPoint("only", (1.0, 2.0))])
        assert front.optimal == ("only",)

    def test_identical_points_both_optimal(self):
        front = pareto_front([EvalPoint("a", (1.0, 2.0)),
                              EvalPoint("b", (1.0, 2.0))])
        assert front.optimal == ("a", "b")

    def test_empty_input(self):
        front = pareto_front([])
        assert front.optimal == () and front.dominated == ()

    def test_duplicate_labels_rejected(self):
        with pytest.raises(InputError, match="duplicate"):
            pareto_front([EvalPoint("x", (1.0,)), EvalPoint("x", (2.0,))])

    def test_mixed_dimensions_rejected(self):
        with pytest.raises(DimensionError):
            pareto_front([EvalPoint("a", (1.0,)), EvalPoint("b", (1.0, 2.0))])

    def test_one_dimensional_total_order(self):
        front = pareto_front([EvalPoint("a", (3.0,)), EvalPoint("b", (1.0,)),
                              EvalPoint("c", (1.0,)), EvalPoint("d", (2.0,))])
        assert front.optimal == ("b", "c")
        by_label = {d.label: d.dominated_by for d in front.dominated}
        assert by_label == {"a": ("b", "c", "d"), "d": ("b", "c")}

    @pytest.mark.parametrize("integer", [False, True])
    @pytest.mark.parametrize("k", [1, 2, 3, 5])
    def test_matches_brute_force(self, k, integer):
        rng = random.Random(1000 * k + integer)
        for _ in range(15):
            pts = random_instance(rng, rng.randint(1, 120), k, integer)
            front = pareto_front(pts)
            want_optimal, want_dominators = brute_force_front(
                [p.objectives for p in pts])
            assert set(front.optimal) == {pts[i].label for i in want_optimal}
            got = {d.label: set(d.dominated_by) for d in front.dominated}
            want = {pts[i].label: {pts[j].label for j in js}
                    for i, js in want_dominators.items()}
            assert got == want

    def test_permutation_invariance(self):
        rng = random.Random(7)
        pts = random_instance(rng, 60, 2, integer=True)
        base = pareto_front(pts)
        for _ in range(10):
            shuffled = pts[:]
            rng.shuffle(shuffled)
            front = pareto_front(shuffled)
            assert set(front.optimal) == set(base.optimal)
            assert {d.label: set(d.dominated_by) for d in front.dominated} \
                == {d.label: set(d.dominated_by) for d in base.dominated}

    def test_affine_rescaling_invariance(self):
        rng = random.Random(8)
        for _ in range(20):
            k = rng.randint(2, 4)
            pts = random_instance(rng, 40, k, integer=rng.random() < 0.5)
            base = pareto_front(pts)
            axis = rng.randrange(k)
            alpha, beta = rng.uniform(0.1, 10.0), rng.uniform(-5.0, 5.0)
            rescaled = [
                EvalPoint(p.label, tuple(
                    alpha * v + beta if i == axis else v
                    for i, v in enumerate(p.objectives)))
                for p in pts
            ]
            front = pareto_front(rescaled)
            assert set(front.optimal) == set(base.optimal)

    def test_adding_point_never_rescues_dominated(self):
        rng = random.Random(9)
        for _ in range(30):
            pts = random_instance(rng, 30, 2, integer=True)
            before = set(pareto_front(pts).dominated_labels)
            extra = EvalPoint("extra", (float(rng.randint(0, 3)),
                                        float(rng.randint(0, 3))))
            after = set(pareto_front(pts + [extra]).dominated_labels)
            assert before <= after


class TestDominanceMatrix:
    def test_training_space_single_true_cell(self):
        matrix = dominance_matrix(points(TRAIN_SPACE))
        true_cells = [(i, j) for i in range(5) for j in range(5) if matrix[i][j]]
        assert true_cells == [(3, 2)]  # WF4 -> WF3

    def test_empty(self):
        assert dominance_matrix([]) == []

    def test_one_dimensional_chain_upper_triangular(self):
        pts = [EvalPoint(n, (v,)) for n, v in zip("abc", (1.0, 2.0, 3.0))]
        matrix = dominance_matrix(pts)
        assert matrix == [[False, True, True],
                          [False, False, True],
                          [False, False, False]]

    def test_diagonal_false_and_antisymmetric(self):
        rng = random.Random(10)
        pts = random_instance(rng, 40, 3, integer=True)
        matrix = dominance_matrix(pts)
        for i in range(40):
            assert matrix[i][i] is False
            for j in range(40):
                assert not (matrix[i][j] and matrix[j][i])
