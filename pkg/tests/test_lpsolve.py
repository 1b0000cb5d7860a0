import itertools
import random
from fractions import Fraction

import pytest

from formlift import formula as fm
from formlift import lpsolve as lp
from formlift import polytope as pt

F = Fraction


def test_optimize_rows_simple_min():
    # x + y >= 1, x >= 0, y >= 0: min x + 2y is 1 at (1, 0)
    rows = [((1, 1), 1), ((1, 0), 0), ((0, 1), 0)]
    out = lp.optimize_rows(rows, 2, (1, 2), "min")
    assert out.status == "optimal"
    assert out.value == 1
    assert out.x == (1, 0)


def test_optimize_rows_max_and_fractional_data():
    rows = [((F(1), F(0)), F(0)), ((F(-1), F(0)), F(-1, 2)),
            ((F(0), F(1)), F(0)), ((F(0), F(-1)), F(-3))]
    out = lp.optimize_rows(rows, 2, (F(2), F(1, 3)), "max")
    assert out.value == F(2, 1) * F(1, 2) + F(1, 3) * 3


def test_optimize_rows_unbounded():
    out = lp.optimize_rows([((1, 0), 0), ((0, 1), 0)], 2, (1, 1), "max")
    assert out.status == "unbounded"


def test_optimize_rows_infeasible_has_farkas():
    # x >= 1 and -x >= 0 contradict
    rows = [((1,), 1), ((-1,), 0)]
    out = lp.optimize_rows(rows, 1, (0,), "min")
    assert out.status == "infeasible"
    u = out.farkas
    assert all(v >= 0 for v in u)
    assert sum(ui * a[0] for ui, (a, _) in zip(u, rows)) == 0
    assert sum(ui * rhs for ui, (_, rhs) in zip(u, rows)) > 0


def test_duals_certify_value():
    # min x1 + x2 over x1 + x2 >= 2, x1 >= 0, x2 >= 0 (duals checked internally
    # on every solve; here the reported multipliers are inspected directly)
    rows = [((1, 1), 2), ((1, 0), 0), ((0, 1), 0)]
    out = lp.optimize_rows(rows, 2, (1, 1), "min")
    assert out.value == 2
    paid = sum(d * rhs for d, (_, rhs) in zip(out.dual, rows))
    assert paid == out.value


def test_free_variables_allowed():
    # min x subject to x >= -5 only: the variable is free, split internally
    out = lp.optimize_rows([((1,), -5)], 1, (1,), "min")
    assert out.value == -5


def test_random_lps_match_enumeration():
    # random box-bounded systems: compare against brute force over the
    # vertices of the box refined by binding constraints is overkill; instead
    # compare min over random 0/1 integer points to the LP lower bound
    rng = random.Random(21)
    for _ in range(40):
        n = rng.randint(2, 4)
        rows = [((tuple(1 if j == i else 0 for j in range(n))), 0) for i in range(n)]
        rows += [((tuple(-1 if j == i else 0 for j in range(n))), -1) for i in range(n)]
        for _ in range(rng.randint(1, 3)):
            a = tuple(rng.randint(-2, 2) for _ in range(n))
            pts = [p for p in itertools.product((0, 1), repeat=n)]
            rhs = min(sum(ai * pi for ai, pi in zip(a, p)) for p in pts)
            rows.append((a, rhs))
        c = tuple(rng.randint(-3, 3) for _ in range(n))
        out = lp.optimize_rows(rows, n, c, "min")
        assert out.status == "optimal"
        best_int = min(sum(ci * pi for ci, pi in zip(c, p))
                       for p in itertools.product((0, 1), repeat=n))
        assert out.value <= best_int
        got = sum(ci * xi for ci, xi in zip(c, out.x))
        assert got == out.value


def test_optimize_on_formulation():
    Q = pt.cube(3)
    out = lp.optimize(Q, (1, 1, 1), "min")
    assert out.value == 0
    out = lp.optimize(Q, (1, 1, 1), "max")
    assert out.value == 3
    assert out.x == (1, 1, 1)


def test_optimize_rejects_marker():
    with pytest.raises(ValueError):
        lp.optimize(pt.empty_formulation(2), (1, 1))


def test_optimize_rejects_floats():
    with pytest.raises(TypeError):
        lp.optimize(pt.cube(2), (0.5, 1))


def test_emptiness_certificates():
    out = lp.emptiness(pt.cube(2))
    assert out.status == "optimal"
    assert lp.contains_point(pt.cube(2), out.x)
    empty = pt.from_hrep(1, [((1,), 2)])  # x >= 2 inside [0,1]
    out = lp.emptiness(empty)
    assert out.status == "infeasible"
    assert out.farkas is not None
    assert lp.is_empty(empty)
    assert lp.is_empty(pt.empty_formulation(3))
    assert not lp.is_empty(pt.cube(1))


def test_feasible_point():
    assert lp.feasible_point(pt.empty_formulation(2)) is None
    x = lp.feasible_point(pt.cube(2))
    assert all(0 <= v <= 1 for v in x)


def test_contains_point():
    Q = pt.from_hrep(2, [((1, 1), 1)])
    assert lp.contains_point(Q, (1, 0))
    assert lp.contains_point(Q, (F(1, 2), F(1, 2)))
    assert not lp.contains_point(Q, (0, 0))
    assert not lp.contains_point(pt.empty_formulation(2), (0, 0))


def test_membership_through_projection():
    # lifted formulation of conv({(0,0),(1,1)}) via a disjunction
    phi = fm.parse("x1 & x2 | !x1 & !x2", 2)
    ef, _ = pt.lift(fm.reduce(phi), pt.cube(2))
    assert lp.contains_point(ef, (F(1, 2), F(1, 2)))
    assert not lp.contains_point(ef, (1, 0))
    out = lp.optimize(ef, (1, -1), "max")
    assert out.value == 0


def test_degenerate_rows_and_redundancy():
    # duplicated and implied rows must not break termination (Bland's rule)
    rows = [((1, 1), 1), ((1, 1), 1), ((2, 2), 2), ((1, 0), 0), ((0, 1), 0)]
    out = lp.optimize_rows(rows, 2, (3, 5), "min")
    assert out.value == 3


def test_equation_like_pairs():
    # x1 = 1/3 expressed as two inequalities
    rows = [((1,), F(1, 3)), ((-1,), F(-1, 3))]
    out = lp.optimize_rows(rows, 1, (5,), "min")
    assert out.value == F(5, 3)
    assert out.x == (F(1, 3),)
