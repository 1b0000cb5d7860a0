"""Exact rational linear programming by a two-phase primal simplex.

All arithmetic is exact (gmpy2.mpq when available, fractions.Fraction
otherwise); Bland's rule guarantees termination.  Every answer carries an
exact certificate that is re-verified before it is returned: an optimal
solve checks primal feasibility, dual feasibility and strong duality, an
infeasible solve checks its Farkas vector.  A failed check raises
InternalError rather than returning a wrong answer.

The public entry points work either on a lifted formulation object (duck
typed: fields n, ydim, rows, proj, empty_marker) or on plain dense
inequality rows in x-space.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

try:
    from gmpy2 import mpq as _Q
except ImportError:  # pragma: no cover
    _Q = Fraction

_ZERO = _Q(0)
_ONE = _Q(1)


class InternalError(RuntimeError):
    """An exact self-check on a computed LP certificate failed."""


def _q(v):
    if isinstance(v, float):
        raise TypeError("floating point input is not accepted; pass int, str or Fraction")
    if isinstance(v, Fraction):
        return _Q(v.numerator, v.denominator)
    return _Q(v)


def _frac(q) -> Fraction:
    return Fraction(int(q.numerator), int(q.denominator))


@dataclass(frozen=True)
class LpOutcome:
    """Result of one exact solve.

    `value` and `x` are in the caller's space and sense.  `dual` certifies
    the minimized objective (the negated one when sense was max): it is a
    nonnegative row multiplier vector with dual·A = c and dual·rhs = value.
    `farkas` certifies infeasibility: nonnegative, farkas·A = 0 and
    farkas·rhs > 0.  Both are indexed by the constraint rows as given.
    """

    status: str  # "optimal" | "infeasible" | "unbounded"
    value: Fraction | None = None
    x: tuple | None = None
    y: tuple | None = None
    dual: tuple | None = None
    farkas: tuple | None = None


# ---------------------------------------------------------------------------
# core solver on sparse rows over free variables


def _pivot(tab, bvec, basis, cost, cval, pr, pc):
    prow = tab[pr]
    pv = prow[pc]
    if pv != _ONE:
        for c in list(prow):
            prow[c] /= pv
        bvec[pr] /= pv
    for i, row in enumerate(tab):
        if i == pr:
            continue
        f = row.get(pc)
        if f:
            for c, v in prow.items():
                nv = row.get(c, _ZERO) - f * v
                if nv:
                    row[c] = nv
                else:
                    row.pop(c, None)
            bvec[i] -= f * bvec[pr]
    f = cost.get(pc)
    if f:
        cval += f * bvec[pr]
        for c, v in prow.items():
            nv = cost.get(c, _ZERO) - f * v
            if nv:
                cost[c] = nv
            else:
                cost.pop(c, None)
    basis[pr] = pc
    return cval


def _run(tab, bvec, basis, cost, cval, col_limit):
    """Minimize with Bland's rule; entering columns must be < col_limit."""
    while True:
        pc = min((c for c, v in cost.items() if v < 0 and c < col_limit), default=None)
        if pc is None:
            return cval, "optimal"
        best = None
        for i, row in enumerate(tab):
            a = row.get(pc)
            if a is not None and a > 0:
                key = (bvec[i] / a, basis[i])
                if best is None or key < best[0]:
                    best = (key, i)
        if best is None:
            return cval, "unbounded"
        cval = _pivot(tab, bvec, basis, cost, cval, best[1], pc)


def _solve(rows, dim, obj):
    """Minimize sum(obj[j]*z_j) over {z free : pairs·z >= rhs for each row}.

    rows: sequence of (pairs, rhs), pairs = ((index, coef), ...).
    obj: dict index -> coef.  Returns (status, value, z, dual, farkas),
    exact and self-verified.
    """
    m = len(rows)
    SLACK = 2 * dim
    ART = SLACK + m

    tab = []
    bvec = []
    basis = []
    art_rows = []
    qrows = []
    for i, (pairs, rhs) in enumerate(rows):
        beta = _q(rhs)
        acc = {}
        for j, coef in pairs:
            c = _q(coef)
            if c:
                acc[j] = acc.get(j, _ZERO) + c
        qrows.append((acc, beta))
        # a·z - s_i = beta; flip so the slack can start basic when beta <= 0
        f = -1 if beta <= 0 else 1
        row = {}
        for j, c in acc.items():
            if c:
                row[2 * j] = f * c
                row[2 * j + 1] = -f * c
        row[SLACK + i] = _Q(-f)
        tab.append(row)
        bvec.append(f * beta)
        if f > 0:
            row[ART + i] = _ONE
            basis.append(ART + i)
            art_rows.append(i)
        else:
            basis.append(SLACK + i)

    # Phase 1: drive the artificials to zero.
    if art_rows:
        cost = {}
        cval = _ZERO
        for i in art_rows:
            cval += bvec[i]
            for c, v in tab[i].items():
                if c < ART:
                    nv = cost.get(c, _ZERO) - v
                    if nv:
                        cost[c] = nv
                    else:
                        cost.pop(c, None)
        cval, status = _run(tab, bvec, basis, cost, cval, ART)
        if status != "optimal":
            raise InternalError("phase one cannot be unbounded")
        if cval > 0:
            farkas = tuple(_frac(cost.get(SLACK + i, _ZERO)) for i in range(m))
            _check_farkas(qrows, farkas, dim)
            return "infeasible", None, None, None, farkas
        # Pivot leftover artificials out; rows that go all-zero are redundant.
        keep = []
        for r in range(m):
            if basis[r] >= ART:
                pc = min((c for c in tab[r] if c < ART and tab[r][c]), default=None)
                if pc is None:
                    continue
                _pivot(tab, bvec, basis, cost, _ZERO, r, pc)
            keep.append(r)
        if len(keep) < m:
            tab = [tab[r] for r in keep]
            bvec = [bvec[r] for r in keep]
            basis = [basis[r] for r in keep]

    # Phase 2.
    cost = {}
    for j, c in obj.items():
        c = _q(c)
        if c:
            cost[2 * j] = c
            cost[2 * j + 1] = -c
    cval = _ZERO
    for i, row in enumerate(tab):
        f = cost.get(basis[i])
        if f:
            cval += f * bvec[i]
            for c, v in row.items():
                nv = cost.get(c, _ZERO) - f * v
                if nv:
                    cost[c] = nv
                else:
                    cost.pop(c, None)
    cval, status = _run(tab, bvec, basis, cost, cval, ART)
    if status != "optimal":
        return "unbounded", None, None, None, None

    vals = {}
    for i, col in enumerate(basis):
        vals[col] = bvec[i]
    z = tuple(_frac(vals.get(2 * j, _ZERO) - vals.get(2 * j + 1, _ZERO)) for j in range(dim))
    value = _frac(cval)
    dual = tuple(_frac(cost.get(SLACK + i, _ZERO)) for i in range(m))
    _check_optimal(qrows, dim, obj, value, z, dual)
    return "optimal", value, z, dual, None


def _check_farkas(qrows, farkas, dim):
    comb = [Fraction(0)] * dim
    gain = Fraction(0)
    for (acc, beta), u in zip(qrows, farkas):
        if u < 0:
            raise InternalError("negative Farkas multiplier")
        if u:
            for j, c in acc.items():
                comb[j] += u * _frac(c)
            gain += u * _frac(beta)
    if any(v != 0 for v in comb) or gain <= 0:
        raise InternalError("Farkas certificate does not refute the system")


def _check_optimal(qrows, dim, obj, value, z, dual):
    comb = [Fraction(0)] * dim
    paid = Fraction(0)
    for (acc, beta), lam in zip(qrows, dual):
        lhs = sum((_frac(c) * z[j] for j, c in acc.items()), Fraction(0))
        if lhs < _frac(beta):
            raise InternalError("reported optimum violates a constraint")
        if lam < 0:
            raise InternalError("negative dual multiplier")
        if lam:
            for j, c in acc.items():
                comb[j] += lam * _frac(c)
            paid += lam * _frac(beta)
    cobj = {j: _frac(_q(c)) for j, c in obj.items()}
    got = sum((cobj.get(j, Fraction(0)) * z[j] for j in range(dim)), Fraction(0))
    if got != value:
        raise InternalError("objective value disagrees with the reported point")
    if any(comb[j] != cobj.get(j, Fraction(0)) for j in range(dim)) or paid != value:
        raise InternalError("dual certificate does not prove optimality")


# ---------------------------------------------------------------------------
# public entry points


def optimize_rows(rows, dim, c, sense: str = "min") -> LpOutcome:
    """Optimize a linear objective over {x : a·x >= rhs} given dense rows."""
    if sense not in ("min", "max"):
        raise ValueError(f"sense must be 'min' or 'max', not {sense!r}")
    srows = []
    for a, rhs in rows:
        a = tuple(a)
        if len(a) != dim:
            raise ValueError("row length does not match dimension")
        srows.append((tuple((j, v) for j, v in enumerate(a) if v != 0), rhs))
    c = tuple(c)
    if len(c) != dim:
        raise ValueError("objective length does not match dimension")
    flip = -1 if sense == "max" else 1
    obj = {j: flip * v for j, v in enumerate(c) if v != 0}
    status, value, z, dual, farkas = _solve(srows, dim, obj)
    if status == "optimal":
        return LpOutcome("optimal", flip * value, z, None, dual, None)
    if status == "infeasible":
        return LpOutcome("infeasible", farkas=farkas)
    return LpOutcome("unbounded")


def _y_objective(Q, c):
    obj = {}
    const = Fraction(0)
    for ci, (pairs, off) in zip(c, Q.proj):
        if ci == 0:
            continue
        const += ci * off
        for j, coef in pairs:
            obj[j] = obj.get(j, Fraction(0)) + ci * coef
    return {j: v for j, v in obj.items() if v != 0}, const


def _project(Q, y):
    out = []
    for pairs, off in Q.proj:
        out.append(sum((coef * y[j] for j, coef in pairs), Fraction(0)) + off)
    return tuple(out)


def optimize(Q, c, sense: str = "min") -> LpOutcome:
    """Optimize c·x over the projection of a lifted formulation.

    The solve happens in the lifted variables; `x` is the projected
    optimizer and `y` the lifted one.  The empty marker is rejected: callers
    decide emptiness first (the lift constructors already guarantee that a
    non-marker result is nonempty).  A lifted formulation describes a
    polytope, so an unbounded answer means the formulation is corrupted and
    raises InternalError.
    """
    if sense not in ("min", "max"):
        raise ValueError(f"sense must be 'min' or 'max', not {sense!r}")
    c = tuple(Fraction(v) if not isinstance(v, float) else _bad(v) for v in c)
    if len(c) != Q.n:
        raise ValueError("objective length does not match the variable count")
    if Q.empty_marker:
        raise ValueError("cannot optimize over the empty marker")
    flip = -1 if sense == "max" else 1
    obj, const = _y_objective(Q, tuple(flip * v for v in c))
    status, value, y, dual, farkas = _solve(Q.rows, Q.ydim, obj)
    if status == "unbounded":
        raise InternalError("lifted formulations are bounded; unbounded solve")
    if status == "infeasible":
        return LpOutcome("infeasible", farkas=farkas)
    return LpOutcome("optimal", flip * (value + const), _project(Q, y), y, dual, None)


def _bad(v):
    raise TypeError("floating point input is not accepted; pass int, str or Fraction")


def emptiness(Q) -> LpOutcome:
    """Emptiness test with certificate.

    Returns the outcome of a zero-objective solve: "optimal" carries a
    feasible lifted point (and its projection) witnessing nonemptiness,
    "infeasible" carries a Farkas combination of the rows.  The marker is
    reported infeasible with no certificate; its single row 0 >= 1 is its
    own refutation.
    """
    if Q.empty_marker:
        return LpOutcome("infeasible")
    status, value, y, dual, farkas = _solve(Q.rows, Q.ydim, {})
    if status == "infeasible":
        return LpOutcome("infeasible", farkas=farkas)
    return LpOutcome("optimal", Fraction(0), _project(Q, y), y, dual, None)


def is_empty(Q) -> bool:
    """Exact emptiness test for a lifted formulation."""
    return emptiness(Q).status == "infeasible"


def feasible_point(Q):
    """Some point of the projected set, or None when empty."""
    out = emptiness(Q)
    return out.x if out.status == "optimal" else None


def contains_point(Q, x) -> bool:
    """Exact membership of an x-space point in the projected set."""
    x = tuple(Fraction(v) if not isinstance(v, float) else _bad(v) for v in x)
    if len(x) != Q.n:
        raise ValueError("point length does not match the variable count")
    if Q.empty_marker:
        return False
    rows = list(Q.rows)
    for xi, (pairs, off) in zip(x, Q.proj):
        rhs = xi - off
        rows.append((pairs, rhs))
        rows.append((tuple((j, -coef) for j, coef in pairs), -rhs))
    status, *_ = _solve(rows, Q.ydim, {})
    return status == "optimal"
