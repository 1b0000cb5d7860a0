"""Pitch and notch of valid 0/1 inequalities, and exact closure oracles.

An inequality a·x >= rhs over 0/1 variables is put in standard form

    sum_{i in pos} c_i x_i + sum_{i in neg} c_i (1 - x_i) >= delta

with pos/neg a partition of the variables, all c_i >= 0 and delta >= 0.
The pitch is the least p such that the p smallest nonzero coefficients
already add up to delta; the notch counts zero coefficients as well, so
pitch <= notch.  A 0/1 set also has a notch: the smallest k such that every
k-dimensional face of the cube contains one of its points.

The closure oracles search, completely within their scope, for a valid
inequality of bounded pitch or notch that a relaxation violates: for each
support (pitch mode, uncomplemented) or complementation pattern (notch
mode), the feasible coefficient vectors with delta normalized to 1 form a
polyhedron whose vertices are enumerated exactly, and each vertex is priced
against the relaxation with an exact LP.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from . import formula as fm
from . import hull, lpsolve

PITCH_SEARCH_LIMIT = 8
NOTCH_SEARCH_LIMIT = 6
FACE_LIMIT = 8


def _frac(v) -> Fraction:
    if isinstance(v, float):
        raise TypeError("floating point input is not accepted; pass int, str or Fraction")
    return Fraction(v)


@dataclass(frozen=True)
class StandardFormInequality:
    """Standard form with `neg` the complemented (1-based) indices."""

    n: int
    neg: tuple
    coeffs: tuple
    delta: Fraction

    @property
    def pos(self) -> tuple:
        ns = set(self.neg)
        return tuple(i for i in range(1, self.n + 1) if i not in ns)

    @property
    def support(self) -> tuple:
        return tuple(i for i in range(1, self.n + 1) if self.coeffs[i - 1] != 0)

    def lhs(self, point) -> Fraction:
        ns = set(self.neg)
        total = Fraction(0)
        for i in range(1, self.n + 1):
            v = _frac(point[i - 1])
            total += self.coeffs[i - 1] * ((1 - v) if i in ns else v)
        return total

    def as_row(self):
        """The same inequality as a plain dense row (a, rhs) over x."""
        ns = set(self.neg)
        a = tuple(-c if i in ns else c for i, c in enumerate(self.coeffs, start=1))
        rhs = self.delta - sum(self.coeffs[i - 1] for i in self.neg)
        return a, rhs

    def is_valid_on(self, points) -> bool:
        return all(self.lhs(p) >= self.delta for p in points)


def std_line(q: StandardFormInequality) -> str:
    """One-line serialization: std I+ {..} I- {..} c .. delta .."""
    def fmt(v):
        v = Fraction(v)
        return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
    pos = ",".join(str(i) for i in q.pos)
    neg = ",".join(str(i) for i in q.neg)
    cs = " ".join(fmt(c) for c in q.coeffs)
    return f"std I+ {{{pos}}} I- {{{neg}}} c {cs} delta {fmt(q.delta)}"


def to_standard_form(a, rhs):
    """Rewrite a·x >= rhs in standard form; None when it holds on all of [0,1]^n.

    Complemented indices are exactly those with a_i < 0, so every
    coefficient becomes nonnegative; the right side shifts accordingly.
    A shifted right side below zero means the inequality is trivial.
    """
    a = tuple(_frac(v) for v in a)
    rhs = _frac(rhs)
    neg = tuple(i for i, v in enumerate(a, start=1) if v < 0)
    delta = rhs - sum(a[i - 1] for i in neg)
    if delta < 0:
        return None
    return StandardFormInequality(len(a), neg, tuple(abs(v) for v in a), delta)


def pitch_of(ineq: StandardFormInequality) -> int:
    """Least p with the p smallest nonzero coefficients summing to delta.

    0 when delta <= 0.  Raises when even the full support sum stays below
    delta: then no 0/1 point satisfies the inequality and the measure is
    undefined.
    """
    if ineq.delta <= 0:
        return 0
    total = Fraction(0)
    for p, c in enumerate(sorted(c for c in ineq.coeffs if c != 0), start=1):
        total += c
        if total >= ineq.delta:
            return p
    raise ValueError("full-support sum below delta; pitch undefined")


def notch_of(ineq: StandardFormInequality) -> int:
    """Least p with the p smallest coefficients (zeros included) summing to delta."""
    if ineq.delta <= 0:
        return 0
    total = Fraction(0)
    for p, c in enumerate(sorted(ineq.coeffs), start=1):
        total += c
        if total >= ineq.delta:
            return p
    raise ValueError("full-support sum below delta; notch undefined")


def is_valid(q: StandardFormInequality, S: fm.PointSet01) -> bool:
    """Exact validity of a standard-form inequality on every point of S."""
    if q.n != S.n:
        raise ValueError(f"dimension mismatch: inequality {q.n}, points {S.n}")
    return q.is_valid_on(S.points)


def notch_of_set(S: fm.PointSet01, limit: int = FACE_LIMIT) -> int:
    """Smallest k such that every k-dimensional cube face contains a point of S.

    0 exactly when S is all of {0,1}^n; at most n for nonempty S since the
    cube itself is an n-face.  Enumerates all 3^n faces; S must be nonempty.
    """
    n = S.n
    if n > limit:
        raise ValueError(f"dimension {n} exceeds face enumeration limit {limit}")
    if not S.points:
        raise ValueError("the notch of the empty set is undefined")
    pts = set(S.points)
    for k in range(n + 1):
        ok = True
        for free in itertools.combinations(range(n), k):
            fixed = [i for i in range(n) if i not in free]
            for vals in itertools.product((0, 1), repeat=len(fixed)):
                if not any(all(s[i] == v for i, v in zip(fixed, vals)) for s in pts):
                    ok = False
                    break
            if not ok:
                break
        if ok:
            return k
    raise AssertionError("unreachable: the full cube contains every point of S")


# ---------------------------------------------------------------------------
# closure oracles


@dataclass(frozen=True)
class ClosureQuery:
    """One closure question: does relaxation R violate some valid inequality?

    `mode` is "pitch" (uncomplemented inequalities, every coefficient
    support, smallest supports first) or "notch" (every complementation
    pattern); `level` bounds the measure.  `S` is the 0/1 set the
    inequalities must be valid for and `R` the relaxation to price against.
    `supports` / `sign_patterns` restrict the search to the given 1-based
    index tuples; `limit` caps the ambient dimension (default 8 for pitch,
    6 for notch; above the cap the oracle refuses rather than subsample).
    """

    mode: str
    level: int
    S: fm.PointSet01
    R: object
    supports: tuple | None = None
    sign_patterns: tuple | None = None
    limit: int | None = None


@dataclass(frozen=True)
class Violation:
    """A valid inequality of bounded measure that the relaxation cuts off.

    In standard form with delta = 1: coefficient i is complemented iff i is
    in `neg`.  `point` lies in the relaxation and `value` = lhs(point) < 1.
    """

    n: int
    neg: tuple
    coeffs: tuple
    delta: Fraction
    point: tuple
    value: Fraction
    support: tuple

    def standard(self) -> StandardFormInequality:
        return StandardFormInequality(self.n, self.neg, self.coeffs, self.delta)

    def as_row(self):
        return self.standard().as_row()

    def describe(self) -> str:
        terms = []
        ns = set(self.neg)
        for i, c in enumerate(self.coeffs, start=1):
            if c == 0:
                continue
            cs = "" if c == 1 else f"{c}*"
            terms.append(f"{cs}(1-x{i})" if i in ns else f"{cs}x{i}")
        lhs = " + ".join(terms) if terms else "0"
        pt = " ".join(str(v) for v in self.point)
        return f"{lhs} >= {self.delta} violated at ({pt}): lhs = {self.value}"


@dataclass(frozen=True)
class ClosureReport:
    """Aggregate of one oracle run: the outcome plus search statistics."""

    mode: str
    level: int
    violation: Violation | None
    examined: int
    skipped: int
    priced: int

    @property
    def closed(self) -> bool:
        return self.violation is None

    def line(self) -> str:
        out = "none" if self.violation is None else self.violation.describe()
        return (f"closure mode={self.mode} level={self.level} examined={self.examined} "
                f"skipped={self.skipped} priced={self.priced} violation={out}")


def _cone_vertices(dim, level, valid_rows):
    """Vertices of {c >= 0 : every level-subset sums >= 1, d·c >= 1 for d in rows}."""
    rows = []
    one = Fraction(1)
    for i in range(dim):
        rows.append((tuple(one if j == i else Fraction(0) for j in range(dim)), Fraction(0)))
    m = min(level, dim)
    for J in itertools.combinations(range(dim), m):
        js = set(J)
        rows.append((tuple(one if j in js else Fraction(0) for j in range(dim)), one))
    for d in valid_rows:
        rows.append((tuple(Fraction(v) for v in d), one))
    verts, _rays = hull.vertices_of_hrep(hull.FacetList(dim, tuple(rows)), limit=dim)
    return verts


def _check_violation(query, viol):
    ineq = viol.standard()
    if not ineq.is_valid_on(query.S.points):
        raise lpsolve.InternalError("closure oracle produced an inequality invalid on S")
    measure = pitch_of(ineq) if query.mode == "pitch" else notch_of(ineq)
    if measure > query.level:
        raise lpsolve.InternalError("closure oracle exceeded the requested measure level")
    if ineq.lhs(viol.point) >= ineq.delta:
        raise lpsolve.InternalError("closure oracle witness does not violate the inequality")
    if not lpsolve.contains_point(query.R, viol.point):
        raise lpsolve.InternalError("closure oracle witness is outside the relaxation")
    return viol


def closure_violation(query: ClosureQuery):
    """First violated valid inequality within the query's scope, or None.

    The search is complete for its scope: if None comes back, no inequality
    of the given mode and level (within the requested supports or sign
    patterns) that is valid for S cuts off any point of R.  Normalizing
    delta to 1 loses nothing (delta = 0 inequalities cannot be violated
    inside the cube, positive delta scales away), and for a fixed support
    or pattern the worst violation is attained at a vertex of the
    coefficient polyhedron because the pricing objective is nonnegative on
    its recession directions.  Every reported violation is re-verified
    exactly before being returned.
    """
    return _search(query)[0]


def verify_closure(query: ClosureQuery) -> ClosureReport:
    """Run the oracle and report the outcome with search statistics."""
    viol, examined, skipped, priced = _search(query)
    return ClosureReport(query.mode, query.level, viol, examined, skipped, priced)


def _search(query):
    if query.mode not in ("pitch", "notch"):
        raise ValueError(f"mode must be 'pitch' or 'notch', not {query.mode!r}")
    if query.level < 1:
        raise ValueError("level must be at least 1")
    S, R = query.S, query.R
    n = S.n
    if R.n != n:
        raise ValueError(f"dimension mismatch: points {n}, relaxation {R.n}")
    examined = skipped = priced = 0
    if lpsolve.is_empty(R):
        return None, examined, skipped, priced

    if query.mode == "pitch":
        limit = query.limit if query.limit is not None else PITCH_SEARCH_LIMIT
        if n > limit:
            raise ValueError(f"dimension {n} exceeds pitch search limit {limit}")
        if query.supports is not None:
            supports = [tuple(sorted(I)) for I in query.supports]
        else:
            supports = [I for k in range(1, n + 1)
                        for I in itertools.combinations(range(1, n + 1), k)]
        for I in supports:
            viol, cost = _pitch_support(query, I)
            examined += 1
            skipped += cost == 0
            priced += cost
            if viol is not None:
                return viol, examined, skipped, priced
        return None, examined, skipped, priced

    limit = query.limit if query.limit is not None else NOTCH_SEARCH_LIMIT
    if n > limit:
        raise ValueError(f"dimension {n} exceeds notch search limit {limit}")
    if query.sign_patterns is not None:
        patterns = [tuple(sorted(p)) for p in query.sign_patterns]
    else:
        patterns = [tuple(i + 1 for i in range(n) if mask >> i & 1)
                    for mask in range(1 << n)]
    for neg in patterns:
        viol, cost = _notch_pattern(query, neg)
        examined += 1
        skipped += cost == 0
        priced += cost
        if viol is not None:
            return viol, examined, skipped, priced
    return None, examined, skipped, priced


def _priced_minimum(R, a, const):
    out = lpsolve.optimize(R, a, "min")
    if out.status != "optimal":
        raise lpsolve.InternalError("pricing LP over a nonempty relaxation must be optimal")
    return out.value + const, out.x


def _pitch_support(query, I):
    # validity rows restricted to the support; an all-zero row means no
    # nonnegative inequality on I can be valid, so the support is skipped
    S, R = query.S, query.R
    dvecs = set()
    for s in S.points:
        d = tuple(s[i - 1] for i in I)
        if not any(d):
            return None, 0
        dvecs.add(d)
    n = S.n
    priced = 0
    for c in _cone_vertices(len(I), query.level, sorted(dvecs)):
        a = [Fraction(0)] * n
        for i, ci in zip(I, c):
            a[i - 1] = ci
        priced += 1
        value, point = _priced_minimum(R, a, Fraction(0))
        if value < 1:
            viol = Violation(
                n=n, neg=(), coeffs=tuple(a), delta=Fraction(1),
                point=point, value=value,
                support=tuple(i for i in I if a[i - 1] != 0))
            return _check_violation(query, viol), priced
    return None, priced


def _notch_pattern(query, neg):
    S, R = query.S, query.R
    n = S.n
    ns = set(neg)
    chi = tuple(1 if i in ns else 0 for i in range(1, n + 1))
    if chi in S:
        # the point agreeing with the pattern everywhere forces lhs = 0 < 1
        return None, 0
    dvecs = set()
    for s in S.points:
        dvecs.add(tuple((1 - s[i - 1]) if i in ns else s[i - 1] for i in range(1, n + 1)))
    priced = 0
    for c in _cone_vertices(n, query.level, sorted(dvecs)):
        a = tuple(-ci if i in ns else ci for i, ci in enumerate(c, start=1))
        const = sum(ci for i, ci in enumerate(c, start=1) if i in ns)
        priced += 1
        value, point = _priced_minimum(R, a, const)
        if value < 1:
            viol = Violation(
                n=n, neg=neg, coeffs=tuple(c), delta=Fraction(1),
                point=point, value=value,
                support=tuple(i for i in range(1, n + 1) if c[i - 1] != 0))
            return _check_violation(query, viol), priced
    return None, priced
