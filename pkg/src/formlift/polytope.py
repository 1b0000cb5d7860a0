"""Lifted relaxations of 0/1 sets as explicit extended formulations.

A formulation holds inequality rows over lifted variables y together with an
affine projection x = T y + t.  Boolean formulas act on a relaxation inside
the unit box: a literal restricts to the face x_i = 0 or x_i = 1, a
conjunction intersects the two lifted sets, and a disjunction takes the
convex hull of the union by the standard disjunctive construction.  All data
is exact rational.

The disjunctive rows are A1 y1 - lam*b1 >= 0 and A2 y2 + lam*b2 >= b2 with a
single fresh multiplier lam and no explicit 0 <= lam <= 1 rows: every
formulation rooted at `cube`/`from_hrep` carries the full unit-box rows, and
for such systems feasibility of {y : A y >= s*b} already forces s >= 0, so
each arm's block pins lam into [0,1].  `from_hrep` therefore always appends
the box rows; hand-built formulations fed to `balas_union` must satisfy the
same scale property.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from . import formula as fm
from . import lpsolve

# A linear expression over lifted variables: ((index, coef), ...) sorted by
# index with nonzero coefficients.  A row (expr, rhs) means expr·y >= rhs.


def _frac(v) -> Fraction:
    if isinstance(v, float):
        raise TypeError("floating point input is not accepted; pass int, str or Fraction")
    return Fraction(v)


def _pairs(dense) -> tuple:
    return tuple((j, v) for j, v in enumerate(dense) if v != 0)


def _dense(pairs, dim) -> tuple:
    out = [Fraction(0)] * dim
    for j, c in pairs:
        out[j] = c
    return tuple(out)


def _shift(pairs, by) -> tuple:
    return tuple((j + by, c) for j, c in pairs)


def _neg(pairs) -> tuple:
    return tuple((j, -c) for j, c in pairs)


@dataclass(frozen=True)
class ExtendedFormulation:
    """Polyhedron {x : exists y, rows(y), x = proj(y)} in exact rationals.

    `rows` are (expr, rhs) inequalities over y; `proj` gives one (expr,
    offset) per x coordinate.  `empty_marker` flags the canonical empty
    formulation, which carries the single unsatisfiable row 0 >= 1.
    """

    n: int
    ydim: int
    rows: tuple
    proj: tuple
    empty_marker: bool = False

    @property
    def is_hrep(self) -> bool:
        """True when y is x itself: identity projection, rows in x-space."""
        if self.ydim != self.n:
            return False
        return all(pairs == ((i, Fraction(1)),) and off == 0
                   for i, (pairs, off) in enumerate(self.proj))

    def xspace_rows(self) -> list:
        """Rows as dense x-space constraints; only valid when is_hrep."""
        if not self.is_hrep:
            raise ValueError("formulation has genuine lifted variables; rows are not in x-space")
        return [(_dense(pairs, self.n), rhs) for pairs, rhs in self.rows]

    def to_text(self) -> str:
        return to_text(self)


def _identity_proj(n) -> tuple:
    return tuple((((i, Fraction(1)),), Fraction(0)) for i in range(n))


def empty_formulation(n: int) -> ExtendedFormulation:
    """The canonical empty relaxation: one row 0 >= 1, identity projection."""
    return ExtendedFormulation(n, n, (((), Fraction(1)),), _identity_proj(n), True)


def cube(n: int) -> ExtendedFormulation:
    """The unit box [0,1]^n as an x-space formulation with 2n rows."""
    return from_hrep(n, [])


def from_hrep(n: int, rows) -> ExtendedFormulation:
    """x-space formulation from dense rows a·x >= rhs, clamped to the unit box.

    The full box rows are always appended (then exact duplicates dropped);
    they bound the feasible scale, which the disjunctive union relies on.
    """
    if n < 1:
        raise ValueError("need at least one variable")
    out = []
    for a, rhs in rows:
        a = tuple(_frac(v) for v in a)
        if len(a) != n:
            raise ValueError(f"row has {len(a)} coefficients, expected {n}")
        out.append((_pairs(a), _frac(rhs)))
    for i in range(n):
        one = Fraction(1)
        out.append((((i, one),), Fraction(0)))
        out.append((((i, -one),), Fraction(-1)))
    return ExtendedFormulation(n, n, tuple(dict.fromkeys(out)), _identity_proj(n))


def face_restrict(Q: ExtendedFormulation, var: int, value) -> ExtendedFormulation:
    """Restrict to the face x_var = value (var is 1-based, value 0 or 1)."""
    if not 1 <= var <= Q.n:
        raise ValueError(f"variable x{var} out of range 1..{Q.n}")
    value = _frac(value)
    if Q.empty_marker:
        return Q
    pairs, off = Q.proj[var - 1]
    rhs = value - off
    rows = Q.rows + ((pairs, rhs), (_neg(pairs), -rhs))
    return ExtendedFormulation(Q.n, Q.ydim, rows, Q.proj)


def intersect(A: ExtendedFormulation, B: ExtendedFormulation) -> ExtendedFormulation:
    """Formulation of the intersection; adds 2n rows tying the projections."""
    if A.n != B.n:
        raise ValueError(f"dimension mismatch: {A.n} vs {B.n}")
    if A.empty_marker or B.empty_marker:
        return empty_formulation(A.n)
    dA = A.ydim
    rows = list(A.rows)
    rows.extend((_shift(pairs, dA), rhs) for pairs, rhs in B.rows)
    for i in range(A.n):
        pa, ta = A.proj[i]
        pb, tb = B.proj[i]
        tie = pa + _shift(_neg(pb), dA)
        rhs = tb - ta
        rows.append((tie, rhs))
        rows.append((_neg(tie), -rhs))
    return ExtendedFormulation(A.n, dA + B.ydim, tuple(rows), A.proj)


def balas_union(A: ExtendedFormulation, B: ExtendedFormulation) -> ExtendedFormulation:
    """Formulation of conv(A ∪ B) by the disjunctive construction.

    Variables are (y1, y2, lam); each arm's rows are scaled by its weight.
    No explicit bounds on lam are added: both arms must carry box-rooted
    rows (see the module docstring), which force 0 <= lam <= 1.  Marker
    arms are returned away before any rows are built.
    """
    if A.n != B.n:
        raise ValueError(f"dimension mismatch: {A.n} vs {B.n}")
    if A.empty_marker:
        return B
    if B.empty_marker:
        return A
    dA, dB = A.ydim, B.ydim
    lam = dA + dB
    rows = []
    for pairs, rhs in A.rows:
        p = pairs + (((lam, -rhs),) if rhs else ())
        rows.append((p, Fraction(0)))
    for pairs, rhs in B.rows:
        p = _shift(pairs, dA) + (((lam, rhs),) if rhs else ())
        rows.append((p, rhs))
    proj = []
    for i in range(A.n):
        pa, ta = A.proj[i]
        pb, tb = B.proj[i]
        p = pa + _shift(pb, dA)
        if ta != tb:
            p = p + ((lam, ta - tb),)
        proj.append((p, tb))
    return ExtendedFormulation(A.n, dA + dB + 1, tuple(rows), tuple(proj))


def with_xspace_rows(Q: ExtendedFormulation, rows) -> ExtendedFormulation:
    """Append x-space constraints a·x >= rhs, translated through the projection."""
    if Q.empty_marker:
        return Q
    extra = []
    for a, rhs in rows:
        a = tuple(_frac(v) for v in a)
        if len(a) != Q.n:
            raise ValueError(f"row has {len(a)} coefficients, expected {Q.n}")
        acc = {}
        off = Fraction(0)
        for ai, (pairs, t) in zip(a, Q.proj):
            if ai == 0:
                continue
            off += ai * t
            for j, c in pairs:
                acc[j] = acc.get(j, Fraction(0)) + ai * c
        expr = tuple((j, c) for j, c in sorted(acc.items()) if c != 0)
        extra.append((expr, _frac(rhs) - off))
    return ExtendedFormulation(Q.n, Q.ydim, Q.rows + tuple(extra), Q.proj)


# ---------------------------------------------------------------------------
# lifting a formula over a relaxation


@dataclass(frozen=True)
class LiftReport:
    """Size accounting for one lift.

    `blocks` counts conjunction blocks applied as batched face restrictions,
    `elided_arms` counts disjunction arms dropped because they were proved
    empty, and `emptiness` records each feasibility decision in construction
    order as "<site>:<verdict>".  `route` is "ef" for the extended-formulation
    construction and "hull" for rounds compacted through vertex enumeration.
    The row bound size(phi)*(base_rows+2) + 2n*and_count applies to the "ef"
    route.
    """

    n: int
    formula_size: int
    base_rows: int
    ef_rows: int
    ef_ydim: int
    and_count: int
    or_count: int
    blocks: int
    elided_arms: int
    route: str = "ef"
    emptiness: tuple = ()

    @property
    def row_bound(self) -> int:
        return self.formula_size * (self.base_rows + 2) + 2 * self.n * self.and_count

    @property
    def within_bound(self) -> bool:
        return self.ef_rows <= self.row_bound

    def summary_line(self) -> str:
        return (f"rows={self.ef_rows} ydim={self.ef_ydim} base={self.base_rows} "
                f"size={self.formula_size} and={self.and_count} or={self.or_count} "
                f"blocks={self.blocks} elided={self.elided_arms} "
                f"checked={len(self.emptiness)} bound={self.row_bound} "
                f"route={self.route}")


def _count_kind(f: fm.Formula, kind: fm.Kind) -> int:
    return (1 if f.kind is kind else 0) + sum(_count_kind(c, kind) for c in f.children)


def _is_pure(f: fm.Formula) -> bool:
    """No disjunction anywhere below: the subtree fixes a set of coordinates."""
    if f.kind in (fm.Kind.LIT, fm.Kind.CONST):
        return True
    if f.kind is fm.Kind.AND:
        return all(_is_pure(c) for c in f.children)
    return False


def _conjuncts(f: fm.Formula) -> list:
    if f.kind is fm.Kind.AND:
        return _conjuncts(f.children[0]) + _conjuncts(f.children[1])
    return [f]


def _fixings(parts):
    """Map var -> 0/1 from literal conjuncts; None on conflict or constant false."""
    out = {}
    for p in parts:
        if p.kind is fm.Kind.CONST:
            if not p.value:
                return None
            continue
        v = 0 if p.negated else 1
        if out.setdefault(p.var, v) != v:
            return None
    return out


def _restrict_block(Q, fixings, stats):
    ef = Q
    for var in sorted(fixings):
        ef = face_restrict(ef, var, fixings[var])
    stats["blocks"] += 1
    if _decide_empty(ef, "block", stats):
        return empty_formulation(Q.n)
    return ef


def _decide_empty(ef, site, stats):
    empty = lpsolve.is_empty(ef)
    stats["emptiness"].append(f"{site}:{'empty' if empty else 'nonempty'}")
    return empty


def _lift_collapse(f, Q, stats):
    if _is_pure(f):
        fixings = _fixings(_conjuncts(f))
        if fixings is None:
            return empty_formulation(Q.n)
        return _restrict_block(Q, fixings, stats)
    if f.kind is fm.Kind.OR:
        a = _lift_collapse(f.children[0], Q, stats)
        b = _lift_collapse(f.children[1], Q, stats)
        if a.empty_marker:
            stats["elided_arms"] += 1
            return b
        if b.empty_marker:
            stats["elided_arms"] += 1
            return a
        return balas_union(a, b)
    # conjunction with at least one disjunction below: lift the complex
    # conjuncts, intersect them, then batch the literal fixings on top
    parts = _conjuncts(f)
    pure = [p for p in parts if _is_pure(p)]
    complex_ = [p for p in parts if not _is_pure(p)]
    fixings = _fixings(pure) if pure else {}
    if fixings is None:
        return empty_formulation(Q.n)
    ef = _lift_collapse(complex_[0], Q, stats)
    for p in complex_[1:]:
        if ef.empty_marker:
            return ef
        other = _lift_collapse(p, Q, stats)
        if other.empty_marker:
            return other
        ef = intersect(ef, other)
        if _decide_empty(ef, "intersect", stats):
            return empty_formulation(Q.n)
    if ef.empty_marker:
        return ef
    if fixings:
        ef = _restrict_block(ef, fixings, stats)
    return ef


def _lift_naive(f, Q, stats):
    k = f.kind
    if k is fm.Kind.CONST:
        return Q if f.value else empty_formulation(Q.n)
    if k is fm.Kind.LIT:
        return _restrict_block(Q, {f.var: 0 if f.negated else 1}, stats)
    a = _lift_naive(f.children[0], Q, stats)
    b = _lift_naive(f.children[1], Q, stats)
    if k is fm.Kind.AND:
        if a.empty_marker or b.empty_marker:
            return empty_formulation(Q.n)
        ef = intersect(a, b)
        if _decide_empty(ef, "intersect", stats):
            return empty_formulation(Q.n)
        return ef
    if a.empty_marker:
        stats["elided_arms"] += 1
        return b
    if b.empty_marker:
        stats["elided_arms"] += 1
        return a
    return balas_union(a, b)


def lift(phi: fm.Formula, Q: ExtendedFormulation, collapse: bool = True):
    """Lifted relaxation phi(Q) plus a LiftReport.

    Requires a reduced formula.  Every returned non-marker formulation is
    nonempty: emptiness is decided by an exact feasibility solve after each
    restriction block and each intersection, and empty disjunction arms are
    dropped before the union is formed.
    """
    if not phi.is_reduced():
        raise ValueError("formula must be reduced before lifting")
    if phi.n != Q.n:
        raise ValueError(f"dimension mismatch: formula {phi.n}, relaxation {Q.n}")
    stats = {"blocks": 0, "elided_arms": 0, "emptiness": []}
    if Q.empty_marker:
        ef = Q
    else:
        ef = _lift_collapse(phi, Q, stats) if collapse else _lift_naive(phi, Q, stats)
    report = LiftReport(
        n=Q.n,
        formula_size=phi.size,
        base_rows=len(Q.rows),
        ef_rows=len(ef.rows),
        ef_ydim=ef.ydim,
        and_count=_count_kind(phi, fm.Kind.AND),
        or_count=_count_kind(phi, fm.Kind.OR),
        blocks=stats["blocks"],
        elided_arms=stats["elided_arms"],
        route="ef",
        emptiness=tuple(stats["emptiness"]),
    )
    return ef, report


def iterate_lift(phi: fm.Formula, Q: ExtendedFormulation, k: int,
                 collapse: bool = True, hull_cap: int = 8,
                 with_reports: bool = False):
    """k-fold lift phi(phi(...(Q))); k = 0 returns Q unchanged.

    When the base is an x-space formulation in at most hull_cap variables,
    rounds 1..k-1 are computed as exact facet lists by vertex enumeration
    and only the final round is built as an extended formulation; this keeps
    the row count of round k proportional to the facet count of round k-1
    instead of growing geometrically.  With with_reports=True the result is
    (formulation, reports), one report per computed round; the loop stops
    early if a round comes out empty.
    """
    if k < 0:
        raise ValueError("round count must be nonnegative")
    if not phi.is_reduced():
        raise ValueError("formula must be reduced before lifting")
    if phi.n != Q.n:
        raise ValueError(f"dimension mismatch: formula {phi.n}, relaxation {Q.n}")
    reports = []
    n = Q.n

    def _done(ef):
        return (ef, reports) if with_reports else ef

    if k == 0:
        return _done(Q)
    if k > 1 and Q.is_hrep and not Q.empty_marker and n <= hull_cap:
        from . import hull
        cur = Q.xspace_rows()
        for _ in range(k - 1):
            F = hull.lift_hrep(phi, cur, limit=hull_cap)
            if F is None:
                ef = empty_formulation(n)
                reports.append(_hull_report(phi, len(cur), len(ef.rows), n))
                return _done(ef)
            new = F.rows()
            reports.append(_hull_report(phi, len(cur), len(new), n))
            cur = new
        base = from_hrep(n, cur)
        ef, rep = lift(phi, base, collapse)
        reports.append(rep)
        return _done(ef)
    ef = Q
    for _ in range(k):
        if ef.empty_marker:
            break
        ef, rep = lift(phi, ef, collapse)
        reports.append(rep)
    return _done(ef)


def _hull_report(phi, base_rows, out_rows, n):
    return LiftReport(
        n=n,
        formula_size=phi.size,
        base_rows=base_rows,
        ef_rows=out_rows,
        ef_ydim=n,
        and_count=_count_kind(phi, fm.Kind.AND),
        or_count=_count_kind(phi, fm.Kind.OR),
        blocks=0,
        elided_arms=0,
        route="hull",
    )


# ---------------------------------------------------------------------------
# text format


def _fmt(v: Fraction) -> str:
    v = Fraction(v)
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


def _parse_frac(tok: str, where: str) -> Fraction:
    try:
        return Fraction(tok)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"{where}: bad rational {tok!r}") from exc


def to_text(Q: ExtendedFormulation) -> str:
    """Serialize a formulation.

    x-space formulations (identity projection) are written with `yvars 0`
    and n coefficients per row; general ones write `yvars d`, d coefficients
    per row, and one `proj i offset c1..cd` line per x variable (i is
    1-based).  All numbers are exact rationals p or p/q.
    """
    lines = ["ef", f"xvars {Q.n}"]
    if Q.is_hrep:
        lines.append("yvars 0")
        for pairs, rhs in Q.rows:
            dense = _dense(pairs, Q.n)
            lines.append("ineq " + " ".join(_fmt(v) for v in dense) + " >= " + _fmt(rhs))
    else:
        lines.append(f"yvars {Q.ydim}")
        for pairs, rhs in Q.rows:
            dense = _dense(pairs, Q.ydim)
            lines.append("ineq " + " ".join(_fmt(v) for v in dense) + " >= " + _fmt(rhs))
        for i, (pairs, off) in enumerate(Q.proj):
            dense = _dense(pairs, Q.ydim)
            lines.append(f"proj {i + 1} " + _fmt(off) + " " + " ".join(_fmt(v) for v in dense))
    return "\n".join(lines) + "\n"


def from_text(text: str) -> ExtendedFormulation:
    """Parse the `to_text` format.

    `yvars 0` input is routed through `from_hrep`, so the unit-box rows are
    present afterwards no matter what the file listed; a single all-zero row
    with positive right side is read back as the empty marker.  Lines may
    carry `#` comments.
    """
    lines = []
    for raw in text.splitlines():
        body = raw.split("#", 1)[0].strip()
        if body:
            lines.append(body)
    if not lines or lines[0] != "ef":
        raise ValueError("expected header line 'ef'")
    if len(lines) < 3 or not lines[1].startswith("xvars ") or not lines[2].startswith("yvars "):
        raise ValueError("expected 'xvars <n>' then 'yvars <d>'")
    try:
        n = int(lines[1].split()[1])
        d = int(lines[2].split()[1])
    except (IndexError, ValueError) as exc:
        raise ValueError("bad xvars/yvars line") from exc
    if n < 1 or d < 0:
        raise ValueError("variable counts out of range")

    width = n if d == 0 else d
    rows = []
    proj = {}
    for line in lines[3:]:
        toks = line.split()
        if toks[0] == "ineq":
            if len(toks) != width + 3 or toks[-2] != ">=":
                raise ValueError(f"bad ineq line: {line!r}")
            coeffs = tuple(_parse_frac(t, "ineq") for t in toks[1:width + 1])
            rows.append((coeffs, _parse_frac(toks[-1], "ineq")))
        elif toks[0] == "proj":
            if d == 0:
                raise ValueError("proj line in an x-space formulation")
            if len(toks) != d + 3:
                raise ValueError(f"bad proj line: {line!r}")
            i = int(toks[1])
            if not 1 <= i <= n or i in proj:
                raise ValueError(f"bad or repeated proj index {i}")
            off = _parse_frac(toks[2], "proj")
            coeffs = tuple(_parse_frac(t, "proj") for t in toks[3:])
            proj[i] = (_pairs(coeffs), off)
        else:
            raise ValueError(f"unknown line: {line!r}")

    if d == 0:
        if len(rows) == 1 and all(v == 0 for v in rows[0][0]) and rows[0][1] > 0:
            return empty_formulation(n)
        return from_hrep(n, rows)
    if sorted(proj) != list(range(1, n + 1)):
        raise ValueError("need exactly one proj line per x variable")
    srows = tuple((_pairs(a), rhs) for a, rhs in rows)
    sproj = tuple(proj[i] for i in range(1, n + 1))
    return ExtendedFormulation(n, d, srows, sproj)
