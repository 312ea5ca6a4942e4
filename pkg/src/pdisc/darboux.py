"""Invariant algebraic curves, extactic curves, and exponential factors.

The searchable objects are lines with rational coefficients: an
irrational invariant line cannot be expressed as a rational polynomial,
and the product of its conjugates is a curve of degree at least two,
outside the line-search bound.  Families of invariant lines (a pencil,
or a free parameter) are reported through a sentinel multiplicity with
a concrete rational representative.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

from pdisc.errors import InternalInvariantError
from pdisc.exactalg import MPoly, UPoly, ffdet, isolate_real_roots, nullspace, resultant_wrt
from pdisc.modelio import PlanarSystem

FAMILY = "family"

def _scan_values() -> List[Fraction]:
    # rational candidates ordered simplest-first: 0, 1, -1, 2, ..., then halves...
    out: List[Fraction] = []
    for d in (1, 2, 3, 4):
        for n in range(0, 9):
            for signed in (n, -n):
                v = Fraction(signed, d)
                if v not in out:
                    out.append(v)
    return out


# scan order for a rational point on a one-parameter constraint curve
_SCAN = _scan_values()


@dataclass(frozen=True)
class InvariantCurve:
    """An invariant algebraic curve f = 0 with X(f) = K f.

    multiplicity is a positive integer, or the FAMILY sentinel when f
    is one rational representative of a continuum of invariant lines
    (note then describes the family).
    """

    f: MPoly
    K: MPoly
    multiplicity: Union[int, str] = 1
    note: Optional[str] = None

    def __post_init__(self) -> None:
        if isinstance(self.multiplicity, int):
            if self.multiplicity < 1:
                raise ValueError("multiplicity must be positive")
        elif self.multiplicity != FAMILY:
            raise ValueError("multiplicity must be an integer or the family sentinel")

    @property
    def is_family(self) -> bool:
        return self.multiplicity == FAMILY


@dataclass(frozen=True)
class ExpFactor:
    """An exponential factor exp(g/f) with cofactor L."""

    g: MPoly
    f: MPoly
    L: MPoly


@dataclass(frozen=True)
class ExtacticResult:
    """The order-m extactic curve and curve multiplicities within it."""

    order: int
    basis: Tuple[MPoly, ...]
    E: MPoly
    multiplicities: Dict[str, int]
    vanishes: bool

    @property
    def basis_size(self) -> int:
        return len(self.basis)


def divergence(sys: PlanarSystem) -> MPoly:
    """dP/dx + dQ/dy."""
    return sys.divergence()


def verify_invariant_curve(sys: PlanarSystem, f: MPoly) -> Optional[InvariantCurve]:
    """Exact check that f = 0 is invariant; returns the curve with its
    cofactor, or None when X(f) is not divisible by f."""
    if f.is_constant:
        raise ValueError("invariant curve must be nonconstant")
    f = f.monic()
    xf = sys.lie_derivative(f)
    k = xf.exact_div(f)
    if k is None:
        return None
    d = sys.degree
    kd = k.degree
    if isinstance(kd, int) and kd > d - 1:
        raise InternalInvariantError(
            f"cofactor degree {kd} exceeds bound {d - 1}"
        )
    return InvariantCurve(f=f, K=k)


# ---------------------------------------------------------------------------
# invariant line search


def _rational_roots(p: UPoly) -> List[Fraction]:
    """Exact rational roots recovered by isolation + reconstruction."""
    if p.is_zero:
        raise ValueError("zero polynomial")
    return [ri.exact for ri in isolate_real_roots(p) if ri.exact is not None]


def _upoly_gcd_many(polys: Sequence[UPoly]) -> UPoly:
    g = polys[0]
    for p in polys[1:]:
        g = g.gcd(p)
    return g


def _substituted_conditions(sys: PlanarSystem) -> List[MPoly]:
    """Invariance conditions for the line y = a x + b.

    (Q - a P)(x, a x + b) is collected as a polynomial in x; each
    x-coefficient, a polynomial in (a, b), must vanish.  The returned
    MPoly values use variable x for a and y for b.
    """
    d = sys.degree
    nx = d + 1  # x-degree of the substituted expression is at most d

    def subst(poly: MPoly) -> List[MPoly]:
        # coefficients of x^m in poly(x, a x + b), as polynomials in (a, b)
        out = [MPoly.zero() for _ in range(nx + 1)]
        for (i, j), c in poly.items():
            # x^i (a x + b)^j = sum_t C(j,t) a^t b^(j-t) x^(i+t)
            binom = 1
            for t in range(j + 1):
                if t > 0:
                    binom = binom * (j - t + 1) // t
                term = MPoly.monomial(t, j - t, Fraction(binom) * c)
                out[i + t] = out[i + t] + term
        return out

    pc = subst(sys.P)
    qc = subst(sys.Q)
    a_var = MPoly.var_x()
    conds = [qc[m] - a_var * pc[m] for m in range(nx + 1)]
    return [c for c in conds if not c.is_zero]


def _line(a: Fraction, b: Fraction) -> MPoly:
    # y - a x - b, graded-lex monic since y ranks above x
    return MPoly.var_y() - MPoly.monomial(1, 0, a) - MPoly.const(b)


def _constraint_text(c: MPoly) -> str:
    return c.monic().format(names=("a", "b"))


def _representative_on(conds: Sequence[MPoly]) -> Optional[Tuple[Fraction, Fraction]]:
    """A rational point (a, b) on the common zero set of the constraints.

    Scanning one coordinate and intersecting the restrictions keeps the
    point on every constraint at once; a single generator is not enough
    because it may carry components the others exclude."""
    for a0 in _SCAN:
        restricted = [c.subst_x(a0) for c in conds]
        nonzero = [r for r in restricted if not r.is_zero]
        if not nonzero:
            return a0, Fraction(0)
        g = _upoly_gcd_many([UPoly(tuple(r.univariate_coeffs("y"))) for r in nonzero])
        if g.degree < 1:
            continue
        roots = _rational_roots(g)
        if roots:
            return a0, roots[0]
    for b0 in _SCAN:
        restricted = [c.subst_y(b0) for c in conds]
        nonzero = [r for r in restricted if not r.is_zero]
        if not nonzero:
            return Fraction(0), b0
        g = _upoly_gcd_many([UPoly(tuple(r.univariate_coeffs("x"))) for r in nonzero])
        if g.degree < 1:
            continue
        roots = _rational_roots(g)
        if roots:
            return roots[0], b0
    return None


def _must_verify(sys: PlanarSystem, f: MPoly) -> InvariantCurve:
    cur = verify_invariant_curve(sys, f)
    if cur is None:
        raise InternalInvariantError(
            f"candidate line {f.format()} failed exact verification"
        )
    return cur


def find_invariant_lines(sys: PlanarSystem) -> List[InvariantCurve]:
    """All invariant lines with rational coefficients, plus family
    sentinels for one- or two-parameter continua of invariant lines.

    Every concrete line returned has been re-verified by exact division.
    """
    lines: List[InvariantCurve] = []
    families: List[InvariantCurve] = []

    # vertical lines x = c: P(c, y) must vanish identically in y
    if sys.P.is_zero:
        rep = _must_verify(sys, MPoly.var_x())
        lines.append(rep)
        families.append(
            InvariantCurve(rep.f, rep.K, FAMILY, note="x - c invariant for every c")
        )
    else:
        pcols = [_upoly_in(c, "x") for c in sys.P.coeffs_in("y")]
        g = _upoly_gcd_many([u for u in pcols if not u.is_zero])
        if g.degree >= 1:
            for c in _rational_roots(g):
                lines.append(_must_verify(sys, MPoly.var_x() - MPoly.const(c)))

    # non-vertical lines y = a x + b
    conds = _substituted_conditions(sys)
    if not conds:
        if not (sys.P.is_zero and sys.Q.is_zero):
            raise InternalInvariantError("empty condition system for a nonzero field")
        rep = _must_verify(sys, MPoly.var_y())
        lines.append(rep)
        families.append(
            InvariantCurve(rep.f, rep.K, FAMILY, note="y - a*x - b invariant for all (a, b)")
        )
    else:
        lines_ab, fams_ab = _solve_slant_conditions(sys, conds)
        lines.extend(lines_ab)
        families.extend(fams_ab)

    seen: Dict[str, InvariantCurve] = {}
    for cur in lines:
        seen.setdefault(cur.f.format(), cur)
    ordered = sorted(seen.values(), key=lambda c: _line_sort_key(c.f))
    ordered.extend(sorted(families, key=lambda c: c.note or ""))
    return ordered


def _line_sort_key(f: MPoly) -> Tuple:
    # verticals first by offset, then slanted by (a, b)
    if f.degree_in("y") == 0:
        return (0, f.coeff(0, 0))
    return (1, -f.coeff(1, 0), -f.coeff(0, 0))


def _upoly_in(p: MPoly, var: str) -> UPoly:
    return UPoly(tuple(p.univariate_coeffs(var)))


def _solve_slant_conditions(
    sys: PlanarSystem, conds: List[MPoly]
) -> Tuple[List[InvariantCurve], List[InvariantCurve]]:
    """Rational solutions (a, b) of the slant-line condition system.

    Within the condition ring, variable x plays a and y plays b.  Each
    family entry's representative is also reported as a concrete line.
    """
    lines: List[InvariantCurve] = []
    families: List[InvariantCurve] = []

    def emit_family(a0: Fraction, b0: Fraction, note: str) -> None:
        rep = _must_verify(sys, _line(a0, b0))
        lines.append(rep)
        families.append(InvariantCurve(rep.f, rep.K, FAMILY, note=note))

    with_b = [c for c in conds if c.degree_in("y") > 0]
    with_a = [c for c in conds if c.degree_in("x") > 0]

    if not with_b:
        # conditions constrain a only: every b works at each root
        g = _upoly_gcd_many([_upoly_in(c, "x") for c in conds])
        if g.degree >= 1:
            for a0 in _rational_roots(g):
                emit_family(a0, Fraction(0), f"y - ({a0})*x - b invariant for every b")
        return lines, families

    if not with_a:
        # conditions constrain b only: every a works at each root
        g = _upoly_gcd_many([_upoly_in(c, "y") for c in conds])
        if g.degree >= 1:
            for b0 in _rational_roots(g):
                emit_family(Fraction(0), b0, f"y - a*x - ({b0}) invariant for every a")
        return lines, families

    if len(conds) == 1:
        # a single mixed condition: a curve of invariant lines
        c = conds[0]
        point = _representative_on([c])
        if point is None:
            raise InternalInvariantError(
                "no rational representative found on constraint "
                f"{_constraint_text(c)} = 0"
            )
        emit_family(
            *point, f"y - a*x - b invariant whenever {_constraint_text(c)} = 0"
        )
        return lines, families

    # eliminate b against a fixed generator of positive b-degree
    pure_a = [c for c in conds if c.degree_in("y") == 0]
    g0 = min(with_b, key=lambda c: c.degree_in("y"))
    eliminants: List[UPoly] = [_upoly_in(c, "x") for c in pure_a]
    for c in conds:
        if c is g0:
            continue
        r = resultant_wrt(g0, c, "y")
        if not r.is_zero:
            eliminants.append(_upoly_in(r, "x"))

    if not eliminants or all(u.is_zero for u in eliminants):
        # every resultant collapsed: positive-dimensional solution set
        point = _representative_on(conds)
        if point is None:
            raise InternalInvariantError(
                "no rational representative on a positive-dimensional "
                "slant-line condition set"
            )
        emit_family(
            *point,
            "positive-dimensional slant-line condition set (one member "
            f"shown); constraint {_constraint_text(g0)} = 0",
        )
        return lines, families

    g = _upoly_gcd_many([u for u in eliminants if not u.is_zero])
    if g.degree < 1:
        return lines, families
    for a0 in _rational_roots(g):
        restricted = [c.subst_x(a0) for c in conds]
        nonzero = [r for r in restricted if not r.is_zero]
        if not nonzero:
            emit_family(a0, Fraction(0), f"y - ({a0})*x - b invariant for every b")
            continue
        gb = _upoly_gcd_many([_upoly_in(r, "y") for r in nonzero])
        if gb.degree < 1:
            continue
        for b0 in _rational_roots(gb):
            cur = verify_invariant_curve(sys, _line(a0, b0))
            if cur is not None:
                lines.append(cur)
    return lines, families


# ---------------------------------------------------------------------------
# extactic curves


def _monomial_basis(m: int) -> Tuple[MPoly, ...]:
    # ascending graded-lex over degrees 0..m
    out: List[MPoly] = []
    for total in range(m + 1):
        for j in range(total + 1):
            out.append(MPoly.monomial(total - j, j))
    return tuple(out)


def extactic(
    sys: PlanarSystem,
    m: int,
    curves: Optional[Sequence[InvariantCurve]] = None,
    max_order: int = 2,
) -> ExtacticResult:
    """Order-m extactic curve E_m and the multiplicity of each known
    invariant curve of degree <= m inside it.

    The matrix rows are X^0, X^1, ..., X^(l-1) applied to the monomial
    basis of degree <= m, with l = (m+1)(m+2)/2.  The order is capped at
    2 by default (raise max_order to override; determinant size and
    coefficient growth escalate quickly).  Any verified invariant curve
    of degree <= m must divide a nonvanishing E_m; a violation is
    reported as an internal error.
    """
    if m < 1:
        raise ValueError("extactic order must be at least 1")
    if m > max_order:
        raise ValueError(f"extactic order capped at {max_order}")
    basis = _monomial_basis(m)
    l = len(basis)
    rows: List[List[MPoly]] = [list(basis)]
    for _ in range(l - 1):
        rows.append([sys.lie_derivative(p) for p in rows[-1]])
    e = ffdet(rows)

    if curves is None:
        curves = [c for c in find_invariant_lines(sys) if not c.is_family]

    mult: Dict[str, int] = {}
    vanishes = e.is_zero
    for cur in curves:
        deg = cur.f.degree
        if not isinstance(deg, int) or deg > m or cur.is_family:
            continue
        key = cur.f.format()
        if vanishes:
            continue
        count = 0
        rem = e
        while True:
            q = rem.exact_div(cur.f)
            if q is None:
                break
            rem = q
            count += 1
        if count == 0:
            raise InternalInvariantError(
                f"invariant curve {key} does not divide a nonzero E_{m}"
            )
        mult[key] = count
    return ExtacticResult(order=m, basis=basis, E=e, multiplicities=mult, vanishes=vanishes)


def attach_multiplicities(
    curves: Sequence[InvariantCurve], ext: ExtacticResult
) -> List[InvariantCurve]:
    """Curves re-tagged with their extactic multiplicities where known."""
    out: List[InvariantCurve] = []
    for cur in curves:
        key = cur.f.format()
        if cur.is_family or key not in ext.multiplicities:
            out.append(cur)
        else:
            out.append(InvariantCurve(cur.f, cur.K, ext.multiplicities[key], cur.note))
    return out


# ---------------------------------------------------------------------------
# exponential factors


def _coeff_vector_basis(max_deg: int, include_const: bool) -> List[Tuple[int, int]]:
    out: List[Tuple[int, int]] = []
    for total in range(0 if include_const else 1, max_deg + 1):
        for j in range(total + 1):
            out.append((total - j, j))
    return out


def _from_vector(vec: Sequence[Fraction], expos: Sequence[Tuple[int, int]]) -> MPoly:
    return sum(
        (MPoly.monomial(i, j, c) for (i, j), c in zip(expos, vec) if c != 0),
        MPoly.zero(),
    )


def find_exponential_factors(
    sys: PlanarSystem, curves: Sequence[InvariantCurve], deg_bound: int
) -> List[ExpFactor]:
    """Exponential factors exp(g/f) within the degree bound.

    Case f = 1: X(g) must itself have degree <= d - 1; the coefficient
    conditions form a homogeneous linear system (the constant term of g
    is fixed to zero since constants only rescale the factor).

    Case f = h^(k-1) for each curve h of multiplicity k > 1: g with
    deg g <= deg f must satisfy f | (X(g) - (k-1) K g), and the
    cofactor is the exact quotient.  Solutions proportional to f itself
    give the constant factor exp(1) and are quotiented out.
    """
    if deg_bound < 1:
        raise ValueError("degree bound must be at least 1")
    d = sys.degree
    out: List[ExpFactor] = []

    # (a) factors exp(g), the infinite-line case
    expos = _coeff_vector_basis(deg_bound, include_const=False)
    lie_of_basis = [sys.lie_derivative(MPoly.monomial(i, j)) for (i, j) in expos]
    high = [e for e in _coeff_vector_basis(d + deg_bound - 1, True) if e[0] + e[1] >= d]
    matrix: List[List[Fraction]] = [
        [xg.coeff(hi, hj) for xg in lie_of_basis] for (hi, hj) in high
    ]
    if matrix:
        basis_vecs = nullspace(matrix)
    else:
        # no high-degree coefficients to kill: every g qualifies
        basis_vecs = [
            [Fraction(1) if t == s else Fraction(0) for t in range(len(expos))]
            for s in range(len(expos))
        ]
    for vec in basis_vecs:
        g = _from_vector(vec, expos)
        if g.is_zero:
            continue
        g = g.monic()
        lco = sys.lie_derivative(g)
        ld = lco.degree
        if isinstance(ld, int) and ld > d - 1:
            raise InternalInvariantError("exponential-factor cofactor degree too high")
        out.append(ExpFactor(g=g, f=MPoly.one(), L=lco))

    # (b) factors from multiple curves
    for cur in curves:
        if cur.is_family or not isinstance(cur.multiplicity, int) or cur.multiplicity <= 1:
            continue
        k = cur.multiplicity
        h = cur.f ** (k - 1)
        hdeg = h.degree
        assert isinstance(hdeg, int)
        g_expos = _coeff_vector_basis(hdeg, include_const=True)
        scale = MPoly.const(Fraction(k - 1)) * cur.K
        # rows: coefficients of the remainder of X(g) - (k-1) K g mod h
        cols: List[MPoly] = []
        for (i, j) in g_expos:
            mono = MPoly.monomial(i, j)
            expr = sys.lie_derivative(mono) - scale * mono
            _, rem = expr.reduce_mod(h)
            cols.append(rem)
        rem_monos = sorted({e for c in cols for e, _ in c.items()})
        matrix = [[c.coeff(i, j) for c in cols] for (i, j) in rem_monos]
        if matrix:
            sols = nullspace(matrix)
        else:
            sols = [
                [Fraction(1) if t == s else Fraction(0) for t in range(len(g_expos))]
                for s in range(len(g_expos))
            ]
        h_vec = [h.coeff(i, j) for (i, j) in g_expos]
        for vec in _quotient_span(sols, h_vec):
            g = _from_vector(vec, g_expos)
            if g.is_zero:
                continue
            g, f = _coprime_form(g, cur.f, k - 1)
            if f.is_constant:
                # fully cancelled: exp(g/c) rescales to an infinite-line factor
                g = g.monic()
                f = MPoly.one()
                lco: Optional[MPoly] = sys.lie_derivative(g)
            else:
                num = sys.lie_derivative(g) * f - g * sys.lie_derivative(f)
                lco = num.exact_div(f * f)
            if lco is None:
                raise InternalInvariantError("exponential-factor quotient not exact")
            ldeg = lco.degree
            if isinstance(ldeg, int) and ldeg > d - 1:
                raise InternalInvariantError("exponential-factor cofactor degree too high")
            out.append(ExpFactor(g=g, f=f, L=lco))
    return out


def _coprime_form(g: MPoly, base: MPoly, power: int) -> Tuple[MPoly, MPoly]:
    """Cancel common base factors from g / base**power."""
    while power > 0:
        q = g.exact_div(base)
        if q is None:
            break
        g = q
        power -= 1
    return g, base ** power


def _quotient_span(
    vecs: List[List[Fraction]], drop: List[Fraction]
) -> List[List[Fraction]]:
    """Basis of span(vecs) modulo span(drop)."""
    pivot = next((i for i, c in enumerate(drop) if c != 0), None)
    if pivot is None:
        return vecs
    out: List[List[Fraction]] = []
    for v in vecs:
        if v[pivot] != 0:
            fac = v[pivot] / drop[pivot]
            v = [a - fac * b for a, b in zip(v, drop)]
        if any(c != 0 for c in v):
            out.append(v)
    return out


# ---------------------------------------------------------------------------
# reporting


def darboux_fragment(
    curves: Sequence[InvariantCurve],
    factors: Sequence[ExpFactor],
    ext: Optional[ExtacticResult] = None,
    dump_extactic: bool = False,
) -> dict:
    """JSON-ready summary of the Darboux objects."""
    doc: dict = {
        "invariant_curves": [
            {
                "f": c.f.format(),
                "cofactor": c.K.format(),
                "multiplicity": c.multiplicity,
                **({"note": c.note} if c.note else {}),
            }
            for c in curves
        ],
        "exponential_factors": [
            {"g": e.g.format(), "f": e.f.format(), "cofactor": e.L.format()}
            for e in factors
        ],
    }
    if ext is not None:
        deg = ext.E.degree
        block = {
            "order": ext.order,
            "basis_size": ext.basis_size,
            "term_count": len(list(ext.E.items())),
            "degree": deg if isinstance(deg, int) else None,
            "vanishes": ext.vanishes,
            "multiplicities": dict(ext.multiplicities),
        }
        if dump_extactic:
            block["polynomial"] = ext.E.format()
        doc["extactic"] = block
    return doc
