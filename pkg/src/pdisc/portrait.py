"""Global phase portraits on the Poincaré disc.

This is the only module that computes in binary64: every seed,
equilibrium location, and chart polynomial is handed over from exact
data and only the trajectory integration itself is floating point.

Orbits are integrated with an embedded Dormand-Prince 4(5) pair in
whichever chart is well scaled: the finite chart while |x| + |y| stays
small, the U1/U2 charts near infinity (switch out above 10, back below
5).  For even-degree systems the chart polynomials reverse time on the
v < 0 half, which the integrator compensates with a sign factor, so
drawn orbits always follow the true flow.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from pdisc.compactify import (
    SectorDecomposition,
    blowup_analysis,
    direct_sectors,
    infinite_equilibria,
    to_chart,
)
from pdisc.equilibria import (
    EquilibriumRecord,
    equilibrium_fragment,
    finite_equilibria,
    leslie_labels,
)
from pdisc.errors import InputError, InternalInvariantError, LineOfEquilibriaError
from pdisc.exactalg import MPoly
from pdisc.modelio import ParamBindings, PlanarSystem, format_system

RTOL_DEFAULT = 1e-9
ATOL_DEFAULT = 1e-12
TMAX_DEFAULT = 200.0
EPS_SEPARATRIX = 1e-3
CONVERGE_POS = 1e-8
CONVERGE_SPEED = 1e-10
CHART_OUT = 10.0  # leave the finite chart when |x| + |y| exceeds this
CHART_IN = 5.0  # return below this (hysteresis factor 2)
EQUATOR_EPS = 1e-12
MAX_STEPS = 60000

REASON_EQ = "converged-to-equilibrium"
REASON_TMAX = "reached-tmax"
REASON_BOUNDARY = "reached-boundary"
REASON_UNDERFLOW = "step-underflow"


# ---------------------------------------------------------------------------
# disc geometry


def disc_from_plane(x: float, y: float) -> Tuple[float, float]:
    s = 1.0 / math.sqrt(1.0 + x * x + y * y)
    return (x * s, y * s)


def plane_from_disc(y1: float, y2: float) -> Tuple[float, float]:
    r2 = y1 * y1 + y2 * y2
    if r2 >= 1.0:
        raise InputError("point is not strictly inside the disc")
    s = 1.0 / math.sqrt(1.0 - r2)
    return (y1 * s, y2 * s)


def _disc_from_chart(chart: str, u: float, v: float, side: int) -> Tuple[float, float]:
    s = side / math.sqrt(1.0 + u * u + v * v)
    if chart == "U1":
        return (s, s * u)
    return (s * u, s)


def _dist(a: Tuple[float, float], b: Tuple[float, float]) -> float:
    return math.hypot(a[0] - b[0], a[1] - b[1])


# ---------------------------------------------------------------------------
# polynomial compilation


def compile_poly(p: MPoly) -> Callable[[float, float], float]:
    """Horner-compile an exact polynomial to a float evaluator."""
    rows = p.coeffs_in("y")
    if not rows:
        return lambda x, y: 0.0
    parts: List[str] = []
    for j in range(len(rows) - 1, -1, -1):
        xs = rows[j].univariate_coeffs("x")
        if not xs:
            inner = "0.0"
        else:
            inner = repr(float(xs[-1]))
            for c in reversed(xs[:-1]):
                inner = f"({inner})*x + {float(c)!r}"
        parts.append(f"({inner})")
    body = parts[0]
    for chunk in parts[1:]:
        body = f"({body})*y + {chunk}"
    namespace: Dict[str, object] = {}
    exec(f"def _f(x, y):\n    return {body}\n", namespace)
    return namespace["_f"]  # type: ignore[return-value]


# ---------------------------------------------------------------------------
# Dormand-Prince 4(5)

_DP_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
    (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84),
)
_DP_B5 = (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0)
_DP_B4 = (5179 / 57600, 0.0, 7571 / 16695, 393 / 640, -92097 / 339200, 187 / 2100, 1 / 40)


def _dp_step(f, x, y, h):
    """One embedded step; returns (x5, y5, err_x, err_y)."""
    kx = [0.0] * 7
    ky = [0.0] * 7
    kx[0], ky[0] = f(x, y)
    for i in range(1, 7):
        ax = x
        ay = y
        row = _DP_A[i]
        for j, a in enumerate(row):
            if a != 0.0:
                ax += h * a * kx[j]
                ay += h * a * ky[j]
        kx[i], ky[i] = f(ax, ay)
    x5 = x + h * sum(b * k for b, k in zip(_DP_B5, kx))
    y5 = y + h * sum(b * k for b, k in zip(_DP_B5, ky))
    x4 = x + h * sum(b * k for b, k in zip(_DP_B4, kx))
    y4 = y + h * sum(b * k for b, k in zip(_DP_B4, ky))
    return x5, y5, x5 - x4, y5 - y4


# ---------------------------------------------------------------------------
# trajectories


@dataclass
class Trajectory:
    seed_id: str
    role: str  # generic | separatrix | axis
    direction: str  # forward | backward
    points: List[Tuple[float, float]]
    times: List[float]
    reason: str

    def endpoint(self) -> Tuple[float, float]:
        return self.points[-1]


class _ChartState:
    """Mutable integration state: chart id, local coordinates, and the
    time-orientation sign of the chart polynomials at the current
    position."""

    __slots__ = ("chart", "x", "y", "side", "orient")

    def __init__(self, chart: str, x: float, y: float, side: int, orient: float):
        self.chart = chart
        self.x = x
        self.y = y
        self.side = side
        self.orient = orient


class _Integrator:
    def __init__(self, sys: PlanarSystem, equilibria_disc: Sequence[Tuple[float, float]]):
        self.sys = sys
        self.d = sys.degree
        self.f3 = (compile_poly(sys.P), compile_poly(sys.Q))
        u1 = to_chart(sys, "U1")
        u2 = to_chart(sys, "U2")
        self.f1 = (compile_poly(u1.du), compile_poly(u1.dv))
        self.f2 = (compile_poly(u2.du), compile_poly(u2.dv))
        self.eqs = list(equilibria_disc)

    # -- chart bookkeeping ------------------------------------------------

    def _orientation(self, chart: str, v: float) -> float:
        if chart == "U3":
            return 1.0
        if (self.d - 1) % 2 == 0:
            return 1.0
        return 1.0 if v >= 0 else -1.0

    def _field(self, st: _ChartState) -> Tuple[float, float]:
        fx, fy = {"U3": self.f3, "U1": self.f1, "U2": self.f2}[st.chart]
        return (st.orient * fx(st.x, st.y), st.orient * fy(st.x, st.y))

    def _disc(self, st: _ChartState) -> Tuple[float, float]:
        if st.chart == "U3":
            return disc_from_plane(st.x, st.y)
        return _disc_from_chart(st.chart, st.x, st.y, st.side)

    def _switch(self, st: _ChartState) -> None:
        if st.chart == "U3":
            if abs(st.x) + abs(st.y) > CHART_OUT:
                if abs(st.x) >= abs(st.y):
                    u, v = st.y / st.x, 1.0 / st.x
                    st.chart = "U1"
                else:
                    u, v = st.x / st.y, 1.0 / st.y
                    st.chart = "U2"
                st.x, st.y = u, v
                st.side = 1 if v > 0 else -1
                st.orient = self._orientation(st.chart, v)
            return
        u, v = st.x, st.y
        if v != 0.0 and (1.0 + abs(u)) / abs(v) < CHART_IN:
            if st.chart == "U1":
                st.x, st.y = 1.0 / v, u / v
            else:
                st.x, st.y = u / v, 1.0 / v
            st.chart = "U3"
            st.side = 1
            st.orient = 1.0
            return
        if abs(u) > 2.0:
            st.chart = "U2" if st.chart == "U1" else "U1"
            st.x, st.y = 1.0 / u, v / u
            st.side = 1 if st.y > 0 else (-1 if st.y < 0 else st.side)
            st.orient = self._orientation(st.chart, st.y)

    # -- termination ------------------------------------------------------

    def _near_equilibrium(self, st: _ChartState) -> bool:
        p = self._disc(st)
        for e in self.eqs:
            if _dist(p, e) < CONVERGE_POS:
                fx, fy = self._field(st)
                if math.hypot(fx, fy) < CONVERGE_SPEED:
                    return True
        return False

    # -- main loop ----------------------------------------------------------

    def run(
        self,
        seed_disc: Tuple[float, float],
        direction: str,
        tmax: float,
        rtol: float,
        atol: float,
        seed_id: str,
        role: str,
    ) -> Trajectory:
        if direction not in ("forward", "backward"):
            raise InputError("direction must be 'forward' or 'backward'")
        r2 = seed_disc[0] ** 2 + seed_disc[1] ** 2
        if r2 >= 1.0:
            raise InputError("seed must lie strictly inside the disc")
        sgn = 1.0 if direction == "forward" else -1.0
        x0, y0 = plane_from_disc(*seed_disc)
        st = _ChartState("U3", x0, y0, 1, 1.0)
        self._switch(st)

        pts: List[Tuple[float, float]] = [self._disc(st)]
        times: List[float] = [0.0]
        reason = REASON_TMAX

        fx, fy = self._field(st)
        if math.hypot(fx, fy) < CONVERGE_SPEED or self._near_equilibrium(st):
            return Trajectory(seed_id, role, direction, pts, times, REASON_EQ)

        t = 0.0
        h = 1e-3
        steps = 0
        last_recorded = pts[0]
        while steps < MAX_STEPS:
            steps += 1
            if t >= tmax:
                reason = REASON_TMAX
                break
            h = min(h, tmax - t, 0.5)

            def fld(a: float, b: float) -> Tuple[float, float]:
                fx, fy = {"U3": self.f3, "U1": self.f1, "U2": self.f2}[st.chart]
                k = sgn * st.orient
                return (k * fx(a, b), k * fy(a, b))

            nx, ny, ex, ey = _dp_step(fld, st.x, st.y, h)
            sx = atol + rtol * max(abs(st.x), abs(nx))
            sy = atol + rtol * max(abs(st.y), abs(ny))
            err = math.sqrt(((ex / sx) ** 2 + (ey / sy) ** 2) / 2.0)
            if err > 1.0:
                h *= max(0.2, 0.9 * err ** -0.2)
                if h < 1e-13 * max(1.0, abs(t)):
                    reason = REASON_UNDERFLOW
                    break
                continue
            # keep recorded polylines locally short on the disc
            if st.chart == "U3" and _dist(disc_from_plane(nx, ny), self._disc(st)) > 0.05:
                h *= 0.5
                if h < 1e-13 * max(1.0, abs(t)):
                    reason = REASON_UNDERFLOW
                    break
                continue

            st.x, st.y = nx, ny
            t += h
            if err > 1e-30:
                h *= min(5.0, 0.9 * err ** -0.2)
            else:
                h *= 5.0

            if st.chart != "U3" and abs(st.y) < EQUATOR_EPS:
                p = self._disc(st)
                pts.append(p)
                times.append(t)
                reason = REASON_EQ if self._near_equilibrium(st) else REASON_BOUNDARY
                break
            self._switch(st)

            p = self._disc(st)
            if _dist(p, last_recorded) >= 0.004:
                pts.append(p)
                times.append(t)
                last_recorded = p
            if self._near_equilibrium(st):
                if pts[-1] != p:
                    pts.append(p)
                    times.append(t)
                reason = REASON_EQ
                break

        final = self._disc(st)
        if pts[-1] != final:
            pts.append(final)
            times.append(t)
        return Trajectory(seed_id, role, direction, pts, times, reason)


def _axis_orbit(
    sys: PlanarSystem,
    axis: str,
    start: float,
    direction: str,
    tmax: float,
    rtol: float,
    atol: float,
    seed_id: str,
    eqs: Sequence[Tuple[float, float]],
    role: str = "axis",
) -> Trajectory:
    """Integrate the exact one-dimensional restriction to an invariant
    axis; the transverse coordinate is identically zero."""
    poly = sys.P.subst_y(Fraction(0)) if axis == "x" else sys.Q.subst_x(Fraction(0))
    g = compile_poly(poly)
    evalf = (lambda s: g(s, 0.0)) if axis == "x" else (lambda s: g(0.0, s))
    sgn = 1.0 if direction == "forward" else -1.0

    def embed(s: float) -> Tuple[float, float]:
        return disc_from_plane(s, 0.0) if axis == "x" else disc_from_plane(0.0, s)

    pts = [embed(start)]
    times = [0.0]
    pos = start
    t = 0.0
    h = 1e-3
    reason = REASON_TMAX
    last = pts[0]
    for _ in range(MAX_STEPS):
        if t >= tmax:
            break
        speed = abs(evalf(pos))
        near = any(_dist(embed(pos), e) < CONVERGE_POS for e in eqs)
        if speed < CONVERGE_SPEED and near:
            reason = REASON_EQ
            break
        if abs(pos) > 1e9:
            reason = REASON_BOUNDARY
            break
        h = min(h, tmax - t, 0.5)
        # scalar DP45 via the planar stepper with a frozen second component
        f2 = lambda a, b: (sgn * evalf(a), 0.0)
        np_, _, err, _ = _dp_step(f2, pos, 0.0, h)
        sc = atol + rtol * max(abs(pos), abs(np_))
        e = abs(err) / sc
        if e > 1.0:
            h *= max(0.2, 0.9 * e ** -0.2)
            if h < 1e-13 * max(1.0, abs(t)):
                reason = REASON_UNDERFLOW
                break
            continue
        pos = np_
        t += h
        h *= min(5.0, 0.9 * e ** -0.2) if e > 1e-30 else 5.0
        p = embed(pos)
        if _dist(p, last) >= 0.004:
            pts.append(p)
            times.append(t)
            last = p
    final = embed(pos)
    if pts[-1] != final:
        pts.append(final)
        times.append(t)
    return Trajectory(seed_id, role, direction, pts, times, reason)


def integrate_orbit(
    sys: PlanarSystem,
    seed: Tuple[float, float],
    direction: str = "forward",
    tmax: float = TMAX_DEFAULT,
    tol: float = RTOL_DEFAULT,
    atol: float = ATOL_DEFAULT,
    equilibria: Optional[Sequence[Tuple[float, float]]] = None,
    seed_id: str = "seed",
    role: str = "generic",
) -> Trajectory:
    """Integrate one orbit from a disc-coordinate seed.

    Seeds on an invariant coordinate axis are integrated in the exact
    one-dimensional restriction so the transverse coordinate never
    drifts.  `equilibria` supplies disc points used for the
    convergence-to-equilibrium stop; by default the finite equilibria
    are located exactly and used.
    """
    if direction not in ("forward", "backward"):
        raise InputError("direction must be 'forward' or 'backward'")
    if equilibria is None:
        eqs = []
        for rec in finite_equilibria(sys):
            ax, ay = rec.point.approx()
            eqs.append(disc_from_plane(ax, ay))
        for chart in ("U1", "U2"):
            try:
                for rec in infinite_equilibria(to_chart(sys, chart)):
                    u = rec.point.x.approx()
                    eqs.append(_disc_from_chart(chart, u, 0.0, 1))
                    eqs.append(_disc_from_chart(chart, u, 0.0, -1))
            except LineOfEquilibriaError:
                pass
        equilibria = eqs

    x0, y0 = plane_from_disc(*seed)
    axis_role = "axis" if role == "generic" else role
    if y0 == 0.0 and sys.Q.subst_y(Fraction(0)).is_zero:
        return _axis_orbit(sys, "x", x0, direction, tmax, tol, atol, seed_id, equilibria, axis_role)
    if x0 == 0.0 and sys.P.subst_x(Fraction(0)).is_zero:
        return _axis_orbit(sys, "y", y0, direction, tmax, tol, atol, seed_id, equilibria, axis_role)
    return _Integrator(sys, equilibria).run(seed, direction, tmax, tol, atol, seed_id, role)


# ---------------------------------------------------------------------------
# markers and seeding


@dataclass(frozen=True)
class Marker:
    """One equilibrium drawn on the disc: finite (chart U3) or at
    infinity (chart U1/U2 with equator side)."""

    marker_id: str
    chart: str
    local: Tuple[float, float]
    side: int
    disc: Tuple[float, float]
    record: EquilibriumRecord
    sectors: Optional[SectorDecomposition] = None

    @property
    def classification(self) -> str:
        return self.record.classification

    @property
    def label(self) -> Optional[str]:
        return self.record.label


@dataclass(frozen=True)
class SeedSpec:
    seed_id: str
    disc: Tuple[float, float]
    direction: str
    role: str


def _marker_for_finite(rec: EquilibriumRecord) -> Marker:
    ax, ay = rec.point.approx()
    mid = rec.label or f"finite:{rec.point.x.text()},{rec.point.y.text()}"
    return Marker(mid, "U3", (ax, ay), 1, disc_from_plane(ax, ay), rec)


def _marker_for_infinite(rec: EquilibriumRecord, chart: str, side: int) -> Marker:
    u = rec.point.x.approx()
    mid = f"inf:{chart}{'+' if side > 0 else '-'}:{rec.point.x.text()}"
    return Marker(mid, chart, (u, 0.0), side, _disc_from_chart(chart, u, 0.0, side), rec)


def _eig_directions(rec: EquilibriumRecord) -> List[Tuple[float, Tuple[float, float]]]:
    """(eigenvalue, unit eigenvector) pairs for a record with a real
    spectrum, from the float Jacobian."""
    (a, b), (c, d) = [[float(v) for v in row] for row in rec.jacobian]
    tr = a + d
    disc = tr * tr - 4.0 * (a * d - b * c)
    if disc < 0:
        return []
    out: List[Tuple[float, Tuple[float, float]]] = []
    for lam in ((tr - math.sqrt(disc)) / 2.0, (tr + math.sqrt(disc)) / 2.0):
        if abs(b) > 1e-14 or abs(lam - a) > 1e-14:
            v = (b, lam - a)
        else:
            v = (lam - d, c)
        n = math.hypot(*v)
        if n < 1e-14:
            v = (1.0, 0.0)
            n = 1.0
        out.append((lam, (v[0] / n, v[1] / n)))
    return out


def _local_to_disc(chart: str, side: int, u: float, v: float) -> Tuple[float, float]:
    if chart == "U3":
        return disc_from_plane(u, v)
    eff = 1 if v > 0 else (-1 if v < 0 else side)
    return _disc_from_chart(chart, u, v, eff)


def _in_quadrant(chart: str, side: int, u: float, v: float) -> bool:
    tol = 1e-12
    if chart == "U3":
        return u >= -tol and v >= -tol
    # chart points map to x = side/..., so quadrant needs side > 0, u, v >= 0
    return side > 0 and u >= -tol and v >= -tol


def separatrix_seeds(
    markers: Sequence[Marker],
    epsilon: float = EPS_SEPARATRIX,
    positive_quadrant_only: bool = False,
) -> List[SeedSpec]:
    """Seeds tracing saddle and saddle-node separatrices: offsets of
    epsilon along the relevant eigendirections, integrated away from the
    stable side and into the unstable one."""
    seeds: List[SeedSpec] = []
    for m in markers:
        k = 0
        if m.classification == "saddle":
            for lam, vec in _eig_directions(m.record):
                direction = "forward" if lam > 0 else "backward"
                for s in (1.0, -1.0):
                    u = m.local[0] + s * epsilon * vec[0]
                    v = m.local[1] + s * epsilon * vec[1]
                    if m.chart != "U3" and abs(v) < 1e-15:
                        continue  # equator direction: lies on the disc rim
                    if positive_quadrant_only and not _in_quadrant(m.chart, m.side, u, v):
                        continue
                    seeds.append(
                        SeedSpec(f"sep:{m.marker_id}:{k}", _local_to_disc(m.chart, m.side, u, v), direction, "separatrix")
                    )
                    k += 1
        elif m.classification == "saddle-node" and m.record.reduction is not None:
            red = m.record.reduction
            cv = (float(red.center_vector[0]), float(red.center_vector[1]))
            n = math.hypot(*cv) or 1.0
            cv = (cv[0] / n, cv[1] / n)
            a2 = float(red.a2)
            for s in (1.0, -1.0):
                u = m.local[0] + s * epsilon * cv[0]
                v = m.local[1] + s * epsilon * cv[1]
                if m.chart != "U3" and abs(v) < 1e-15:
                    continue  # equator direction: lies on the disc rim
                if positive_quadrant_only and not _in_quadrant(m.chart, m.side, u, v):
                    continue
                direction = "forward" if (a2 > 0) == (s > 0) else "backward"
                seeds.append(
                    SeedSpec(f"sep:{m.marker_id}:{k}", _local_to_disc(m.chart, m.side, u, v), direction, "separatrix")
                )
                k += 1
            lam = float(red.nonzero_eigenvalue)
            strong = [p for p in _eig_directions(m.record) if abs(p[0] - lam) < 1e-9]
            for lamv, vec in strong[:1]:
                direction = "backward" if lamv < 0 else "forward"
                for s in (1.0, -1.0):
                    u = m.local[0] + s * epsilon * vec[0]
                    v = m.local[1] + s * epsilon * vec[1]
                    if m.chart != "U3" and abs(v) < 1e-15:
                        continue  # equator direction: lies on the disc rim
                    if positive_quadrant_only and not _in_quadrant(m.chart, m.side, u, v):
                        continue
                    seeds.append(
                        SeedSpec(f"sep:{m.marker_id}:{k}", _local_to_disc(m.chart, m.side, u, v), direction, "separatrix")
                    )
                    k += 1
    return seeds


def default_seeds(positive_quadrant_only: bool = True, grid: int = 8) -> List[SeedSpec]:
    """Deterministic polar grid of generic seeds plus axis seeds."""
    seeds: List[SeedSpec] = []
    sectors = 1 if positive_quadrant_only else 4
    for i in range(grid):
        r = 0.92 * (i + 1) / (grid + 1)
        for j in range(grid * sectors):
            theta = (j + 0.5) * (sectors * math.pi / 2.0) / (grid * sectors)
            p = (r * math.cos(theta), r * math.sin(theta))
            seeds.append(SeedSpec(f"grid:{i}:{j}", p, "forward", "generic"))
    for k, s in enumerate((0.25, 0.5, 1.5, 3.0)):
        seeds.append(SeedSpec(f"axis:x:{k}", disc_from_plane(s, 0.0), "forward", "axis"))
        seeds.append(SeedSpec(f"axis:y:{k}", disc_from_plane(0.0, s), "forward", "axis"))
        if not positive_quadrant_only:
            seeds.append(SeedSpec(f"axis:x:-{k}", disc_from_plane(-s, 0.0), "forward", "axis"))
            seeds.append(SeedSpec(f"axis:y:-{k}", disc_from_plane(0.0, -s), "forward", "axis"))
    return seeds


# ---------------------------------------------------------------------------
# the document


@dataclass
class PortraitDoc:
    system_text: str
    regime: Optional[str]  # "positive" | "zero" | "negative" for 1 - AC
    markers: List[Marker]
    trajectories: List[Trajectory]
    positive_quadrant_only: bool
    canonical_regions: Optional[int] = None


def _infinite_markers(
    sys: PlanarSystem, positive_quadrant_only: bool
) -> List[Marker]:
    """Equator markers: U-charts give the side = +1 points; when the
    whole disc is drawn, the antipodal points take their classifications
    from the V-chart systems (they differ for even degree)."""
    out: List[Marker] = []
    plan = [("U1", 1, None), ("U2", 1, None)]
    if not positive_quadrant_only:
        plan.extend([("V1", -1, "U1"), ("V2", -1, "U2")])
    for chart, side, disc_chart in plan:
        try:
            recs = infinite_equilibria(to_chart(sys, chart), positive_quadrant_only)
        except LineOfEquilibriaError:
            continue
        for rec in recs:
            if chart.endswith("2") and rec.point.x.exact != 0:
                continue  # nonvertical directions already covered by the 1-charts
            out.append(_marker_for_infinite(rec, disc_chart or chart, side))
    return out


def _resolve_sectors(sys_local: PlanarSystem, rec: EquilibriumRecord) -> Optional[SectorDecomposition]:
    """One level of directional blow-ups at an exact degenerate point."""
    try:
        analysis = blowup_analysis(sys_local, rec.point)
    except LineOfEquilibriaError:
        return None
    return None if analysis is None else analysis.sectors


def build_portrait(
    sys: PlanarSystem,
    params: Optional[ParamBindings] = None,
    positive_quadrant_only: bool = True,
    grid: int = 8,
    tmax: float = TMAX_DEFAULT,
    tol: float = RTOL_DEFAULT,
) -> PortraitDoc:
    """Assemble markers, seeds, and trajectories for one system."""
    finite = finite_equilibria(sys, positive_quadrant_only)
    regime: Optional[str] = None
    if params is not None:
        finite = leslie_labels(finite, params.A, params.B, params.C)
        rv = params.regime_value
        regime = "positive" if rv > 0 else ("zero" if rv == 0 else "negative")

    markers = [_marker_for_finite(r) for r in finite]
    markers.extend(_infinite_markers(sys, positive_quadrant_only))

    resolved: List[Marker] = []
    for m in markers:
        if m.classification == "degenerate-needs-blowup":
            if m.chart == "U3":
                local_sys = sys
            else:
                local_sys = to_chart(sys, m.chart).system
            sec = _resolve_sectors(local_sys, m.record)
            resolved.append(Marker(m.marker_id, m.chart, m.local, m.side, m.disc, m.record, sec))
        elif m.classification in ("saddle", "stable node", "unstable node", "stable focus", "unstable focus"):
            resolved.append(Marker(m.marker_id, m.chart, m.local, m.side, m.disc, m.record, direct_sectors(m.classification)))
        else:
            resolved.append(m)
    markers = resolved

    if params is not None:
        has_star = any(m.label == "Estar" and m.local[0] > 0 for m in markers)
        if (params.regime_value > 0) != has_star:
            raise InternalInvariantError(
                "interior-equilibrium marker disagrees with the 1-AC regime"
            )

    eq_points = [m.disc for m in markers]
    seeds = default_seeds(positive_quadrant_only, grid)
    seeds.extend(separatrix_seeds(markers, EPS_SEPARATRIX, positive_quadrant_only))

    trajectories: List[Trajectory] = []
    for seed in seeds:
        trajectories.append(
            integrate_orbit(
                sys,
                seed.disc,
                seed.direction,
                tmax=tmax,
                tol=tol,
                equilibria=eq_points,
                seed_id=seed.seed_id,
                role=seed.role,
            )
        )
    trajectories.sort(key=lambda tr: tr.seed_id)
    return PortraitDoc(
        system_text=format_system(sys),
        regime=regime,
        markers=markers,
        trajectories=trajectories,
        positive_quadrant_only=positive_quadrant_only,
    )


# ---------------------------------------------------------------------------
# rendering

_ROLE_STROKE = {"generic": "#9aa0a6", "axis": "#1a73e8", "separatrix": "#d93025"}

_GLYPH_FILL = {
    "stable node": "#188038",
    "stable focus": "#188038",
    "unstable node": "#ffffff",
    "unstable focus": "#ffffff",
    "saddle": "#202124",
    "saddle-node": "#f9ab00",
    "center-candidate": "#a142f4",
    "degenerate-needs-blowup": "#80868b",
    "undetermined": "#80868b",
}


def _svg_xy(p: Tuple[float, float]) -> Tuple[float, float]:
    return (400.0 + 380.0 * p[0], 400.0 - 380.0 * p[1])


def _marker_glyph(m: Marker) -> str:
    cx, cy = _svg_xy(m.disc)
    cls = m.classification
    fill = _GLYPH_FILL.get(cls, "#80868b")
    title = f"{m.label or m.marker_id}: {cls}"
    if cls == "saddle":
        return (
            f'<path d="M {cx - 6:.2f} {cy - 6:.2f} L {cx + 6:.2f} {cy + 6:.2f} '
            f'M {cx - 6:.2f} {cy + 6:.2f} L {cx + 6:.2f} {cy - 6:.2f}" '
            f'stroke="{fill}" stroke-width="3" fill="none"><title>{title}</title></path>'
        )
    if cls == "saddle-node":
        return (
            f'<path d="M {cx:.2f} {cy - 7:.2f} L {cx + 6.1:.2f} {cy + 3.5:.2f} '
            f'L {cx - 6.1:.2f} {cy + 3.5:.2f} Z" fill="{fill}" stroke="#202124" '
            f'stroke-width="1.5"><title>{title}</title></path>'
        )
    if cls == "center-candidate":
        return (
            f'<g stroke="{fill}" fill="none" stroke-width="2">'
            f'<circle cx="{cx:.2f}" cy="{cy:.2f}" r="6"/>'
            f'<circle cx="{cx:.2f}" cy="{cy:.2f}" r="2.5"/>'
            f"<title>{title}</title></g>"
        )
    stroke = "#d93025" if cls.startswith("unstable") else "#202124"
    return (
        f'<circle cx="{cx:.2f}" cy="{cy:.2f}" r="6" fill="{fill}" '
        f'stroke="{stroke}" stroke-width="2"><title>{title}</title></circle>'
    )


def render_portrait(doc: PortraitDoc) -> Tuple[bytes, bytes]:
    """Deterministic SVG and JSON renderings of a portrait document."""
    parts: List[str] = []
    parts.append(
        '<svg xmlns="http://www.w3.org/2000/svg" width="800" height="800" '
        'viewBox="0 0 800 800">'
    )
    parts.append('<rect width="800" height="800" fill="#ffffff"/>')
    if doc.positive_quadrant_only:
        parts.append(
            '<clipPath id="quadrant"><path d="M 400 400 L 780 400 A 380 380 0 0 0 400 20 Z"/></clipPath>'
        )
        parts.append('<g clip-path="url(#quadrant)">')
    parts.append(
        '<circle cx="400" cy="400" r="380" fill="#fafafa" stroke="#202124" stroke-width="2"/>'
    )
    for tr in doc.trajectories:
        if len(tr.points) < 2:
            continue
        coords = " ".join(f"{x:.2f},{y:.2f}" for x, y in map(_svg_xy, tr.points))
        width = "1.8" if tr.role == "separatrix" else "1.0"
        parts.append(
            f'<polyline points="{coords}" fill="none" '
            f'stroke="{_ROLE_STROKE[tr.role]}" stroke-width="{width}"/>'
        )
    if doc.positive_quadrant_only:
        parts.append("</g>")
        parts.append(
            '<circle cx="400" cy="400" r="380" fill="none" stroke="#202124" stroke-width="2"/>'
        )
    for m in doc.markers:
        parts.append(_marker_glyph(m))
    regime_text = f"regime 1-AC: {doc.regime}" if doc.regime else ""
    parts.append(
        f'<text x="16" y="788" font-family="monospace" font-size="13" '
        f'fill="#202124">{regime_text}</text>'
    )
    parts.append("</svg>")
    svg = "\n".join(parts).encode("utf-8")

    jdoc = {
        "system": doc.system_text,
        "regime": doc.regime,
        "equilibria": [
            dict(
                equilibrium_fragment(m.record),
                chart=m.chart,
                disc=[round(m.disc[0], 6), round(m.disc[1], 6)],
                **(
                    {
                        "sectors": {
                            "hyperbolic": m.sectors.hyperbolic,
                            "parabolic": m.sectors.parabolic,
                            "elliptic": m.sectors.elliptic,
                            "status": m.sectors.status,
                        }
                    }
                    if m.sectors is not None
                    else {}
                ),
            )
            for m in doc.markers
        ],
        "trajectories": [
            {
                "seed": tr.seed_id,
                "role": tr.role,
                "direction": tr.direction,
                "reason": tr.reason,
                "points": [[round(x, 6), round(y, 6)] for x, y in tr.points],
            }
            for tr in doc.trajectories
        ],
    }
    js = json.dumps(jdoc, sort_keys=True, separators=(",", ":")).encode("utf-8")
    return svg, js
