"""Propeller planform geometry and nodus cross-section properties.

The blade is described by cross-sections sampled along the span.  Leading
and trailing edge coordinates ``L(x)``, ``T(x)`` and the pitch angle
``theta(x)`` are fitted as piecewise polynomials; ``L - T`` is the local
planform width entering the force integrals.  The nodus mid-span section
is reduced to scalar mechanical properties (area, camberline length,
``int t^3 dU``, bending inertias, quarter-chord arms) by integrating a
thin strip of varying thickness along the camberline.

Angles are radians and lengths meters everywhere in memory; files carry
degrees where the column name says so.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial import Polynomial

from .errors import DomainError, FitError, ParseError, ValidationError

GEOMETRY_COLUMNS = ("x", "y_le", "z_le", "y_te", "z_te", "theta_deg")
SECTION_COLUMNS = ("u", "y", "z", "t")


@dataclass(frozen=True)
class AirfoilSection:
    """One sampled blade cross-section.

    ``x`` is the span coordinate, ``(y_le, z_le)`` / ``(y_te, z_te)`` the
    leading/trailing edge coordinates and ``theta`` the local pitch angle
    in radians.
    """

    x: float
    y_le: float
    z_le: float
    y_te: float
    z_te: float
    theta: float

    def __post_init__(self):
        if self.x < 0:
            raise ValidationError(f"section at x={self.x}: span coordinate must be >= 0")
        if abs(self.y_le - self.y_te) <= 0:
            raise ValidationError(f"section at x={self.x}: zero planform chord")
        if not -math.pi / 2 < self.theta < math.pi / 2:
            raise ValidationError(f"section at x={self.x}: pitch angle out of (-pi/2, pi/2)")

    @property
    def chord(self) -> float:
        return abs(self.y_le - self.y_te)


@dataclass(frozen=True)
class PropellerGeometry:
    """Sampled blade plus the radii splitting hub, nodus and wing.

    ``r_wing = x_nodus + nodus_length`` is where the rigid wing begins.
    """

    sections: tuple[AirfoilSection, ...]
    r_hub: float
    x_nodus: float
    nodus_length: float
    r_tip: float
    n_blades: int = 2

    def __post_init__(self):
        xs = [s.x for s in self.sections]
        if any(b <= a for a, b in zip(xs, xs[1:])):
            raise ValidationError("sections must be strictly increasing in x")
        if not (0 < self.r_hub <= self.x_nodus < self.r_wing < self.r_tip):
            raise ValidationError(
                "radii must satisfy 0 < r_hub <= x_nodus < x_nodus + nodus_length < r_tip"
            )
        if self.nodus_length <= 0:
            raise ValidationError("nodus_length must be positive")
        if self.n_blades < 1:
            raise ValidationError("n_blades must be >= 1")

    @property
    def r_wing(self) -> float:
        return self.x_nodus + self.nodus_length

    @property
    def span_x(self) -> np.ndarray:
        return np.array([s.x for s in self.sections])


def load_geometry(
    path,
    *,
    r_hub: float,
    x_nodus: float,
    nodus_length: float,
    n_blades: int = 2,
    r_tip: float | None = None,
    delimiter: str = ",",
) -> PropellerGeometry:
    """Read a cross-section table (CSV, header ``x,y_le,z_le,y_te,z_te,theta_deg``).

    Pitch is converted to radians.  ``r_tip`` defaults to the outermost
    sampled section.  Raises :class:`ParseError` with the offending row
    index on malformed input, :class:`ValidationError` on broken
    invariants (e.g. non-monotone span coordinates).
    """
    rows = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh, delimiter=delimiter)
        try:
            header = next(reader)
        except StopIteration:
            raise ParseError(f"{path}: empty geometry file") from None
        header = [h.strip().lower() for h in header]
        if header != list(GEOMETRY_COLUMNS):
            raise ParseError(
                f"{path}: expected header {','.join(GEOMETRY_COLUMNS)}, got {','.join(header)}"
            )
        for i, row in enumerate(reader, start=1):
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != len(GEOMETRY_COLUMNS):
                raise ParseError(f"{path}: row {i}: expected {len(GEOMETRY_COLUMNS)} columns")
            try:
                vals = [float(c) for c in row]
            except ValueError as exc:
                raise ParseError(f"{path}: row {i}: {exc}") from None
            rows.append(vals)
    if not rows:
        raise ParseError(f"{path}: no data rows")
    xs = [r[0] for r in rows]
    if any(b <= a for a, b in zip(xs, xs[1:])):
        bad = next(i for i, (a, b) in enumerate(zip(xs, xs[1:]), start=2) if b <= a)
        raise ValidationError(f"{path}: row {bad}: span coordinate not strictly increasing")
    sections = tuple(
        AirfoilSection(x, y_le, z_le, y_te, z_te, math.radians(theta_deg))
        for x, y_le, z_le, y_te, z_te, theta_deg in rows
    )
    return PropellerGeometry(
        sections=sections,
        r_hub=r_hub,
        x_nodus=x_nodus,
        nodus_length=nodus_length,
        r_tip=r_tip if r_tip is not None else sections[-1].x,
        n_blades=n_blades,
    )


@dataclass(frozen=True)
class PlanformFunctions:
    """Piecewise-polynomial planform: L, T and theta as functions of span.

    ``edges`` holds the k+1 segment boundaries covering [0, r_tip];
    evaluation uses left-closed segments, so a query exactly on an
    interior boundary is answered by the right-hand segment.
    """

    edges: np.ndarray
    l_polys: tuple[Polynomial, ...]
    t_polys: tuple[Polynomial, ...]
    theta_polys: tuple[Polynomial, ...]
    orders: tuple[int, ...]
    residuals: tuple[float, ...]
    r_tip: float
    n_blades: int

    def __post_init__(self):
        object.__setattr__(self, "edges", np.asarray(self.edges, dtype=float))

    @property
    def n_segments(self) -> int:
        return len(self.orders)

    def segment_index(self, x) -> np.ndarray:
        idx = np.searchsorted(self.edges, x, side="right") - 1
        return np.clip(idx, 0, self.n_segments - 1)


def fit_planform(
    geom: PropellerGeometry,
    partition=None,
    orders=(2, 4),
) -> PlanformFunctions:
    """Least-squares piecewise polynomial fit of L, T, theta over the span.

    ``partition`` lists the interior segment boundaries (default: a single
    break at the wing start ``r_wing``).  ``orders`` gives one polynomial
    order per segment.  Each segment needs at least ``order + 1`` sampled
    sections.  Fitting uses numpy's scaled-domain least squares, which is
    solved by orthogonal decomposition rather than normal equations.
    """
    if partition is None:
        partition = [geom.r_wing]
    interior = sorted(float(p) for p in partition)
    edges = np.array([0.0, *interior, geom.r_tip])
    if any(b <= a for a, b in zip(edges, edges[1:])):
        raise ValidationError("partition boundaries must be strictly increasing inside (0, r_tip)")
    if len(orders) != len(edges) - 1:
        raise ValidationError(
            f"got {len(orders)} orders for {len(edges) - 1} segments"
        )

    xs = geom.span_x
    y_le = np.array([s.y_le for s in geom.sections])
    y_te = np.array([s.y_te for s in geom.sections])
    theta = np.array([s.theta for s in geom.sections])

    l_polys, t_polys, th_polys, residuals = [], [], [], []
    for i, order in enumerate(orders):
        lo, hi = edges[i], edges[i + 1]
        last = i == len(orders) - 1
        mask = (xs >= lo) & ((xs <= hi) if last else (xs < hi))
        n_pts = int(mask.sum())
        if n_pts < order + 1:
            raise FitError(
                f"segment {i} [{lo:.4g}, {hi:.4g}] has {n_pts} sections, "
                f"needs {order + 1} for order {order}"
            )
        seg_x = xs[mask]
        seg_max_resid = 0.0
        fitted = []
        for values in (y_le[mask], y_te[mask], theta[mask]):
            series, diag = Polynomial.fit(seg_x, values, order, full=True)
            rank = diag[1]
            if rank < order + 1:
                raise FitError(
                    f"segment {i}: rank-deficient fit (rank {rank} < {order + 1}); "
                    "use a lower order"
                )
            fitted.append(series)
            seg_max_resid = max(seg_max_resid, float(np.max(np.abs(series(seg_x) - values))))
        l_polys.append(fitted[0])
        t_polys.append(fitted[1])
        th_polys.append(fitted[2])
        residuals.append(seg_max_resid)

    return PlanformFunctions(
        edges=edges,
        l_polys=tuple(l_polys),
        t_polys=tuple(t_polys),
        theta_polys=tuple(th_polys),
        orders=tuple(int(o) for o in orders),
        residuals=tuple(residuals),
        r_tip=geom.r_tip,
        n_blades=geom.n_blades,
    )


def eval_planform(pf: PlanformFunctions, x):
    """Evaluate (L, T, theta) at span coordinate(s) ``x`` in [0, r_tip]."""
    arr = np.asarray(x, dtype=float)
    if np.any(arr < 0.0) or np.any(arr > pf.r_tip * (1 + 1e-12)):
        raise DomainError(f"span query outside [0, {pf.r_tip}]")
    idx = pf.segment_index(arr)
    if arr.ndim == 0:
        i = int(idx)
        return (
            float(pf.l_polys[i](arr)),
            float(pf.t_polys[i](arr)),
            float(pf.theta_polys[i](arr)),
        )
    L = np.empty_like(arr)
    T = np.empty_like(arr)
    th = np.empty_like(arr)
    for i in range(pf.n_segments):
        m = idx == i
        if np.any(m):
            L[m] = pf.l_polys[i](arr[m])
            T[m] = pf.t_polys[i](arr[m])
            th[m] = pf.theta_polys[i](arr[m])
    return L, T, th


@dataclass(frozen=True)
class CamberPoint:
    """Sample of the section median line: arc position, coordinates, thickness."""

    u: float
    y: float
    z: float
    t: float

    def __post_init__(self):
        if self.t < 0:
            raise ValidationError("camber thickness must be >= 0")


@dataclass(frozen=True)
class RepresentativeSection:
    """Mechanical properties of the nodus mid-span cross-section.

    ``thickness_integral`` is int t^3 dU along the camberline; ``i_y`` /
    ``i_z`` are centroidal second moments of area about the y / z axes.
    ``arm_y`` / ``arm_z`` are the quarter-chord torque arm bases
    |y_LE - y_TE| and |z_LE - z_TE| taken from the camberline end points.
    """

    camber: tuple[CamberPoint, ...]
    area: float
    camber_length: float
    thickness_integral: float
    i_y: float
    i_z: float
    arm_y: float
    arm_z: float

    def __post_init__(self):
        for name in ("area", "camber_length", "thickness_integral", "i_y", "i_z"):
            if getattr(self, name) <= 0:
                raise ValidationError(f"representative section: {name} must be positive")


def section_properties(camber) -> RepresentativeSection:
    """Integrate thin-strip section properties over the camberline points.

    The section is modeled as a strip of local thickness ``t`` normal to
    the median line.  Trapezoidal quadrature over the given points yields
    the camberline length U, area int t dU and int t^3 dU.  Bending
    inertias combine the parallel-axis term (t dU at the point position
    about the centroid) with the local plate term t^3/12 dU resolved by
    the segment orientation, so a straight strip recovers U t^3 / 12
    about its own axis.
    """
    camber = tuple(camber)
    if len(camber) < 3:
        raise ValidationError("need at least 3 camber points")
    us = np.array([p.u for p in camber])
    if np.any(np.diff(us) < 0):
        raise ValidationError("camber arc coordinate u must be non-decreasing")
    y = np.array([p.y for p in camber])
    z = np.array([p.z for p in camber])
    t = np.array([p.t for p in camber])

    dy, dz = np.diff(y), np.diff(z)
    ds = np.hypot(dy, dz)
    if np.any(ds == 0):
        raise ValidationError("coincident camber points")
    U = float(ds.sum())

    def trapz(f):
        return float(np.sum(0.5 * (f[:-1] + f[1:]) * ds))

    area = trapz(t)
    if area <= 0:
        raise ValidationError("zero section area")
    f_int = trapz(t**3)

    y_bar = trapz(t * y) / area
    z_bar = trapz(t * z) / area

    # segment orientation: cos/sin of the tangent angle against the y axis
    cos2 = (dy / ds) ** 2
    sin2 = (dz / ds) ** 2
    para_y = 0.5 * ((z[:-1] - z_bar) ** 2 * t[:-1] + (z[1:] - z_bar) ** 2 * t[1:]) * ds
    para_z = 0.5 * ((y[:-1] - y_bar) ** 2 * t[:-1] + (y[1:] - y_bar) ** 2 * t[1:]) * ds
    plate = 0.5 * (t[:-1] ** 3 + t[1:] ** 3) / 12.0 * ds
    i_y = float(np.sum(para_y + plate * cos2))
    i_z = float(np.sum(para_z + plate * sin2))

    return RepresentativeSection(
        camber=camber,
        area=area,
        camber_length=U,
        thickness_integral=f_int,
        i_y=i_y,
        i_z=i_z,
        arm_y=abs(y[0] - y[-1]),
        arm_z=abs(z[0] - z[-1]),
    )


def load_section(path, delimiter: str = ",") -> RepresentativeSection:
    """Read camber points (CSV ``u,y,z,t`` in meters) and reduce them."""
    points = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh, delimiter=delimiter)
        try:
            header = next(reader)
        except StopIteration:
            raise ParseError(f"{path}: empty section file") from None
        if [h.strip().lower() for h in header] != list(SECTION_COLUMNS):
            raise ParseError(f"{path}: expected header {','.join(SECTION_COLUMNS)}")
        for i, row in enumerate(reader, start=1):
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != 4:
                raise ParseError(f"{path}: row {i}: expected 4 columns")
            try:
                u, yy, zz, tt = (float(c) for c in row)
            except ValueError as exc:
                raise ParseError(f"{path}: row {i}: {exc}") from None
            points.append(CamberPoint(u, yy, zz, tt))
    return section_properties(points)
