"""Aerodynamic forces of rigid and deformable-joint propellers.

Force components follow the blade-element form

    F_i = rho * omega^2 * int C_i(theta(x)) * (L(x) - T(x)) * x^2 dx

over the span, times the blade count, with i in {n, t, l, d} for
normal (thrust-direction), tangential, lift and drag.  A deformable
propeller bends and twists its nodus under these loads; the bent wing
sees a reduced pitch ``theta - gamma`` and projected width, which feeds
back into the forces.  ``solve_tombo`` resolves that coupling by
under-relaxed fixed-point iteration, and ``sweep`` walks a speed grid to
locate the maximum-thrust and maximum lift-over-drag operating points.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from functools import lru_cache

import numpy as np

from .errors import (
    DivergenceError,
    DomainError,
    NearSingularPitchError,
    SweepError,
    ValidationError,
)
from .geometry import PlanformFunctions, PropellerGeometry, RepresentativeSection, eval_planform
from .material import ElasticModuli

RPM_TO_RAD = math.pi / 30.0

# bending angles beyond this are outside model validity; the solver
# saturates instead of producing |angle| >= pi/2 states
BEND_LIMIT = 1.4

FORCE_COMPONENTS = ("f_n", "f_t", "f_l", "f_d")


class CoefficientModel:
    """Dimensionless force coefficients as functions of local pitch.

    Subclasses provide ``lift_drag(theta) -> (C_l, C_d)``; the normal and
    tangential components are resolved from those:

        C_n = C_l cos(theta) + C_d sin(theta)
        C_t = C_l sin(theta) - C_d cos(theta)
    """

    def lift_drag(self, theta):
        raise NotImplementedError

    def evaluate(self, theta):
        """Stack (C_n, C_t, C_l, C_d) for pitch angle(s) ``theta``."""
        theta = np.asarray(theta, dtype=float)
        c_l, c_d = self.lift_drag(theta)
        c, s = np.cos(theta), np.sin(theta)
        return np.stack([c_l * c + c_d * s, c_l * s - c_d * c, c_l, c_d])


@dataclass(frozen=True)
class ParametricCoefficients(CoefficientModel):
    """Thin-airfoil-like model: C_l linear in pitch, parabolic drag polar."""

    c_l0: float = 0.1
    c_l_alpha: float = 5.7
    c_d0: float = 0.02
    k_induced: float = 0.05

    def __post_init__(self):
        if self.c_d0 <= 0:
            raise ValidationError("c_d0 must be positive so that C_d > 0")

    def lift_drag(self, theta):
        c_l = self.c_l0 + self.c_l_alpha * np.asarray(theta, dtype=float)
        return c_l, self.c_d0 + self.k_induced * c_l**2


class TableCoefficients(CoefficientModel):
    """Lookup-table model, linear interpolation, end values held outside."""

    def __init__(self, theta, c_l, c_d):
        theta = np.asarray(theta, dtype=float)
        c_l = np.asarray(c_l, dtype=float)
        c_d = np.asarray(c_d, dtype=float)
        if theta.ndim != 1 or len(theta) < 2:
            raise ValidationError("coefficient table needs >= 2 pitch samples")
        if np.any(np.diff(theta) <= 0):
            raise ValidationError("coefficient table pitch must be strictly increasing")
        if c_l.shape != theta.shape or c_d.shape != theta.shape:
            raise ValidationError("coefficient table columns must share one length")
        if np.any(c_d <= 0):
            raise ValidationError("C_d must be positive everywhere")
        self.theta = theta
        self.c_l = c_l
        self.c_d = c_d

    def lift_drag(self, theta):
        theta = np.asarray(theta, dtype=float)
        return (
            np.interp(theta, self.theta, self.c_l),
            np.interp(theta, self.theta, self.c_d),
        )


@dataclass(frozen=True)
class OperatingPoint:
    """Rotational speed (rad/s) and air density (kg/m^3)."""

    omega: float
    rho: float = 1.225

    def __post_init__(self):
        if self.omega < 0:
            raise ValidationError("omega must be >= 0")
        if self.rho <= 0:
            raise ValidationError("air density must be positive")


@dataclass(frozen=True)
class DeformationState:
    """Nodus deformation: bending alpha (Oxy), beta (Oxz), twist gamma."""

    alpha: float
    beta: float
    gamma: float

    def __post_init__(self):
        if not (abs(self.alpha) < math.pi / 2 and abs(self.beta) < math.pi / 2):
            raise ValidationError("bending angles must satisfy |angle| < pi/2")
        if not math.isfinite(self.gamma):
            raise ValidationError("twist angle must be finite")

    @staticmethod
    def zero() -> "DeformationState":
        return DeformationState(0.0, 0.0, 0.0)


@dataclass(frozen=True)
class AeroForces:
    """Force components (N), applied torque (N m) and lift-over-drag."""

    f_n: float
    f_t: float
    f_l: float
    f_d: float
    t_or: float = 0.0
    eps_lod: float = 0.0

    @staticmethod
    def from_components(f_n, f_t, f_l, f_d, t_or=0.0) -> "AeroForces":
        eps = f_l / f_d if f_d != 0.0 else 0.0
        return AeroForces(float(f_n), float(f_t), float(f_l), float(f_d), float(t_or), eps)

    def components(self) -> np.ndarray:
        return np.array([self.f_n, self.f_t, self.f_l, self.f_d])

    def is_finite(self) -> bool:
        return bool(np.all(np.isfinite(self.components())))


def combine_forces(*parts: AeroForces, t_or: float = 0.0) -> AeroForces:
    total = np.sum([p.components() for p in parts], axis=0)
    return AeroForces.from_components(*total, t_or=t_or)


@dataclass(frozen=True)
class SolverOptions:
    """Fixed-point loop controls."""

    max_iters: int = 100
    tol: float = 1e-6
    n_quad: int = 128
    relaxation: float = 0.5

    def __post_init__(self):
        if self.max_iters < 1:
            raise ValidationError("max_iters must be >= 1")
        if self.tol <= 0:
            raise ValidationError("tol must be positive")
        if self.n_quad < 8:
            raise ValidationError("n_quad must be >= 8")
        if not 0 < self.relaxation <= 1:
            raise ValidationError("relaxation must be in (0, 1]")


@dataclass(frozen=True)
class RegionForces:
    """Per-region force split: hub, nodus, wing."""

    hub: AeroForces
    nodus: AeroForces
    wing: AeroForces


@dataclass(frozen=True)
class SolveResult:
    forces: AeroForces
    deform: DeformationState
    iterations: int
    converged: bool
    force_split: RegionForces


@dataclass(frozen=True)
class SweepResult:
    """Per-speed solutions plus refined critical operating points."""

    points: tuple  # of (omega, SolveResult)
    omega_mtf: float
    t_max: float
    gamma_mtf: float
    mtf_at_boundary: bool
    omega_mld: float
    eps_mld: float
    gamma_mld: float
    mld_at_boundary: bool


@lru_cache(maxsize=16)
def _gauss_base(n: int):
    return np.polynomial.legendre.leggauss(n)


def _gauss_nodes(a: float, b: float, n: int):
    base_x, base_w = _gauss_base(n)
    half = 0.5 * (b - a)
    return 0.5 * (a + b) + half * base_x, half * base_w


def rigid_integrand(pf: PlanformFunctions, cm: CoefficientModel, op: OperatingPoint, x):
    """Per-blade rigid force integrand, stacked (n, t, l, d) over ``x``."""
    L, T, theta = eval_planform(pf, np.asarray(x, dtype=float))
    return op.rho * op.omega**2 * cm.evaluate(theta) * (L - T) * np.square(x)


def deformed_integrand(
    pf: PlanformFunctions,
    cm: CoefficientModel,
    op: OperatingPoint,
    d: DeformationState,
    x,
):
    """Per-blade deformed-wing integrand over ``x``.

    The wing, rigidly rotated by the nodus deformation, contributes

        C_i(theta - gamma) * cos(alpha) cos(beta) cos(theta - gamma) / cos(theta)

    in place of the rigid coefficient; at zero deformation this reduces
    exactly to the rigid integrand.
    """
    x = np.asarray(x, dtype=float)
    L, T, theta = eval_planform(pf, x)
    cos_theta = np.cos(theta)
    if np.any(np.abs(cos_theta) < 1e-6):
        raise NearSingularPitchError("cos(theta) vanishes on the integration span")
    theta_de = theta - d.gamma
    factor = math.cos(d.alpha) * math.cos(d.beta) * np.cos(theta_de) / cos_theta
    return op.rho * op.omega**2 * cm.evaluate(theta_de) * factor * (L - T) * np.square(x)


def _integrate(pf, integrand, span, n_quad):
    """Gauss-Legendre integral of a stacked integrand, split at planform breaks."""
    a, b = float(span[0]), float(span[1])
    if not 0 <= a < b <= pf.r_tip * (1 + 1e-12):
        raise DomainError(f"invalid integration span [{a}, {b}]")
    cuts = [a] + [e for e in pf.edges if a < e < b] + [b]
    total = 0.0
    for lo, hi in zip(cuts, cuts[1:]):
        x, w = _gauss_nodes(lo, hi, n_quad)
        total = total + integrand(x) @ w
    return total


def rigid_forces(
    pf: PlanformFunctions,
    cm: CoefficientModel,
    op: OperatingPoint,
    span,
    n_quad: int = 128,
) -> AeroForces:
    """Blade-element forces of the undeformed propeller over ``span``."""
    vals = _integrate(pf, lambda x: rigid_integrand(pf, cm, op, x), span, n_quad)
    return AeroForces.from_components(*(pf.n_blades * vals))


def deformed_wing_forces(
    pf: PlanformFunctions,
    cm: CoefficientModel,
    op: OperatingPoint,
    d: DeformationState,
    span,
    n_quad: int = 128,
) -> AeroForces:
    """Forces of the deformation-rotated wing over ``span``."""
    vals = _integrate(pf, lambda x: deformed_integrand(pf, cm, op, d, x), span, n_quad)
    return AeroForces.from_components(*(pf.n_blades * vals))


def bending_angles(
    f_y: float,
    f_z: float,
    e_nodus: float,
    i_z: float,
    i_y: float,
    nodus_length: float,
) -> tuple[float, float]:
    """Cantilever tip-load bending of the nodus.

    alpha = F_y L^2 / (2 E I_z) in the rotor plane, beta = F_z L^2 /
    (2 E I_y) out of plane.  In the coupled solve, F_y is the wing drag
    resultant and F_z the wing tangential resultant.
    """
    if e_nodus <= 0 or i_y <= 0 or i_z <= 0 or nodus_length <= 0:
        raise ValidationError("stiffness parameters must be positive")
    factor = nodus_length**2 / (2.0 * e_nodus)
    return f_y * factor / i_z, f_z * factor / i_y


def applied_torque(
    pf: PlanformFunctions,
    cm: CoefficientModel,
    op: OperatingPoint,
    span,
    arm_y: float,
    arm_z: float,
    n_quad: int = 128,
) -> float:
    """Quarter-chord torque of the span's tangential and drag loads.

    dT = dF_t |y_LE - y_TE|/4 + dF_d |z_LE - z_TE|/4 with the arms held
    at their representative-section values, so the torque factorizes into
    the span force resultants.
    """
    if arm_y < 0 or arm_z < 0:
        raise ValidationError("torque arms must be >= 0")
    forces = rigid_forces(pf, cm, op, span, n_quad)
    return (forces.f_t * arm_y + forces.f_d * arm_z) / 4.0


def twist_angle(
    t_or: float,
    g_nodus: float,
    sect: RepresentativeSection,
    nodus_length: float,
) -> float:
    """Torsion of the elongated nodus section under torque ``t_or``.

    gamma = 3 (1 + 4 F / (3 A U^2)) T L / (G F) with F = int t^3 dU.
    """
    if g_nodus <= 0:
        raise ValidationError("shear modulus must be positive")
    f_int = sect.thickness_integral
    if f_int <= 0:
        raise ValidationError("singular section: int t^3 dU must be positive")
    shape = 1.0 + 4.0 * f_int / (3.0 * sect.area * sect.camber_length**2)
    return 3.0 * shape * t_or * nodus_length / (g_nodus * f_int)


def wing_rotation(d: DeformationState) -> np.ndarray:
    """Wing attitude R = R_z(alpha) R_y(beta) R_x(gamma), fixed axes.

    R_y uses the convention mapping x-hat to -z-hat at beta = +pi/2.
    """
    ca, sa = math.cos(d.alpha), math.sin(d.alpha)
    cb, sb = math.cos(d.beta), math.sin(d.beta)
    cg, sg = math.cos(d.gamma), math.sin(d.gamma)
    r_z = np.array([[ca, -sa, 0.0], [sa, ca, 0.0], [0.0, 0.0, 1.0]])
    r_y = np.array([[cb, 0.0, sb], [0.0, 1.0, 0.0], [-sb, 0.0, cb]])
    r_x = np.array([[1.0, 0.0, 0.0], [0.0, cg, -sg], [0.0, sg, cg]])
    return r_z @ r_y @ r_x


def _region_spans(geom: PropellerGeometry):
    return (
        (0.0, geom.x_nodus),
        (geom.x_nodus, geom.r_wing),
        (geom.r_wing, geom.r_tip),
    )


def solve_rigid(
    geom: PropellerGeometry,
    pf: PlanformFunctions,
    cm: CoefficientModel,
    op: OperatingPoint,
    opts: SolverOptions = SolverOptions(),
) -> SolveResult:
    """Single-pass rigid solution with the hub/nodus/wing force split."""
    hub, nod, wing = (rigid_forces(pf, cm, op, s, opts.n_quad) for s in _region_spans(geom))
    total = combine_forces(hub, nod, wing)
    return SolveResult(
        forces=total,
        deform=DeformationState.zero(),
        iterations=1,
        converged=True,
        force_split=RegionForces(hub, nod, wing),
    )


def _saturate_bend(angle: float) -> float:
    return max(-BEND_LIMIT, min(BEND_LIMIT, angle))


def solve_tombo(
    geom: PropellerGeometry,
    pf: PlanformFunctions,
    cm: CoefficientModel,
    sect: RepresentativeSection,
    mod: ElasticModuli,
    op: OperatingPoint,
    opts: SolverOptions = SolverOptions(),
) -> SolveResult:
    """Coupled aeroelastic solution of the deformable propeller.

    Starting from the rigid wing forces, each iteration derives the
    bending angles from the wing drag/tangential resultants, the
    quarter-chord torque and twist, re-evaluates the deformed wing
    forces and under-relaxes.  Hub and nodus contributions stay rigid.
    Terminates when |dF_t| + |dF_d| < tol; hitting the iteration cap
    returns the last iterate flagged ``converged=False``.
    """
    span_hub, span_nod, span_wing = _region_spans(geom)
    hub = rigid_forces(pf, cm, op, span_hub, opts.n_quad)
    nod = rigid_forces(pf, cm, op, span_nod, opts.n_quad)
    wing = rigid_forces(pf, cm, op, span_wing, opts.n_quad)

    lam = opts.relaxation
    total = combine_forces(hub, nod, wing)
    f_t_last, f_d_last = total.f_t, total.f_d
    deform = DeformationState.zero()
    t_or = 0.0
    converged = False
    iterations = 0

    for iterations in range(1, opts.max_iters + 1):
        alpha, beta = bending_angles(
            wing.f_d, wing.f_t, mod.e_nodus, sect.i_z, sect.i_y, geom.nodus_length
        )
        t_or = (wing.f_t * sect.arm_y + wing.f_d * sect.arm_z) / 4.0
        gamma = twist_angle(t_or, mod.g_nodus, sect, geom.nodus_length)
        deform = DeformationState(_saturate_bend(alpha), _saturate_bend(beta), gamma)

        new_wing = deformed_wing_forces(pf, cm, op, deform, span_wing, opts.n_quad)
        blended = (1.0 - lam) * wing.components() + lam * new_wing.components()
        wing = AeroForces.from_components(*blended)
        if not wing.is_finite():
            raise DivergenceError(
                f"non-finite wing forces at iteration {iterations}", iteration=iterations
            )

        total = combine_forces(hub, nod, wing, t_or=t_or)
        residual = abs(total.f_t - f_t_last) + abs(total.f_d - f_d_last)
        f_t_last, f_d_last = total.f_t, total.f_d
        if residual < opts.tol:
            converged = True
            break

    return SolveResult(
        forces=total,
        deform=deform,
        iterations=iterations,
        converged=converged,
        force_split=RegionForces(hub, nod, wing),
    )


def _parabolic_refine(omegas, values, i):
    """Vertex of the parabola through points i-1, i, i+1 (grid argmax refine)."""
    x0, x1, x2 = omegas[i - 1], omegas[i], omegas[i + 1]
    y0, y1, y2 = values[i - 1], values[i], values[i + 1]
    num = (x1 - x0) ** 2 * (y1 - y2) - (x1 - x2) ** 2 * (y1 - y0)
    den = (x1 - x0) * (y1 - y2) - (x1 - x2) * (y1 - y0)
    if den == 0.0 or not math.isfinite(num / den):
        return x1
    x_star = x1 - 0.5 * num / den
    return min(max(x_star, x0), x2)


def sweep(
    geom: PropellerGeometry,
    pf: PlanformFunctions,
    cm: CoefficientModel,
    sect: RepresentativeSection | None,
    mod: ElasticModuli | None,
    rho: float,
    omega_grid,
    opts: SolverOptions = SolverOptions(),
) -> SweepResult:
    """Solve across a strictly increasing speed grid and locate criticals.

    ``mod=None`` sweeps the rigid propeller.  The maximum-thrust and
    maximum lift-over-drag speeds are grid argmaxes refined by parabolic
    interpolation and re-solved, recording the twist angle there; maxima
    sitting on the grid ends are flagged as boundary.
    """
    omegas = np.asarray(list(omega_grid), dtype=float)
    if len(omegas) < 3 or np.any(np.diff(omegas) <= 0):
        raise ValidationError("omega grid must be strictly increasing with >= 3 points")

    def solve_at(omega: float) -> SolveResult:
        op = OperatingPoint(omega=float(omega), rho=rho)
        if mod is None:
            return solve_rigid(geom, pf, cm, op, opts)
        return solve_tombo(geom, pf, cm, sect, mod, op, opts)

    results = []
    failures = []
    for omega in omegas:
        try:
            results.append(solve_at(omega))
        except DivergenceError:
            failures.append(float(omega))
            results.append(None)
    if failures:
        raise SweepError(
            f"solves diverged at omega = {failures} rad/s", failed_speeds=failures
        )

    thrust = np.array([r.forces.f_n for r in results])
    eps = np.array([r.forces.eps_lod for r in results])

    def refine(values):
        i = int(np.argmax(values))
        at_boundary = i == 0 or i == len(values) - 1
        if at_boundary:
            return float(omegas[i]), results[i], True
        omega_star = _parabolic_refine(omegas, values, i)
        return float(omega_star), solve_at(omega_star), False

    omega_mtf, res_mtf, mtf_boundary = refine(thrust)
    omega_mld, res_mld, mld_boundary = refine(eps)

    return SweepResult(
        points=tuple(zip((float(w) for w in omegas), results)),
        omega_mtf=omega_mtf,
        t_max=res_mtf.forces.f_n,
        gamma_mtf=res_mtf.deform.gamma,
        mtf_at_boundary=mtf_boundary,
        omega_mld=omega_mld,
        eps_mld=res_mld.forces.eps_lod,
        gamma_mld=res_mld.deform.gamma,
        mld_at_boundary=mld_boundary,
    )
