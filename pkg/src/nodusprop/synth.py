"""Parametric synthetic blade generators.

The blade coordinates of real deformable propellers are not published,
so demos and tests run on synthetic planforms of matching scale: a
9-inch two-blade rotor with a 12 mm nodus.  The generators are smooth
closed-form functions, which makes dense-quadrature oracles and
refinement studies straightforward.
"""

from __future__ import annotations

import math

import numpy as np

from .aero import TableCoefficients
from .geometry import (
    AirfoilSection,
    CamberPoint,
    PropellerGeometry,
    RepresentativeSection,
    section_properties,
)

# default rotor dimensions (m): 9-inch diameter, hub at 13 mm, 12 mm nodus
R_TIP = 0.1143
R_HUB = 0.013
X_NODUS = 0.015
NODUS_LENGTH = 0.012


def planform_width(x, r_hub=R_HUB, r_tip=R_TIP, c_mid=0.019, c_end=0.008):
    """Smooth parabolic chord law peaking mid-span."""
    u = (np.asarray(x, dtype=float) - r_hub) / (r_tip - r_hub)
    return c_end + (c_mid - c_end) * 4.0 * u * (1.0 - u)


def pitch_angle(x, theta_root=0.55, theta_tip=0.28, r_hub=R_HUB, r_tip=R_TIP):
    """Linear washout from root to tip pitch (radians)."""
    u = (np.asarray(x, dtype=float) - r_hub) / (r_tip - r_hub)
    return theta_root + (theta_tip - theta_root) * u


def make_blade(
    n_sections: int = 24,
    r_hub: float = R_HUB,
    x_nodus: float = X_NODUS,
    nodus_length: float = NODUS_LENGTH,
    r_tip: float = R_TIP,
    n_blades: int = 2,
    c_mid: float = 0.019,
    c_end: float = 0.008,
    theta_root: float = 0.55,
    theta_tip: float = 0.28,
    sweep_offset: float = 0.002,
) -> PropellerGeometry:
    """Sampled synthetic blade with smooth chord and twist laws."""
    xs = np.linspace(r_hub, r_tip, n_sections)
    widths = planform_width(xs, r_hub, r_tip, c_mid, c_end)
    thetas = pitch_angle(xs, theta_root, theta_tip, r_hub, r_tip)
    u = (xs - r_hub) / (r_tip - r_hub)
    y_off = sweep_offset * u
    sections = []
    for x, w, th, off in zip(xs, widths, thetas, y_off):
        y_le = 0.55 * w + off
        y_te = -0.45 * w + off
        half_z = 0.5 * w * math.tan(th)
        sections.append(
            AirfoilSection(float(x), float(y_le), float(half_z), float(y_te), float(-half_z), float(th))
        )
    return PropellerGeometry(
        sections=tuple(sections),
        r_hub=r_hub,
        x_nodus=x_nodus,
        nodus_length=nodus_length,
        r_tip=r_tip,
        n_blades=n_blades,
    )


def make_camberline(
    n_points: int = 10,
    camber_length: float = 0.0131,
    camber_height: float = 0.0030,
    z_tilt: float = 0.0050,
    t_max: float = 0.0090,
    t_edge_frac: float = 0.35,
) -> list[CamberPoint]:
    """Tilted curved camberline with a sine thickness profile.

    ``z_tilt`` raises the trailing end point, giving the section a
    nonzero |z_LE - z_TE| quarter-chord arm.
    """
    s = np.linspace(0.0, 1.0, n_points)
    y = (s - 0.5) * camber_length
    z = camber_height * np.sin(math.pi * s) + z_tilt * s
    t = t_max * (t_edge_frac + (1.0 - t_edge_frac) * np.sin(math.pi * s))
    du = np.concatenate([[0.0], np.cumsum(np.hypot(np.diff(y), np.diff(z)))])
    return [
        CamberPoint(float(u), float(yy), float(zz), float(tt))
        for u, yy, zz, tt in zip(du, y, z, t)
    ]


def make_section(**kwargs) -> RepresentativeSection:
    """Representative nodus section built from the synthetic camberline."""
    return section_properties(make_camberline(**kwargs))


def stalling_coefficients(
    c_l0: float = 0.0,
    c_l_alpha: float = 4.0,
    c_d0: float = 0.015,
    k_induced: float = 0.20,
    stall_deg: float = 38.0,
    plateau_deg: float = 80.0,
    n_table: int = 161,
) -> TableCoefficients:
    """Bounded lookup-table coefficients: thin-airfoil core, flat post-stall.

    The linear lift law holds inside ``+-stall_deg``; beyond that the
    lift fades to 80% of its stall value by ``plateau_deg`` and stays
    flat, keeping the force integrals bounded at large twist.
    """
    theta = np.linspace(-math.radians(plateau_deg), math.radians(plateau_deg), n_table)
    stall = math.radians(stall_deg)
    effective = np.clip(theta, -stall, stall)
    c_l = c_l0 + c_l_alpha * effective
    beyond = np.abs(theta) > stall
    span = math.radians(plateau_deg) - stall
    fade = np.ones_like(theta)
    fade[beyond] = 1.0 - 0.2 * np.minimum((np.abs(theta[beyond]) - stall) / span, 1.0)
    c_l = c_l * fade
    c_d = c_d0 + k_induced * c_l**2
    return TableCoefficients(theta, c_l, c_d)
