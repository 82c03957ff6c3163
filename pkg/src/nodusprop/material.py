"""Effective elastic moduli of the fiber-reinforced nodus.

The nodus is a silicone matrix with embedded monofilament tendons; its
homogenized Young and shear moduli follow the Chamis square-root-of-
volume-fraction micromechanics rule:

    E = E_m / (1 - sqrt(v_f) * (1 - E_m / E_f))

and identically for G.  The fiber volume fraction comes from the fiber
count/diameter and the representative cross-section area.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

from .errors import InfeasibleGeometryError, ModelDomainError, ParseError, ValidationError

# recorded constituent metadata only; no relation here consumes it
POISSON_RATIO = 0.4

MATERIAL_KEYS = (
    "e_matrix_pa",
    "g_matrix_pa",
    "e_fiber_pa",
    "g_fiber_pa",
    "n_fibers",
    "d_fiber_m",
)


@dataclass(frozen=True)
class CompositeSpec:
    """Constituent moduli (Pa) plus the fiber packing of the section."""

    e_matrix: float
    g_matrix: float
    e_fiber: float
    g_fiber: float
    n_fibers: int
    d_fiber: float
    area: float

    def __post_init__(self):
        for name in ("e_matrix", "g_matrix", "e_fiber", "g_fiber"):
            if getattr(self, name) <= 0:
                raise ValidationError(f"{name} must be positive")
        if self.n_fibers < 0 or self.d_fiber < 0:
            raise ValidationError("fiber count and diameter must be >= 0")
        if self.area <= 0:
            raise ValidationError("section area must be positive")

    @property
    def v_f(self) -> float:
        return fiber_volume_fraction(self.n_fibers, self.d_fiber, self.area)


@dataclass(frozen=True)
class ElasticModuli:
    """Homogenized nodus moduli (Pa)."""

    e_nodus: float
    g_nodus: float


def fiber_volume_fraction(n_fibers: int, d_fiber: float, area: float) -> float:
    """Fiber area fraction n * pi d^2/4 / A of the composite section."""
    if area <= 0:
        raise ValidationError("section area must be positive")
    v_f = n_fibers * math.pi * d_fiber**2 / 4.0 / area
    if v_f > 1.0:
        raise InfeasibleGeometryError(
            f"fiber area exceeds section area (v_f = {v_f:.4g} > 1)"
        )
    return v_f


def chamis_from_fraction(modulus_matrix: float, modulus_fiber: float, v_f: float) -> float:
    """One Chamis homogenization for a single modulus pair."""
    if not 0.0 <= v_f <= 1.0:
        raise ValidationError(f"volume fraction {v_f} outside [0, 1]")
    denom = 1.0 - math.sqrt(v_f) * (1.0 - modulus_matrix / modulus_fiber)
    if denom <= 0.0:
        raise ModelDomainError(
            "Chamis denominator non-positive (matrix stiffer than fiber at high v_f)"
        )
    return modulus_matrix / denom


def chamis_moduli(spec: CompositeSpec) -> ElasticModuli:
    """Homogenized E and G for the composite section."""
    v_f = spec.v_f
    return ElasticModuli(
        e_nodus=chamis_from_fraction(spec.e_matrix, spec.e_fiber, v_f),
        g_nodus=chamis_from_fraction(spec.g_matrix, spec.g_fiber, v_f),
    )


def load_material(path, area: float) -> CompositeSpec:
    """Read a material config (JSON object with the ``MATERIAL_KEYS``).

    ``area`` is the representative-section area the fiber fraction is
    measured against.
    """
    try:
        with open(path) as fh:
            raw = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: {exc}") from None
    missing = [k for k in MATERIAL_KEYS if k not in raw]
    if missing:
        raise ParseError(f"{path}: missing keys: {', '.join(missing)}")
    return CompositeSpec(
        e_matrix=float(raw["e_matrix_pa"]),
        g_matrix=float(raw["g_matrix_pa"]),
        e_fiber=float(raw["e_fiber_pa"]),
        g_fiber=float(raw["g_fiber_pa"]),
        n_fibers=int(raw["n_fibers"]),
        d_fiber=float(raw["d_fiber_m"]),
        area=area,
    )
