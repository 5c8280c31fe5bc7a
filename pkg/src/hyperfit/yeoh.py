"""Three-term Yeoh model under incompressible uniaxial extension.

Units are MPa for stresses and energy densities and mm for lengths, so
loads come out in N without conversion factors.  All functions accept
scalars or numpy arrays for the stretch argument.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

#: Poisson's ratio of an incompressible solid.
POISSON_RATIO = 0.5


@dataclass(frozen=True)
class YeohParameters:
    """Material constants C1, C2, C3 in MPa.  C2 and C3 may be negative."""

    c1: float
    c2: float
    c3: float

    def __post_init__(self):
        for name in ("c1", "c2", "c3"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise DomainError(f"{name} must be finite, got {value!r}")
        if not self.c1 > 0:
            raise DomainError(f"c1 must be positive, got {self.c1!r}")

    def as_array(self):
        return np.array([self.c1, self.c2, self.c3], dtype=float)

    @classmethod
    def from_array(cls, values):
        c1, c2, c3 = (float(v) for v in values)
        return cls(c1, c2, c3)


@dataclass(frozen=True)
class SpecimenGeometry:
    """Initial dogbone gauge dimensions in mm."""

    l0: float
    w0: float
    h0: float

    def __post_init__(self):
        for name in ("l0", "w0", "h0"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise DomainError(f"{name} must be a positive length, got {value!r}")

    @property
    def area(self):
        """Initial cross-section w0 * h0 in mm^2."""
        return self.w0 * self.h0


#: Gauge dimensions of the dogbone coupons used for the gelatin films.
DOGBONE = SpecimenGeometry(l0=35.0, w0=5.0, h0=0.5)


@dataclass(frozen=True)
class StretchState:
    """Principal stretches of an incompressible bar pulled along axis 1."""

    lambda1: float

    def __post_init__(self):
        _check_stretch(self.lambda1)

    @property
    def lambda2(self):
        return 1.0 / np.sqrt(self.lambda1)

    @property
    def lambda3(self):
        return self.lambda2

    @classmethod
    def from_length(cls, length, l0):
        return cls(length / l0)


@dataclass(frozen=True)
class MaterialProperties:
    youngs_modulus: float
    shear_modulus: float
    tensile_strength: float | None
    elongation_at_break: float | None
    poisson_ratio: float = POISSON_RATIO


def _check_stretch(lambda1):
    lam = np.asarray(lambda1, dtype=float)
    if not np.all(np.isfinite(lam)) or np.any(lam <= 0):
        raise DomainError("stretch ratio must be finite and strictly positive")
    return lam


def invariant_excess(lambda1):
    """I1 - 3 for uniaxial incompressible stretch.

    Evaluated in the factored form (l - 1)^2 (l + 2) / l, which is exactly
    zero at l = 1 and free of cancellation nearby.
    """
    lam = _check_stretch(lambda1)
    out = (lam - 1.0) ** 2 * (lam + 2.0) / lam
    return out if out.ndim else float(out)


def strain_invariant(state: StretchState):
    """First invariant I1 = l1^2 + l2^2 + l3^2 = l1^2 + 2/l1."""
    return 3.0 + invariant_excess(state.lambda1)


def _slope_sum(params, x):
    # sum_i i * C_i * (I1 - 3)^(i - 1)
    return params.c1 + 2.0 * params.c2 * x + 3.0 * params.c3 * x * x


def strain_energy_density(params: YeohParameters, lambda1):
    """W = sum_i C_i (I1 - 3)^i in MPa."""
    x = invariant_excess(lambda1)
    return x * (params.c1 + x * (params.c2 + x * params.c3))


def uniaxial_cauchy_stress(params: YeohParameters, lambda1):
    """Axial Cauchy stress l1 dW/dl1 in MPa."""
    x = invariant_excess(lambda1)
    lam = np.asarray(lambda1, dtype=float)
    out = 2.0 * (lam * lam - 1.0 / lam) * _slope_sum(params, x)
    return out if np.ndim(out) else float(out)


def uniaxial_loading(params: YeohParameters, geom: SpecimenGeometry, lambda1):
    """Axial load in N on a specimen of the given initial cross-section."""
    x = invariant_excess(lambda1)
    lam = np.asarray(lambda1, dtype=float)
    out = 2.0 * geom.h0 * geom.w0 * (lam - 1.0 / (lam * lam)) * _slope_sum(params, x)
    return out if np.ndim(out) else float(out)


def loading_basis(geom: SpecimenGeometry, lambda1):
    """Design matrix B with uniaxial_loading = B @ [c1, c2, c3].

    The load is linear in the constants, column i being the load produced
    by C_i = 1 with the other two zero.
    """
    lam = _check_stretch(lambda1)
    x = (lam - 1.0) ** 2 * (lam + 2.0) / lam
    g = 2.0 * geom.h0 * geom.w0 * (lam - 1.0 / (lam * lam))
    return np.column_stack([g, 2.0 * g * x, 3.0 * g * x * x])


def tensile_strength(measured_load_at_break, geom: SpecimenGeometry, lambda_eab):
    """Cauchy stress at break, F_break * l_break / (w0 h0), in MPa."""
    if not measured_load_at_break >= 0:
        raise DomainError("load at break must be non-negative")
    if not lambda_eab >= 1:
        raise DomainError(f"stretch at break must be >= 1, got {lambda_eab!r}")
    return measured_load_at_break / geom.area * lambda_eab


def elongation_percent(lambda_eab):
    """Elongation at break as percent strain, (l - 1) * 100."""
    return (lambda_eab - 1.0) * 100.0


def stretch_from_elongation(percent):
    return 1.0 + percent / 100.0


def derive_properties(params: YeohParameters, lambda_eab=None, load_at_break=None,
                      geom: SpecimenGeometry = DOGBONE) -> MaterialProperties:
    """Engineering properties from fitted constants.

    Shear modulus is 2 C1 and Young's modulus 2 mu (1 + nu) with nu = 0.5.
    Tensile strength and elongation are filled in only when the break point
    is supplied.
    """
    mu = 2.0 * params.c1
    E = 2.0 * mu * (1.0 + POISSON_RATIO)
    if lambda_eab is None or load_at_break is None:
        sigma_ts = None
        eab = None
    else:
        sigma_ts = tensile_strength(load_at_break, geom, lambda_eab)
        eab = elongation_percent(lambda_eab)
    return MaterialProperties(youngs_modulus=E, shear_modulus=mu,
                              tensile_strength=sigma_ts, elongation_at_break=eab)
