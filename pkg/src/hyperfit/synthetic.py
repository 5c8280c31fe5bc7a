"""Synthetic tensile records and drying curves for fixtures and demos."""
from __future__ import annotations

import numpy as np

from .fitting import TensileRecord
from .yeoh import DOGBONE, YeohParameters, uniaxial_loading

#: Mean constants (MPa) reported for the two gelatin/glycerol films.
TABLE1_MEANS = {
    "GEL/GLY 1:1": YeohParameters(0.45, 0.0572, -0.0021),
    "GEL/GLY 1:2": YeohParameters(0.12, 0.046, -0.0033),
}


def synthetic_record(params, specimen_id="S1", composition="synthetic",
                     geom=DOGBONE, n_points=50, lambda_max=2.5, noise=0.0,
                     rng=None):
    """Record sampled from the model on an even grid over [1, lambda_max].

    ``noise`` is the relative standard deviation of multiplicative Gaussian
    noise on the load.
    """
    lam = np.linspace(1.0, lambda_max, n_points)
    load = np.asarray(uniaxial_loading(params, geom, lam), dtype=float)
    if noise:
        rng = np.random.default_rng(rng)
        load = load * (1.0 + noise * rng.standard_normal(n_points))
        load = np.maximum(load, 0.0)
    return TensileRecord(specimen_id, composition, geom, np.column_stack([lam, load]))


def synthetic_batch(params, composition, n_specimens=5, seed=0, noise=0.01,
                    spread=0.0, geom=DOGBONE, n_points=50, lambda_max=2.5,
                    break_spread=0.0):
    """Several specimens of one composition.

    ``spread`` perturbs each specimen's constants by a relative Gaussian
    factor and ``break_spread`` does the same for the stretch at break,
    mimicking specimen-to-specimen scatter.
    """
    rng = np.random.default_rng(seed)
    out = []
    for k in range(n_specimens):
        p = params
        if spread:
            f = 1.0 + spread * rng.standard_normal(3)
            p = YeohParameters(params.c1 * abs(f[0]), params.c2 * f[1], params.c3 * f[2])
        sid = f"{composition.replace('GEL/GLY ', 'G').replace(':', '-').replace(' ', '_')}-{k + 1}"
        lam_max = lambda_max
        if break_spread:
            lam_max = max(1.1, lambda_max * (1.0 + break_spread * rng.standard_normal()))
        out.append(synthetic_record(p, sid, composition, geom, n_points, lam_max,
                                    noise, rng))
    return out


def drying_curve(final_mass=10.0, water_mass=10.0, time_constant=12.0, hours=72, step=1.0):
    """Exponential water loss m(t) = final + water * exp(-t / tau), in grams."""
    t = np.arange(0.0, hours + step / 2, step)
    return t, final_mass + water_mass * np.exp(-t / time_constant)
