"""Least-squares identification of Yeoh constants from load-stretch records."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateFitError, DomainError
from .yeoh import (
    MaterialProperties,
    SpecimenGeometry,
    YeohParameters,
    loading_basis,
)

C1_LOWER_BOUND = 1e-6
MIN_SAMPLES = 5


@dataclass(frozen=True)
class TensileRecord:
    """One specimen pulled to rupture.

    ``samples`` is an (n, 2) array of (stretch, load in N).  The last
    sample used for fitting is ``break_index`` (defaults to the final row).
    """

    specimen_id: str
    composition_label: str
    geometry: SpecimenGeometry
    samples: np.ndarray
    break_index: int | None = None

    def __post_init__(self):
        s = np.array(self.samples, dtype=float)
        if s.ndim != 2 or s.shape[1] != 2:
            raise DomainError("samples must be a sequence of (stretch, load) pairs")
        if len(s) < MIN_SAMPLES:
            raise DomainError(f"{self.specimen_id}: need at least {MIN_SAMPLES} samples, got {len(s)}")
        if not np.all(np.isfinite(s)):
            raise DomainError(f"{self.specimen_id}: samples must be finite")
        lam, load = s[:, 0], s[:, 1]
        if lam[0] < 1:
            raise DomainError(f"{self.specimen_id}: first stretch {lam[0]!r} < 1 (tension-only data)")
        if np.any(np.diff(lam) <= 0):
            raise DomainError(f"{self.specimen_id}: stretch must be strictly increasing")
        if np.any(load < 0):
            raise DomainError(f"{self.specimen_id}: loads must be non-negative")
        s.setflags(write=False)
        object.__setattr__(self, "samples", s)
        bi = len(s) - 1 if self.break_index is None else int(self.break_index)
        if not 0 <= bi < len(s):
            raise DomainError(f"{self.specimen_id}: break_index {bi} out of range")
        object.__setattr__(self, "break_index", bi)

    @property
    def stretch(self):
        return self.samples[: self.break_index + 1, 0]

    @property
    def load(self):
        return self.samples[: self.break_index + 1, 1]

    @property
    def lambda_eab(self):
        return float(self.samples[self.break_index, 0])

    @property
    def load_at_break(self):
        return float(self.samples[self.break_index, 1])

    def __eq__(self, other):
        if not isinstance(other, TensileRecord):
            return NotImplemented
        return (self.specimen_id == other.specimen_id
                and self.composition_label == other.composition_label
                and self.geometry == other.geometry
                and self.break_index == other.break_index
                and np.array_equal(self.samples, other.samples))

    __hash__ = None


@dataclass(frozen=True)
class FitConfig:
    tol: float = 1e-10
    max_iterations: int = 200
    weighted: bool = False
    # "linear": closed-form start, polished by the damped solver.
    # "lm": damped solver from the small-strain initial guess.
    method: str = "linear"

    def __post_init__(self):
        if not self.tol > 0:
            raise DomainError("tol must be positive")
        if self.max_iterations < 1:
            raise DomainError("max_iterations must be >= 1")
        if self.method not in ("linear", "lm"):
            raise DomainError(f"unknown fit method {self.method!r}")


@dataclass(frozen=True)
class FitResult:
    specimen_id: str
    composition_label: str
    params: YeohParameters
    residual_rms: float
    per_point_residuals: tuple
    converged: bool
    iterations: int
    objective_history: tuple = field(default=(), repr=False)


@dataclass(frozen=True)
class SolveReport:
    x: np.ndarray
    converged: bool
    iterations: int
    history: tuple


def damped_least_squares(residual, jacobian, x0, lower=None, tol=1e-10,
                         max_iterations=200, damping=1e-3):
    """Minimize ||residual(x)||^2 by Levenberg-Marquardt with box projection.

    Each trial solves (J^T J + damping * diag(J^T J)) dx = -J^T r, projects
    x + dx onto ``lower``, and is accepted only if the objective drops; the
    damping shrinks tenfold on acceptance and grows tenfold on rejection.
    Stops when the relative objective decrease (achieved, or predicted by
    the linearization) falls below ``tol``.
    """
    x = np.array(x0, dtype=float)
    lo = None if lower is None else np.asarray(lower, dtype=float)
    if lo is not None:
        x = np.maximum(x, lo)
    r = residual(x)
    f = float(r @ r)
    history = [f]
    converged = False
    it = 0
    while it < max_iterations:
        if f == 0.0:
            converged = True
            break
        it += 1
        J = jacobian(x)
        g = J.T @ r
        A = J.T @ J
        D = np.diag(np.maximum(np.diag(A), 1e-300))
        try:
            step = np.linalg.solve(A + damping * D, -g)
        except np.linalg.LinAlgError:
            damping *= 10.0
            continue
        trial = x + step
        if lo is not None:
            trial = np.maximum(trial, lo)
        r_lin = r + J @ (trial - x)
        predicted = f - float(r_lin @ r_lin)
        if predicted <= tol * f:
            converged = True
            break
        r_new = residual(trial)
        f_new = float(r_new @ r_new)
        if f_new < f:
            rel = (f - f_new) / f
            x, r, f = trial, r_new, f_new
            history.append(f)
            damping = max(damping / 10.0, 1e-12)
            if rel < tol:
                converged = True
                break
        else:
            damping *= 10.0
            if damping > 1e16:
                # no descent direction left at floating-point resolution
                converged = True
                break
    return SolveReport(x=x, converged=converged, iterations=it, history=tuple(history))


def _weights(record, config):
    load = record.load
    if not config.weighted:
        return np.ones_like(load)
    floor = 1e-3 * max(float(np.max(np.abs(load))), 1e-12)
    return 1.0 / np.maximum(np.abs(load), floor)


def initial_guess(record: TensileRecord) -> YeohParameters:
    """Neo-Hookean secant estimate of C1 from the first strained sample.

    Prefers the first sample with 1 < stretch <= 1.05 and non-zero load,
    falling back to the first strained, loaded sample.  C2 = C3 = 0.
    """
    lam, load = record.stretch, record.load
    if not np.any(load > 0):
        raise DegenerateFitError(f"{record.specimen_id}: all loads are zero")
    usable = (lam > 1.0) & (load > 0)
    if not np.any(usable):
        raise DegenerateFitError(f"{record.specimen_id}: no loaded sample beyond the reference length")
    small = usable & (lam <= 1.05)
    i = int(np.argmax(small)) if np.any(small) else int(np.argmax(usable))
    g = record.geometry
    c1 = load[i] / (2.0 * g.h0 * g.w0 * (lam[i] - 1.0 / lam[i] ** 2))
    return YeohParameters(max(float(c1), C1_LOWER_BOUND), 0.0, 0.0)


def fit_yeoh(record: TensileRecord, config: FitConfig = FitConfig()) -> FitResult:
    """Fit C1..C3 to the record's loads up to and including the break sample."""
    B = loading_basis(record.geometry, record.stretch)
    y = record.load
    w = _weights(record, config)
    Bw = B * w[:, None]
    yw = y * w

    if config.method == "linear":
        x0, *_ = np.linalg.lstsq(Bw, yw, rcond=None)
        if not x0[0] > C1_LOWER_BOUND:
            raise DegenerateFitError(
                f"{record.specimen_id}: C1 driven to its lower bound ({x0[0]:.3g} MPa)")
    else:
        x0 = initial_guess(record).as_array()

    report = damped_least_squares(
        lambda c: Bw @ c - yw,
        lambda c: Bw,
        x0,
        lower=np.array([C1_LOWER_BOUND, -np.inf, -np.inf]),
        tol=config.tol,
        max_iterations=config.max_iterations,
    )
    c = report.x
    if c[0] <= C1_LOWER_BOUND:
        raise DegenerateFitError(f"{record.specimen_id}: C1 driven to its lower bound")
    resid = B @ c - y
    return FitResult(
        specimen_id=record.specimen_id,
        composition_label=record.composition_label,
        params=YeohParameters.from_array(c),
        residual_rms=float(np.sqrt(np.mean(resid ** 2))),
        per_point_residuals=tuple(float(v) for v in resid),
        converged=report.converged,
        iterations=report.iterations,
        objective_history=report.history,
    )


@dataclass(frozen=True)
class Stat:
    mean: float
    std: float


@dataclass(frozen=True)
class CompositionSummary:
    """Mean and sample (n - 1) standard deviation over specimens."""

    composition_label: str
    n: int
    c1: Stat
    c2: Stat
    c3: Stat
    youngs_modulus: Stat
    tensile_strength: Stat | None
    elongation_at_break: Stat | None
    specimen_ids: tuple = ()


def _stat(values):
    a = np.asarray(values, dtype=float)
    return Stat(float(np.mean(a)), float(np.std(a, ddof=1)))


def summarize_composition(fits) -> CompositionSummary:
    """Aggregate ``(FitResult, MaterialProperties)`` pairs of one composition."""
    fits = sorted(fits, key=lambda pair: pair[0].specimen_id)
    if len(fits) < 2:
        raise DomainError("need at least two specimens to summarize a composition")
    labels = {fr.composition_label for fr, _ in fits}
    if len(labels) != 1:
        raise DomainError(f"mixed compositions in one summary: {sorted(labels)}")
    props: list[MaterialProperties] = [p for _, p in fits]
    ts = [p.tensile_strength for p in props]
    eab = [p.elongation_at_break for p in props]
    return CompositionSummary(
        composition_label=labels.pop(),
        n=len(fits),
        c1=_stat([fr.params.c1 for fr, _ in fits]),
        c2=_stat([fr.params.c2 for fr, _ in fits]),
        c3=_stat([fr.params.c3 for fr, _ in fits]),
        youngs_modulus=_stat([p.youngs_modulus for p in props]),
        tensile_strength=None if None in ts else _stat(ts),
        elongation_at_break=None if None in eab else _stat(eab),
        specimen_ids=tuple(fr.specimen_id for fr, _ in fits),
    )
