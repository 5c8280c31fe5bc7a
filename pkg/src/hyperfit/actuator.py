"""Bending-angle and blocked-force sweeps of a pneumatic bending actuator."""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, ExtrapolationError

#: Highest pressure applied during characterization, kPa.
TESTED_MAX_KPA = 25.0

QUANTITIES = {
    "bending_angle": ("Bending angle", "deg", "°"),
    "blocked_force": ("Blocked force", "N", " N"),
}


@dataclass(frozen=True)
class PressureSweep:
    quantity: str
    pressure_kpa: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        if self.quantity not in QUANTITIES:
            raise DomainError(f"unknown quantity {self.quantity!r}")
        p = np.asarray(self.pressure_kpa, dtype=float)
        v = np.asarray(self.values, dtype=float)
        if p.ndim != 1 or p.shape != v.shape or len(p) < 2:
            raise DomainError("sweep needs at least two (pressure, value) samples")
        if not (np.all(np.isfinite(p)) and np.all(np.isfinite(v))):
            raise DomainError("sweep samples must be finite")
        if np.any(np.diff(p) <= 0):
            raise DomainError("pressure must be strictly increasing")
        object.__setattr__(self, "pressure_kpa", p)
        object.__setattr__(self, "values", v)

    @property
    def in_envelope(self):
        """Mask of samples inside the tested 0-25 kPa range."""
        return (self.pressure_kpa >= 0) & (self.pressure_kpa <= TESTED_MAX_KPA)

    @property
    def unit(self):
        return QUANTITIES[self.quantity][1]


@dataclass(frozen=True)
class TipPose:
    initial_angle: float
    current_angle: float

    def __post_init__(self):
        for a in (self.initial_angle, self.current_angle):
            if not -360 < a < 360:
                raise DomainError(f"tip angle {a!r} outside (-360, 360)")


def bending_angle(pose: TipPose, wrap=False, turns=0):
    """Tip angle change current - initial, in degrees.

    With ``wrap=True`` the difference is folded into (-180, 180] and
    ``turns`` full revolutions are added back, for callers that know the
    tip went past half a turn.
    """
    d = pose.current_angle - pose.initial_angle
    if not wrap:
        return d
    d = -((-d + 180.0) % 360.0 - 180.0)
    return d + 360.0 * turns


def pchip_slopes(x, y):
    """Node derivatives limited per Fritsch & Carlson (1980).

    Interior slopes start from the mean of adjacent secants (zero at local
    extrema) and are scaled back onto the radius-3 circle where needed, so
    each cubic piece is monotone on its interval.  End slopes are the
    one-sided secants.
    """
    h = np.diff(x)
    delta = np.diff(y) / h
    m = np.empty_like(y)
    m[0] = delta[0]
    m[-1] = delta[-1]
    m[1:-1] = 0.5 * (delta[:-1] + delta[1:])
    m[1:-1][delta[:-1] * delta[1:] <= 0] = 0.0
    for k in range(len(delta)):
        d = delta[k]
        if d == 0.0:
            m[k] = m[k + 1] = 0.0
            continue
        # slopes against the secant direction are zeroed
        if m[k] * d < 0:
            m[k] = 0.0
        if m[k + 1] * d < 0:
            m[k + 1] = 0.0
        # (m_k/d)^2 + (m_k+1/d)^2 <= 9, written without dividing by d
        r = np.hypot(m[k], m[k + 1])
        if r > 3.0 * abs(d):
            scale = 3.0 * abs(d) / r
            m[k] *= scale
            m[k + 1] *= scale
    return m


def _hermite(x, y, m, q):
    k = np.clip(np.searchsorted(x, q, side="right") - 1, 0, len(x) - 2)
    h = x[k + 1] - x[k]
    t = (q - x[k]) / h
    t2 = t * t
    t3 = t2 * t
    out = ((2 * t3 - 3 * t2 + 1) * y[k] + (t3 - 2 * t2 + t) * h * m[k]
           + (-2 * t3 + 3 * t2) * y[k + 1] + (t3 - t2) * h * m[k + 1])
    # exact at the nodes
    hit = t == 0.0
    out = np.where(hit, y[k], out)
    out = np.where(q == x[-1], y[-1], out)
    return out


def interpolate(sweep: PressureSweep, pressure, extrapolate=False):
    """Shape-preserving cubic value of the sweep at ``pressure`` (kPa).

    Outside the sampled range raises ExtrapolationError unless
    ``extrapolate`` is set, in which case the end secant is continued
    linearly.
    """
    x, y = sweep.pressure_kpa, sweep.values
    q = np.asarray(pressure, dtype=float)
    outside = (q < x[0]) | (q > x[-1])
    if np.any(outside) and not extrapolate:
        raise ExtrapolationError(
            f"pressure outside sampled range [{x[0]:g}, {x[-1]:g}] kPa")
    m = pchip_slopes(x, y)
    inner = np.clip(q, x[0], x[-1])
    out = _hermite(x, y, m, inner)
    if extrapolate and np.any(outside):
        lo = y[0] + (q - x[0]) * (y[1] - y[0]) / (x[1] - x[0])
        hi = y[-1] + (q - x[-1]) * (y[-1] - y[-2]) / (x[-1] - x[-2])
        out = np.where(q < x[0], lo, np.where(q > x[-1], hi, out))
    return out if out.ndim else float(out)


def fmt(value):
    """Six significant digits, the fixed text format of all artifacts."""
    return f"{float(value):.6g}"


def headline(sweep: PressureSweep):
    """Response at the highest sampled pressure, e.g. ``170.3° at 25 kPa``."""
    suffix = QUANTITIES[sweep.quantity][2]
    return f"{fmt(sweep.values[-1])}{suffix} at {fmt(sweep.pressure_kpa[-1])} kPa"


@dataclass(frozen=True)
class ComparisonRow:
    label: str
    force: float
    pressure: float

    def __post_init__(self):
        if not self.force >= 0:
            raise DomainError(f"{self.label}: force must be non-negative")
        if not self.pressure > 0:
            raise DomainError(f"{self.label}: pressure must be positive")

    @property
    def entry(self):
        return f"{fmt(self.force)} at {fmt(self.pressure)} kPa"


#: Published blocked forces of the edible actuator and four elastomer designs.
TABLE3_ROWS = (
    ComparisonRow("Edible gelatin actuator", 0.3, 25.0),
    ComparisonRow("Elastomer actuator A", 0.2, 25.0),
    ComparisonRow("Elastomer actuator B", 0.4, 25.0),
    ComparisonRow("Elastomer actuator C", 0.5, 40.0),
    ComparisonRow("Elastomer actuator D", 0.5, 50.0),
)


def comparison_report(rows) -> str:
    """Column-aligned text table of blocked forces, rows in input order."""
    rows = list(rows)
    if not rows:
        raise DomainError("comparison table needs at least one row")
    head = ("Pneumatic actuator", "Blocked force [N]")
    body = [(r.label, r.entry) for r in rows]
    w0 = max(len(head[0]), *(len(a) for a, _ in body))
    w1 = max(len(head[1]), *(len(b) for _, b in body))
    lines = [f"{head[0]:<{w0}}  {head[1]:<{w1}}".rstrip(), f"{'-' * w0}  {'-' * w1}"]
    lines += [f"{a:<{w0}}  {b:<{w1}}".rstrip() for a, b in body]
    return "\n".join(lines) + "\n"


def comparison_csv(rows) -> str:
    rows = list(rows)
    if not rows:
        raise DomainError("comparison table needs at least one row")
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["label", "force_N", "pressure_kPa"])
    for r in rows:
        w.writerow([r.label, fmt(r.force), fmt(r.pressure)])
    return buf.getvalue()
