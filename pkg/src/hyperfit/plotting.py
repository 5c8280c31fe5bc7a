"""Static SVG figures.  Output is byte-stable: fixed hash salt, no date."""
from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

_RC = {
    "svg.hashsalt": "hyperfit",
    "svg.fonttype": "path",
    "font.size": 10,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "lines.linewidth": 1.5,
}


def _save(fig, path):
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)


def plot_fit_curves(curves, path):
    """``curves``: list of (label, stretch, measured, predicted)."""
    with plt.rc_context(_RC):
        fig, ax = plt.subplots(figsize=(5.0, 3.6))
        for k, (label, lam, meas, pred) in enumerate(curves):
            color = f"C{k % 10}"
            ax.plot(lam, meas, "o", ms=2.5, color=color, label=f"{label} measured")
            ax.plot(lam, pred, "--", color=color, label=f"{label} Yeoh fit")
        ax.set_xlabel("Uniaxial stretch λ₁ [-]")
        ax.set_ylabel("Load F₁ [N]")
        if len(curves) <= 6:
            ax.legend(fontsize=7, frameon=False)
        _save(fig, path)


def plot_prediction(lam, load, path, label=None):
    with plt.rc_context(_RC):
        fig, ax = plt.subplots(figsize=(5.0, 3.6))
        ax.plot(lam, load, "-", color="C0", label=label)
        ax.set_xlabel("Uniaxial stretch λ₁ [-]")
        ax.set_ylabel("Load F₁ [N]")
        if label:
            ax.legend(frameon=False)
        _save(fig, path)


def plot_sweep(sweep, dense_p, dense_v, path, title=None):
    from .actuator import QUANTITIES

    name, unit, _ = QUANTITIES[sweep.quantity]
    with plt.rc_context(_RC):
        fig, ax = plt.subplots(figsize=(5.0, 3.6))
        ax.plot(dense_p, dense_v, "-", color="C0", label="shape-preserving interpolant")
        ax.plot(sweep.pressure_kpa, sweep.values, "o", color="C1", label="measured")
        ax.set_xlabel("Pressure [kPa]")
        ax.set_ylabel(f"{name} [{unit}]")
        if title:
            ax.set_title(title, fontsize=9)
        ax.legend(frameon=False, fontsize=8)
        _save(fig, path)


def plot_mass(series_list, equilibria, path):
    """Mass curves with a vertical marker at each detected equilibrium time."""
    with plt.rc_context(_RC):
        fig, ax = plt.subplots(figsize=(5.0, 3.6))
        for k, s in enumerate(series_list):
            color = f"C{k % 10}"
            ax.plot(s.time_h, s.mass_g, "o-", ms=2.5, color=color, label=s.composition_label)
            t_eq = equilibria.get(s.composition_label)
            if t_eq is not None:
                ax.axvline(t_eq, color=color, ls=":", lw=1)
                ax.annotate(f"{t_eq:g} h", (t_eq, s.mass_g.max()), color=color,
                            fontsize=8, xytext=(3, 0), textcoords="offset points")
        ax.set_xlabel("Time [h]")
        ax.set_ylabel("Mass [g]")
        ax.legend(frameon=False, fontsize=8)
        _save(fig, path)
