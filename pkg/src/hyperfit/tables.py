"""Text and CSV renderings of per-composition constants and properties."""
from __future__ import annotations

import csv
import io

from .actuator import fmt

CONSTANT_ROWS = (("C1", "c1"), ("C2", "c2"), ("C3", "c3"))
PROPERTY_ROWS = (
    ("Young's modulus [MPa]", "youngs_modulus"),
    ("Tensile strength [MPa]", "tensile_strength"),
    ("Elongation at break [%]", "elongation_at_break"),
)


def _cell(stat):
    if stat is None:
        return "n/a"
    if isinstance(stat, (int, float)):
        return fmt(stat)
    return f"{fmt(stat.mean)} ± {fmt(stat.std)}"


def _align(rows):
    widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
    out = []
    for k, r in enumerate(rows):
        out.append("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip())
        if k == 0:
            out.append("  ".join("-" * w for w in widths))
    return "\n".join(out) + "\n"


def layout_table(first_header, row_spec, columns):
    """``columns`` is a list of (label, object-with-attributes) pairs.

    Attributes may be ``Stat`` (rendered as mean ± std), floats, or None.
    """
    rows = [(first_header, *(label for label, _ in columns))]
    for title, attr in row_spec:
        rows.append((title, *(_cell(getattr(obj, attr)) for _, obj in columns)))
    return _align(rows)


def constants_table(summaries):
    return layout_table("Constant [MPa]", CONSTANT_ROWS,
                        [(s.composition_label, s) for s in summaries])


def properties_table(columns):
    return layout_table("Property", PROPERTY_ROWS, columns)


def summary_csv(summaries):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["composition", "quantity", "unit", "n", "mean", "std"])
    spec = [("c1", "MPa"), ("c2", "MPa"), ("c3", "MPa"), ("youngs_modulus", "MPa"),
            ("tensile_strength", "MPa"), ("elongation_at_break", "%")]
    for s in summaries:
        for attr, unit in spec:
            stat = getattr(s, attr)
            if stat is None:
                continue
            w.writerow([s.composition_label, attr, unit, s.n, fmt(stat.mean), fmt(stat.std)])
    return buf.getvalue()
