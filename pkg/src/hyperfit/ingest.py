"""CSV readers and writers for tensile, drying-mass and pressure-sweep data.

Files are UTF-8 CSV with optional comment headers::

    # units: lambda1=1, load_N=N
    # geometry: l0=35,w0=5,h0=0.5

Unknown comment lines are ignored.  Every parse error carries the source
row (1-based file line) and column name.
"""
from __future__ import annotations

import csv
import io
import math
from collections import OrderedDict
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, NotEquilibratedError, ParseError
from .fitting import TensileRecord
from .yeoh import DOGBONE, SpecimenGeometry

# canonical unit of every numeric column we know about
EXPECTED_UNITS = {
    "lambda1": "1",
    "length_mm": "mm",
    "load_N": "N",
    "l0_mm": "mm",
    "w0_mm": "mm",
    "h0_mm": "mm",
    "time_h": "h",
    "mass_g": "g",
    "pressure_kPa": "kPa",
    "angle_deg": "deg",
    "force_N": "N",
}
_UNIT_ALIASES = {"1": "1", "-": "1", "": "1", "deg": "deg", "°": "deg"}


@dataclass(frozen=True)
class RawTable:
    columns: tuple
    rows: tuple          # tuple of tuples of str
    line_numbers: tuple  # file line of each row
    units: dict
    meta: dict           # other "# key: value" headers


@dataclass(frozen=True)
class MassSeries:
    composition_label: str
    time_h: np.ndarray
    mass_g: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.time_h, dtype=float)
        m = np.asarray(self.mass_g, dtype=float)
        if t.shape != m.shape or t.ndim != 1 or len(t) < 2:
            raise DomainError("mass series needs matching time/mass vectors of length >= 2")
        if t[0] != 0:
            raise DomainError(f"{self.composition_label}: time must start at 0 h")
        if np.any(np.diff(t) <= 0):
            raise DomainError(f"{self.composition_label}: time must be strictly increasing")
        if not np.all(np.isfinite(m)) or np.any(m <= 0):
            raise DomainError(f"{self.composition_label}: masses must be positive")
        object.__setattr__(self, "time_h", t)
        object.__setattr__(self, "mass_g", m)


def _decode(data):
    if isinstance(data, bytes):
        try:
            return data.decode("utf-8-sig")
        except UnicodeDecodeError as exc:
            raise ParseError(f"not valid UTF-8: {exc}") from None
    return data


def _parse_kv(text, row):
    out = {}
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if "=" not in part:
            raise ParseError(f"malformed header entry {part!r}", row=row)
        k, v = part.split("=", 1)
        out[k.strip()] = v.strip()
    return out


def read_table(data) -> RawTable:
    """Split a CSV into header metadata, column names and string cells."""
    text = _decode(data)
    units, meta = {}, {}
    columns = None
    rows, lines = [], []
    reader = csv.reader(io.StringIO(text))
    for lineno, cells in enumerate(reader, start=1):
        if not cells or all(not c.strip() for c in cells):
            continue
        first = cells[0].lstrip()
        if first.startswith("#"):
            body = ",".join(cells).lstrip()[1:]
            if ":" in body:
                key, value = body.split(":", 1)
                key = key.strip().lower()
                if key == "units":
                    units.update(_parse_kv(value, lineno))
                else:
                    meta[key] = (value.strip(), lineno)
            continue
        cells = [c.strip() for c in cells]
        if columns is None:
            if len(set(cells)) != len(cells):
                raise ParseError("duplicate column names", row=lineno)
            columns = tuple(cells)
            continue
        if len(cells) != len(columns):
            raise ParseError(f"expected {len(columns)} cells, found {len(cells)}", row=lineno)
        rows.append(tuple(cells))
        lines.append(lineno)
    if columns is None:
        raise ParseError("empty file: no header row")
    for col, unit in units.items():
        expected = EXPECTED_UNITS.get(col)
        if expected is not None and _UNIT_ALIASES.get(unit, unit) != expected:
            raise ParseError(f"unit mismatch: declared {unit!r}, expected {expected!r}", column=col)
    return RawTable(columns, tuple(rows), tuple(lines), units, meta)


def _number(cell, row, column):
    try:
        v = float(cell)
    except ValueError:
        raise ParseError(f"not a number: {cell!r}", row=row, column=column) from None
    if not math.isfinite(v):
        raise ParseError(f"non-finite value {cell!r}", row=row, column=column)
    return v


def _require(table, *names):
    for name in names:
        if name not in table.columns:
            raise ParseError(f"missing required column (have {', '.join(table.columns)})", column=name)


def _geometry_header(table):
    if "geometry" not in table.meta:
        return DOGBONE
    text, row = table.meta["geometry"]
    kv = _parse_kv(text, row)
    try:
        return SpecimenGeometry(float(kv["l0"]), float(kv["w0"]), float(kv["h0"]))
    except KeyError as exc:
        raise ParseError(f"geometry header lacks {exc.args[0]}", row=row) from None
    except (ValueError, DomainError) as exc:
        raise ParseError(f"bad geometry header: {exc}", row=row) from None


def parse_tensile_csv(data) -> list[TensileRecord]:
    """One TensileRecord per specimen, in order of first appearance.

    Stretch comes from a ``lambda1`` column or is computed as
    ``length_mm / l0``.  Optional per-row ``l0_mm, w0_mm, h0_mm`` columns
    override the ``# geometry:`` header, which itself defaults to the
    35 x 5 x 0.5 mm dogbone.
    """
    table = read_table(data)
    _require(table, "specimen_id", "load_N")
    if "lambda1" in table.columns:
        stretch_col = "lambda1"
    elif "length_mm" in table.columns:
        stretch_col = "length_mm"
    else:
        raise ParseError("missing stretch column: need lambda1 or length_mm", column="lambda1")
    if not table.rows:
        raise ParseError("no data rows")
    col = {name: i for i, name in enumerate(table.columns)}
    per_row_geom = all(c in col for c in ("l0_mm", "w0_mm", "h0_mm"))
    header_geom = _geometry_header(table)

    groups: OrderedDict[str, dict] = OrderedDict()
    for cells, row in zip(table.rows, table.line_numbers):
        sid = cells[col["specimen_id"]]
        if not sid:
            raise ParseError("empty specimen_id", row=row, column="specimen_id")
        comp = cells[col["composition"]] if "composition" in col else ""
        if per_row_geom:
            try:
                geom = SpecimenGeometry(*(_number(cells[col[c]], row, c)
                                          for c in ("l0_mm", "w0_mm", "h0_mm")))
            except DomainError as exc:
                raise ParseError(str(exc), row=row, column="l0_mm") from None
        else:
            geom = header_geom
        raw = _number(cells[col[stretch_col]], row, stretch_col)
        lam = raw if stretch_col == "lambda1" else raw / geom.l0
        load = _number(cells[col["load_N"]], row, "load_N")
        g = groups.setdefault(sid, {"comp": comp, "geom": geom, "lam": [], "load": [], "rows": []})
        if comp != g["comp"]:
            raise ParseError(f"specimen {sid!r} changes composition", row=row, column="composition")
        if geom != g["geom"]:
            raise ParseError(f"specimen {sid!r} changes geometry", row=row, column="l0_mm")
        if not g["lam"] and lam < 1:
            raise ParseError(f"stretch {lam:g} < 1 before any tension sample", row=row, column=stretch_col)
        if g["lam"] and lam <= g["lam"][-1]:
            raise ParseError("stretch not strictly increasing", row=row, column=stretch_col)
        if load < 0:
            raise ParseError("negative load", row=row, column="load_N")
        g["lam"].append(lam)
        g["load"].append(load)
        g["rows"].append(row)

    records = []
    for sid, g in groups.items():
        try:
            records.append(TensileRecord(sid, g["comp"], g["geom"],
                                         np.column_stack([g["lam"], g["load"]])))
        except DomainError as exc:
            raise ParseError(str(exc), row=g["rows"][0], column="specimen_id") from None
    return records


def serialize_tensile_csv(records) -> str:
    """Inverse of :func:`parse_tensile_csv` using shortest round-trip floats.

    Only samples up to each record's break index are written, since the
    break is implied by the last row of a specimen.
    """
    records = list(records)
    geoms = {r.geometry for r in records}
    uniform = len(geoms) == 1
    buf = io.StringIO()
    buf.write("# units: lambda1=1, load_N=N\n")
    cols = ["specimen_id", "composition", "lambda1", "load_N"]
    if uniform:
        g = next(iter(geoms))
        buf.write(f"# geometry: l0={g.l0!r},w0={g.w0!r},h0={g.h0!r}\n")
    else:
        cols += ["l0_mm", "w0_mm", "h0_mm"]
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(cols)
    for r in records:
        for lam, load in r.samples[: r.break_index + 1]:
            row = [r.specimen_id, r.composition_label, repr(float(lam)), repr(float(load))]
            if not uniform:
                row += [repr(r.geometry.l0), repr(r.geometry.w0), repr(r.geometry.h0)]
            w.writerow(row)
    return buf.getvalue()


def parse_mass_csv(data) -> list[MassSeries]:
    """Drying-mass series keyed by composition, in order of appearance."""
    table = read_table(data)
    _require(table, "composition", "time_h", "mass_g")
    if not table.rows:
        raise ParseError("no data rows")
    col = {name: i for i, name in enumerate(table.columns)}
    groups: OrderedDict[str, tuple] = OrderedDict()
    for cells, row in zip(table.rows, table.line_numbers):
        comp = cells[col["composition"]]
        t = _number(cells[col["time_h"]], row, "time_h")
        m = _number(cells[col["mass_g"]], row, "mass_g")
        ts, ms = groups.setdefault(comp, ([], []))
        if not ts and t != 0:
            raise ParseError("series must start at time 0", row=row, column="time_h")
        if ts and t <= ts[-1]:
            raise ParseError("time not strictly increasing", row=row, column="time_h")
        if m <= 0:
            raise ParseError("mass must be positive", row=row, column="mass_g")
        ts.append(t)
        ms.append(m)
    out = []
    for comp, (ts, ms) in groups.items():
        try:
            out.append(MassSeries(comp, np.array(ts), np.array(ms)))
        except DomainError as exc:
            raise ParseError(str(exc), column="time_h") from None
    return out


def detect_equilibrium(series: MassSeries, window=12.0, rel_tol=0.01) -> float:
    """Earliest sample time t at which the mass stays within ``rel_tol`` of
    m(t) over the whole window [t, t + window].

    The relative change is (max - min) / m(t) over the samples in the window.
    Raises NotEquilibratedError when no such t exists with the window
    fully inside the record.
    """
    if not window > 0:
        raise DomainError("window must be positive")
    if not 0 < rel_tol < 1:
        raise DomainError("rel_tol must lie in (0, 1)")
    t, m = series.time_h, series.mass_g
    if t[-1] - t[0] < window:
        raise NotEquilibratedError(
            f"{series.composition_label}: series spans {t[-1] - t[0]:g} h, shorter than the {window:g} h window")
    # small slack so hourly grids hit t + window exactly
    eps = 1e-9 * max(1.0, window)
    for i, start in enumerate(t):
        end = start + window
        if end > t[-1] + eps:
            break
        inside = m[i: np.searchsorted(t, end + eps, side="right")]
        change = (inside.max() - inside.min()) / m[i]
        if change < rel_tol:
            return float(start)
    raise NotEquilibratedError(
        f"{series.composition_label}: mass never settles within {rel_tol:g} over {window:g} h")


@dataclass(frozen=True)
class SweepData:
    quantity: str
    pressure_kpa: np.ndarray
    values: np.ndarray


def parse_pressure_csv(data) -> SweepData:
    """Pressure sweep with columns ``pressure_kPa`` and one of
    ``angle_deg`` (bending angle) or ``force_N`` (blocked force)."""
    table = read_table(data)
    _require(table, "pressure_kPa")
    if "angle_deg" in table.columns:
        vcol, quantity = "angle_deg", "bending_angle"
    elif "force_N" in table.columns:
        vcol, quantity = "force_N", "blocked_force"
    else:
        raise ParseError("missing response column: need angle_deg or force_N", column="angle_deg")
    if len(table.rows) < 2:
        raise ParseError("a sweep needs at least two rows")
    col = {name: i for i, name in enumerate(table.columns)}
    p, v = [], []
    for cells, row in zip(table.rows, table.line_numbers):
        pk = _number(cells[col["pressure_kPa"]], row, "pressure_kPa")
        if p and pk <= p[-1]:
            raise ParseError("pressure not strictly increasing", row=row, column="pressure_kPa")
        p.append(pk)
        v.append(_number(cells[col[vcol]], row, vcol))
    return SweepData(quantity, np.array(p), np.array(v))


def parse_comparison_csv(data):
    """Rows of ``label, force_N, pressure_kPa``; returns (label, force, pressure) tuples."""
    table = read_table(data)
    _require(table, "label", "force_N", "pressure_kPa")
    if not table.rows:
        raise ParseError("no data rows")
    col = {name: i for i, name in enumerate(table.columns)}
    out = []
    for cells, row in zip(table.rows, table.line_numbers):
        out.append((cells[col["label"]],
                    _number(cells[col["force_N"]], row, "force_N"),
                    _number(cells[col["pressure_kPa"]], row, "pressure_kPa")))
    return out
