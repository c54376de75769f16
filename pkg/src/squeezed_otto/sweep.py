"""Figure-data sweeps: optimal merit against T_c/T_h, or over an (r_c, r_h) grid.

Rows are plain dicts so the same list feeds the CSV, JSON and text writers.
Infeasible rows carry ``None`` for ``ratio_star`` and ``merit``; they are
written as empty CSV fields or JSON ``null``, never as NaN.
"""

from __future__ import annotations

import csv
import io
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .cycle import CycleConfig, Mode
from .exceptions import DomainError, InfeasibleError
from .optimum import Enhancement, classify_enhancement, optimum, reference_value


class Figure(str, Enum):
    TEMP_SWEEP_ENGINE = "2"
    SQUEEZE_GRID_ENGINE = "3"
    TEMP_SWEEP_FRIDGE = "4"
    SQUEEZE_GRID_FRIDGE = "5"
    CUSTOM = "custom"

    @property
    def is_grid(self) -> bool:
        return self in (Figure.SQUEEZE_GRID_ENGINE, Figure.SQUEEZE_GRID_FRIDGE)


TEMP_HEADER = ("tau", "rc", "rh", "ratio_star", "merit", "reference", "classification")
GRID_HEADER = ("rc", "rh", "ratio_star", "merit", "reference", "classification")

FIGURE_MODE = {
    Figure.TEMP_SWEEP_ENGINE: Mode.ENGINE,
    Figure.SQUEEZE_GRID_ENGINE: Mode.ENGINE,
    Figure.TEMP_SWEEP_FRIDGE: Mode.FRIDGE,
    Figure.SQUEEZE_GRID_FRIDGE: Mode.FRIDGE,
}

# squeeze pairs (r_c, r_h) singled out in the discussion of each curve family
DEFAULT_PAIRS = {
    Figure.TEMP_SWEEP_ENGINE: ((0.0, 0.0), (0.5, 1.0), (1.0, 0.5)),
    Figure.TEMP_SWEEP_FRIDGE: ((0.0, 0.0), (0.25, 0.5), (0.5, 0.25)),
}
DEFAULT_TAU = {Figure.SQUEEZE_GRID_ENGINE: 0.25, Figure.SQUEEZE_GRID_FRIDGE: 0.75}
DEFAULT_TAU_RANGE = {
    Mode.ENGINE: (0.01, 1.0, 100),
    Mode.FRIDGE: (0.01, 0.99, 99),
}
DEFAULT_GRID = (1.5, 50)
TEXT_DIGITS = 12


@dataclass(frozen=True)
class SweepSpec:
    figure: Figure
    mode: Mode | None = None
    fixed_tau: float | None = None
    tau_range: tuple[float, float, int] | None = None
    squeeze_pairs: tuple[tuple[float, float], ...] | None = None
    grid: tuple[float, int] = DEFAULT_GRID

    def __post_init__(self):
        fig = Figure(self.figure)
        object.__setattr__(self, "figure", fig)
        mode = Mode(self.mode) if self.mode is not None else FIGURE_MODE.get(fig, Mode.ENGINE)
        if fig in FIGURE_MODE and mode is not FIGURE_MODE[fig]:
            raise DomainError(f"figure {fig.value} is a {FIGURE_MODE[fig].value} sweep, got mode {mode.value}")
        object.__setattr__(self, "mode", mode)
        if fig.is_grid:
            tau = DEFAULT_TAU[fig] if self.fixed_tau is None else float(self.fixed_tau)
            if not tau > 0:
                raise DomainError(f"fixed_tau must be positive, got {tau!r}")
            object.__setattr__(self, "fixed_tau", tau)
            r_max, steps = self.grid
            if not r_max > 0:
                raise DomainError(f"r_max must be positive, got {r_max!r}")
            if int(steps) != steps or steps < 2:
                raise DomainError(f"grid steps must be an integer >= 2, got {steps!r}")
            object.__setattr__(self, "grid", (float(r_max), int(steps)))
        else:
            lo, hi, steps = self.tau_range or DEFAULT_TAU_RANGE[mode]
            if not 0.0 <= lo < hi <= 1.0:
                raise DomainError(f"tau range must satisfy 0 <= lo < hi <= 1, got ({lo!r}, {hi!r})")
            if int(steps) != steps or steps < 2:
                raise DomainError(f"steps must be an integer >= 2, got {steps!r}")
            object.__setattr__(self, "tau_range", (float(lo), float(hi), int(steps)))
            pairs = self.squeeze_pairs or DEFAULT_PAIRS.get(fig, ((0.0, 0.0),))
            pairs = tuple((float(rc), float(rh)) for rc, rh in pairs)
            if any(r < 0 for pair in pairs for r in pair):
                raise DomainError("squeeze parameters must be nonnegative")
            object.__setattr__(self, "squeeze_pairs", pairs)

    @property
    def header(self) -> tuple[str, ...]:
        return GRID_HEADER if self.figure.is_grid else TEMP_HEADER

    def points(self) -> list[tuple[float, float, float]]:
        """(tau, r_c, r_h) for every row, in output order."""
        if self.figure.is_grid:
            r_max, steps = self.grid
            rs = np.linspace(0.0, r_max, steps).tolist()
            return [(self.fixed_tau, rc, rh) for rc in rs for rh in rs]
        lo, hi, steps = self.tau_range
        taus = np.linspace(lo, hi, steps).tolist()
        return [(tau, rc, rh) for rc, rh in self.squeeze_pairs for tau in taus]


def _reference(tau: float, mode: Mode) -> float | None:
    if mode is Mode.FRIDGE and tau >= 1.0:
        return None
    if tau <= 0.0:
        return None
    if mode is Mode.ENGINE and tau > 1.0:
        return 1.0 - float(np.sqrt(tau))
    return reference_value(tau, mode)


def evaluate_point(tau: float, rc: float, rh: float, mode) -> dict:
    """One sweep row at T_h = 1, T_c = tau."""
    mode = Mode(mode)
    row = {"tau": tau, "rc": rc, "rh": rh, "ratio_star": None, "merit": None,
           "reference": _reference(tau, mode), "classification": Enhancement.INFEASIBLE.value}
    if tau <= 0.0:
        return row
    cfg = CycleConfig.from_values(tau, 1.0, rc, rh)
    try:
        result = optimum(cfg, mode)
    except InfeasibleError:
        return row
    row["ratio_star"] = result.ratio_star
    row["merit"] = result.merit
    row["classification"] = classify_enhancement(cfg, mode).value
    return row


def run_sweep(spec: SweepSpec, jobs: int = 1) -> list[dict]:
    """Evaluate every row of ``spec``; output order does not depend on ``jobs``."""
    points = spec.points()
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(lambda p: evaluate_point(*p, spec.mode), points))
    else:
        rows = [evaluate_point(*p, spec.mode) for p in points]
    if spec.figure.is_grid:
        for row in rows:
            del row["tau"]
    return rows


def format_number(value, digits: int | None = None) -> str:
    """Shortest string that round-trips to the same float, or ``digits``
    significant digits when given. ``None`` becomes an empty field.
    """
    if value is None:
        return ""
    if isinstance(value, str):
        return value
    if isinstance(value, int):
        return str(value)
    if digits is not None:
        return format(float(value), f".{digits}g")
    return repr(float(value))


def rows_to_csv(rows: list[dict], header) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_number(row[k]) for k in header])
    return buf.getvalue()


def rows_to_json(rows: list[dict], header) -> str:
    out = [{k: row[k] for k in header} for row in rows]
    return json.dumps(out, indent=2) + "\n"


def rows_to_text(rows: list[dict], header) -> str:
    table = [list(header)] + [[format_number(row[k], TEXT_DIGITS) or "-" for k in header] for row in rows]
    widths = [max(len(r[i]) for r in table) for i in range(len(header))]
    return "".join("  ".join(c.rjust(w) for c, w in zip(r, widths)).rstrip() + "\n" for r in table)


WRITERS = {"csv": rows_to_csv, "json": rows_to_json, "text": rows_to_text}


def render(rows: list[dict], header, fmt: str = "csv") -> str:
    try:
        writer = WRITERS[fmt]
    except KeyError:
        raise DomainError(f"unknown format {fmt!r}; expected one of {sorted(WRITERS)}") from None
    return writer(rows, header)


def parse_csv(text: str) -> list[dict]:
    """Read sweep CSV back; empty fields become ``None``, numbers become floats."""
    rows = []
    for raw in csv.DictReader(io.StringIO(text)):
        row = {}
        for k, v in raw.items():
            if k == "classification":
                row[k] = v
            else:
                row[k] = float(v) if v != "" else None
        rows.append(row)
    return rows
