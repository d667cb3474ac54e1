"""Hot-bath temperature sweeps, minimum-T1 extraction and cooling tables."""

from __future__ import annotations

import enum
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import partial
from typing import Iterable, Sequence

import numpy as np

from scqr.dynamics import SystemConfig, solve
from scqr.errors import NoSignChange, SolverError
from scqr.reservoir import ExchangeRates, ReservoirKind
from scqr.thermometry import cooling_percentage, effective_temperature

DEFAULT_ENERGIES = (1.0, 5.0, 4.0)
DEFAULT_COUPLING = 0.01
DEFAULT_ROOM_TEMPERATURE = 2.0
TH_RANGE = (1e-1, 1e3)
DEFAULT_GRID_POINTS = 200
# column order of the eight-configuration table
LABEL_ORDER = ("FBF", "FFF", "FBB", "FFB", "BBF", "BFF", "BBB", "BFB")
# numerical jitter tolerated before a curve counts as rising again
MONOTONE_TOL = 1e-4

TABLE_TC = {
    1: (1.0, 1.5, 2.0),
    2: (0.48, 0.60, 0.80),
    3: (0.48, 0.80, 1.0, 1.5, 2.0),
}
TABLE_LABELS = {
    1: ("BBB", "FFF"),
    2: ("BBB", "FFF"),
    3: LABEL_ORDER,
}
RATE_TABLE_TC = 2.0


@dataclass(frozen=True)
class ConfigLabel:
    """Reservoir kinds attached to qubits 1, 2, 3, e.g. ``ConfigLabel.parse("FBF")``."""

    kinds: tuple[ReservoirKind, ReservoirKind, ReservoirKind]

    def __post_init__(self):
        kinds = tuple(ReservoirKind.parse(k) for k in self.kinds)
        if len(kinds) != 3:
            raise ValueError(f"a configuration label needs exactly 3 kinds, got {len(kinds)}")
        object.__setattr__(self, "kinds", kinds)

    @classmethod
    def parse(cls, text: str | ConfigLabel) -> ConfigLabel:
        if isinstance(text, ConfigLabel):
            return text
        return cls(tuple(text))

    def __str__(self) -> str:
        return "".join(k.value for k in self.kinds)


def enumerate_labels() -> list[ConfigLabel]:
    """All eight B/F assignments, in the column order of the cooling table."""
    return [ConfigLabel.parse(s) for s in LABEL_ORDER]


def default_config(label: str | ConfigLabel = "FFF", tc: float = 1.0, th: float = 10.0,
                   tr: float = DEFAULT_ROOM_TEMPERATURE) -> SystemConfig:
    """E = (1, 5, 4), gamma_k = g = 0.01, T_r = 2."""
    g = DEFAULT_COUPLING
    return SystemConfig.build(
        DEFAULT_ENERGIES, (g, g, g), g, ConfigLabel.parse(label).kinds, (tc, tr, th)
    )


def default_grid(points: int = DEFAULT_GRID_POINTS, lo: float = TH_RANGE[0],
                 hi: float = TH_RANGE[1]) -> np.ndarray:
    if points < 1:
        raise ValueError(f"grid needs at least one point, got {points}")
    return np.logspace(math.log10(lo), math.log10(hi), points)


@dataclass(frozen=True)
class SweepPoint:
    t_h: float
    t1: float
    delta: float


@dataclass(frozen=True)
class SweepCurve:
    label: ConfigLabel
    t_c: float
    points: tuple[SweepPoint, ...]

    def __post_init__(self):
        th = [p.t_h for p in self.points]
        if any(b <= a for a, b in zip(th, th[1:])):
            raise ValueError("sweep points must have strictly increasing t_h")

    @property
    def t_h(self) -> np.ndarray:
        return np.array([p.t_h for p in self.points])

    @property
    def t1(self) -> np.ndarray:
        return np.array([p.t1 for p in self.points])

    @property
    def delta(self) -> np.ndarray:
        return np.array([p.delta for p in self.points])


def _check_grid(grid) -> np.ndarray:
    grid = np.asarray(grid, dtype=float).ravel()
    if grid.size == 0:
        raise ValueError("T_h grid is empty")
    if np.any(grid <= 0) or np.any(np.diff(grid) <= 0):
        raise ValueError("T_h grid must be positive and strictly increasing")
    return grid


def qubit1_temperature(config: SystemConfig) -> float:
    state = solve(config)
    return effective_temperature(state.reduced(1), config.energies[0]).effective_temperature


def sweep_th(base: SystemConfig, label: str | ConfigLabel, t_c: float,
             grid: Sequence[float] | None = None) -> SweepCurve:
    """Solve for T1 at every hot-bath temperature in ``grid`` (default: 200 log points)."""
    label = ConfigLabel.parse(label)
    grid = default_grid() if grid is None else _check_grid(grid)
    cfg = base.with_kinds(label.kinds).with_temperatures(tc=t_c)
    points = []
    for t_h in grid:
        t_h = float(t_h)
        try:
            t1 = qubit1_temperature(cfg.with_temperatures(th=t_h))
        except SolverError as exc:
            raise type(exc)(f"{exc} [label={label}, t_c={t_c:g}, t_h={t_h:g}]", t_h=t_h) from exc
        points.append(SweepPoint(t_h, t1, t1 - t_c))
    return SweepCurve(label, float(t_c), tuple(points))


class MinimumRule(enum.Enum):
    GRID_MINIMUM_REFINED = "grid-minimum-refined"
    AT_TH_100 = "at-th-100"


def _parabola_vertex(x, y):
    """Vertex of the parabola through three points, or None if it is not convex."""
    a, b, c = np.polyfit(x, y, 2)
    if not a > 0:
        return None
    xv = -b / (2 * a)
    return xv, a * xv * xv + b * xv + c


def min_t1(curve: SweepCurve, rule: MinimumRule = MinimumRule.GRID_MINIMUM_REFINED):
    """Minimum qubit-1 temperature of a curve as ``(t1, t_h)``.

    ``GRID_MINIMUM_REFINED`` refines the best grid point with a parabola in
    log T_h through its two neighbours. ``AT_TH_100`` reads the curve at
    T_h = 100 by quadratic interpolation in log T_h.
    """
    th, t1 = curve.t_h, curve.t1
    if th.size == 0:
        raise ValueError("empty curve")
    x = np.log(th)

    if rule is MinimumRule.AT_TH_100:
        target = 100.0
        if not th[0] <= target <= th[-1]:
            raise ValueError("T_h = 100 lies outside the sweep range")
        hit = np.flatnonzero(np.isclose(th, target, rtol=1e-12, atol=0))
        if hit.size:
            return float(t1[hit[0]]), target
        if th.size == 2:
            return float(np.interp(math.log(target), x, t1)), target
        j = int(np.searchsorted(th, target))
        lo = min(max(j - 2, 0), th.size - 3)
        # pick the three-point window closest to the target
        if lo + 3 < th.size and abs(x[lo + 3] - math.log(target)) < abs(x[lo] - math.log(target)):
            lo += 1
        xs, ys = x[lo:lo + 3], t1[lo:lo + 3]
        coeffs = np.polyfit(xs, ys, 2)
        return float(np.polyval(coeffs, math.log(target))), target

    i = int(np.argmin(t1))
    if 0 < i < th.size - 1:
        vertex = _parabola_vertex(x[i - 1:i + 2], t1[i - 1:i + 2])
        if vertex is not None:
            xv, yv = vertex
            if x[i - 1] <= xv <= x[i + 1] and yv <= t1[i]:
                return float(yv), float(math.exp(xv))
    return float(t1[i]), float(th[i])


def cumulative_rise(curve: SweepCurve, t_from: float = 0.0) -> float:
    """Largest increase of T1 above its running minimum, for T_h >= ``t_from``."""
    t1 = curve.t1[curve.t_h >= t_from]
    if t1.size < 2:
        return 0.0
    return float(np.max(t1 - np.minimum.accumulate(t1)))


def is_monotone_decreasing(curve: SweepCurve, t_from: float = 0.0,
                           tol: float = MONOTONE_TOL) -> bool:
    return cumulative_rise(curve, t_from) <= tol


def rate_report(config: SystemConfig) -> tuple[ExchangeRates, ExchangeRates, ExchangeRates]:
    """Emission/absorption rates of each qubit with its own bath."""
    return config.rates()


@dataclass(frozen=True)
class ExperimentReport:
    """One (label, T_c) cell of a cooling table."""

    label: ConfigLabel
    t_c: float
    min_t1: float
    argmin_th: float
    cooling_pct: float
    rule: MinimumRule
    monotone_decreasing: bool
    rates: tuple[ExchangeRates, ExchangeRates, ExchangeRates]

    @property
    def refrigerates(self) -> bool:
        return self.min_t1 - self.t_c < 0

    def as_dict(self) -> dict:
        return {
            "label": str(self.label),
            "t_c": self.t_c,
            "min_t1": self.min_t1,
            "argmin_th": self.argmin_th,
            "cooling_pct": self.cooling_pct,
            "refrigerates": self.refrigerates,
            "rule": self.rule.value,
            "monotone_decreasing": self.monotone_decreasing,
            "rates": [
                {"qubit": k, "gamma_down": r.gamma_down, "gamma_up": r.gamma_up}
                for k, r in enumerate(self.rates, start=1)
            ],
        }


def cooling_cell(base: SystemConfig, label: str | ConfigLabel, t_c: float,
                 grid: Sequence[float] | None = None) -> ExperimentReport:
    """Sweep T_h and reduce the curve to a single cooling figure.

    Curves that keep falling past T_h = T_r are read at T_h = 100, the
    others at their refined minimum. The rule used is recorded.
    """
    label = ConfigLabel.parse(label)
    curve = sweep_th(base, label, t_c, grid)
    t_r = base.temperatures[1]
    monotone = is_monotone_decreasing(curve, t_from=t_r)
    rule = MinimumRule.AT_TH_100 if monotone else MinimumRule.GRID_MINIMUM_REFINED
    t1, th = min_t1(curve, rule)
    cfg = base.with_kinds(label.kinds).with_temperatures(tc=t_c, th=th)
    return ExperimentReport(
        label=label,
        t_c=float(t_c),
        min_t1=t1,
        argmin_th=th,
        cooling_pct=cooling_percentage(t1, t_c),
        rule=rule,
        monotone_decreasing=monotone,
        rates=rate_report(cfg),
    )


def _cell_job(args, base, grid):
    label, t_c = args
    return cooling_cell(base, label, t_c, grid)


def table_cooling(t_c_values: Iterable[float], labels: Iterable[str | ConfigLabel] | None = None,
                  base: SystemConfig | None = None, grid: Sequence[float] | None = None,
                  workers: int = 1) -> list[ExperimentReport]:
    """Cooling cells for every (T_c, label) pair, ordered by T_c then label.

    Cells are independent; ``workers > 1`` farms them out to processes
    without changing the order of the result.
    """
    base = default_config() if base is None else base
    labels = enumerate_labels() if labels is None else [ConfigLabel.parse(s) for s in labels]
    jobs = [(label, float(t_c)) for t_c in t_c_values for label in labels]
    if grid is not None:
        grid = _check_grid(grid)
    job = partial(_cell_job, base=base, grid=grid)
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(job, jobs))
    return [job(j) for j in jobs]


def reference_table(which: int, base: SystemConfig | None = None, grid=None,
                workers: int = 1) -> list[ExperimentReport]:
    """Cells of cooling table 1, 2 or 3 with the reference T_c values and labels.

    ``which == 4`` returns the T_c = 2 cells whose ``rates`` make up the
    rate table.
    """
    if which == 4:
        return table_cooling([RATE_TABLE_TC], LABEL_ORDER, base, grid, workers)
    if which not in TABLE_TC:
        raise ValueError(f"no table {which}; choose 1, 2, 3 or 4")
    return table_cooling(TABLE_TC[which], TABLE_LABELS[which], base, grid, workers)


def refrigeration_threshold(base: SystemConfig, label: str | ConfigLabel,
                            bracket: tuple[float, float] = (0.3, 0.7),
                            grid: Sequence[float] | None = None,
                            t_h: float | None = None, tol: float = 1e-3) -> float:
    """Cold-bath temperature below which qubit 1 can no longer be cooled.

    Bisects on T_c the best achievable ``T1 - T_c``: minimized over the T_h
    grid by default, or evaluated at a fixed ``t_h`` when one is given.
    """
    label = ConfigLabel.parse(label)
    lo, hi = sorted(map(float, bracket))

    def best_delta(t_c):
        if t_h is None:
            t1, _ = min_t1(sweep_th(base, label, t_c, grid))
        else:
            cfg = base.with_kinds(label.kinds).with_temperatures(tc=t_c, th=t_h)
            t1 = qubit1_temperature(cfg)
        return t1 - t_c

    f_lo, f_hi = best_delta(lo), best_delta(hi)
    if f_lo == 0:
        return lo
    if f_hi == 0:
        return hi
    if (f_lo > 0) == (f_hi > 0):
        raise NoSignChange(
            f"best T1 - T_c has the same sign at T_c={lo:g} ({f_lo:+.3g}) and T_c={hi:g} ({f_hi:+.3g})"
        )
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        f_mid = best_delta(mid)
        if f_mid == 0:
            return mid
        if (f_mid > 0) == (f_lo > 0):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    return 0.5 * (lo + hi)
