import math

import numpy as np
import pytest

from scqr.dynamics import SystemConfig
from scqr.errors import DegenerateKernel, NoSignChange
from scqr.experiments import (
    LABEL_ORDER,
    ConfigLabel,
    MinimumRule,
    SweepCurve,
    SweepPoint,
    cooling_cell,
    cumulative_rise,
    default_grid,
    enumerate_labels,
    is_monotone_decreasing,
    min_t1,
    default_config,
    rate_report,
    refrigeration_threshold,
    sweep_th,
    table_cooling,
)
from scqr.reservoir import ExchangeRates


def curve_from(th, t1, t_c=1.0, label="FFF"):
    pts = tuple(SweepPoint(float(a), float(b), float(b) - t_c) for a, b in zip(th, t1))
    return SweepCurve(ConfigLabel.parse(label), t_c, pts)


def test_enumerate_labels():
    labels = enumerate_labels()
    assert len(labels) == 8
    assert str(labels[0]) == "FBF"
    assert len({str(x) for x in labels}) == 8
    assert [str(x) for x in labels] == list(LABEL_ORDER)


def test_label_parsing():
    assert str(ConfigLabel.parse("fbf")) == "FBF"
    with pytest.raises(ValueError):
        ConfigLabel.parse("FB")
    with pytest.raises(ValueError):
        ConfigLabel.parse("FXF")


def test_curve_requires_increasing_th():
    with pytest.raises(ValueError):
        curve_from([1.0, 1.0], [0.5, 0.5])


def test_default_grid():
    grid = default_grid()
    assert grid.size == 200
    assert grid[0] == pytest.approx(0.1) and grid[-1] == pytest.approx(1000.0)
    with pytest.raises(ValueError):
        default_grid(0)


def test_min_refined_recovers_parabola_vertex():
    th = np.geomspace(0.1, 1000, 41)
    x0 = math.log(7.3)
    t1 = 0.9 + 0.05 * (np.log(th) - x0) ** 2
    t1_min, th_min = min_t1(curve_from(th, t1), MinimumRule.GRID_MINIMUM_REFINED)
    assert t1_min == pytest.approx(0.9, abs=1e-12)
    assert th_min == pytest.approx(7.3, rel=1e-9)


def test_min_at_boundary_not_refined():
    th = np.geomspace(0.1, 1000, 20)
    t1 = 2.0 - 0.1 * np.log(th)
    t1_min, th_min = min_t1(curve_from(th, t1))
    assert th_min == pytest.approx(1000.0)
    assert t1_min == pytest.approx(t1[-1])


def test_at_th100_interpolates_in_log():
    th = np.geomspace(0.1, 1000, 37)
    t1 = 1.0 - 0.01 * np.log(th) + 0.002 * np.log(th) ** 2
    value, where = min_t1(curve_from(th, t1), MinimumRule.AT_TH_100)
    x = math.log(100.0)
    assert where == 100.0
    assert value == pytest.approx(1.0 - 0.01 * x + 0.002 * x * x, abs=1e-12)


def test_at_th100_out_of_range():
    with pytest.raises(ValueError):
        min_t1(curve_from([1.0, 2.0, 3.0], [1, 1, 1]), MinimumRule.AT_TH_100)


@pytest.mark.parametrize("rule", list(MinimumRule))
def test_constant_curve(rule):
    th = [10.0, 100.0, 1000.0]
    t1, _ = min_t1(curve_from(th, [0.8, 0.8, 0.8]), rule)
    assert t1 == 0.8


def test_single_point_curve():
    assert min_t1(curve_from([100.0], [0.7]), MinimumRule.AT_TH_100) == (0.7, 100.0)
    assert min_t1(curve_from([5.0], [0.7])) == (0.7, 5.0)


def test_monotone_detection():
    th = np.geomspace(1, 1000, 30)
    falling = curve_from(th, 1.0 - 0.01 * np.log(th))
    dip = curve_from(th, 1.0 + 0.01 * (np.log(th) - 2.0) ** 2)
    assert is_monotone_decreasing(falling)
    assert not is_monotone_decreasing(dip)
    assert cumulative_rise(dip) > 0.01
    # the dip lies entirely before t_from, so the tail is rising, not monotone
    assert not is_monotone_decreasing(dip, t_from=20.0)


def test_sweep_equilibrium_point_does_not_cool():
    base = default_config("FFF")
    for label in ("BBB", "FFF", "FBF"):
        curve = sweep_th(base, label, 2.0, [2.0])
        assert curve.points[0].delta >= -1e-12


def test_sweep_points_are_consistent():
    curve = sweep_th(default_config(), "BBB", 1.0, default_grid(7))
    assert curve.t_h.tolist() == pytest.approx(default_grid(7).tolist())
    for p in curve.points:
        assert p.delta == pytest.approx(p.t1 - 1.0, abs=1e-12)


def test_sweep_tags_failing_th():
    base = SystemConfig.build((1, 5, 4), (0, 0, 0), 0.01, "FFF", (1, 2, 10))
    with pytest.raises(DegenerateKernel) as info:
        sweep_th(base, "FFF", 1.0, [3.0, 30.0])
    assert info.value.t_h == 3.0
    assert "t_h=3" in str(info.value)


def test_sweep_rejects_empty_grid():
    with pytest.raises(ValueError):
        sweep_th(default_config(), "FFF", 1.0, [])


def test_rate_report_rows():
    cfg = default_config("FBF", tc=2.0, th=10.0)
    r1, r2, _ = rate_report(cfg)
    assert (round(r1.gamma_down, 5), round(r1.gamma_up, 5)) == (0.00622, 0.00378)
    assert (round(r2.gamma_down, 5), round(r2.gamma_up, 5)) == (0.01089, 0.00089)
    isolated = cfg.with_dissipation(2, 0.0)
    assert rate_report(isolated)[1] == ExchangeRates(0.0, 0.0)


def test_cooling_cell_uses_rule_by_shape():
    grid = default_grid(41)
    fermi = cooling_cell(default_config(), "FFF", 1.0, grid)
    bose = cooling_cell(default_config(), "BBB", 1.0, grid)
    assert fermi.rule is MinimumRule.AT_TH_100 and fermi.argmin_th == 100.0
    assert bose.rule is MinimumRule.GRID_MINIMUM_REFINED
    for cell in (fermi, bose):
        assert cell.refrigerates
        assert cell.cooling_pct == pytest.approx(100 * abs(cell.min_t1 - 1.0), abs=1e-9)
    assert fermi.cooling_pct > bose.cooling_pct


def test_table_is_ordered_and_parallel_safe():
    grid = default_grid(15)
    serial = table_cooling([1.0, 2.0], ["BBB", "FBF"], grid=grid)
    parallel = table_cooling([1.0, 2.0], ["BBB", "FBF"], grid=grid, workers=2)
    assert [(str(r.label), r.t_c) for r in serial] == [
        ("BBB", 1.0), ("FBF", 1.0), ("BBB", 2.0), ("FBF", 2.0)
    ]
    assert serial == parallel


def test_threshold_without_sign_change():
    with pytest.raises(NoSignChange):
        refrigeration_threshold(default_config(), "BBB", (1.0, 2.0), grid=default_grid(21))


def test_threshold_at_fixed_th_matches_virtual_qubit_bound():
    # at fixed T_h, cooling stops where E1/T_c = E2/T_r - E3/T_h
    t_star = refrigeration_threshold(default_config(), "FFF", (0.3, 0.7), t_h=10.0, tol=1e-4)
    assert t_star == pytest.approx(1.0 / (5 / 2 - 4 / 10), abs=2e-3)
