import math
from math import comb, pi

import numpy as np
import pytest

from torusrec import (
    Arrangement,
    CoeffTable1D,
    InconsistentDataError,
    IntervalUnion,
    brute_force_arrangements,
    differentiate_coeffs,
    enumerate_arrangements,
    figure_arrangement,
    forward_coeffs_intervals,
    gen_polygon_counterexample,
    interval_distance,
    recover_intervals_extended,
    recover_intervals_minimal,
)
from torusrec.intervals import _descent_candidate, _series_candidate
from torusrec.torus import ToleranceConfig
from torusrec.instances import random_interval_union, trial_rng


def test_differentiate_coeffs_half_circle():
    table = forward_coeffs_intervals(IntervalUnion([(0.0, 0.5)]), range(0, 3))
    diff = differentiate_coeffs(table)
    assert diff[0] == 0
    assert diff[1] == pytest.approx(2.0)  # equals z - w = 1 - (-1)
    assert diff[-1] == pytest.approx(diff[1].conjugate())


def test_differentiate_rejects_complex_length():
    with pytest.raises(ValueError):
        differentiate_coeffs(CoeffTable1D({0: 0.5 + 0.1j, 1: 0.0}))


def test_extended_round_trip_single_arc():
    e = IntervalUnion([(0.0, 0.5)])
    rec = recover_intervals_extended(forward_coeffs_intervals(e, range(0, 3)), 1)
    assert interval_distance(e, rec) < 1e-12


def test_extended_round_trip_two_arcs():
    e = IntervalUnion([(0.0, 0.25), (0.5, 0.75)])
    rec = recover_intervals_extended(forward_coeffs_intervals(e, range(0, 5)), 2)
    assert interval_distance(e, rec) < 1e-12


def test_extended_zero_table_gives_empty_union():
    table = CoeffTable1D({n: 0j for n in range(0, 5)})
    assert recover_intervals_extended(table, 2) == IntervalUnion()


def test_extended_round_trip_random():
    worst = 0.0
    for trial in range(60):
        rng = trial_rng(51, trial)
        n = int(rng.integers(1, 7))
        count = int(rng.integers(1, n + 1))
        e = random_interval_union(rng, count, 0.02)
        table = forward_coeffs_intervals(e, range(0, 2 * n + 1))
        rec = recover_intervals_extended(table, n)
        worst = max(worst, interval_distance(e, rec))
    assert worst < 1e-7


def test_minimal_single_arc_closed_form():
    table = CoeffTable1D({0: 0.5, 1: -1j / pi})
    rec = recover_intervals_minimal(table, 1)
    assert interval_distance(IntervalUnion([(0.0, 0.5)]), rec) < 1e-12


def test_minimal_series_branch():
    e = IntervalUnion([(0.1, 0.3)])
    table = forward_coeffs_intervals(e, range(0, 3))
    rec = recover_intervals_minimal(table, 2)
    assert interval_distance(e, rec) < 1e-12


def test_minimal_descent_branch():
    e = IntervalUnion([(0.0, 0.2), (0.5, 0.7)])
    table = forward_coeffs_intervals(e, range(0, 3))
    rec = recover_intervals_minimal(table, 2, budget=50, rng=trial_rng(7))
    assert interval_distance(e, rec) < 1e-6


def test_minimal_requires_length_inside_unit_interval():
    with pytest.raises(ValueError):
        recover_intervals_minimal(CoeffTable1D({0: 0.0, 1: 0.1}), 1)
    with pytest.raises(ValueError):
        recover_intervals_minimal(CoeffTable1D({0: 1.0, 1: 0.1}), 1)


def test_series_and_descent_branches_agree():
    tol = ToleranceConfig()
    checked = 0
    for trial in range(40):
        rng = trial_rng(52, trial)
        n = int(rng.integers(2, 7))
        count = int(rng.integers(1, n // 2 + 1))
        e = random_interval_union(rng, count, 0.03)
        table = forward_coeffs_intervals(e, range(0, n + 1))
        series = _series_candidate(table, count, tol)
        assert series is not None
        descent = None
        for _ in range(50):
            descent = _descent_candidate(table, count, tol, rng)
            if descent is not None:
                break
        if descent is None:
            continue
        checked += 1
        assert interval_distance(series, descent) < 1e-6
    assert checked >= 20


def test_uniqueness_witness_on_low_frequencies():
    # distinct unions of <= n arcs always differ somewhere on 0..n
    trials = 0
    for trial in range(500):
        rng = trial_rng(53, trial)
        n = int(rng.integers(1, 6))
        e = random_interval_union(rng, int(rng.integers(1, n + 1)), 0.02)
        f = random_interval_union(rng, int(rng.integers(1, n + 1)), 0.02)
        if interval_distance(e, f) < 1e-6:
            continue
        trials += 1
        te = forward_coeffs_intervals(e, range(0, n + 1))
        tf = forward_coeffs_intervals(f, range(0, n + 1))
        gap = max(abs(te[nu] - tf[nu]) for nu in range(0, n + 1))
        assert gap > 1e-9
    assert trials > 450


def test_arrangement_counts_match_brute_force():
    for n in (1, 2):
        encoded = enumerate_arrangements(n)
        assert encoded == brute_force_arrangements(n)
        assert len(encoded) == comb(2 * n, n)


def test_arrangement_validation_catches_bad_labelings():
    arr = figure_arrangement(2)
    arr.validate()
    labels = list(arr.labels)
    labels[0], labels[1] = labels[1], labels[0]
    with pytest.raises(ValueError):
        Arrangement(2, tuple(labels)).validate()
    with pytest.raises(ValueError):
        Arrangement(2, arr.labels[:-1] + ("z9",)).validate()


def test_polygon_counterexample_small():
    e, f = gen_polygon_counterexample(2, 0.3, figure_arrangement(2))
    te = forward_coeffs_intervals(e, range(0, 5))
    tf = forward_coeffs_intervals(f, range(0, 5))
    assert max(abs(te[nu] - tf[nu]) for nu in (1, 2, 3)) < 1e-12
    assert abs(te[4] - tf[4]) > 1e-3
    assert e != f
    assert len(e.arcs) == len(f.arcs) == 2


def test_polygon_counterexample_figure_scale():
    e, f = gen_polygon_counterexample(5, pi / 10, figure_arrangement(5))
    te = forward_coeffs_intervals(e, range(0, 11))
    tf = forward_coeffs_intervals(f, range(0, 11))
    assert max(abs(te[nu] - tf[nu]) for nu in range(1, 10)) < 1e-12
    assert abs(te[10] - tf[10]) > 1e-3


def test_polygon_counterexample_guards():
    with pytest.raises(ValueError):
        gen_polygon_counterexample(2, pi / 2, figure_arrangement(2))
    with pytest.raises(ValueError):
        gen_polygon_counterexample(2, 0.0, figure_arrangement(2))
    with pytest.raises(ValueError):
        gen_polygon_counterexample(3, 0.3, figure_arrangement(2))


def test_every_arrangement_gives_a_counterexample():
    n = 2
    theta = pi / (2 * n)
    for arr in enumerate_arrangements(n):
        e, f = gen_polygon_counterexample(n, theta, arr)
        te = forward_coeffs_intervals(e, range(1, 2 * n + 1))
        tf = forward_coeffs_intervals(f, range(1, 2 * n + 1))
        assert max(abs(te[nu] - tf[nu]) for nu in range(1, 2 * n)) < 1e-12
        assert abs(te[2 * n] - tf[2 * n]) > 1e-3
        assert e != f


def test_minimal_round_trip_series_regime():
    worst = 0.0
    for trial in range(40):
        rng = trial_rng(54, trial)
        n = int(rng.integers(2, 7))
        count = int(rng.integers(1, n // 2 + 1))
        e = random_interval_union(rng, count, 0.02)
        table = forward_coeffs_intervals(e, range(0, n + 1))
        rec = recover_intervals_minimal(table, n, rng=rng)
        worst = max(worst, interval_distance(e, rec))
    assert worst < 1e-6
