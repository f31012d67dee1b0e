import math

import numpy as np
import pytest

from torusrec import (
    AmbiguousRecoveryError,
    CoeffTable1D,
    CoeffTable2D,
    InconsistentDataError,
    Measure2D,
    MultiplicityProfile,
    OmegaSet,
    PeelingError,
    build_omega,
    forward_coeffs_2d,
    is_interpolating,
    measure_distance,
    profile_rows_omega,
    recover_max_k,
    recover_peeling,
    recover_search,
    slice_row,
    sufficiency_probe,
    sufficient_size,
    triangle_interpolate,
)
from torusrec.masses2d import _ambiguity
from torusrec.instances import (
    random_fiber_counts,
    random_measure2d,
    separated_positions,
    trial_rng,
)


def test_build_omega_triangle():
    omega = build_omega("triangle", 1)
    assert set(omega.freqs) == {(0, 0), (1, 0), (0, 1)}
    for n in (2, 5):
        assert len(build_omega("triangle", n)) == n * (2 * n + 1)


def test_build_omega_max_k():
    omega = build_omega("max_k", 2, 1)
    assert len(omega) == 15  # 3 rows x 5 columns
    with pytest.raises(ValueError):
        build_omega("max_k", 2)
    with pytest.raises(ValueError):
        build_omega("max_k", 2, 3)


def test_build_omega_sufficient_size():
    omega = build_omega("sufficient", 4)
    assert len(omega) == 113
    for n in (1, 2, 3, 7, 12):
        assert len(build_omega("sufficient", n)) == sufficient_size(n)


def test_omega_json_round_trip():
    omega = build_omega("max_k", 3, 2)
    assert OmegaSet.from_json_obj(omega.to_json_obj()) == omega


def test_slice_row():
    table = forward_coeffs_2d(
        Measure2D([(0.0, 0.0, 1.0)]), [(m, 0) for m in range(-1, 2)]
    )
    row = slice_row(table, 0, 1)
    assert [row[m] for m in (-1, 0, 1)] == pytest.approx([1, 1, 1])
    table2 = forward_coeffs_2d(
        Measure2D([(0.5, 0.0, 1.0)]), [(m, 0) for m in range(-1, 2)]
    )
    row2 = slice_row(table2, 0, 1)
    assert [row2[m] for m in (-1, 0, 1)] == pytest.approx([-1, 1, -1])
    with pytest.raises(ValueError):
        slice_row(table, 1, 1)


def test_recover_max_k_examples():
    mu = Measure2D([(0.0, 0.0, 1.0), (0.5, 0.5, 1.0)])
    table = forward_coeffs_2d(mu, build_omega("max_k", 2, 1))
    assert measure_distance(mu, recover_max_k(table, 2, 1)) < 1e-9

    mu2 = Measure2D([(0.0, 0.0, 1.0), (0.0, 0.5, 1.0)])
    table2 = forward_coeffs_2d(mu2, build_omega("max_k", 2, 2))
    assert measure_distance(mu2, recover_max_k(table2, 2, 2)) < 1e-9


def test_recover_max_k_fiber_overflow():
    mu = Measure2D([(0.0, 0.0, 1.0), (0.0, 0.5, 1.0)])
    table = forward_coeffs_2d(mu, build_omega("max_k", 2, 1))
    with pytest.raises(InconsistentDataError):
        recover_max_k(table, 2, 1)


def test_recover_max_k_round_trip_random():
    worst = 0.0
    for trial in range(40):
        rng = trial_rng(61, trial)
        n = int(rng.integers(1, 7))
        k = int(rng.integers(1, min(2, n) + 1))
        counts = random_fiber_counts(rng, int(rng.integers(1, n + 1)), k)
        mu = random_measure2d(rng, counts, 0.05)
        table = forward_coeffs_2d(mu, build_omega("max_k", n, k))
        worst = max(worst, measure_distance(mu, recover_max_k(table, n, k)))
    assert worst < 1e-6


def test_recover_peeling_examples():
    mu = Measure2D([(0.0, 0.0, 1.0), (0.0, 0.5, 1.0)])
    table = forward_coeffs_2d(mu, profile_rows_omega(2))
    assert measure_distance(mu, recover_peeling(table, 2, {0.0: 2})) < 1e-9

    single = Measure2D([(1 / 3, 0.25, 1.0)])
    table1 = forward_coeffs_2d(single, profile_rows_omega(1))
    assert measure_distance(single, recover_peeling(table1, 1, {1 / 3: 1})) < 1e-9


def test_recover_peeling_wrong_profile_fails_with_stage():
    mu = Measure2D([(0.0, 0.0, 1.0), (0.0, 0.5, 1.0)])
    table = forward_coeffs_2d(mu, profile_rows_omega(2))
    with pytest.raises(PeelingError) as info:
        recover_peeling(table, 2, {0.0: 1, 0.5: 1})
    assert info.value.stage >= 1


def test_multiplicity_profile_validation():
    MultiplicityProfile({0.1: 2, 0.6: 1}).validate(3)
    with pytest.raises(ValueError):
        MultiplicityProfile({0.1: 2, 0.6: 2}).validate(3)
    with pytest.raises(ValueError):
        MultiplicityProfile({0.1: 0}).validate(3)


def test_generated_profiles_satisfy_decay_bound():
    for trial in range(30):
        rng = trial_rng(62, trial)
        n = int(rng.integers(1, 7))
        counts = random_fiber_counts(rng, n, min(3, n))
        mu = random_measure2d(rng, counts, 0.05)
        profile: dict[float, int] = {}
        for x, _, _ in mu.masses:
            profile[x] = profile.get(x, 0) + 1
        MultiplicityProfile(profile).validate(n)


def test_recover_peeling_round_trip_random():
    worst = 0.0
    for trial in range(50):
        rng = trial_rng(63, trial)
        n = int(rng.integers(1, 7))
        counts = random_fiber_counts(rng, n, min(3, n))
        mu = random_measure2d(rng, counts, 0.05)
        table = forward_coeffs_2d(mu, profile_rows_omega(n))
        profile: dict[float, int] = {}
        for x, _, _ in mu.masses:
            profile[x] = profile.get(x, 0) + 1
        worst = max(worst, measure_distance(mu, recover_peeling(table, n, profile)))
    assert worst < 1e-6


def test_recover_search_examples():
    mu = Measure2D([(0.0, 0.0, 1.0), (0.0, 0.5, 1.0)])
    table = forward_coeffs_2d(mu, build_omega("sufficient", 2))
    assert measure_distance(mu, recover_search(table, 2)) < 1e-9

    single = Measure2D([(0.25, 0.25, 2.0)])
    table1 = forward_coeffs_2d(single, build_omega("sufficient", 1))
    assert measure_distance(single, recover_search(table1, 1)) < 1e-9


def test_recover_search_agrees_with_peeling():
    for trial in range(15):
        rng = trial_rng(64, trial)
        n = int(rng.integers(1, 5))
        counts = random_fiber_counts(rng, n, n)
        mu = random_measure2d(rng, counts, 0.05)
        table = forward_coeffs_2d(mu, build_omega("sufficient", n))
        by_search = recover_search(table, n)
        profile: dict[float, int] = {}
        for x, _, _ in mu.masses:
            profile[x] = profile.get(x, 0) + 1
        by_peeling = recover_peeling(table, n, profile)
        assert measure_distance(by_search, by_peeling) < 1e-6


def test_ambiguity_report_carries_blend_witness():
    # exercised with injected fake duplicates: the reporting contract only
    mu1 = Measure2D([(0.1, 0.2, 1.0)])
    mu2 = Measure2D([(0.6, 0.7, 2.0)])
    err = _ambiguity(mu1, mu2)
    assert isinstance(err, AmbiguousRecoveryError)
    assert err.candidates == (mu1, mu2)
    masses = dict(
        ((x, y), c) for x, y, c in err.witness.masses
    )
    assert masses[(0.1, 0.2)] == pytest.approx(0.5)
    assert masses[(0.6, 0.7)] == pytest.approx(1.0)


def test_is_interpolating_examples():
    assert is_interpolating([(0, 0)], [(0.3, 0.8)])
    assert not is_interpolating([(0, 0), (1, 0)], [(0.0, 0.0), (0.0, 0.5)])
    rng = trial_rng(65)
    pts = list(zip(separated_positions(rng, 2, 0.02), separated_positions(rng, 2, 0.02)))
    assert is_interpolating(build_omega("triangle", 1), pts)
    with pytest.raises(ValueError):
        is_interpolating([(0, 0)], [(0.5, 0.5), (0.5, 0.5)])


def test_triangle_interpolate_examples():
    rng = trial_rng(66)
    coeffs = triangle_interpolate([(0.3, 0.8)], [5.0], 1, rng)
    total = sum(
        c * np.exp(2j * np.pi * (m * 0.3 + l * 0.8)) for (m, l), c in coeffs.items()
    )
    assert abs(total - 5.0) < 1e-8

    pts = [(0.0, 0.0), (0.5, 0.5)]
    vals = [1.0, 0.0]
    coeffs = triangle_interpolate(pts, vals, 1, rng)
    for (x, y), want in zip(pts, vals):
        got = sum(
            c * np.exp(2j * np.pi * (m * x + l * y)) for (m, l), c in coeffs.items()
        )
        assert abs(got - want) < 1e-8

    with pytest.raises(ValueError):
        triangle_interpolate([(0.1, 0.1), (0.1, 0.1)], [1.0, 2.0], 1, rng)


def test_triangle_interpolate_residuals_random():
    for trial in range(15):
        rng = trial_rng(67, trial)
        n = int(rng.integers(1, 5))
        count = int(rng.integers(1, 2 * n + 1))
        pts = list(
            zip(
                separated_positions(rng, count, 0.02),
                separated_positions(rng, count, 0.02),
            )
        )
        vals = rng.standard_normal(count) + 1j * rng.standard_normal(count)
        coeffs = triangle_interpolate(pts, list(vals), n, rng)
        for (x, y), want in zip(pts, vals):
            got = sum(
                c * np.exp(2j * np.pi * (m * x + l * y))
                for (m, l), c in coeffs.items()
            )
            assert abs(got - want) < 1e-8 * max(1.0, float(np.max(np.abs(vals))))


def test_sufficiency_probe_triangle():
    report = sufficiency_probe(build_omega("triangle", 2), 2, 100, trial_rng(68))
    assert report.passes == report.trials == 100
    assert not report.insufficient


def test_sufficiency_probe_horizontal_line():
    line = [(m, 0) for m in range(-10, 11)]
    report = sufficiency_probe(line, 1, 3, trial_rng(69))
    assert report.insufficient
    first, second = report.witness
    assert first != second
    assert report.witness_defect < 1e-12
    t1 = forward_coeffs_2d(first, line)
    t2 = forward_coeffs_2d(second, line)
    assert max(abs(t1[p] - t2[p]) for p in t1.freqs()) < 1e-12


def test_sufficiency_probe_rejects_zero_trials():
    with pytest.raises(ValueError):
        sufficiency_probe(build_omega("triangle", 1), 1, 0, trial_rng(70))


def test_interpolation_implication_recorded_jointly():
    # for the O(N log N) set: interpolation passes and round trips pass,
    # recorded together on the same frequency set
    n = 2
    omega = build_omega("sufficient", n)
    report = sufficiency_probe(omega, n, 30, trial_rng(71))
    assert report.passes == report.trials
    worst = 0.0
    for trial in range(10):
        rng = trial_rng(72, trial)
        counts = random_fiber_counts(rng, n, n)
        mu = random_measure2d(rng, counts, 0.05)
        table = forward_coeffs_2d(mu, omega)
        worst = max(worst, measure_distance(mu, recover_search(table, n)))
    assert worst < 1e-6
