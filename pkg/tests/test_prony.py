import numpy as np
import pytest

from torusrec import (
    CoeffTable1D,
    InconsistentDataError,
    Measure1D,
    OffCircleRootError,
    annihilator,
    forward_coeffs_1d,
    measure_distance,
    prony_recover,
)
from torusrec.instances import random_measure1d, trial_rng


def test_annihilator_constant_data():
    table = CoeffTable1D({-1: 1.0, 0: 1.0, 1: 1.0})
    assert annihilator(table, 1) == pytest.approx([-1.0, 1.0])


def test_annihilator_two_mass_data_against_forward_oracle():
    mu = Measure1D([(0.0, 2.0), (0.5, -1.0)])
    table = forward_coeffs_1d(mu, range(-2, 3))
    # the oracle reproduces the stated data
    assert [table[n] for n in range(-2, 3)] == pytest.approx([1, 3, 1, 3, 1])
    filt = annihilator(table, 2)
    assert filt == pytest.approx([-1.0, 0.0, 1.0], abs=1e-12)


def test_annihilator_quarter_mass():
    table = forward_coeffs_1d(Measure1D([(0.25, 1.0)]), range(-1, 2))
    assert annihilator(table, 1) == pytest.approx([-1j, 1.0])


def test_annihilator_rejects_excess_masses():
    mu = Measure1D([(0.1, 1.0), (0.4, 1.0), (0.7, 1.0)])
    table = forward_coeffs_1d(mu, range(-2, 3))
    with pytest.raises(InconsistentDataError):
        annihilator(table, 2)


def test_prony_recover_examples():
    assert prony_recover(CoeffTable1D({-1: 1, 0: 1, 1: 1}), 1) == Measure1D(
        [(0.0, 1.0)]
    )
    mu = Measure1D([(0.0, 2.0), (0.5, -1.0)])
    rec = prony_recover(forward_coeffs_1d(mu, range(-2, 3)), 2)
    assert measure_distance(mu, rec) < 1e-12
    mu2 = Measure1D([(1 / 3, 1 + 1j)])
    rec2 = prony_recover(forward_coeffs_1d(mu2, range(-1, 2)), 1)
    assert measure_distance(mu2, rec2) < 1e-12


def test_prony_recover_zero_data():
    assert prony_recover(CoeffTable1D({n: 0j for n in range(-3, 4)}), 3) == Measure1D()


def test_prony_round_trip_random():
    worst = 0.0
    for trial in range(100):
        rng = trial_rng(41, trial)
        n = int(rng.integers(1, 9))
        k = int(rng.integers(1, n + 1))
        mu = random_measure1d(rng, k, 0.05)
        rec = prony_recover(forward_coeffs_1d(mu, range(-n, n + 1)), n)
        worst = max(worst, measure_distance(mu, rec))
    assert worst < 1e-7


def test_annihilator_degree_is_minimal():
    for trial in range(30):
        rng = trial_rng(42, trial)
        n = int(rng.integers(1, 9))
        k = int(rng.integers(1, n + 1))
        mu = random_measure1d(rng, k, 0.05)
        filt = annihilator(forward_coeffs_1d(mu, range(-n, n + 1)), n)
        assert len(filt) - 1 == len(mu)


def test_shift_equivariance():
    for trial in range(20):
        rng = trial_rng(43, trial)
        n = int(rng.integers(1, 7))
        k = int(rng.integers(1, n + 1))
        mu = random_measure1d(rng, k, 0.05)
        tau = float(rng.uniform())
        table = forward_coeffs_1d(mu, range(-n, n + 1))
        shifted = CoeffTable1D(
            {m: v * np.exp(-2j * np.pi * m * tau) for m, v in table.items()}
        )
        rec = prony_recover(shifted, n)
        assert measure_distance(rec.shift(-tau), mu) < 1e-9


def test_conjugation_negates_positions():
    for trial in range(20):
        rng = trial_rng(44, trial)
        n = int(rng.integers(1, 7))
        k = int(rng.integers(1, n + 1))
        mu = random_measure1d(rng, k, 0.05)
        table = forward_coeffs_1d(mu, range(-n, n + 1))
        conj = CoeffTable1D({m: v.conjugate() for m, v in table.items()})
        expected = Measure1D((-p, a.conjugate()) for p, a in mu.masses)
        assert measure_distance(prony_recover(conj, n), expected) < 1e-9


def test_off_circle_root_rejected():
    # data of a decaying exponential c * r^{-n} with r = 1.5
    table = CoeffTable1D({n: 1.5 ** (-n) for n in range(-1, 2)})
    with pytest.raises(OffCircleRootError):
        prony_recover(table, 1)


def test_window_must_be_complete():
    with pytest.raises(ValueError):
        prony_recover(CoeffTable1D({0: 1.0, 1: 1.0}), 1)
