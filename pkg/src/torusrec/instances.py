"""Deterministic random instance generation for tests and the CLI harness.

All randomness flows through numpy Generators seeded by an explicit seed and
trial counter, so identical (seed, trial) pairs reproduce identical objects.
"""

from __future__ import annotations

import numpy as np

from .torus import IntervalUnion, Measure1D, Measure2D, canon


def trial_rng(seed: int, trial: int = 0) -> np.random.Generator:
    """Independent substream for one trial of a seeded run."""
    return np.random.default_rng(
        np.random.SeedSequence(entropy=int(seed), spawn_key=(int(trial),))
    )


def separated_positions(
    rng: np.random.Generator, count: int, separation: float
) -> list[float]:
    """``count`` torus positions with pairwise wrap distance >= separation.

    Built directly from a random gap vector, so no rejection loop is needed:
    consecutive gaps are separation plus a Dirichlet share of the slack.
    """
    if count < 1:
        raise ValueError("count must be positive")
    slack = 1.0 - count * separation
    if count > 1 and slack <= 0:
        raise ValueError(
            f"cannot place {count} positions with separation {separation}"
        )
    if count == 1:
        return [float(rng.uniform())]
    gaps = separation + rng.dirichlet(np.ones(count)) * slack
    offset = rng.uniform()
    positions = offset + np.concatenate([[0.0], np.cumsum(gaps[:-1])])
    out = [canon(p) for p in positions]
    rng.shuffle(out)
    return out


def random_amplitudes(rng: np.random.Generator, count: int) -> np.ndarray:
    """Complex amplitudes with magnitude in [0.1, 3] and uniform phase."""
    mags = rng.uniform(0.1, 3.0, size=count)
    phases = rng.uniform(0.0, 2.0 * np.pi, size=count)
    return mags * np.exp(1j * phases)


def random_measure1d(
    rng: np.random.Generator, count: int, separation: float = 0.05
) -> Measure1D:
    positions = separated_positions(rng, count, separation)
    amps = random_amplitudes(rng, count)
    return Measure1D(zip(positions, amps))


def random_interval_union(
    rng: np.random.Generator, count: int, separation: float = 0.02
) -> IntervalUnion:
    """Union of ``count`` disjoint arcs with all endpoint gaps >= separation."""
    pts = sorted(separated_positions(rng, 2 * count, separation))
    parity = int(rng.integers(0, 2))
    arcs = [
        (
            pts[(2 * j + parity) % (2 * count)],
            pts[(2 * j + 1 + parity) % (2 * count)],
        )
        for j in range(count)
    ]
    return IntervalUnion(arcs)


def random_measure2d(
    rng: np.random.Generator,
    fiber_counts: list[int],
    separation: float = 0.05,
) -> Measure2D:
    """Measure with one fiber per entry of ``fiber_counts``.

    Distinct x coordinates are pairwise separated; within each fiber the y
    coordinates are pairwise separated as well.
    """
    if not fiber_counts or any(c < 1 for c in fiber_counts):
        raise ValueError("fiber_counts must be positive integers")
    xs = separated_positions(rng, len(fiber_counts), separation)
    masses = []
    for x, count in zip(xs, fiber_counts):
        ys = separated_positions(rng, count, separation)
        amps = random_amplitudes(rng, count)
        masses.extend((x, y, a) for y, a in zip(ys, amps))
    return Measure2D(masses)


def random_fiber_counts(
    rng: np.random.Generator, total: int, max_mult: int
) -> list[int]:
    """Random partition of ``total`` masses into fibers of size <= max_mult."""
    counts = []
    remaining = total
    while remaining > 0:
        c = int(rng.integers(1, min(max_mult, remaining) + 1))
        counts.append(c)
        remaining -= c
    rng.shuffle(counts)
    return counts


def gen_random_instance(kind: str, n: int, seed: int, separation: float):
    """Seed-deterministic random instance of one of the model classes.

    ``kind`` is one of masses1d, intervals, masses2d; the object has exactly
    ``n`` masses or arcs with pairwise separations >= separation.
    """
    if n < 1:
        raise ValueError("n must be positive")
    if separation * 2 * n >= 1.0:
        raise ValueError(
            f"infeasible separation: {separation} x {2 * n} endpoints >= 1"
        )
    rng = trial_rng(seed)
    if kind == "masses1d":
        return random_measure1d(rng, n, separation)
    if kind == "intervals":
        return random_interval_union(rng, n, separation)
    if kind == "masses2d":
        xs = separated_positions(rng, n, separation)
        ys = separated_positions(rng, n, separation)
        amps = random_amplitudes(rng, n)
        return Measure2D(zip(xs, ys, amps))
    raise ValueError(f"unknown instance kind {kind!r}")
