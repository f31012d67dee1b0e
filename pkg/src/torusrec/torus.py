"""Point masses, interval unions and coefficient tables on the torus.

Positions live on the circle of circumference one and are stored by their
canonical representative in [0, 1). The forward transforms in this module
evaluate the defining sums exactly; they are the ground truth against which
every recovery routine in the package is verified.

All values are immutable after construction and all operations are pure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping

import numpy as np

TorusPoint = float

# Masses with amplitude at or below this floor are treated as absent, which
# makes the "all amplitudes nonzero" invariant testable in floating point.
AMPLITUDE_FLOOR = 1e-12

TWO_PI = 2.0 * math.pi


def canon(x: float) -> float:
    """Canonical torus representative of ``x`` in [0, 1)."""
    r = math.fmod(float(x), 1.0)
    return r + 1.0 if r < 0.0 else r


def wrap_distance(x: float, y: float) -> float:
    """Shortest distance between two positions around the circle."""
    d = abs(canon(x) - canon(y))
    return min(d, 1.0 - d)


class Measure1D:
    """Finite sum of complex point masses on the torus.

    Masses at the same canonical position are combined and amplitudes below
    ``AMPLITUDE_FLOOR`` are dropped, so positions are pairwise distinct and
    amplitudes nonzero by construction.
    """

    __slots__ = ("masses",)

    def __init__(self, masses: Iterable[tuple[float, complex]] = ()):
        combined: dict[float, complex] = {}
        for position, amplitude in masses:
            p = canon(position)
            combined[p] = combined.get(p, 0j) + complex(amplitude)
        kept = [(p, a) for p, a in combined.items() if abs(a) > AMPLITUDE_FLOOR]
        kept.sort(key=lambda item: item[0])
        self.masses = tuple(kept)

    @property
    def positions(self) -> np.ndarray:
        return np.array([p for p, _ in self.masses], dtype=float)

    @property
    def amplitudes(self) -> np.ndarray:
        return np.array([a for _, a in self.masses], dtype=complex)

    def shift(self, tau: float) -> "Measure1D":
        """Translate every mass by ``tau`` around the circle."""
        return Measure1D((p + tau, a) for p, a in self.masses)

    def __len__(self) -> int:
        return len(self.masses)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Measure1D):
            return NotImplemented
        return self.masses == other.masses

    def __hash__(self) -> int:
        return hash(self.masses)

    def __repr__(self) -> str:
        return f"Measure1D({list(self.masses)!r})"

    def to_json_obj(self) -> dict:
        return {
            "masses": [
                {"theta": p, "re": a.real, "im": a.imag} for p, a in self.masses
            ]
        }

    @classmethod
    def from_json_obj(cls, obj: Mapping) -> "Measure1D":
        return cls(
            (m["theta"], complex(m["re"], m["im"])) for m in obj["masses"]
        )


class Measure2D:
    """Finite sum of complex point masses on the two-dimensional torus."""

    __slots__ = ("masses",)

    def __init__(self, masses: Iterable[tuple[float, float, complex]] = ()):
        combined: dict[tuple[float, float], complex] = {}
        for x, y, amplitude in masses:
            key = (canon(x), canon(y))
            combined[key] = combined.get(key, 0j) + complex(amplitude)
        kept = [(x, y, a) for (x, y), a in combined.items() if abs(a) > AMPLITUDE_FLOOR]
        kept.sort(key=lambda item: (item[0], item[1]))
        self.masses = tuple(kept)

    @property
    def xs(self) -> np.ndarray:
        return np.array([x for x, _, _ in self.masses], dtype=float)

    @property
    def ys(self) -> np.ndarray:
        return np.array([y for _, y, _ in self.masses], dtype=float)

    @property
    def amplitudes(self) -> np.ndarray:
        return np.array([a for _, _, a in self.masses], dtype=complex)

    def __len__(self) -> int:
        return len(self.masses)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Measure2D):
            return NotImplemented
        return self.masses == other.masses

    def __hash__(self) -> int:
        return hash(self.masses)

    def __repr__(self) -> str:
        return f"Measure2D({list(self.masses)!r})"

    def to_json_obj(self) -> dict:
        return {
            "masses": [
                {"x": x, "y": y, "re": a.real, "im": a.imag}
                for x, y, a in self.masses
            ]
        }

    @classmethod
    def from_json_obj(cls, obj: Mapping) -> "Measure2D":
        return cls(
            (m["x"], m["y"], complex(m["re"], m["im"])) for m in obj["masses"]
        )


def blend_measures(a: Measure2D, b: Measure2D, lam: complex) -> Measure2D:
    """Convex-style blend lam*a + (1-lam)*b of two 2-d measures."""
    masses = [(x, y, lam * c) for x, y, c in a.masses]
    masses += [(x, y, (1.0 - lam) * c) for x, y, c in b.masses]
    return Measure2D(masses)


class IntervalUnion:
    """Union of pairwise disjoint open arcs, each counterclockwise from a to b.

    Arcs may wrap through zero. Empty arcs and touching arcs (shared
    endpoints) are rejected; the empty union (no arcs) is allowed.
    """

    __slots__ = ("arcs",)

    def __init__(self, arcs: Iterable[tuple[float, float]] = ()):
        cleaned = []
        for start, end in arcs:
            a = canon(start)
            b = canon(end)
            length = canon(b - a)
            if length <= 0.0:
                raise ValueError(f"empty arc ({start}, {end})")
            cleaned.append((a, b, length))
        cleaned.sort(key=lambda arc: arc[0])
        for i, (a, _, length) in enumerate(cleaned):
            if i + 1 < len(cleaned):
                next_start = cleaned[i + 1][0]
            else:
                next_start = cleaned[0][0] + 1.0
            if a + length >= next_start:
                raise ValueError("arcs overlap or share an endpoint")
        self.arcs = tuple((a, b) for a, b, _ in cleaned)

    @property
    def lengths(self) -> tuple[float, ...]:
        return tuple(canon(b - a) for a, b in self.arcs)

    @property
    def total_length(self) -> float:
        return float(sum(self.lengths))

    def __len__(self) -> int:
        return len(self.arcs)

    def __eq__(self, other) -> bool:
        if not isinstance(other, IntervalUnion):
            return NotImplemented
        return self.arcs == other.arcs

    def __hash__(self) -> int:
        return hash(self.arcs)

    def __repr__(self) -> str:
        return f"IntervalUnion({list(self.arcs)!r})"

    def to_json_obj(self) -> dict:
        return {"arcs": [[a, b] for a, b in self.arcs]}

    @classmethod
    def from_json_obj(cls, obj: Mapping) -> "IntervalUnion":
        return cls((a, b) for a, b in obj["arcs"])


class CoeffTable1D:
    """Finite association from integer frequency to complex coefficient."""

    __slots__ = ("entries",)

    def __init__(self, entries):
        items = entries.items() if isinstance(entries, Mapping) else entries
        self.entries = {int(f): complex(v) for f, v in items}

    def __getitem__(self, freq: int) -> complex:
        return self.entries[int(freq)]

    def __contains__(self, freq: int) -> bool:
        return int(freq) in self.entries

    def get(self, freq: int, default: complex = 0j) -> complex:
        return self.entries.get(int(freq), default)

    def freqs(self) -> tuple[int, ...]:
        return tuple(sorted(self.entries))

    def items(self):
        return self.entries.items()

    def max_abs(self) -> float:
        return max((abs(v) for v in self.entries.values()), default=0.0)

    def __len__(self) -> int:
        return len(self.entries)

    def __eq__(self, other) -> bool:
        if not isinstance(other, CoeffTable1D):
            return NotImplemented
        return self.entries == other.entries

    def __repr__(self) -> str:
        return f"CoeffTable1D({self.entries!r})"

    def to_json_obj(self) -> dict:
        return {
            "entries": [
                {"nu": f, "re": self.entries[f].real, "im": self.entries[f].imag}
                for f in self.freqs()
            ]
        }

    @classmethod
    def from_json_obj(cls, obj: Mapping) -> "CoeffTable1D":
        return cls(
            (e["nu"], complex(e["re"], e["im"])) for e in obj["entries"]
        )


class CoeffTable2D:
    """Finite association from an integer frequency pair to a coefficient."""

    __slots__ = ("entries",)

    def __init__(self, entries):
        items = entries.items() if isinstance(entries, Mapping) else entries
        self.entries = {
            (int(m), int(n)): complex(v) for (m, n), v in items
        }

    def __getitem__(self, freq: tuple[int, int]) -> complex:
        m, n = freq
        return self.entries[(int(m), int(n))]

    def __contains__(self, freq: tuple[int, int]) -> bool:
        m, n = freq
        return (int(m), int(n)) in self.entries

    def get(self, freq, default: complex = 0j) -> complex:
        m, n = freq
        return self.entries.get((int(m), int(n)), default)

    def freqs(self) -> tuple[tuple[int, int], ...]:
        return tuple(sorted(self.entries))

    def items(self):
        return self.entries.items()

    def max_abs(self) -> float:
        return max((abs(v) for v in self.entries.values()), default=0.0)

    def __len__(self) -> int:
        return len(self.entries)

    def __eq__(self, other) -> bool:
        if not isinstance(other, CoeffTable2D):
            return NotImplemented
        return self.entries == other.entries

    def __repr__(self) -> str:
        return f"CoeffTable2D({self.entries!r})"

    def to_json_obj(self) -> dict:
        return {
            "entries": [
                {
                    "m": m,
                    "n": n,
                    "re": self.entries[(m, n)].real,
                    "im": self.entries[(m, n)].imag,
                }
                for m, n in self.freqs()
            ]
        }

    @classmethod
    def from_json_obj(cls, obj: Mapping) -> "CoeffTable2D":
        return cls(
            ((e["m"], e["n"]), complex(e["re"], e["im"])) for e in obj["entries"]
        )


@dataclass(frozen=True)
class ToleranceConfig:
    """Numerical gates shared by the recovery routines.

    root_tol gates how far annihilator roots may sit from the unit circle,
    residual_tol gates linear-system consistency and amplitude floors,
    match_tol gates forward-reproduction checks, rank_tol thresholds the
    pivoted rank computation. Zero is allowed (it makes the corresponding
    check unsatisfiable, which is occasionally useful for harness testing).
    """

    root_tol: float = 1e-6
    residual_tol: float = 1e-8
    match_tol: float = 1e-6
    rank_tol: float = 1e-9

    def __post_init__(self):
        for name in ("root_tol", "residual_tol", "match_tol", "rank_tol"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be nonnegative")


def forward_coeffs_1d(mu: Measure1D, freqs: Iterable[int]) -> CoeffTable1D:
    """Fourier coefficients of a 1-d point-mass measure.

    entry(n) = sum_j c_j exp(-2 pi i n theta_j).
    """
    freq_list = [int(f) for f in freqs]
    if not mu.masses:
        return CoeffTable1D({f: 0j for f in freq_list})
    pos = mu.positions
    amps = mu.amplitudes
    f_arr = np.array(freq_list, dtype=float)
    vals = np.exp(-2j * np.pi * np.outer(f_arr, pos)) @ amps
    return CoeffTable1D(zip(freq_list, vals))


def forward_coeffs_intervals(union: IntervalUnion, freqs: Iterable[int]) -> CoeffTable1D:
    """Fourier coefficients of the indicator of an interval union.

    entry(0) is the total length; for nu != 0,
    entry(nu) = sum_j (exp(-2 pi i nu a_j) - exp(-2 pi i nu b_j)) / (2 pi i nu).
    """
    freq_list = [int(f) for f in freqs]
    starts = np.array([a for a, _ in union.arcs], dtype=float)
    ends = np.array([b for _, b in union.arcs], dtype=float)
    table = {}
    for f in freq_list:
        if f == 0:
            table[0] = complex(union.total_length)
        elif len(starts) == 0:
            table[f] = 0j
        else:
            num = np.exp(-2j * np.pi * f * starts) - np.exp(-2j * np.pi * f * ends)
            table[f] = complex(num.sum() / (2j * np.pi * f))
    return CoeffTable1D(table)


def forward_coeffs_2d(mu: Measure2D, omega) -> CoeffTable2D:
    """Fourier coefficients of a 2-d point-mass measure on a frequency set.

    ``omega`` is anything with a ``freqs`` attribute or an iterable of
    integer pairs. entry(m, n) = sum_j c_j exp(-2 pi i (m x_j + n y_j)).
    """
    freq_attr = getattr(omega, "freqs", omega)
    pairs = [
        (int(m), int(n)) for m, n in (freq_attr() if callable(freq_attr) else freq_attr)
    ]
    if not mu.masses:
        return CoeffTable2D({p: 0j for p in pairs})
    xs, ys, amps = mu.xs, mu.ys, mu.amplitudes
    ms = np.array([m for m, _ in pairs], dtype=float)
    ns = np.array([n for _, n in pairs], dtype=float)
    phase = np.outer(ms, xs) + np.outer(ns, ys)
    vals = np.exp(-2j * np.pi * phase) @ amps
    return CoeffTable2D(zip(pairs, vals))


def measure_distance(a, b) -> float:
    """Distance between two measures of the same kind.

    Greedy nearest matching over supports; a matched pair contributes the
    larger of its position wrap-distance and its amplitude distance, and
    every unmatched mass contributes its amplitude magnitude. Zero exactly
    on canonically equal inputs.
    """
    if isinstance(a, Measure1D) and isinstance(b, Measure1D):
        def cost(u, v):
            return max(wrap_distance(u[0], v[0]), abs(u[1] - v[1]))
    elif isinstance(a, Measure2D) and isinstance(b, Measure2D):
        def cost(u, v):
            return max(
                wrap_distance(u[0], v[0]),
                wrap_distance(u[1], v[1]),
                abs(u[2] - v[2]),
            )
    else:
        raise TypeError("measure kinds differ")
    items_a = list(a.masses)
    items_b = list(b.masses)
    pairs = sorted(
        (cost(u, v), i, j)
        for i, u in enumerate(items_a)
        for j, v in enumerate(items_b)
    )
    used_a: set[int] = set()
    used_b: set[int] = set()
    worst = 0.0
    for c, i, j in pairs:
        if i in used_a or j in used_b:
            continue
        used_a.add(i)
        used_b.add(j)
        worst = max(worst, c)
    for i, u in enumerate(items_a):
        if i not in used_a:
            worst = max(worst, abs(u[-1]))
    for j, v in enumerate(items_b):
        if j not in used_b:
            worst = max(worst, abs(v[-1]))
    return worst


def interval_distance(e: IntervalUnion, f: IntervalUnion) -> float:
    """Max endpoint discrepancy between two unions under greedy arc matching.

    Returns 1.0 (larger than any wrap distance) when the arc counts differ.
    """
    if len(e.arcs) != len(f.arcs):
        return 1.0
    if not e.arcs:
        return 0.0

    def cost(u, v):
        return max(wrap_distance(u[0], v[0]), wrap_distance(u[1], v[1]))

    pairs = sorted(
        (cost(u, v), i, j)
        for i, u in enumerate(e.arcs)
        for j, v in enumerate(f.arcs)
    )
    used_a: set[int] = set()
    used_b: set[int] = set()
    worst = 0.0
    for c, i, j in pairs:
        if i in used_a or j in used_b:
            continue
        used_a.add(i)
        used_b.add(j)
        worst = max(worst, c)
    return worst
