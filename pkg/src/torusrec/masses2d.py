"""Frequency-set constructions and 2-d point-mass recovery.

Three recovery strategies, by decreasing prior knowledge:

* ``recover_max_k``: at most k masses share any x coordinate. Row slices at
  heights -k..k are 1-d point-mass problems in x; the per-x fiber values
  across heights are then 1-d problems in y.
* ``recover_peeling``: the multiplicity profile (how many masses sit over
  each x) is known. Fibers are recovered in stages of growing multiplicity;
  each stage subtracts what is already known, which shrinks the number of
  remaining x positions and lets narrower rows suffice.
* ``recover_search``: nothing beyond the mass budget N is known, and the
  data sits on the O(N log N) ragged row set. Candidate x positions come
  from row slices; multiplicity profiles over them are enumerated and each
  is handed to the peeling solver, keeping the unique verified survivor.

Interpolation utilities (rank probe, total-degree interpolation through a
random direction) connect recoverability to the interpolation power of the
frequency set's exponentials.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    AmbiguousRecoveryError,
    InconsistentDataError,
    NotRecoveredError,
    PeelingError,
    RecoveryError,
)
from .instances import separated_positions
from .polynomials import numeric_rank, solve_least_squares
from .prony import prony_recover
from .torus import (
    CoeffTable1D,
    CoeffTable2D,
    Measure2D,
    ToleranceConfig,
    blend_measures,
    canon,
    forward_coeffs_2d,
    measure_distance,
    wrap_distance,
)

# Positions recovered from different rows are identified when closer than
# this; instance generators keep true separations well above it.
_SUPPORT_TOL = 1e-4

OMEGA_KINDS = ("max_k", "sufficient", "triangle", "custom")


@dataclass(frozen=True)
class OmegaSet:
    """A finite set of integer frequency pairs with its construction kind."""

    kind: str
    freqs: tuple[tuple[int, int], ...]
    n: int | None = None
    k: int | None = None

    def __post_init__(self):
        if self.kind not in OMEGA_KINDS:
            raise ValueError(f"unknown omega kind {self.kind!r}")
        if len(set(self.freqs)) != len(self.freqs):
            raise ValueError("duplicate frequency pairs")

    def __len__(self) -> int:
        return len(self.freqs)

    def to_json_obj(self) -> dict:
        obj = {"kind": self.kind, "freqs": [[m, n] for m, n in self.freqs]}
        if self.n is not None:
            obj["N"] = self.n
        if self.k is not None:
            obj["k"] = self.k
        return obj

    @classmethod
    def from_json_obj(cls, obj) -> "OmegaSet":
        return cls(
            kind=obj["kind"],
            freqs=tuple((int(m), int(n)) for m, n in obj["freqs"]),
            n=obj.get("N"),
            k=obj.get("k"),
        )


def sufficient_row_width(n: int, r: int) -> int:
    """Half-width 2n // max(1, |r|) of row r in the O(N log N) set."""
    return (2 * n) // max(1, abs(r))


def sufficient_size(n: int) -> int:
    """Size of the O(N log N) set by direct summation of row widths."""
    return sum(2 * sufficient_row_width(n, r) + 1 for r in range(-2 * n, 2 * n + 1))


def build_omega(kind: str, n: int, k: int | None = None) -> OmegaSet:
    """Construct one of the named frequency sets.

    max_k: all (m, l) with |m| <= n, |l| <= k. Recovers measures whose
    fibers hold at most k masses each, from O(kN) coefficients.
    sufficient: rows r = -2n..2n with |m| <= 2n // max(1, |r|); O(N log N)
    coefficients that determine any measure of at most n masses.
    triangle: all (m, l) with m, l >= 0 and m + l <= 2n - 1; the exponential
    monomials of total degree below 2n, a 2n-point interpolating family.
    """
    if n < 1:
        raise ValueError("n must be positive")
    if kind == "max_k":
        if k is None or not (1 <= k <= n):
            raise ValueError("max_k requires 1 <= k <= n")
        freqs = tuple(
            (m, l) for l in range(-k, k + 1) for m in range(-n, n + 1)
        )
        return OmegaSet("max_k", freqs, n=n, k=k)
    if k is not None:
        raise ValueError(f"kind {kind!r} does not take k")
    if kind == "sufficient":
        freqs = tuple(
            (j, r)
            for r in range(-2 * n, 2 * n + 1)
            for j in range(-sufficient_row_width(n, r), sufficient_row_width(n, r) + 1)
        )
        return OmegaSet("sufficient", freqs, n=n)
    if kind == "triangle":
        freqs = tuple(
            (m, l)
            for m in range(2 * n)
            for l in range(2 * n - m)
        )
        return OmegaSet("triangle", freqs, n=n)
    raise ValueError(f"cannot build omega of kind {kind!r}")


def profile_rows_omega(n: int) -> OmegaSet:
    """Rows r = -n..n at half-width n // max(1, |r|).

    Exactly the data consumed by profile-guided peeling at capacity n.
    """
    if n < 1:
        raise ValueError("n must be positive")
    freqs = tuple(
        (j, r)
        for r in range(-n, n + 1)
        for j in range(-(n // max(1, abs(r))), n // max(1, abs(r)) + 1)
    )
    return OmegaSet("custom", freqs, n=n)


@dataclass(frozen=True)
class MultiplicityProfile:
    """How many masses sit over each occupied x coordinate.

    The counts must be positive, sum to at most the capacity, and satisfy
    the decay bound |{x : count >= t}| <= capacity / t for every t (which
    the sum bound already implies; it is asserted for clarity).
    """

    counts: tuple[tuple[float, int], ...]

    def __init__(self, counts):
        items = counts.items() if hasattr(counts, "items") else counts
        cleaned = sorted((canon(x), int(t)) for x, t in items)
        object.__setattr__(self, "counts", tuple(cleaned))

    def positions(self) -> list[float]:
        return [x for x, _ in self.counts]

    def total(self) -> int:
        return sum(t for _, t in self.counts)

    def max_count(self) -> int:
        return max((t for _, t in self.counts), default=0)

    def validate(self, capacity: int) -> None:
        if any(t < 1 for _, t in self.counts):
            raise ValueError("profile counts must be positive")
        positions = self.positions()
        for i, p in enumerate(positions):
            for q in positions[i + 1 :]:
                if wrap_distance(p, q) < _SUPPORT_TOL:
                    raise ValueError("profile positions are not distinct")
        if self.total() > capacity:
            raise ValueError(
                f"profile total {self.total()} exceeds capacity {capacity}"
            )
        for t in range(1, self.max_count() + 1):
            tall = sum(1 for _, c in self.counts if c >= t)
            if tall * t > capacity:
                raise ValueError(
                    f"profile violates the decay bound at multiplicity {t}"
                )


def slice_row(table: CoeffTable2D, r: int, width: int) -> CoeffTable1D:
    """The 1-d coefficient table m -> table(m, r) for |m| <= width."""
    entries = {}
    for m in range(-width, width + 1):
        if (m, r) not in table:
            raise ValueError(f"table is missing entry ({m}, {r})")
        entries[m] = table[(m, r)]
    return CoeffTable1D(entries)


def _merge_position(candidates: list[float], p: float) -> None:
    for q in candidates:
        if wrap_distance(p, q) < _SUPPORT_TOL:
            return
    candidates.append(p)


def _fiber_value(row_measure, x: float) -> complex:
    total = 0j
    for p, a in row_measure.masses:
        if wrap_distance(p, x) < _SUPPORT_TOL:
            total += a
    return total


def _verify_forward(mu: Measure2D, table: CoeffTable2D, gate: float) -> float:
    fwd = forward_coeffs_2d(mu, table.freqs())
    residual = max(
        (abs(fwd[p] - table[p]) for p in table.freqs()), default=0.0
    )
    return residual if residual <= gate else -residual


def recover_max_k(
    table: CoeffTable2D,
    capacity: int,
    k: int,
    tol: ToleranceConfig | None = None,
) -> Measure2D:
    """Recover a measure whose fibers hold at most k masses each.

    Needs the table on build_omega("max_k", capacity, k). Row slices at
    heights -k..k give the fiber transform values S(x, l); stacking those
    per x and running the 1-d solver at capacity k yields the fibers.
    """
    tol = tol or ToleranceConfig()
    omega = build_omega("max_k", capacity, k)
    rows = {}
    for l in range(-k, k + 1):
        try:
            rows[l] = prony_recover(slice_row(table, l, capacity), capacity, tol)
        except RecoveryError as exc:
            raise InconsistentDataError(f"row {l}: {exc}") from exc
    xs: list[float] = []
    for l in range(-k, k + 1):
        for p, _ in rows[l].masses:
            _merge_position(xs, p)
    masses = []
    for x in xs:
        fiber = CoeffTable1D(
            {l: _fiber_value(rows[l], x) for l in range(-k, k + 1)}
        )
        try:
            lam = prony_recover(fiber, k, tol)
        except RecoveryError as exc:
            raise InconsistentDataError(
                f"fiber over x={x:.6f} is not a sum of <= {k} masses: {exc}"
            ) from exc
        masses.extend((x, y, c) for y, c in lam.masses)
    mu = Measure2D(masses)
    gate = tol.match_tol * max(1.0, table.max_abs())
    sub = CoeffTable2D({p: table[p] for p in omega.freqs})
    residual = _verify_forward(mu, sub, gate)
    if residual < 0:
        raise InconsistentDataError(
            f"forward residual {-residual:.3e} exceeds {gate:.3e}"
        )
    return mu


def recover_peeling(
    table: CoeffTable2D,
    capacity: int,
    profile,
    tol: ToleranceConfig | None = None,
) -> Measure2D:
    """Recover a measure given its multiplicity profile.

    Stage t handles the x positions carrying exactly t masses: coefficients
    of everything recovered so far are subtracted, rows |r| <= t at
    half-width capacity // t are sliced (at most capacity / t positions
    remain, so the narrower window still determines them), and each target
    fiber is recovered from its 2t+1 values. Failures carry the stage index.
    """
    tol = tol or ToleranceConfig()
    if not isinstance(profile, MultiplicityProfile):
        profile = MultiplicityProfile(profile)
    profile.validate(capacity)
    recovered: list[tuple[float, float, complex]] = []
    for stage in range(1, profile.max_count() + 1):
        targets = [x for x, t in profile.counts if t == stage]
        if not targets:
            continue
        width = capacity // stage
        needed = [
            (m, r)
            for r in range(-stage, stage + 1)
            for m in range(-width, width + 1)
        ]
        for p in needed:
            if p not in table:
                raise ValueError(f"table is missing entry {p} for stage {stage}")
        done = Measure2D(recovered)
        fwd = forward_coeffs_2d(done, needed)
        remaining = {p: table[p] - fwd[p] for p in needed}
        row_measures = {}
        for r in range(-stage, stage + 1):
            row_table = CoeffTable1D(
                {m: remaining[(m, r)] for m in range(-width, width + 1)}
            )
            try:
                row_measures[r] = prony_recover(row_table, width, tol)
            except RecoveryError as exc:
                raise PeelingError(stage, f"row {r}: {exc}") from exc
        live = [x for x, t in profile.counts if t >= stage]
        for r, rm in row_measures.items():
            for p, _ in rm.masses:
                if all(wrap_distance(p, x) >= _SUPPORT_TOL for x in live):
                    raise PeelingError(
                        stage,
                        f"row {r} shows support at x={p:.6f} outside the profile",
                    )
        for x in targets:
            fiber = CoeffTable1D(
                {
                    r: _fiber_value(row_measures[r], x)
                    for r in range(-stage, stage + 1)
                }
            )
            try:
                lam = prony_recover(fiber, stage, tol)
            except RecoveryError as exc:
                raise PeelingError(stage, f"fiber over x={x:.6f}: {exc}") from exc
            if len(lam) != stage:
                raise PeelingError(
                    stage,
                    f"fiber over x={x:.6f} recovered {len(lam)} masses, "
                    f"profile says {stage}",
                )
            recovered.extend((x, y, c) for y, c in lam.masses)
    mu = Measure2D(recovered)
    gate = tol.match_tol * max(1.0, table.max_abs())
    residual = _verify_forward(mu, table, gate)
    if residual < 0:
        raise PeelingError(
            profile.max_count(),
            f"forward residual {-residual:.3e} exceeds {gate:.3e}",
        )
    return mu


def _ambiguity(mu_a: Measure2D, mu_b: Measure2D) -> AmbiguousRecoveryError:
    witness = blend_measures(mu_a, mu_b, 0.5)
    return AmbiguousRecoveryError(
        "multiple measures reproduce the data within tolerance; every "
        "blend lam * first + (1 - lam) * second shares the same "
        "coefficients, witness is the midpoint blend",
        (mu_a, mu_b),
        witness,
    )


def _compositions(total: int, parts: int):
    """All tuples of ``parts`` positive integers summing to ``total``."""
    if parts == 1:
        yield (total,)
        return
    for first in range(1, total - parts + 2):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def recover_search(
    table: CoeffTable2D,
    capacity: int,
    tol: ToleranceConfig | None = None,
    budget: int = 200,
) -> Measure2D:
    """Recover a measure of at most ``capacity`` masses with no profile.

    Needs the table on build_omega("sufficient", capacity). Candidate x
    positions are collected from every row slice that admits a consistent
    1-d fit (rows at heights 0 and +-1 always do); multiplicity profiles
    over the candidates are enumerated in increasing total mass count and
    each is handed to the peeling solver. The unique verified survivor is
    returned; two distinct survivors raise AmbiguousRecoveryError with a
    blend witness, and ``budget`` caps the number of profiles attempted.
    """
    tol = tol or ToleranceConfig()
    width2 = 2 * capacity
    omega = build_omega("sufficient", capacity)
    for p in omega.freqs:
        if p not in table:
            raise ValueError(f"table is missing entry {p}")
    scale = table.max_abs()
    if scale <= tol.residual_tol:
        return Measure2D()

    candidates: list[float] = []
    for r in (0, 1, -1):
        try:
            rm = prony_recover(slice_row(table, r, width2), capacity, tol)
        except RecoveryError as exc:
            raise InconsistentDataError(f"row {r}: {exc}") from exc
        for p, _ in rm.masses:
            _merge_position(candidates, p)
    mandatory = list(candidates)
    for r in itertools.chain.from_iterable(
        (r, -r) for r in range(2, width2 + 1)
    ):
        width = sufficient_row_width(capacity, r)
        try:
            rm = prony_recover(
                slice_row(table, r, width), min(width, capacity), tol
            )
        except RecoveryError:
            continue
        for p, _ in rm.masses:
            _merge_position(candidates, p)

    optional = [x for x in candidates if x not in mandatory]
    successes: list[Measure2D] = []
    attempts = 0
    exhausted = False
    for total in range(max(len(mandatory), 1), capacity + 1):
        if exhausted:
            break
        max_extra = min(len(optional), total - len(mandatory))
        for extra_size in range(0, max_extra + 1):
            if exhausted:
                break
            for extra in itertools.combinations(optional, extra_size):
                support = sorted(mandatory + list(extra))
                if not support or len(support) > total:
                    continue
                for counts in _compositions(total, len(support)):
                    if attempts >= budget:
                        exhausted = True
                        break
                    attempts += 1
                    profile = MultiplicityProfile(zip(support, counts))
                    try:
                        profile.validate(capacity)
                        cand = recover_peeling(table, capacity, profile, tol)
                    except (RecoveryError, ValueError):
                        continue
                    if all(
                        measure_distance(cand, seen) > 10 * tol.match_tol
                        for seen in successes
                    ):
                        successes.append(cand)
                if exhausted:
                    break
    if not successes:
        if exhausted:
            raise NotRecoveredError(
                f"profile enumeration budget of {budget} exhausted"
            )
        raise InconsistentDataError(
            f"no measure with <= {capacity} masses matches the data"
        )
    if len(successes) > 1:
        raise _ambiguity(successes[0], successes[1])
    return successes[0]


# ---------------------------------------------------------------------------
# Interpolation probes.
# ---------------------------------------------------------------------------


def is_interpolating(
    omega, points, tol: ToleranceConfig | None = None
) -> bool:
    """Whether the exponentials of omega interpolate at the given points.

    True iff the |points| x |omega| matrix exp(2 pi i u . w) has full row
    rank, i.e. arbitrary values at the points can be matched by a linear
    combination of the frequency exponentials.
    """
    tol = tol or ToleranceConfig()
    freqs = list(getattr(omega, "freqs", omega))
    pts = [(canon(x), canon(y)) for x, y in points]
    if len(set(pts)) != len(pts):
        raise ValueError("duplicate points")
    ms = np.array([m for m, _ in freqs], dtype=float)
    ns = np.array([n for _, n in freqs], dtype=float)
    xs = np.array([x for x, _ in pts], dtype=float)
    ys = np.array([y for _, y in pts], dtype=float)
    matrix = np.exp(2j * np.pi * (np.outer(xs, ms) + np.outer(ys, ns)))
    return numeric_rank(matrix, tol.rank_tol) == len(pts)


def triangle_interpolate(
    points,
    values,
    capacity: int,
    rng: np.random.Generator,
    tol: ToleranceConfig | None = None,
) -> dict[tuple[int, int], complex]:
    """Interpolation coefficients on the triangle frequency set.

    Projects the embedded points (e^{2 pi i x}, e^{2 pi i y}) onto a random
    complex direction, interpolates the values by a one-variable polynomial
    in the projection, and expands binomially into the monomials of total
    degree <= 2 * capacity - 1. The direction is resampled (up to 20 draws)
    until the projections separate and the residual check passes.
    """
    tol = tol or ToleranceConfig()
    pts = [(canon(x), canon(y)) for x, y in points]
    vals = [complex(v) for v in values]
    if len(pts) != len(vals):
        raise ValueError("points and values must have equal length")
    if not (1 <= len(pts) <= 2 * capacity):
        raise ValueError(f"need between 1 and {2 * capacity} points")
    if len(set(pts)) != len(pts):
        raise ValueError("duplicate points")
    zs = np.array([np.exp(2j * np.pi * x) for x, _ in pts])
    ws = np.array([np.exp(2j * np.pi * y) for _, y in pts])
    count = len(pts)
    triangle = build_omega("triangle", capacity)
    for _ in range(20):
        raw = rng.standard_normal(4)
        norm = float(np.hypot(np.hypot(raw[0], raw[1]), np.hypot(raw[2], raw[3])))
        u1 = complex(raw[0], raw[1]) / norm
        u2 = complex(raw[2], raw[3]) / norm
        t = u1 * zs + u2 * ws
        if count > 1:
            gaps = np.abs(t[:, None] - t[None, :])[
                np.triu_indices(count, 1)
            ]
            if float(np.min(gaps)) <= tol.rank_tol:
                continue
        poly = np.zeros(count, dtype=complex)
        for i in range(count):
            basis = np.array([1.0 + 0j])
            denom = 1.0 + 0j
            for j in range(count):
                if j == i:
                    continue
                basis = np.convolve(basis, np.array([-t[j], 1.0 + 0j]))
                denom *= t[i] - t[j]
            poly[: len(basis)] += vals[i] * basis / denom
        coeffs = {}
        for m, l in triangle.freqs:
            d = m + l
            if d < count:
                coeffs[(m, l)] = (
                    poly[d] * math.comb(d, m) * (u1 ** m) * (u2 ** l)
                )
            else:
                coeffs[(m, l)] = 0j
        check = np.zeros(count, dtype=complex)
        for (m, l), c in coeffs.items():
            if c != 0:
                check += c * (zs ** m) * (ws ** l)
        if float(np.max(np.abs(check - np.array(vals)))) <= 1e-8 * max(
            1.0, float(np.max(np.abs(vals))) if vals else 1.0
        ):
            return coeffs
    raise RuntimeError(
        "no separating direction with an accurate interpolant in 20 draws "
        "(a probability-zero event for distinct points)"
    )


@dataclass(frozen=True)
class ProbeReport:
    """Outcome of an empirical sufficiency probe of a frequency set."""

    trials: int
    passes: int
    insufficient: bool = False
    witness: tuple[Measure2D, Measure2D] | None = None
    witness_defect: float | None = None

    @property
    def all_passed(self) -> bool:
        return self.passes == self.trials

    def to_json_obj(self) -> dict:
        obj = {
            "trials": self.trials,
            "passes": self.passes,
            "all_passed": self.all_passed,
            "insufficient": self.insufficient,
        }
        if self.witness is not None:
            obj["witness"] = [w.to_json_obj() for w in self.witness]
            obj["witness_defect"] = self.witness_defect
        return obj


def sufficiency_probe(
    omega,
    capacity: int,
    trials: int,
    rng: np.random.Generator,
    tol: ToleranceConfig | None = None,
) -> ProbeReport:
    """Empirical interpolation test of a frequency set.

    Draws ``trials`` sets of 2 * capacity random points (coordinatewise
    separation floor 0.02) and counts rank-test passes; a set that passes
    systematically behaves as capacity-sufficient on generic data. When the
    set lies on a single horizontal line n = c it cannot be sufficient for
    any capacity: the report then carries an explicit witness pair of
    single masses at (x, 0) and (x, 1/2), the second scaled by (-1)^c so
    that both have identical coefficients on the whole line.
    """
    tol = tol or ToleranceConfig()
    if trials < 1:
        raise ValueError("trials must be positive")
    freqs = list(getattr(omega, "freqs", omega))
    passes = 0
    for _ in range(trials):
        xs = separated_positions(rng, 2 * capacity, 0.02)
        ys = separated_positions(rng, 2 * capacity, 0.02)
        if is_interpolating(freqs, list(zip(xs, ys)), tol):
            passes += 1
    heights = {n for _, n in freqs}
    if len(heights) == 1:
        c = heights.pop()
        x = float(rng.uniform())
        first = Measure2D([(x, 0.0, 1.0)])
        second = Measure2D([(x, 0.5, (-1.0) ** c)])
        t_first = forward_coeffs_2d(first, freqs)
        t_second = forward_coeffs_2d(second, freqs)
        defect = max(
            abs(t_first[p] - t_second[p]) for p in t_first.freqs()
        )
        return ProbeReport(
            trials=trials,
            passes=passes,
            insufficient=True,
            witness=(first, second),
            witness_defect=defect,
        )
    return ProbeReport(trials=trials, passes=passes)
