"""Interval-union recovery and the matched-coefficient counterexamples.

A union of at most N disjoint open arcs is determined by its indicator's
Fourier coefficients at 0..N. Recovery here runs in two regimes:

* ``recover_intervals_extended`` uses the richer window 0..2N, where the
  endpoint measure (derivative of the indicator) can be recovered directly
  by the 1-d point-mass solver.
* ``recover_intervals_minimal`` uses only 0..N. For n arcs with 2n <= N the
  endpoint data embeds in a rational power series recovered by a Pade-type
  linear solve; beyond that regime a damped Gauss-Newton search with random
  multistarts finds the unique zero-residual endpoint configuration.

The module also constructs pairs of distinct N-arc unions whose coefficients
agree at 1..2N-1 (two interleaved regular 2N-gons) and enumerates all valid
vertex labelings of that construction via an odd-multiset encoding, a
Terquem-style alternating-subset count.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .errors import InconsistentDataError, NotRecoveredError
from .polynomials import (
    RootConvergenceError,
    poly_mul,
    roots as poly_roots,
    solve_least_squares,
    solve_square,
)
from .prony import prony_recover
from .torus import (
    CoeffTable1D,
    IntervalUnion,
    ToleranceConfig,
    canon,
    forward_coeffs_intervals,
    wrap_distance,
)

TWO_PI = 2.0 * math.pi

# The constant coefficient of a real indicator must be real to this accuracy.
_REALNESS_TOL = 1e-12


def _require_freqs_0_to(coeffs: CoeffTable1D, top: int) -> None:
    if coeffs.freqs() != tuple(range(top + 1)):
        raise ValueError(f"coefficient table must cover exactly 0..{top}")


def differentiate_coeffs(coeffs: CoeffTable1D) -> CoeffTable1D:
    """Coefficients of the endpoint measure of a real indicator function.

    Input on 0..L, output on -L..L with entry(nu) = 2 pi i nu entry_in(nu),
    negative frequencies filled by conjugation (valid because the underlying
    function is real) and entry(0) = 0.
    """
    freqs = coeffs.freqs()
    if not freqs or freqs[0] != 0:
        raise ValueError("table must start at frequency 0")
    top = freqs[-1]
    _require_freqs_0_to(coeffs, top)
    c0 = coeffs[0]
    if abs(c0.imag) > _REALNESS_TOL:
        raise ValueError(f"entry(0) = {c0} is not real")
    out = {0: 0j}
    for nu in range(1, top + 1):
        val = 2j * math.pi * nu * coeffs[nu]
        out[nu] = val
        out[-nu] = val.conjugate()
    return CoeffTable1D(out)


def _assemble_arcs(
    lefts: list[float], rights: list[float], tie_tol: float
) -> list[tuple[float, float]]:
    """Pair left endpoints with the next right endpoint counterclockwise.

    Raises InconsistentDataError when the endpoints do not strictly
    alternate left/right around the circle, or when two endpoints are
    closer than tie_tol.
    """
    events = sorted(
        [(canon(p), 1) for p in lefts] + [(canon(p), -1) for p in rights]
    )
    count = len(events)
    for i in range(count):
        here = events[i][0]
        there = events[(i + 1) % count][0]
        if wrap_distance(here, there) < tie_tol:
            raise InconsistentDataError(
                f"endpoints {here} and {there} are too close to order"
            )
        if events[i][1] == events[(i + 1) % count][1]:
            raise InconsistentDataError(
                "endpoints do not alternate between left and right"
            )
    arcs = []
    for i, (pos, sign) in enumerate(events):
        if sign == 1:
            arcs.append((pos, events[(i + 1) % count][0]))
    return arcs


def recover_intervals_extended(
    coeffs: CoeffTable1D, capacity: int, tol: ToleranceConfig | None = None
) -> IntervalUnion:
    """Recover a union of at most ``capacity`` arcs from coefficients 0..2N.

    The differentiated table is handed to the point-mass solver with
    capacity 2N; recovered amplitudes must sit within match_tol of +1 (left
    endpoints) or -1 (right endpoints) in equal numbers, endpoints must
    alternate, and the assembled union must reproduce the stated total
    length.
    """
    tol = tol or ToleranceConfig()
    if capacity < 1:
        raise ValueError("capacity must be at least 1")
    _require_freqs_0_to(coeffs, 2 * capacity)
    c0 = coeffs[0]
    if not (-_REALNESS_TOL <= c0.real < 1.0):
        raise ValueError(f"entry(0) = {c0} outside [0, 1)")
    diff = differentiate_coeffs(coeffs)
    mu = prony_recover(diff, 2 * capacity, tol)
    if not mu.masses:
        if abs(c0) <= tol.match_tol:
            return IntervalUnion()
        raise InconsistentDataError(
            "zero endpoint measure but nonzero total length"
        )
    lefts: list[float] = []
    rights: list[float] = []
    for pos, amp in mu.masses:
        if abs(amp - 1.0) <= tol.match_tol:
            lefts.append(pos)
        elif abs(amp + 1.0) <= tol.match_tol:
            rights.append(pos)
        else:
            raise InconsistentDataError(
                f"endpoint amplitude {amp} is not within tolerance of +1 or -1"
            )
    if len(lefts) != len(rights):
        raise InconsistentDataError(
            f"unbalanced endpoints: {len(lefts)} left vs {len(rights)} right"
        )
    if len(lefts) > capacity:
        raise InconsistentDataError(
            f"{len(lefts)} arcs exceed the declared capacity {capacity}"
        )
    union = IntervalUnion(_assemble_arcs(lefts, rights, tol.root_tol))
    if abs(union.total_length - c0.real) > tol.match_tol:
        raise InconsistentDataError(
            f"total length {union.total_length} does not match entry(0) = {c0.real}"
        )
    return union


def _power_data(coeffs: CoeffTable1D, top: int) -> np.ndarray:
    """p_nu = 2 pi i nu entry(nu) for nu = 1..top (index 0 unused)."""
    p = np.zeros(top + 1, dtype=complex)
    for nu in range(1, top + 1):
        p[nu] = 2j * math.pi * nu * coeffs[nu]
    return p


def _log_derivative_series(p: np.ndarray, order: int) -> np.ndarray:
    """Series g with g0 = 1 and g_k = -(1/k) sum_{j=1..k} p_j g_{k-j}.

    This is exp(-sum_nu p_nu x^nu / nu) truncated at ``order``; when the
    p_nu are differences of endpoint power sums it equals the rational
    function prod(1 - z_j x) / prod(1 - w_j x) as a series.
    """
    g = np.zeros(order + 1, dtype=complex)
    g[0] = 1.0
    for k in range(1, order + 1):
        acc = 0j
        for j in range(1, k + 1):
            acc += p[j] * g[k - j]
        g[k] = -acc / k
    return g


def _endpoints_from_factor_poly(coeffs, tol: ToleranceConfig):
    """Positions t_j with prod_j (1 - e^{-2 pi i t_j} x) = the given polynomial.

    Roots of the polynomial are the reciprocals 1/v_j; unimodularity turns
    reciprocals into conjugates. Returns None when a root leaves the circle.
    """
    try:
        rts = poly_roots(coeffs, tol.root_tol)
    except (RootConvergenceError, ValueError):
        return None
    radii = np.abs(rts)
    if float(np.max(np.abs(radii - 1.0))) > tol.root_tol:
        return None
    v = np.conjugate(rts / radii)
    return [canon(-float(a) / TWO_PI) for a in np.angle(v)]


def _single_arc_candidate(coeffs: CoeffTable1D, tol: ToleranceConfig):
    """Closed form for one arc: entry(0) is the length, entry(1) the start."""
    length = coeffs[0].real
    p1 = 2j * math.pi * coeffs[1]
    den = 1.0 - np.exp(-2j * math.pi * length)
    if abs(den) < 1e-14:
        return None
    z = p1 / den
    if abs(abs(z) - 1.0) > tol.root_tol:
        return None
    start = canon(-float(np.angle(z)) / TWO_PI)
    try:
        return IntervalUnion([(start, start + length)])
    except ValueError:
        return None


def _series_candidate(coeffs: CoeffTable1D, n: int, tol: ToleranceConfig):
    """Pade-type linear recovery of an n-arc union; needs 2n <= len(data)-1.

    Solves the order-n annihilation equations for the denominator of the
    endpoint series, truncates the numerator, extracts both unimodular root
    sets and assembles arcs. Any failed gate returns None so the caller can
    move on to the next trial arc count.
    """
    top = coeffs.freqs()[-1]
    if 2 * n > top:
        return None
    p = _power_data(coeffs, top)
    g = _log_derivative_series(p, top)
    a = np.empty((n, n), dtype=complex)
    rhs = np.empty(n, dtype=complex)
    for r_i, k in enumerate(range(n + 1, 2 * n + 1)):
        for j in range(1, n + 1):
            a[r_i, j - 1] = g[k - j]
        rhs[r_i] = -g[k]
    sol = solve_square(a, rhs)
    if sol is None:
        sol = solve_least_squares(a, rhs)
        if not np.all(np.isfinite(sol)):
            return None
    denom = np.concatenate([[1.0 + 0j], sol])
    numer = poly_mul(denom, g)[: n + 1]
    peak = float(max(np.max(np.abs(numer)), np.max(np.abs(denom))))
    if abs(numer[n]) <= 1e-8 * peak or abs(denom[n]) <= 1e-8 * peak:
        return None
    lefts = _endpoints_from_factor_poly(numer, tol)
    rights = _endpoints_from_factor_poly(denom, tol)
    if lefts is None or rights is None:
        return None
    try:
        return IntervalUnion(_assemble_arcs(lefts, rights, tol.root_tol))
    except (InconsistentDataError, ValueError):
        return None


def _descent_candidate(
    coeffs: CoeffTable1D,
    n: int,
    tol: ToleranceConfig,
    rng: np.random.Generator,
    max_iter: int = 120,
):
    """One damped Gauss-Newton start on the endpoint parameterization.

    Parameters are (start_j, length_j) per arc; the residual stacks the
    total-length defect and the real and imaginary coefficient defects at
    1..N. Steps that break arc validity are halved away; a start that stalls
    returns None.
    """
    top = coeffs.freqs()[-1]
    total = coeffs[0].real
    data = np.array([coeffs[nu] for nu in range(1, top + 1)], dtype=complex)
    scale = max(1.0, coeffs.max_abs())
    nus = np.arange(1, top + 1, dtype=float)

    lengths = total * rng.dirichlet(np.ones(n))
    gaps = (1.0 - total) * rng.dirichlet(np.ones(n))
    starts = np.empty(n)
    cursor = rng.uniform()
    for j in range(n):
        starts[j] = cursor
        cursor += lengths[j] + gaps[j]
    x = np.empty(2 * n)
    x[0::2] = starts
    x[1::2] = lengths

    def arcs_of(vec):
        return [(vec[2 * j], vec[2 * j] + vec[2 * j + 1]) for j in range(n)]

    def is_valid(vec) -> bool:
        if np.any(vec[1::2] <= 1e-9) or float(np.sum(vec[1::2])) >= 1.0 - 1e-9:
            return False
        try:
            IntervalUnion(arcs_of(vec))
        except ValueError:
            return False
        return True

    def residual(vec) -> np.ndarray:
        a = vec[0::2]
        b = a + vec[1::2]
        ea = np.exp(-2j * np.pi * np.outer(nus, a))
        eb = np.exp(-2j * np.pi * np.outer(nus, b))
        model = (ea - eb).sum(axis=1) / (2j * np.pi * nus)
        diff = model - data
        return np.concatenate(
            [[float(np.sum(vec[1::2])) - total], diff.real, diff.imag]
        )

    def jacobian(vec) -> np.ndarray:
        a = vec[0::2]
        b = a + vec[1::2]
        ea = np.exp(-2j * np.pi * np.outer(nus, a))
        eb = np.exp(-2j * np.pi * np.outer(nus, b))
        d_a = -ea + eb
        d_len = eb
        jac = np.zeros((1 + 2 * top, 2 * n))
        jac[0, 1::2] = 1.0
        jac[1 : top + 1, 0::2] = d_a.real
        jac[1 : top + 1, 1::2] = d_len.real
        jac[top + 1 :, 0::2] = d_a.imag
        jac[top + 1 :, 1::2] = d_len.imag
        return jac

    if not is_valid(x):
        return None
    f = residual(x)
    for _ in range(max_iter):
        if float(np.max(np.abs(f))) <= tol.residual_tol * scale:
            try:
                return IntervalUnion(arcs_of(x))
            except ValueError:
                return None
        step, *_ = np.linalg.lstsq(jacobian(x), -f, rcond=None)
        t = 1.0
        improved = False
        norm_f = float(np.linalg.norm(f))
        for _ in range(12):
            trial = x + t * step
            if is_valid(trial):
                f_trial = residual(trial)
                if float(np.linalg.norm(f_trial)) < norm_f:
                    x, f = trial, f_trial
                    improved = True
                    break
            t *= 0.5
        if not improved:
            return None
    if float(np.max(np.abs(f))) <= tol.residual_tol * scale:
        try:
            return IntervalUnion(arcs_of(x))
        except ValueError:
            return None
    return None


def recover_intervals_minimal(
    coeffs: CoeffTable1D,
    capacity: int,
    tol: ToleranceConfig | None = None,
    budget: int = 50,
    rng: np.random.Generator | None = None,
) -> IntervalUnion:
    """Recover a union of at most ``capacity`` arcs from coefficients 0..N.

    Attempts, in order: the one-arc closed form, the Pade-type linear branch
    for each arc count n <= N/2, and finally ``budget`` Gauss-Newton
    multistarts per arc count n = 1..N. Every candidate must reproduce the
    input table within match_tol before it is returned. ``rng`` drives the
    multistarts only; the default stream is fixed for reproducibility.
    """
    tol = tol or ToleranceConfig()
    if capacity < 1:
        raise ValueError("capacity must be at least 1")
    _require_freqs_0_to(coeffs, capacity)
    c0 = coeffs[0]
    if abs(c0.imag) > _REALNESS_TOL:
        raise ValueError(f"entry(0) = {c0} is not real")
    if not (0.0 < c0.real < 1.0):
        raise ValueError(f"entry(0) = {c0.real} outside (0, 1)")

    freqs = list(range(capacity + 1))
    gate = tol.match_tol * max(1.0, coeffs.max_abs())

    def verified(union: IntervalUnion | None) -> bool:
        if union is None or len(union.arcs) > capacity:
            return False
        fwd = forward_coeffs_intervals(union, freqs)
        return max(abs(fwd[nu] - coeffs[nu]) for nu in freqs) <= gate

    cand = _single_arc_candidate(coeffs, tol)
    if verified(cand):
        return cand
    for n in range(1, capacity // 2 + 1):
        cand = _series_candidate(coeffs, n, tol)
        if verified(cand):
            return cand
    rng = rng if rng is not None else np.random.default_rng(0)
    for n in range(1, capacity + 1):
        for _ in range(budget):
            cand = _descent_candidate(coeffs, n, tol, rng)
            if verified(cand):
                return cand
    raise NotRecoveredError(
        f"no union of <= {capacity} arcs recovered within the multistart "
        "budget (the data may still be consistent)"
    )


# ---------------------------------------------------------------------------
# Matched-coefficient counterexamples on two interleaved regular polygons.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Arrangement:
    """A labeling of 4n interleaved polygon vertices by arc endpoints.

    Slots 0..4n-1 run counterclockwise; even slots are vertices of the base
    regular 2n-gon, odd slots of the rotated copy. Labels are "z<j>"/"w<j>"
    (endpoints of the first union) and "z'<j>"/"w'<j>" (second union).

    Invariants (anchored form):
      * the unprimed labels, read by increasing slot, are exactly
        z1 w1 z2 w2 ... zn wn, with every z on an even and every w on an
        odd slot;
      * the primed labels, read by increasing slot, are exactly
        w'n z'1 w'1 z'2 w'2 ... z'n, with every z' on an odd and every w'
        on an even slot (the cyclic order is then z'1 w'1 ... z'n w'n,
        with the w'n arc wrapping).
    """

    n: int
    labels: tuple[str, ...]

    def unprimed_slots(self) -> list[int]:
        return sorted(
            i for i, lab in enumerate(self.labels) if "'" not in lab
        )

    def primed_slots(self) -> list[int]:
        return sorted(i for i, lab in enumerate(self.labels) if "'" in lab)

    def validate(self) -> None:
        n = self.n
        if n < 1:
            raise ValueError("n must be positive")
        if len(self.labels) != 4 * n:
            raise ValueError(f"expected {4 * n} labels, got {len(self.labels)}")
        expected = set()
        for j in range(1, n + 1):
            expected.update({f"z{j}", f"w{j}", f"z'{j}", f"w'{j}"})
        if set(self.labels) != expected or len(set(self.labels)) != 4 * n:
            raise ValueError("labels must use each endpoint name exactly once")
        u = self.unprimed_slots()
        c = self.primed_slots()
        for i, slot in enumerate(u):
            want = f"z{i // 2 + 1}" if i % 2 == 0 else f"w{i // 2 + 1}"
            if self.labels[slot] != want or slot % 2 != i % 2:
                raise ValueError(
                    "unprimed labels must read z1 w1 z2 w2 ... on "
                    "alternating even/odd slots"
                )
        for i, slot in enumerate(c):
            if i == 0:
                want = f"w'{n}"
            elif i % 2 == 1:
                want = f"z'{(i + 1) // 2}"
            else:
                want = f"w'{i // 2}"
            if self.labels[slot] != want or slot % 2 != i % 2:
                raise ValueError(
                    "primed labels must read w'n z'1 w'1 z'2 ... on "
                    "alternating even/odd slots"
                )


def _arrangement_from_unprimed(n: int, unprimed) -> Arrangement | None:
    """Build the canonical arrangement with the given unprimed slot set.

    Returns None when either the set or its complement fails the
    alternating even/odd pattern (each, sorted, must start on an even slot).
    """
    u = sorted(int(s) for s in unprimed)
    if len(u) != 2 * n or len(set(u)) != 2 * n:
        return None
    if any(s < 0 or s >= 4 * n for s in u):
        return None
    c = sorted(set(range(4 * n)) - set(u))
    if any(slot % 2 != i % 2 for i, slot in enumerate(u)):
        return None
    if any(slot % 2 != i % 2 for i, slot in enumerate(c)):
        return None
    labels: list[str | None] = [None] * (4 * n)
    for j in range(n):
        labels[u[2 * j]] = f"z{j + 1}"
        labels[u[2 * j + 1]] = f"w{j + 1}"
    labels[c[0]] = f"w'{n}"
    for j in range(1, n + 1):
        labels[c[2 * j - 1]] = f"z'{j}"
    for j in range(1, n):
        labels[c[2 * j]] = f"w'{j}"
    return Arrangement(n, tuple(labels))


def enumerate_arrangements(n: int) -> list[Arrangement]:
    """All valid arrangements, via the odd-multiset encoding.

    Choosing with replacement n odd values b from {1, 3, ..., 2n+1},
    doubling each choice and setting slot_i = b_i + i - 1 yields exactly the
    unprimed slot sets whose sorted sequence and complement both alternate
    parity; there are C(2n, n) of them. The brute-force filter over all
    placements is the reference this must coincide with.
    """
    if n < 1:
        raise ValueError("n must be positive")
    out = []
    odds = range(1, 2 * n + 2, 2)
    for combo in itertools.combinations_with_replacement(odds, n):
        b = [v for v in combo for _ in range(2)]
        unprimed = [b[i] + i - 1 for i in range(2 * n)]
        arr = _arrangement_from_unprimed(n, unprimed)
        if arr is not None:
            out.append(arr)
    out.sort(key=lambda arr: arr.unprimed_slots())
    return out


def brute_force_arrangements(n: int) -> list[Arrangement]:
    """All valid arrangements by filtering every slot subset. Test oracle."""
    if n < 1:
        raise ValueError("n must be positive")
    out = []
    for unprimed in itertools.combinations(range(4 * n), 2 * n):
        arr = _arrangement_from_unprimed(n, unprimed)
        if arr is not None:
            out.append(arr)
    out.sort(key=lambda arr: arr.unprimed_slots())
    return out


def figure_arrangement(n: int) -> Arrangement:
    """The arrangement whose unprimed labels fill the first 2n slots."""
    arr = _arrangement_from_unprimed(n, range(2 * n))
    assert arr is not None
    return arr


def gen_polygon_counterexample(
    n: int, theta: float, arrangement: Arrangement
) -> tuple[IntervalUnion, IntervalUnion]:
    """Two distinct n-arc unions whose coefficients agree at 1..2n-1.

    The 4n arc endpoints sit on two interleaved regular 2n-gons, the second
    rotated by ``theta`` (radians, within (0, pi/n) so the vertices
    interleave). Each union takes one endpoint type per polygon, so each
    polygon's full vertex set splits between the two unions; the vanishing
    power sums of full polygon vertex sets then force coefficient agreement
    at every order not divisible by 2n.
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    if not (0.0 < theta < math.pi / n):
        raise ValueError(f"theta must lie strictly inside (0, pi/{n})")
    arrangement.validate()
    if arrangement.n != n:
        raise ValueError("arrangement size does not match n")
    shift = theta / TWO_PI

    def slot_pos(slot: int) -> float:
        base = (slot // 2) / (2.0 * n)
        return base + shift if slot % 2 else base

    u = arrangement.unprimed_slots()
    c = arrangement.primed_slots()
    arcs_first = [
        (slot_pos(u[2 * j]), slot_pos(u[2 * j + 1])) for j in range(n)
    ]
    arcs_second = [
        (slot_pos(c[2 * j + 1]), slot_pos(c[(2 * j + 2) % (2 * n)]))
        for j in range(n)
    ]
    return IntervalUnion(arcs_first), IntervalUnion(arcs_second)
