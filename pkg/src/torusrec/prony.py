"""Recovery of 1-d point masses from a symmetric window of coefficients.

A measure with at most N masses is pinned down by its coefficients on
-N..N: a monic annihilating filter of minimal degree K vanishes on the
support exponentials, its roots give the positions, and a small Vandermonde
solve gives the amplitudes. Every result is verified against the forward
transform before it is returned.
"""

from __future__ import annotations

import numpy as np

from .errors import InconsistentDataError, OffCircleRootError
from .polynomials import roots as poly_roots
from .polynomials import solve_least_squares, solve_square
from .torus import CoeffTable1D, Measure1D, ToleranceConfig, forward_coeffs_1d


def _window(coeffs: CoeffTable1D, width: int) -> np.ndarray:
    try:
        return np.array(
            [coeffs[n] for n in range(-width, width + 1)], dtype=complex
        )
    except KeyError as exc:
        raise ValueError(
            f"coefficient table must cover every frequency in -{width}..{width}"
        ) from exc


def annihilator(
    coeffs: CoeffTable1D, capacity: int, tol: ToleranceConfig | None = None
) -> np.ndarray:
    """Monic annihilating filter of minimal degree for the data window.

    Returns ascending coefficients h_0..h_K with h_K = 1 such that
    sum_k h_k c(n - k) stays below residual_tol * max|c| on every row n for
    which the whole convolution window lies inside the data. The degree K is
    the smallest one admitting such a filter; degree zero (the constant 1)
    encodes the empty measure and is returned when the data is identically
    negligible.
    """
    tol = tol or ToleranceConfig()
    if capacity < 0:
        raise ValueError("capacity must be nonnegative")
    width = capacity
    c = _window(coeffs, width)
    scale = float(np.max(np.abs(c))) if len(c) else 0.0
    if scale <= tol.residual_tol:
        return np.array([1.0 + 0j])
    for d in range(1, capacity + 1):
        rows = list(range(d - width, width + 1))
        a = np.empty((len(rows), d), dtype=complex)
        rhs = np.empty(len(rows), dtype=complex)
        for r_i, n in enumerate(rows):
            for k in range(d):
                a[r_i, k] = c[n - k + width]
            rhs[r_i] = -c[n - d + width]
        h = solve_least_squares(a, rhs)
        residual = float(np.max(np.abs(a @ h - rhs)))
        if residual <= tol.residual_tol * scale:
            return np.concatenate([h, [1.0 + 0j]])
    raise InconsistentDataError(
        f"data inconsistent with <= {capacity} point masses "
        f"(no annihilating filter of degree <= {capacity})"
    )


def prony_recover(
    coeffs: CoeffTable1D, capacity: int, tol: ToleranceConfig | None = None
) -> Measure1D:
    """Recover a measure of at most ``capacity`` masses from -N..N data.

    Pipeline: minimal annihilating filter, root extraction with radial
    projection onto the unit circle, amplitude solve on rows 1..K with a
    least-squares fallback over the whole window, then a forward-residual
    check on all of -N..N.
    """
    tol = tol or ToleranceConfig()
    width = capacity
    c = _window(coeffs, width)
    scale = float(np.max(np.abs(c))) if len(c) else 0.0
    filt = annihilator(coeffs, capacity, tol)
    k = len(filt) - 1
    if k == 0:
        return Measure1D()

    rts = poly_roots(filt, tol.root_tol)
    radii = np.abs(rts)
    if float(np.max(np.abs(radii - 1.0))) > tol.root_tol:
        raise OffCircleRootError(
            "data not generated by unit-modulus exponentials "
            f"(root radius off by {float(np.max(np.abs(radii - 1.0))):.3e})"
        )
    rho = rts / radii
    theta = np.mod(np.angle(rho) / (2.0 * np.pi), 1.0)

    window_freqs = list(range(-width, width + 1))
    gate = tol.match_tol * max(1.0, scale)

    def residual_of(measure: Measure1D) -> float:
        fwd = forward_coeffs_1d(measure, window_freqs)
        return max(abs(fwd[n] - c[n + width]) for n in window_freqs)

    def build(amps) -> Measure1D:
        return Measure1D(
            (t, a) for t, a in zip(theta, amps) if abs(a) > tol.residual_tol
        )

    v = rho[None, :] ** (-np.arange(1, k + 1, dtype=float)[:, None])
    rhs = c[width + 1 : width + 1 + k]
    amps = solve_square(v, rhs)
    if amps is not None:
        mu = build(amps)
        if len(mu) <= capacity and residual_of(mu) <= gate:
            return mu

    v_full = rho[None, :] ** (-np.arange(-width, width + 1, dtype=float)[:, None])
    amps = solve_least_squares(v_full, c)
    mu = build(amps)
    if len(mu) <= capacity and residual_of(mu) <= gate:
        return mu
    raise InconsistentDataError(
        f"inconsistent data: forward residual {residual_of(mu):.3e} "
        f"exceeds {gate:.3e}"
    )
