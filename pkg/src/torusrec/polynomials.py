"""Small dense polynomial and linear-algebra kernels over the complex field.

Polynomials are coefficient arrays in ascending degree order. Degrees in
this package stay below ~25, so simultaneous root iteration and pivoted
elimination are used instead of general eigenvalue machinery.
"""

from __future__ import annotations

import numpy as np

POWER_SUMS_TO_ELEMENTARY = "power_sums_to_elementary"
ELEMENTARY_TO_POWER_SUMS = "elementary_to_power_sums"


class RootConvergenceError(ArithmeticError):
    """Root iteration missed the residual target; carries the best iterate."""

    def __init__(self, message: str, best, residual: float):
        super().__init__(message)
        self.best = np.asarray(best, dtype=complex)
        self.residual = float(residual)


def trim_trailing(coeffs, tol: float = 0.0) -> np.ndarray:
    """Drop trailing coefficients of magnitude <= tol (keeping degree >= 0)."""
    c = np.asarray(coeffs, dtype=complex)
    n = len(c)
    while n > 1 and abs(c[n - 1]) <= tol:
        n -= 1
    return np.array(c[:n])


def poly_eval(coeffs, z):
    """Evaluate an ascending-coefficient polynomial by Horner's rule."""
    c = np.asarray(coeffs, dtype=complex)
    z = np.asarray(z, dtype=complex)
    out = np.zeros_like(z)
    for k in range(len(c) - 1, -1, -1):
        out = out * z + c[k]
    return out


def poly_mul(a, b) -> np.ndarray:
    return np.convolve(
        np.asarray(a, dtype=complex), np.asarray(b, dtype=complex)
    )


def expand_roots(rts) -> np.ndarray:
    """Monic polynomial prod_j (z - r_j), ascending coefficients."""
    c = np.array([1.0 + 0j])
    for r in rts:
        c = np.convolve(c, np.array([-complex(r), 1.0 + 0j]))
    return c


def roots(coeffs, tol: float, max_iter: int = 200) -> np.ndarray:
    """All roots of a polynomial, with multiplicity, by Durand-Kerner iteration.

    Iterates start on a circle of radius slightly above one (the root sets in
    this package are unimodular) with a deterministic angular offset. Each
    returned root r satisfies |p(r)| <= tol * max|coeff|; otherwise
    RootConvergenceError carries the best iterate and its residual.
    """
    c = trim_trailing(coeffs)
    deg = len(c) - 1
    if deg < 1:
        raise ValueError("polynomial degree must be at least 1")
    scale = float(np.max(np.abs(c)))
    monic = c / c[-1]
    if deg == 1:
        return np.array([-monic[0]])
    k = deg
    angles = (np.arange(k) + 0.37) / k
    z = (1.0 + 0.5 / k) * np.exp(2j * np.pi * angles)
    for _ in range(max_iter):
        pv = poly_eval(monic, z)
        diffs = z[:, None] - z[None, :]
        np.fill_diagonal(diffs, 1.0)
        denom = np.prod(diffs, axis=1)
        denom[np.abs(denom) < 1e-300] = 1e-300
        step = pv / denom
        z = z - step
        if np.max(np.abs(step)) < 1e-14 * (1.0 + np.max(np.abs(z))):
            break
    residuals = np.abs(poly_eval(c, z))
    worst = float(np.max(residuals))
    if worst > tol * scale:
        raise RootConvergenceError(
            f"root residual {worst:.3e} exceeds {tol * scale:.3e} "
            f"after {max_iter} iterations",
            z,
            worst,
        )
    return z


def newton_girard(values, direction: str) -> list[complex]:
    """Convert between power sums and elementary symmetric functions.

    Input and output are indexed 1..len(values); sigma_0 = 1 is implicit.
    The two directions are mutually inverse via the recurrences
    k sigma_k = sum_{i=1..k} (-1)^(i-1) sigma_{k-i} s_i.
    """
    vals = [complex(v) for v in values]
    nu = len(vals)
    if direction == POWER_SUMS_TO_ELEMENTARY:
        sigma = [1.0 + 0j]
        for k in range(1, nu + 1):
            acc = 0j
            for i in range(1, k + 1):
                acc += (-1) ** (i - 1) * sigma[k - i] * vals[i - 1]
            sigma.append(acc / k)
        return sigma[1:]
    if direction == ELEMENTARY_TO_POWER_SUMS:
        sigma = [1.0 + 0j] + vals
        s: list[complex] = []
        for k in range(1, nu + 1):
            acc = k * sigma[k]
            for i in range(1, k):
                acc -= (-1) ** (i - 1) * sigma[k - i] * s[i - 1]
            s.append((-1) ** (k - 1) * acc)
        return s
    raise ValueError(f"unknown direction {direction!r}")


def reflect_sigma(sigma, sigma_m: complex, m: int) -> tuple[list[complex], float]:
    """Extend elementary symmetric values of a unimodular multiset.

    For a multiset of m unimodular numbers, conj(sigma_k) = sigma_{m-k} /
    sigma_m; given sigma_0..sigma_N and the top value sigma_m, the missing
    indices N+1..m-1 are filled by that identity. Requires every missing
    index m-k to have k <= N, i.e. m - N - 1 <= N, and sigma_m != 0.

    Returns the filled list (indices 0..m) and the largest inconsistency of
    the identity over index pairs already present in the input.
    """
    seq = [complex(v) for v in sigma]
    if not seq:
        raise ValueError("sigma must contain at least sigma_0")
    n = len(seq) - 1
    s_m = complex(sigma_m)
    if s_m == 0:
        raise ValueError("sigma_m must be nonzero for a unimodular multiset")
    if m < 0:
        raise ValueError("m must be nonnegative")
    if m - n - 1 > n:
        raise ValueError("not enough low-index values to fill the gap")
    if m <= n:
        out = list(seq[:m]) + [s_m]
    else:
        out = list(seq)
        for nu in range(n + 1, m):
            out.append(s_m * seq[m - nu].conjugate())
        out.append(s_m)
    defect = 0.0
    for k in range(0, min(n, m) + 1):
        if 0 <= m - k <= n:
            defect = max(defect, abs(s_m * seq[k].conjugate() - seq[m - k]))
    return out, defect


def numeric_rank(matrix, tol: float) -> int:
    """Rank of a complex matrix by fully pivoted elimination.

    An entry counts as zero once its magnitude drops to tol times the
    largest magnitude of the initial matrix.
    """
    a = np.array(matrix, dtype=complex)
    if a.ndim != 2 or a.size == 0:
        raise ValueError("nonempty 2-d matrix required")
    scale = float(np.max(np.abs(a)))
    if scale == 0.0:
        return 0
    m, n = a.shape
    rank = 0
    for step in range(min(m, n)):
        sub = np.abs(a[step:, step:])
        i, j = np.unravel_index(int(np.argmax(sub)), sub.shape)
        if sub[i, j] <= tol * scale:
            break
        i += step
        j += step
        a[[step, i], :] = a[[i, step], :]
        a[:, [step, j]] = a[:, [j, step]]
        pivot = a[step, step]
        a[step + 1 :, step:] -= np.outer(a[step + 1 :, step] / pivot, a[step, step:])
        rank += 1
    return rank


def solve_least_squares(a, b) -> np.ndarray:
    """Least-squares solve through an orthogonal (SVD) factorization.

    Normal equations are deliberately avoided: the systems here are
    Vandermonde-like and can be badly conditioned.
    """
    x, *_ = np.linalg.lstsq(
        np.asarray(a, dtype=complex), np.asarray(b, dtype=complex), rcond=None
    )
    return x


def solve_square(a, b):
    """Pivoted-elimination solve of a square system; None when singular."""
    try:
        x = np.linalg.solve(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))
    except np.linalg.LinAlgError:
        return None
    if not np.all(np.isfinite(x)):
        return None
    return x
