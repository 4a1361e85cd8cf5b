"""Independent oracle implementations the tests pin the engine against.

Everything here is deliberately built from first principles rather than
from the package's formulas: covariances by direct summation over the
monomial basis, the pointwise density by generic multivariate-normal
conditioning plus 2-D quadrature, and the degree-3 simulation check by
closed-form root finding.  Agreement with the engine is then evidence,
not tautology.
"""

from __future__ import annotations

import math

import numpy as np
from scipy import integrate

from rice_maxima import PolynomialModel


def brute_force_covariance(model: PolynomialModel, x: float) -> np.ndarray:
    """3x3 covariance of (Q, Q', Q'') at ``x`` by direct summation.

    Increment D_k (variance sigma_k^2) feeds every coefficient A_j with
    j >= k, so its contribution to (Q, Q', Q'') is the literal sum of
    monomial derivatives over j = k..n.
    """
    n = model.degree
    weights = [model.sigma0**2] + [s * s for s in model.sigma]
    cov = np.zeros((3, 3))
    for k in range(0, n + 1):
        if weights[k] == 0.0:
            continue
        a = sum(x**j for j in range(k, n + 1))
        b = sum(j * x ** (j - 1) for j in range(max(k, 1), n + 1))
        d = sum(j * (j - 1) * x ** (j - 2) for j in range(max(k, 2), n + 1))
        v = np.array([a, b, d])
        cov += weights[k] * np.outer(v, v)
    return cov


def oracle_density(
    model: PolynomialModel, x: float, u: float, *, sd_span: float = 12.0
) -> float:
    """Density of local maxima with value below ``u`` at ``x``, computed by
    2-D quadrature of the conditioned Gaussian triple.

    Conditions (Q'', Q) on Q' = 0, then integrates |w| times the bivariate
    normal density over {w < 0, q <= u}, truncating each variable at
    ``sd_span`` conditional standard deviations (the truncated mass is of
    order exp(-sd_span**2 / 2), far below the comparison tolerances).
    """
    if u == -math.inf:
        return 0.0
    cov = brute_force_covariance(model, x)
    # reorder to (Q', Q'', Q)
    s = cov[np.ix_([1, 2, 0], [1, 2, 0])]
    var_slope = s[0, 0]
    if var_slope <= 0.0:
        raise ValueError(f"degenerate slope variance at x={x!r}")
    s12 = s[1:, 0]
    c2 = s[1:, 1:] - np.outer(s12, s12) / var_slope
    det2 = c2[0, 0] * c2[1, 1] - c2[0, 1] ** 2
    if det2 <= 0.0:
        raise ValueError(f"degenerate conditional covariance at x={x!r}")
    inv2 = np.array([[c2[1, 1], -c2[0, 1]], [-c2[0, 1], c2[0, 0]]]) / det2
    norm2 = 1.0 / (2.0 * math.pi * math.sqrt(det2))

    def pdf(w: float, q: float) -> float:
        e = inv2[0, 0] * w * w + 2.0 * inv2[0, 1] * w * q + inv2[1, 1] * q * q
        return norm2 * math.exp(-0.5 * e)

    sd_w = math.sqrt(c2[0, 0])
    slope = c2[0, 1] / c2[0, 0]
    sd_q = math.sqrt(max(c2[1, 1] - c2[0, 1] ** 2 / c2[0, 0], 0.0))

    def q_lo(w: float) -> float:
        return slope * w - sd_span * sd_q

    def q_hi(w: float) -> float:
        hi = min(u, slope * w + sd_span * sd_q)
        lo = q_lo(w)
        return hi if hi > lo else lo

    value, _ = integrate.dblquad(
        lambda q, w: -w * pdf(w, q),
        -sd_span * sd_w,
        0.0,
        q_lo,
        q_hi,
        epsabs=1e-14,
        epsrel=1e-11,
    )
    slope_pdf_at_zero = 1.0 / math.sqrt(2.0 * math.pi * var_slope)
    return slope_pdf_at_zero * value


def sample_cubic_coefficients(trials: int, seed: int) -> np.ndarray:
    """(trials, 4) coefficient rows (A_0..A_3) of the unit degree-3 model,
    drawn with a plain generator (independent of the engine's per-trial
    seeding scheme)."""
    rng = np.random.default_rng(seed)
    increments = rng.standard_normal((trials, 3))
    coeffs = np.zeros((trials, 4))
    coeffs[:, 1:] = np.cumsum(increments, axis=1)
    return coeffs


def cubic_count_below(
    coeffs: np.ndarray, lo: float, hi: float, u: float
) -> np.ndarray:
    """Exact per-trial count of local maxima of degree-3 samples on
    (lo, hi) with value below ``u``, from the quadratic formula.

    Q'(x) = A1 + 2 A2 x + 3 A3 x^2; a maximum is a root with
    Q''(x) = 2 A2 + 6 A3 x < 0, counted when x is inside the interval
    and Q(x) <= u.
    """
    a0, a1, a2, a3 = (coeffs[:, j] for j in range(4))
    qa, qb, qc = 3.0 * a3, 2.0 * a2, a1
    counts = np.zeros(len(coeffs), dtype=np.int64)

    def accept(x: np.ndarray, mask: np.ndarray) -> None:
        with np.errstate(over="ignore", invalid="ignore"):
            curvature = qb + 2.0 * qa * x
            inside = (x > lo) & (x < hi)
            value = ((a3 * x + a2) * x + a1) * x + a0
            below = value <= u if u != math.inf else np.ones_like(x, dtype=bool)
            good = mask & inside & (curvature < 0.0) & below
        counts[good] += 1

    quadratic = qa != 0.0
    with np.errstate(over="ignore", invalid="ignore"):
        disc = qb * qb - 4.0 * qa * qc
        has_roots = quadratic & (disc > 0.0)
        sq = np.sqrt(np.where(has_roots, disc, 0.0))
        for sign in (-1.0, 1.0):
            accept(
                np.where(has_roots, (-qb + sign * sq) / (2.0 * qa), np.nan),
                has_roots,
            )
        # degenerate-leading case: Q' linear (probability zero under the
        # continuous law, handled for completeness)
        linear = ~quadratic & (qb != 0.0)
        accept(np.where(linear, -qc / np.where(linear, qb, 1.0), np.nan), linear)
    return counts


def cubic_em_mc(
    lo: float, hi: float, u: float, trials: int, seed: int
) -> tuple[float, float]:
    """Simulation estimate (mean, stderr) of the degree-3 expected count."""
    counts = cubic_count_below(sample_cubic_coefficients(trials, seed), lo, hi, u)
    mean = float(counts.mean())
    stderr = float(counts.std(ddof=1) / math.sqrt(trials))
    return mean, stderr
