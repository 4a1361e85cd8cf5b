"""Random polynomials with cumulative Gaussian coefficients.

The polynomial is ``Q_n(x) = sum_j A_j x**j`` where the coefficients are the
running sums ``A_j = D_1 + ... + D_j`` of independent centred Gaussian
increments ``D_k ~ N(0, sigma_k**2)`` (so the coefficient sequence is a
Gaussian random walk; an optional ``D_0`` adds a random constant term).

Regrouping by increment gives ``Q_n(x) = sum_k D_k a_k(x)`` with the basis
partial power sums

    a_k(x) = sum_{j=k}^n x**j
    b_k(x) = sum_{j=k}^n j x**(j-1)        (basis of Q')
    d_k(x) = sum_{j=k}^n j (j-1) x**(j-2)  (basis of Q'')

which is what every covariance computation in this package rests on.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateModel

__all__ = ["PolynomialModel", "basis_eval", "scale_model"]


@dataclass(frozen=True)
class PolynomialModel:
    """Degree and increment standard deviations of the random polynomial.

    ``sigma[k-1]`` is the standard deviation of increment ``D_k`` for
    k = 1..n; ``sigma0`` (default 0) is the standard deviation of the
    optional increment ``D_0`` feeding the constant coefficient ``A_0``.
    """

    degree: int
    sigma: tuple = field(default=None)
    sigma0: float = 0.0

    def __post_init__(self):
        n = self.degree
        if not isinstance(n, (int, np.integer)) or isinstance(n, bool):
            raise DegenerateModel(f"degree must be an integer, got {n!r}")
        if n < 1:
            raise DegenerateModel(f"degree must be >= 1, got {n}")
        sigma = self.sigma
        if sigma is None:
            sigma = tuple(1.0 for _ in range(n))
        else:
            sigma = tuple(float(s) for s in sigma)
        if len(sigma) != n:
            raise DegenerateModel(
                f"sigma must have exactly {n} entries, got {len(sigma)}"
            )
        if any(not np.isfinite(s) or s < 0 for s in sigma):
            raise DegenerateModel("all sigma entries must be finite and >= 0")
        s0 = float(self.sigma0)
        if not np.isfinite(s0) or s0 < 0:
            raise DegenerateModel("sigma0 must be finite and >= 0")
        object.__setattr__(self, "degree", int(n))
        object.__setattr__(self, "sigma", sigma)
        object.__setattr__(self, "sigma0", s0)

    # ------------------------------------------------------------------

    @property
    def effective_rank(self) -> int:
        """Number of strictly positive increment deviations (Gaussian
        degrees of freedom feeding the polynomial)."""
        return sum(1 for s in self.sigma if s > 0) + (1 if self.sigma0 > 0 else 0)

    def require_rank_for_density(self) -> None:
        """The joint law of (Q, Q', Q'') needs at least three independent
        Gaussian sources; otherwise its covariance is singular everywhere."""
        if self.effective_rank < 3:
            raise DegenerateModel(
                "degenerate covariance: only "
                f"{self.effective_rank} independent Gaussian sources feed "
                "(Q, Q', Q''), so their joint law is singular at every point"
            )

    def variance_weights(self) -> np.ndarray:
        """Increment variances indexed k = 0..n (entry 0 is sigma0**2)."""
        out = np.empty(self.degree + 1)
        out[0] = self.sigma0 * self.sigma0
        out[1:] = np.square(self.sigma)
        return out


def scale_model(model: PolynomialModel, c: float) -> PolynomialModel:
    """Multiply every increment deviation by ``c > 0``.

    The paths of the scaled model are exactly ``c`` times the originals, so
    maxima locations are unchanged and levels scale linearly — the basis of
    the scale-covariance checks.
    """
    c = float(c)
    if not (c > 0) or not np.isfinite(c):
        raise ValueError(f"scale factor must be positive and finite, got {c!r}")
    return PolynomialModel(
        degree=model.degree,
        sigma=tuple(c * s for s in model.sigma),
        sigma0=c * model.sigma0,
    )


def basis_eval(n: int, x: float, k: int):
    """Backward-recurrence evaluation of (a_k, b_k, d_k) at a single point.

    The recurrence ``a_k = x**k + a_{k+1}`` (and likewise for b, d) makes
    x = 1 a perfectly regular point, unlike the closed geometric form.
    """
    if not (0 <= k <= n):
        raise ValueError(f"k must lie in 0..{n}, got {k}")
    x = float(x)
    a = b = d = 0.0
    for j in range(n, k - 1, -1):
        # x**j etc. computed incrementally would accumulate error for long
        # ranges; the direct powers keep each term correctly rounded.
        a += x**j
        b += j * x ** (j - 1) if j >= 1 else 0.0
        d += j * (j - 1) * x ** (j - 2) if j >= 2 else 0.0
    return (a, b, d)


def basis_arrays(n: int, x: float) -> np.ndarray:
    """All basis triples at once: array of shape (3, n+1) whose columns are
    (a_k, b_k, d_k) for k = 0..n, built by reversed cumulative sums (the
    vectorized form of the backward recurrence)."""
    j = np.arange(n + 1, dtype=float)
    powers = np.power(float(x), j)  # x**0 .. x**n
    ta = powers
    tb = np.zeros(n + 1)
    tb[1:] = j[1:] * powers[:-1]
    td = np.zeros(n + 1)
    if n >= 2:
        td[2:] = j[2:] * (j[2:] - 1.0) * powers[:-2]
    # reversed cumulative sums: entry k holds the sum over j = k..n
    rev = lambda v: np.cumsum(v[::-1])[::-1]
    return np.stack([rev(ta), rev(tb), rev(td)])
