"""Covariance moments of (Q, Q', Q'') and the derived quadratic-form
parameters, evaluated without overflow or catastrophic cancellation for any
degree and any point.

Scaling.  For |x| <= 1 every basis sum is bounded by a small polynomial in
n, so the weighted basis vectors are formed directly.  For |x| > 1 the
dominant factor ``x**n`` is peeled off analytically: with y = 1/x,

    a_k(x) = x**n     * sum_{m=0}^{n-k} y**m
    b_k(x) = x**(n-1) * sum_{m=0}^{n-k} (n-m) y**m
    d_k(x) = x**(n-2) * sum_{m=0}^{n-k} (n-m)(n-m-1) y**m

so each moment is (bounded tilde sum) x (pure power of x held as a
ScaledValue), and every reported ratio is formed so the powers of x cancel
analytically rather than numerically.

Conditioning.  Near |x| = 1 at large degree the three weighted basis
vectors become nearly collinear (the covariance approaches rank one), and
determinant-style differences such as A2*B2 - C^2 lose all significant
digits.  All such differences are therefore computed by progressive
orthogonalization: project out the Q' direction, then the conditioned Q
direction, and read Gram determinants off as products of residual squared
norms — sums of squares, which cancel nothing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateCovariance
from .model import PolynomialModel, basis_arrays
from .scaled import ScaledValue

__all__ = ["MomentSet", "moments"]

# A residual direction shorter than this fraction of its parent vector is
# treated as numerically zero: the covariance is rank-deficient within
# working precision and the Rice density would divide noise by noise.
_RESIDUAL_RTOL = 1e-12


@dataclass(frozen=True)
class MomentSet:
    """Moments of (Q, Q', Q'') at a point, plus the quadratic-form ratios.

    ``a2, b2, d2`` are the variances of Q, Q', Q''; ``c, e, f`` the
    covariances (Q,Q'), (Q,Q''), (Q',Q'').  ``k, l, m`` are the coefficients
    of the exponent -L r^2 - 2 M r t - K t^2 of the joint density of
    (Q, Q'') at Q' = 0, with r the value coordinate (Q) and t the curvature
    coordinate (Q''), and ``s = k - m**2/(4l)``; ``s_conditional =
    k - m**2/l`` is the completed-square variant (the reciprocal of twice
    the variance of Q'' given Q' = 0).

    ``sigma_u`` is the conditional standard deviation of Q given Q' = 0;
    ``sigma_w_over_b`` is the conditional standard deviation of Q'' given
    Q' = 0 divided by the standard deviation of Q'; ``rho`` is the
    conditional correlation of (Q, Q'') given Q' = 0.  These three are the
    well-scaled quantities the density evaluation consumes.
    """

    x: float
    a2: ScaledValue
    b2: ScaledValue
    d2: ScaledValue
    c: ScaledValue
    e: ScaledValue
    f: ScaledValue
    det_sigma: ScaledValue
    k: float
    l: float
    m: float
    s: float
    s_conditional: float
    sigma_u: ScaledValue
    sigma_w_over_b: float
    rho: float
    # 1 - rho**2 computed from residual norms (not from rho), so it stays
    # accurate when the conditional correlation approaches +-1.
    one_minus_rho_sq: float


def moments(
    model: PolynomialModel, x: float, *, clamp_rho: bool = False
) -> MomentSet:
    """Covariance moments of (Q, Q', Q'') at ``x``.

    Raises DegenerateCovariance when the 3x3 covariance is singular within
    tolerance: fewer than three active increments, or a structurally
    degenerate point such as x = 0 for a model with no constant term.

    With ``clamp_rho=True`` a conditional correlation that is within
    float64 resolution of +-1 is clamped to the resolvable boundary instead
    of raising.  This happens far out in the tails (|x| very large), where
    the three basis directions genuinely collapse towards one another while
    every density-relevant quantity keeps a finite limit; the clamp lets the
    density be evaluated continuously there.  Rank-type degeneracies still
    raise regardless of the flag.
    """
    x = float(x)
    if not math.isfinite(x):
        raise ValueError(f"x must be finite, got {x!r}")
    if model.effective_rank < 3:
        raise DegenerateCovariance(
            x, f"effective rank {model.effective_rank} < 3"
        )

    root_w = np.sqrt(model.variance_weights())
    one = ScaledValue.from_float(1.0)
    if abs(x) <= 1.0:
        a, b, d = basis_arrays(model.degree, x)
        return _assemble(
            x, root_w * a, root_w * b, root_w * d, one, one, one, clamp_rho
        )

    n = model.degree
    y = 1.0 / x
    m_idx = np.arange(n + 1, dtype=float)
    ym = np.power(y, m_idx)
    sa = np.cumsum(ym)  # sum_{m<=i} y^m
    sb = np.cumsum(m_idx * ym)  # sum_{m<=i} m y^m
    sm2 = np.cumsum(m_idx * m_idx * ym)
    # increment index k = 0..n maps to truncation index i = n-k
    ta = sa[::-1]
    tsb = sb[::-1]
    tb = n * ta - tsb
    td = n * (n - 1.0) * ta - (2.0 * n - 1.0) * tsb + sm2[::-1]

    xs = ScaledValue.from_float(x)
    return _assemble(
        x,
        root_w * ta,
        root_w * tb,
        root_w * td,
        xs.powi(n),
        xs.powi(n - 1),
        xs.powi(n - 2),
        clamp_rho,
    )


def _assemble(
    x: float,
    u: np.ndarray,
    v: np.ndarray,
    z: np.ndarray,
    pa: ScaledValue,
    pb: ScaledValue,
    pd: ScaledValue,
    clamp_rho: bool = False,
) -> MomentSet:
    """Build the MomentSet from weighted basis vectors u, v, z (for Q, Q',
    Q'') and their analytic scale factors pa, pb, pd (powers of x)."""
    SA = float(np.dot(u, u))
    SB = float(np.dot(v, v))
    SD = float(np.dot(z, z))
    SC = float(np.dot(u, v))
    SE = float(np.dot(u, z))
    SF = float(np.dot(v, z))
    if SA <= 0.0 or SB <= 0.0 or SD <= 0.0:
        raise DegenerateCovariance(x, "a component of (Q, Q', Q'') is deterministic")

    # Project out the Q' direction, then the conditioned-Q direction.
    ru = u - (SC / SB) * v
    rz = z - (SF / SB) * v
    nu2 = float(np.dot(ru, ru))  # = (A2 B2 - C^2)   / B2, cancellation-free
    nz2 = float(np.dot(rz, rz))  # = (B2 D2 - F^2)   / B2
    cr = float(np.dot(ru, rz))  # = (B2 E  - C F)   / B2
    if nu2 <= (_RESIDUAL_RTOL**2) * SA or nz2 <= (_RESIDUAL_RTOL**2) * SD:
        raise DegenerateCovariance(x, "conditional variance below tolerance")
    rzz = rz - (cr / nu2) * ru
    rzz2 = float(np.dot(rzz, rzz))  # = nz2 (1 - rho^2)
    if rzz2 <= (_RESIDUAL_RTOL**2) * nz2:
        if not clamp_rho:
            raise DegenerateCovariance(
                x, "conditional correlation within tolerance of 1"
            )
        rzz2 = (_RESIDUAL_RTOL**2) * nz2

    sv = ScaledValue.from_float
    pa2 = pa * pa
    pd2 = pd * pd
    papd = pa * pd

    # det(Sigma) = x^(6n-6) * B2 * |u_perp|^2 * |z_perp_perp|^2
    det_sigma = (pa * pb * pd).powi(2) * sv(SB * nu2 * rzz2)

    k_sv = one_over(pd2 * sv(2.0 * rzz2))
    l_sv = sv(nz2) / (pa2 * sv(2.0 * nu2 * rzz2))
    m_sv = sv(-cr) / (papd * sv(2.0 * nu2 * rzz2))
    s_cond_sv = one_over(pd2 * sv(2.0 * nz2))
    m2_over_l_sv = sv(cr * cr) / (pd2 * sv(2.0 * nu2 * rzz2 * nz2))

    sigma_u = abs(pa) * sv(math.sqrt(nu2))
    sigma_w_over_b = (pd / pb).to_float().__abs__() * math.sqrt(nz2 / SB)
    rho = cr / math.sqrt(nu2 * nz2)
    if abs(rho) >= 1.0:  # only reachable through rounding of cr
        rho = math.copysign(1.0 - 1e-15, rho)

    return MomentSet(
        x=x,
        a2=pa2 * sv(SA),
        b2=(pb * pb) * sv(SB),
        d2=pd2 * sv(SD),
        c=(pa * pb) * sv(SC),
        e=papd * sv(SE),
        f=(pb * pd) * sv(SF),
        det_sigma=det_sigma,
        k=k_sv.to_float(),
        l=l_sv.to_float(),
        m=m_sv.to_float(),
        s=(s_cond_sv + sv(0.75) * m2_over_l_sv).to_float(),
        s_conditional=s_cond_sv.to_float(),
        sigma_u=sigma_u,
        sigma_w_over_b=sigma_w_over_b,
        rho=rho,
        one_minus_rho_sq=rzz2 / nz2,
    )


def one_over(value: ScaledValue) -> ScaledValue:
    return ScaledValue.from_float(1.0) / value
