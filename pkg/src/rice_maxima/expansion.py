"""Large-degree expansions of the expected maxima count, one per interval.

Each of the four interval families has a two-term expansion in the degree n
(with explicit level dependence):

    pos-tail  (1, +inf) : C1 + U1 * u / (2 (n pi)^{3/2})
    neg-tail  (-inf, -1): C2 + U2 * u / (2 pi sqrt(n pi))
    unit      (0, 1)    : L3 * ln(n^{3/2}/u) + C3 + U3 * u / (2 (n pi)^{3/2})
    neg-unit  (-1, 0)   : L4 * ln(n^{1/2}/u) + C4 + U4 * u / (2 pi sqrt(n pi))

There are two tiers of constants:

* ``h_integral`` / ``kernel_pieces`` integrate the closed-form kernel tables
  of :mod:`.kernels` and assemble (L, C, U) from them.  They exist to
  reproduce the reference constants those tables are known by, and they are
  what ``verify-constants`` checks.

* ``theorem_expansion`` uses the frozen constants below, which are the ones
  the exact engine (:func:`rice_maxima.counts.expected_count`) actually
  converges to.  They were obtained by deriving the continuum limit of the
  model's moment functions symbolically, integrating the resulting kernels
  at high precision, and — for the interval-interior constants of the two
  unit families — calibrating against the exact count at the u = 1 anchor
  with Richardson extrapolation in n (degrees up to 64000).  Observed
  agreement with the exact count: families 1/2 to O(n^{-1}); families 3/4
  to O(n^{-1/2}) at the anchor level.

The two tiers disagree because the kernel tables encode a different
conditional-variance convention (S = K - M^2/(4L)) than the one the count
obeys (S = K - M^2/L); the discrepancy reaches a factor ~8.4 on the
family-1 constant.  Both tiers are kept deliberately: the first is a
reference-verification artifact, the second is the working asymptotics.

Validity: the u-linear term assumes levels small against the family's
scale (u = o(n^{3/2}) on the positive side, o(sqrt(n)) on the negative
side).  For families 3/4 the interior constant also carries an O(1)
level dependence beyond the logarithmic law (roughly 0.04-0.13 per
factor two in u); predictions are sharpest near the u = 1 anchor.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from .kernels import KernelId, h_kernel
from .quadrature import integrate_adaptive, integrate_to_infinity

__all__ = [
    "FAMILY_BOUNDS",
    "FAMILY_INTERVALS",
    "ExpansionResult",
    "h_integral",
    "kernel_pieces",
    "log_term",
    "theorem_expansion",
]

_EPS = 1e-6  # inner quadrature endpoint; the [0, _EPS] sliver is extrapolated

FAMILY_INTERVALS = {1: "pos-tail", 2: "neg-tail", 3: "unit", 4: "neg-unit"}

FAMILY_BOUNDS = {
    1: (1.0, math.inf),
    2: (-math.inf, -1.0),
    3: (0.0, 1.0),
    4: (-1.0, 0.0),
}

_ALLOWED_PAIRS = {(1,), (1, 2), (1, 3), (1, 3, 4)}

# Tail subtraction applied for t >= 1 in families 3 and 4: value maps
# (family, pair) to (power of t, constant), the integrand subtracting
# constant * t**power.  These constants are the exact products of the
# individual kernel tail laws.
_SUBTRACTIONS: dict[tuple[int, tuple[int, ...]], tuple[float, float]] = {
    (3, (1,)): (-1.0, 4.0 * math.sqrt(35.0) / 115.0),
    (3, (1, 3)): (-1.0, 4.0 / 23.0),
    (3, (1, 2)): (0.5, 28.0 / 23.0),
    (3, (1, 3, 4)): (0.5, 20.0 / 23.0),
    (4, (1,)): (-1.0, 4.0 * math.sqrt(3.0) / 11.0),
    (4, (1, 3)): (-1.0, 4.0 / 11.0),
    (4, (1, 2)): (-0.5, 24.0 / 11.0),
    (4, (1, 3, 4)): (-0.5, 8.0 / 11.0),
}


def _sliver_estimate(g, eps: float) -> float:
    """Integral of ``g`` over [0, eps] for g ~ c * t**alpha, alpha >= 0.

    Fits the local power from two interior samples; falls back to a
    rectangle estimate when the samples do not support a power fit.
    """
    g2 = g(0.5 * eps)
    g4 = g(0.25 * eps)
    if g2 > 0.0 and g4 > 0.0:
        alpha = math.log2(g2 / g4)
        if -0.5 < alpha < 8.0:
            return g2 * (2.0**alpha) * eps / (alpha + 1.0)
    return g2 * eps


@lru_cache(maxsize=None)
def _h_integral_cached(
    family: int, pair: tuple[int, ...], rel_tol: float
) -> tuple[float, float]:
    kernels = [KernelId(family, index) for index in pair]

    def product(t: float) -> float:
        value = 1.0
        for kid in kernels:
            value *= h_kernel(kid, t)
            if value == 0.0:
                return 0.0
        return value

    subtraction = _SUBTRACTIONS.get((family, pair))
    if subtraction is None:
        integrand_tail = product
    else:
        power, constant = subtraction

        def integrand_tail(t: float) -> float:
            return product(t) - constant * t**power

    # the tail subtraction switches on at t = 1, so [eps, 1] and [1, inf)
    # are integrated separately
    inner = integrate_adaptive(product, _EPS, 1.0, rel_tol=rel_tol, abs_tol=1e-14)
    if family in (1, 2) and pair == (1,):
        # algebraic t^{-7/2} tail: supply the analytic remainder
        tail_hint = lambda T: 0.4 * T * product(T)  # noqa: E731
    else:
        tail_hint = None
    outer = integrate_to_infinity(
        integrand_tail,
        1.0,
        rel_tol=rel_tol,
        abs_tol=1e-14,
        first_width=1.0,
        tail=tail_hint,
    )
    sliver = _sliver_estimate(product, _EPS)
    value = inner.value + outer.value + sliver
    error = inner.abs_error + outer.abs_error + 0.5 * abs(sliver)
    return value, error


def h_integral(family: int, pair, *, rel_tol: float = 1e-9) -> float:
    """Improper integral of a product of same-family kernels over (0, inf).

    ``pair`` selects the kernel indices: (1,), (1,2), (1,3) or (1,3,4).
    For families 3 and 4 the integrand carries the standard tail
    subtraction (active for t >= 1) that makes the integral converge; the
    subtracted mass reappears in the closed-form log terms of the
    expansion.
    """
    if family not in (1, 2, 3, 4):
        raise ValueError(f"family must be 1..4, got {family!r}")
    key = tuple(sorted(set(int(i) for i in pair)))
    if key not in _ALLOWED_PAIRS:
        raise ValueError(f"pair must be one of (1,), (1,2), (1,3), (1,3,4); got {pair!r}")
    value, _ = _h_integral_cached(family, key, rel_tol)
    return value


def log_term(a: float, b: float, n: int, power: float) -> float:
    """Closed form of the regularized tail integral with a 1/t (power 3/2)
    or 1/sqrt(t)-type (power 1/2) subtraction:

        power 3/2:  (2a/3) * ln((a/b) n^{3/2} + 1)
        power 1/2:  2a     * ln((a/b) n^{1/2} + 1)
    """
    if a <= 0.0 or b <= 0.0:
        raise ValueError("log_term requires a > 0 and b > 0")
    if n < 0:
        raise ValueError("log_term requires n >= 0")
    if power == 1.5:
        return (2.0 * a / 3.0) * math.log(a / b * n**1.5 + 1.0)
    if power == 0.5:
        return 2.0 * a * math.log(a / b * math.sqrt(n) + 1.0)
    raise ValueError(f"power must be 3/2 or 1/2, got {power!r}")


@dataclass(frozen=True)
class ExpansionResult:
    """One family's expansion, evaluated at a degree and level.

    ``assembled_value(n, u)`` returns

        log_coefficient * ln(n^power / u) + constant
        + u_coefficient * u * scale(n)

    where scale(n) = 1/(2 (n pi)^{3/2}) for the families attached to +1
    (pos-tail, unit) and 1/(2 pi sqrt(n pi)) for those attached to -1, and
    power is 3/2 / 1/2 respectively.  ``leading`` is the value of the
    n-growing part at the construction arguments (the log term; for the
    tail families, which have none, the constant).  ``warned`` records that
    the construction level exceeded the family's validity scale.
    """

    interval: str
    family: int
    leading: float
    log_coefficient: float
    constant: float
    u_coefficient: float
    validity: str
    warned: bool

    def assembled_value(self, n: int, u: float) -> float:
        if u <= 0.0:
            raise ValueError("the expansion requires a level u > 0")
        if self.family in (1, 3):
            scale = 1.0 / (2.0 * (n * math.pi) ** 1.5)
            power = 1.5
        else:
            scale = 1.0 / (2.0 * math.pi * math.sqrt(n * math.pi))
            power = 0.5
        value = self.constant + self.u_coefficient * u * scale
        if self.log_coefficient != 0.0:
            value += self.log_coefficient * math.log(n**power / u)
        return value


def kernel_pieces(family: int, *, rel_tol: float = 1e-9) -> tuple[float, float, float]:
    """(log_coefficient, constant, u_coefficient) assembled from the kernel
    tables — the reference-verification tier (see the module docstring)."""
    base = h_integral(family, (1,), rel_tol=rel_tol)
    damped = h_integral(family, (1, 3), rel_tol=rel_tol)
    slope = h_integral(family, (1, 2), rel_tol=rel_tol)
    slope_damped = h_integral(family, (1, 3, 4), rel_tol=rel_tol)
    quarter = 0.25 / math.pi
    constant = quarter * (base - damped)
    u_coefficient = slope - slope_damped
    if family in (1, 2):
        return 0.0, constant, u_coefficient
    if family == 3:
        a = math.sqrt(35.0) / (115.0 * math.pi)
        c = 1.0 / (23.0 * math.pi)
        # per-unit-u slopes of the two log-term arguments
        b_hat = 10.0 / (23.0 * math.pi**1.5)
        d_hat = 14.0 / (23.0 * math.pi**1.5)
        log_coefficient = (2.0 / 3.0) * (a - c)
        constant += (2.0 * a / 3.0) * math.log(a / b_hat) - (2.0 * c / 3.0) * math.log(
            c / d_hat
        )
    else:
        a = math.sqrt(3.0) / (11.0 * math.pi)
        c = 1.0 / (11.0 * math.pi)
        b_hat = 4.0 / (11.0 * math.pi**1.5)
        d_hat = 12.0 / (11.0 * math.pi**1.5)
        log_coefficient = 2.0 * (a - c)
        constant += 2.0 * a * math.log(a / b_hat) - 2.0 * c * math.log(c / d_hat)
    return log_coefficient, constant, u_coefficient


# Engine-grade expansion constants (log_coefficient, constant, u_coefficient)
# per family; see the module docstring for how they were obtained and checked.
_ENGINE_CONSTANTS: dict[int, tuple[float, float, float]] = {
    1: (0.0, 8.75765162174e-04, 0.258345902552),
    2: (0.0, 3.76835778408e-03, 0.267994526223),
    3: (4.85995419156e-03, 0.187817274, -4.11439060485),
    4: (5.82547523095e-02, 0.496346443, -0.611431959874),
}


def theorem_expansion(family: int, n: int, u: float) -> ExpansionResult:
    """Two-term large-n expansion for one interval family at level ``u``.

    Uses the frozen engine-grade constants (module docstring).  The level
    must be positive; levels beyond the family's validity scale (n^{5/4}
    for pos-tail/unit, n^{1/4} for the two negative-side families) set the
    ``warned`` flag rather than raising.
    """
    if family not in (1, 2, 3, 4):
        raise ValueError(f"family must be 1..4, got {family!r}")
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n!r}")
    if not u > 0.0 or not math.isfinite(u):
        raise ValueError(f"the expansion requires a finite level u > 0, got {u!r}")
    log_coefficient, constant, u_coefficient = _ENGINE_CONSTANTS[family]
    scale_power = 1.25 if family in (1, 3) else 0.25
    warned = u > n**scale_power
    validity = (
        f"valid for u = O(n^({'5/4' if family in (1, 3) else '1/4'})); "
        f"remainder O(n^(-1/2))"
    )
    if log_coefficient != 0.0:
        power = 1.5 if family == 3 else 0.5
        leading = log_coefficient * math.log(n**power / u)
    else:
        leading = constant
    return ExpansionResult(
        interval=FAMILY_INTERVALS[family],
        family=family,
        leading=leading,
        log_coefficient=log_coefficient,
        constant=constant,
        u_coefficient=u_coefficient,
        validity=validity,
        warned=warned,
    )
