"""Deterministic adaptive quadrature used by the exact counting engine.

Two entry points:

* ``integrate_adaptive`` — finite interval, embedded 7/15-point
  Gauss-Legendre pair with priority-driven bisection.  The panel with the
  largest error estimate is split until the summed estimate meets the
  tolerance or the panel budget runs out.
* ``integrate_to_infinity`` — semi-infinite interval, covered by blocks of
  geometrically growing width, each integrated adaptively.  Truncation stops
  once two consecutive blocks contribute below threshold; the remaining tail
  enters the result either through a caller-supplied analytic estimate or
  through a geometric bound folded into the error.

Results are bit-reproducible: panels are refined in a deterministic order
and the final value is accumulated left to right.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

__all__ = [
    "QuadResult",
    "integrate_adaptive",
    "integrate_to_infinity",
    "sum_results",
]

_NODES_LO, _WEIGHTS_LO = np.polynomial.legendre.leggauss(7)
_NODES_HI, _WEIGHTS_HI = np.polynomial.legendre.leggauss(15)


@dataclass(frozen=True)
class QuadResult:
    """Value and error estimate of a numerical integral."""

    value: float
    abs_error: float
    evaluations: int
    converged: bool

    def __add__(self, other: "QuadResult") -> "QuadResult":
        return QuadResult(
            self.value + other.value,
            self.abs_error + other.abs_error,
            self.evaluations + other.evaluations,
            self.converged and other.converged,
        )


_ZERO = QuadResult(0.0, 0.0, 0, True)


def _panel(f: Callable[[float], float], a: float, b: float) -> tuple[float, float]:
    mid = 0.5 * (a + b)
    half = 0.5 * (b - a)
    hi = 0.0
    for node, weight in zip(_NODES_HI, _WEIGHTS_HI):
        hi += weight * f(mid + half * node)
    lo = 0.0
    for node, weight in zip(_NODES_LO, _WEIGHTS_LO):
        lo += weight * f(mid + half * node)
    return half * hi, half * lo


def integrate_adaptive(
    f: Callable[[float], float],
    a: float,
    b: float,
    *,
    rel_tol: float,
    abs_tol: float = 0.0,
    max_panels: int = 800,
    initial_panels: int = 4,
) -> QuadResult:
    """Integrate ``f`` over the finite interval [a, b].

    Gauss-Legendre nodes are interior, so ``f`` is never evaluated at the
    endpoints; integrable endpoint behaviour must be handled by the caller
    (for example by substitution).
    """
    if not (math.isfinite(a) and math.isfinite(b)):
        raise ValueError("integrate_adaptive needs finite endpoints")
    if b <= a:
        return _ZERO
    edges = np.linspace(a, b, max(1, initial_panels) + 1)
    heap: list[tuple[float, int, float, float, float, float]] = []
    seq = 0
    evals = 0
    total = 0.0
    for left, right in zip(edges[:-1], edges[1:]):
        hi, lo = _panel(f, left, right)
        evals += 22
        total += hi
        heapq.heappush(heap, (-abs(hi - lo), seq, left, right, hi, lo))
        seq += 1
    panels = len(heap)
    while True:
        error = sum(-item[0] for item in heap)
        if error <= max(abs_tol, rel_tol * abs(total)):
            converged = True
            break
        if panels >= max_panels:
            converged = False
            break
        _, _, left, right, hi, _ = heapq.heappop(heap)
        mid = 0.5 * (left + right)
        hi1, lo1 = _panel(f, left, mid)
        hi2, lo2 = _panel(f, mid, right)
        evals += 44
        total += hi1 + hi2 - hi
        heapq.heappush(heap, (-abs(hi1 - lo1), seq, left, mid, hi1, lo1))
        seq += 1
        heapq.heappush(heap, (-abs(hi2 - lo2), seq, mid, right, hi2, lo2))
        seq += 1
        panels += 1
    final = sorted(heap, key=lambda item: item[2])
    value = 0.0
    error = 0.0
    for item in final:
        value += item[4]
        error += -item[0]
    return QuadResult(value, error, evals, converged)


def integrate_to_infinity(
    f: Callable[[float], float],
    t0: float,
    *,
    rel_tol: float,
    abs_tol: float = 0.0,
    first_width: float = 1.0,
    growth: float = 2.0,
    max_blocks: int = 80,
    max_panels_per_block: int = 400,
    tail: Callable[[float], float] | None = None,
    t_max: float = math.inf,
) -> QuadResult:
    """Integrate ``f`` over [t0, infinity).

    ``tail(T)`` should return an estimate of the integral from T to
    infinity; when provided it is added to the value (with a tenth of its
    magnitude charged to the error budget).  Without it, the truncated tail
    is bounded geometrically from the decay of the last blocks and charged
    entirely to the error.

    ``t_max`` caps how far the blocks may extend (for integrands that stop
    being evaluable beyond some point).  A cap-forced stop marks the result
    unconverged unless the integral had already gone quiet on its own.
    """
    if first_width <= 0.0 or growth <= 1.0:
        raise ValueError("first_width must be positive and growth > 1")
    value = 0.0
    error = 0.0
    evals = 0
    converged = True
    capped = False
    left = t0
    width = first_width
    history: list[float] = []
    quiet = 0
    for _ in range(max_blocks):
        if left >= t_max:
            capped = True
            break
        right = min(left + width, t_max)
        block = integrate_adaptive(
            f,
            left,
            right,
            rel_tol=rel_tol,
            abs_tol=max(abs_tol, rel_tol * abs(value)) * 0.25,
            max_panels=max_panels_per_block,
            initial_panels=2,
        )
        value += block.value
        error += block.abs_error
        evals += block.evaluations
        converged = converged and block.converged
        history.append(abs(block.value))
        threshold = max(abs_tol, rel_tol * abs(value)) * 0.5
        if abs(block.value) <= threshold:
            quiet += 1
            if quiet >= 2:
                left = right
                break
        else:
            quiet = 0
        left = right
        width *= growth
    else:
        converged = False
    if capped and quiet < 2 and tail is None:
        # The cap cut off mass the tolerance still cared about and no
        # analytic estimate covers it; the caller must see non-convergence.
        converged = False
    cutoff = left
    if tail is not None:
        tail_value = tail(cutoff)
        value += tail_value
        error += 0.1 * abs(tail_value)
    elif len(history) >= 2 and history[-2] > 0.0:
        ratio = history[-1] / history[-2]
        if ratio < 0.9:
            error += history[-1] * ratio / (1.0 - ratio)
        else:
            converged = False
    return QuadResult(value, error, evals, converged)


def sum_results(parts: Sequence[QuadResult]) -> QuadResult:
    """Left-to-right deterministic sum of partial integrals."""
    total = _ZERO
    for part in parts:
        total = total + part
    return total
