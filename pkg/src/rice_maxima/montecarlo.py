"""Monte-Carlo estimation of the expected count by direct simulation.

Each trial draws the coefficient increments, scans the x-interval on a
degree-adapted sign grid for down-crossings (+ to -) of the derivative,
refines every crossing by bisection, and counts the maximum if the
polynomial value there lies at or below the level.

Grid.  Critical points cluster in O(1/n) neighbourhoods of |x| = 1, so a
uniform x-grid would either drown in points or miss oscillations.  Each
half-axis is covered in four zones (ppu = ``points_per_unit``):

    |x| in (0, 1/2]   : uniform x-grid, spacing 1/(2 ppu)
    |x| in (1/2, 1)   : x = n/(n+t), uniform t-grid with spacing 1/ppu
    |x| in (1, 2]     : x = 1 + t/n, the same t-grid
    |x| in (2, inf)   : uniform grid in y = 1/x, spacing 1/(2 ppu)

Grid points sit at cell midpoints (plus one anchor at y = 0 so the far
tail is closed at infinity); no point lands on 0 or +-1 exactly.  For
|x| > 1 the derivative sign is read off the coefficient-reversed
polynomial in y = 1/x, which keeps evaluations inside [-1, 1] and free of
overflow; polynomial values out there are compared to the level through
logarithms for the same reason.

Reproducibility.  Trial i draws from ``SeedSequence(seed, spawn_key=(i,))``,
so the estimate is a pure function of (model, interval, levels, trials,
seed, points_per_unit) — independent of batch size and worker count.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .model import PolynomialModel

__all__ = [
    "MCConfig",
    "MCEstimate",
    "count_maxima_below",
    "estimate_em",
    "estimate_many",
    "sample_coefficients",
]

_BISECT_ITERS = 50
_GRID_CHUNK = 1 << 13


@dataclass(frozen=True)
class MCConfig:
    """Trial budget and execution knobs for a Monte-Carlo run.

    ``trials`` and ``seed`` define the estimate; ``points_per_unit``
    controls the sign-grid resolution (per unit of the stretched t
    variable near |x| = 1); ``workers`` and ``batch_size`` only affect
    speed, never the result.
    """

    trials: int
    seed: int = 0
    points_per_unit: int = 512
    workers: int = 1
    batch_size: int = 256

    def __post_init__(self) -> None:
        if not isinstance(self.trials, int) or self.trials < 1:
            raise ValueError(f"trials must be a positive integer, got {self.trials!r}")
        if not isinstance(self.seed, int) or self.seed < 0:
            raise ValueError(f"seed must be a non-negative integer, got {self.seed!r}")
        if not isinstance(self.points_per_unit, int) or self.points_per_unit < 8:
            raise ValueError(
                f"points_per_unit must be an integer >= 8, got {self.points_per_unit!r}"
            )
        if not isinstance(self.workers, int) or self.workers < 1:
            raise ValueError(f"workers must be a positive integer, got {self.workers!r}")
        if not isinstance(self.batch_size, int) or self.batch_size < 1:
            raise ValueError(
                f"batch_size must be a positive integer, got {self.batch_size!r}"
            )


@dataclass(frozen=True)
class MCEstimate:
    """Sample mean, standard error and provenance of one estimate."""

    mean: float
    stderr: float
    trials: int
    seed: int


def sample_coefficients(
    model: PolynomialModel, trials: int, seed: int, *, first_trial: int = 0
) -> np.ndarray:
    """Coefficient matrix A of shape (trials, n+1), one row per trial.

    Row i is drawn from ``SeedSequence(seed, spawn_key=(first_trial+i,))``:
    increments D_k ~ N(0, sigma_k^2) accumulate into A_j = D_0 + ... + D_j
    (with D_0 = 0 unless the model carries sigma0 > 0).
    """
    n = model.degree
    sig = np.asarray(model.sigma, dtype=float)
    out = np.empty((trials, n + 1), dtype=float)
    for i in range(trials):
        rng = np.random.Generator(
            np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(first_trial + i,)))
        )
        draws = rng.standard_normal(n + 1)
        increments = np.empty(n + 1)
        increments[0] = draws[0] * model.sigma0
        increments[1:] = draws[1:] * sig
        np.cumsum(increments, out=out[i])
    return out


# ----------------------------------------------------------------------
# sign grid


class _Grid:
    """Ascending x-grid restricted to (lo, hi), with per-point evaluation
    mode: ``rev`` marks points where |x| > 1 (evaluate in y = 1/x)."""

    __slots__ = ("x", "y", "rev")

    def __init__(self, x: np.ndarray, rev: np.ndarray):
        self.x = x
        self.rev = rev
        with np.errstate(divide="ignore"):
            self.y = np.where(rev, 1.0 / x, 0.0)


def _half_axis(n: int, ppu: int) -> np.ndarray:
    """Ascending grid for (0, +inf): bulk, inner layer, outer layer, far."""
    h_t = 1.0 / ppu
    h_x = 0.5 / ppu
    t = (np.arange(n * ppu) + 0.5) * h_t  # (0, n)
    bulk = (np.arange(ppu) + 0.5) * h_x  # (0, 1/2)
    inner = n / (n + t[::-1])  # (1/2, 1) ascending
    outer = 1.0 + t / n  # (1, 2]
    far_y = (np.arange(ppu) + 0.5) * h_x  # y in (0, 1/2)
    far = 1.0 / far_y[::-1]  # [2, inf) ascending
    return np.concatenate([bulk, inner, outer, far, [math.inf]])


def _build_grid(model: PolynomialModel, lo: float, hi: float, ppu: int) -> _Grid:
    pos = _half_axis(model.degree, ppu)
    x = np.concatenate([-pos[::-1], [0.0], pos])
    keep = (x >= lo) & (x <= hi)
    x = x[keep]
    if x.size < 2:
        # interval narrower than the grid pitch: fall back to a uniform fill
        x = np.linspace(lo, hi, 16)
    rev = np.abs(x) > 1.0
    return _Grid(x, rev)


def _deriv_sign_matrix(coeff: np.ndarray, grid: _Grid, sl: slice) -> np.ndarray:
    """Signs of Q' for each trial (rows) at grid points ``sl`` (columns)."""
    n = coeff.shape[1] - 1
    j = np.arange(1, n + 1, dtype=float)
    dcoef = coeff[:, 1:] * j  # c_j = j A_j, j = 1..n
    x = grid.x[sl]
    rev = grid.rev[sl]
    out = np.empty((coeff.shape[0], x.size))
    direct = ~rev
    if direct.any():
        v = np.vander(x[direct], N=n, increasing=True)  # powers 0..n-1
        out[:, direct] = dcoef @ v.T
    if rev.any():
        y = grid.y[sl][rev]
        xr = x[rev]
        v = np.vander(y, N=n, increasing=True)
        # S(y) = sum_j j A_j y^{n-j};  Q'(x) = x^{n-1} S(1/x)
        s = dcoef[:, ::-1] @ v.T
        parity = np.where((xr < 0.0) & (n % 2 == 0), -1.0, 1.0)
        out[:, rev] = s * parity
    # infinities map to y = 0 exactly (the far-tail anchor); the sign there
    # is the leading-coefficient limit already handled by the reversed form
    return np.sign(out)


def _eval_deriv_at(dcoef_rows: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Q'(x) per row (sign-faithful; |x| > 1 evaluated in y = 1/x)."""
    n = dcoef_rows.shape[1]  # number of derivative coefficients, powers 0..n-1
    out = np.empty_like(x)
    direct = np.abs(x) <= 1.0
    if direct.any():
        xs = x[direct]
        rows = dcoef_rows[direct]
        acc = rows[:, -1].copy()
        for k in range(n - 2, -1, -1):
            acc = acc * xs + rows[:, k]
        out[direct] = acc
    if not direct.all():
        sel = ~direct
        y = 1.0 / x[sel]
        rows = dcoef_rows[sel]
        acc = rows[:, 0].copy()  # S(y) = sum c_k y^{(n-1)-k}
        for k in range(1, n):
            acc = acc * y + rows[:, k]
        # Q'(x) = x^{n-1} S(1/x): x^{n-1} < 0 exactly when x < 0 and n is even
        parity = np.where((y < 0.0) & (n % 2 == 0), -1.0, 1.0)
        out[sel] = acc * parity
    return out


def _value_below(
    coeff_rows: np.ndarray, x: np.ndarray, levels: np.ndarray
) -> np.ndarray:
    """Boolean matrix (crossings, levels): is Q(x) <= level?

    Direct evaluation for |x| <= 1.  Beyond, Q(x) = x^n R(1/x) with the
    coefficient-reversed R; the comparison runs on sign and log2 magnitude
    so astronomically large values never overflow.
    """
    m, width = coeff_rows.shape
    n = width - 1
    vals = np.empty(m)
    logmag = np.empty(m)
    sign = np.empty(m)
    direct = np.abs(x) <= 1.0
    if direct.any():
        xs = x[direct]
        rows = coeff_rows[direct]
        acc = rows[:, -1].copy()
        for k in range(n - 1, -1, -1):
            acc = acc * xs + rows[:, k]
        vals[direct] = acc
    sel = ~direct
    if sel.any():
        y = 1.0 / x[sel]
        rows = coeff_rows[sel]
        acc = rows[:, 0].copy()  # R(y) = sum_j A_j y^{n-j}, Horner from A_0
        for k in range(1, n + 1):
            acc = acc * y + rows[:, k]
        sgn_r = np.sign(acc)
        sgn_x_pow = np.where((x[sel] < 0.0) & (n % 2 == 1), -1.0, 1.0)
        sign[sel] = sgn_r * sgn_x_pow
        with np.errstate(divide="ignore"):
            logmag[sel] = n * np.log2(np.abs(x[sel])) + np.log2(np.abs(acc))
    below = np.empty((m, levels.size), dtype=bool)
    for col, u in enumerate(levels):
        if u == math.inf:
            below[:, col] = True
            continue
        if u == -math.inf:
            below[:, col] = False
            continue
        res = np.empty(m, dtype=bool)
        res[direct] = vals[direct] <= u
        if sel.any():
            s = sign[sel]
            lm = logmag[sel]
            if u > 0.0:
                res[sel] = (s < 0.0) | ((s > 0.0) & (lm <= math.log2(u))) | (s == 0.0)
            elif u < 0.0:
                res[sel] = (s < 0.0) & (lm >= math.log2(-u))
            else:
                res[sel] = s <= 0.0
        below[:, col] = res
    return below


def count_maxima_below(
    model: PolynomialModel,
    coeff: np.ndarray,
    lo: float,
    hi: float,
    levels,
    *,
    points_per_unit: int = 512,
) -> np.ndarray:
    """Counts of local maxima with value <= level, per trial and level.

    ``coeff`` is a (trials, n+1) coefficient matrix (see
    ``sample_coefficients``); returns an integer array of shape
    (trials, len(levels)).
    """
    levels = np.atleast_1d(np.asarray(levels, dtype=float))
    grid = _build_grid(model, lo, hi, points_per_unit)
    n = model.degree
    j = np.arange(1, n + 1, dtype=float)
    dcoef = coeff[:, 1:] * j
    trials = coeff.shape[0]
    counts = np.zeros((trials, levels.size), dtype=np.int64)

    prev_sign = None
    for start in range(0, grid.x.size, _GRID_CHUNK):
        sl = slice(start, min(start + _GRID_CHUNK, grid.x.size))
        s = _deriv_sign_matrix(coeff, grid, sl)
        if prev_sign is not None:
            s_ext = np.concatenate([prev_sign[:, None], s], axis=1)
            base = start - 1
        else:
            s_ext = s
            base = start
        prev_sign = s[:, -1]
        down = (s_ext[:, :-1] > 0.0) & (s_ext[:, 1:] <= 0.0)
        rows, cols = np.nonzero(down)
        if rows.size == 0:
            continue
        k = base + cols  # crossing bracketed by grid points k, k+1
        x_lo = grid.x[k]
        x_hi = grid.x[k + 1]
        # the far-tail anchor at infinity: pull the bracket end inside
        x_hi = np.where(np.isinf(x_hi), 2.0 * np.maximum(np.abs(x_lo), 1.0), x_hi)
        x_lo = np.where(np.isinf(x_lo), -2.0 * np.maximum(np.abs(x_hi), 1.0), x_lo)
        drows = dcoef[rows]
        for _ in range(_BISECT_ITERS):
            mid = 0.5 * (x_lo + x_hi)
            sm = _eval_deriv_at(drows, mid)
            pos = sm > 0.0
            x_lo = np.where(pos, mid, x_lo)
            x_hi = np.where(pos, x_hi, mid)
        root = 0.5 * (x_lo + x_hi)
        below = _value_below(coeff[rows], root, levels)
        np.add.at(counts, rows, below.astype(np.int64))
    return counts


# ----------------------------------------------------------------------
# estimation


def _run_batches(model, lo, hi, levels, config):
    nlev = len(levels)
    total = np.zeros(nlev, dtype=np.int64)
    total_sq = np.zeros(nlev, dtype=np.int64)

    def one(start: int, stop: int):
        coeff = sample_coefficients(
            model, stop - start, config.seed, first_trial=start
        )
        c = count_maxima_below(
            model, coeff, lo, hi, levels, points_per_unit=config.points_per_unit
        )
        return c.sum(axis=0), (c * c).sum(axis=0)

    spans = [
        (s, min(s + config.batch_size, config.trials))
        for s in range(0, config.trials, config.batch_size)
    ]
    if config.workers == 1:
        parts = [one(s, t) for s, t in spans]
    else:
        with ThreadPoolExecutor(max_workers=config.workers) as pool:
            parts = list(pool.map(lambda st: one(*st), spans))
    for c1, c2 in parts:
        total += c1
        total_sq += c2
    return total, total_sq


def estimate_many(
    model: PolynomialModel,
    lo: float,
    hi: float,
    levels,
    config: MCConfig,
) -> tuple[MCEstimate, ...]:
    """One Monte-Carlo run, counted against several levels at once.

    All levels share the same trials, so estimates are comparable across
    levels with no extra simulation cost.
    """
    levels = [float(u) for u in levels]
    if not levels:
        raise ValueError("levels must be non-empty")
    if not lo < hi:
        raise ValueError(f"need lo < hi, got ({lo!r}, {hi!r})")
    n = config.trials
    total, total_sq = _run_batches(model, lo, hi, levels, config)
    out = []
    for k in range(len(levels)):
        mean = float(total[k] / n)
        if n > 1:
            var = float(total_sq[k] - total[k] * total[k] / n) / (n - 1)
            stderr = math.sqrt(max(var, 0.0) / n)
        else:
            stderr = math.inf
        out.append(MCEstimate(mean=mean, stderr=stderr, trials=n, seed=config.seed))
    return tuple(out)


def estimate_em(
    model: PolynomialModel, lo: float, hi: float, u: float, config: MCConfig
) -> MCEstimate:
    """Monte-Carlo estimate of the expected count on (lo, hi) below ``u``."""
    return estimate_many(model, lo, hi, [u], config)[0]
