"""Boundary-layer kernels of the four interval families.

As the degree n grows, the maxima density concentrates near |x| = 1 and the
stretched coordinates

    family 1:  x =  1 + t/n      (interval (1, +inf))
    family 2:  x = -1 - t/n      (interval (-inf, -1))
    family 3:  x =  n / (n + t)  (interval (0, 1))
    family 4:  x = -n / (n + t)  (interval (-1, 0))

turn the density into n-free limit kernels H_{f,i}(t), four per family:

    index 1 — amplitude of the always-counted term,
    index 2 — slope of the level correction in the always-counted term,
    index 3 — amplitude ratio of the damped correction term,
    index 4 — slope of the level correction in the damped term.

Every kernel is built from "brackets": finite combinations

    sum_d  P_d(t) * exp(-d * t)

with exact rational polynomial coefficients, tabulated below.  All brackets
vanish at t = 0 (their constant terms cancel across rows, checked at import
time), so naive evaluation loses precision for small t; each bracket
therefore switches to an exact Taylor series (coefficients derived from the
rational tables) below ``t = 1/2``.  For large t the decaying rows underflow
harmlessly and the d = 0 row alone reproduces the tail law, so no exponent
shifting is ever needed.

``h_kernel`` evaluates a kernel in float64; ``bracket_value_mp`` exposes an
arbitrary-precision evaluation of any bracket for cross-checking.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .errors import NonFiniteResult

__all__ = [
    "KernelId",
    "h_kernel",
    "bracket_names",
    "bracket_value",
    "bracket_value_mp",
    "TAIL_LAWS",
]

# --------------------------------------------------------------------------
# Exact bracket tables: name -> {decay d: coefficients of P_d, ascending in
# t}.  A plain integer is exact; a pair (p, q) means p/q.
# --------------------------------------------------------------------------

_TABLES: dict[str, dict[int, tuple]] = {
    # ---- family 1 (x = 1 + t/n) ------------------------------------------
    # numerator polynomial of H11
    "p1": {
        0: (-140, 24),
        1: (272, 224, 160),
        2: (20, 16, -80, -704, 176, -64),
        3: (-288, -768, -1152, 256, 192),
        4: (124, 472, 1040, 736, 208, 32),
        5: (16, 32, 32),
        6: (-4,),
    },
    # radicand of H11; its negation is the first radicand factor of H13
    "p2": {
        0: (-253, 1012, -1400, 736, -172, 16),
        1: (544, -1632, 1056, 512, -192),
        2: (-294, 588, 324, -600, -216, -80),
        3: (-32, 32, -160),
        4: (35,),
    },
    # denominator polynomial of H11
    "p3": {
        0: ((12155, 192), (-6281, 24), (19097, 48), (-787, 3), (1385, 16), (-29, 2), 1),
        1: ((-2141, 8), (6749, 8), (-2018, 3), (-1243, 6), (527, 2), (-401, 6), 6),
        2: (
            (20383, 48),
            (-7297, 8),
            (-4023, 16),
            (29851, 24),
            (-3907, 24),
            (397, 4),
            (-547, 6),
            (68, 3),
            (-8, 3),
        ),
        3: (
            (-6887, 24),
            (7153, 24),
            (12731, 12),
            (-5627, 6),
            (-2335, 6),
            (-1697, 6),
            (-173, 3),
            26,
        ),
        4: (
            (1239, 32),
            (507, 8),
            (-32777, 48),
            (1043, 12),
            (5177, 16),
            (2161, 12),
            (1949, 12),
            43,
            (31, 3),
        ),
        5: ((1043, 24), (-125, 8), 162, (364, 3), (-232, 3), -14, (-34, 3)),
        6: ((-733, 48), (-485, 24), (-523, 48), (-1073, 24), (-73, 12), (-5, 3)),
        7: ((-7, 8), (37, 8), (-35, 12)),
        8: ((115, 192),),
    },
    # radicand numerator of H12
    "ba": {
        2: ((253, 80), (-253, 20), (35, 2), (-46, 5), (43, 20), (-1, 5)),
        3: ((-34, 5), (102, 5), (-66, 5), (-32, 5), (12, 5)),
        4: ((147, 40), (-147, 20), (-81, 20), (15, 2), (27, 10), 1),
        5: ((2, 5), (-2, 5), 2),
        6: ((-7, 16),),
    },
    # radicand denominator of H12, also the second radicand factor of H14
    "bb": {
        0: (-35, 6),
        1: (68, 56, 40),
        2: (5, 4, -20, -176, 44, -16),
        3: (-72, -192, -288, 64, 48),
        4: (31, 118, 260, 184, 52, 8),
        5: (4, 8, 8),
        6: (-1,),
    },
    # numerator of H13 (and, shifted by e^{-t}, of H14)
    "n13": {
        0: (-55, 132, -58, 8),
        1: (124, -156, -120, 24),
        2: (-78, -12, 150, 52, 24),
        3: (4, 36, -8),
        4: (5,),
    },
    # second radicand factor of H13
    "z": {
        0: (15, -4),
        1: (-32, -24),
        2: (18, 36, 12, 8),
        3: (0, -8),
        4: (-1,),
    },
    # ---- family 2 (x = -1 - t/n) -----------------------------------------
    "n21": {
        0: ((1, 8), (3, 4)),
        2: ((-3, 8), (-3, 2), (-9, 2), -2, (3, 2), -2),
        4: ((3, 8), (3, 4), (9, 2), 7, (9, 2), 1),
        6: ((-1, 8),),
    },
    # shared radicand of H21 and H22
    "r2": {
        0: (3, -12, 24, 32, -44, 16),
        2: (-6, 12, -12, -56, -56, -16),
        4: (3,),
    },
    "d21": {
        0: ((11, 192), (1, 24), (-23, 48), (13, 6), (25, 16), (-5, 2), 1),
        2: (
            (-11, 48),
            (-1, 8),
            (-3, 16),
            (-49, 24),
            (-211, 24),
            (-51, 4),
            (13, 6),
            (8, 3),
            (-8, 3),
        ),
        4: (
            (11, 32),
            (1, 8),
            (29, 16),
            (7, 4),
            (259, 48),
            (221, 12),
            (257, 12),
            (35, 3),
            (7, 3),
        ),
        6: ((-11, 48), (-1, 24), (-55, 48), (-15, 8), (-5, 4), (-1, 3)),
        8: ((11, 192),),
    },
    # denominator of H22 (also of H24)
    "d22": {
        0: (1, 6),
        2: (-3, -12, -36, -16, 12, -16),
        4: (3, 6, 36, 56, 36, 8),
        6: (-1,),
    },
    # numerator of H23 (also of H24)
    "b23": {
        0: (1, -4, -10, 8),
        2: (-2, 4, 14, 20, 8),
        4: (1,),
    },
    "c23": {
        0: ((1, 4), 1),
        2: ((-1, 2), -1, -3, -2),
        4: ((1, 4),),
    },
    "e23": {
        0: ((3, 16), (-3, 4), (3, 2), 2, (-11, 4), 1),
        2: ((-3, 8), (3, 4), (-3, 4), (-7, 2), (-7, 2), -1),
        4: ((3, 16),),
    },
    # second radicand factor of H24
    "z4": {
        0: (1, 4),
        2: (-2, -4, -12, -8),
        4: (1,),
    },
    # ---- family 3 (x = n/(n+t)) ------------------------------------------
    "n31": {
        0: ((-1, 16),),
        1: ((1, 4), (-1, 2), (1, 2)),
        2: ((31, 16), (-59, 8), (65, 4), (-23, 2), (13, 4), (-1, 2)),
        3: ((-9, 2), 12, -18, -4, 3),
        4: ((5, 16), (-1, 4), (-5, 4), 11, (11, 4), 1),
        5: ((17, 4), (-7, 2), (5, 2)),
        6: ((-35, 16), (-3, 8)),
    },
    "r3": {
        0: (35,),
        1: (-32, -32, -160),
        2: (-294, -588, 324, 600, -216, 80),
        3: (544, 1632, 1056, -512, -192),
        4: (-253, -1012, -1400, -736, -172, -16),
    },
    "d31": {
        0: ((115, 1984),),
        1: ((-21, 248), (-111, 248), (-35, 124)),
        2: ((-733, 496), (485, 248), (-523, 496), (1073, 248), (-73, 124), (5, 31)),
        3: (
            (1043, 248),
            (375, 248),
            (486, 31),
            (-364, 31),
            (-232, 31),
            (42, 31),
            (-34, 31),
        ),
        4: (
            (3717, 992),
            (-1521, 248),
            (-32777, 496),
            (-1043, 124),
            (501, 16),
            (-2161, 124),
            (1949, 124),
            (-129, 31),
            1,
        ),
        5: (
            (-6887, 248),
            (-7153, 248),
            (12731, 124),
            (5627, 62),
            (-2335, 62),
            (1697, 62),
            (-173, 31),
            (-78, 31),
        ),
        6: (
            (20383, 496),
            (21891, 248),
            (-12069, 496),
            (-29851, 248),
            (-3907, 248),
            (-1191, 124),
            (-547, 62),
            (-68, 31),
            (-8, 31),
        ),
        7: (
            (-6423, 248),
            (-20247, 248),
            (-2018, 31),
            (1243, 62),
            (51, 2),
            (401, 62),
            (18, 31),
        ),
        8: (
            (12155, 1984),
            (6281, 248),
            (19097, 496),
            (787, 31),
            (4155, 496),
            (87, 62),
            (3, 31),
        ),
    },
    # radicand numerator of H32, also a radicand factor of H33
    "ba3": {
        0: ((-7, 32),),
        1: ((1, 5), (1, 5), 1),
        2: ((147, 80), (147, 40), (-81, 40), (-15, 4), (27, 20), (-1, 2)),
        3: ((-17, 5), (-51, 5), (-33, 5), (16, 5), (6, 5)),
        4: ((253, 160), (253, 40), (35, 4), (23, 5), (43, 40), (1, 10)),
    },
    # radicand denominator of H32
    "bb3": {
        0: (-1,),
        1: (4, -8, 8),
        2: (31, -118, 260, -184, 52, -8),
        3: (-72, 192, -288, -64, 48),
        4: (5, -4, -20, 176, 44, 16),
        5: (68, -56, 40),
        6: (-35, -6),
    },
    # numerator of H33
    "ba33": {
        0: ((-5, 8),),
        1: ((-1, 2), (9, 2), 1),
        2: ((39, 4), (-3, 2), (-75, 4), (13, 2), -3),
        3: ((-31, 2), (-39, 2), 15, 3),
        4: ((55, 8), (33, 2), (29, 4), 1),
    },
    # radicand factor of H33; its negation is a radicand factor of H34
    "c33": {
        0: ((-1, 8),),
        1: (0, 1),
        2: ((9, 4), (-9, 2), (3, 2), -1),
        3: (-4, 3),
        4: ((15, 8), (1, 2)),
    },
    "n34": {
        0: (5,),
        1: (4, -36, -8),
        2: (-78, 12, 150, -52, 24),
        3: (124, 156, -120, -24),
        4: (-55, -132, -58, -8),
    },
    # ---- family 4 (x = -n/(n+t)) -----------------------------------------
    "n41": {
        0: ((1, 8),),
        2: ((3, 8), (3, 4), (-9, 2), 7, (-9, 2), 1),
        4: ((-9, 8), (-9, 2), (3, 2), 12, (-31, 2), 2),
        6: ((5, 8), (15, 4), 6, -8, -11, -4),
    },
    # shared radicand of H41/H42/H43 (negated inside H42)
    "r4": {
        0: (3,),
        2: (-6, -12, -12, 56, -56, 16),
        4: (3, 12, 24, -32, -44, -16),
    },
    "d41": {
        0: ((11, 512),),
        2: ((1, 128), (1, 64), (-55, 128), (45, 64), (-15, 32), (1, 8)),
        4: (
            (-39, 256),
            (-39, 64),
            (15, 128),
            (47, 32),
            (35, 128),
            (-205, 32),
            (257, 32),
            (-35, 8),
            (7, 8),
        ),
        6: (
            (25, 128),
            (75, 64),
            (279, 128),
            (-79, 64),
            (-459, 64),
            (73, 32),
            (165, 16),
            -9,
            1,
        ),
        8: (
            (-37, 512),
            (-37, 64),
            (-239, 128),
            (-27, 16),
            (507, 128),
            (147, 16),
            (1, 8),
            (-9, 2),
            -2,
        ),
    },
    # denominator of H42; its negation is the denominator of H44
    "d42": {
        0: (-1,),
        2: (-3, -6, 36, -56, 36, -8),
        4: (9, 36, -12, -96, 124, -16),
        6: (-5, -30, -48, 64, 88, 32),
    },
    "b43": {
        0: ((1, 8),),
        2: ((-1, 4), (-1, 2), (7, 4), (-5, 2), 1),
        4: ((1, 8), (1, 2), (-5, 4), -1),
    },
    # second radicand factor of H43
    "z43": {
        0: (1,),
        2: (2, 4, -12, 8),
        4: (-3, -12, -8, 16),
    },
    "b44": {
        0: (1,),
        2: (-2, -4, 14, -20, 8),
        4: (1, 4, -10, -8),
    },
    # second radicand factor of H44 (used negated)
    "z44": {
        0: (-1,),
        2: (-2, -4, 12, -8),
        4: (3, 12, 8, -16),
    },
}


def _as_fraction(entry) -> Fraction:
    if isinstance(entry, tuple):
        return Fraction(entry[0], entry[1])
    return Fraction(entry)


_SERIES_CUTOFF = 0.45
_SERIES_TERMS = 44
_MP_DPS = 40

# Smallest t (with safety margin) at which plain float64 row evaluation of
# each bracket reaches ~1e-14 relative accuracy; calibrated against a
# 120-digit evaluation.  Brackets vanish at t = 0 to orders as high as t^20,
# so the rows keep cancelling well past the series cutoff; between the
# series cutoff and this threshold the rows are summed in 40-digit
# arithmetic.
_FLOAT_CUTOFF: dict[str, float] = {
    "p1": 4.8,
    "p2": 3.6,
    "p3": 6.3,
    "ba": 3.6,
    "bb": 4.8,
    "n13": 2.8,
    "z": 2.4,
    "n21": 1.4,
    "r2": 1.1,
    "d21": 1.2,
    "d22": 1.4,
    "b23": 0.8,
    "c23": 0.6,
    "e23": 1.1,
    "z4": 0.6,
    "n31": 4.2,
    "r3": 3.2,
    "d31": 4.8,
    "ba3": 3.6,
    "bb3": 4.2,
    "ba33": 2.8,
    "c33": 2.1,
    "n34": 2.8,
    "n41": 0.9,
    "r4": 0.9,
    "d41": 1.2,
    "d42": 0.9,
    "b43": 0.6,
    "z43": 0.6,
    "b44": 0.6,
    "z44": 0.6,
}


class _Bracket:
    """One decaying bracket with three evaluation regimes.

    * ``t <= 0.45`` — Taylor series whose coefficients are derived exactly
      from the rational tables, so the cancellation of the rows at small t
      never happens in floating point.
    * mid-range — the rows still cancel to more digits than float64 holds;
      they are summed with 40-digit arithmetic and rounded once.
    * large t — plain float64 Horner per row (the decaying rows underflow
      harmlessly; the d = 0 row carries the tail).
    """

    __slots__ = ("name", "rows", "float_rows", "lead", "series", "float_cutoff",
                 "_mp_rows")

    def __init__(self, name: str, table: Mapping[int, tuple]):
        self.name = name
        self.rows = [
            (d, tuple(_as_fraction(c) for c in coeffs))
            for d, coeffs in sorted(table.items())
        ]
        self.float_rows = [
            (float(d), tuple(float(c) for c in coeffs)) for d, coeffs in self.rows
        ]
        self.float_cutoff = _FLOAT_CUTOFF[name]
        self._mp_rows = None
        # Taylor coefficients: c_m = sum_d sum_j coeff_{d,j} (-d)^{m-j}/(m-j)!
        coeff = [Fraction(0)] * _SERIES_TERMS
        for d, poly in self.rows:
            for j, cj in enumerate(poly):
                if cj == 0:
                    continue
                power = Fraction(1)
                for m in range(j, _SERIES_TERMS):
                    coeff[m] += cj * power
                    power = power * (-d) / (m - j + 1)
        lead = 0
        while lead < _SERIES_TERMS and coeff[lead] == 0:
            lead += 1
        if lead == 0:
            raise AssertionError(f"bracket {name!r} does not vanish at t=0")
        self.lead = lead
        self.series = tuple(float(c) for c in coeff[lead:])

    def _horner(self, t: float) -> float:
        acc = 0.0
        for d, poly in self.float_rows:
            p = 0.0
            for c in reversed(poly):
                p = p * t + c
            acc += p if d == 0.0 else p * math.exp(-d * t)
        return acc

    def _mid(self, t: float) -> float:
        import mpmath

        with mpmath.workdps(_MP_DPS):
            if self._mp_rows is None:
                self._mp_rows = [
                    (
                        d,
                        tuple(
                            mpmath.mpf(c.numerator) / c.denominator
                            for c in poly
                        ),
                    )
                    for d, poly in self.rows
                ]
            tt = mpmath.mpf(t)
            acc = mpmath.mpf(0)
            for d, poly in self._mp_rows:
                p = mpmath.mpf(0)
                for c in reversed(poly):
                    p = p * tt + c
                acc += p if d == 0 else p * mpmath.exp(-d * tt)
            return float(acc)

    def value(self, t: float) -> float:
        if t <= _SERIES_CUTOFF:
            acc = 0.0
            for c in reversed(self.series):
                acc = acc * t + c
            return acc * t**self.lead
        if t < self.float_cutoff:
            return self._mid(t)
        return self._horner(t)

    def value_mp(self, t, ctx):
        """Arbitrary-precision row evaluation (for cross-checks)."""
        tt = ctx.mpf(t) if not hasattr(t, "_mpf_") else t
        acc = ctx.mpf(0)
        for d, poly in self.rows:
            p = ctx.mpf(0)
            for c in reversed(poly):
                p = p * tt + ctx.mpf(c.numerator) / ctx.mpf(c.denominator)
            acc += p * ctx.exp(-d * tt)
        return acc


_BRACKETS = {name: _Bracket(name, table) for name, table in _TABLES.items()}


def bracket_names() -> tuple[str, ...]:
    return tuple(_BRACKETS)


def bracket_value(name: str, t: float) -> float:
    return _BRACKETS[name].value(t)


def bracket_value_mp(name: str, t, dps: int = 50):
    import mpmath

    with mpmath.workdps(dps):
        return _BRACKETS[name].value_mp(t, mpmath.mp)


@dataclass(frozen=True)
class KernelId:
    """Kernel coordinates: family 1..4 (interval regime), index 1..4."""

    family: int
    index: int

    def __post_init__(self) -> None:
        if self.family not in (1, 2, 3, 4):
            raise ValueError(f"family must be 1..4, got {self.family!r}")
        if self.index not in (1, 2, 3, 4):
            raise ValueError(f"index must be 1..4, got {self.index!r}")


def _sqrt_clip(value: float) -> float:
    return math.sqrt(value) if value > 0.0 else 0.0


def _b(name: str, t: float) -> float:
    return _BRACKETS[name].value(t)


def _h11(t: float) -> float:
    return _b("p1", t) * _sqrt_clip(_b("p2", t)) / (192.0 * t * _b("p3", t))


def _h12(t: float) -> float:
    return _sqrt_clip(-80.0 * _b("ba", t) * t**3 / _b("bb", t))


def _h13(t: float) -> float:
    rad = (-_b("p2", t)) * _b("z", t)
    return _b("n13", t) / math.sqrt(rad) if rad > 0.0 else 0.0


def _h14(t: float) -> float:
    rad = (-_b("z", t)) * _b("bb", t)
    if rad <= 0.0:
        return 0.0
    return math.exp(-t) * _b("n13", t) * t**1.5 / math.sqrt(rad)


def _h21(t: float) -> float:
    return _b("n21", t) * _sqrt_clip(_b("r2", t)) / (6.0 * t * _b("d21", t))


def _h22(t: float) -> float:
    return 2.0 * math.sqrt(t) * math.exp(-t) * _sqrt_clip(_b("r2", t) / _b("d22", t))


def _h23(t: float) -> float:
    rad = _b("c23", t) * _b("e23", t)
    return 0.125 * abs(_b("b23", t)) / math.sqrt(rad) if rad > 0.0 else 0.0


def _h24(t: float) -> float:
    rad = _b("d22", t) * _b("z4", t)
    if rad <= 0.0:
        return 0.0
    return 2.0 * math.sqrt(t) * math.exp(-t) * _b("b23", t) / math.sqrt(rad)


def _h31(t: float) -> float:
    return -_b("n31", t) * _sqrt_clip(_b("r3", t)) / (31.0 * t * _b("d31", t))


def _h32(t: float) -> float:
    return math.sqrt(160.0) * t**1.5 * _sqrt_clip(_b("ba3", t) / _b("bb3", t))


def _h33(t: float) -> float:
    rad = _b("c33", t) * _b("ba3", t)
    if rad <= 0.0:
        return 0.0
    return abs(_b("ba33", t)) / math.sqrt(20.0 * rad)


def _h34(t: float) -> float:
    rad = (-2.0 * _b("n31", t)) * (-_b("c33", t))
    if rad <= 0.0:
        return 0.0
    return 0.125 * _b("n34", t) * t**1.5 / math.sqrt(rad)


def _h41(t: float) -> float:
    return _b("n41", t) * _sqrt_clip(_b("r4", t)) / (16.0 * t * _b("d41", t))


def _h42(t: float) -> float:
    return 2.0 * math.sqrt(t) * _sqrt_clip(-_b("r4", t) / _b("d42", t))


def _h43(t: float) -> float:
    rad = _b("r4", t) * _b("z43", t)
    return 8.0 * _b("b43", t) / math.sqrt(rad) if rad > 0.0 else 0.0


def _h44(t: float) -> float:
    rad = (-_b("d42", t)) * (-_b("z44", t))
    if rad <= 0.0:
        return 0.0
    return 2.0 * math.sqrt(t) * _b("b44", t) / math.sqrt(rad)


_KERNELS = {
    (1, 1): _h11,
    (1, 2): _h12,
    (1, 3): _h13,
    (1, 4): _h14,
    (2, 1): _h21,
    (2, 2): _h22,
    (2, 3): _h23,
    (2, 4): _h24,
    (3, 1): _h31,
    (3, 2): _h32,
    (3, 3): _h33,
    (3, 4): _h34,
    (4, 1): _h41,
    (4, 2): _h42,
    (4, 3): _h43,
    (4, 4): _h44,
}


def h_kernel(kernel_id: KernelId, t: float) -> float:
    """Evaluate one of the sixteen limit kernels at ``t > 0``."""
    if t <= 0.0 or not math.isfinite(t):
        raise ValueError(f"t must be positive and finite, got {t!r}")
    value = _KERNELS[(kernel_id.family, kernel_id.index)](t)
    if not math.isfinite(value):
        raise NonFiniteResult(
            f"kernel ({kernel_id.family},{kernel_id.index}) at t={t!r} "
            "is not finite"
        )
    return value


# t -> infinity laws: (power, constant) meaning  H ~ constant * t**power.
# Entries are None for the kernels whose tails decay like poly(t)*exp(-t)
# (families 1/2, indices 2 and 4) — those get envelope checks instead.
# The two tail-family leads (1,1) and (2,1) share the law t^{-7/2}/2.
TAIL_LAWS: dict[tuple[int, int], tuple[float, float] | None] = {
    (1, 1): (-3.5, 0.5),
    (1, 2): None,
    (1, 3): (0.0, 1.0),
    (1, 4): None,
    (2, 1): (-3.5, 0.5),
    (2, 2): None,
    (2, 3): (0.0, 1.0),
    (2, 4): None,
    (3, 1): (-1.0, 4.0 * math.sqrt(35.0) / 115.0),
    (3, 2): (1.5, math.sqrt(35.0)),
    (3, 3): (0.0, 5.0 / math.sqrt(35.0)),
    (3, 4): (1.5, 5.0),
    (4, 1): (-1.0, 4.0 * math.sqrt(3.0) / 11.0),
    (4, 2): (0.5, 2.0 * math.sqrt(3.0)),
    (4, 3): (0.0, 1.0 / math.sqrt(3.0)),
    (4, 4): (0.5, 2.0),
}
