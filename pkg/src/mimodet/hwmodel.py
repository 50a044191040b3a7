"""Combinatorial hardware-cost model and behavioral fixed-point quantizer.

Multiplier-free evaluation of the detector's distance form needs only
integer multiples of a handful of real constants, because PAM levels
are small odd integers.  This module counts the distinct product terms
a parallel datapath must generate, plans shift-add networks producing
the required constant multiples, and models (I.F) fixed-point rounding.
All counting is exact integer enumeration.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "DistinctTermCounts",
    "count_distinct_terms",
    "count_coprime_pairs",
    "ShiftAddStep",
    "ShiftAddPlan",
    "build_shiftadd_plan",
    "FixedPointFormat",
    "quantize",
]

_SUPPORTED_PAM = (2, 4, 8, 16)


@dataclass(frozen=True)
class DistinctTermCounts:
    """Distinct values needed per product-term family, for one PAM size.

    Families, with x, y, z running over the PAM levels and r, s generic
    reals: r|x|; r|x||y|; r x^2; (r|x| +- s|y|)|z| counted as distinct
    integer coefficient pairs; and magnitudes of the prior dot products
    b' lam (sign patterns modulo global negation).
    """

    scaled_levels: int
    level_products: int
    squared_levels: int
    cross_products: int
    prior_magnitudes: int

    def as_tuple(self) -> tuple[int, int, int, int, int]:
        return (
            self.scaled_levels,
            self.level_products,
            self.squared_levels,
            self.cross_products,
            self.prior_magnitudes,
        )


def _check_pam(p: int) -> None:
    if p not in _SUPPORTED_PAM:
        raise ValueError(f"unsupported PAM size {p}; expected one of {_SUPPORTED_PAM}")


def count_distinct_terms(p: int) -> DistinctTermCounts:
    """Exact distinct-term counts for a P-PAM axis."""
    _check_pam(p)
    mags = list(range(1, p, 2))
    pairs = {(a * c, b * c) for a in mags for b in mags for c in mags}
    t = p.bit_length() - 1  # bits per axis
    # sign patterns of +-lam_1 ... +-lam_t, modulo global negation
    patterns = {tuple(1 - 2 * ((m >> i) & 1) for i in range(t)) for m in range(2**t)}
    canon = {max(s, tuple(-v for v in s)) for s in patterns}
    return DistinctTermCounts(
        scaled_levels=len(set(mags)),
        level_products=len({a * b for a in mags for b in mags}),
        squared_levels=len({a * a for a in mags}),
        cross_products=2 * len(pairs),
        prior_magnitudes=len(canon),
    )


def count_coprime_pairs(p: int) -> int:
    """Ordered pairs of coprime odd coefficients in [1, P-1]."""
    _check_pam(p)
    mags = range(1, p, 2)
    return sum(1 for a in mags for b in mags if math.gcd(a, b) == 1)


@dataclass(frozen=True)
class ShiftAddStep:
    value: int
    src_a: int
    shift_a: int
    op: str  # "+" | "-"
    src_b: int
    shift_b: int

    def render(self) -> str:
        return (
            f"{self.value} = ({self.src_a} << {self.shift_a}) "
            f"{self.op} ({self.src_b} << {self.shift_b})"
        )


@dataclass(frozen=True)
class ShiftAddPlan:
    """Ordered shift-add steps generating every target multiple.

    Each step combines two previously available values (the unit input
    counts as available) under power-of-2 shifts; ``cost`` is the adder
    count.  ``evaluate`` runs the plan on a concrete input and checks
    every step reproduces exact multiplication.
    """

    targets: tuple[int, ...]
    steps: tuple[ShiftAddStep, ...]

    @property
    def cost(self) -> int:
        return len(self.steps)

    def evaluate(self, v: int) -> dict[int, int]:
        have = {1: v}
        for s in self.steps:
            a = have[s.src_a] << s.shift_a
            b = have[s.src_b] << s.shift_b
            r = a + b if s.op == "+" else a - b
            if r != s.value * v:
                raise AssertionError(f"step {s.render()} evaluated to {r}, not {s.value * v}")
            have[s.value] = r
        for t in self.targets:
            if t not in have and (t & (t - 1)) == 0:
                have[t] = v << (t.bit_length() - 1)  # pure shift, no adder
        missing = [t for t in self.targets if t not in have]
        if missing:
            raise AssertionError(f"plan never produced targets {missing}")
        return have

    def dump(self) -> str:
        return "\n".join(s.render() for s in self.steps)


_MAX_TARGET = 1 << 16


def _signed_digits(t: int) -> list[tuple[int, int]]:
    """Canonical signed-digit terms (digit, position) summing to t."""
    out = []
    pos = 0
    while t:
        if t & 1:
            d = 2 - (t & 3)  # +1 if t % 4 == 1 else -1
            out.append((d, pos))
            t -= d
        t >>= 1
        pos += 1
    return out


def _single_adder(t: int, known: set[int]) -> ShiftAddStep | None:
    shifted = {}
    for base in sorted(known):
        v = base
        sh = 0
        while v <= 2 * _MAX_TARGET:
            shifted.setdefault(v, (base, sh))
            v <<= 1
            sh += 1
    for v in sorted(shifted):
        a, sa = shifted[v]
        w = t - v
        if w > 0 and w in shifted:
            b, sb = shifted[w]
            return ShiftAddStep(t, a, sa, "+", b, sb)
        w = v - t
        if w > 0 and w in shifted:
            b, sb = shifted[w]
            return ShiftAddStep(t, a, sa, "-", b, sb)
    return None


def build_shiftadd_plan(targets) -> ShiftAddPlan:
    """Greedy shift-add plan covering all targets exactly.

    Prefers single-adder steps from already generated values; when none
    applies, the smallest pending target is synthesized through its
    signed-digit expansion, whose partial sums become reusable
    intermediates for later targets.  Not a minimal-adder solver.
    """
    tset = sorted({int(t) for t in targets})
    if not tset:
        raise ValueError("need at least one target")
    if any(t <= 0 or t > _MAX_TARGET for t in tset):
        raise ValueError(f"targets must be in 1..{_MAX_TARGET}")

    known = {1}
    # powers of two are free shifts of the input
    steps: list[ShiftAddStep] = []
    pending = [t for t in tset if t not in known and (t & (t - 1)) != 0]
    while pending:
        step = None
        for t in pending:
            step = _single_adder(t, known)
            if step is not None:
                break
        if step is None:
            # accumulate the signed-digit expansion from the top digit,
            # which keeps every partial sum positive
            t = pending[0]
            digits = _signed_digits(t)[::-1]
            (d0, p0), (d1, p1) = digits[0], digits[1]
            acc = d0 * (1 << p0) + d1 * (1 << p1)
            steps.append(ShiftAddStep(acc, 1, p0, "+" if d1 > 0 else "-", 1, p1))
            known.add(acc)
            for d, ppos in digits[2:]:
                nxt = acc + d * (1 << ppos)
                steps.append(ShiftAddStep(nxt, acc, 0, "+" if d > 0 else "-", 1, ppos))
                known.add(nxt)
                acc = nxt
        else:
            steps.append(step)
            known.add(step.value)
        pending = [t for t in tset if t not in known and (t & (t - 1)) != 0]
    return ShiftAddPlan(tuple(tset), tuple(steps))


@dataclass(frozen=True)
class FixedPointFormat:
    """Signed (I.F) fixed point: I integer bits, F fractional bits.

    Values are multiples of 2^-F saturating symmetrically at
    +-(2^(I-1) - 2^-F).
    """

    int_bits: int
    frac_bits: int

    def __post_init__(self):
        if self.int_bits < 1 or self.frac_bits < 0:
            raise ValueError("need int_bits >= 1 and frac_bits >= 0")

    @property
    def step(self) -> float:
        return 2.0 ** (-self.frac_bits)

    @property
    def max_value(self) -> float:
        return 2.0 ** (self.int_bits - 1) - self.step

    @classmethod
    def from_string(cls, text: str) -> "FixedPointFormat":
        try:
            i_part, f_part = text.split(".")
            return cls(int(i_part), int(f_part))
        except (ValueError, TypeError):
            raise ValueError(f"expected I.F format like '9.8', got {text!r}") from None

    def __str__(self) -> str:
        return f"{self.int_bits}.{self.frac_bits}"


def quantize(x, fmt: FixedPointFormat):
    """Round to the nearest representable value, ties away from zero.

    Saturates at the format range; idempotent.  Complex inputs are
    quantized per component.
    """
    x = np.asarray(x)
    if np.iscomplexobj(x):
        return quantize(x.real, fmt) + 1j * quantize(x.imag, fmt)
    x = np.asarray(x, dtype=float)
    q = np.floor(np.abs(x) / fmt.step + 0.5) * fmt.step
    q = np.copysign(np.minimum(q, fmt.max_value), x)
    return float(q) if q.ndim == 0 else q
