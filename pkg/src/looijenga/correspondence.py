"""Scalar bridge between open and logarithmic generating series.

Every ``1 / (2 sin(n hbar/2))`` is carried in q-variables as ``i / [n]_q``,
so values stay real-coefficient and only the power of ``i`` moves around.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial, prod
from typing import Sequence

from .qalgebra import GaussianRational, Phased, QRational, sine_factor

__all__ = [
    "ContactData",
    "ParityViolation",
    "interior_reduction_factor",
    "log_from_open",
    "open_from_log",
    "framing_prefactor",
    "extract_genus_invariants",
]


class ParityViolation(ValueError):
    """A genus expansion has a term outside the expected shape."""

    def __init__(self, message: str, exponent: int, coefficient: GaussianRational):
        super().__init__(message)
        self.exponent = exponent
        self.coefficient = coefficient


@dataclass(frozen=True)
class ContactData:
    """``m`` interior markings plus tangency orders along the first divisor."""

    m: int
    tangencies: tuple
    d1_dot_beta: int
    d2_dot_beta: int

    def __post_init__(self):
        object.__setattr__(self, "tangencies", tuple(int(c) for c in self.tangencies))
        if not self.tangencies:
            raise ValueError("at least one tangency is required")
        if any(c <= 0 for c in self.tangencies):
            raise ValueError(f"tangencies must be positive: {self.tangencies}")
        if sum(self.tangencies) != self.d1_dot_beta:
            raise ValueError(
                f"tangencies sum to {sum(self.tangencies)}, expected D1.beta = {self.d1_dot_beta}")
        if not 0 <= self.m <= self.n:
            raise ValueError(f"need 0 <= m <= n, got m = {self.m}, n = {self.n}")
        if self.d2_dot_beta < 1:
            raise ValueError(f"D2.beta must be positive, got {self.d2_dot_beta}")

    @property
    def n(self) -> int:
        return len(self.tangencies)

    @classmethod
    def parse(cls, text: str, d1_dot_beta: int | None = None,
              d2_dot_beta: int = 1) -> "ContactData":
        """Read ``"m:c1,...,cn"``."""
        try:
            head, tail = text.split(":")
            m = int(head)
            tangencies = tuple(int(x) for x in tail.split(","))
        except ValueError:
            raise ValueError(f"contact must look like m:c1,...,cn, got {text!r}") from None
        if d1_dot_beta is None:
            d1_dot_beta = sum(tangencies)
        return cls(m, tangencies, d1_dot_beta, d2_dot_beta)


def interior_reduction_factor(m: int, tangencies: Sequence[int]) -> int:
    """``m!`` times the product of the last ``m`` tangencies."""
    tangencies = tuple(tangencies)
    if m < 0 or m > len(tangencies):
        raise ValueError(f"need 0 <= m <= n, got m = {m}, n = {len(tangencies)}")
    return factorial(m) * prod(tangencies[len(tangencies) - m:])


def _bridge(contact: ContactData) -> Phased:
    sign = (-1) ** (contact.d1_dot_beta + contact.d2_dot_beta + 1)
    scalar = sign * interior_reduction_factor(contact.m, contact.tangencies)
    return sine_factor(contact.d2_dot_beta) * scalar


def log_from_open(open_series: Phased, contact: ContactData) -> Phased:
    """Log generating function from the connected open series."""
    return open_series * _bridge(contact)


def open_from_log(log_series: Phased, contact: ContactData) -> Phased:
    """Inverse of :func:`log_from_open`."""
    return log_series / _bridge(contact)


def framing_prefactor(f: int, c: int) -> Fraction:
    """``(-1)^{fc} prod_{k=1}^{c-1} (fc + k) / c!``."""
    if c <= 0:
        raise ValueError(f"c must be positive, got {c}")
    sign = -1 if (f * c) % 2 else 1
    return Fraction(sign * prod(f * c + k for k in range(1, c)), factorial(c))


def extract_genus_invariants(series: Phased, g_max: int, shift: int = -1,
                             order: int | None = None) -> list[Fraction]:
    """``N_0, ..., N_{g_max}`` from ``series = sum_g N_g hbar^{2g + shift}``.

    The expansion runs to ``hbar^order`` (default ``2 g_max + shift``); any
    term of the wrong parity, below the leading power, or with a nonzero
    imaginary part raises :class:`ParityViolation`.
    """
    if g_max < 0:
        raise ValueError("g_max must be nonnegative")
    top = 2 * g_max + shift
    if order is None:
        order = top
    if order < top:
        raise ValueError("order too small for the requested genera")
    expansion = series.expand(order)
    out = [Fraction(0)] * (g_max + 1)
    for e, coeff in sorted(expansion.terms.items()):
        if coeff.is_zero():
            continue
        if e < shift or (e - shift) % 2:
            raise ParityViolation(f"unexpected term at hbar^{e}: {coeff}", e, coeff)
        if coeff.im != 0:
            raise ParityViolation(f"imaginary coefficient at hbar^{e}: {coeff}", e, coeff)
        g = (e - shift) // 2
        if g <= g_max:
            out[g] = coeff.re
    return out
