"""Multiple-cover inversion (LMOV and BPS) and the integrality check."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import factorial, gcd
from typing import Mapping, NamedTuple

from .correspondence import ContactData
from .qalgebra import HalfLaurent, Phased, QRational, sine_factor

__all__ = [
    "moebius",
    "DivisibilityKey",
    "IntegralityVerdict",
    "MissingEntry",
    "bps_transform",
    "lmov_transform",
    "bps_defining_relation",
    "lmov_defining_relation",
    "check_integrality",
    "result_row",
]


class MissingEntry(KeyError):
    """An input table lacks the entry for a divisor of the key."""


def moebius(k: int) -> int:
    """Moebius function by trial division."""
    if k <= 0:
        raise ValueError(f"moebius needs a positive argument, got {k}")
    result = 1
    p = 2
    while p * p <= k:
        if k % p == 0:
            k //= p
            if k % p == 0:
                return 0
            result = -result
        p += 1
    if k > 1:
        result = -result
    return result


@dataclass(frozen=True)
class DivisibilityKey:
    """Tangency orders together with a curve class."""

    tangencies: tuple
    curve_class: tuple

    def __post_init__(self):
        object.__setattr__(self, "tangencies", tuple(int(c) for c in self.tangencies))
        object.__setattr__(self, "curve_class", tuple(int(c) for c in self.curve_class))

    def content(self) -> int:
        g = 0
        for x in self.tangencies + self.curve_class:
            g = gcd(g, x)
        return g

    def divisible_by(self, k: int) -> bool:
        return all(x % k == 0 for x in self.tangencies + self.curve_class)

    def divisors(self) -> list[int]:
        g = self.content()
        if g == 0:
            raise ValueError("the zero key has no finite divisor set")
        return [k for k in range(1, g + 1) if g % k == 0]

    def divide(self, k: int) -> "DivisibilityKey":
        if not self.divisible_by(k):
            raise ValueError(f"{k} does not divide {self}")
        return DivisibilityKey(tuple(x // k for x in self.tangencies),
                               tuple(x // k for x in self.curve_class))


def _lookup(table: Mapping, key: DivisibilityKey) -> Phased:
    try:
        value = table[key]
    except KeyError:
        raise MissingEntry(f"no entry for {key}") from None
    if not isinstance(value, Phased):
        value = Phased(0, QRational.coerce(value))
    return value


def _real(p: Phased, what: str) -> QRational:
    if p.value.is_zero():
        return QRational(0)
    if p.i_power != 0:
        raise ValueError(f"{what} came out imaginary; inconsistent phases in the input table")
    return p.value


def _bps_prefactor(contact: ContactData) -> Phased:
    n, m = contact.n, contact.m
    out = sine_factor(1) * sine_factor(1)
    for c in contact.tangencies[: n - m]:
        out = out * QRational(c) / sine_factor(c)
    for c in contact.tangencies[n - m:]:
        out = out / sine_factor(c)
    out = out * QRational.coerce(Fraction(1, factorial(m)))
    return out / sine_factor(contact.d2_dot_beta)


def _lmov_prefactor(tangencies) -> Phased:
    out = sine_factor(1) * sine_factor(1)
    for c in tangencies:
        out = out * QRational(c) / sine_factor(c)
    return out


def _ks_sign(ks_dot_beta: int, k: int) -> int:
    if ks_dot_beta % k:
        raise ValueError(f"K_S.beta = {ks_dot_beta} is not divisible by {k}")
    return -1 if (ks_dot_beta // k + 1) % 2 else 1


def bps_transform(log_series_by_class: Mapping[DivisibilityKey, Phased], key: DivisibilityKey,
                  contact: ContactData, ks_dot_beta: int) -> QRational:
    """BPS invariant from a table of log generating functions."""
    total = Phased(0, QRational(0))
    for k in key.divisors():
        mu = moebius(k)
        if mu == 0:
            continue
        entry = _lookup(log_series_by_class, key.divide(k))
        weight = Fraction(mu * _ks_sign(ks_dot_beta, k)) * Fraction(k) ** (contact.m - 1)
        total = total + entry.substitute_q_power(k) * QRational.coerce(weight)
    return _real(_bps_prefactor(contact) * total, "BPS invariant")


def lmov_transform(open_by_class: Mapping[DivisibilityKey, Phased],
                   key: DivisibilityKey) -> QRational:
    """LMOV invariant from a table of connected open series."""
    total = Phased(0, QRational(0))
    for k in key.divisors():
        mu = moebius(k)
        if mu == 0:
            continue
        entry = _lookup(open_by_class, key.divide(k))
        total = total + entry.substitute_q_power(k) * QRational.coerce(Fraction(mu, k))
    return _real(_lmov_prefactor(key.tangencies) * total, "LMOV invariant")


def _cover_sum(table: Mapping, key: DivisibilityKey) -> Phased:
    n = len(key.tangencies)
    total = Phased(0, QRational(0))
    for k in key.divisors():
        entry = _lookup(table, key.divide(k)).substitute_q_power(k)
        sk = sine_factor(k)
        total = total + entry * QRational(k ** (n - 1)) / (sk * sk)
    return total


def bps_defining_relation(bps_by_class: Mapping[DivisibilityKey, QRational], key: DivisibilityKey,
                          contact: ContactData, ks_dot_beta: int) -> Phased:
    """Log generating function rebuilt from BPS invariants."""
    s1 = sine_factor(1)
    total = _cover_sum(bps_by_class, key) * (s1 * s1) / _bps_prefactor(contact)
    return total * (-1 if (ks_dot_beta + 1) % 2 else 1)


def lmov_defining_relation(lmov_by_class: Mapping[DivisibilityKey, QRational],
                           key: DivisibilityKey) -> Phased:
    """Connected open series rebuilt from LMOV invariants."""
    s1 = sine_factor(1)
    return _cover_sum(lmov_by_class, key) * (s1 * s1) / _lmov_prefactor(key.tangencies)


class IntegralityVerdict(NamedTuple):
    is_laurent_polynomial: bool
    has_integer_coefficients: bool
    uses_only_integer_q_powers: bool
    witness: str | None = None

    def __bool__(self) -> bool:
        return (self.is_laurent_polynomial and self.has_integer_coefficients
                and self.uses_only_integer_q_powers)


def check_integrality(v: QRational) -> IntegralityVerdict:
    """Whether ``v`` is an integer Laurent polynomial in ``q``."""
    num, den = v.num, v.den
    odd = [e for e, _ in itertools.chain(num.items(), den.items()) if e % 2]
    if den.degree() != 0:
        # canonical form: a nonconstant denominator never divides the numerator
        return IntegralityVerdict(False, False, not odd, f"nontrivial denominator {den}")
    integral = den == HalfLaurent.constant(1)
    witness = None if integral else f"non-integer coefficients (denominator {den})"
    if odd and witness is None:
        witness = f"half-integer q-power q^({odd[0]}/2)"
    return IntegralityVerdict(True, integral, not odd, witness)


def result_row(key: DivisibilityKey, value: QRational) -> dict:
    """JSON row of a BPS/LMOV result table."""
    return {
        "class": list(key.curve_class),
        "tangencies": list(key.tangencies),
        "value": value.to_json_obj(),
        "verdict": bool(check_integrality(value)),
    }
