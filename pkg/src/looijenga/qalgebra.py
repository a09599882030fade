"""Exact arithmetic in the variable ``s = q^{1/2}``.

Everything here is exact: Laurent polynomials carry Python integers,
rational functions are kept in a canonical reduced form, and the
expansion under ``q = exp(i*hbar)`` produces Gaussian rationals.

Exponents are always counted in units of ``s``; ``q^k`` is ``s^(2k)``.
"""
from __future__ import annotations

import json
from fractions import Fraction
from math import factorial, gcd
from typing import Iterable, Mapping, NamedTuple

import flint

__all__ = [
    "HalfLaurent",
    "QRational",
    "GaussianRational",
    "GenusSeries",
    "Phased",
    "QDivisionByZero",
    "quantum_integer",
    "q_binomial",
    "expand_hbar",
]


class QDivisionByZero(ZeroDivisionError):
    """Raised when dividing by the zero rational function."""


class HalfLaurent:
    """Laurent polynomial in ``s`` with integer coefficients.

    Stored sparsely as ``{exponent: coefficient}`` with no zero entries.
    Instances are immutable and hashable.
    """

    __slots__ = ("_c", "_hash")

    def __init__(self, coefficients: Mapping[int, int] | None = None):
        c = {}
        if coefficients:
            for e, v in coefficients.items():
                if v:
                    c[int(e)] = int(v)
        self._c = c
        self._hash = None

    @classmethod
    def _raw(cls, c: dict) -> "HalfLaurent":
        obj = cls.__new__(cls)
        obj._c = c
        obj._hash = None
        return obj

    @classmethod
    def monomial(cls, exponent: int, coefficient: int = 1) -> "HalfLaurent":
        return cls({exponent: coefficient})

    @classmethod
    def constant(cls, value: int) -> "HalfLaurent":
        return cls({0: value})

    @property
    def coefficients(self) -> dict[int, int]:
        return dict(self._c)

    def items(self):
        return sorted(self._c.items())

    def is_zero(self) -> bool:
        return not self._c

    def valuation(self) -> int:
        if not self._c:
            raise ValueError("valuation of the zero polynomial")
        return min(self._c)

    def degree(self) -> int:
        if not self._c:
            raise ValueError("degree of the zero polynomial")
        return max(self._c)

    def lowest_coefficient(self) -> int:
        return self._c[self.valuation()]

    def __getitem__(self, exponent: int) -> int:
        return self._c.get(exponent, 0)

    def __len__(self) -> int:
        return len(self._c)

    def __bool__(self) -> bool:
        return bool(self._c)

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = HalfLaurent.constant(other)
        if not isinstance(other, HalfLaurent):
            return NotImplemented
        return self._c == other._c

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._c.items()))
        return self._hash

    def __repr__(self) -> str:
        if not self._c:
            return "HalfLaurent(0)"
        return f"HalfLaurent({self.items()})"

    def __str__(self) -> str:
        if not self._c:
            return "0"
        terms = []
        for e, v in sorted(self._c.items(), reverse=True):
            if e == 0:
                terms.append(str(v))
            else:
                mono = "s" if e == 1 else f"s^{e}"
                if v == 1:
                    terms.append(mono)
                elif v == -1:
                    terms.append("-" + mono)
                else:
                    terms.append(f"{v}*{mono}")
        return " + ".join(terms).replace("+ -", "- ")

    @staticmethod
    def _coerce(x) -> "HalfLaurent":
        if isinstance(x, HalfLaurent):
            return x
        if isinstance(x, int):
            return HalfLaurent.constant(x)
        raise TypeError(f"cannot coerce {type(x).__name__} to HalfLaurent")

    def __add__(self, other) -> "HalfLaurent":
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        c = dict(self._c)
        for e, v in other._c.items():
            w = c.get(e, 0) + v
            if w:
                c[e] = w
            else:
                c.pop(e, None)
        return HalfLaurent._raw(c)

    __radd__ = __add__

    def __neg__(self) -> "HalfLaurent":
        return HalfLaurent._raw({e: -v for e, v in self._c.items()})

    def __sub__(self, other) -> "HalfLaurent":
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "HalfLaurent":
        return (-self) + other

    def __mul__(self, other) -> "HalfLaurent":
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        if not self._c or not other._c:
            return HalfLaurent._raw({})
        if len(self._c) * len(other._c) > 400:
            return _from_flint(_to_flint(self) * _to_flint(other),
                               self.valuation() + other.valuation())
        c: dict[int, int] = {}
        for e1, v1 in self._c.items():
            for e2, v2 in other._c.items():
                e = e1 + e2
                c[e] = c.get(e, 0) + v1 * v2
        return HalfLaurent._raw({e: v for e, v in c.items() if v})

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "HalfLaurent":
        if n < 0:
            if len(self._c) == 1:
                (e, v), = self._c.items()
                if v in (1, -1):
                    return HalfLaurent._raw({e * n: v ** (-n)})
            raise ValueError("negative power of a non-unit Laurent polynomial")
        result = HalfLaurent.constant(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def shift(self, k: int) -> "HalfLaurent":
        """Multiply by ``s^k``."""
        return HalfLaurent._raw({e + k: v for e, v in self._c.items()})

    def scale_exponents(self, k: int) -> "HalfLaurent":
        """Substitute ``s -> s^k``; ``k = -1`` is ``q -> 1/q``."""
        if k == 0:
            raise ValueError("exponent scaling by zero is not invertible")
        return HalfLaurent._raw({e * k: v for e, v in self._c.items()})

    def content(self) -> int:
        g = 0
        for v in self._c.values():
            g = gcd(g, v)
        return g

    def evaluate(self, s):
        """Numerically evaluate at a point (test oracle use only)."""
        return sum(v * s ** e for e, v in self._c.items())

    def at_one(self) -> int:
        return sum(self._c.values())

    def divmod_exact(self, other: "HalfLaurent") -> "HalfLaurent":
        """Exact quotient ``self / other``; raises ``ValueError`` if inexact."""
        other = self._coerce(other)
        if other.is_zero():
            raise QDivisionByZero("division by the zero polynomial")
        if self.is_zero():
            return self
        a = _to_flint(self)
        b = _to_flint(other)
        quo, rem = divmod(a, b)
        if rem != 0:
            raise ValueError("polynomial division is not exact")
        if quo * b != a:
            raise ValueError("polynomial division is not exact")
        return _from_flint(quo, self.valuation() - other.valuation())

    def to_json_obj(self) -> dict[str, int]:
        return {str(e): v for e, v in sorted(self._c.items())}

    @classmethod
    def from_json_obj(cls, obj: Mapping[str, int]) -> "HalfLaurent":
        return cls({int(e): int(v) for e, v in obj.items()})


def _to_flint(p: HalfLaurent) -> flint.fmpz_poly:
    """Dense ``fmpz_poly`` of ``p / s^valuation(p)``."""
    if p.is_zero():
        return flint.fmpz_poly([])
    v = p.valuation()
    coeffs = [0] * (p.degree() - v + 1)
    for e, c in p._c.items():
        coeffs[e - v] = c
    return flint.fmpz_poly(coeffs)


def _from_flint(f: flint.fmpz_poly, shift: int = 0) -> HalfLaurent:
    return HalfLaurent._raw(
        {i + shift: int(c) for i, c in enumerate(f.coeffs()) if c != 0}
    )


# --------------------------------------------------------------------- rational


class QRational:
    """Ratio of two ``HalfLaurent`` values in canonical form.

    Canonical form: numerator and denominator are coprime in ``Z[s]``,
    the denominator has valuation 0 (monomial content lives in the
    numerator) and its lowest coefficient is positive.  Two equal
    functions therefore have identical representations.
    """

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num=0, den=1):
        num = HalfLaurent._coerce(num)
        den = HalfLaurent._coerce(den)
        if den.is_zero():
            raise QDivisionByZero("zero denominator")
        self.num, self.den = _normalize(num, den)
        self._hash = None

    @classmethod
    def _raw(cls, num: HalfLaurent, den: HalfLaurent) -> "QRational":
        obj = cls.__new__(cls)
        obj.num = num
        obj.den = den
        obj._hash = None
        return obj

    @classmethod
    def coerce(cls, x) -> "QRational":
        if isinstance(x, QRational):
            return x
        if isinstance(x, (HalfLaurent, int)):
            return cls._raw(HalfLaurent._coerce(x), HalfLaurent.constant(1))
        if isinstance(x, Fraction):
            return cls(x.numerator, x.denominator)
        raise TypeError(f"cannot coerce {type(x).__name__} to QRational")

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_laurent(self) -> bool:
        return self.den == 1

    def __bool__(self) -> bool:
        return not self.num.is_zero()

    def __eq__(self, other) -> bool:
        try:
            other = QRational.coerce(other)
        except TypeError:
            return NotImplemented
        return self.num * other.den == other.num * self.den

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.num, self.den))
        return self._hash

    def __repr__(self) -> str:
        return f"QRational({self.num!s} / {self.den!s})"

    def __str__(self) -> str:
        if self.den == 1:
            return str(self.num)
        return f"({self.num}) / ({self.den})"

    def __add__(self, other) -> "QRational":
        try:
            other = QRational.coerce(other)
        except TypeError:
            return NotImplemented
        if other.num.is_zero():
            return self
        if self.num.is_zero():
            return other
        if self.den == other.den:
            return QRational(self.num + other.num, self.den)
        return QRational(self.num * other.den + other.num * self.den,
                         self.den * other.den)

    __radd__ = __add__

    def __neg__(self) -> "QRational":
        return QRational._raw(-self.num, self.den)

    def __sub__(self, other) -> "QRational":
        try:
            other = QRational.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "QRational":
        return (-self) + other

    def __mul__(self, other) -> "QRational":
        try:
            other = QRational.coerce(other)
        except TypeError:
            return NotImplemented
        if self.num.is_zero() or other.num.is_zero():
            return QRational._raw(HalfLaurent(), HalfLaurent.constant(1))
        return QRational(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "QRational":
        try:
            other = QRational.coerce(other)
        except TypeError:
            return NotImplemented
        if other.num.is_zero():
            raise QDivisionByZero("division by the zero rational function")
        return QRational(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other) -> "QRational":
        return QRational.coerce(other) / self

    def __pow__(self, n: int) -> "QRational":
        if n < 0:
            return QRational(1) / self ** (-n)
        return QRational._raw(self.num ** n, self.den ** n) if n else QRational(1)

    def substitute_q_inverse(self) -> "QRational":
        """The map ``q -> 1/q``."""
        return QRational(self.num.scale_exponents(-1), self.den.scale_exponents(-1))

    def substitute_q_power(self, k: int) -> "QRational":
        """The map ``q -> q^k`` (equivalently ``hbar -> k*hbar``)."""
        if k == 1:
            return self
        return QRational(self.num.scale_exponents(k), self.den.scale_exponents(k))

    def series_at_zero(self, order: int) -> dict[int, Fraction]:
        """Expansion in powers of ``s`` around ``s = 0`` up to ``s^order``.

        The canonical denominator has a nonzero constant term, so this is
        an honest power series times a monomial.
        """
        out: dict[int, Fraction] = {}
        if self.num.is_zero():
            return out
        d = self.den
        d0 = Fraction(d[0])
        dcoef = sorted((e, Fraction(v)) for e, v in d._c.items() if e > 0)
        lo = self.num.valuation()
        inv: list[Fraction] = []
        n = order - lo
        for k in range(n + 1):
            acc = Fraction(1) if k == 0 else Fraction(0)
            for e, v in dcoef:
                if e > k:
                    break
                acc -= v * inv[k - e]
            inv.append(acc / d0)
        for e, v in self.num._c.items():
            for k in range(order - e + 1):
                if inv[k]:
                    out[e + k] = out.get(e + k, 0) + v * inv[k]
        return {e: v for e, v in sorted(out.items()) if v}

    def evaluate(self, s):
        return self.num.evaluate(s) / self.den.evaluate(s)

    def to_json_obj(self) -> dict:
        return {"num": self.num.to_json_obj(), "den": self.den.to_json_obj()}

    @classmethod
    def from_json_obj(cls, obj: Mapping) -> "QRational":
        return cls(HalfLaurent.from_json_obj(obj["num"]),
                   HalfLaurent.from_json_obj(obj["den"]))

    def dumps(self) -> str:
        return json.dumps(self.to_json_obj())


def _normalize(num: HalfLaurent, den: HalfLaurent) -> tuple[HalfLaurent, HalfLaurent]:
    if num.is_zero():
        return num, HalfLaurent.constant(1)
    shift = num.valuation() - den.valuation()
    if len(den) == 1:
        (_, dv), = den._c.items()
        g = gcd(num.content(), dv)
        if dv < 0:
            g = -g
        dval = den.valuation()
        return (HalfLaurent._raw({e - dval: v // g for e, v in num._c.items()}),
                HalfLaurent.constant(dv // g))
    a = _to_flint(num)
    b = _to_flint(den)
    g = a.gcd(b)
    if g.degree() > 0 or abs(int(g[0])) != 1:
        a = a // g
        b = b // g
    if b[0] < 0:
        a, b = -a, -b
    return _from_flint(a, shift), _from_flint(b, 0)


# ----------------------------------------------------------------- q-integers


def quantum_integer(n: int) -> HalfLaurent:
    """``[n]_q = q^{n/2} - q^{-n/2} = s^n - s^{-n}``."""
    if n == 0:
        return HalfLaurent()
    return HalfLaurent({n: 1, -n: -1})


def q_binomial(n: int, m: int) -> HalfLaurent:
    """Balanced Gaussian binomial; zero unless ``0 <= m <= n``."""
    if m < 0 or m > n:
        return HalfLaurent()
    m = min(m, n - m)
    top = HalfLaurent.constant(1)
    bottom = HalfLaurent.constant(1)
    for k in range(1, m + 1):
        top = top * quantum_integer(n - m + k)
        bottom = bottom * quantum_integer(k)
    return top.divmod_exact(bottom)


# --------------------------------------------------------------- hbar series


class GaussianRational(NamedTuple):
    """``re + i*im`` with exact rational parts."""

    re: Fraction
    im: Fraction

    @classmethod
    def from_i_power(cls, value: Fraction, power: int) -> "GaussianRational":
        power %= 4
        value = Fraction(value)
        if power == 0:
            return cls(value, Fraction(0))
        if power == 1:
            return cls(Fraction(0), value)
        if power == 2:
            return cls(-value, Fraction(0))
        return cls(Fraction(0), -value)

    def __add__(self, other):
        return GaussianRational(self.re + other.re, self.im + other.im)

    def __mul__(self, other):
        return GaussianRational(self.re * other.re - self.im * other.im,
                                self.re * other.im + self.im * other.re)

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def __str__(self) -> str:
        if self.im == 0:
            return str(self.re)
        if self.re == 0:
            return f"{self.im}*i"
        return f"{self.re}+{self.im}*i"


class GenusSeries(NamedTuple):
    """Truncated Laurent series in ``hbar``.

    ``terms`` maps an ``hbar`` exponent to its full Gaussian-rational
    coefficient (the phase ``i^i_power`` is already applied);
    ``i_power`` records the phase of the rational function it came from.
    """

    i_power: int
    terms: dict
    truncation_order: int

    def coefficient(self, k: int) -> GaussianRational:
        return self.terms.get(k, GaussianRational(Fraction(0), Fraction(0)))

    def lowest_exponent(self) -> int | None:
        return min(self.terms) if self.terms else None

    def __mul__(self, other: "GenusSeries") -> "GenusSeries":
        lo_a = self.lowest_exponent()
        lo_b = other.lowest_exponent()
        if lo_a is None or lo_b is None:
            return GenusSeries((self.i_power + other.i_power) % 4, {}, 0)
        # each factor is only known up to its own truncation order
        order = min(self.truncation_order + lo_b, other.truncation_order + lo_a)
        terms: dict[int, GaussianRational] = {}
        for ea, va in self.terms.items():
            for eb, vb in other.terms.items():
                if ea + eb <= order:
                    acc = terms.get(ea + eb, GaussianRational(Fraction(0), Fraction(0)))
                    terms[ea + eb] = acc + va * vb
        terms = {e: v for e, v in sorted(terms.items()) if not v.is_zero()}
        return GenusSeries((self.i_power + other.i_power) % 4, terms, order)

    def truncate(self, order: int) -> "GenusSeries":
        return GenusSeries(self.i_power, {e: v for e, v in self.terms.items() if e <= order},
                           min(order, self.truncation_order))


def _moment_series(p: HalfLaurent, count: int) -> tuple[int, list[Fraction]]:
    """Expansion of ``p(exp(t/2))`` as ``t^v * sum_j a_j t^j``, ``j < count``.

    With ``t = i*hbar`` this is ``p`` under ``q = exp(i*hbar)``:
    ``s^k = exp(k t / 2)`` contributes ``k^n / (2^n n!)`` to ``t^n``.
    """
    items = list(p._c.items())
    coeffs: list[Fraction] = []
    v = None
    n = 0
    limit = len(items) + count + 2  # a nonzero poly vanishes to order < #terms at s=1
    while len(coeffs) < count:
        moment = sum(c * e ** n for e, c in items)
        if v is None:
            if moment != 0:
                v = n
            elif n > limit:
                raise ValueError("polynomial vanishes identically")
        if v is not None:
            coeffs.append(Fraction(moment, 2 ** n * factorial(n)))
        n += 1
    return v, coeffs


def expand_hbar(r, i_power: int = 0, order: int = 5) -> GenusSeries:
    """Laurent expansion of ``i^i_power * r(exp(i*hbar))`` about ``hbar = 0``.

    All coefficients up to ``hbar^order`` are returned exactly.
    """
    r = QRational.coerce(r)
    if order < 0:
        raise ValueError("order must be nonnegative")
    if r.num.is_zero():
        return GenusSeries(i_power % 4, {}, order)
    vn, _ = _moment_series(r.num, 1)
    vd, _ = _moment_series(r.den, 1)
    low = vn - vd
    count = order - low + 1
    if count <= 0:
        return GenusSeries(i_power % 4, {}, order)
    _, a = _moment_series(r.num, count)
    _, b = _moment_series(r.den, count)
    # power-series division a / b in t
    quot: list[Fraction] = []
    for j in range(count):
        acc = a[j] - sum(quot[k] * b[j - k] for k in range(j))
        quot.append(acc / b[0])
    terms = {}
    for j, c in enumerate(quot):
        if c:
            e = low + j
            terms[e] = GaussianRational.from_i_power(c, e + i_power)
    return GenusSeries(i_power % 4, terms, order)


class Phased(NamedTuple):
    """``i^i_power * value`` with ``value`` real; ``i_power`` is kept in {0, 1}."""

    i_power: int
    value: QRational

    @classmethod
    def make(cls, i_power: int, value) -> "Phased":
        value = QRational.coerce(value)
        i_power %= 4
        if i_power >= 2:
            value = -value
            i_power -= 2
        return cls(i_power, value)

    def __mul__(self, other) -> "Phased":
        if not isinstance(other, Phased):
            other = Phased(0, QRational.coerce(other))
        return Phased.make(self.i_power + other.i_power, self.value * other.value)

    __rmul__ = __mul__

    def __add__(self, other: "Phased") -> "Phased":
        if other.value.is_zero():
            return self
        if self.value.is_zero():
            return other
        if self.i_power != other.i_power:
            raise ValueError("adding terms with different phases")
        return Phased(self.i_power, self.value + other.value)

    def __truediv__(self, other) -> "Phased":
        if not isinstance(other, Phased):
            other = Phased(0, QRational.coerce(other))
        return Phased.make(self.i_power - other.i_power, self.value / other.value)

    def substitute_q_power(self, k: int) -> "Phased":
        return Phased(self.i_power, self.value.substitute_q_power(k))

    def expand(self, order: int) -> GenusSeries:
        return expand_hbar(self.value, self.i_power, order)

    def to_json_obj(self) -> dict:
        return {"i_power": self.i_power, "value": self.value.to_json_obj()}


def sine_factor(n: int) -> Phased:
    """``2 sin(n*hbar/2)`` under ``q = exp(i*hbar)``, i.e. ``-i [n]_q``."""
    return Phased.make(3, quantum_integer(n))

