"""Principally specialized Schur functions and the two-legged vertex.

Specializations are evaluated in closed form: complete homogeneous
functions have a product formula, skew Schur functions come from the
Jacobi-Trudi determinant, and shifted alphabets never appear because the
vertex is written as a sum over plain specializations.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .partitions import Partition, conjugate, contains, kappa, partitions_inside
from .qalgebra import HalfLaurent, QRational

__all__ = [
    "SpecializationConvention",
    "DEFAULT_CONVENTION",
    "h_spec",
    "skew_schur_spec",
    "vertex_amplitude",
    "shifted_alphabet",
]


@dataclass(frozen=True)
class SpecializationConvention:
    """Orientation of the principal specialization.

    ``exponent_sign = +1`` evaluates at ``x_j = q^{j-1/2}`` (a convergent
    alphabet for ``|q| < 1``); ``-1`` is the reciprocal alphabet.
    """

    exponent_sign: int = 1

    def __post_init__(self):
        if self.exponent_sign not in (1, -1):
            raise ValueError("exponent_sign must be +1 or -1")

    @classmethod
    def parse(cls, name: str) -> "SpecializationConvention":
        try:
            return cls({"plus": 1, "+": 1, "minus": -1, "-": -1}[name])
        except KeyError:
            raise ValueError(f"unknown convention {name!r}") from None

    @property
    def name(self) -> str:
        return "plus" if self.exponent_sign == 1 else "minus"


DEFAULT_CONVENTION = SpecializationConvention(1)


def _orient(r: QRational, convention: SpecializationConvention) -> QRational:
    return r if convention.exponent_sign == 1 else r.substitute_q_inverse()


@lru_cache(maxsize=None)
def _q_pochhammer(k: int) -> HalfLaurent:
    """``prod_{i=1}^k (1 - q^i)``."""
    out = HalfLaurent.constant(1)
    for i in range(1, k + 1):
        out = out * HalfLaurent({0: 1, 2 * i: -1})
    return out


@lru_cache(maxsize=None)
def _h_plus(k: int) -> QRational:
    if k < 0:
        return QRational(0)
    return QRational(HalfLaurent.monomial(k), _q_pochhammer(k))


def h_spec(k: int, convention: SpecializationConvention = DEFAULT_CONVENTION) -> QRational:
    """Complete homogeneous ``h_k`` at the principal specialization."""
    return _orient(_h_plus(k), convention)


def _bareiss_det(m: list[list[HalfLaurent]]) -> HalfLaurent:
    n = len(m)
    if n == 0:
        return HalfLaurent.constant(1)
    a = [row[:] for row in m]
    sign = 1
    prev = HalfLaurent.constant(1)
    for k in range(n - 1):
        if a[k][k].is_zero():
            for r in range(k + 1, n):
                if not a[r][k].is_zero():
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return HalfLaurent()
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]).divmod_exact(prev)
        prev = a[k][k]
    det = a[n - 1][n - 1]
    return det if sign == 1 else -det


@lru_cache(maxsize=None)
def _skew_plus(lam: Partition, mu: Partition) -> QRational:
    if not contains(lam, mu):
        return QRational(0)
    if lam == mu:
        return QRational(1)
    n = len(lam)
    idx = [[lam[i] - mu.part(j) - i + j for j in range(n)] for i in range(n)]
    top = max(v for row in idx for v in row)
    # h_k = s^k P_top/P_k / P_top with P_k the q-Pochhammer symbol
    entries = []
    for row in idx:
        out = []
        for k in row:
            if k < 0:
                out.append(HalfLaurent())
            else:
                cofactor = _q_pochhammer(top).divmod_exact(_q_pochhammer(k))
                out.append(cofactor.shift(k))
        entries.append(out)
    return QRational(_bareiss_det(entries), _q_pochhammer(top) ** n)


def skew_schur_spec(lam: Partition, mu: Partition = Partition(),
                    convention: SpecializationConvention = DEFAULT_CONVENTION) -> QRational:
    """``s_{lam/mu}`` at the principal specialization (Jacobi-Trudi)."""
    return _orient(_skew_plus(Partition(lam), Partition(mu)), convention)


def _meet(a: Partition, b: Partition) -> Partition:
    return Partition(min(x, y) for x, y in zip(a, b))


@lru_cache(maxsize=None)
def _vertex_plus(mu_out: Partition, mu_in: Partition) -> QRational:
    # +1 orientation: the kappa prefactor is q^{-kappa/2}
    a = conjugate(mu_in)
    b = conjugate(mu_out)
    total = QRational(0)
    for eta in partitions_inside(_meet(a, b)):
        total = total + _skew_plus(a, eta) * _skew_plus(b, eta)
    return total * QRational(HalfLaurent.monomial(-kappa(mu_out)))


def vertex_amplitude(mu_out: Partition, mu_in: Partition,
                     convention: SpecializationConvention = DEFAULT_CONVENTION) -> QRational:
    """Two-legged vertex ``W_{mu_out, mu_in^t, empty}``.

    In the reciprocal orientation (``exponent_sign = -1``, where the
    plain alphabet is ``x_j = q^{1/2-j}``) this is
    ``q^{kappa(mu_out)/2} sum_eta s_{mu_in^t/eta} s_{mu_out^t/eta}``;
    the ``+1`` orientation is its image under ``q -> 1/q``.  It equals
    ``s_{mu_out}(q^{rho+mu_in}) s_{mu_in^t}(q^rho)`` with the shifted
    alphabet ``x_j = q^{gamma_j - j + 1/2}`` (reciprocal orientation).
    """
    return _orient(_vertex_plus(Partition(mu_out), Partition(mu_in)), convention)


def shifted_alphabet(num_vars: int, shift: Partition,
                     convention: SpecializationConvention = DEFAULT_CONVENTION) -> list[int]:
    """``s``-exponents of the alphabet ``q^{rho+shift}`` in the given orientation.

    Only the ``+1`` orientation gives a convergent monomial expansion.
    """
    sign = convention.exponent_sign
    return [sign * (2 * j - 1 - 2 * shift.part(j - 1)) for j in range(1, num_vars + 1)]
