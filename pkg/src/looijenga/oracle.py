"""Independent reference evaluators.

None of these share code paths with the vertex pipeline beyond the basic
``HalfLaurent``/``QRational`` arithmetic: the dP3(0,2) closed form, a
tableau-sum evaluation of (skew) Schur functions on explicit monomial
alphabets, and the cosecant series obtained by inverting the sine series.
"""
from __future__ import annotations

from fractions import Fraction
from math import factorial
from typing import Sequence

from .partitions import Partition, conjugate, contains, kappa
from .qalgebra import GaussianRational, GenusSeries, QRational, q_binomial, quantum_integer

__all__ = [
    "OutOfHypothesis",
    "dp3_closed_form",
    "schur_bruteforce",
    "skew_schur_on_alphabet",
    "rho_alphabet",
    "shifted_schur_series",
    "vertex_expression_one",
    "vertex_expression_two",
    "cosecant_series",
]


class OutOfHypothesis(ValueError):
    """The closed form would divide a nonzero quantity by zero."""


def dp3_closed_form(d0: int, d1: int, d2: int, d3: int) -> QRational:
    """All-genus maximal-contact log invariant of dP3(0,2) in class ``d``.

    The class is ``d0 (H-E1-E2-E3) + d1 E1 + d2 E2 + d3 E3``.
    """
    n = d1 + d2 + d3 - d0
    binomials = (q_binomial(d1, d0 - d3) * q_binomial(d1, d0 - d2)
                 * q_binomial(d0, d1) * q_binomial(n, d1))
    numerator = quantum_integer(d1) * quantum_integer(d2 + d3) * binomials
    denominator = quantum_integer(d0) * quantum_integer(n)
    if denominator.is_zero():
        if numerator.is_zero():
            return QRational(0)
        raise OutOfHypothesis(f"zero denominator for class {(d0, d1, d2, d3)}")
    return QRational(numerator, denominator)


# ------------------------------------------------------------ tableau sums


def rho_alphabet(num_vars: int, shift: Sequence[int] = (), shift_sign: int = 1) -> list[int]:
    """Exponents (in units of ``s``) of ``x_j = q^{j - 1/2 + shift_sign*shift_j}``."""
    out = []
    for j in range(1, num_vars + 1):
        g = shift[j - 1] if j <= len(shift) else 0
        out.append(2 * j - 1 + 2 * shift_sign * g)
    return out


def _horizontal_strips(nu: Partition, lam: Partition):
    """Partitions ``kappa`` with ``nu <= kappa <= lam`` and ``kappa/nu`` a horizontal strip."""
    rows = len(lam)

    def rec(i: int, prefix: list[int]):
        if i == rows:
            parts = [p for p in prefix if p > 0]
            yield Partition(parts), sum(prefix) - nu.size
            return
        lo = nu.part(i)
        hi = lam[i] if i == 0 else min(lam[i], nu.part(i - 1))
        for v in range(lo, hi + 1):
            prefix.append(v)
            yield from rec(i + 1, prefix)
            prefix.pop()

    yield from rec(0, [])


def skew_schur_on_alphabet(lam: Partition, mu: Partition, alphabet: Sequence[int],
                           max_exponent: int) -> dict[int, int]:
    """Sum over semistandard tableaux of shape ``lam/mu`` of ``prod x_T``.

    ``alphabet[j]`` is the ``s``-exponent of variable ``j+1``.  Tableaux are
    generated letter by letter: the cells holding letter ``j`` form a
    horizontal strip, so a tableau is a chain of strips from ``mu`` to
    ``lam``.  Only monomials of exponent ``<= max_exponent`` are kept.
    """
    lam = Partition(lam)
    mu = Partition(mu)
    if not contains(lam, mu):
        return {}
    boxes = lam.size - mu.size
    states: dict[Partition, dict[int, int]] = {mu: {0: 1}}
    for j, e in enumerate(alphabet):
        tail_min = min([0] + list(alphabet[j + 1:]))
        slack = boxes * tail_min  # lowest exponent the remaining letters can add
        nxt: dict[Partition, dict[int, int]] = {}
        for nu, series in states.items():
            for kap, added in _horizontal_strips(nu, lam):
                target = nxt.setdefault(kap, {})
                for ex, c in series.items():
                    ex2 = ex + added * e
                    if ex2 + slack > max_exponent:
                        continue
                    target[ex2] = target.get(ex2, 0) + c
        states = {k: {a: b for a, b in v.items() if b} for k, v in nxt.items()}
    final = states.get(lam, {})
    return {e: c for e, c in sorted(final.items()) if c and e <= max_exponent}


def schur_bruteforce(lam: Partition, mu: Partition, num_vars: int, q_order: int) -> dict[int, int]:
    """Truncated ``s_{lam/mu}(x_j = q^{j-1/2})`` as ``{s-exponent: coeff}``.

    Kept up to ``q^{q_order}`` inclusive; exact there once ``num_vars >= q_order``.
    """
    return skew_schur_on_alphabet(lam, mu, rho_alphabet(num_vars), 2 * q_order)


def shifted_schur_series(lam: Partition, shift: Partition, max_exponent: int) -> dict[int, int]:
    """``s_lam`` at ``x_j = q^{j - 1/2 - shift_j}`` up to ``s^max_exponent``.

    The alphabet is infinite; letters whose exponent alone pushes every
    tableau past ``max_exponent`` are dropped, which keeps the result exact
    in the requested range.
    """
    lam = Partition(lam)
    if not lam:
        return {0: 1}
    low = min(2 * j - 1 - 2 * shift.part(j - 1) for j in range(1, len(shift) + 2))
    others = (lam.size - 1) * min(low, 0)
    letters = []
    j = 1
    while True:
        e = 2 * j - 1 - 2 * shift.part(j - 1)
        if j > len(shift) and e + others > max_exponent:
            break
        letters.append(e)
        j += 1
    return skew_schur_on_alphabet(lam, Partition(), letters, max_exponent)


def _product(a: dict[int, int], b: dict[int, int], max_exponent: int) -> dict[int, int]:
    out: dict[int, int] = {}
    for ea, va in a.items():
        for eb, vb in b.items():
            if ea + eb <= max_exponent:
                out[ea + eb] = out.get(ea + eb, 0) + va * vb
    return {e: v for e, v in sorted(out.items()) if v}


def _shifted_low(lam: Partition, shift: Partition) -> int:
    low = min([2 * j - 1 - 2 * shift.part(j - 1) for j in range(1, len(shift) + 2)] + [0])
    return lam.size * low


def vertex_expression_one(mu_out: Partition, mu_in: Partition, max_exponent: int) -> dict[int, int]:
    """``s_{mu_out}(q^{rho+mu_in}) s_{mu_in^t}(q^rho)`` by monomial summation."""
    a = shifted_schur_series(mu_out, mu_in, max_exponent)
    b = shifted_schur_series(conjugate(mu_in), Partition(), max_exponent - _shifted_low(mu_out, mu_in))
    return _product(a, b, max_exponent)


def vertex_expression_two(mu_out: Partition, mu_in: Partition, max_exponent: int) -> dict[int, int]:
    """``q^{kappa(mu_in)/2} s_{mu_out}(q^rho) s_{mu_in}(q^{rho+mu_out})`` by monomial summation."""
    shift = kappa(mu_in)
    top = max_exponent - shift
    a = shifted_schur_series(mu_in, mu_out, top)
    b = shifted_schur_series(mu_out, Partition(), top - _shifted_low(mu_in, mu_out))
    return {e + shift: v for e, v in _product(a, b, top).items()}


# --------------------------------------------------------------- cosecant


def cosecant_series(n: int, order: int) -> GenusSeries:
    """``1 / (2 sin(n hbar / 2))`` up to ``hbar^order``.

    Obtained by inverting the Taylor series of ``sin`` term by term.
    """
    if n < 1:
        raise ValueError("n must be positive")
    # 2 sin(n h/2) = n h * (1 + sum_k a_k h^{2k})
    half = Fraction(n, 2)
    count = order // 2 + 2
    a = [Fraction((-1) ** k) * half ** (2 * k) / factorial(2 * k + 1) for k in range(count)]
    inv = [Fraction(1)]
    for k in range(1, count):
        inv.append(-sum(a[j] * inv[k - j] for j in range(1, k + 1)))
    terms = {}
    for k, c in enumerate(inv):
        e = 2 * k - 1
        if e <= order and c:
            terms[e] = GaussianRational(c / n, Fraction(0))
    return GenusSeries(0, terms, order)
