import os

from hypothesis import settings, strategies as st

from looijenga.partitions import Partition
from looijenga.qalgebra import HalfLaurent, QRational

settings.register_profile("default", deadline=None, max_examples=60)
settings.register_profile("ci", deadline=None, max_examples=200)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@st.composite
def half_laurents(draw, max_terms=5, span=6, max_coeff=5):
    n = draw(st.integers(0, max_terms))
    expos = draw(st.lists(st.integers(-span, span), min_size=n, max_size=n, unique=True))
    coeffs = draw(st.lists(st.integers(-max_coeff, max_coeff).filter(bool), min_size=n, max_size=n))
    return HalfLaurent(dict(zip(expos, coeffs)))


@st.composite
def q_rationals(draw, **kw):
    num = draw(half_laurents(**kw))
    den = draw(half_laurents(**kw).filter(lambda p: not p.is_zero()))
    return QRational(num, den)


@st.composite
def partitions(draw, max_size=8):
    n = draw(st.integers(0, max_size))
    parts = []
    remaining = n
    while remaining:
        p = draw(st.integers(1, remaining if not parts else min(remaining, parts[-1])))
        parts.append(p)
        remaining -= p
    return Partition(parts)
