from fractions import Fraction

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from liemean.liealg import LieSeries
from liemean.lyndon import generate_lyndon_words

settings.register_profile(
    "default",
    deadline=None,
    max_examples=40,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")

small_fractions = st.builds(
    Fraction,
    st.integers(-5, 5),
    st.integers(1, 6),
)


@st.composite
def lie_series(draw, n=3, max_degree=4, max_terms=5):
    words = generate_lyndon_words(n, max_degree)
    picked = draw(st.lists(st.sampled_from(words), max_size=max_terms, unique=True))
    return LieSeries(n, max_degree, {w: draw(small_fractions) for w in picked})


def brute_force_lyndon(n, degree):
    """All words of the given degree that are strictly smaller than each proper rotation."""
    from itertools import product

    out = []
    for w in product(range(1, n + 1), repeat=degree):
        if all(w < w[i:] + w[:i] for i in range(1, degree)):
            out.append(w)
    return out
