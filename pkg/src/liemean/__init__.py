"""Universal averages in free Lie algebras.

Exact truncated BCH composition on the Lyndon basis, the closed-form
two-point mean, a graded fixed-point solver for the ``n``-point mean, and
numeric checks in sl(2, R) acting on the upper half-plane.
"""

from .bch import bch_compose, bch_multi, bch_universal
from .kernels import BACKEND
from .liealg import LieSeries, bracket, generators, permute, substitute, symmetrize
from .lyndon import generate_lyndon_words, standard_factorization, witt_dimension
from .mean import MeanRequest, evaluate_mean, mu2, mu_n, tn_apply

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "LieSeries",
    "MeanRequest",
    "bch_compose",
    "bch_multi",
    "bch_universal",
    "bracket",
    "evaluate_mean",
    "generate_lyndon_words",
    "generators",
    "mu2",
    "mu_n",
    "permute",
    "standard_factorization",
    "substitute",
    "symmetrize",
    "tn_apply",
    "witt_dimension",
]
