"""Finite-level Galois image computations."""

from ._galimage import *  # noqa: F401,F403
from ._galimage import CapExceeded, DomainError, FiniteMatrixGroup, HypothesisError  # noqa: F401

__version__ = "0.1.0"
