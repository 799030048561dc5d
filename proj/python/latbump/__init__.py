"""Bilinear lattice bump multipliers: symbols, norms, transference and scaling."""

from ._core import *  # noqa: F401,F403
from ._core import HypothesisError, SpaceKind, Side, BumpKind

INF = float("inf")


def tensor_bump(n=1, radius=0.4, center=None):
    """Tensor exp bump on R^{2n}, centered at the origin unless given."""
    return make_bump(BumpKind.tensor_exp, list(center or [0.0] * (2 * n)), [radius])  # noqa: F405
