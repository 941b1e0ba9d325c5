"""Central finite differences for holomorphic functions of one complex step."""

from __future__ import annotations

from typing import Callable

import numpy as np


def central_diff(f: Callable, x, h: float = 1e-5, richardson: bool = True):
    """First derivative of ``f`` at ``x`` by the 4th-order five-point stencil.

    With ``richardson=True`` the stencil is evaluated at ``h`` and ``h/2`` and
    combined as ``(16 D(h/2) - D(h)) / 15``, cancelling the leading error term.
    ``f`` may return scalars or numpy arrays.
    """

    def d(s):
        return (f(x - 2 * s) - 8 * f(x - s) + 8 * f(x + s) - f(x + 2 * s)) / (12 * s)

    if not richardson:
        return d(h)
    return (16 * d(h / 2) - d(h)) / 15


def jacobian(f: Callable, x, h: float = 1e-5) -> np.ndarray:
    """Jacobian ``J[i, j] = d f_i / d x_j`` of a vector map, column by column."""
    x = np.asarray(x, dtype=complex)
    cols = []
    for j in range(x.size):
        e = np.zeros_like(x)
        e[j] = 1.0
        cols.append(np.asarray(central_diff(lambda s: np.asarray(f(x + s * e)), 0.0, h)))
    return np.stack(cols, axis=-1)
