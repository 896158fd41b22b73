"""Finite-difference operators on a uniform 1D grid of interior nodes.

Boundary nodes ``x = 0`` and ``x = L`` carry homogeneous essential data and
are not unknowns.  Second differences at the boundary nodes use a mirrored
ghost node, which encodes a vanishing first derivative (clamped closure).

The operators are built from two primitives so that discrete summation by
parts holds exactly:

* ``G``: forward difference from nodes to the N+1 cells,
* ``L``: second difference at all N+2 nodes with clamped closure,

with ``D2 = -G^T G`` and ``D4 = L^T diag(w) L`` where ``w`` are trapezoid
weights.  ``D4`` coincides with the five-point biharmonic stencil plus
ghost-node closure.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
import scipy.sparse as sp

from .errors import ConfigurationError

MIN_NODES = 8


@dataclass(frozen=True)
class Grid1D:
    """Interior nodes ``x_j = j*dx`` for ``j = 1..N`` on ``[0, L]``."""

    N: int
    L: float = 1.0
    dx: float = field(init=False)

    def __post_init__(self):
        if int(self.N) != self.N or self.N < MIN_NODES:
            raise ConfigurationError(f"grid needs at least {MIN_NODES} interior nodes, got {self.N}")
        if not (np.isfinite(self.L) and self.L > 0):
            raise ConfigurationError(f"domain length must be positive, got {self.L}")
        object.__setattr__(self, "N", int(self.N))
        object.__setattr__(self, "L", float(self.L))
        object.__setattr__(self, "dx", self.L / (self.N + 1))

    @property
    def x(self) -> np.ndarray:
        return self.dx * np.arange(1, self.N + 1)


class Operators:
    """Sparse difference matrices for one grid."""

    def __init__(self, grid: Grid1D):
        self.grid = grid
        n, h = grid.N, grid.dx
        self.n = n
        self.h = h
        # cells c = 0..n between nodes c and c+1 (node 0 and n+1 are boundary)
        self.G = sp.diags([np.ones(n), -np.ones(n)], [0, -1], shape=(n + 1, n), format="csr") / h
        Lm = sp.lil_matrix((n + 2, n))
        Lm[0, 0] = 2.0
        Lm[n + 1, n - 1] = 2.0
        for j in range(n):
            Lm[j + 1, j] = -2.0
            if j > 0:
                Lm[j + 1, j - 1] = 1.0
            if j < n - 1:
                Lm[j + 1, j + 1] = 1.0
        self.L = Lm.tocsr() / h**2
        w = np.ones(n + 2)
        w[0] = w[-1] = 0.5
        self.w = w

    @cached_property
    def D1(self) -> sp.csr_matrix:
        n = self.n
        return sp.diags([np.ones(n - 1), -np.ones(n - 1)], [1, -1], format="csr") / (2 * self.h)

    @cached_property
    def D2(self) -> sp.csr_matrix:
        return (-(self.G.T @ self.G)).tocsr()

    @cached_property
    def D4(self) -> sp.csr_matrix:
        return (self.L.T @ sp.diags(self.w) @ self.L).tocsr()

    @cached_property
    def D3u(self) -> sp.csr_matrix:
        """Third derivative acting on the potential in the displacement equation."""
        return (self.D1 @ self.D2).tocsr()

    @cached_property
    def D3phi(self) -> sp.csr_matrix:
        """Third derivative acting on the displacement in the potential equation."""
        return (self.D2 @ self.D1).tocsr()

    # quadrature helpers, all scaled by the grid spacing
    def node_sum(self, a: np.ndarray, b: np.ndarray | None = None) -> float:
        b = a if b is None else b
        return self.h * float(a @ b)

    def grad_sq(self, a: np.ndarray) -> float:
        g = self.G @ a
        return self.h * float(g @ g)

    def curv_sq(self, a: np.ndarray) -> float:
        c = self.L @ a
        return self.h * float(self.w @ (c * c))
