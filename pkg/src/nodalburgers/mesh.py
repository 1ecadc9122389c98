"""Uniform space-time meshes for the cell-centered nodal solver.

A 1D mesh covers [x_lo, x_hi] with n_x cells of width 2a and marches in
time slabs of height 2*tau (= dt).  Slab ell covers [2*tau*ell,
2*tau*(ell+1)]; node-local coordinates run over [-a, +a] x [-tau, +tau].
Only uniform spacing is supported: the discrete time-coupling terms merge
the current and previous slab half-heights.
"""

from dataclasses import dataclass

import numpy as np

# Markers returned by neighbor() when the stencil leaves the domain.
LEFT = "left"
RIGHT = "right"
BOTTOM = "bottom"
TOP = "top"

_REL_TOL = 1e-12


@dataclass(frozen=True)
class NodeIndex:
    """0-based node address: spatial index i (and j in 2D), time slab ell."""

    i: int
    ell: int = 0
    j: int | None = None


@dataclass(frozen=True)
class Grid1D:
    x_lo: float
    x_hi: float
    n_x: int
    dt: float
    n_steps: int

    def __post_init__(self):
        if self.n_x < 3:
            raise ValueError(f"n_x must be >= 3 for the three-node stencil, got {self.n_x}")
        if self.x_hi <= self.x_lo:
            raise ValueError("domain extent must be positive")
        if self.dt <= 0 or self.n_steps < 1:
            raise ValueError("need dt > 0 and n_steps >= 1")
        length = self.x_hi - self.x_lo
        if abs(self.n_x * self.dx - length) > _REL_TOL * abs(length):
            raise ValueError("cell widths do not partition the domain")

    @property
    def dx(self) -> float:
        return (self.x_hi - self.x_lo) / self.n_x

    @property
    def a(self) -> float:
        """Cell half-width."""
        return 0.5 * self.dx

    @property
    def tau(self) -> float:
        """Slab half-height."""
        return 0.5 * self.dt

    @property
    def t_final(self) -> float:
        return self.dt * self.n_steps

    def cell_centers(self) -> np.ndarray:
        return self.x_lo + (2 * np.arange(self.n_x) + 1) * self.a

    def cell_edges(self) -> np.ndarray:
        return self.x_lo + np.arange(self.n_x + 1) * self.dx

    def node_center(self, idx: NodeIndex) -> tuple[float, float]:
        """(x_c, t_f) for the node; t_f is the end time of slab ell."""
        if not (0 <= idx.i < self.n_x and 0 <= idx.ell <= self.n_steps):
            raise IndexError(f"node {idx} outside grid")
        x_c = self.x_lo + (2 * idx.i + 1) * self.a
        t_f = self.dt * (idx.ell + 1)
        return x_c, t_f

    def neighbor(self, idx: NodeIndex, direction: str):
        """Adjacent NodeIndex, or a boundary marker when the stencil exits."""
        if direction == LEFT:
            return NodeIndex(idx.i - 1, idx.ell) if idx.i > 0 else LEFT
        if direction == RIGHT:
            return NodeIndex(idx.i + 1, idx.ell) if idx.i < self.n_x - 1 else RIGHT
        raise ValueError(f"unknown direction {direction!r}")


@dataclass(frozen=True)
class Grid2D:
    x_lo: float
    x_hi: float
    y_lo: float
    y_hi: float
    n_x: int
    n_y: int
    dt: float
    n_steps: int

    def __post_init__(self):
        if self.n_x < 3 or self.n_y < 3:
            raise ValueError("n_x and n_y must be >= 3")
        if self.x_hi <= self.x_lo or self.y_hi <= self.y_lo:
            raise ValueError("domain extents must be positive")
        if self.dt <= 0 or self.n_steps < 1:
            raise ValueError("need dt > 0 and n_steps >= 1")
        lx = self.x_hi - self.x_lo
        ly = self.y_hi - self.y_lo
        if abs(self.n_x * self.dx - lx) > _REL_TOL * abs(lx):
            raise ValueError("x cell widths do not partition the domain")
        if abs(self.n_y * self.dy - ly) > _REL_TOL * abs(ly):
            raise ValueError("y cell widths do not partition the domain")

    @property
    def dx(self) -> float:
        return (self.x_hi - self.x_lo) / self.n_x

    @property
    def dy(self) -> float:
        return (self.y_hi - self.y_lo) / self.n_y

    @property
    def a(self) -> float:
        return 0.5 * self.dx

    @property
    def b(self) -> float:
        return 0.5 * self.dy

    @property
    def tau(self) -> float:
        return 0.5 * self.dt

    @property
    def t_final(self) -> float:
        return self.dt * self.n_steps

    def cell_centers_x(self) -> np.ndarray:
        return self.x_lo + (2 * np.arange(self.n_x) + 1) * self.a

    def cell_centers_y(self) -> np.ndarray:
        return self.y_lo + (2 * np.arange(self.n_y) + 1) * self.b

    def node_center(self, idx: NodeIndex) -> tuple[float, float, float]:
        """(x_c, y_c, t_f) for node (i, j, ell)."""
        if idx.j is None:
            raise ValueError("2D node index requires j")
        if not (0 <= idx.i < self.n_x and 0 <= idx.j < self.n_y and 0 <= idx.ell <= self.n_steps):
            raise IndexError(f"node {idx} outside grid")
        x_c = self.x_lo + (2 * idx.i + 1) * self.a
        y_c = self.y_lo + (2 * idx.j + 1) * self.b
        t_f = self.dt * (idx.ell + 1)
        return x_c, y_c, t_f

    def neighbor(self, idx: NodeIndex, direction: str):
        if idx.j is None:
            raise ValueError("2D node index requires j")
        if direction == LEFT:
            return NodeIndex(idx.i - 1, idx.ell, idx.j) if idx.i > 0 else LEFT
        if direction == RIGHT:
            return NodeIndex(idx.i + 1, idx.ell, idx.j) if idx.i < self.n_x - 1 else RIGHT
        if direction == BOTTOM:
            return NodeIndex(idx.i, idx.ell, idx.j - 1) if idx.j > 0 else BOTTOM
        if direction == TOP:
            return NodeIndex(idx.i, idx.ell, idx.j + 1) if idx.j < self.n_y - 1 else TOP
        raise ValueError(f"unknown direction {direction!r}")
