"""Radial and polar grids on the disk, with quadrature weights.

All radial integrals carry the polar measure ``r dr``.  Two node-weight
sets are provided: trapezoidal weights (the measure absorbed into the
nodes; exact for ``int r dr``) and the lumped piecewise-linear masses,
which are strictly positive including the origin node and are used to
normalise discrete gradients.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import GridError

# 5-point Gauss-Legendre rule mapped to [0, 1]; exact through degree 9,
# enough for the quartic potential of piecewise-linear profile data.
_x, _w = np.polynomial.legendre.leggauss(5)
GAUSS_XI = 0.5 * (_x + 1.0)
GAUSS_W = 0.5 * _w
del _x, _w


@dataclass(frozen=True)
class RadialGrid:
    """Strictly increasing sample radii ``0 = r_0 < ... < r_N = R``."""

    nodes: np.ndarray
    spacing: str = "custom"

    def __post_init__(self):
        nodes = np.asarray(self.nodes, dtype=float)
        object.__setattr__(self, "nodes", nodes)
        if nodes.ndim != 1 or nodes.size < 17:
            raise GridError("radial grid needs at least N >= 16 segments")
        if nodes[0] != 0.0:
            raise GridError("radial grid must start at r = 0")
        if np.any(np.diff(nodes) <= 0.0):
            raise GridError("radial nodes must be strictly increasing")
        if not math.isfinite(nodes[-1]):
            raise GridError("radial grid must end at a finite radius")

    @classmethod
    def uniform(cls, radius: float, n: int) -> "RadialGrid":
        """Uniform grid with ``n`` segments on ``[0, radius]``."""
        if radius <= 0.0:
            raise GridError(f"radius must be positive, got {radius}")
        return cls(np.linspace(0.0, radius, n + 1), spacing="uniform")

    @classmethod
    def graded(cls, radius: float, n: int, first_node: float = 1e-3) -> "RadialGrid":
        """Power-law grading toward the origin, ``r_i = R (i/n)^gamma``.

        The exponent is chosen so the first interior node lands at
        ``first_node * radius`` (never coarser than uniform).  The spacing
        varies smoothly, which keeps centred stencils second order and
        avoids the stiffness spikes of abrupt mesh-size jumps.
        """
        if radius <= 0.0:
            raise GridError(f"radius must be positive, got {radius}")
        if not 0.0 < first_node < 1.0:
            raise GridError("first_node must lie in (0, 1)")
        gamma = max(1.0, math.log(1.0 / first_node) / math.log(n))
        nodes = radius * (np.arange(n + 1) / n) ** gamma
        nodes[-1] = radius
        return cls(nodes, spacing="graded")

    @classmethod
    def for_defect(cls, radius: float, n: int, k: int) -> "RadialGrid":
        """Default grading: uniform for |k| = 1, geometric for steeper cores."""
        if abs(k) <= 1:
            return cls.uniform(radius, n)
        return cls.graded(radius, n)

    # -- derived quantities -------------------------------------------------

    @property
    def radius(self) -> float:
        return float(self.nodes[-1])

    @property
    def n_segments(self) -> int:
        return self.nodes.size - 1

    @property
    def h(self) -> np.ndarray:
        return np.diff(self.nodes)

    @property
    def weights(self) -> np.ndarray:
        """Trapezoidal weights for ``int_0^R f(r) r dr``; exact for f = 1."""
        r = self.nodes
        h = self.h
        w = np.zeros_like(r)
        w[:-1] += 0.5 * h * r[:-1]
        w[1:] += 0.5 * h * r[1:]
        return w

    @property
    def node_masses(self) -> np.ndarray:
        """Lumped hat-function masses ``int phi_i(r) r dr``; all positive."""
        r = self.nodes
        h = self.h
        m = np.zeros_like(r)
        m[:-1] += h * (2.0 * r[:-1] + r[1:]) / 6.0
        m[1:] += h * (r[:-1] + 2.0 * r[1:]) / 6.0
        return m

    def gauss_points(self):
        """Per-segment Gauss radii and weights for ``int f(r) r dr``.

        Returns ``(rg, wg)`` of shape ``(N, 5)``; ``wg`` already contains
        the segment length and the measure factor ``r``.
        """
        h = self.h
        rg = self.nodes[:-1, None] + h[:, None] * GAUSS_XI[None, :]
        wg = h[:, None] * GAUSS_W[None, :] * rg
        return rg, wg

    def interpolate(self, values, rg):
        """Piecewise-linear interpolation of node data to per-segment radii.

        ``values`` has leading axis ``N + 1``; ``rg`` is ``(N, G)``.  The
        result has shape ``(N, G, *values.shape[1:])``.
        """
        values = np.asarray(values, dtype=float)
        t = (rg - self.nodes[:-1, None]) / self.h[:, None]
        t = t.reshape(t.shape + (1,) * (values.ndim - 1))
        left = values[:-1][:, None]
        right = values[1:][:, None]
        return left * (1.0 - t) + right * t

    def same_nodes(self, other: "RadialGrid") -> bool:
        return self.nodes.shape == other.nodes.shape and bool(
            np.array_equal(self.nodes, other.nodes)
        )


@dataclass(frozen=True)
class PolarGrid:
    """Tensor-product grid: shared radial nodes x uniform angles on [0, 2pi)."""

    radial: RadialGrid
    m: int = 256

    def __post_init__(self):
        if self.m < 64 or self.m % 2 != 0:
            raise GridError(f"angular count must be even and >= 64, got {self.m}")

    @property
    def phis(self) -> np.ndarray:
        return (2.0 * np.pi / self.m) * np.arange(self.m)

    @property
    def dphi(self) -> float:
        return 2.0 * np.pi / self.m
