"""Material and geometry parameters of the Landau-de Gennes model.

The bulk potential ``f(Q) = -a2/2 |Q|^2 - b2/3 tr(Q^3) + c2/4 |Q|^4`` is
minimised over uniaxial tensors ``s (n x n - I/3)`` at the equilibrium
order parameter ``s_plus``; that value fixes the amplitude of the Dirichlet
boundary data on the disk of radius ``R``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import InvalidParams


def equilibrium_order_parameter(a2: float, b2: float, c2: float) -> float:
    """Positive minimiser of the bulk potential over uniaxial tensors."""
    return (b2 + math.sqrt(b2 * b2 + 24.0 * a2 * c2)) / (4.0 * c2)


@dataclass(frozen=True)
class ModelParams:
    """Physical and geometric parameters plus the derived ``s_plus``.

    Parameters
    ----------
    a2, b2, c2 : float
        Bulk potential coefficients; ``a2, c2 > 0`` and ``b2 >= 0``.
    L : float
        Elastic constant, ``> 0``.  The value ``0`` is accepted as the
        symbolic harmonic-map limit; operations that need ``L > 0``
        reject it explicitly.
    R : float
        Disk radius, ``0 < R < inf``.
    k : int
        Defect index numerator (the director winds by ``k/2`` turns);
        any nonzero integer.
    s_plus : float, optional
        Stored equilibrium order parameter.  Recomputed from the
        coefficients when omitted; when given it must agree with the
        recomputed value to 1e-14 relative.
    """

    a2: float
    b2: float
    c2: float
    L: float
    R: float
    k: int
    s_plus: float = field(default=math.nan)

    def __post_init__(self):
        if not (self.a2 > 0.0 and math.isfinite(self.a2)):
            raise InvalidParams(f"a2 must be positive, got {self.a2}")
        if not (self.c2 > 0.0 and math.isfinite(self.c2)):
            raise InvalidParams(f"c2 must be positive, got {self.c2}")
        if not (self.b2 >= 0.0 and math.isfinite(self.b2)):
            raise InvalidParams(f"b2 must be nonnegative, got {self.b2}")
        if not (self.L >= 0.0 and math.isfinite(self.L)):
            raise InvalidParams(f"L must be >= 0 and finite, got {self.L}")
        if not (0.0 < self.R < math.inf):
            raise InvalidParams(f"R must satisfy 0 < R < inf, got {self.R}")
        if not isinstance(self.k, int) or self.k == 0:
            raise InvalidParams(
                f"k must be a nonzero integer (k in Z \\ {{0}}), got {self.k!r}"
            )
        s = equilibrium_order_parameter(self.a2, self.b2, self.c2)
        if math.isnan(self.s_plus):
            object.__setattr__(self, "s_plus", s)
        elif abs(self.s_plus - s) > 1e-14 * abs(s):
            raise InvalidParams(
                f"stored s_plus={self.s_plus!r} disagrees with recomputed {s!r}"
            )

    @property
    def boundary_u(self) -> float:
        """Planar-mode amplitude of the boundary data, ``s_plus / sqrt(2)``."""
        return self.s_plus / math.sqrt(2.0)

    @property
    def boundary_v(self) -> float:
        """Out-of-plane-mode amplitude of the boundary data, ``-s_plus / sqrt(6)``."""
        return -self.s_plus / math.sqrt(6.0)

    @property
    def limit_norm_sq(self) -> float:
        """Pointwise norm constraint ``(2/3) s_plus^2`` of the L -> 0 limit."""
        return (2.0 / 3.0) * self.s_plus * self.s_plus

    def with_updates(self, **kwargs) -> "ModelParams":
        """Copy with replaced fields; ``s_plus`` is recomputed unless given."""
        data = {
            "a2": self.a2, "b2": self.b2, "c2": self.c2,
            "L": self.L, "R": self.R, "k": self.k,
        }
        data.update(kwargs)
        return ModelParams(**data)
