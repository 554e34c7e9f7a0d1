"""Closed-form machinery for the vanishing-elastic-constant limit.

As ``L -> 0`` the energy Gamma-converges to Dirichlet minimisation under
the pointwise constraint ``|Q|^2 = (2/3) s_plus^2``; within the two-mode
ansatz the constraint is absorbed by the angle substitution

    u = sqrt(2/3) s_plus sin(psi),   v = -sqrt(2/3) s_plus cos(psi),

whose stationary profiles obey a pendulum-type first integral and are
known in closed form.  Two biaxial branches exist for every index, with
``tan(psi/2) = (r/R)^{+-|k|} / sqrt(3)``; for even index there is a third,
uniaxial solution whose director escapes out of plane at the core, and a
general meromorphic-function generator of unit-norm harmonic maps.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    ConstraintViolated,
    GridError,
    InvalidBranch,
    InvalidParams,
    OddKForUniaxial,
)
from .field import (
    Field2D,
    dirichlet_quadrature,
    lift,
    polar_gradient_sq,
    polar_laplacian,
    ResidualField,
)
from .grid import GAUSS_W, GAUSS_XI, PolarGrid, RadialGrid
from .params import ModelParams
from .reduced import Profile
from .tensor import QTensor, frob_sq

_SQRT23 = math.sqrt(2.0 / 3.0)
_SQRT2 = math.sqrt(2.0)


class Branch(enum.Enum):
    """Selector for the explicit limit solutions."""

    MINUS = "minus"
    PLUS = "plus"
    UNIAXIAL_ESCAPE = "uniaxial"


def explicit_arrays(branch, k: int, s_plus: float, nodes: np.ndarray):
    """Raw ``(u, v)`` samples of an explicit biaxial branch.

    ``branch`` is a :class:`Branch` or its string value.  No parameter
    validation; :func:`explicit_profile` is the checked entry point.
    """
    branch = Branch(branch)
    kk = abs(k)
    r = np.asarray(nodes, dtype=float)
    radius = float(r[-1])
    rk = (r / radius) ** kk  # normalised to avoid overflow for large k
    if branch is Branch.MINUS:
        den = rk * rk + 3.0
        u = 2.0 * _SQRT2 * s_plus * rk / den
        v = _SQRT23 * s_plus * (rk * rk - 3.0) / den
    elif branch is Branch.PLUS:
        den = 3.0 * rk * rk + 1.0
        u = 2.0 * _SQRT2 * s_plus * rk / den
        v = _SQRT23 * s_plus * (1.0 - 3.0 * rk * rk) / den
    else:
        raise InvalidBranch("explicit (u, v) profiles exist for MINUS and PLUS only")
    return u, v


def explicit_profile(branch, params: ModelParams, grid: RadialGrid) -> Profile:
    """Sample an explicit limit branch on the grid.

    Requires ``b2 = 0`` (the limit constraint then reads
    ``u^2 + v^2 = a2/c2 = (2/3) s_plus^2``).  The uniaxial escape branch is
    not expressible through ``(u, v)``; ask for its field directly.
    """
    if params.b2 != 0.0:
        raise InvalidParams("explicit limit profiles require b2 = 0")
    branch = Branch(branch)
    if branch is Branch.UNIAXIAL_ESCAPE:
        raise InvalidBranch(
            "the uniaxial escape solution leaves the two-mode ansatz; "
            "use uniaxial_escape_field"
        )
    u, v = explicit_arrays(branch, params.k, params.s_plus, grid.nodes)
    return Profile(grid, u, v)


# ---------------------------------------------------------------------------
# angle parametrisation
# ---------------------------------------------------------------------------

@dataclass
class PsiProfile:
    """Samples of the constraint angle ``psi(r)`` on a radial grid."""

    grid: RadialGrid
    psi: np.ndarray

    def __post_init__(self):
        self.psi = np.asarray(self.psi, dtype=float)
        if self.psi.shape != self.grid.nodes.shape:
            raise GridError("psi samples do not match the grid")


def psi_of_branch(branch, params: ModelParams, grid: RadialGrid) -> PsiProfile:
    """Angle profiles ``tan(psi/2) = (r/R)^{-+|k|} / sqrt(3)`` of the branches.

    Endpoint values use the analytic limits: ``psi(0)`` is 0 (MINUS) or pi
    (PLUS), and ``psi(R) = pi/3`` exactly for both.
    """
    if params.b2 != 0.0:
        raise InvalidParams("the angle parametrisation requires b2 = 0")
    branch = Branch(branch)
    kk = abs(params.k)
    rho = grid.nodes / grid.radius
    psi = np.empty_like(rho)
    if branch is Branch.MINUS:
        psi[:] = 2.0 * np.arctan(rho**kk / math.sqrt(3.0))
        psi[0] = 0.0
    elif branch is Branch.PLUS:
        psi[0] = math.pi
        psi[1:] = 2.0 * np.arctan(rho[1:] ** (-kk) / math.sqrt(3.0))
    else:
        raise InvalidBranch("no angle parametrisation for the uniaxial branch")
    psi[-1] = math.pi / 3.0
    return PsiProfile(grid, psi)


def profile_from_psi(psi_profile: PsiProfile, params: ModelParams) -> Profile:
    """Map an angle profile back to ``(u, v)`` samples."""
    amp = _SQRT23 * params.s_plus
    return Profile(
        psi_profile.grid,
        amp * np.sin(psi_profile.psi),
        -amp * np.cos(psi_profile.psi),
    )


def _first_derivative_o4(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Fourth-order FD first derivative at interior nodes (5-node windows).

    Weights come from a local polynomial fit in scaled coordinates, so
    nonuniform grids are handled and the Vandermonde systems stay well
    conditioned.
    """
    n = x.size
    first = np.clip(np.arange(1, n - 1) - 2, 0, n - 5)
    cols = first[:, None] + np.arange(5)[None, :]
    dx = x[cols] - x[1:-1][:, None]
    scale = np.max(np.abs(dx), axis=1, keepdims=True)
    t = dx / scale
    powers = t[..., None] ** np.arange(5)[None, None, :]  # (m, 5 nodes, 5 powers)
    rhs = np.zeros((n - 2, 5, 1))
    rhs[:, 1, 0] = 1.0
    w = np.linalg.solve(np.swapaxes(powers, 1, 2), rhs)[..., 0] / scale
    return np.sum(w * y[cols], axis=1)


def first_integral_defect(psi_profile: PsiProfile, k: int) -> np.ndarray:
    """Per-node defect ``alpha(r) = sin^2(psi) - r^2 psi'^2 / k^2``.

    Exact limit solutions give zero, so the samples measure deviation from
    the pendulum first integral.  The derivative uses fourth-order FD
    weights: a second-order stencil's own truncation
    (``~ h^2 r^2 psi' psi'''``) would swamp the defect of interest on the
    steeper branch at practical resolutions.
    """
    r = psi_profile.grid.nodes
    dpsi = _first_derivative_o4(r, psi_profile.psi)
    ri = r[1:-1]
    s = np.sin(psi_profile.psi[1:-1])
    return s * s - (ri * dpsi) ** 2 / float(k * k)


# ---------------------------------------------------------------------------
# constrained Dirichlet energy
# ---------------------------------------------------------------------------

@dataclass
class E0Result:
    """Extended-real value of the constrained limit energy.

    ``finite`` is False when the input violates the norm constraint, in
    which case ``value`` is None (the infinite-energy sentinel) and
    ``max_deviation`` reports the largest relative constraint violation.
    """

    finite: bool
    value: float | None
    max_deviation: float


def e0_energy(p, params: ModelParams, strict: bool = False) -> E0Result:
    """Constrained Dirichlet energy (per unit angle) of a limit profile.

    Accepts a :class:`~qdefect.reduced.Profile` (checked against the
    constraint ``u^2 + v^2 = (2/3) s_plus^2`` to 1e-8 relative) or a
    :class:`PsiProfile` (constraint built in).  Constraint violations
    yield the infinite sentinel, or :class:`ConstraintViolated` when
    ``strict``.
    """
    if isinstance(p, PsiProfile):
        grid = p.grid
        h = grid.h
        dpsi = np.diff(p.psi) / h
        k2 = float(params.k * params.k)
        total = 0.0
        for g in range(GAUSS_XI.size):
            rg = grid.nodes[:-1] + h * GAUSS_XI[g]
            xi = GAUSS_XI[g]
            psig = (1.0 - xi) * p.psi[:-1] + xi * p.psi[1:]
            dens = 0.5 * (rg * dpsi**2 + k2 * np.sin(psig) ** 2 / rg)
            total += float(np.sum(h * GAUSS_W[g] * dens))
        return E0Result(finite=True, value=params.limit_norm_sq * total, max_deviation=0.0)

    if not isinstance(p, Profile):
        raise InvalidParams(f"expected Profile or PsiProfile, got {type(p)!r}")
    target = params.limit_norm_sq
    dev = float(np.max(np.abs(p.norm_sq_samples() - target))) / target
    if dev > 1e-8:
        if strict:
            raise ConstraintViolated("limit energy needs |Q|^2 = (2/3) s_plus^2", dev)
        return E0Result(finite=False, value=None, max_deviation=dev)
    grid = p.grid
    h = grid.h
    du = np.diff(p.u) / h
    dv = np.diff(p.v) / h
    k2 = float(params.k * params.k)
    rg, wg = grid.gauss_points()
    ug = grid.interpolate(p.u, rg)
    dens = 0.5 * (du * du + dv * dv)[:, None] + 0.5 * k2 * ug * ug / (rg * rg)
    return E0Result(finite=True, value=float(np.sum(wg * dens)), max_deviation=dev)


@dataclass
class DirichletEnergy:
    """Closed-form Dirichlet energy of an explicit branch plus a quadrature check."""

    closed_form: float
    quadrature: float

    @property
    def relative_error(self) -> float:
        return abs(self.quadrature - self.closed_form) / abs(self.closed_form)


def closed_form_dirichlet(branch, params: ModelParams) -> float:
    """Exact 2D Dirichlet energies: ``(2/3)|k| pi s+^2`` (MINUS) else ``2|k| pi s+^2``."""
    branch = Branch(branch)
    kk = abs(params.k)
    s2 = params.s_plus**2
    if branch is Branch.MINUS:
        return (2.0 / 3.0) * kk * math.pi * s2
    if branch is Branch.UNIAXIAL_ESCAPE and params.k % 2 != 0:
        raise OddKForUniaxial("the uniaxial escape solution needs even k")
    return 2.0 * kk * math.pi * s2


def dirichlet_energy_2d(
    branch, params: ModelParams, n_r: int = 256, m_phi: int = 256
) -> DirichletEnergy:
    """Closed-form 2D Dirichlet energy with an independent quadrature check.

    The quadrature samples the explicit field on an ``n_r x m_phi`` polar
    grid and integrates with the classic finite-difference scheme; it
    approaches the closed form at second order.
    """
    if params.b2 != 0.0:
        raise InvalidParams("explicit limit fields require b2 = 0")
    branch = Branch(branch)
    closed = closed_form_dirichlet(branch, params)
    pg = PolarGrid(RadialGrid.uniform(params.R, n_r), m_phi)
    if branch is Branch.UNIAXIAL_ESCAPE:
        rmat = pg.radial.nodes[:, None]
        pmat = pg.phis[None, :]
        vals = uniaxial_escape_components(rmat, pmat, params)
        field = Field2D(pg, vals)
    else:
        field = lift(explicit_profile(branch, params, pg.radial), params.k, pg)
    return DirichletEnergy(closed_form=closed, quadrature=dirichlet_quadrature(field))


# ---------------------------------------------------------------------------
# uniaxial escape and the meromorphic generator
# ---------------------------------------------------------------------------

def uniaxial_escape_components(r, phi, params: ModelParams) -> np.ndarray:
    """Components of the out-of-plane escape solution (even k only).

    ``U = s_plus (m x m - I/3)`` where the unit director ``m`` tilts from
    the planar boundary winding to ``e3`` at the core.
    """
    if params.k % 2 != 0:
        raise OddKForUniaxial("the uniaxial escape solution needs even k")
    kk = abs(params.k)
    r = np.asarray(r, dtype=float)
    phi = np.asarray(phi, dtype=float)
    rho_half = (r / params.R) ** (kk // 2)
    rho_k = rho_half * rho_half
    den = 1.0 + rho_k
    planar = 2.0 * rho_half / den
    half = 0.5 * params.k * phi
    m1 = planar * np.cos(half)
    m2 = planar * np.sin(half)
    m3 = (1.0 - rho_k) / den
    s = params.s_plus
    m1, m2, m3 = np.broadcast_arrays(m1, m2, m3)
    return np.stack(
        [
            s * (m1 * m1 - 1.0 / 3.0),
            s * m1 * m2,
            s * m1 * m3,
            s * (m2 * m2 - 1.0 / 3.0),
            s * m2 * m3,
        ],
        axis=-1,
    )


def uniaxial_escape_field(r: float, phi: float, params: ModelParams) -> QTensor:
    """Pointwise evaluation of the escape solution."""
    return QTensor(uniaxial_escape_components(float(r), float(phi), params))


def meromorphic_harmonic_map(numer, denom, x, y):
    """Unit-sphere harmonic map from a rational function of ``x + i y``.

    ``numer`` and ``denom`` are complex polynomial coefficient sequences
    (highest degree first, as for ``numpy.polyval``).  Writing the value
    projectively avoids dividing at poles: with ``w = numer(z)`` and
    ``d = denom(z)``,

        m = (2 Re(w conj(d)), 2 Im(w conj(d)), |d|^2 - |w|^2) / (|w|^2 + |d|^2),

    so poles land on ``m = (0, 0, -1)`` by continuity.  Returns
    ``(m, U)`` where ``U = sqrt(3/2)(m x m - I/3)`` has unit norm;
    components broadcast over array-valued coordinates.  A common root of
    both polynomials (a genuinely undefined 0/0 point) maps to
    ``(0, 0, 1)`` by the ``f = 0`` convention.
    """
    z = np.asarray(x, dtype=float) + 1j * np.asarray(y, dtype=float)
    w = np.polyval(np.asarray(numer, dtype=complex), z)
    d = np.polyval(np.asarray(denom, dtype=complex), z)
    wd = w * np.conj(d)
    total = (w * np.conj(w)).real + (d * np.conj(d)).real
    safe = np.where(total > 0.0, total, 1.0)
    m1 = np.where(total > 0.0, 2.0 * wd.real / safe, 0.0)
    m2 = np.where(total > 0.0, 2.0 * wd.imag / safe, 0.0)
    m3 = np.where(total > 0.0, ((d * np.conj(d)).real - (w * np.conj(w)).real) / safe, 1.0)
    m = np.stack([m1, m2, m3], axis=-1)
    amp = math.sqrt(1.5)
    u = np.stack(
        [
            amp * (m1 * m1 - 1.0 / 3.0),
            amp * m1 * m2,
            amp * m1 * m3,
            amp * (m2 * m2 - 1.0 / 3.0),
            amp * m2 * m3,
        ],
        axis=-1,
    )
    return m, u


def sphere_map_tension_residual(numer, denom, x, y, step: float):
    """Discrete tension field ``lap(m) + |grad m|^2 m`` of the rational map.

    Five-point Cartesian stencil with spacing ``step``; harmonic maps give
    residuals decaying at second order away from poles.
    """
    def mvec(xx, yy):
        return meromorphic_harmonic_map(numer, denom, xx, yy)[0]

    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    mc = mvec(x, y)
    mxp = mvec(x + step, y)
    mxm = mvec(x - step, y)
    myp = mvec(x, y + step)
    mym = mvec(x, y - step)
    lap = (mxp + mxm + myp + mym - 4.0 * mc) / step**2
    gx = (mxp - mxm) / (2.0 * step)
    gy = (myp - mym) / (2.0 * step)
    grad_sq = np.sum(gx * gx + gy * gy, axis=-1, keepdims=True)
    return lap + grad_sq * mc


# ---------------------------------------------------------------------------
# harmonic-map residual on the disk
# ---------------------------------------------------------------------------

def hm_residual(
    source, params: ModelParams, grid: PolarGrid, constraint_tol: float = 1e-8
) -> ResidualField:
    """Residual ``lap Q + (3/(2 s+^2)) |grad Q|^2 Q`` of the limit problem.

    ``source`` is a :class:`~qdefect.field.Field2D` on ``grid`` or a
    vectorised sampler ``f(r, phi) -> (..., 5)``.  The field must satisfy
    the norm constraint to ``constraint_tol`` relative, else
    :class:`ConstraintViolated`.  Five-point polar stencil on interior
    rings; boundary data mismatches are not this function's concern.
    """
    if isinstance(source, Field2D):
        if not source.grid.radial.same_nodes(grid.radial) or source.grid.m != grid.m:
            raise GridError("field grid does not match the requested grid")
        values = source.values
    else:
        rmat = grid.radial.nodes[:, None]
        pmat = grid.phis[None, :]
        values = np.asarray(source(rmat, pmat), dtype=float)
        expected = (grid.radial.nodes.size, grid.m, 5)
        if values.shape != expected:
            raise GridError(f"sampler returned {values.shape}, expected {expected}")

    target = params.limit_norm_sq
    dev = float(np.max(np.abs(frob_sq(values) - target))) / target
    if dev > constraint_tol:
        raise ConstraintViolated("harmonic-map residual needs |Q|^2 = (2/3) s+^2", dev)

    lap = polar_laplacian(values, grid)
    gsq = polar_gradient_sq(values, grid)
    res = lap + (1.5 / params.s_plus**2) * gsq[..., None] * values[1:-1]
    return ResidualField(rings=grid.radial.nodes[1:-1].copy(), values=res)
