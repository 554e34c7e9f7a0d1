"""Algebra of the Q-tensor state space (3x3 real symmetric traceless).

A tensor is stored through its five independent components in the fixed
order ``(q11, q12, q13, q22, q23)``; the remaining entry is implied by
``q33 = -q11 - q22``, so symmetry and tracelessness hold by construction.
Module-level helpers operate on arrays of shape ``(..., 5)`` so whole
fields can be processed without materialising 3x3 matrices.

The two-mode orthonormal frame used throughout the package is

* ``F_n(phi) = sqrt(2) (n x n - I2/2)`` with the planar director
  ``n = (cos(k phi / 2), sin(k phi / 2), 0)``,
* ``F_3 = sqrt(3/2) (e3 x e3 - I/3)``,

both unit-norm and mutually orthogonal under the Frobenius product.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import InvalidParams
from .params import ModelParams

COMPONENT_NAMES = ("q11", "q12", "q13", "q22", "q23")

_SQRT2 = math.sqrt(2.0)
_SQRT6 = math.sqrt(6.0)

# F_3 = sqrt(3/2) diag(-1/3, -1/3, 2/3) = diag(-1, -1, 2)/sqrt(6)
F3_COMPONENTS = np.array([-1.0 / _SQRT6, 0.0, 0.0, -1.0 / _SQRT6, 0.0])


# ---------------------------------------------------------------------------
# vectorized component helpers
# ---------------------------------------------------------------------------

def frob_sq(c):
    """Squared Frobenius norm ``|Q|^2 = tr(Q^2)`` for components ``(..., 5)``."""
    c = np.asarray(c)
    q11, q12, q13, q22, q23 = np.moveaxis(c, -1, 0)
    q33 = -q11 - q22
    return q11 * q11 + q22 * q22 + q33 * q33 + 2.0 * (q12 * q12 + q13 * q13 + q23 * q23)


def frob_dot(a, b):
    """Frobenius inner product ``tr(A B)`` for component arrays."""
    a = np.asarray(a)
    b = np.asarray(b)
    a11, a12, a13, a22, a23 = np.moveaxis(a, -1, 0)
    b11, b12, b13, b22, b23 = np.moveaxis(b, -1, 0)
    return (
        a11 * b11 + a22 * b22 + (a11 + a22) * (b11 + b22)
        + 2.0 * (a12 * b12 + a13 * b13 + a23 * b23)
    )


def det3(c):
    """Determinant of the reconstructed matrix."""
    c = np.asarray(c)
    q11, q12, q13, q22, q23 = np.moveaxis(c, -1, 0)
    q33 = -q11 - q22
    return (
        q11 * (q22 * q33 - q23 * q23)
        - q12 * (q12 * q33 - q23 * q13)
        + q13 * (q12 * q23 - q22 * q13)
    )


def trace_cubed(c):
    """``tr(Q^3)``; equals ``3 det(Q)`` because the trace vanishes."""
    return 3.0 * det3(c)


def deviatoric_square(c):
    """Components of ``Q^2 - |Q|^2/3 I`` (the traceless part of ``Q^2``)."""
    c = np.asarray(c)
    q11, q12, q13, q22, q23 = np.moveaxis(c, -1, 0)
    q33 = -q11 - q22
    s11 = q11 * q11 + q12 * q12 + q13 * q13
    s12 = q11 * q12 + q12 * q22 + q13 * q23
    s13 = q11 * q13 + q12 * q23 + q13 * q33
    s22 = q12 * q12 + q22 * q22 + q23 * q23
    s23 = q12 * q13 + q22 * q23 + q23 * q33
    third = (frob_sq(c)) / 3.0
    return np.stack([s11 - third, s12, s13, s22 - third, s23], axis=-1)


def bulk_density(c, params: ModelParams):
    """Bulk energy density ``f(Q)`` evaluated on component arrays."""
    t = frob_sq(c)
    return (
        -0.5 * params.a2 * t
        - (params.b2 / 3.0) * trace_cubed(c)
        + 0.25 * params.c2 * t * t
    )


def components_to_matrix(c):
    """Reconstruct 3x3 matrices from components ``(..., 5) -> (..., 3, 3)``."""
    c = np.asarray(c)
    q11, q12, q13, q22, q23 = np.moveaxis(c, -1, 0)
    q33 = -q11 - q22
    rows = np.stack(
        [
            np.stack([q11, q12, q13], axis=-1),
            np.stack([q12, q22, q23], axis=-1),
            np.stack([q13, q23, q33], axis=-1),
        ],
        axis=-2,
    )
    return rows


def matrix_to_components(m, check=True, tol=4.0):
    """Extract components from a symmetric traceless 3x3 matrix.

    With ``check`` enabled the matrix must be symmetric and traceless to
    within ``tol`` ulps of its largest entry.
    """
    m = np.asarray(m, dtype=float)
    if m.shape[-2:] != (3, 3):
        raise InvalidParams(f"expected (..., 3, 3) matrix, got shape {m.shape}")
    if check:
        scale = np.max(np.abs(m), axis=(-2, -1))
        bound = tol * np.spacing(np.maximum(scale, 1e-300))
        if np.any(np.abs(m - np.swapaxes(m, -2, -1)) > 2 * bound[..., None, None]):
            raise InvalidParams("matrix is not symmetric")
        if np.any(np.abs(m[..., 0, 0] + m[..., 1, 1] + m[..., 2, 2]) > bound):
            raise InvalidParams("matrix is not traceless")
    return np.stack(
        [m[..., 0, 0], m[..., 0, 1], m[..., 0, 2], m[..., 1, 1], m[..., 1, 2]],
        axis=-1,
    )


# ---------------------------------------------------------------------------
# QTensor value type
# ---------------------------------------------------------------------------

class QTensor:
    """A single point value in the state space, wrapping five components."""

    __slots__ = ("components",)

    def __init__(self, components):
        c = np.asarray(components, dtype=float)
        if c.shape != (5,):
            raise InvalidParams(f"QTensor needs 5 components, got shape {c.shape}")
        self.components = c

    @classmethod
    def from_matrix(cls, m, check=True):
        return cls(matrix_to_components(m, check=check))

    @classmethod
    def zero(cls):
        return cls(np.zeros(5))

    def matrix(self):
        return components_to_matrix(self.components)

    def norm_sq(self):
        return float(frob_sq(self.components))

    def norm(self):
        return math.sqrt(self.norm_sq())

    def dot(self, other: "QTensor") -> float:
        return float(frob_dot(self.components, other.components))

    def __add__(self, other):
        return QTensor(self.components + other.components)

    def __sub__(self, other):
        return QTensor(self.components - other.components)

    def __mul__(self, scalar):
        return QTensor(self.components * float(scalar))

    __rmul__ = __mul__

    def __neg__(self):
        return QTensor(-self.components)

    def __repr__(self):
        vals = ", ".join(f"{n}={v:.6g}" for n, v in zip(COMPONENT_NAMES, self.components))
        return f"QTensor({vals})"


# ---------------------------------------------------------------------------
# frames and boundary data
# ---------------------------------------------------------------------------

def frame_fn_components(phi, k: int):
    """Components of ``F_n(phi)`` for scalar or array ``phi``."""
    phi = np.asarray(phi, dtype=float)
    ck = np.cos(k * phi) / _SQRT2
    sk = np.sin(k * phi) / _SQRT2
    z = np.zeros_like(ck)
    return np.stack([ck, sk, z, -ck, z], axis=-1)


def frame_fn(phi: float, k: int) -> QTensor:
    """Planar frame tensor ``F_n(phi) = sqrt(2)(n x n - I2/2)``, unit norm."""
    return QTensor(frame_fn_components(float(phi), k))


def frame_f3() -> QTensor:
    """Constant out-of-plane frame tensor ``F_3``, unit norm."""
    return QTensor(F3_COMPONENTS.copy())


def boundary_tensor_components(phi, params: ModelParams):
    """Components of the boundary data ``s_plus (n x n - I/3)``."""
    phi = np.asarray(phi, dtype=float)
    half = 0.5 * params.k * phi
    cn = np.cos(half)
    sn = np.sin(half)
    s = params.s_plus
    return np.stack(
        [
            s * (cn * cn - 1.0 / 3.0),
            s * cn * sn,
            np.zeros_like(cn),
            s * (sn * sn - 1.0 / 3.0),
            np.zeros_like(cn),
        ],
        axis=-1,
    )


def boundary_tensor(phi: float, params: ModelParams) -> QTensor:
    """Dirichlet boundary value at angle ``phi`` on the disk rim.

    Equals ``s_plus (n x n - I/3)`` with the half-angle director, and
    decomposes as ``s_plus (F_n/sqrt(2) - F_3/sqrt(6))`` in the two-mode
    frame.
    """
    return QTensor(boundary_tensor_components(float(phi), params))


def bulk_energy(q: QTensor, params: ModelParams) -> float:
    """Bulk potential ``f(Q) = -a2/2 |Q|^2 - b2/3 tr(Q^3) + c2/4 |Q|^4``."""
    return float(bulk_density(q.components, params))


# ---------------------------------------------------------------------------
# spectral analysis
# ---------------------------------------------------------------------------

def eigenvalues_components(c):
    """Closed-form eigenvalues, ascending, for component arrays ``(..., 5)``.

    Uses the trigonometric (Cardano) solution of the characteristic cubic,
    specialised to zero trace: with ``p = sqrt(|Q|^2/6)`` the eigenvalues
    are ``2 p cos(theta/3 + 2 pi m / 3)`` where
    ``cos(theta) = det(Q) / (2 p^3)``.
    """
    c = np.asarray(c, dtype=float)
    nsq = frob_sq(c)
    p = np.sqrt(np.maximum(nsq, 0.0) / 6.0)
    safe = np.where(p > 0.0, p, 1.0)
    arg = np.clip(det3(c) / (2.0 * safe**3), -1.0, 1.0)
    theta = np.arccos(arg) / 3.0
    lam_max = 2.0 * p * np.cos(theta)
    lam_min = 2.0 * p * np.cos(theta + 2.0 * np.pi / 3.0)
    lam_mid = -lam_max - lam_min
    return np.stack([lam_min, lam_mid, lam_max], axis=-1)


def _orthonormal_complement(v):
    # deterministic completion: seed with the coordinate axis least aligned to v
    axis = np.argmin(np.abs(v))
    e = np.zeros(3)
    e[axis] = 1.0
    w1 = e - np.dot(e, v) * v
    w1 /= np.linalg.norm(w1)
    w2 = np.cross(v, w1)
    return w1, w2


def _isolated_eigenvector(a, lam):
    b = a - lam * np.eye(3)
    c01 = np.cross(b[0], b[1])
    c02 = np.cross(b[0], b[2])
    c12 = np.cross(b[1], b[2])
    cands = np.array([c01, c02, c12])
    norms = np.linalg.norm(cands, axis=1)
    best = int(np.argmax(norms))
    if norms[best] <= 0.0:
        # (numerically) multiple eigenvalue: any unit vector orthogonal to
        # the largest row works
        row = b[int(np.argmax(np.linalg.norm(b, axis=1)))]
        rn = np.linalg.norm(row)
        if rn == 0.0:
            return np.array([0.0, 0.0, 1.0])
        w1, _ = _orthonormal_complement(row / rn)
        return w1
    return cands[best] / norms[best]


def eigen3(q: QTensor):
    """Eigenvalues (ascending) and an orthonormal eigenvector triple.

    Returns ``(lam, vecs)`` with ``vecs[:, i]`` the unit eigenvector for
    ``lam[i]``.  Degenerate spectra yield a deterministic orthonormal basis
    of the eigenspace (coordinate-axis seeded), so repeated calls agree.
    """
    c = q.components
    lam = eigenvalues_components(c)
    nrm = math.sqrt(float(frob_sq(c)))
    if nrm < 1e-14:
        return np.zeros(3), np.eye(3)
    a = q.matrix()
    gap01 = lam[1] - lam[0]
    gap12 = lam[2] - lam[1]
    # anchor on the best-separated eigenvalue, then diagonalise the 2x2
    # restriction to its orthogonal complement exactly
    iso = 0 if gap01 >= gap12 else 2
    v_iso = _isolated_eigenvector(a, lam[iso])
    w1, w2 = _orthonormal_complement(v_iso)
    b11 = w1 @ a @ w1
    b12 = w1 @ a @ w2
    b22 = w2 @ a @ w2
    angle = 0.5 * math.atan2(2.0 * b12, b11 - b22)
    x1 = math.cos(angle) * w1 + math.sin(angle) * w2
    x2 = -math.sin(angle) * w1 + math.cos(angle) * w2
    rest = [i for i in range(3) if i != iso]
    mu1 = x1 @ a @ x1
    if abs(mu1 - lam[rest[0]]) <= abs(mu1 - lam[rest[1]]):
        order = {rest[0]: x1, rest[1]: x2}
    else:
        order = {rest[0]: x2, rest[1]: x1}
    order[iso] = v_iso
    vecs = np.column_stack([order[i] for i in range(3)])
    # sign convention: largest-magnitude entry positive
    for i in range(3):
        j = int(np.argmax(np.abs(vecs[:, i])))
        if vecs[j, i] < 0.0:
            vecs[:, i] = -vecs[:, i]
    return lam, vecs


def biaxiality_components(c):
    """Biaxiality measure ``beta = 1 - 6 tr(Q^3)^2 / |Q|^6`` on arrays.

    Zero exactly for uniaxial tensors (two equal eigenvalues), one at
    maximal biaxiality; defined as 0 where ``|Q| < 1e-14`` to avoid 0/0 at
    the defect core.
    """
    c = np.asarray(c, dtype=float)
    nsq = frob_sq(c)
    t3 = trace_cubed(c)
    safe = np.where(nsq > 1e-28, nsq, 1.0)
    beta = 1.0 - 6.0 * t3 * t3 / safe**3
    beta = np.where(nsq > 1e-28, beta, 0.0)
    return np.clip(beta, 0.0, 1.0)


def biaxiality(q: QTensor) -> float:
    return float(biaxiality_components(q.components))


def ansatz_components(u, v, phi, k: int):
    """Components of the two-mode field ``Y = u F_n(phi) + v F_3``.

    ``u``, ``v`` and ``phi`` broadcast against each other.
    """
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    fn = frame_fn_components(phi, k)
    return u[..., None] * fn + v[..., None] * F3_COMPONENTS


class FrameCoeffs:
    """Point value in frame coordinates: ``(u, v)`` at azimuth ``phi``.

    The reconstructed tensor ``u F_n(phi) + v F_3`` has squared norm
    ``u^2 + v^2`` because the frame is orthonormal; ``phi`` is stored
    reduced to ``[0, 2 pi)``.
    """

    __slots__ = ("u", "v", "phi")

    def __init__(self, u: float, v: float, phi: float):
        self.u = float(u)
        self.v = float(v)
        self.phi = float(phi) % (2.0 * math.pi)

    def tensor(self, k: int) -> QTensor:
        return QTensor(ansatz_components(self.u, self.v, self.phi, k))

    def norm_sq(self) -> float:
        return self.u * self.u + self.v * self.v

    @classmethod
    def from_tensor(cls, q: QTensor, phi: float, k: int) -> "FrameCoeffs":
        """Project a tensor onto the frame at the given azimuth."""
        u = float(frob_dot(q.components, frame_fn_components(phi, k)))
        v = float(frob_dot(q.components, F3_COMPONENTS))
        return cls(u, v, phi)

    def __repr__(self):
        return f"FrameCoeffs(u={self.u:.6g}, v={self.v:.6g}, phi={self.phi:.6g})"


def ansatz_eigenvalues(u, v):
    """Eigenvalues of ``u F_n + v F_3`` along the frame's principal axes.

    Returned in the fixed order ``(sqrt(2/3) v, -u/sqrt(2) - v/sqrt(6),
    u/sqrt(2) - v/sqrt(6))`` (out-of-plane, then the two planar axes);
    not sorted, so level crossings stay on smooth curves.
    """
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    lam_z = math.sqrt(2.0 / 3.0) * v
    lam_perp = -u / _SQRT2 - v / _SQRT6
    lam_n = u / _SQRT2 - v / _SQRT6
    return np.stack([lam_z, lam_perp, lam_n], axis=-1)
