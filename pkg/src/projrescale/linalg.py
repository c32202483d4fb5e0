"""Dense subspace linear algebra: orthonormal bases, projections, restrictions,
diagonal rescaling, and Euclidean projection onto the standard simplex.

A linear subspace of R^n is represented by an orthonormal basis stored as a
read-only n x d matrix.  The same representation covers the subspace itself,
its orthogonal complement, diagonally rescaled copies, and restrictions to a
coordinate set.  All indices are 0-based.  Coordinates outside a support set
are written as hard zeros, never left as small residuals.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg

# Column orthonormality required of a stored basis.
ORTHONORMALITY_TOL = 1e-10
# Default rank cutoff, relative to the largest input column norm.
RANK_TOL = 1e-10
# Simplex points must sum to one within this slack.
SIMPLEX_SUM_TOL = 1e-12
# Exponents at or above 2**1024 overflow float64.
MAX_RESCALE_EXPONENT = 1020


def as_matrix(values, name: str = "matrix") -> np.ndarray:
    """Coerce ``values`` to a finite float64 matrix (copy, C order)."""
    a = np.array(values, dtype=float, order="C")
    if a.ndim != 2:
        raise ValueError(f"{name} must be 2-dimensional, got ndim={a.ndim}")
    if a.shape[0] < 1:
        raise ValueError(f"{name} must have at least one row")
    if not np.all(np.isfinite(a)):
        raise ValueError(f"{name} contains non-finite entries")
    return a


def as_vector(values, length: int | None = None, name: str = "vector") -> np.ndarray:
    """Coerce ``values`` to a finite float64 vector, optionally of fixed length."""
    v = np.array(values, dtype=float)
    if v.ndim != 1:
        raise ValueError(f"{name} must be 1-dimensional, got ndim={v.ndim}")
    if length is not None and v.shape[0] != length:
        raise ValueError(f"{name} must have length {length}, got {v.shape[0]}")
    if not np.all(np.isfinite(v)):
        raise ValueError(f"{name} contains non-finite entries")
    return v


@dataclass(frozen=True)
class IndexSet:
    """Ordered subset of {0, ..., ambient_dim - 1}."""

    ambient_dim: int
    members: tuple[int, ...]

    def __post_init__(self):
        n = self.ambient_dim
        if n < 1:
            raise ValueError("ambient_dim must be >= 1")
        prev = -1
        for i in self.members:
            if not isinstance(i, (int, np.integer)):
                raise ValueError(f"index {i!r} is not an integer")
            if not 0 <= i < n:
                raise ValueError(f"index {i} out of range for ambient_dim {n}")
            if i <= prev:
                raise ValueError("members must be strictly increasing")
            prev = i
        object.__setattr__(self, "members", tuple(int(i) for i in self.members))

    @classmethod
    def full(cls, n: int) -> "IndexSet":
        return cls(n, tuple(range(n)))

    @classmethod
    def empty(cls, n: int) -> "IndexSet":
        return cls(n, ())

    @classmethod
    def from_iterable(cls, n: int, indices) -> "IndexSet":
        return cls(n, tuple(sorted(set(int(i) for i in indices))))

    def complement(self) -> "IndexSet":
        inside = set(self.members)
        return IndexSet(self.ambient_dim, tuple(i for i in range(self.ambient_dim) if i not in inside))

    def union(self, other: "IndexSet") -> "IndexSet":
        self._check_ambient(other)
        return IndexSet.from_iterable(self.ambient_dim, set(self.members) | set(other.members))

    def intersection(self, other: "IndexSet") -> "IndexSet":
        self._check_ambient(other)
        return IndexSet.from_iterable(self.ambient_dim, set(self.members) & set(other.members))

    def remove(self, index: int) -> "IndexSet":
        if index not in self:
            raise ValueError(f"index {index} not a member")
        return IndexSet(self.ambient_dim, tuple(i for i in self.members if i != index))

    def as_array(self) -> np.ndarray:
        return np.array(self.members, dtype=int)

    @property
    def is_full(self) -> bool:
        return len(self.members) == self.ambient_dim

    def _check_ambient(self, other: "IndexSet"):
        if other.ambient_dim != self.ambient_dim:
            raise ValueError("ambient dimensions differ")

    def __contains__(self, index) -> bool:
        return int(index) in set(self.members)

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.members)


@dataclass(frozen=True)
class Subspace:
    """Linear subspace of R^n held as an orthonormal basis (n x d matrix).

    d = 0 encodes the zero subspace {0}.  Instances are immutable; the basis
    array is marked read-only.
    """

    basis: np.ndarray

    def __post_init__(self):
        b = as_matrix(self.basis, name="basis")
        n, d = b.shape
        if d > n:
            raise ValueError(f"basis has more columns ({d}) than rows ({n})")
        if d > 0:
            gram = b.T @ b
            if not np.allclose(gram, np.eye(d), atol=ORTHONORMALITY_TOL, rtol=0.0):
                raise ValueError("basis columns are not orthonormal within tolerance")
        b.flags.writeable = False
        object.__setattr__(self, "basis", b)

    @property
    def ambient_dim(self) -> int:
        return self.basis.shape[0]

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    @classmethod
    def full(cls, n: int) -> "Subspace":
        return cls(np.eye(n))

    @classmethod
    def zero(cls, n: int) -> "Subspace":
        return cls(np.zeros((n, 0)))

    def membership_residual(self, v) -> float:
        """Sup-norm distance between ``v`` and its projection onto this subspace."""
        v = as_vector(v, self.ambient_dim)
        return float(np.max(np.abs(v - project(self, v)))) if self.ambient_dim else 0.0


@dataclass(frozen=True)
class SimplexPoint:
    """Nonnegative point summing to one, supported on a coordinate subset."""

    support: IndexSet
    values: np.ndarray

    def __post_init__(self):
        v = as_vector(self.values, len(self.support), name="values")
        if np.any(v < 0):
            raise ValueError("simplex point has negative entries")
        if abs(float(v.sum()) - 1.0) > SIMPLEX_SUM_TOL:
            raise ValueError(f"simplex point sums to {v.sum()!r}, not 1")
        v.flags.writeable = False
        object.__setattr__(self, "values", v)

    def to_ambient(self) -> np.ndarray:
        """Full-length vector with hard zeros off the support."""
        out = np.zeros(self.support.ambient_dim)
        out[self.support.as_array()] = self.values
        return out


def orthonormalize(vectors, rank_tol: float = RANK_TOL) -> Subspace:
    """Orthonormal basis of the column space of ``vectors``.

    Householder QR with column pivoting; pivoted columns whose residual norm
    is at most ``rank_tol`` times the largest input column norm are dropped.
    """
    if rank_tol <= 0:
        raise ValueError("rank_tol must be positive")
    a = as_matrix(vectors, name="vectors")
    n, k = a.shape
    if k == 0:
        return Subspace.zero(n)
    scale = float(np.max(np.linalg.norm(a, axis=0)))
    if scale == 0.0:
        return Subspace.zero(n)
    q, r, _ = scipy.linalg.qr(a, mode="economic", pivoting=True)
    diag = np.abs(np.diag(r))
    rank = int(np.sum(diag > rank_tol * scale))
    return Subspace(q[:, :rank].copy())


def orthogonal_complement(subspace: Subspace) -> Subspace:
    """Orthogonal complement, of dimension n - dim."""
    n, d = subspace.ambient_dim, subspace.dim
    if d == 0:
        return Subspace.full(n)
    if d == n:
        return Subspace.zero(n)
    q, _ = scipy.linalg.qr(subspace.basis, mode="full")
    return Subspace(q[:, d:].copy())


def project(subspace: Subspace, v) -> np.ndarray:
    """Orthogonal projection of ``v`` onto the subspace: B (B^T v)."""
    v = as_vector(v, subspace.ambient_dim)
    b = subspace.basis
    return b @ (b.T @ v)


def projector_matrix(subspace: Subspace) -> np.ndarray:
    """Dense projection matrix B B^T."""
    b = subspace.basis
    return b @ b.T


def restrict_to_coordinates(subspace: Subspace, support: IndexSet) -> Subspace:
    """Subspace of all x in ``subspace`` with x_i = 0 for i outside ``support``.

    Let B be the basis and B_c its rows outside the support.  The restriction
    is {B c : B_c c = 0}; a basis of the kernel of B_c is obtained as the
    orthogonal complement of the row space of B_c.  The result keeps ambient
    dimension n, with hard zeros written off the support.  May have dim 0.
    """
    if len(support) == 0:
        raise ValueError("support must be nonempty")
    if support.ambient_dim != subspace.ambient_dim:
        raise ValueError("support ambient dimension mismatch")
    n = subspace.ambient_dim
    if subspace.dim == 0:
        return Subspace.zero(n)
    inside = support.as_array()
    outside = support.complement().as_array()
    b = subspace.basis
    if outside.size == 0:
        return subspace
    row_space = orthonormalize(b[outside, :].T)
    kernel = orthogonal_complement(row_space).basis
    if kernel.shape[1] == 0:
        return Subspace.zero(n)
    restricted = orthonormalize(b[inside, :] @ kernel)
    out = np.zeros((n, restricted.dim))
    out[inside, :] = restricted.basis
    return Subspace(out)


def rescale(subspace: Subspace, exponents) -> Subspace:
    """Subspace D L for D = diag(2**e_i), given integer exponents e_i >= 0."""
    e = np.asarray(exponents)
    if not np.issubdtype(e.dtype, np.integer):
        raise ValueError("exponents must be integers")
    if e.shape != (subspace.ambient_dim,):
        raise ValueError("exponents must have one entry per coordinate")
    if np.any(e < 0):
        raise ValueError("exponents must be nonnegative")
    if np.any(e > MAX_RESCALE_EXPONENT):
        raise OverflowError("rescaling exponent too large for float64")
    if subspace.dim == 0 or not np.any(e):
        return subspace
    scale = np.ldexp(1.0, e.astype(int))
    result = orthonormalize(subspace.basis * scale[:, None])
    if result.dim != subspace.dim:
        raise ValueError("rescaling changed the subspace dimension")
    return result


def simplex_project_values(v) -> np.ndarray:
    """Euclidean projection of ``v`` onto {u >= 0, sum u = 1}.

    Sort-and-threshold method: with entries sorted in decreasing order
    (ties broken by original index, ascending), find the largest k with
    v_(k) - (sum of the top k - 1)/k > 0 and clip at that threshold.
    """
    v = as_vector(v, name="v")
    if v.size == 0:
        raise ValueError("cannot project an empty vector")
    order = np.argsort(-v, kind="stable")
    u = v[order]
    cumulative = np.cumsum(u)
    counts = np.arange(1, v.size + 1)
    positive = u - (cumulative - 1.0) / counts > 0.0
    k = int(np.nonzero(positive)[0][-1]) + 1
    tau = (cumulative[k - 1] - 1.0) / k
    return np.maximum(v - tau, 0.0)


def simplex_projection(v, support: IndexSet | None = None) -> SimplexPoint:
    """Projection onto the simplex over ``support``; defaults to the full set.

    ``v`` holds the coordinates on the support (length len(support)).
    """
    v = as_vector(v, name="v")
    if support is None:
        support = IndexSet.full(v.size)
    if len(support) != v.size:
        raise ValueError("v length must match the support size")
    return SimplexPoint(support, simplex_project_values(v))
