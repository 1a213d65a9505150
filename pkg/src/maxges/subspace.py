"""Orthocomplement of the moment-curve family and the candidate GES.

Flattening convention, shared by every module: party ``A_1`` is the slowest
tensor index and local digits are read in base ``d``, so the amplitude of
``|i_1 i_2 ... i_n>`` sits at ``i_1 d^(n-1) + i_2 d^(n-2) + ... + i_n``.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .linalg import (ONE, ZERO, ExactMatrix, GaussianRational, NotExactError, exact_kernel, exact_rank, gq,
                     numeric_rank, orthonormal_complement, orthonormal_rows, rref)

MEMBERSHIP_TOL = 1e-9
ORTHOGONALITY_TOL = 1e-9


class RankDeficientError(ValueError):
    """The generator matrix is singular."""


@dataclass(frozen=True)
class SystemShape:
    n: int
    d: int

    def __post_init__(self):
        if self.n < 2 or self.d < 2:
            raise ValueError(f"need n >= 2 parties and local dimension d >= 2, got n={self.n}, d={self.d}")

    @property
    def dim(self) -> int:
        return self.d ** self.n

    @property
    def side(self) -> int:
        """Side length of the generator matrix, d^(n-1)."""
        return self.d ** (self.n - 1)

    @property
    def perp_dim(self) -> int:
        return self.side + self.d - 1

    @property
    def ges_dim(self) -> int:
        return (self.side - 1) * (self.d - 1)

    def digits(self, index: int) -> tuple[int, ...]:
        out = []
        for _ in range(self.n):
            index, r = divmod(index, self.d)
            out.append(r)
        return tuple(reversed(out))

    def index(self, digits: Sequence[int]) -> int:
        i = 0
        for x in digits:
            i = i * self.d + x
        return i


def _is_exact_scalar(x) -> bool:
    return not isinstance(x, (float, complex, np.floating, np.complexfloating))


@dataclass(frozen=True, eq=False)
class GeneratorMatrix:
    """Nonsingular ``d^(n-1)``-square matrix defining the spanning family."""

    shape: SystemShape
    matrix: ExactMatrix | np.ndarray

    def __post_init__(self):
        m = self.matrix
        if not isinstance(m, (ExactMatrix, np.ndarray)):
            raise TypeError("generator matrix must be an ExactMatrix or a numpy array")
        if isinstance(m, np.ndarray):
            object.__setattr__(self, "matrix", np.asarray(m, dtype=complex))
        side = self.shape.side
        if tuple(self.matrix.shape) != (side, side):
            raise ValueError(f"generator matrix must be {side}x{side} for n={self.shape.n}, d={self.shape.d}")
        rank = exact_rank(m) if self.exact else numeric_rank(self.matrix)
        if rank < side:
            raise RankDeficientError(f"generator matrix has rank {rank} < {side}")

    @property
    def exact(self) -> bool:
        return isinstance(self.matrix, ExactMatrix)

    def to_numpy(self) -> np.ndarray:
        return self.matrix.to_numpy() if self.exact else self.matrix

    def to_float(self) -> "GeneratorMatrix":
        return GeneratorMatrix(self.shape, self.to_numpy())

    def digest(self) -> str:
        """Stable hash of the entries, used as provenance in basis files."""
        if self.exact:
            text = ";".join(",".join(str(x) for x in self.matrix.row(i)) for i in range(self.matrix.rows))
        else:
            text = ";".join(",".join(repr(complex(x)) for x in row) for row in self.matrix)
        return hashlib.sha256(f"{self.shape.n},{self.shape.d}|{text}".encode()).hexdigest()[:16]

    @classmethod
    def from_rows(cls, shape: SystemShape, rows) -> "GeneratorMatrix":
        rows = [list(r) for r in rows]
        if all(_is_exact_scalar(x) for r in rows for x in r):
            return cls(shape, ExactMatrix(rows))
        return cls(shape, np.array(rows, dtype=complex))


@dataclass(frozen=True, eq=False)
class Subspace:
    """Subspace given by basis rows.

    Exact backend keeps the basis in reduced row echelon form; the float
    backend keeps orthonormal rows.
    """

    ambient: int
    basis: ExactMatrix | np.ndarray
    backend: str
    shape: SystemShape | None = None
    label: str = ""
    _proj: dict = field(default_factory=dict, repr=False, compare=False)

    @classmethod
    def from_vectors(cls, vectors, shape: SystemShape | None = None, backend: str | None = None,
                     label: str = "") -> "Subspace":
        vectors = [list(v) for v in vectors]
        if not vectors:
            raise ValueError("need at least one vector (use Subspace.zero for the zero subspace)")
        ambient = len(vectors[0])
        if backend is None:
            backend = "exact" if all(_is_exact_scalar(x) for v in vectors for x in v) else "float"
        if backend == "exact":
            red, _ = rref(ExactMatrix(vectors))
            return cls(ambient, red, "exact", shape, label)
        return cls(ambient, orthonormal_rows(np.array(vectors, dtype=complex)), "float", shape, label)

    @classmethod
    def zero(cls, ambient: int, backend: str = "float", shape: SystemShape | None = None) -> "Subspace":
        if backend == "exact":
            return cls(ambient, ExactMatrix([], ambient), "exact", shape)
        return cls(ambient, np.zeros((0, ambient), dtype=complex), "float", shape)

    @property
    def dim(self) -> int:
        return self.basis.shape[0] if self.backend == "float" else self.basis.rows

    def vectors(self):
        if self.backend == "exact":
            return [list(self.basis.row(i)) for i in range(self.basis.rows)]
        return [row for row in self.basis]

    def orthonormal_basis(self) -> np.ndarray:
        if "onb" not in self._proj:
            if self.backend == "float":
                self._proj["onb"] = np.asarray(self.basis)
            else:
                self._proj["onb"] = (orthonormal_rows(self.basis.to_numpy()) if self.dim
                                     else np.zeros((0, self.ambient), dtype=complex))
        return self._proj["onb"]

    def projector(self) -> np.ndarray:
        if "P" not in self._proj:
            b = self.orthonormal_basis()
            # rows are bras-conjugated kets: P = sum_k |b_k><b_k|
            self._proj["P"] = b.T @ b.conj()
        return self._proj["P"]

    def to_float(self) -> "Subspace":
        if self.backend == "float":
            return self
        return Subspace(self.ambient, self.orthonormal_basis(), "float", self.shape, self.label)

    def complement(self) -> "Subspace":
        if self.backend == "exact":
            if self.dim == 0:
                return Subspace(self.ambient, ExactMatrix.identity(self.ambient), "exact", self.shape)
            ker = exact_kernel(self.basis)
            vecs = [[x.conjugate() for x in v] for v in ker]
            if not vecs:
                return Subspace.zero(self.ambient, "exact", self.shape)
            return Subspace.from_vectors(vecs, self.shape, "exact")
        return Subspace(self.ambient, orthonormal_complement(self.basis), "float", self.shape)

    def __contains__(self, v) -> bool:
        return contains(self, v)


# -- spanning family ------------------------------------------------------------

def moment_vector(alpha, length: int):
    """``(1, alpha, alpha^2, ..., alpha^(length-1))``."""
    if length < 1:
        raise ValueError("moment vector length must be >= 1")
    if _is_exact_scalar(alpha):
        a = gq(alpha)
        out = [ONE]
        for _ in range(length - 1):
            out.append(out[-1] * a)
        return out
    return complex(alpha) ** np.arange(length)


def spanning_vector(g: GeneratorMatrix, alpha):
    """``mu_d(alpha) (x) A mu_{d^(n-1)}(alpha)``."""
    d, side = g.shape.d, g.shape.side
    if g.exact and _is_exact_scalar(alpha):
        head = moment_vector(alpha, d)
        tail = g.matrix.apply(moment_vector(alpha, side))
        return [h * t for h in head for t in tail]
    head = np.asarray(moment_vector(complex(alpha), d))
    tail = g.to_numpy() @ np.asarray(moment_vector(complex(alpha), side))
    return np.kron(head, tail)


def coefficient_vectors(g: GeneratorMatrix):
    """Coefficients ``c_p`` of ``alpha^p`` in the spanning vector, p = 0 .. d^(n-1)+d-2.

    ``c_p[i_1, J] = A[J, p - i_1]`` (zero when out of range).
    """
    d, side = g.shape.d, g.shape.side
    npow = side + d - 1
    if g.exact:
        a = g.matrix
        out = []
        for p in range(npow):
            v = []
            for i1 in range(d):
                k = p - i1
                if 0 <= k < side:
                    v.extend(a[J, k] for J in range(side))
                else:
                    v.extend([ZERO] * side)
            out.append(v)
        return out
    a = g.to_numpy()
    out = np.zeros((npow, d * side), dtype=complex)
    for p in range(npow):
        for i1 in range(d):
            k = p - i1
            if 0 <= k < side:
                out[p, i1 * side:(i1 + 1) * side] = a[:, k]
    return out


def perp_basis(g: GeneratorMatrix) -> Subspace:
    """Span of all spanning vectors, computed from the coefficient vectors."""
    cvec = coefficient_vectors(g)
    s = Subspace.from_vectors(cvec, g.shape, "exact" if g.exact else "float", label="perp")
    if s.dim != g.shape.perp_dim:
        raise RankDeficientError(f"coefficient vectors span {s.dim} dims, expected {g.shape.perp_dim}")
    return s


def candidate_ges(g: GeneratorMatrix) -> Subspace:
    """Orthocomplement of :func:`perp_basis`, of dimension (d^(n-1)-1)(d-1)."""
    perp = perp_basis(g)
    v = perp.complement()
    return Subspace(v.ambient, v.basis, v.backend, g.shape, "ges")


# -- subspace algebra ---------------------------------------------------------------

def contains(s: Subspace, v, tol: float = MEMBERSHIP_TOL) -> bool:
    if len(v) != s.ambient:
        raise ValueError(f"vector of length {len(v)} in ambient dimension {s.ambient}")
    exact_v = s.backend == "exact" and all(_is_exact_scalar(x) for x in v)
    if exact_v:
        vv = [gq(x) for x in v]
        if not any(vv):
            raise ValueError("membership of the zero vector is not meaningful")
        if s.dim == 0:
            return False
        return exact_rank(ExactMatrix(s.vectors() + [vv])) == s.dim
    vv = np.asarray([complex(x) for x in v])
    nv = np.linalg.norm(vv)
    if nv == 0:
        raise ValueError("membership of the zero vector is not meaningful")
    return membership_residual(s, vv) < tol


def membership_residual(s: Subspace, v) -> float:
    """``||(1 - P) v|| / ||v||``."""
    v = np.asarray(v, dtype=complex)
    b = s.orthonormal_basis()
    r = v - b.T @ (b.conj() @ v)
    return float(np.linalg.norm(r) / np.linalg.norm(v))


def subspace_distance(a: Subspace, b: Subspace) -> float:
    """Spectral norm of the difference of the orthogonal projectors."""
    if a.ambient != b.ambient:
        raise ValueError("subspaces live in different ambient spaces")
    return float(np.linalg.norm(a.projector() - b.projector(), 2))


def cross_gram_norm(a: Subspace, b: Subspace) -> float:
    return float(np.linalg.norm(a.orthonormal_basis().conj() @ b.orthonormal_basis().T)) if a.dim and b.dim else 0.0


def direct_sum_check(parts: Sequence[Subspace], tol: float = ORTHOGONALITY_TOL) -> bool:
    """Pairwise orthogonal parts whose dimensions add up to the ambient dimension."""
    if not parts:
        return False
    amb = parts[0].ambient
    if any(p.ambient != amb for p in parts):
        raise ValueError("parts live in different ambient spaces")
    if sum(p.dim for p in parts) != amb:
        return False
    for i in range(len(parts)):
        for j in range(i + 1, len(parts)):
            if cross_gram_norm(parts[i], parts[j]) >= tol:
                return False
    return True


def random_generator_matrix(shape: SystemShape, rng: np.random.Generator, low: int = -3, high: int = 3,
                            max_tries: int = 1000) -> GeneratorMatrix:
    """Integer entries uniform in ``[low, high]``, rejection-sampled to full rank."""
    side = shape.side
    for _ in range(max_tries):
        m = rng.integers(low, high + 1, size=(side, side))
        em = ExactMatrix([[int(x) for x in row] for row in m])
        if exact_rank(em) == side:
            return GeneratorMatrix(shape, em)
    raise RuntimeError("could not sample a full-rank generator matrix")
