"""Bipartitions and the principal matrix family of each cut.

A vector ``conj(beta)_S (x) conj(g)_Sbar`` is orthogonal to every spanning
vector iff ``X(beta) g = 0`` where ``X(beta) = sum_v beta_v C_v`` and
``C_v[p, s] = c_p[index(S digits = v, Sbar digits = s)]``.
"""

from __future__ import annotations

import itertools
import string
from dataclasses import dataclass
from functools import lru_cache
from math import comb
from typing import Sequence

import numpy as np

from .linalg import ZERO, ExactMatrix, GaussianRational, NotExactError, det, rref
from .poly import MultiPoly
from .subspace import GeneratorMatrix, SystemShape, coefficient_vectors


def party_name(i: int, n: int) -> str:
    """Letters A, B, C, ... for up to 26 parties, A1, A2, ... beyond."""
    return string.ascii_uppercase[i - 1] if n <= 26 else f"A{i}"


@dataclass(frozen=True)
class Bipartition:
    """Split ``S | Sbar`` of parties 1..n; ``sigma`` lists S then Sbar, each sorted."""

    n: int
    S: tuple[int, ...]

    def __post_init__(self):
        s = tuple(sorted(set(self.S)))
        if not s or len(s) >= self.n or s[0] < 1 or s[-1] > self.n:
            raise ValueError(f"invalid bipartition side {self.S} for {self.n} parties")
        object.__setattr__(self, "S", s)

    @property
    def Sbar(self) -> tuple[int, ...]:
        return tuple(i for i in range(1, self.n + 1) if i not in self.S)

    @property
    def sigma(self) -> tuple[int, ...]:
        return self.S + self.Sbar

    @property
    def k(self) -> int:
        return len(self.S)

    @property
    def excluded_by_construction(self) -> bool:
        return self.S == (1,)

    @property
    def label(self) -> str:
        name = lambda side: "".join(party_name(i, self.n) for i in side)
        return f"{name(self.S)}|{name(self.Sbar)}"

    @classmethod
    def from_sigma(cls, sigma: Sequence[int], k: int) -> "Bipartition":
        sigma = tuple(sigma)
        if sorted(sigma) != list(range(1, len(sigma) + 1)):
            raise ValueError("sigma must be a permutation of 1..n")
        S, Sbar = sigma[:k], sigma[k:]
        if list(S) != sorted(S) or list(Sbar) != sorted(Sbar):
            raise ValueError("sigma must list each side in increasing order")
        return cls(len(sigma), S)

    @classmethod
    def parse(cls, text: str, n: int) -> "Bipartition":
        """Parse ``"B|AC"`` (letters) or ``"2"`` / ``"1,3"`` (1-based party indices of S)."""
        text = text.strip()
        if "|" in text:
            left = text.split("|")[0]
            S = [string.ascii_uppercase.index(ch) + 1 for ch in left if ch.isalpha()]
        else:
            S = [int(x) for x in text.replace(" ", "").split(",") if x]
        return cls(n, tuple(S))

    def state_index(self, d: int, s_digits: Sequence[int], sbar_digits: Sequence[int]) -> int:
        digits = [0] * self.n
        for party, x in zip(self.S, s_digits):
            digits[party - 1] = x
        for party, x in zip(self.Sbar, sbar_digits):
            digits[party - 1] = x
        i = 0
        for x in digits:
            i = i * d + x
        return i


def enumerate_cuts(shape: SystemShape, include_first: bool = False) -> list[Bipartition]:
    """Cuts with ``1 <= |S| <= n/2``; balanced cuts keep the side holding party 1.

    ``A_1 | rest`` is dropped unless ``include_first`` (it never hosts a
    biproduct vector of a candidate GES, but arbitrary subspaces need it).
    """
    n = shape.n
    cuts = []
    for k in range(1, n // 2 + 1):
        for S in itertools.combinations(range(1, n + 1), k):
            if 2 * k == n and 1 not in S:
                continue
            cut = Bipartition(n, S)
            if cut.excluded_by_construction and not include_first:
                continue
            cuts.append(cut)
    return cuts


def _digits(x: int, d: int, width: int) -> tuple[int, ...]:
    out = []
    for _ in range(width):
        x, r = divmod(x, d)
        out.append(r)
    return tuple(reversed(out))


@dataclass(frozen=True, eq=False)
class LinearMatrixFamily:
    """``X(beta) = sum_v beta_v C_v`` for one cut."""

    cut: Bipartition
    shape: SystemShape
    coeffs: tuple

    @property
    def exact(self) -> bool:
        return isinstance(self.coeffs[0], ExactMatrix)

    @property
    def nvars(self) -> int:
        return len(self.coeffs)

    @property
    def rows(self) -> int:
        return self.coeffs[0].shape[0]

    @property
    def cols(self) -> int:
        return self.coeffs[0].shape[1]

    def evaluate(self, beta) -> ExactMatrix | np.ndarray:
        if len(beta) != self.nvars:
            raise ValueError(f"beta needs {self.nvars} components")
        exact_beta = all(not isinstance(b, (float, complex, np.floating, np.complexfloating)) for b in beta)
        if self.exact and exact_beta:
            from .linalg import gq
            bs = [gq(b) for b in beta]
            out = [[ZERO] * self.cols for _ in range(self.rows)]
            for b, c in zip(bs, self.coeffs):
                if not b:
                    continue
                for i in range(self.rows):
                    row, crow = out[i], c.row(i)
                    for j in range(self.cols):
                        if crow[j]:
                            row[j] = row[j] + b * crow[j]
            return ExactMatrix(out, self.cols)
        return np.tensordot(np.asarray(beta, dtype=complex), self.float_coeffs(), axes=1)

    def float_coeffs(self) -> np.ndarray:
        if self.exact:
            return np.array([c.to_numpy() for c in self.coeffs])
        return np.asarray(self.coeffs)

    def witness_state(self, beta, g) -> np.ndarray:
        """State ``conj(beta)_S (x) conj(g)_Sbar`` in the standard party order."""
        d = self.shape.d
        k = self.cut.k
        nk = self.shape.n - k
        out = np.zeros(self.shape.dim, dtype=complex)
        for v, b in enumerate(beta):
            sd = _digits(v, d, k)
            for s, x in enumerate(g):
                out[self.cut.state_index(d, sd, _digits(s, d, nk))] = np.conj(complex(b)) * np.conj(complex(x))
        return out


def principal_family(g: GeneratorMatrix, cut: Bipartition) -> LinearMatrixFamily:
    shape = g.shape
    if cut.n != shape.n:
        raise ValueError("cut and generator matrix disagree on the number of parties")
    d, k, nk = shape.d, cut.k, shape.n - cut.k
    cvec = coefficient_vectors(g)
    rows = shape.perp_dim
    ncols = d ** nk
    index = [[cut.state_index(d, _digits(v, d, k), _digits(s, d, nk)) for s in range(ncols)]
             for v in range(d ** k)]
    if g.exact:
        coeffs = tuple(ExactMatrix([[cvec[p][index[v][s]] for s in range(ncols)] for p in range(rows)], ncols)
                       for v in range(d ** k))
    else:
        coeffs = tuple(np.array([[cvec[p, index[v][s]] for s in range(ncols)] for p in range(rows)])
                       for v in range(d ** k))
    return LinearMatrixFamily(cut, shape, coeffs)


def family_as_span(f: LinearMatrixFamily) -> list:
    """Constant matrices spanning the family; full rank for all beta iff every
    nonzero element of their span has full column rank."""
    return list(f.coeffs)


def homogeneous_monomials(nvars: int, degree: int) -> list[tuple[int, ...]]:
    out = []
    for combo in itertools.combinations_with_replacement(range(nvars), degree):
        e = [0] * nvars
        for i in combo:
            e[i] += 1
        out.append(tuple(e))
    return sorted(set(out), reverse=True)


@lru_cache(maxsize=None)
def _interpolation_plan(nvars: int, degree: int):
    """Unisolvent points (1, e) over the principal lattice and the inverse
    monomial-evaluation matrix."""
    monos = homogeneous_monomials(nvars, degree)
    lattice = [m[1:] for m in monos]  # exponents of the last nvars-1 vars, total <= degree
    points = [(1,) + tuple(e) for e in lattice]
    n = len(monos)
    mat = []
    for pt in points:
        row = []
        for m in monos:
            val = 1
            for x, e in zip(pt, m):
                val *= x ** e
            row.append(val)
        mat.append(row + [1 if i == len(mat) else 0 for i in range(n)])
    red, piv = rref(ExactMatrix(mat))
    if piv[:n] != list(range(n)):
        raise ArithmeticError("interpolation points are not unisolvent")
    inv = [[red[i, n + j] for j in range(n)] for i in range(n)]
    return monos, points, inv


def minor_system(f: LinearMatrixFamily) -> list[MultiPoly]:
    """All maximal minors of ``X(beta)`` as homogeneous polynomials in beta.

    Minors are recovered exactly by evaluating determinants on a unisolvent
    integer grid and inverting the monomial-evaluation matrix.
    """
    if not f.exact:
        raise NotExactError("minor_system requires the exact backend")
    c = f.cols
    nvars = f.nvars
    monos, points, inv = _interpolation_plan(nvars, c)
    evaluated = [f.evaluate(list(pt)) for pt in points]
    out = []
    for row_set in itertools.combinations(range(f.rows), c):
        cols = list(range(c))
        vals = [det(x.submatrix(row_set, cols)) for x in evaluated]
        terms = {}
        for i, m in enumerate(monos):
            acc = ZERO
            for j, v in enumerate(vals):
                if v and inv[i][j]:
                    acc = acc + inv[i][j] * v
            if acc:
                terms[m] = acc
        out.append(MultiPoly._from_clean(nvars, terms))
    expected = comb(f.rows, c)
    assert len(out) == expected
    return out
