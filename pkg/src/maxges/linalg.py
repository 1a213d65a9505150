"""Exact Gaussian-rational scalars and matrices, plus the float mirror.

Exact values are stored as ``(a + b i) / q`` with integer ``a, b`` and a
positive integer ``q`` such that ``gcd(a, b, q) == 1``.  All exact matrix
routines (rank, determinant, minors) use fraction-free Bareiss elimination
on Gaussian integers, so no intermediate rounding can occur.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

RANK_TOL_FACTOR = 1e3


class NotExactError(TypeError):
    """Raised when an inexact (floating) value reaches the exact backend."""


class GaussianRational:
    """Complex number with rational real and imaginary parts."""

    __slots__ = ("_a", "_b", "_q")

    def __new__(cls, re=0, im=0):
        if isinstance(re, GaussianRational) and im == 0:
            return re
        if isinstance(re, str):
            if im != 0:
                raise TypeError("string input takes no imaginary part")
            return parse_exact(re)
        if isinstance(re, GaussianRational):
            fr, fi = re.re, re.im + _to_fraction(im)
        else:
            fr, fi = _to_fraction(re), _to_fraction(im)
        q = fr.denominator * fi.denominator // math.gcd(fr.denominator, fi.denominator)
        return cls._raw(fr.numerator * (q // fr.denominator), fi.numerator * (q // fi.denominator), q)

    @classmethod
    def _raw(cls, a: int, b: int, q: int) -> "GaussianRational":
        if q != 1:
            g = math.gcd(a, b, q)
            if g != 1:
                a //= g
                b //= g
                q //= g
        self = object.__new__(cls)
        self._a, self._b, self._q = a, b, q
        return self

    # -- accessors ---------------------------------------------------------
    @property
    def re(self) -> Fraction:
        return Fraction(self._a, self._q)

    @property
    def im(self) -> Fraction:
        return Fraction(self._b, self._q)

    @property
    def is_real(self) -> bool:
        return self._b == 0

    def gaussian_integer(self) -> tuple[int, int, int]:
        """Return ``(a, b, q)`` with ``self == (a + b i) / q``."""
        return self._a, self._b, self._q

    def conjugate(self) -> "GaussianRational":
        return GaussianRational._raw(self._a, -self._b, self._q)

    def abs2(self) -> Fraction:
        return Fraction(self._a * self._a + self._b * self._b, self._q * self._q)

    def __complex__(self) -> complex:
        return complex(self._a / self._q, self._b / self._q)

    # -- arithmetic --------------------------------------------------------
    def __add__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        if self._q == o._q:
            return GaussianRational._raw(self._a + o._a, self._b + o._b, self._q)
        return GaussianRational._raw(self._a * o._q + o._a * self._q,
                                     self._b * o._q + o._b * self._q, self._q * o._q)

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational._raw(-self._a, -self._b, self._q)

    def __sub__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        if self._b == 0 and o._b == 0:
            return GaussianRational._raw(self._a * o._a, 0, self._q * o._q)
        return GaussianRational._raw(self._a * o._a - self._b * o._b,
                                     self._a * o._b + self._b * o._a, self._q * o._q)

    __rmul__ = __mul__

    def inverse(self) -> "GaussianRational":
        n = self._a * self._a + self._b * self._b
        if n == 0:
            raise ZeroDivisionError("GaussianRational division by zero")
        # q / (a + b i) = q (a - b i) / n
        a, b, q = self._q * self._a, -self._q * self._b, n
        return GaussianRational._raw(a, b, q)

    def __truediv__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, e: int):
        if not isinstance(e, int):
            return NotImplemented
        if e < 0:
            return self.inverse() ** (-e)
        result, base = ONE, self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    # -- comparison / hashing ---------------------------------------------
    def __eq__(self, other):
        o = _coerce(other)
        if o is None:
            if isinstance(other, complex):
                return complex(self) == other
            return NotImplemented
        return self._a == o._a and self._b == o._b and self._q == o._q

    def __hash__(self):
        if self._b == 0:
            return hash(Fraction(self._a, self._q))
        return hash((self._a, self._b, self._q))

    def __bool__(self):
        return self._a != 0 or self._b != 0

    def __repr__(self):
        return f"GaussianRational({format_exact(self)!r})"

    def __str__(self):
        return format_exact(self)


def _to_fraction(x) -> Fraction:
    if isinstance(x, bool):
        return Fraction(int(x))
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, (np.integer,)):
        return Fraction(int(x))
    raise NotExactError(f"cannot represent {x!r} ({type(x).__name__}) exactly")


def _coerce(x):
    if isinstance(x, GaussianRational):
        return x
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return GaussianRational._raw(int(x), 0, 1)
    if isinstance(x, Fraction):
        return GaussianRational._raw(x.numerator, 0, x.denominator)
    if isinstance(x, (float, complex, np.floating, np.complexfloating)):
        raise NotExactError(f"floating value {x!r} cannot be mixed with exact values")
    return None


def gq(x) -> GaussianRational:
    """Coerce ``x`` (int, Fraction, str, GaussianRational) to GaussianRational."""
    c = _coerce(x)
    if c is not None:
        return c
    if isinstance(x, str):
        return parse_exact(x)
    if isinstance(x, complex) or isinstance(x, float):
        raise NotExactError(f"floating value {x!r} is not accepted by the exact backend")
    return GaussianRational(x)


ZERO = GaussianRational._raw(0, 0, 1)
ONE = GaussianRational._raw(1, 0, 1)
I = GaussianRational._raw(0, 1, 1)

# -- text format -------------------------------------------------------------

_RAT = r"[+-]?\d+(?:/\d+)?"
_EXACT_RE = re.compile(rf"^\s*(?:(?P<re>{_RAT})\s*)?(?:(?P<im>[+-]\s*(?:\d+(?:/\d+)?)?)\s*\*?\s*i)?\s*$")


def format_exact(x: GaussianRational) -> str:
    """Canonical text: ``"p/q"`` for real values, ``"p/q+r/s i"`` otherwise."""
    r, i = x.re, x.im
    rs = str(r)
    if i == 0:
        return rs
    sign = "-" if i < 0 else "+"
    return f"{rs}{sign}{abs(i)} i"


def parse_exact(s: str) -> GaussianRational:
    m = _EXACT_RE.match(s)
    if not m or (m.group("re") is None and m.group("im") is None):
        raise ValueError(f"malformed exact entry {s!r}")
    re_part = Fraction(m.group("re")) if m.group("re") is not None else Fraction(0)
    im_txt = m.group("im")
    if im_txt is None:
        im_part = Fraction(0)
    else:
        im_txt = im_txt.replace(" ", "")
        im_part = Fraction(im_txt + "1") if im_txt in "+-" else Fraction(im_txt)
    return GaussianRational(re_part, im_part)


def format_float(z: complex) -> str:
    z = complex(z)
    sign = "-" if math.copysign(1.0, z.imag) < 0 else "+"
    return f"{z.real!r}{sign}{abs(z.imag)!r}i"


def parse_float(s: str) -> complex:
    try:
        return complex(s.replace(" ", "").replace("i", "j"))
    except ValueError as exc:
        raise ValueError(f"malformed float entry {s!r}") from exc


# -- Gaussian integer helpers (pairs of ints) --------------------------------

def _gmul(x, y):
    return (x[0] * y[0] - x[1] * y[1], x[0] * y[1] + x[1] * y[0])


def _gdiv_exact(x, y):
    n = y[0] * y[0] + y[1] * y[1]
    re_ = x[0] * y[0] + x[1] * y[1]
    im_ = x[1] * y[0] - x[0] * y[1]
    if re_ % n or im_ % n:
        raise ArithmeticError("inexact Gaussian-integer division in Bareiss step")
    return (re_ // n, im_ // n)


def _integer_rows(rows) -> tuple[list[list[tuple[int, int]]], list[int]]:
    """Scale each row to Gaussian integers; return rows and the scale factors."""
    out, scales = [], []
    for row in rows:
        q = 1
        for x in row:
            q = q * x._q // math.gcd(q, x._q)
        out.append([(x._a * (q // x._q), x._b * (q // x._q)) for x in row])
        scales.append(q)
    return out, scales


def _bareiss(m: list[list[tuple[int, int]]], ncols: int):
    """In-place fraction-free echelon form; returns (rank, pivot columns, swaps)."""
    nrows = len(m)
    prev = (1, 0)
    r = 0
    swaps = 0
    pivots = []
    for c in range(ncols):
        if r == nrows:
            break
        p = next((i for i in range(r, nrows) if m[i][c] != (0, 0)), None)
        if p is None:
            continue
        if p != r:
            m[r], m[p] = m[p], m[r]
            swaps += 1
        piv = m[r][c]
        for i in range(r + 1, nrows):
            mic = m[i][c]
            row_i = m[i]
            row_r = m[r]
            for j in range(c + 1, ncols):
                a = _gmul(piv, row_i[j])
                b = _gmul(mic, row_r[j])
                v = (a[0] - b[0], a[1] - b[1])
                row_i[j] = v if prev == (1, 0) else _gdiv_exact(v, prev)
            row_i[c] = (0, 0)
        prev = piv
        pivots.append(c)
        r += 1
    return r, pivots, swaps


class ExactMatrix:
    """Immutable dense matrix of GaussianRational entries."""

    __slots__ = ("_rows", "rows", "cols")

    def __init__(self, entries: Iterable[Iterable], cols: int | None = None):
        rows = tuple(tuple(gq(x) for x in row) for row in entries)
        if cols is None:
            cols = len(rows[0]) if rows else 0
        if any(len(r) != cols for r in rows):
            raise ValueError("ragged matrix rows")
        self._rows = rows
        self.rows = len(rows)
        self.cols = cols

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "ExactMatrix":
        return cls([[ZERO] * cols for _ in range(rows)], cols)

    @classmethod
    def identity(cls, n: int) -> "ExactMatrix":
        return cls([[ONE if i == j else ZERO for j in range(n)] for i in range(n)], n)

    def __getitem__(self, idx):
        i, j = idx
        return self._rows[i][j]

    def row(self, i: int) -> tuple[GaussianRational, ...]:
        return self._rows[i]

    def tolist(self) -> list[list[GaussianRational]]:
        return [list(r) for r in self._rows]

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def transpose(self) -> "ExactMatrix":
        return ExactMatrix([[self._rows[i][j] for i in range(self.rows)] for j in range(self.cols)], self.rows)

    def conj(self) -> "ExactMatrix":
        return ExactMatrix([[x.conjugate() for x in r] for r in self._rows], self.cols)

    def submatrix(self, row_set: Sequence[int], col_set: Sequence[int]) -> "ExactMatrix":
        return ExactMatrix([[self._rows[i][j] for j in col_set] for i in row_set], len(col_set))

    def __matmul__(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        ot = other.transpose()._rows
        return ExactMatrix([[sum((a * b for a, b in zip(r, c)), ZERO) for c in ot] for r in self._rows],
                           other.cols)

    def apply(self, v: Sequence) -> list[GaussianRational]:
        return [sum((a * gq(b) for a, b in zip(r, v)), ZERO) for r in self._rows]

    def to_numpy(self) -> np.ndarray:
        out = np.empty((self.rows, self.cols), dtype=complex)
        for i, r in enumerate(self._rows):
            for j, x in enumerate(r):
                out[i, j] = complex(x)
        return out

    def is_real(self) -> bool:
        return all(x.is_real for r in self._rows for x in r)

    def __eq__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return self.shape == other.shape and self._rows == other._rows

    def __hash__(self):
        return hash(self._rows)

    def __repr__(self):
        return f"ExactMatrix({self.rows}x{self.cols})"


def as_exact(m) -> ExactMatrix:
    return m if isinstance(m, ExactMatrix) else ExactMatrix(m)


def exact_rank(m: ExactMatrix) -> int:
    m = as_exact(m)
    if m.rows == 0 or m.cols == 0:
        return 0
    work, _ = _integer_rows(m._rows)
    r, _, _ = _bareiss(work, m.cols)
    return r


def det(m: ExactMatrix) -> GaussianRational:
    m = as_exact(m)
    if m.rows != m.cols:
        raise ValueError("determinant of a non-square matrix")
    n = m.rows
    if n == 0:
        return ONE
    work, scales = _integer_rows(m._rows)
    r, _, swaps = _bareiss(work, n)
    if r < n:
        return ZERO
    a, b = work[n - 1][n - 1]
    if swaps % 2:
        a, b = -a, -b
    return GaussianRational._raw(a, b, 1) / math.prod(scales)


def minor(m: ExactMatrix, row_set: Sequence[int], col_set: Sequence[int]) -> GaussianRational:
    """Determinant of the submatrix on ``row_set`` x ``col_set``."""
    m = as_exact(m)
    if len(row_set) != len(col_set):
        raise ValueError("minor needs as many rows as columns")
    for i in row_set:
        if not 0 <= i < m.rows:
            raise IndexError(f"row index {i} out of range")
    for j in col_set:
        if not 0 <= j < m.cols:
            raise IndexError(f"column index {j} out of range")
    return det(m.submatrix(row_set, col_set))


def rref(m: ExactMatrix) -> tuple[ExactMatrix, list[int]]:
    """Reduced row echelon form (nonzero rows only) and pivot columns."""
    m = as_exact(m)
    rows = [list(r) for r in m._rows]
    pivots: list[int] = []
    r = 0
    for c in range(m.cols):
        p = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        inv = rows[r][c].inverse()
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return ExactMatrix(rows[:r], m.cols), pivots


def exact_kernel(m: ExactMatrix) -> list[list[GaussianRational]]:
    """Basis of ``{v : m v = 0}``, one vector per free column."""
    m = as_exact(m)
    red, pivots = rref(m)
    free = [j for j in range(m.cols) if j not in pivots]
    basis = []
    for f in free:
        v = [ZERO] * m.cols
        v[f] = ONE
        for i, p in enumerate(pivots):
            v[p] = -red[i, f]
        basis.append(v)
    return basis


# -- float mirror ------------------------------------------------------------

def rank_tolerance(s: np.ndarray, shape: tuple[int, int], factor: float = RANK_TOL_FACTOR) -> float:
    smax = float(s[0]) if s.size else 0.0
    return factor * max(shape) * np.finfo(float).eps * smax


def numeric_rank(m: np.ndarray, factor: float = RANK_TOL_FACTOR) -> int:
    m = np.atleast_2d(np.asarray(m, dtype=complex))
    if m.size == 0:
        return 0
    s = np.linalg.svd(m, compute_uv=False)
    return int(np.sum(s > rank_tolerance(s, m.shape, factor)))


def orthonormal_rows(m: np.ndarray, factor: float = RANK_TOL_FACTOR) -> np.ndarray:
    """Orthonormal basis (as rows) of the row space of ``m``."""
    m = np.atleast_2d(np.asarray(m, dtype=complex))
    if m.shape[0] == 0:
        return np.zeros((0, m.shape[1]), dtype=complex)
    _, s, vh = np.linalg.svd(m, full_matrices=False)
    r = int(np.sum(s > rank_tolerance(s, m.shape, factor)))
    return vh[:r].copy()


def orthonormal_complement(basis: np.ndarray, factor: float = RANK_TOL_FACTOR) -> np.ndarray:
    """Orthonormal rows spanning the Hermitian orthocomplement of the row space."""
    b = np.atleast_2d(np.asarray(basis, dtype=complex))
    dim = b.shape[1]
    if b.shape[0] == 0:
        return np.eye(dim, dtype=complex)
    _, s, vh = np.linalg.svd(b, full_matrices=True)
    r = int(np.sum(s > rank_tolerance(s, b.shape, factor)))
    return vh[r:].copy()


def dominant_eigenpair(h: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Largest eigenvalue and unit eigenvector of Hermitian matrices.

    Accepts a single ``(m, m)`` matrix or a stack ``(..., m, m)``.
    """
    w, v = np.linalg.eigh(h)
    return w[..., -1], v[..., :, -1]
