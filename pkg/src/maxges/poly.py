"""Sparse multivariate polynomials over the Gaussian rationals.

Also hosts the two decision procedures used by the exact certifier:
the GCD of binary forms (two homogeneous variables) and a Buchberger-based
test that a homogeneous ideal vanishes only at the origin.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np

from .linalg import ONE, ZERO, GaussianRational, gq

Monomial = tuple[int, ...]


class BudgetExhausted(RuntimeError):
    """Buchberger ran out of reduction steps before deciding."""

    def __init__(self, steps: int, budget: int):
        super().__init__(f"Buchberger step budget exhausted ({steps} > {budget})")
        self.steps = steps
        self.budget = budget


@dataclass(frozen=True)
class MonomialOrder:
    """Graded-lexicographic or lexicographic order with a variable priority.

    ``perm[0]`` is the most significant variable.
    """

    kind: str = "grlex"
    perm: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.kind not in ("grlex", "lex"):
            raise ValueError(f"unknown monomial order {self.kind!r}")

    def key(self, nvars: int) -> Callable[[Monomial], tuple]:
        perm = self.perm if self.perm is not None else tuple(range(nvars))
        if sorted(perm) != list(range(nvars)):
            raise ValueError("order permutation does not match the variable count")
        if self.kind == "lex":
            if perm == tuple(range(nvars)):
                return lambda e: e
            return lambda e: tuple(e[p] for p in perm)
        if perm == tuple(range(nvars)):
            return lambda e: (sum(e), e)
        return lambda e: (sum(e), tuple(e[p] for p in perm))


GRLEX = MonomialOrder("grlex")
LEX = MonomialOrder("lex")


class MultiPoly:
    """Polynomial as a map from exponent tuples to nonzero coefficients."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Mapping[Monomial, object] | None = None):
        self.nvars = nvars
        clean = {}
        for mono, c in (terms or {}).items():
            mono = tuple(int(e) for e in mono)
            if len(mono) != nvars or any(e < 0 for e in mono):
                raise ValueError(f"bad exponent vector {mono} for {nvars} variables")
            c = gq(c)
            if c:
                clean[mono] = clean.get(mono, ZERO) + c
                if not clean[mono]:
                    del clean[mono]
        self.terms = clean

    @classmethod
    def _from_clean(cls, nvars: int, terms: dict) -> "MultiPoly":
        p = object.__new__(cls)
        p.nvars = nvars
        p.terms = terms
        return p

    @classmethod
    def var(cls, i: int, nvars: int) -> "MultiPoly":
        e = [0] * nvars
        e[i] = 1
        return cls._from_clean(nvars, {tuple(e): ONE})

    @classmethod
    def const(cls, c, nvars: int) -> "MultiPoly":
        c = gq(c)
        return cls._from_clean(nvars, {(0,) * nvars: c} if c else {})

    @classmethod
    def zero(cls, nvars: int) -> "MultiPoly":
        return cls._from_clean(nvars, {})

    # -- structure ---------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def degree(self) -> int:
        """Maximum total degree; -1 for the zero polynomial."""
        return max((sum(m) for m in self.terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({sum(m) for m in self.terms}) <= 1

    def leading_monomial(self, order: MonomialOrder = GRLEX) -> Monomial:
        if not self.terms:
            raise ValueError("zero polynomial has no leading monomial")
        return max(self.terms, key=order.key(self.nvars))

    def leading_coefficient(self, order: MonomialOrder = GRLEX) -> GaussianRational:
        return self.terms[self.leading_monomial(order)]

    # -- arithmetic --------------------------------------------------------
    def _check(self, other: "MultiPoly"):
        if other.nvars != self.nvars:
            raise ValueError("polynomials over different variable sets")

    def __add__(self, other):
        if not isinstance(other, MultiPoly):
            other = MultiPoly.const(other, self.nvars)
        self._check(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = out.get(m, ZERO) + c
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return MultiPoly._from_clean(self.nvars, out)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly._from_clean(self.nvars, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, MultiPoly):
            other = MultiPoly.const(other, self.nvars)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, MultiPoly):
            c = gq(other)
            if not c:
                return MultiPoly.zero(self.nvars)
            return MultiPoly._from_clean(self.nvars, {m: v * c for m, v in self.terms.items()})
        self._check(other)
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                v = out.get(m, ZERO) + c1 * c2
                if v:
                    out[m] = v
                else:
                    out.pop(m, None)
        return MultiPoly._from_clean(self.nvars, out)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        result = MultiPoly.const(1, self.nvars)
        for _ in range(e):
            result = result * self
        return result

    def mul_monomial(self, mono: Monomial, c=ONE) -> "MultiPoly":
        return MultiPoly._from_clean(
            self.nvars, {tuple(a + b for a, b in zip(m, mono)): v * c for m, v in self.terms.items()})

    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            return self.nvars == other.nvars and self.terms == other.terms
        try:
            return self == MultiPoly.const(other, self.nvars)
        except TypeError:
            return NotImplemented

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    def evaluate(self, point: Sequence):
        """Evaluate at a point; exact if all coordinates are exact, else complex."""
        exact = all(not isinstance(x, (float, complex, np.floating, np.complexfloating)) for x in point)
        if exact:
            pt = [gq(x) for x in point]
            total = ZERO
            for m, c in self.terms.items():
                t = c
                for x, e in zip(pt, m):
                    if e:
                        t = t * x ** e
                total = total + t
            return total
        total = 0j
        for m, c in self.terms.items():
            t = complex(c)
            for x, e in zip(point, m):
                if e:
                    t *= complex(x) ** e
            total += t
        return total

    def exact_divide(self, other: "MultiPoly") -> "MultiPoly":
        """Quotient of an exact division; raises ArithmeticError on remainder."""
        q, r = divide(self, [other])
        if not r.is_zero():
            raise ArithmeticError("polynomial division is not exact")
        return q[0]

    def content_free(self) -> "MultiPoly":
        """Primitive Gaussian-integer multiple with a normalized leading unit."""
        return _primitive(self, GRLEX)

    def to_dump(self, names: Sequence[str] | None = None, order: MonomialOrder = GRLEX) -> str:
        """Human-readable canonical form, terms in descending ``order``."""
        if not self.terms:
            return "0"
        names = names or [f"x{i}" for i in range(self.nvars)]
        key = order.key(self.nvars)
        parts = []
        for m in sorted(self.terms, key=key, reverse=True):
            mono = " ".join(f"{names[i]}^{e}" if e > 1 else names[i] for i, e in enumerate(m) if e)
            c = self.terms[m]
            parts.append(f"({c})" + (f" · {mono}" if mono else ""))
        return " + ".join(parts)

    def __repr__(self):
        return f"MultiPoly({self.to_dump()})"


def _primitive(p: MultiPoly, order: MonomialOrder) -> MultiPoly:
    if not p.terms:
        return p
    q = 1
    for c in p.terms.values():
        _, _, cq = c.gaussian_integer()
        q = q * cq // math.gcd(q, cq)
    ints = {}
    g = 0
    for m, c in p.terms.items():
        a, b, cq = c.gaussian_integer()
        a, b = a * (q // cq), b * (q // cq)
        ints[m] = (a, b)
        g = math.gcd(g, a, b)
    a, b = ints[p.leading_monomial(order)]
    # multiply by a unit so the leading coefficient has re > 0, im >= 0
    if a > 0 and b >= 0:
        u = (1, 0)
    elif a <= 0 and b > 0:
        u = (0, -1)
    elif a < 0 and b <= 0:
        u = (-1, 0)
    else:
        u = (0, 1)
    out = {}
    for m, (a, b) in ints.items():
        ra, rb = a * u[0] - b * u[1], a * u[1] + b * u[0]
        out[m] = GaussianRational._raw(ra // g, rb // g, 1)
    return MultiPoly._from_clean(p.nvars, out)


def _divides(a: Monomial, b: Monomial) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _mono_sub(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x - y for x, y in zip(a, b))


def _lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(max(x, y) for x, y in zip(a, b))


def divide(f: MultiPoly, divisors: Sequence[MultiPoly], order: MonomialOrder = GRLEX):
    """Multivariate division algorithm; returns (quotients, remainder)."""
    key = order.key(f.nvars)
    lms = [g.leading_monomial(order) for g in divisors]
    lcs = [g.terms[m] for g, m in zip(divisors, lms)]
    quots = [dict() for _ in divisors]
    p = dict(f.terms)
    rem: dict = {}
    while p:
        lt = max(p, key=key)
        c = p[lt]
        for i, (g, lm) in enumerate(zip(divisors, lms)):
            if _divides(lm, lt):
                t = _mono_sub(lt, lm)
                coef = c / lcs[i]
                quots[i][t] = quots[i].get(t, ZERO) + coef
                for m, v in g.terms.items():
                    mm = tuple(a + b for a, b in zip(m, t))
                    nv = p.get(mm, ZERO) - coef * v
                    if nv:
                        p[mm] = nv
                    else:
                        p.pop(mm, None)
                break
        else:
            rem[lt] = c
            del p[lt]
    return [MultiPoly(f.nvars, q) for q in quots], MultiPoly._from_clean(f.nvars, rem)


# -- Buchberger ----------------------------------------------------------------

@dataclass
class GroebnerStats:
    steps: int = 0
    pairs: int = 0
    early_exit: bool = False


class _Reducer:
    """Fraction-free top reduction with a global step counter."""

    def __init__(self, order: MonomialOrder, nvars: int, budget: int | None, stats: GroebnerStats):
        self.order = order
        self.key = order.key(nvars)
        self.budget = budget
        self.stats = stats

    def tick(self):
        self.stats.steps += 1
        if self.budget is not None and self.stats.steps > self.budget:
            raise BudgetExhausted(self.stats.steps, self.budget)

    def reduce(self, f: MultiPoly, basis: list[MultiPoly], lms: list[Monomial], full: bool = False) -> MultiPoly:
        p = dict(f.terms)
        key = self.key
        done: set = set()
        while True:
            cands = [m for m in p if m not in done]
            if not cands:
                break
            lt = max(cands, key=key)
            for g, lm in zip(basis, lms):
                if _divides(lm, lt):
                    break
            else:
                if not full:
                    break
                done.add(lt)
                continue
            self.tick()
            t = _mono_sub(lt, lm)
            cf = p[lt]
            cg = g.terms[lm]
            # p <- cg * p - cf * t * g keeps integrality
            gcf = _int_gcd_scalars(cf, cg)
            if gcf is not None:
                cf, cg = gcf
            if cg != ONE:
                p = {m: v * cg for m, v in p.items()}
            for m, v in g.terms.items():
                mm = tuple(a + b for a, b in zip(m, t))
                nv = p.get(mm, ZERO) - cf * v
                if nv:
                    p[mm] = nv
                else:
                    p.pop(mm, None)
            if len(p) > 0 and self.stats.steps % 8 == 0:
                p = _primitive(MultiPoly._from_clean(f.nvars, p), self.order).terms
        out = MultiPoly._from_clean(f.nvars, p)
        return _primitive(out, self.order) if p else out


def _int_gcd_scalars(a: GaussianRational, b: GaussianRational):
    """Cancel a common integer factor between two real integer scalars."""
    aa, ab, aq = a.gaussian_integer()
    ba, bb, bq = b.gaussian_integer()
    if ab or bb or aq != 1 or bq != 1:
        return None
    g = math.gcd(aa, ba)
    if g == 1:
        return None
    return GaussianRational._raw(aa // g, 0, 1), GaussianRational._raw(ba // g, 0, 1)


def s_polynomial(f: MultiPoly, g: MultiPoly, order: MonomialOrder = GRLEX) -> MultiPoly:
    lf, lg = f.leading_monomial(order), g.leading_monomial(order)
    l = _lcm(lf, lg)
    return (f.mul_monomial(_mono_sub(l, lf), g.terms[lg])
            - g.mul_monomial(_mono_sub(l, lg), f.terms[lf]))


def _has_all_pure_powers(lms: Iterable[Monomial], nvars: int) -> bool:
    seen = set()
    for m in lms:
        nz = [i for i, e in enumerate(m) if e]
        if len(nz) == 1:
            seen.add(nz[0])
        elif not nz:
            return True
    return len(seen) == nvars


def _linear_interreduce(polys: list[MultiPoly], order: MonomialOrder) -> list[MultiPoly]:
    """Gauss-eliminate coefficient vectors within each homogeneous degree."""
    if not polys or not all(p.is_homogeneous() for p in polys):
        return polys
    key = order.key(polys[0].nvars)
    by_deg: dict[int, list[MultiPoly]] = {}
    for p in polys:
        by_deg.setdefault(p.degree, []).append(p)
    out = []
    for deg in sorted(by_deg):
        rows = [dict(p.terms) for p in by_deg[deg]]
        monos = sorted({m for r in rows for m in r}, key=key, reverse=True)
        reduced: list[dict] = []
        for m in monos:
            piv = next((r for r in rows if m in r), None)
            if piv is None:
                continue
            rows.remove(piv)
            pc = piv[m]
            new_rows = []
            for r in rows:
                if m in r:
                    f = r[m] / pc
                    nr = dict(r)
                    for mm, v in piv.items():
                        nv = nr.get(mm, ZERO) - f * v
                        if nv:
                            nr[mm] = nv
                        else:
                            nr.pop(mm, None)
                    r = nr
                if r:
                    new_rows.append(r)
            rows = new_rows
            reduced.append(piv)
        out.extend(_primitive(MultiPoly._from_clean(polys[0].nvars, r), order) for r in reduced)
    return out


def buchberger(gens: Sequence[MultiPoly], order: MonomialOrder = GRLEX, budget: int | None = None,
               stats: GroebnerStats | None = None, stop_when_zero_dimensional: bool = False,
               reduced: bool = True) -> list[MultiPoly]:
    """Groebner basis of the ideal generated by ``gens``.

    Uses the normal selection strategy with Buchberger's product criterion and
    the Gebauer-Moeller chain criterion.  Each elementary reduction counts as
    one step against ``budget``; exceeding it raises :class:`BudgetExhausted`.
    With ``stop_when_zero_dimensional`` the run stops as soon as the leading
    monomials contain a pure power of every variable (the result is then a
    generating set, not necessarily a Groebner basis).
    """
    stats = stats if stats is not None else GroebnerStats()
    gens = [g for g in gens if not g.is_zero()]
    if not gens:
        return []
    nvars = gens[0].nvars
    for g in gens:
        if g.nvars != nvars:
            raise ValueError("generators over different variable sets")
    key = order.key(nvars)
    red = _Reducer(order, nvars, budget, stats)

    basis: list[MultiPoly] = []
    lms: list[Monomial] = []
    pairs: list[tuple[int, int]] = []

    def pair_key(pr):
        l = _lcm(lms[pr[0]], lms[pr[1]])
        return (sum(l), key(l), pr)

    def add(h: MultiPoly):
        nonlocal pairs
        h_lm = h.leading_monomial(order)
        k = len(basis)
        basis.append(h)
        lms.append(h_lm)
        # Gebauer-Moeller update
        new = [(i, k) for i in range(k) if lms[i] is not None]
        lcm_new = {i: _lcm(lms[i], h_lm) for i, _ in new}
        keep_new = []
        for i, _ in new:
            li = lcm_new[i]
            coprime = all(a == 0 or b == 0 for a, b in zip(lms[i], h_lm))
            dominated = any(j != i and _divides(lcm_new[j], li) and lcm_new[j] != li for j, _ in new)
            if dominated:
                continue
            keep_new.append((i, li, coprime))
        # among equal lcms keep one, dropping all if any is coprime
        groups: dict = {}
        for i, li, cop in keep_new:
            groups.setdefault(li, []).append((i, cop))
        chosen = []
        for li, members in groups.items():
            if any(c for _, c in members):
                continue
            chosen.append((members[0][0], k))
        # chain criterion on old pairs
        survivors = []
        for (i, j) in pairs:
            lij = _lcm(lms[i], lms[j])
            if (_divides(h_lm, lij) and _lcm(lms[i], h_lm) != lij and _lcm(lms[j], h_lm) != lij):
                continue
            survivors.append((i, j))
        pairs = survivors + chosen
        # retire basis elements whose leading monomial is now divisible by h's
        for i in range(k):
            if lms[i] is not None and _divides(h_lm, lms[i]):
                pass  # kept for correctness of pairs; final reduction trims them

    for g in sorted(_linear_interreduce(gens, order), key=lambda p: key(p.leading_monomial(order))):
        h = red.reduce(g, basis, lms)
        if not h.is_zero():
            add(h)
            if stop_when_zero_dimensional and _has_all_pure_powers(lms, nvars):
                stats.early_exit = True
                return list(basis)

    while pairs:
        pairs.sort(key=pair_key)
        i, j = pairs.pop(0)
        stats.pairs += 1
        red.tick()
        s = s_polynomial(basis[i], basis[j], order)
        if s.is_zero():
            continue
        h = red.reduce(s, basis, lms)
        if h.is_zero():
            continue
        add(h)
        if stop_when_zero_dimensional and _has_all_pure_powers(lms, nvars):
            stats.early_exit = True
            return list(basis)

    return reduce_basis(basis, order, red) if reduced else list(basis)


def reduce_basis(basis: Sequence[MultiPoly], order: MonomialOrder = GRLEX, reducer: _Reducer | None = None
                 ) -> list[MultiPoly]:
    """Minimal, fully interreduced basis with primitive, unit-normalized members."""
    if not basis:
        return []
    nvars = basis[0].nvars
    key = order.key(nvars)
    red = reducer or _Reducer(order, nvars, None, GroebnerStats())
    polys = sorted(basis, key=lambda p: key(p.leading_monomial(order)))
    lms = [p.leading_monomial(order) for p in polys]
    minimal = []
    for idx, (p, lm) in enumerate(zip(polys, lms)):
        if any(_divides(lms[j], lm) and (lms[j] != lm or j < idx) for j in range(len(polys)) if j != idx):
            continue
        minimal.append(p)
    out = []
    for idx, p in enumerate(minimal):
        others = minimal[:idx] + minimal[idx + 1:]
        r = red.reduce(p, others, [q.leading_monomial(order) for q in others], full=True)
        out.append(r)
    return sorted(out, key=lambda p: key(p.leading_monomial(order)), reverse=True)


def is_groebner_basis(basis: Sequence[MultiPoly], order: MonomialOrder = GRLEX) -> bool:
    """Every S-polynomial reduces to zero modulo ``basis``."""
    for a in range(len(basis)):
        for b in range(a + 1, len(basis)):
            _, r = divide(s_polynomial(basis[a], basis[b], order), basis, order)
            if not r.is_zero():
                return False
    return True


def variety_is_only_origin(gens: Sequence[MultiPoly], order: MonomialOrder = GRLEX,
                           budget: int | None = None, stats: GroebnerStats | None = None) -> bool:
    """True iff the homogeneous ideal's only common complex zero is the origin."""
    gens = [g for g in gens if not g.is_zero()]
    if not gens:
        return False
    for g in gens:
        if not g.is_homogeneous():
            raise ValueError("variety_is_only_origin expects homogeneous generators")
    nvars = gens[0].nvars
    basis = buchberger(gens, order, budget=budget, stats=stats, stop_when_zero_dimensional=True,
                       reduced=False)
    return _has_all_pure_powers((p.leading_monomial(order) for p in basis), nvars)


# -- binary forms ----------------------------------------------------------------

def _univariate(coeffs_low_to_high: list[GaussianRational]) -> list[GaussianRational]:
    c = list(coeffs_low_to_high)
    while c and not c[-1]:
        c.pop()
    return c


def _upoly_rem(a: list, b: list) -> list:
    a = list(a)
    inv = b[-1].inverse()
    while len(a) >= len(b):
        f = a[-1] * inv
        shift = len(a) - len(b)
        for i, bc in enumerate(b):
            a[shift + i] = a[shift + i] - f * bc
        a.pop()
        while a and not a[-1]:
            a.pop()
    return a


def _upoly_gcd(a: list, b: list) -> list:
    a, b = _univariate(a), _univariate(b)
    while b:
        a, b = b, _upoly_rem(a, b)
    if not a:
        return a
    inv = a[-1].inverse()
    return [x * inv for x in a]


def _split_binary(p: MultiPoly) -> tuple[int, list[GaussianRational]]:
    """Write p(b0, b1) = b0^s * g with g(0, 1) != 0; return s and g(1, t) low-to-high."""
    deg = p.degree
    coeffs = [p.terms.get((deg - j, j), ZERO) for j in range(deg + 1)]  # coefficient of b0^(deg-j) b1^j
    # b0 power = deg - (highest j with nonzero coefficient)
    jmax = max(j for j, c in enumerate(coeffs) if c)
    return deg - jmax, coeffs[: jmax + 1]


@dataclass
class BinaryGCD:
    """GCD of binary forms plus its projective roots ``(b0, b1)``."""

    gcd: MultiPoly
    roots: list[tuple[complex, complex]] = field(default_factory=list)
    closed_form: bool = True

    @property
    def degree(self) -> int:
        return self.gcd.degree


def binary_form_gcd(polys: Sequence[MultiPoly]) -> BinaryGCD:
    """GCD of homogeneous polynomials in two variables ``(b0, b1)``.

    The inputs share a projective root iff the GCD has degree >= 1.  Roots
    are returned as pairs; ``b0 == 0`` marks the point at infinity of the
    affine parameter ``b1 / b0``.
    """
    nz = [p for p in polys if not p.is_zero()]
    if not nz:
        raise ValueError("binary_form_gcd of all-zero inputs is undefined")
    for p in nz:
        if p.nvars != 2 or not p.is_homogeneous():
            raise ValueError("binary_form_gcd expects homogeneous forms in two variables")
    shifts, unis = zip(*(_split_binary(p) for p in nz))
    s = min(shifts)
    g = list(unis[0])
    for u in unis[1:]:
        g = _upoly_gcd(g, u)
    g = _upoly_gcd(g, g) if len(unis) == 1 else g
    dg = len(g) - 1
    terms = {}
    for j, c in enumerate(g):
        if c:
            terms[(dg - j + s, j)] = c
    gcd_poly = _primitive(MultiPoly._from_clean(2, terms), GRLEX)
    roots: list[tuple[complex, complex]] = []
    if s:
        roots.append((0j, 1 + 0j))
    closed = True
    if dg >= 1:
        affine = [complex(c) for c in g]
        if dg <= 4:
            ts = closed_form_roots(affine)
        else:
            closed = False
            ts = list(np.roots(affine[::-1]))
        ts = [_polish_root(affine, t) for t in ts]
        roots.extend((1 + 0j, complex(t)) for t in ts)
    return BinaryGCD(gcd_poly, roots, closed)


def _polish_root(c_low: list[complex], t: complex, iters: int = 3) -> complex:
    for _ in range(iters):
        p = dp = 0j
        for c in reversed(c_low):
            dp = dp * t + p
            p = p * t + c
        if dp == 0:
            break
        step = p / dp
        if not cmath.isfinite(step):
            break
        t -= step
    return t


def closed_form_roots(c_low: Sequence[complex]) -> list[complex]:
    """Roots of a polynomial of degree 1..4 by radicals (coefficients low-to-high)."""
    c = [complex(x) for x in c_low]
    while len(c) > 1 and c[-1] == 0:
        c.pop()
    n = len(c) - 1
    if n < 1:
        return []
    a = [x / c[-1] for x in c]  # monic, low-to-high
    if n == 1:
        return [-a[0]]
    if n == 2:
        b, q = a[1], a[0]
        disc = cmath.sqrt(b * b - 4 * q)
        r1 = (-b - disc) / 2 if abs(-b - disc) >= abs(-b + disc) else (-b + disc) / 2
        r2 = q / r1 if r1 != 0 else -b - r1
        return [r1, r2]
    if n == 3:
        return _cubic_roots(a[2], a[1], a[0])
    return _quartic_roots(a[3], a[2], a[1], a[0])


def _cbrt(z: complex) -> complex:
    if z == 0:
        return 0j
    return cmath.exp(cmath.log(z) / 3)


def _cubic_roots(b: complex, c: complex, d: complex) -> list[complex]:
    # t^3 + b t^2 + c t + d; depressed by t = y - b/3
    p = c - b * b / 3
    q = 2 * b ** 3 / 27 - b * c / 3 + d
    shift = -b / 3
    if abs(p) < 1e-300 and abs(q) < 1e-300:
        return [shift] * 3
    disc = cmath.sqrt(q * q / 4 + p ** 3 / 27)
    u3 = -q / 2 + disc
    if abs(u3) < abs(-q / 2 - disc):
        u3 = -q / 2 - disc
    u = _cbrt(u3)
    w = complex(-0.5, math.sqrt(3) / 2)
    roots = []
    for k in range(3):
        uk = u * w ** k
        vk = -p / (3 * uk) if uk != 0 else 0j
        roots.append(uk + vk + shift)
    return roots


def _quartic_roots(b: complex, c: complex, d: complex, e: complex) -> list[complex]:
    # Ferrari: depress t = y - b/4 -> y^4 + p y^2 + q y + r
    shift = -b / 4
    p = c - 3 * b * b / 8
    q = d - b * c / 2 + b ** 3 / 8
    r = e - b * d / 4 + b * b * c / 16 - 3 * b ** 4 / 256
    if abs(q) < 1e-14 * max(1.0, abs(p), abs(r)):
        # biquadratic
        zs = closed_form_roots([r, p, 1])
        out = []
        for z in zs:
            s = cmath.sqrt(z)
            out.extend([s + shift, -s + shift])
        return out
    # resolvent cubic: m^3 + p m^2 + (p^2/4 - r) m - q^2/8 = 0
    ms = _cubic_roots(p, p * p / 4 - r, -q * q / 8)
    m = max(ms, key=abs)
    s = cmath.sqrt(2 * m)
    out = []
    for sign in (1, -1):
        # y^2 + sign*s*y + (p/2 + m - sign*q/(2 s))
        bq = sign * s
        cq = p / 2 + m - sign * q / (2 * s)
        out.extend(y + shift for y in closed_form_roots([cq, bq, 1]))
    return out
