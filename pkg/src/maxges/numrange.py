"""k-product numerical ranges: sampling, optimised extremes and the
projector criteria for GES (biproduct) and CES (fully product) subspaces."""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

import numpy as np

from .cuts import enumerate_cuts
from .seesaw import SeesawConfig, assemble_state, random_factors, seesaw_max
from .subspace import SystemShape

HERMITIAN_TOL = 1e-10
PROJECTOR_TOL = 1e-10


def operator_id(a: np.ndarray) -> str:
    a = np.ascontiguousarray(np.asarray(a, dtype=complex))
    return hashlib.sha256(a.tobytes()).hexdigest()[:16]


def set_partitions(n: int, k: int) -> list[tuple[tuple[int, ...], ...]]:
    """All unordered partitions of ``0..n-1`` into ``k`` nonempty blocks, blocks sorted."""
    out = []

    def rec(i: int, blocks: list[list[int]]):
        if i == n:
            if len(blocks) == k:
                out.append(tuple(tuple(b) for b in blocks))
            return
        if len(blocks) + (n - i) < k:
            return
        for b in blocks:
            b.append(i)
            rec(i + 1, blocks)
            b.pop()
        if len(blocks) < k:
            blocks.append([i])
            rec(i + 1, blocks)
            blocks.pop()

    rec(0, [])
    return out


def _check_operator(a: np.ndarray, shape: SystemShape) -> np.ndarray:
    a = np.asarray(a, dtype=complex)
    if a.shape != (shape.dim, shape.dim):
        raise ValueError(f"operator of shape {a.shape} does not act on d^n = {shape.dim}")
    return a


def _check_hermitian(a: np.ndarray) -> None:
    if not np.allclose(a, a.conj().T, atol=HERMITIAN_TOL, rtol=0):
        raise ValueError("operator is not Hermitian within 1e-10")


@dataclass
class RangeSample:
    operator: str
    k: int
    points: np.ndarray
    extremes: tuple[float, float]  # (max real part, min real part)
    samples: int
    seed: int

    def dump(self) -> str:
        """Plain text, one ``re im`` pair per line."""
        return "".join(f"{z.real:.17g} {z.imag:.17g}\n" for z in self.points)


def sample_k_product_range(a: np.ndarray, shape: SystemShape, k: int, samples: int, seed: int = 0) -> RangeSample:
    """Random points of the k-product numerical range of ``a``.

    Each sample picks a k-partition uniformly among all of them, then
    independent Gaussian unit factors on the blocks.
    """
    a = _check_operator(a, shape)
    if not 2 <= k <= shape.n:
        raise ValueError(f"need 2 <= k <= n, got k = {k}")
    if samples < 1:
        raise ValueError("samples must be positive")
    rng = np.random.default_rng(seed)
    parts = set_partitions(shape.n, k)
    dims = [shape.d] * shape.n
    choice = rng.integers(len(parts), size=samples)
    points = np.empty(samples, dtype=complex)
    for p_idx in np.unique(choice):
        where = np.flatnonzero(choice == p_idx)
        groups = [list(b) for b in parts[p_idx]]
        sizes = [shape.d ** len(b) for b in groups]
        factors = random_factors(rng, len(where), sizes)
        for j, row in enumerate(where):
            psi = assemble_state([f[j] for f in factors], dims, groups)
            points[row] = np.vdot(psi, a @ psi)
    return RangeSample(operator_id(a), k, points, (float(points.real.max()), float(points.real.min())), samples, seed)


@dataclass
class Extremes:
    maximum: float
    minimum: float
    argmax: np.ndarray
    argmin: np.ndarray


def _best_over_groupings(a, shape, groupings, cfg, seed_tag, inits=None):
    dims = [shape.d] * shape.n
    best = None
    for gi, groups in enumerate(groupings):
        rng = np.random.default_rng([cfg.seed, seed_tag, gi])
        init = inits.get(tuple(map(tuple, groups))) if inits else None
        r = seesaw_max(a, dims, groups, cfg, rng, init=init)
        if best is None or r.value > best[0]:
            best = (r.value, r.state, groups, r.factors)
    return best


def _bipartition_groups(shape: SystemShape) -> list[list[list[int]]]:
    return [[[p - 1 for p in c.S], [p - 1 for p in c.Sbar]] for c in enumerate_cuts(shape, include_first=True)]


def biproduct_extremes(a: np.ndarray, shape: SystemShape, cfg: SeesawConfig | None = None) -> Extremes:
    """Max and min of <psi|a|psi> over biproduct unit vectors (all cuts)."""
    cfg = cfg or SeesawConfig()
    a = _check_operator(a, shape)
    _check_hermitian(a)
    groupings = _bipartition_groups(shape)
    hi = _best_over_groupings(a, shape, groupings, cfg, 1)
    lo = _best_over_groupings(-a, shape, groupings, cfg, 2)
    return Extremes(hi[0], -lo[0], hi[1], lo[1])


def product_maximum(a: np.ndarray, shape: SystemShape, cfg: SeesawConfig | None = None) -> tuple[float, np.ndarray]:
    """Max over fully product unit vectors, one factor per party."""
    cfg = cfg or SeesawConfig()
    a = _check_operator(a, shape)
    _check_hermitian(a)
    best = _best_over_groupings(a, shape, [[[p] for p in range(shape.n)]], cfg, 3)
    return best[0], best[1]


def _coarsen_factors(fine_groups, fine_factors, coarse_groups, d):
    """Factors on ``coarse_groups`` reproducing the product state on ``fine_groups``."""
    out = []
    for cg in coarse_groups:
        members = [(g, f) for g, f in zip(fine_groups, fine_factors) if set(g) <= set(cg)]
        local = {p: i for i, p in enumerate(cg)}
        groups = [[local[p] for p in g] for g, _ in members]
        out.append(assemble_state([f for _, f in members], [d] * len(cg), groups))
    return out


def _refines(fine, coarse) -> bool:
    return all(any(set(g) <= set(c) for c in coarse) for g in fine)


def inclusion_chain_maxima(a: np.ndarray, shape: SystemShape, cfg: SeesawConfig | None = None) -> dict[int, float]:
    """Estimated max of the k-product range for k = n, ..., 2 plus ``lambda_max`` under key 1.

    Each level warm-starts every coarsening of the previous level's best
    state, so the see-saw's monotonicity makes the estimates nondecreasing
    in coarseness.
    """
    cfg = cfg or SeesawConfig()
    a = _check_operator(a, shape)
    _check_hermitian(a)
    out = {}
    prev = None
    for k in range(shape.n, 1, -1):
        groupings = [[list(b) for b in p] for p in set_partitions(shape.n, k)]
        inits = {}
        if prev is not None:
            _, _, fine_groups, fine_factors = prev
            for g in groupings:
                if _refines(fine_groups, g):
                    inits[tuple(map(tuple, g))] = _coarsen_factors(fine_groups, fine_factors, g, shape.d)
        prev = _best_over_groupings(a, shape, groupings, cfg, 10 + k, inits)
        out[k] = prev[0]
    out[1] = float(np.linalg.eigvalsh(a)[-1])
    return out


@dataclass
class RangeVerdict:
    ges: str  # "GES-numeric" | "NOT_GES"
    ces: str  # "CES-numeric" | "NOT_CES"
    biproduct_max: float
    product_max: float


def check_projector(p: np.ndarray) -> np.ndarray:
    p = np.asarray(p, dtype=complex)
    if p.ndim != 2 or p.shape[0] != p.shape[1]:
        raise ValueError("projector must be a square matrix")
    if not (np.allclose(p, p.conj().T, atol=PROJECTOR_TOL, rtol=0)
            and np.allclose(p @ p, p, atol=PROJECTOR_TOL, rtol=0)):
        raise ValueError("operator is not an orthogonal projector within 1e-10")
    return p


def ges_check_via_range(p: np.ndarray, shape: SystemShape, cfg: SeesawConfig | None = None) -> RangeVerdict:
    """GES iff 1 is outside the biproduct range of ``p``; CES iff outside the product range."""
    cfg = cfg or SeesawConfig()
    p = check_projector(_check_operator(p, shape))
    bi = biproduct_extremes(p, shape, cfg).maximum
    prod, _ = product_maximum(p, shape, cfg)
    return RangeVerdict("GES-numeric" if bi < cfg.found else "NOT_GES",
                        "CES-numeric" if prod < cfg.found else "NOT_CES", bi, prod)


def random_hermitian(dim: int, rng: np.random.Generator) -> np.ndarray:
    m = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return (m + m.conj().T) / 2

