"""Alternating (see-saw) maximisation of <x|H|x> over k-product unit vectors.

Each half-step fixes all factors but one; the optimal free factor is the
dominant eigenvector of the partially contracted operator, so the objective
never decreases.  All restarts run as one numpy batch.
"""

from __future__ import annotations

import string
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .linalg import dominant_eigenpair

MONOTONE_SLACK = 1e-12


@dataclass(frozen=True)
class SeesawConfig:
    restarts: int = 64
    max_sweeps: int = 500
    tol: float = 1e-12
    found: float = 1 - 1e-7
    seed: int = 0

    def __post_init__(self):
        if self.restarts < 1 or self.max_sweeps < 1:
            raise ValueError("restarts and max_sweeps must be >= 1")
        if not 0 < self.tol < 1 - self.found:
            raise ValueError("need 0 < tol < 1 - found")


@dataclass
class SeesawResult:
    value: float
    state: np.ndarray
    factors: list[np.ndarray]
    values: np.ndarray  # final objective per restart
    sweeps: np.ndarray  # sweeps used per restart
    converged: np.ndarray  # bool per restart
    history: list[np.ndarray] = field(default_factory=list, repr=False)
    batch_factors: list[np.ndarray] = field(default_factory=list, repr=False)  # (restarts, size) per group


def _group_dims(dims: Sequence[int], groups: Sequence[Sequence[int]]) -> list[int]:
    return [int(np.prod([dims[p] for p in g])) for g in groups]


def grouped_operator(op: np.ndarray, dims: Sequence[int], groups: Sequence[Sequence[int]]) -> np.ndarray:
    """Reshape ``op`` to a tensor with one ket and one bra leg per group."""
    n = len(dims)
    order = [p for g in groups for p in g]
    if sorted(order) != list(range(n)):
        raise ValueError("groups must partition the parties")
    t = np.asarray(op, dtype=complex).reshape(tuple(dims) * 2)
    t = t.transpose(order + [n + p for p in order])
    gd = _group_dims(dims, groups)
    return t.reshape(tuple(gd) * 2)


def assemble_state(factors: Sequence[np.ndarray], dims: Sequence[int], groups: Sequence[Sequence[int]]) -> np.ndarray:
    """Tensor the group factors and return the vector in standard party order."""
    n = len(dims)
    order = [p for g in groups for p in g]
    v = factors[0]
    for f in factors[1:]:
        v = np.kron(v, f)
    v = v.reshape([dims[p] for p in order])
    inv = np.argsort(order)
    return v.transpose(inv).reshape(-1)


def _contract_specs(k: int) -> list[str]:
    letters = string.ascii_lowercase.replace("z", "")
    kets = letters[:k]
    bras = letters[k:2 * k]
    specs = []
    for i in range(k):
        operands = [kets + bras]
        for j in range(k):
            if j != i:
                operands.append("z" + kets[j])
                operands.append("z" + bras[j])
        specs.append(",".join(operands) + "->z" + kets[i] + bras[i])
    return specs


def random_factors(rng: np.random.Generator, restarts: int, sizes: Sequence[int]) -> list[np.ndarray]:
    out = []
    for s in sizes:
        f = rng.standard_normal((restarts, s)) + 1j * rng.standard_normal((restarts, s))
        out.append(f / np.linalg.norm(f, axis=1, keepdims=True))
    return out


def seesaw_max(op: np.ndarray, dims: Sequence[int], groups: Sequence[Sequence[int]], cfg: SeesawConfig,
               rng: np.random.Generator | None = None, init: Sequence[np.ndarray] | None = None,
               record_history: bool = False) -> SeesawResult:
    """Maximise ``<x|op|x>`` over unit vectors product across ``groups``.

    ``init`` optionally supplies starting factors (one array per group, shape
    ``(restarts, size)`` or ``(size,)``); they replace the first random starts.
    """
    op = np.asarray(op, dtype=complex)
    if not np.allclose(op, op.conj().T, atol=1e-10):
        raise ValueError("see-saw needs a Hermitian operator")
    rng = rng if rng is not None else np.random.default_rng(cfg.seed)
    k = len(groups)
    sizes = _group_dims(dims, groups)
    tensor = grouped_operator(op, dims, groups)
    R = cfg.restarts
    factors = random_factors(rng, R, sizes)
    if init is not None:
        init = [np.atleast_2d(np.asarray(f, dtype=complex)) for f in init]
        m = min(R, init[0].shape[0])
        for i in range(k):
            f = init[i][:m]
            factors[i][:m] = f / np.linalg.norm(f, axis=1, keepdims=True)
    specs = _contract_specs(k)

    def objective():
        v = factors[0]
        for f in factors[1:]:
            v = (v[:, :, None] * f[:, None, :]).reshape(R, -1)
        flat = tensor.reshape(int(np.prod(sizes)), -1)
        return np.real(np.einsum("ri,ij,rj->r", v.conj(), flat, v))

    values = objective()
    converged = np.zeros(R, dtype=bool)
    sweeps = np.zeros(R, dtype=int)
    history = [values.copy()] if record_history else []
    for sweep in range(cfg.max_sweeps):
        prev = values.copy()
        for i in range(k):
            if k == 1:
                mat = np.broadcast_to(tensor, (R,) + tensor.shape)
            else:
                operands = [tensor]
                for j in range(k):
                    if j != i:
                        operands.append(factors[j].conj())
                        operands.append(factors[j])
                mat = np.einsum(specs[i], *operands, optimize=True)
            mat = 0.5 * (mat + mat.conj().transpose(0, 2, 1))
            lam, vec = dominant_eigenpair(mat)
            active = ~converged
            factors[i][active] = vec[active]
            new = np.where(active, lam, values)
            scale = np.maximum(1.0, np.abs(values))
            if np.any(new < values - MONOTONE_SLACK * scale):
                raise AssertionError("see-saw objective decreased")
            values = new
        sweeps[~converged] += 1
        if record_history:
            history.append(values.copy())
        converged |= np.abs(values - prev) < cfg.tol
        if converged.all():
            break
    best = int(np.argmax(values))
    best_factors = [f[best].copy() for f in factors]
    return SeesawResult(float(values[best]), assemble_state(best_factors, dims, groups), best_factors,
                        values, sweeps, converged, history, factors)
