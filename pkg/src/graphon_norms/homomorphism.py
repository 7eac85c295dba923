"""Homomorphism densities t(F, W) of simple undirected motifs in step graphons."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .errors import BudgetExceeded, KernelValidationError
from .kernel import StepKernel, as_graphon
from .norms import SPECTRAL_TOL, hs_norm_squared, weighted_eigenvalues

MAX_MOTIF_VERTICES = 8
MAX_BLOCKS = 10


@dataclass(frozen=True)
class Motif:
    """Simple undirected graph; edges are stored once, as sorted pairs ``i < j``."""

    vertex_count: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        n = int(self.vertex_count)
        if n < 1:
            raise KernelValidationError("a motif needs at least one vertex")
        canon = []
        for e in self.edges:
            i, j = (int(x) for x in e)
            if i == j:
                raise KernelValidationError(f"self-loop at vertex {i}")
            if not (0 <= i < n and 0 <= j < n):
                raise KernelValidationError(f"edge ({i}, {j}) out of range for {n} vertices")
            canon.append((min(i, j), max(i, j)))
        if len(set(canon)) != len(canon):
            raise KernelValidationError("duplicate edge")
        object.__setattr__(self, "vertex_count", n)
        object.__setattr__(self, "edges", tuple(sorted(canon)))

    @classmethod
    def edge(cls) -> "Motif":
        """C2 read as a simple graph: two vertices, one edge."""
        return cls(2, ((0, 1),))

    @classmethod
    def cycle(cls, k: int) -> "Motif":
        if k < 3:
            raise KernelValidationError("cycles need at least 3 vertices")
        return cls(k, tuple((i, (i + 1) % k) for i in range(k)))

    @classmethod
    def complete(cls, k: int) -> "Motif":
        return cls(k, tuple(combinations(range(k), 2)))

    def relabel(self, perm) -> "Motif":
        return Motif(self.vertex_count, tuple((perm[i], perm[j]) for i, j in self.edges))

    def disjoint_union(self, other: "Motif") -> "Motif":
        shift = self.vertex_count
        return Motif(
            self.vertex_count + other.vertex_count,
            self.edges + tuple((i + shift, j + shift) for i, j in other.edges),
        )


def hom_density(
    f: Motif,
    g: StepKernel,
    max_vertices: int = MAX_MOTIF_VERTICES,
    max_blocks: int = MAX_BLOCKS,
) -> float:
    """Exact ``t(F, W)`` for a step graphon.

    The integral over ``[0,1]^V`` is the sum over block assignments
    ``phi: V -> blocks`` of ``prod_v w[phi(v)] * prod_{ij in E} K[phi(i), phi(j)]``.
    That sum is a tensor contraction with one index per motif vertex, which
    ``einsum`` evaluates without materializing all ``n^|V|`` terms.  Isolated
    vertices contribute ``sum(w) = 1``.
    """
    g = as_graphon(g)
    if f.vertex_count > max_vertices or g.n_blocks > max_blocks:
        raise BudgetExceeded(
            f"motif with {f.vertex_count} vertices on {g.n_blocks} blocks exceeds "
            f"the budget ({max_vertices} vertices, {max_blocks} blocks)"
        )
    operands = []
    for v in range(f.vertex_count):
        operands += [g.weights, [v]]
    for i, j in f.edges:
        operands += [g.values, [i, j]]
    value = float(np.einsum(*operands, [], optimize="greedy"))
    return min(max(value, 0.0), 1.0)


def edge_density(g: StepKernel) -> float:
    """``int int W``, which is t(C2, W) for the single-edge motif."""
    g = as_graphon(g)
    return float(g.weights @ g.values @ g.weights)


@dataclass(frozen=True)
class ErrataWitness:
    t_c2: float
    hs_squared: float
    gap: float


def errata_gap(g: StepKernel) -> ErrataWitness:
    """Compare t(C2, W) = int W with ||T_W||_HS^2 = int W^2.

    They agree exactly when W is {0, 1}-valued and differ otherwise.
    """
    g = as_graphon(g)
    t = edge_density(g)
    hs2 = hs_norm_squared(g)
    return ErrataWitness(t, hs2, t - hs2)


def cycle_density_spectral(k: int, g: StepKernel, tol: float = SPECTRAL_TOL) -> float:
    """``t(C_k, W) = sum_i lambda_i^k`` over the spectrum of T_W, for k >= 3."""
    if k < 3:
        raise KernelValidationError("spectral cycle density needs k >= 3")
    g = as_graphon(g)
    eig = weighted_eigenvalues(g, tol=tol)
    return float(np.sum(eig**k))
