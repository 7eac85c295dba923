"""Step kernels and step graphons on [0, 1]^2.

A step kernel is constant on the cells ``I_i x I_j`` of a finite partition of
[0, 1] into consecutive intervals with lengths ``weights``.  Everything in the
package works on the block representation: ``values[i, j]`` is the kernel value
on ``I_i x I_j``.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import KernelValidationError, NotAGraphonError

WEIGHT_SUM_TOL = 1e-12
SYMMETRY_TOL = 1e-12
BOUNDARY_MERGE_TOL = 1e-12

#: Identifier of the random generator used everywhere a seed is accepted.
RNG_ALGORITHM = "numpy.random.PCG64"


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=float, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class StepKernel:
    """Symmetric block-constant kernel bounded by ``bound`` in absolute value."""

    weights: np.ndarray
    values: np.ndarray
    bound: float

    def __post_init__(self):
        w = _frozen(self.weights)
        v = _frozen(self.values)
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "bound", float(self.bound))

        if w.ndim != 1 or w.size == 0:
            raise KernelValidationError("weights must be a non-empty vector")
        if v.ndim != 2 or v.shape[0] != v.shape[1]:
            raise KernelValidationError("values must be a square matrix")
        if v.shape[0] != w.size:
            raise KernelValidationError(
                f"dimension mismatch: {w.size} weights for a {v.shape[0]}x{v.shape[1]} matrix"
            )
        if not (np.all(np.isfinite(w)) and np.all(np.isfinite(v))):
            raise KernelValidationError("weights and values must be finite")
        if np.any(w <= 0):
            raise KernelValidationError("weights must be positive")
        if abs(w.sum() - 1.0) > WEIGHT_SUM_TOL:
            raise KernelValidationError(f"weights sum to {w.sum()!r}, not 1")
        if not np.array_equal(v, v.T):
            raise KernelValidationError("values not symmetric")
        if not (self.bound > 0 and np.isfinite(self.bound)):
            raise KernelValidationError("bound must be a positive real")
        if np.any(np.abs(v) > self.bound):
            raise KernelValidationError(f"values exceed bound {self.bound!r}")

    @property
    def n_blocks(self) -> int:
        return self.weights.size

    @property
    def boundaries(self) -> np.ndarray:
        """Right endpoints of the blocks; the last one is pinned to 1."""
        c = np.cumsum(self.weights)
        c[-1] = 1.0
        return c

    def mass_matrix(self) -> np.ndarray:
        """``M[i, j] = w_i w_j K_ij``, the integral of the kernel over each cell."""
        return np.outer(self.weights, self.weights) * self.values

    def symmetric_matrix(self) -> np.ndarray:
        """``S[i, j] = sqrt(w_i) K_ij sqrt(w_j)``; unitarily similar to T_W on step functions."""
        r = np.sqrt(self.weights)
        return r[:, None] * self.values * r[None, :]

    def is_graphon_valued(self) -> bool:
        return bool(np.all(self.values >= 0.0) and np.all(self.values <= 1.0))

    def digest(self) -> str:
        payload = json.dumps(
            {"weights": self.weights.tolist(), "values": self.values.tolist()},
            separators=(",", ":"),
        )
        return hashlib.sha256(payload.encode()).hexdigest()

    def __repr__(self):
        return f"{type(self).__name__}(n_blocks={self.n_blocks}, bound={self.bound!r})"


@dataclass(frozen=True, eq=False, repr=False)
class StepGraphon(StepKernel):
    """Step kernel with values in [0, 1]."""

    bound: float = field(default=1.0)

    def __post_init__(self):
        if float(self.bound) != 1.0:
            raise KernelValidationError("a graphon has bound 1")
        v = np.asarray(self.values, dtype=float)
        if np.any(v < 0.0) or np.any(v > 1.0):
            raise NotAGraphonError("graphon values must lie in [0, 1]")
        super().__post_init__()


def as_graphon(k: StepKernel) -> StepGraphon:
    """Return ``k`` as a :class:`StepGraphon`, raising if any value leaves [0, 1]."""
    if isinstance(k, StepGraphon):
        return k
    if not k.is_graphon_valued():
        raise NotAGraphonError("homomorphism density requires a graphon")
    return StepGraphon(k.weights, k.values)


@dataclass(frozen=True, eq=False)
class AdjacencyGraph:
    """Simple undirected graph stored as a dense 0/1 matrix."""

    n: int
    adjacency: np.ndarray

    def __post_init__(self):
        a = np.array(self.adjacency, dtype=np.uint8, copy=True)
        if int(self.n) < 0 or a.shape != (self.n, self.n):
            raise KernelValidationError(f"adjacency must be {self.n}x{self.n}")
        if not np.array_equal(np.asarray(self.adjacency), a):
            raise KernelValidationError("adjacency entries must be 0 or 1")
        if np.any(a > 1):
            raise KernelValidationError("adjacency entries must be 0 or 1")
        if not np.array_equal(a, a.T):
            raise KernelValidationError("adjacency not symmetric")
        if np.any(np.diag(a)):
            raise KernelValidationError("adjacency diagonal must be zero")
        a.setflags(write=False)
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "adjacency", a)

    @classmethod
    def from_edges(cls, n: int, edges) -> "AdjacencyGraph":
        a = np.zeros((n, n), dtype=np.uint8)
        for i, j in edges:
            if not (0 <= i < n and 0 <= j < n):
                raise KernelValidationError(f"edge ({i}, {j}) out of range for n={n}")
            if i == j:
                raise KernelValidationError(f"self-loop at vertex {i}")
            a[i, j] = a[j, i] = 1
        return cls(n, a)

    @property
    def edges(self) -> list[tuple[int, int]]:
        i, j = np.nonzero(np.triu(self.adjacency, 1))
        return [(int(a), int(b)) for a, b in zip(i, j)]


def make_step_kernel(values, weights, bound: float | None = None) -> StepKernel:
    """Validate and symmetrize a block matrix.

    Asymmetry up to ``SYMMETRY_TOL`` is averaged away; anything larger is an
    error.  ``bound`` defaults to the largest absolute value (or 1 for the zero
    kernel, since a bound must be positive).
    """
    v = np.asarray(values, dtype=float)
    w = np.asarray(weights, dtype=float)
    if v.ndim != 2 or v.shape[0] != v.shape[1]:
        raise KernelValidationError("values must be a square matrix")
    if w.ndim != 1 or w.size != v.shape[0]:
        raise KernelValidationError(
            f"dimension mismatch: {w.size} weights for a {v.shape[0]}x{v.shape[1]} matrix"
        )
    if np.any(np.abs(v - v.T) > SYMMETRY_TOL):
        raise KernelValidationError("values not symmetric")
    v = (v + v.T) / 2.0
    if bound is None:
        peak = float(np.max(np.abs(v))) if v.size else 0.0
        bound = peak if peak > 0 else 1.0
    return StepKernel(w, v, bound)


def graphon_from_adjacency(g: AdjacencyGraph) -> StepGraphon:
    """Induced step graphon of ``g``: n equal blocks, values = adjacency."""
    if g.n == 0:
        raise KernelValidationError("graph has no vertices")
    return StepGraphon(np.full(g.n, 1.0 / g.n), g.adjacency.astype(float))


def apply_operator(k: StepKernel, x) -> np.ndarray:
    """Block coefficients of ``(T_W X)(v) = int W(u, v) X(u) du`` for block-constant X."""
    x = np.asarray(x, dtype=float)
    if x.shape != (k.n_blocks,):
        raise KernelValidationError(
            f"signal has shape {x.shape}, kernel has {k.n_blocks} blocks"
        )
    return k.values @ (k.weights * x)


def block_index(k: StepKernel, u) -> np.ndarray | int:
    """Block containing ``u``; block i covers ``(c_{i-1}, c_i]`` and 0 maps to block 0."""
    arr = np.asarray(u, dtype=float)
    if np.any((arr < 0.0) | (arr > 1.0)) or np.any(np.isnan(arr)):
        raise KernelValidationError("argument outside [0, 1]")
    idx = np.searchsorted(k.boundaries, arr, side="left")
    idx = np.minimum(idx, k.n_blocks - 1)
    return int(idx) if idx.ndim == 0 else idx


def evaluate(k: StepKernel, u: float, v: float) -> float:
    return float(k.values[block_index(k, u), block_index(k, v)])


def sample_graph(g: StepGraphon, n: int, seed: int) -> AdjacencyGraph:
    """W-random graph: n uniform labels, edge i~j with probability W(u_i, u_j).

    Draw order is fixed (labels first, then one uniform per pair in row-major
    upper-triangular order) so a seed pins the output on every platform that
    implements PCG64.
    """
    g = as_graphon(g)
    if n < 1:
        raise KernelValidationError("n must be at least 1")
    rng = make_rng(seed)
    labels = rng.random(n)
    blocks = block_index(g, labels)
    iu, ju = np.triu_indices(n, 1)
    coins = rng.random(iu.size)
    p = g.values[blocks[iu], blocks[ju]]
    a = np.zeros((n, n), dtype=np.uint8)
    hit = coins < p
    a[iu[hit], ju[hit]] = 1
    a[ju[hit], iu[hit]] = 1
    return AdjacencyGraph(n, a)


def common_refinement(a: StepKernel, b: StepKernel):
    """Merged partition of two kernels.

    Returns ``(weights, ia, ib)`` where ``ia[r]``/``ib[r]`` is the block of ``a``/``b``
    that contains refined block ``r``.  Boundaries closer than
    ``BOUNDARY_MERGE_TOL`` are treated as the same point.
    """
    cuts = np.sort(np.concatenate([a.boundaries[:-1], b.boundaries[:-1]]))
    merged: list[float] = []
    for c in cuts:
        if c <= BOUNDARY_MERGE_TOL or c >= 1.0 - BOUNDARY_MERGE_TOL:
            continue
        if merged and c - merged[-1] <= BOUNDARY_MERGE_TOL:
            continue
        merged.append(float(c))
    edges = np.array([0.0, *merged, 1.0])
    weights = np.diff(edges)
    mids = (edges[:-1] + edges[1:]) / 2.0
    return weights, block_index(a, mids), block_index(b, mids)


def kernel_difference(a: StepKernel, b: StepKernel) -> StepKernel:
    """``a - b`` on the common refinement, with bound ``bound(a) + bound(b)``."""
    weights, ia, ib = common_refinement(a, b)
    values = a.values[np.ix_(ia, ia)] - b.values[np.ix_(ib, ib)]
    return StepKernel(weights, values, a.bound + b.bound)


def _sbm_matrix(params: Sequence[float]) -> np.ndarray:
    k = int(round(np.sqrt(len(params))))
    if k < 1 or k * k != len(params):
        raise KernelValidationError("sbm needs a flattened k x k block matrix")
    b = np.asarray(params, dtype=float).reshape(k, k)
    if not np.array_equal(b, b.T):
        raise KernelValidationError("sbm block matrix not symmetric")
    if np.any((b < 0) | (b > 1)):
        raise KernelValidationError("sbm probabilities must lie in [0, 1]")
    return b


def _family_function(family: str, params: Sequence[float]):
    params = [float(p) for p in params]
    if family == "constant":
        if len(params) != 1 or not 0.0 <= params[0] <= 1.0:
            raise KernelValidationError("constant takes one parameter p in [0, 1]")
        p = params[0]
        return lambda u, v: np.full(np.broadcast(u, v).shape, p)
    if family == "product":
        if params:
            raise KernelValidationError("product takes no parameters")
        return lambda u, v: u * v
    if family == "min":
        if params:
            raise KernelValidationError("min takes no parameters")
        return np.minimum
    if family == "sbm":
        b = _sbm_matrix(params)
        k = b.shape[0]

        def sbm(u, v):
            cu = np.minimum((u * k).astype(int), k - 1)
            cv = np.minimum((v * k).astype(int), k - 1)
            return b[cu, cv]

        return sbm
    if family == "exp-decay":
        if len(params) != 1 or not params[0] >= 0.0:
            raise KernelValidationError("exp-decay takes one parameter alpha >= 0")
        alpha = params[0]
        return lambda u, v: np.exp(-alpha * np.abs(u - v))
    raise KernelValidationError(f"unknown family {family!r}")


BUILTIN_FAMILIES = ("constant", "product", "min", "sbm", "exp-decay")


def builtin_graphon(family: str, params: Sequence[float] = (), resolution: int = 1) -> StepGraphon:
    """Midpoint discretization of a named graphon on a uniform partition."""
    fn = _family_function(family, params)
    if resolution < 1:
        raise KernelValidationError("resolution must be at least 1")
    mids = (np.arange(resolution) + 0.5) / resolution
    values = np.clip(fn(mids[:, None], mids[None, :]), 0.0, 1.0)
    values = (values + values.T) / 2.0
    return StepGraphon(np.full(resolution, 1.0 / resolution), values)
