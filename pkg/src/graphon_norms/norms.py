"""Cut norm, infinity-to-one operator norm, 2,2-operator norm and Hilbert-Schmidt norm.

For a step kernel with block weights ``w`` and values ``K`` let
``M[i, j] = w_i w_j K_ij``.  Measurable sets and bounded functions may be
replaced by their block averages without changing the bilinear form, so

* cut norm      = max |s^T M t| over s, t in [0, 1]^n,
* inf-1 norm    = max |f^T M g| over f, g in [-1, 1]^n,

and a bilinear form on a box is extremal at vertices.  The exact routines
enumerate one side and optimize the other in closed form; the heuristics do
alternating maximization from random vertices and only ever return values
backed by a certificate.
"""

from __future__ import annotations

import logging
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .eigen import POWER_MAX_ITER, jacobi_eigenvalues, power_spectral_norm
from .errors import ExactLimitExceeded
from .kernel import RNG_ALGORITHM, StepKernel, make_rng

log = logging.getLogger(__name__)

ALGEBRAIC_TOL = 1e-12
SPECTRAL_TOL = 1e-9
CUT_EXACT_LIMIT = 20
INF1_EXACT_LIMIT = 21
JACOBI_LIMIT = 512
DEFAULT_RESTARTS = 50
HEURISTIC_MAX_ROUNDS = 1000

EXACT = "exact"
HEURISTIC = "heuristic-lower-bound"

# enumeration chunk: 2**_CHUNK_BITS rows of the hypercube per matrix product
_CHUNK_BITS = 12


@dataclass(frozen=True)
class CutCertificate:
    s_indicator: tuple[int, ...]
    t_indicator: tuple[int, ...]
    value: float

    @classmethod
    def build(cls, k: StepKernel, s, t) -> "CutCertificate":
        s = tuple(int(x) for x in s)
        t = tuple(int(x) for x in t)
        return cls(s, t, cut_value(k, s, t))

    def check(self, k: StepKernel, tol: float = ALGEBRAIC_TOL) -> bool:
        return abs(cut_value(k, self.s_indicator, self.t_indicator) - self.value) <= tol


@dataclass(frozen=True)
class SignCertificate:
    f_signs: tuple[int, ...]
    g_signs: tuple[int, ...]
    value: float

    @classmethod
    def build(cls, k: StepKernel, f, g) -> "SignCertificate":
        f = tuple(int(x) for x in f)
        g = tuple(int(x) for x in g)
        return cls(f, g, sign_value(k, f, g))

    def check(self, k: StepKernel, tol: float = ALGEBRAIC_TOL) -> bool:
        return abs(sign_value(k, self.f_signs, self.g_signs) - self.value) <= tol


def cut_value(k: StepKernel, s, t) -> float:
    """``|int_{S x T} W|`` for the union of blocks selected by 0/1 vectors s, t."""
    s = np.asarray(s, dtype=float)
    t = np.asarray(t, dtype=float)
    if set(np.unique(s)) - {0.0, 1.0} or set(np.unique(t)) - {0.0, 1.0}:
        raise ValueError("indicators must be 0/1 vectors")
    return abs(float(s @ k.mass_matrix() @ t))


def sign_value(k: StepKernel, f, g) -> float:
    """``|int int W f g|`` for block-constant sign functions f, g."""
    f = np.asarray(f, dtype=float)
    g = np.asarray(g, dtype=float)
    if set(np.unique(f)) - {-1.0, 1.0} or set(np.unique(g)) - {-1.0, 1.0}:
        raise ValueError("sign vectors must have entries +1 or -1")
    return abs(float(f @ k.mass_matrix() @ g))


# -- exhaustive enumeration -------------------------------------------------


def _bits(indices: np.ndarray, width: int) -> np.ndarray:
    return ((indices[:, None] >> np.arange(width)) & 1).astype(float)


def _scan_chunk(prefix, low, low_rows, high_rows, offset, high_bits, score):
    high = _bits(np.array([prefix]), high_bits)[0] if high_bits else np.zeros(0)
    base = offset + high @ high_rows
    cols = base + low @ low_rows
    scores = score(cols)
    r = int(np.argmax(scores))
    return float(scores[r]), (prefix << low.shape[1]) | r


def _enumerate(rows: np.ndarray, offset: np.ndarray, score, threads: int = 1):
    """Maximize ``score(offset + x @ rows)`` over x in {0,1}^m.

    Bit j of the returned index is x_j.  The cube is split by the high bits into
    fixed-size chunks; the reduction keeps the largest score and, on ties, the
    smallest index, so the result does not depend on ``threads``.
    """
    m = rows.shape[0]
    low_bits = min(m, _CHUNK_BITS)
    high_bits = m - low_bits
    low = _bits(np.arange(1 << low_bits), low_bits)
    low_rows, high_rows = rows[:low_bits], rows[low_bits:]

    def run(prefix):
        return _scan_chunk(prefix, low, low_rows, high_rows, offset, high_bits, score)

    prefixes = range(1 << high_bits)
    if threads > 1 and len(prefixes) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(run, prefixes))
    else:
        results = [run(p) for p in prefixes]
    best_value, best_index = results[0]
    for value, index in results[1:]:
        if value > best_value:
            best_value, best_index = value, index
    return best_value, best_index


def _cut_scores(cols: np.ndarray) -> np.ndarray:
    pos = np.maximum(cols, 0.0).sum(axis=1)
    neg = np.maximum(-cols, 0.0).sum(axis=1)
    return np.maximum(pos, neg)


def _inf1_scores(cols: np.ndarray) -> np.ndarray:
    return np.abs(cols).sum(axis=1)


def _best_t(col: np.ndarray) -> np.ndarray:
    """Optimal T for a fixed S: the columns of the dominant sign; zeros excluded."""
    pos = np.maximum(col, 0.0).sum()
    neg = np.maximum(-col, 0.0).sum()
    return (col > 0) if pos >= neg else (col < 0)


def _signs(x: np.ndarray) -> np.ndarray:
    return np.where(x < 0, -1, 1)


def cut_norm_exact(
    k: StepKernel, exact_limit: int = CUT_EXACT_LIMIT, threads: int = 1
) -> tuple[float, CutCertificate]:
    """Exact cut norm by enumerating S over all 2^n block unions.

    For fixed S the best T takes every block where the column sum of M over S
    has the dominant sign; both signs are tried since the norm takes ``|.|``.
    """
    n = k.n_blocks
    if n > exact_limit:
        raise ExactLimitExceeded(f"{n} blocks exceeds the exact cut-norm limit {exact_limit}")
    m = k.mass_matrix()
    _, index = _enumerate(m, np.zeros(n), _cut_scores, threads)
    s = _bits(np.array([index]), n)[0]
    t = _best_t(s @ m)
    cert = CutCertificate.build(k, s, t)
    return cert.value, cert


def op_norm_inf1_exact(
    k: StepKernel, exact_limit: int = INF1_EXACT_LIMIT, threads: int = 1
) -> tuple[float, SignCertificate]:
    """Exact infinity-to-one norm (type-2 cut norm) by sign enumeration.

    ``f_0`` is pinned to +1 because f and -f give the same value; for fixed f the
    optimum is ``sum_j |(M^T f)_j|`` with ``g = sign(M^T f)``.
    """
    n = k.n_blocks
    if n > exact_limit:
        raise ExactLimitExceeded(f"{n} blocks exceeds the exact inf-1 limit {exact_limit}")
    m = k.mass_matrix()
    # f = 1 - 2x on blocks 1..n-1, so f^T M = colsum(M) - 2 x^T M[1:]
    _, index = _enumerate(-2.0 * m[1:], m.sum(axis=0), _inf1_scores, threads)
    x = _bits(np.array([index]), n - 1)[0] if n > 1 else np.zeros(0)
    f = np.concatenate([[1], 1 - 2 * x.astype(int)])
    g = _signs(f @ m)
    cert = SignCertificate.build(k, f, g)
    return cert.value, cert


# -- heuristics -------------------------------------------------------------


def cut_norm_heuristic(
    k: StepKernel, restarts: int = DEFAULT_RESTARTS, seed: int = 0
) -> tuple[float, CutCertificate]:
    """Lower bound on the cut norm by alternating maximization with random restarts.

    Each restart draws S uniformly from the subsets of blocks and, separately
    for the positive and negative branch, alternates best-T / best-S until
    the sets stop changing.
    """
    if restarts < 1:
        raise ValueError("restarts must be positive")
    n = k.n_blocks
    m = k.mass_matrix()
    rng = make_rng(seed)
    best = CutCertificate.build(k, np.zeros(n), np.zeros(n))
    for _ in range(restarts):
        s0 = rng.integers(0, 2, n)
        for sign in (1.0, -1.0):
            sm = sign * m
            s = s0.copy()
            t = (s @ sm > 0).astype(int)
            for _ in range(HEURISTIC_MAX_ROUNDS):
                s_new = (sm @ t > 0).astype(int)
                t_new = (s_new @ sm > 0).astype(int)
                if np.array_equal(s_new, s) and np.array_equal(t_new, t):
                    break
                s, t = s_new, t_new
            cert = CutCertificate.build(k, s, t)
            if cert.value > best.value:
                best = cert
    return best.value, best


def op_norm_inf1_heuristic(
    k: StepKernel, restarts: int = DEFAULT_RESTARTS, seed: int = 0
) -> tuple[float, SignCertificate]:
    """Lower bound on the inf-1 norm by alternating sign updates with random restarts."""
    if restarts < 1:
        raise ValueError("restarts must be positive")
    n = k.n_blocks
    m = k.mass_matrix()
    rng = make_rng(seed)
    best = None
    for _ in range(restarts):
        f = 1 - 2 * rng.integers(0, 2, n)
        g = _signs(f @ m)
        for _ in range(HEURISTIC_MAX_ROUNDS):
            f_new = _signs(m @ g)
            g_new = _signs(f_new @ m)
            if np.array_equal(f_new, f) and np.array_equal(g_new, g):
                break
            f, g = f_new, g_new
        cert = SignCertificate.build(k, f, g)
        if best is None or cert.value > best.value:
            best = cert
    return best.value, best


# -- spectral ---------------------------------------------------------------


def op_norm_22_result(
    k: StepKernel,
    tol: float = SPECTRAL_TOL,
    jacobi_limit: int = JACOBI_LIMIT,
    max_iter: int = POWER_MAX_ITER,
):
    if tol <= 0:
        raise ValueError("tol must be positive")
    s = k.symmetric_matrix()
    if k.n_blocks <= jacobi_limit:
        return jacobi_eigenvalues(s, tol=tol)
    return power_spectral_norm(s, tol=tol, max_iter=max_iter)


def op_norm_22(k: StepKernel, tol: float = SPECTRAL_TOL, **kwargs) -> float:
    """``sup ||T_W X||_2 / ||X||_2``, the spectral norm of ``diag(sqrt w) K diag(sqrt w)``."""
    return op_norm_22_result(k, tol, **kwargs).spectral_norm


def weighted_eigenvalues(k: StepKernel, tol: float = SPECTRAL_TOL) -> np.ndarray:
    """Nonzero spectrum of T_W (eigenvalues of the symmetric weighted matrix)."""
    return jacobi_eigenvalues(k.symmetric_matrix(), tol=tol).eigenvalues


def hs_norm_squared(k: StepKernel) -> float:
    return float(np.sum(k.mass_matrix() * k.values))


def hs_norm(k: StepKernel) -> float:
    """``sqrt(int int W^2)``."""
    return math.sqrt(hs_norm_squared(k))


# -- report -----------------------------------------------------------------


@dataclass(frozen=True)
class NormConfig:
    cut_exact_limit: int = CUT_EXACT_LIMIT
    inf1_exact_limit: int = INF1_EXACT_LIMIT
    restarts: int = DEFAULT_RESTARTS
    seed: int = 0
    tol: float = SPECTRAL_TOL
    algebraic_tol: float = ALGEBRAIC_TOL
    jacobi_limit: int = JACOBI_LIMIT
    max_iter: int = POWER_MAX_ITER
    threads: int = 1

    @classmethod
    def with_exact_limit(cls, limit: int, **kwargs) -> "NormConfig":
        """One knob for both enumerations; the sign enumeration gets one extra block."""
        return cls(cut_exact_limit=limit, inf1_exact_limit=limit + 1, **kwargs)


@dataclass(frozen=True)
class NormReport:
    digest: str
    n_blocks: int
    cut_norm: float
    cut_method: str
    cut_certificate: CutCertificate
    op_inf1: float
    inf1_method: str
    sign_certificate: SignCertificate
    op_22: float
    op22_method: str
    op22_iterations: int
    op22_residual: float
    hs: float
    config: NormConfig
    rng_algorithm: str = RNG_ALGORITHM
    timing: dict = field(default_factory=dict, compare=False)

    @property
    def conclusive(self) -> bool:
        return self.cut_method == EXACT and self.inf1_method == EXACT

    def to_dict(self) -> dict:
        d = asdict(self)
        d.pop("timing")
        # worker count never changes results; keep it out of the reproducible payload
        d["config"].pop("threads")
        for key in ("cut_certificate", "sign_certificate"):
            d[key] = {k: list(v) if isinstance(v, tuple) else v for k, v in d[key].items()}
        return d


def full_norm_report(k: StepKernel, config: NormConfig | None = None) -> NormReport:
    """All four norms; exact enumeration where the block count allows, else heuristics."""
    config = config or NormConfig()
    timing = {}

    t0 = time.perf_counter()
    if k.n_blocks <= config.cut_exact_limit:
        cut, cut_cert = cut_norm_exact(k, config.cut_exact_limit, config.threads)
        cut_method = EXACT
    else:
        log.info("cut norm: %d blocks > limit %d, using heuristic", k.n_blocks, config.cut_exact_limit)
        cut, cut_cert = cut_norm_heuristic(k, config.restarts, config.seed)
        cut_method = HEURISTIC
    timing["cut_norm"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    if k.n_blocks <= config.inf1_exact_limit:
        inf1, sign_cert = op_norm_inf1_exact(k, config.inf1_exact_limit, config.threads)
        inf1_method = EXACT
    else:
        log.info("inf-1 norm: %d blocks > limit %d, using heuristic", k.n_blocks, config.inf1_exact_limit)
        inf1, sign_cert = op_norm_inf1_heuristic(k, config.restarts, config.seed)
        inf1_method = HEURISTIC
    timing["op_inf1"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    spectral = op_norm_22_result(k, config.tol, config.jacobi_limit, config.max_iter)
    timing["op_22"] = time.perf_counter() - t0

    return NormReport(
        digest=k.digest(),
        n_blocks=k.n_blocks,
        cut_norm=cut,
        cut_method=cut_method,
        cut_certificate=cut_cert,
        op_inf1=inf1,
        inf1_method=inf1_method,
        sign_certificate=sign_cert,
        op_22=spectral.spectral_norm,
        op22_method=spectral.method,
        op22_iterations=spectral.iterations,
        op22_residual=spectral.residual,
        hs=hs_norm(k),
        config=config,
        timing=timing,
    )
