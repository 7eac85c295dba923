"""Symmetric eigensolvers used for the 2,2-operator norm.

Two solvers, both written out rather than delegated to LAPACK so the test suite
can check them against ``numpy.linalg.eigvalsh`` as an independent oracle:

* cyclic Jacobi with round-robin (parallel) ordering, for the full spectrum;
* power iteration on ``A @ A``, for the spectral norm of large matrices.
  Squaring makes ``+lambda`` and ``-lambda`` one eigenvalue, so bipartite-like
  spectra do not oscillate.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import NonConvergenceError

JACOBI_OFF_RTOL = 1e-13
JACOBI_MAX_SWEEPS = 100
POWER_MAX_ITER = 100_000
POWER_START_SEED = 0x5EED


@dataclass(frozen=True)
class EigenResult:
    eigenvalues: np.ndarray | None
    spectral_norm: float
    method: str
    iterations: int
    residual: float


@lru_cache(maxsize=64)
def _round_robin(n: int) -> tuple[tuple[np.ndarray, np.ndarray], ...]:
    """Rounds of disjoint (p, q) pairs, p < q, covering every pair exactly once."""
    m = n + (n % 2)
    players = list(range(m))
    rounds = []
    for _ in range(m - 1):
        ps, qs = [], []
        for i in range(m // 2):
            a, b = players[i], players[m - 1 - i]
            if a < n and b < n:
                ps.append(min(a, b))
                qs.append(max(a, b))
        rounds.append((np.array(ps, dtype=np.intp), np.array(qs, dtype=np.intp)))
        players = [players[0], players[-1], *players[1:-1]]
    return tuple(rounds)


def _off_norm(a: np.ndarray) -> float:
    off = a.copy()
    np.fill_diagonal(off, 0.0)
    return float(np.linalg.norm(off))


def jacobi_eigenvalues(a, tol: float = 1e-9, max_sweeps: int = JACOBI_MAX_SWEEPS) -> EigenResult:
    """Eigenvalues of a symmetric matrix by cyclic Jacobi rotations.

    Each round applies n/2 rotations on disjoint index pairs at once; a sweep
    visits every pair.  Sweeps continue until the off-diagonal Frobenius norm is
    below ``min(tol, JACOBI_OFF_RTOL) * ||A||_F``.  By Weyl's inequality the
    returned eigenvalues are then within that off-norm of the true ones.  The
    iteration count reported is the number of sweeps.
    """
    a = np.array(a, dtype=float, copy=True)
    n = a.shape[0]
    scale = float(np.linalg.norm(a))
    if n <= 1 or scale == 0.0:
        eig = np.diag(a).copy()
        return EigenResult(eig, float(np.max(np.abs(eig), initial=0.0)), "jacobi", 0, 0.0)

    target = min(tol, JACOBI_OFF_RTOL) * scale
    off = _off_norm(a)
    sweeps = 0
    while off > target:
        if sweeps >= max_sweeps:
            if off <= tol * scale:
                break
            raise NonConvergenceError(
                f"Jacobi did not converge in {max_sweeps} sweeps (off-norm ratio {off / scale:.3e})",
                sweeps,
                off / scale,
            )
        for p, q in _round_robin(n):
            apq = a[p, q]
            active = apq != 0.0
            if not np.any(active):
                continue
            p, q, apq = p[active], q[active], apq[active]
            with np.errstate(over="ignore"):
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = np.sign(theta) / (np.abs(theta) + np.sqrt(theta * theta + 1.0))
            t[theta == 0.0] = 1.0
            c = 1.0 / np.sqrt(t * t + 1.0)
            s = t * c

            c, s = c[:, None], s[:, None]
            # J^T A J == (J^T (J^T A)^T)^T for symmetric A: two contiguous row passes
            for _ in range(2):
                rp, rq = a[p, :], a[q, :]
                a[p, :] = c * rp - s * rq
                a[q, :] = s * rp + c * rq
                a = np.ascontiguousarray(a.T)
            a[p, q] = 0.0
            a[q, p] = 0.0
        sweeps += 1
        new_off = _off_norm(a)
        if new_off >= off and new_off <= tol * scale:
            # rounding floor reached
            off = new_off
            break
        off = new_off

    eig = np.diag(a).copy()
    return EigenResult(eig, float(np.max(np.abs(eig))), "jacobi", sweeps, off / scale)


def power_spectral_norm(a, tol: float = 1e-9, max_iter: int = POWER_MAX_ITER) -> EigenResult:
    """Spectral norm of a symmetric matrix by power iteration on ``A^2``.

    Stops when ``||A^2 v - mu v|| <= tol * mu`` for the Rayleigh quotient
    ``mu = ||A v||^2``.  The start vector is drawn from a fixed seed.
    """
    a = np.asarray(a, dtype=float)
    n = a.shape[0]
    if n == 0 or not np.any(a):
        return EigenResult(None, 0.0, "power", 0, 0.0)
    v = np.random.Generator(np.random.PCG64(POWER_START_SEED)).standard_normal(n)
    v /= np.linalg.norm(v)
    residual = np.inf
    for it in range(1, max_iter + 1):
        av = a @ v
        mu = float(av @ av)
        w = a @ av
        if mu == 0.0:
            # start vector in the null space; restart from the image of a basis vector
            v = a[:, int(np.argmax(np.abs(a).sum(axis=0)))].copy()
            v /= np.linalg.norm(v)
            continue
        residual = float(np.linalg.norm(w - mu * v)) / mu
        if residual <= tol:
            return EigenResult(None, float(np.sqrt(mu)), "power", it, residual)
        v = w / np.linalg.norm(w)
    raise NonConvergenceError(
        f"power iteration did not converge in {max_iter} iterations (residual {residual:.3e})",
        max_iter,
        residual,
    )
