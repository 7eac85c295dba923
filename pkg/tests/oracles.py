"""Brute-force reference computations, written against raw arrays only.

Nothing here calls into the enumeration, eigensolver or contraction code of
the package; these are the independent sides of the cross-checks.
"""

from itertools import product

import numpy as np

GRID = np.array([0.0, 0.25, 0.5, 0.75, 1.0])


def mass(weights, values):
    w = np.asarray(weights, dtype=float)
    return np.outer(w, w) * np.asarray(values, dtype=float)


def cut_norm_grid(weights, values, grid=GRID):
    """max |s^T M t| over s, t in grid^n (includes every 0/1 vertex)."""
    m = mass(weights, values)
    pts = np.array(list(product(grid, repeat=m.shape[0])))
    return float(np.max(np.abs(pts @ m @ pts.T)))


def cut_norm_vertices(weights, values):
    m = mass(weights, values)
    pts = np.array(list(product((0.0, 1.0), repeat=m.shape[0])))
    return float(np.max(np.abs(pts @ m @ pts.T)))


def inf1_vertices(weights, values):
    m = mass(weights, values)
    pts = np.array(list(product((-1.0, 1.0), repeat=m.shape[0])))
    return float(np.max(np.abs(pts @ m @ pts.T)))


def inf1_grid(weights, values):
    return cut_norm_grid(weights, values, grid=np.array([-1.0, -0.5, 0.0, 0.5, 1.0]))


def spectrum(weights, values):
    r = np.sqrt(np.asarray(weights, dtype=float))
    s = r[:, None] * np.asarray(values, dtype=float) * r[None, :]
    return np.linalg.eigvalsh(s)


def hom_density_bruteforce(vertex_count, edges, weights, values):
    w = np.asarray(weights, dtype=float)
    v = np.asarray(values, dtype=float)
    total = 0.0
    for phi in product(range(w.size), repeat=vertex_count):
        term = 1.0
        for x in phi:
            term *= w[x]
        for i, j in edges:
            term *= v[phi[i], phi[j]]
        total += term
    return total
