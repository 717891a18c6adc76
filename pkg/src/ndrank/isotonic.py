"""Exact Euclidean projection onto order cones.

The order cone of a poset P is the set of nonnegative vectors that are
nondecreasing along the order.  Projection onto it is the inner solver of
the ND-HALS factorization loop, so it has to be exact: chains are handled
by pool-adjacent-violators followed by clamping at zero, and every other
poset goes through the Moreau decomposition, where the polar projection is
a nonnegative least squares problem solved by an active-set method.

Clamping after the monotone projection is exact for any poset: projecting
onto the cone intersected with the nonnegative orthant equals the monotone
projection followed by an elementwise max with zero.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

import numpy as np
from scipy.optimize import nnls

from .poset import Poset


@dataclass
class ProjectionProblem:
    """Weighted projection target: minimize sum_l w_l (y_l - v_l)^2 over C(P)."""

    y: np.ndarray
    poset: Poset
    w: np.ndarray | None = None

    def __post_init__(self):
        self.y = np.asarray(self.y, dtype=float)
        if self.y.shape != (self.poset.p,):
            raise ValueError(f"target length {self.y.shape} != poset size {self.poset.p}")
        if self.w is not None:
            self.w = np.asarray(self.w, dtype=float)
            if self.w.shape != self.y.shape:
                raise ValueError("weights must match the target length")
            if (self.w <= 0).any():
                raise ValueError("weights must be strictly positive")


def pava_chain(y, w=None) -> np.ndarray:
    """Weighted isotonic regression on a chain (pool adjacent violators).

    Returns the unique minimizer of sum_l w_l (y_l - v_l)^2 over
    nondecreasing v.  The result is piecewise constant on pooled blocks and
    the operation is idempotent.
    """
    y = np.asarray(y, dtype=float)
    if w is None:
        w = np.ones_like(y)
    else:
        w = np.asarray(w, dtype=float)
        if w.shape != y.shape:
            raise ValueError("weights must match y")
        if (w <= 0).any():
            raise ValueError("weights must be strictly positive")
    means: list[float] = []
    weights: list[float] = []
    sizes: list[int] = []
    for yi, wi in zip(y, w):
        m, ww, n = float(yi), float(wi), 1
        while means and means[-1] > m:
            m = (ww * m + weights[-1] * means[-1]) / (ww + weights[-1])
            ww += weights[-1]
            n += sizes[-1]
            means.pop(), weights.pop(), sizes.pop()
        means.append(m), weights.append(ww), sizes.append(n)
    return np.repeat(means, sizes)


@functools.lru_cache(maxsize=256)
def _chain_order(P: Poset):
    """Permutation listing a total order, or None if P is not a chain."""
    if not (P.leq | P.leq.T).all():
        return None
    return tuple(np.argsort(P.leq.sum(axis=1))[::-1].tolist())


@functools.lru_cache(maxsize=256)
def _halfspace_rows(P: Poset) -> np.ndarray:
    """H-representation rows of C(P): e_m for minimal m, e_b - e_a for covers."""
    rows = []
    for m in P.minimal_elements():
        r = np.zeros(P.p)
        r[m] = 1.0
        rows.append(r)
    for a, b in P.covers:
        r = np.zeros(P.p)
        r[a], r[b] = -1.0, 1.0
        rows.append(r)
    return np.asarray(rows)


def _project_general(y: np.ndarray, P: Poset, w: np.ndarray | None) -> np.ndarray:
    # Moreau: v* = y + A^T mu* in the unit-weight metric, where mu* solves
    # the polar-cone NNLS min_{mu >= 0} ||A^T mu + y||; weights rescale axes.
    A = _halfspace_rows(P)
    if w is None:
        mu, _ = nnls(A.T, -y)
        v = y + A.T @ mu
    else:
        s = np.sqrt(w)
        B = A / s
        c = s * y
        mu, _ = nnls(B.T, -c)
        v = (c + B.T @ mu) / s
    # the exact projection is nonnegative; clear float crumbs below zero
    return np.maximum(v, 0.0)


def project_order_cone(prob: ProjectionProblem) -> np.ndarray:
    """Exact projection of the target onto the order cone of the poset."""
    y, P, w = prob.y, prob.poset, prob.w
    if not P.covers:  # no order constraints: clamp is the exact projection
        v = np.maximum(y, 0.0)
        return v
    order = _chain_order(P)
    if order is not None:
        idx = np.asarray(order)
        v = np.empty_like(y)
        v[idx] = np.maximum(pava_chain(y[idx], None if w is None else w[idx]), 0.0)
        return v
    return _project_general(y, P, w)


def project(y, P: Poset, w=None) -> np.ndarray:
    """Convenience wrapper around :func:`project_order_cone`."""
    return project_order_cone(ProjectionProblem(np.asarray(y, dtype=float), P, w))
