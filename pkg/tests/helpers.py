"""Shared test utilities: random poset generators and an independent
projected-gradient oracle for order-cone projection."""

import numpy as np

from ndrank import poset


def random_chain(p, rng):
    return poset.chain(p)


def random_forest(p, rng):
    # collider-free: every element has at most one lower cover
    edges = []
    for i in range(1, p):
        parent = int(rng.integers(-1, i))
        if parent >= 0:
            edges.append((parent, i))
    return poset.from_relation(list(range(p)), edges)


def random_collider(p, rng):
    if p < 3:
        return poset.trivial(p)
    return poset.collider_to_top(p)


def random_dag(p, rng, density=0.35):
    edges = [(i, j) for i in range(p) for j in range(i + 1, p) if rng.random() < density]
    return poset.from_relation(list(range(p)), edges)


KINDS = (random_chain, random_forest, random_collider, random_dag,
         lambda p, rng: poset.trivial(p))


def random_poset(p, rng):
    return KINDS[int(rng.integers(0, len(KINDS)))](p, rng)


def cone_halfspaces(P):
    """Rows a with C(P) = {x : a @ x >= 0}."""
    rows = []
    for m in P.minimal_elements():
        a = np.zeros(P.p)
        a[m] = 1.0
        rows.append(a)
    for u, v in P.covers:
        a = np.zeros(P.p)
        a[u], a[v] = -1.0, 1.0
        rows.append(a)
    return np.asarray(rows)


def projection_oracle(y, P, w=None, max_iter=200_000, kkt_tol=1e-13):
    """Accelerated projected gradient on the dual quadratic program.

    Solves min_{mu >= 0} 0.5 || B' mu + c ||^2 with B the weighted cone
    halfspaces, recovering the projection v = W^{-1/2}(c + B' mu).  Entirely
    independent of the library's active-set path.
    """
    y = np.asarray(y, dtype=float)
    A = cone_halfspaces(P)
    if w is None:
        w = np.ones_like(y)
    s = np.sqrt(np.asarray(w, dtype=float))
    B = A / s
    c = s * y
    M = B @ B.T
    L = float(np.linalg.eigvalsh(M).max()) if M.size else 1.0
    L = max(L, 1e-12)
    mu = np.zeros(B.shape[0])
    z = mu.copy()
    t_acc = 1.0
    for it in range(max_iter):
        grad = M @ z + B @ c
        mu_new = np.maximum(z - grad / L, 0.0)
        t_new = (1.0 + np.sqrt(1.0 + 4.0 * t_acc ** 2)) / 2.0
        z = mu_new + ((t_acc - 1.0) / t_new) * (mu_new - mu)
        mu, t_acc = mu_new, t_new
        if it % 100 == 99:
            grad = M @ mu + B @ c
            kkt = float(np.max(np.abs(np.minimum(mu, grad)))) if mu.size else 0.0
            if kkt < kkt_tol:
                break
    v = (c + B.T @ mu) / s
    obj = float(np.sum(np.asarray(w) * (y - v) ** 2))
    return v, obj


def trace_nonincreasing(trace, slack=1e-12):
    return all(trace[i + 1] <= trace[i] + slack * max(1.0, trace[i])
               for i in range(len(trace) - 1))
