"""Exact projection onto an order cone.

Projection onto the cone of nonnegative nondecreasing vectors is the inner
solver of the factorization loop.  Chains use pool-adjacent-violators with
a final clamp at zero; posets with branching use an exact active-set path.
"""

import numpy as np

from ndrank import chain, from_relation, pava_chain, project

# pooling: a violator drags its neighbours to a common weighted mean
print("pava [3, 1, 2]        ->", pava_chain([3.0, 1.0, 2.0]))
print("pava [2, 1], w=[3, 1] ->", pava_chain([2.0, 1.0], [3.0, 1.0]))

# projection also enforces nonnegativity
print("project [-1, 0, 2] on a 3-chain ->", project([-1.0, 0.0, 2.0], chain(3)))

# a branching order: two incomparable elements below a common top
fork = from_relation(["a", "b", "top"], [("a", "top"), ("b", "top")])
y = np.array([2.0, 0.0, 1.0])
v = project(y, fork)
print("project (2, 0, 1) on the fork   ->", v)   # pools a with top, leaves b

# the projection is idempotent and never expands distances
rng = np.random.default_rng(1)
y1, y2 = rng.standard_normal(3), rng.standard_normal(3)
p1, p2 = project(y1, fork), project(y2, fork)
print("idempotent:", np.allclose(project(p1, fork), p1))
print("nonexpansive:", np.linalg.norm(p1 - p2) <= np.linalg.norm(y1 - y2))
