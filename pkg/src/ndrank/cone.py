"""Order-cone geometry: generator and halfspace representations, membership
certificates, a small exact double-description converter, and order-polytope
sampling.

A tensor over a product of posets has finite nondecreasing rank exactly when
it lies in the projective tensor product of the per-mode order cones.  That
cone is generated by outer products of connected-upset indicators; its facet
inequalities are available in closed form when at most one poset has a
collider, and by double description at toy scale otherwise.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

import numpy as np

from . import poset as poset_mod
from .errors import DegenerateCone, HypothesisViolated, ShapeMismatch, TooLarge
from .poset import Poset, connected_upsets, has_collider, linear_extensions
from .tensor import apply_kronecker, mobius_inverse_matrix, outer

DD_MAX_DIM = 12
DD_MAX_GENS = 64
VREP_GUARD = 1_000_000


def default_tol(T) -> float:
    """Scale-invariant slack for float noise: 1e-9 * (1 + max |entry|)."""
    T = np.asarray(T, dtype=float)
    peak = float(np.max(np.abs(T))) if T.size else 0.0
    return 1e-9 * (1.0 + peak)


@dataclass
class OrderConeVRep:
    """Extremal rays of an order cone: indicators of connected upsets."""

    poset: Poset
    generators: np.ndarray  # (q, p) 0/1 matrix, one row per connected upset
    upsets: list = field(default_factory=list)

    @property
    def count(self) -> int:
        return self.generators.shape[0]


@dataclass
class ConeHRep:
    """Halfspace description {x : <a_i, x> >= 0 for all rows a_i}."""

    normals: np.ndarray  # (m, d), integer where exact
    shape: tuple | None = None  # tensor shape for rendering, if known

    @property
    def count(self) -> int:
        return self.normals.shape[0]

    def to_text(self) -> str:
        lines = []
        for row in np.asarray(self.normals):
            lines.append(" ".join(str(int(c)) for c in row))
        return "\n".join(lines) + "\n"


@dataclass
class Violation:
    label: str
    normal: np.ndarray
    value: float


@dataclass
class MembershipCertificate:
    member: bool
    violated: list
    method: str
    tol: float
    min_value: float

    def __bool__(self):
        return self.member


def _entry_name(shape, flat: int) -> str:
    idx = np.unravel_index(flat, shape)
    return "t[" + ",".join(str(i + 1) for i in idx) + "]"


def format_normal(normal, shape) -> str:
    """Render an integer normal as a human-readable '>= 0' inequality."""
    normal = np.asarray(normal).ravel()
    terms = []
    for flat in np.flatnonzero(normal):
        c = normal[flat]
        name = _entry_name(shape, flat)
        mag = "" if abs(c) == 1 else f"{abs(c):g}*"
        if not terms:
            terms.append(("-" if c < 0 else "") + mag + name)
        else:
            terms.append(("- " if c < 0 else "+ ") + mag + name)
    return " ".join(terms) + " >= 0"


def order_cone_vrep(P: Poset) -> OrderConeVRep:
    """V-representation of the order cone of P, one generator per connected upset."""
    ups = connected_upsets(P)
    gens = np.zeros((len(ups), P.p))
    for i, U in enumerate(ups):
        gens[i, sorted(U)] = 1.0
    return OrderConeVRep(poset=P, generators=gens, upsets=ups)


def finite_rank_vrep(posets) -> list:
    """Rank-one generator tensors of the finite-ND-rank cone.

    One generator per tuple of per-mode connected upsets, formed as the
    outer product of the upset indicators.
    """
    posets = list(posets)
    vreps = [order_cone_vrep(P) for P in posets]
    total = 1
    for v in vreps:
        total *= v.count
    if total > VREP_GUARD:
        raise TooLarge(f"{total} generators exceeds the {VREP_GUARD} guard")
    gens = []
    for combo in itertools.product(*(range(v.count) for v in vreps)):
        gens.append(outer([vreps[j].generators[i] for j, i in enumerate(combo)]))
    return gens


def _resolve_product(T: np.ndarray, posets) -> tuple[Poset, tuple]:
    """Accept a list of per-mode posets or a single (product) poset."""
    if isinstance(posets, Poset):
        P = posets
        if T.ndim == 1 and T.size == P.p:
            return P, (P.p,)
        if T.size == P.p:
            return P, T.shape
        raise ShapeMismatch(f"tensor with {T.size} entries vs poset with {P.p} elements")
    posets = list(posets)
    if len(posets) != T.ndim:
        raise ShapeMismatch(f"{len(posets)} posets for an order-{T.ndim} tensor")
    for j, P in enumerate(posets):
        if P.p != T.shape[j]:
            raise ShapeMismatch(f"mode {j + 1} has size {T.shape[j]}, poset has {P.p} elements")
    return poset_mod.product(posets), T.shape


def is_monotone(T, posets, tol: float | None = None) -> MembershipCertificate:
    """Certificate that T is nonnegative and nondecreasing over the product order."""
    T = np.asarray(T, dtype=float)
    P, shape = _resolve_product(T, posets)
    if tol is None:
        tol = default_tol(T)
    flat = T.ravel()
    violated = []
    min_value = np.inf
    for x in range(P.p):
        min_value = min(min_value, flat[x])
        if flat[x] < -tol:
            normal = np.zeros(P.p)
            normal[x] = 1.0
            violated.append(Violation(f"{_entry_name(shape, x)} >= 0", normal, float(flat[x])))
    for a, b in P.covers:
        val = flat[b] - flat[a]
        min_value = min(min_value, val)
        if val < -tol:
            normal = np.zeros(P.p)
            normal[a], normal[b] = -1.0, 1.0
            violated.append(Violation(
                f"{_entry_name(shape, a)} <= {_entry_name(shape, b)}", normal, float(val)))
    return MembershipCertificate(member=not violated, violated=violated,
                                 method="monotonicity", tol=tol, min_value=float(min_value))


def _augmented_covers(P: Poset) -> list:
    """Covers of P with a bottom adjoined; the bottom is index -1."""
    return [(-1, m) for m in sorted(P.minimal_elements())] + sorted(P.covers)


def finite_rank_hrep(posets) -> ConeHRep:
    """Facet halfspaces of the finite-ND-rank cone (signed cover differences).

    Valid when at most one poset has a collider.  One normal per tuple of
    covers of the bottom-augmented posets; a bottom index drops its term.
    """
    posets = list(posets)
    n_colliders = sum(has_collider(P) for P in posets)
    if n_colliders > 1:
        raise HypothesisViolated(
            f"{n_colliders} posets have colliders; the halfspace form needs at most one")
    shape = tuple(P.p for P in posets)
    per_mode = []
    for P in posets:
        vecs = []
        for x, y in _augmented_covers(P):
            h = np.zeros(P.p)
            h[y] = 1.0
            if x >= 0:
                h[x] = -1.0
            vecs.append(h)
        per_mode.append(vecs)
    normals = [outer(combo).ravel() for combo in itertools.product(*per_mode)]
    return ConeHRep(normals=np.asarray(normals, dtype=int), shape=shape)


def _check_hrep(T: np.ndarray, hrep: ConeHRep, tol: float, method: str) -> MembershipCertificate:
    flat = T.ravel()
    values = hrep.normals @ flat
    violated = []
    for i in np.flatnonzero(values < -tol):
        normal = hrep.normals[i]
        violated.append(Violation(format_normal(normal, hrep.shape or T.shape),
                                  np.asarray(normal, dtype=float), float(values[i])))
    return MembershipCertificate(member=not violated, violated=violated, method=method,
                                 tol=tol, min_value=float(values.min()) if values.size else 0.0)


def membership_finite_rank(T, posets, tol: float | None = None) -> MembershipCertificate:
    """Certificate of finite ND rank: is T in the projective product of order cones?

    Dispatch: all posets collider-free -> Kronecker of inverse upset maps
    (mode differencing); exactly one collider-bearing poset -> closed-form
    halfspaces; otherwise a double-description fallback at toy scale.
    """
    T = np.asarray(T, dtype=float)
    posets = [posets] if isinstance(posets, Poset) else list(posets)
    if len(posets) != T.ndim:
        raise ShapeMismatch(f"{len(posets)} posets for an order-{T.ndim} tensor")
    for j, P in enumerate(posets):
        if P.p != T.shape[j]:
            raise ShapeMismatch(f"mode {j + 1} has size {T.shape[j]}, poset has {P.p} elements")
    if tol is None:
        tol = default_tol(T)
    n_colliders = sum(has_collider(P) for P in posets)
    if n_colliders == 0:
        invs = [mobius_inverse_matrix(P) for P in posets]
        D = apply_kronecker(invs, T).ravel()
        violated = []
        for flat in np.flatnonzero(D < -tol):
            idx = np.unravel_index(flat, T.shape)
            normal = outer([invs[j][idx[j]] for j in range(T.ndim)]).ravel()
            violated.append(Violation(format_normal(normal, T.shape), normal, float(D[flat])))
        return MembershipCertificate(member=not violated, violated=violated,
                                     method="tree-differencing", tol=tol,
                                     min_value=float(D.min()))
    if n_colliders == 1:
        return _check_hrep(T, finite_rank_hrep(posets), tol, "halfspace")
    gens = finite_rank_vrep(posets)
    hrep = double_description(gens)
    return _check_hrep(T, hrep, tol, "double-description")


# ---------------------------------------------------------------------------
# double description (exact integer arithmetic)

def _primitive(vec) -> tuple:
    g = 0
    for v in vec:
        g = gcd(g, abs(v))
    if g > 1:
        vec = [v // g for v in vec]
    return tuple(vec)


def _fraction_rref(rows, width):
    """Row-reduce over Q.  Returns (pivot_cols, reduced_rows, used_row_indices)."""
    work = [[Fraction(x) for x in row] for row in rows]
    pivots = []
    used = []
    reduced = []
    for ri, row in enumerate(work):
        row = list(row)
        for pc, pr in zip(pivots, reduced):
            if row[pc]:
                f = row[pc]
                row = [a - f * b for a, b in zip(row, pr)]
        lead = next((j for j in range(width) if row[j]), None)
        if lead is None:
            continue
        f = row[lead]
        row = [a / f for a in row]
        for k, (pc, pr) in enumerate(zip(pivots, reduced)):
            if pr[lead]:
                reduced[k] = [a - pr[lead] * b for a, b in zip(pr, row)]
        pivots.append(lead)
        reduced.append(row)
        used.append(ri)
    return pivots, reduced, used


def _nullspace_int(rows, width):
    """Integer basis of {a : row . a = 0 for all rows}."""
    pivots, reduced, _ = _fraction_rref(rows, width)
    free = [j for j in range(width) if j not in pivots]
    basis = []
    for fj in free:
        vec = [Fraction(0)] * width
        vec[fj] = Fraction(1)
        for pc, pr in zip(pivots, reduced):
            vec[pc] = -pr[fj]
        den = 1
        for v in vec:
            den = den * v.denominator // gcd(den, v.denominator)
        basis.append(_primitive([int(v * den) for v in vec]))
    return basis


def _fraction_inverse_columns(rows):
    """Columns of the inverse of a square matrix given by integer rows."""
    d = len(rows)
    aug = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(d)]
           for i, row in enumerate(rows)]
    for col in range(d):
        piv = next(r for r in range(col, d) if aug[r][col])
        aug[col], aug[piv] = aug[piv], aug[col]
        f = aug[col][col]
        aug[col] = [a / f for a in aug[col]]
        for r in range(d):
            if r != col and aug[r][col]:
                fr = aug[r][col]
                aug[r] = [a - fr * b for a, b in zip(aug[r], aug[col])]
    cols = []
    for j in range(d):
        col = [aug[i][d + j] for i in range(d)]
        den = 1
        for v in col:
            den = den * v.denominator // gcd(den, v.denominator)
        cols.append(_primitive([int(v * den) for v in col]))
    return cols


def double_description(generators) -> ConeHRep:
    """Irredundant facet normals of the cone generated by integer vectors.

    The generators must span the ambient space (otherwise
    :class:`DegenerateCone` reports the implicit equalities) and generate a
    pointed cone, which holds in particular for nonnegative generators.
    Exact rational arithmetic throughout; guarded at dimension 12 and 64
    generators.
    """
    raw = [np.asarray(g) for g in generators]
    if not raw:
        raise ValueError("need at least one generator")
    shape = raw[0].shape if raw[0].ndim > 1 else None
    flat = [g.ravel() for g in raw]
    d = flat[0].size
    if any(g.size != d for g in flat):
        raise ShapeMismatch("generators must share one shape")
    if d > DD_MAX_DIM:
        raise TooLarge(f"ambient dimension {d} exceeds the {DD_MAX_DIM} guard")
    G = []
    seen = set()
    for g in flat:
        ints = []
        for x in g:
            r = round(float(x))
            if abs(float(x) - r) > 1e-9:
                raise ValueError("double_description requires integer generators")
            ints.append(int(r))
        t = _primitive(ints)
        if any(t) and t not in seen:
            seen.add(t)
            G.append(t)
    if len(G) > DD_MAX_GENS:
        raise TooLarge(f"{len(G)} generators exceeds the {DD_MAX_GENS} guard")

    pivots, _, used = _fraction_rref(G, d)
    if len(pivots) < d:
        null = _nullspace_int(G, d)
        raise DegenerateCone(
            f"generators span a {len(pivots)}-dimensional subspace of R^{d}",
            equality_normals=np.asarray(null, dtype=int))

    # Dual cone {a : G a >= 0}: its extreme rays are the facet normals of
    # cone(G).  Start from a simplicial subsystem and insert the remaining
    # constraints one at a time (standard double description).
    base = used[:d]
    rays = _fraction_inverse_columns([G[i] for i in base])
    processed = list(base)
    tight = []
    for r in rays:
        mask = 0
        for pos, ci in enumerate(processed):
            if sum(a * b for a, b in zip(G[ci], r)) == 0:
                mask |= 1 << pos
        tight.append(mask)

    remaining = [i for i in range(len(G)) if i not in base]
    for ci in remaining:
        g = G[ci]
        s = [sum(a * b for a, b in zip(g, r)) for r in rays]
        if all(v >= 0 for v in s):
            pos = len(processed)
            processed.append(ci)
            tight = [t | ((1 << pos) if v == 0 else 0) for t, v in zip(tight, s)]
            continue
        keep = [k for k, v in enumerate(s) if v >= 0]
        new_rays = []
        plus = [k for k, v in enumerate(s) if v > 0]
        minus = [k for k, v in enumerate(s) if v < 0]
        need = d - 2
        for kp in plus:
            for km in minus:
                t = tight[kp] & tight[km]
                if t.bit_count() < need:
                    continue
                if any(t & tight[k] == t for k in range(len(rays)) if k not in (kp, km)):
                    continue
                new = [s[kp] * a - s[km] * b for a, b in zip(rays[km], rays[kp])]
                new_rays.append(_primitive(new))
        pos = len(processed)
        processed.append(ci)
        rays2, tight2, seen2 = [], [], set()
        for k in keep:
            rays2.append(rays[k])
            tight2.append(tight[k] | ((1 << pos) if s[k] == 0 else 0))
            seen2.add(rays[k])
        for r in new_rays:
            if r in seen2:
                continue
            seen2.add(r)
            mask = 0
            for p2, cj in enumerate(processed):
                if sum(a * b for a, b in zip(G[cj], r)) == 0:
                    mask |= 1 << p2
            rays2.append(r)
            tight2.append(mask)
        rays, tight = rays2, tight2

    normals = sorted(rays)
    return ConeHRep(normals=np.asarray(normals, dtype=int), shape=shape)


def canonical_inequalities(normals) -> list:
    """Sign- and scale-insensitive canonical form, for set comparisons only.

    Divides by the gcd, makes the first nonzero coefficient positive, and
    sorts; flipping signs changes the halfspace, so this is not a valid
    cone representation, just a comparison key.
    """
    out = []
    for row in np.asarray(normals, dtype=int):
        t = _primitive([int(x) for x in row])
        first = next((x for x in t if x), 1)
        if first < 0:
            t = tuple(-x for x in t)
        out.append(t)
    return sorted(out)


# ---------------------------------------------------------------------------
# order-polytope sampling

@dataclass
class ProbabilityEstimate:
    estimate: float
    stderr: float
    n_samples: int
    members: int

    def __str__(self):
        return f"{self.estimate:.6f} +/- {self.stderr:.6f} ({self.members}/{self.n_samples})"


def _uniform_extension_table(P: Poset) -> np.ndarray:
    exts = linear_extensions(P)
    return np.asarray(exts, dtype=int)


def _walk_sampler(P: Poset, n: int, rng) -> np.ndarray:
    """Uniform linear extensions via the downset-count DP, one walk per sample."""
    lower_masks = [0] * P.p
    for a, b in P.covers:
        lower_masks[b] |= 1 << a
    counts = {0: 1}

    def count(remaining: int) -> int:
        c = counts.get(remaining)
        if c is not None:
            return c
        total = 0
        m = remaining
        while m:
            bit = m & -m
            m ^= bit
            if lower_masks[bit.bit_length() - 1] & remaining == 0:
                total += count(remaining ^ bit)
        counts[remaining] = total
        return total

    full = (1 << P.p) - 1
    count(full)
    choices = {}

    def state(remaining: int):
        cached = choices.get(remaining)
        if cached is None:
            opts, weights = [], []
            m = remaining
            while m:
                bit = m & -m
                m ^= bit
                x = bit.bit_length() - 1
                if lower_masks[x] & remaining == 0:
                    opts.append(x)
                    weights.append(count(remaining ^ bit))
            cum = np.cumsum(weights, dtype=float)
            cum /= cum[-1]
            cached = (opts, cum)
            choices[remaining] = cached
        return cached

    exts = np.empty((n, P.p), dtype=int)
    unif = rng.random((n, P.p))
    for i in range(n):
        remaining = full
        for step in range(P.p):
            opts, cum = state(remaining)
            x = opts[int(np.searchsorted(cum, unif[i, step], side="right"))]
            exts[i, step] = x
            remaining ^= 1 << x
    return exts


def sample_finite_rank_probability(m: int, n_samples: int, seed: int,
                                   allow_large: bool = False) -> ProbabilityEstimate:
    """Estimate the chance that a uniform point of the order polytope of the
    m-by-m grid order has finite ND rank.

    Points are drawn by choosing a uniformly random linear extension and
    assigning sorted uniform values along it, then tested by full mode
    differencing.  Exact enumeration covers m <= 3; m = 4 requires
    ``allow_large`` (slower per-sample walks; the target probability there
    is so small that huge sample counts are needed for a sharp estimate).
    """
    if m < 1 or n_samples < 1:
        raise ValueError("m and n_samples must be positive")
    if m > 4 or (m == 4 and not allow_large):
        raise TooLarge("sampling is guarded at m <= 3 (m = 4 needs allow_large=True)")
    P = poset_mod.product([poset_mod.chain(m), poset_mod.chain(m)])
    rng = np.random.default_rng(seed)
    members = 0
    tol = 2e-9  # default_tol for entries in [0, 1]
    chunk = 200_000
    table = _uniform_extension_table(P) if m <= 3 else None
    done = 0
    while done < n_samples:
        n = min(chunk, n_samples - done)
        if table is not None:
            exts = table[rng.integers(0, table.shape[0], size=n)]
        else:
            exts = _walk_sampler(P, n, rng)
        vals = np.sort(rng.random((n, P.p)), axis=1)
        X = np.empty((n, P.p))
        rows = np.arange(n)[:, None]
        X[rows, exts] = vals
        X = X.reshape(n, m, m)
        D = np.diff(np.diff(X, axis=1, prepend=0.0), axis=2, prepend=0.0)
        members += int((D >= -tol).all(axis=(1, 2)).sum())
        done += n
    p_hat = members / n_samples
    stderr = float(np.sqrt(max(p_hat * (1 - p_hat), 0.0) / n_samples))
    return ProbabilityEstimate(estimate=p_hat, stderr=stderr,
                               n_samples=n_samples, members=members)
