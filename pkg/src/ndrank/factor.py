"""Factorization solvers and rank analysis for the nondecreasing rank.

The workhorse is a hierarchical alternating least squares loop: cycling over
terms and modes, each factor vector is replaced by the exact projection of
its unconstrained least-squares update onto the mode's order cone, so the
squared Frobenius objective never increases.  Closed-form or fixed-point
rank-one solvers cover the multinomial, Poisson, and exponential
likelihoods, and a truncated-SVD shortcut recovers exact rank-two matrix
factorizations whenever the truncation already has finite ND rank.
"""

from __future__ import annotations

import itertools
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
from scipy.optimize import nnls

from . import cone as cone_mod
from .cone import default_tol, is_monotone, membership_finite_rank, order_cone_vrep
from .errors import (
    NonNegativityViolated,
    NonPositiveEntry,
    HypothesisViolated,
    ShapeMismatch,
)
from .isotonic import _chain_order, _halfspace_rows, project
from .poset import Poset, connected_upsets, is_simplicial
from .tensor import outer

_LETTERS = "abcdefghijkl"


@dataclass
class NDFactorization:
    """Sum of rank-one terms with per-mode vectors constrained to order cones.

    ``factors[j]`` has shape (rank, p_j); row i is the mode-j vector of term
    i.  ``lambdas[i]`` is the nonnegative scale of term i (vectors are kept
    at unit Euclidean norm by the solvers).
    """

    lambdas: np.ndarray
    factors: list
    posets: list | None = None
    diagnostics: dict = field(default_factory=dict)

    def __post_init__(self):
        self.lambdas = np.asarray(self.lambdas, dtype=float)
        self.factors = [np.asarray(F, dtype=float) for F in self.factors]

    @property
    def rank(self) -> int:
        return self.lambdas.shape[0]

    @property
    def order(self) -> int:
        return len(self.factors)

    def term(self, i: int) -> np.ndarray:
        return self.lambdas[i] * outer([F[i] for F in self.factors])

    def reconstruct(self) -> np.ndarray:
        k = len(self.factors)
        subs = ",".join(["i"] + ["i" + _LETTERS[j] for j in range(k)])
        return np.einsum(subs + "->" + _LETTERS[:k], self.lambdas, *self.factors)

    def rescaled(self, mode_l1: dict, absorb: int) -> "NDFactorization":
        """Copy with chosen modes scaled to target l1 norms, scales folded
        into ``absorb`` (lambdas become 1)."""
        factors = [F.copy() for F in self.factors]
        lambdas = self.lambdas.copy()
        for i in range(self.rank):
            for mode, target in mode_l1.items():
                norm = np.abs(factors[mode][i]).sum()
                if norm > 0:
                    factors[mode][i] *= target / norm
                    lambdas[i] *= norm / target
            factors[absorb][i] *= lambdas[i]
            lambdas[i] = 1.0
        return NDFactorization(lambdas, factors, self.posets, dict(self.diagnostics))

    def to_json(self) -> str:
        obj = {
            "rank": self.rank,
            "lambdas": self.lambdas.tolist(),
            "factors": [[self.factors[j][i].tolist() for j in range(self.order)]
                        for i in range(self.rank)],
            "posets": self.diagnostics.get("poset_refs"),
            "diagnostics": {k: v for k, v in self.diagnostics.items()
                            if k != "poset_refs"},
        }
        return json.dumps(obj, indent=2)

    @classmethod
    def from_json(cls, text: str) -> "NDFactorization":
        obj = json.loads(text)
        r = obj["rank"]
        k = len(obj["factors"][0]) if r else 0
        factors = [np.asarray([obj["factors"][i][j] for i in range(r)], dtype=float)
                   for j in range(k)]
        return cls(np.asarray(obj["lambdas"], dtype=float), factors,
                   diagnostics=obj.get("diagnostics") or {})


@dataclass
class FitConfig:
    rank: int
    max_sweeps: int = 500
    rel_tol: float = 1e-9
    restarts: int = 5
    seed: int = 0
    init: str = "als-project"  # or "random-cone"

    def __post_init__(self):
        if self.rank < 1:
            raise ValueError("rank must be at least 1")
        if self.rel_tol <= 0:
            raise ValueError("rel_tol must be positive")
        if self.init not in ("als-project", "random-cone"):
            raise ValueError(f"unknown init {self.init!r}")


@dataclass
class FitReport:
    """Per-run diagnostics of the best restart.

    ``objective_trace`` holds the squared Frobenius residual after each
    sweep; ``final_residual`` is the (unsquared) Frobenius norm.
    """

    objective_trace: list
    final_residual: float
    sweeps: int
    best_restart: int
    stationary: bool
    restart_objectives: list = field(default_factory=list)


def _contract_except(X: np.ndarray, vecs: list, t: int) -> np.ndarray:
    ops = [X]
    subs = [_LETTERS[: X.ndim]]
    for j in range(X.ndim):
        if j != t:
            ops.append(vecs[j])
            subs.append(_LETTERS[j])
    return np.einsum(",".join(subs) + "->" + _LETTERS[t], *ops)


def _reconstruct(lambdas, factors):
    k = len(factors)
    subs = ",".join(["i"] + ["i" + _LETTERS[j] for j in range(k)])
    return np.einsum(subs + "->" + _LETTERS[:k], lambdas, *factors)


def _uniform_unit(p: int) -> np.ndarray:
    return np.full(p, 1.0 / np.sqrt(p))


def _rank1_nd_fit(E: np.ndarray, posets, sweeps: int = 30):
    """Small internal rank-one ND fit of a (possibly signed) tensor."""
    vecs = [_uniform_unit(P.p) for P in posets]
    lam = 0.0
    for _ in range(sweeps):
        moved = 0.0
        for t in range(E.ndim):
            target = _contract_except(E, vecs, t)
            v = project(target, posets[t])
            n = float(np.linalg.norm(v))
            if n <= 1e-13 * (1.0 + float(np.linalg.norm(target))):
                return 0.0, vecs
            moved = max(moved, float(np.linalg.norm(v / n - vecs[t])))
            vecs[t] = v / n
            lam = n
        if moved < 1e-12:
            break
    return lam, vecs


def init_als_project(T, r: int, posets, seed: int) -> NDFactorization:
    """Unconstrained alternating-least-squares fit, then per-vector projection.

    A short ALS run gives a good unconstrained rank-r approximation; each
    vector is then projected onto its order cone, after first choosing the
    sign orientation of the term that survives projection best (ALS factors
    are sign-ambiguous and projecting a negatively oriented pair is
    catastrophic).  All-zero projections are replaced by the uniform cone
    direction.
    """
    T = np.asarray(T, dtype=float)
    posets = list(posets)
    k = T.ndim
    rng = np.random.default_rng(seed)
    F = [rng.standard_normal((r, P.p)) for P in posets]
    if not np.any(T):
        return NDFactorization(np.zeros(r), [np.tile(_uniform_unit(P.p), (r, 1)) for P in posets],
                               posets=posets)
    scale = (float(np.abs(T).mean()) or 1.0) ** (1.0 / k)
    F = [scale * f for f in F]
    for _ in range(25):
        for t in range(k):
            gram = np.ones((r, r))
            for j in range(k):
                if j != t:
                    gram *= F[j] @ F[j].T
            ops, subs = [T], [_LETTERS[:k]]
            for j in range(k):
                if j != t:
                    ops.append(F[j])
                    subs.append("i" + _LETTERS[j])
            W = np.einsum(",".join(subs) + "->" + _LETTERS[t] + "i", *ops)
            ridge = 1e-10 * (1.0 + float(np.trace(gram)) / r)
            F[t] = np.linalg.lstsq(gram + ridge * np.eye(r), W.T, rcond=None)[0]

    lambdas = np.zeros(r)
    out = [np.zeros((r, P.p)) for P in posets]
    sign_patterns = [s for s in itertools.product((1.0, -1.0), repeat=k) if np.prod(s) > 0]
    for i in range(r):
        raw = [F[j][i] for j in range(k)]
        best = None
        for signs in sign_patterns:
            proj = [project(signs[j] * raw[j], posets[j]) for j in range(k)]
            # distance between the projected term and the raw ALS term,
            # via the rank-one Gram identity
            pp = np.prod([v @ v for v in proj])
            rr = np.prod([v @ v for v in raw])
            pr = np.prod([p_ @ (signs[j] * r_) for j, (p_, r_) in enumerate(zip(proj, raw))])
            score = pp + rr - 2 * pr
            if best is None or score < best[0]:
                best = (score, proj)
        lam = 1.0
        for j, v in enumerate(best[1]):
            n = float(np.linalg.norm(v))
            if n == 0.0:
                out[j][i] = _uniform_unit(posets[j].p)
                lam = 0.0
            else:
                out[j][i] = v / n
                lam *= n
        lambdas[i] = lam
    return NDFactorization(lambdas, out, posets=posets)


def _init_random_cone(T, r, posets, seed):
    rng = np.random.default_rng(seed)
    factors = []
    for P in posets:
        rows = []
        for _ in range(r):
            v = project(rng.random(P.p), P)
            n = float(np.linalg.norm(v))
            rows.append(v / n if n > 0 else _uniform_unit(P.p))
        factors.append(np.asarray(rows))
    lam = float(np.linalg.norm(T)) / max(r, 1)
    return NDFactorization(np.full(r, lam), factors, posets=list(posets))


def _hals_single(T, posets, cfg: FitConfig, seed: int):
    r, k = cfg.rank, T.ndim
    if cfg.init == "als-project":
        start = init_als_project(T, r, posets, seed)
    else:
        start = _init_random_cone(T, r, posets, seed)
    lambdas = start.lambdas.copy()
    factors = [F.copy() for F in start.factors]
    recon = _reconstruct(lambdas, factors)
    trace = []
    prev = recon.copy()
    stationary = False
    sweeps_used = cfg.max_sweeps
    for sweep in range(cfg.max_sweeps):
        for s in range(r):
            vecs = [factors[j][s] for j in range(k)]
            for t in range(k):
                term = lambdas[s] * outer(vecs)
                resid = T - recon + term
                target = _contract_except(resid, vecs, t)
                v = project(target, posets[t])
                n = float(np.linalg.norm(v))
                # a numerically-zero projection must not be renormalized:
                # dividing float crumbs by their norm fabricates an arbitrary
                # (possibly infeasible) unit vector
                if n > 1e-13 * (1.0 + float(np.linalg.norm(target))):
                    vecs[t] = v / n
                    lambdas[s] = n
                else:
                    lambdas[s] = 0.0
                factors[t][s] = vecs[t]
                recon = recon - term + lambdas[s] * outer(vecs)
        # revive dead terms from the residual, keeping the objective monotone
        for s in range(r):
            if lambdas[s] == 0.0:
                E = T - recon
                lam, vnew = _rank1_nd_fit(E, posets)
                if lam > 0.0:
                    cand = lam * outer(vnew)
                    if np.linalg.norm(E - cand) <= np.linalg.norm(E):
                        lambdas[s] = lam
                        for j in range(k):
                            factors[j][s] = vnew[j]
                        recon = recon + cand
        recon = _reconstruct(lambdas, factors)  # shed incremental drift
        trace.append(float(np.sum((T - recon) ** 2)))
        delta = float(np.linalg.norm(recon - prev))
        if delta <= cfg.rel_tol * (float(np.linalg.norm(prev)) + 1e-30):
            stationary = True
            sweeps_used = sweep + 1
            break
        prev = recon.copy()
    fact = NDFactorization(lambdas, factors, posets=list(posets))
    return fact, trace, stationary, sweeps_used


def hals(T, posets, cfg: FitConfig, workers: int | None = None):
    """ND hierarchical alternating least squares (best of several restarts).

    Cycles through every term and mode, replacing each factor vector with
    the exact order-cone projection of its unconstrained update; stops when
    the reconstruction stabilizes in relative Frobenius norm or after
    ``max_sweeps``.  Restart i uses seed ``cfg.seed + i``; the run with the
    lowest final objective wins, with ties broken by the lowest seed.

    Returns ``(NDFactorization, FitReport)``.
    """
    T = np.asarray(T, dtype=float)
    posets = list(posets)
    if len(posets) != T.ndim:
        raise ShapeMismatch(f"{len(posets)} posets for an order-{T.ndim} tensor")
    for j, P in enumerate(posets):
        if P.p != T.shape[j]:
            raise ShapeMismatch(f"mode {j + 1} has size {T.shape[j]}, poset has {P.p} elements")

    seeds = [cfg.seed + i for i in range(max(cfg.restarts, 1))]
    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            runs = list(pool.map(lambda s: _hals_single(T, posets, cfg, s), seeds))
    else:
        runs = [_hals_single(T, posets, cfg, s) for s in seeds]

    finals = [run[1][-1] if run[1] else float(np.sum(T ** 2)) for run in runs]
    best = min(range(len(runs)), key=lambda i: (finals[i], seeds[i]))
    fact, trace, stationary, sweeps_used = runs[best]
    fact.diagnostics["seed"] = seeds[best]
    report = FitReport(
        objective_trace=trace,
        final_residual=float(np.sqrt(max(trace[-1], 0.0))) if trace else float(np.linalg.norm(T)),
        sweeps=sweeps_used,
        best_restart=best,
        stationary=stationary,
        restart_objectives=finals,
    )
    return fact, report


# ---------------------------------------------------------------------------
# rank-one likelihood solvers

def _fibres_monotone(T: np.ndarray, posets, tol: float) -> bool:
    if (T < -tol).any():
        return False
    for j, P in enumerate(posets):
        for a, b in P.covers:
            lo = np.take(T, a, axis=j)
            hi = np.take(T, b, axis=j)
            if (hi - lo < -tol).any():
                return False
    return True


def rank1_gaussian(T, posets, tol: float = 1e-10, max_iter: int = 10_000) -> NDFactorization:
    """Best rank-one fit under squared error, for fibre-monotone tensors.

    When every fibre lies in its mode's order cone, the unconstrained
    rank-one stationary point is automatically monotone, so a plain
    fixed-point (power) iteration suffices; for matrices it converges to
    the leading singular pair.  If a fibre fails monotonicity the solver
    falls back to a rank-one HALS run and flags it in the diagnostics.
    """
    T = np.asarray(T, dtype=float)
    posets = list(posets)
    if len(posets) != T.ndim:
        raise ShapeMismatch(f"{len(posets)} posets for an order-{T.ndim} tensor")
    if not np.any(T):
        fact = NDFactorization(np.zeros(1), [_uniform_unit(P.p)[None, :] for P in posets],
                               posets=posets)
        return fact
    if not _fibres_monotone(T, posets, default_tol(T)):
        fact, report = hals(T, posets, FitConfig(rank=1, restarts=3, seed=0))
        fact.diagnostics["fallback"] = "fibres not monotone; used rank-one HALS"
        return fact
    vecs = [_uniform_unit(P.p) for P in posets]
    lam = 0.0
    for _ in range(max_iter):
        moved = 0.0
        for t in range(T.ndim):
            w = _contract_except(T, vecs, t)
            n = float(np.linalg.norm(w))
            if n == 0.0:
                break
            moved = max(moved, float(np.linalg.norm(w / n - vecs[t])))
            vecs[t] = w / n
            lam = n
        if moved < tol:
            break
    return NDFactorization(np.array([lam]), [v[None, :] for v in vecs], posets=posets)


def _mode_marginals(T: np.ndarray):
    total = float(T.sum())
    return [np.apply_over_axes(np.sum, T, [a for a in range(T.ndim) if a != j]).ravel()
            for j in range(T.ndim)], total


def rank1_multinomial(T) -> NDFactorization:
    """Rank-one multinomial MLE: product of per-mode marginal distributions."""
    T = np.asarray(T, dtype=float)
    if (T < 0).any():
        raise NonNegativityViolated("multinomial data must be nonnegative")
    marg, total = _mode_marginals(T)
    if total == 0:
        raise NonNegativityViolated("multinomial data must not be all zero")
    return NDFactorization(np.array([1.0]), [(m / total)[None, :] for m in marg])


def rank1_poisson(T) -> NDFactorization:
    """Rank-one Poisson MLE: marginal distributions scaled by the grand total."""
    T = np.asarray(T, dtype=float)
    if (T < 0).any():
        raise NonNegativityViolated("Poisson data must be nonnegative")
    marg, total = _mode_marginals(T)
    if total == 0:
        return NDFactorization(np.zeros(1), [np.full(m.shape, 1.0 / m.size)[None, :] for m in marg])
    return NDFactorization(np.array([total]), [(m / total)[None, :] for m in marg])


def rank1_exponential(T, posets, tol: float = 1e-10, max_iter: int = 10_000) -> NDFactorization:
    """Rank-one exponential-likelihood fit by cyclic fixed-point iteration.

    Each cycle replaces the mode-j vector with the exact coordinatewise
    minimizer of sum(log theta + T/theta) holding the others fixed; entries
    stay strictly positive throughout.
    """
    T = np.asarray(T, dtype=float)
    posets = list(posets)
    if len(posets) != T.ndim:
        raise ShapeMismatch(f"{len(posets)} posets for an order-{T.ndim} tensor")
    if (T <= 0).any():
        raise NonPositiveEntry("exponential data must be strictly positive")
    if not _fibres_monotone(T, posets, default_tol(T)):
        raise HypothesisViolated("every fibre must lie in its order cone")
    vecs = [np.ones(P.p) for P in posets]
    n_other = [T.size // P.p for P in posets]
    for _ in range(max_iter):
        moved = 0.0
        for t in range(T.ndim):
            inv = outer([1.0 / vecs[j] for j in range(T.ndim) if j != t])
            ops = [T, inv]
            subs = [_LETTERS[: T.ndim], "".join(_LETTERS[j] for j in range(T.ndim) if j != t)]
            s = np.einsum(",".join(subs) + "->" + _LETTERS[t], *ops)
            new = s / n_other[t]
            moved = max(moved, float(np.max(np.abs(new - vecs[t]) / np.maximum(vecs[t], 1e-300))))
            vecs[t] = new
        if moved < tol:
            break
    lam = 1.0
    unit = []
    for v in vecs:
        n = float(np.linalg.norm(v))
        unit.append(v / n)
        lam *= n
    return NDFactorization(np.array([lam]), [v[None, :] for v in unit], posets=posets)


# ---------------------------------------------------------------------------
# exact rank-two matrices via the truncated SVD

class Rank2Result(NamedTuple):
    factorization: NDFactorization | None
    certificate: cone_mod.MembershipCertificate
    reason: str | None

    @property
    def needs_hals(self) -> bool:
        return self.factorization is None


def _nnls_coefficients(T2: np.ndarray, B: np.ndarray) -> np.ndarray:
    A = np.zeros((T2.shape[0], B.shape[0]))
    for i, row in enumerate(T2):
        A[i], _ = nnls(B.T, row)
    return A


def _pack_rank2(a_cols, b_rows, posets) -> NDFactorization:
    lambdas = np.zeros(2)
    F1 = np.zeros((2, a_cols.shape[0]))
    F2 = np.zeros((2, b_rows.shape[1]))
    for i in range(2):
        na, nb = np.linalg.norm(a_cols[:, i]), np.linalg.norm(b_rows[i])
        lambdas[i] = na * nb
        F1[i] = a_cols[:, i] / na if na > 0 else _uniform_unit(a_cols.shape[0])
        F2[i] = b_rows[i] / nb if nb > 0 else _uniform_unit(b_rows.shape[1])
    return NDFactorization(lambdas, [F1, F2], posets=list(posets))


def rank2_matrix_exact(T, posets, mode: str = "min-volume") -> Rank2Result:
    """Exact ND rank-two factorization of a matrix via its truncated SVD.

    The best unconstrained rank-two approximation T2 is optimal over the
    ND rank-two set whenever it has finite ND rank, so membership of T2 is
    checked first.  On success the two rows of T2 with the largest mutual
    angle serve as column-mode vectors ("min-volume"); row-mode coefficients
    come from a two-column nonnegative least squares and reproduce T2
    exactly.  ``mode="max-volume"`` instead takes the extremal rays of the
    order cone intersected with the row space (chain column posets only).
    Returns a fallback (factorization=None) directing callers to HALS when
    T2 lies outside the cone or the extracted factors are infeasible.
    """
    T = np.asarray(T, dtype=float)
    if T.ndim != 2:
        raise ShapeMismatch("rank2_matrix_exact expects a matrix")
    posets = list(posets)
    U, s, Vt = np.linalg.svd(T, full_matrices=False)
    T2 = (U[:, :2] * s[:2]) @ Vt[:2]
    cert = membership_finite_rank(T2, posets)
    if not cert.member:
        return Rank2Result(None, cert, "truncated SVD is outside the finite-rank cone")
    tol = default_tol(T2)

    if s.size < 2 or s[1] <= 1e-12 * max(s[0], 1e-300):
        i = int(np.argmax(np.linalg.norm(T2, axis=1)))
        B = T2[None, i]
        if not B.any():
            zero = NDFactorization(np.zeros(2),
                                   [np.tile(_uniform_unit(T.shape[0]), (2, 1)),
                                    np.tile(_uniform_unit(T.shape[1]), (2, 1))],
                                   posets=posets)
            return Rank2Result(zero, cert, None)
        A = _nnls_coefficients(T2, B)
        a_cols = np.column_stack([A[:, 0], np.zeros(T.shape[0])])
        b_rows = np.vstack([B[0], np.zeros(T.shape[1])])
    elif mode == "min-volume":
        norms = np.linalg.norm(T2, axis=1)
        live = np.flatnonzero(norms > tol)
        unit = T2[live] / norms[live, None]
        dots = unit @ unit.T
        np.fill_diagonal(dots, np.inf)
        i1, i2 = np.unravel_index(np.argmin(dots), dots.shape)
        b_rows = np.vstack([T2[live[i1]], T2[live[i2]]])
        a_cols = _nnls_coefficients(T2, b_rows)
    elif mode == "max-volume":
        if _chain_order(posets[1]) is None:
            raise ValueError("max-volume extraction is only implemented for chain column posets")
        b_rows = _max_volume_rows(T2, Vt[:2], posets[1])
        a_cols = _nnls_coefficients(T2, b_rows)
    else:
        raise ValueError(f"unknown extraction mode {mode!r}")

    recon = a_cols @ b_rows
    if np.linalg.norm(recon - T2) > 1e-8 * (1.0 + np.linalg.norm(T2)):
        return Rank2Result(None, cert, "extraction failed to reproduce the rank-two truncation")
    for i in range(2):
        if b_rows[i].any() and not is_monotone(b_rows[i], posets[1], tol).member:
            return Rank2Result(None, cert, "extracted column-mode vector is infeasible")
        if a_cols[:, i].any() and not is_monotone(a_cols[:, i], posets[0], tol).member:
            return Rank2Result(None, cert, "extracted row-mode coefficients are infeasible")
    return Rank2Result(_pack_rank2(a_cols, b_rows, posets), cert, None)


def _max_volume_rows(T2: np.ndarray, basis: np.ndarray, col_poset: Poset) -> np.ndarray:
    """Extremal rays of the order cone intersected with the row space.

    The two-dimensional intersection is swept in the plane spanned by the
    leading right singular vectors; each cone halfspace allows a half-circle
    of directions, and the feasible arc's endpoints are the extreme rays.
    """
    H = _halfspace_rows(col_poset)
    in_plane = H @ basis.T  # (m, 2): constraint i allows A cos + B sin >= 0
    center = T2.sum(axis=0) @ basis.T
    theta0 = float(np.arctan2(center[1], center[0]))
    lo, hi = -np.pi / 2, np.pi / 2
    for A, B in in_plane:
        if abs(A) < 1e-15 and abs(B) < 1e-15:
            continue
        alpha = float(np.arctan2(B, A))
        delta = (alpha - theta0 + np.pi) % (2 * np.pi) - np.pi
        lo = max(lo, delta - np.pi / 2)
        hi = min(hi, delta + np.pi / 2)
    rows = []
    for ang in (lo, hi):
        direction = np.cos(theta0 + ang) * basis[0] + np.sin(theta0 + ang) * basis[1]
        direction *= np.linalg.norm(T2) / max(np.linalg.norm(direction), 1e-300)
        rows.append(direction)
    return np.vstack(rows)


# ---------------------------------------------------------------------------
# rank bounds and tri-factorization

@dataclass
class RankBounds:
    upper: int
    exact_max: int | None
    typical_min: int | None
    typical_range: tuple | None
    extremal_ray_counts: list


def _is_collider_to_top(P: Poset) -> bool:
    maxima = P.maximal_elements()
    if len(maxima) != 1:
        return False
    top = maxima[0]
    return set(P.covers) == {(x, top) for x in range(P.p) if x != top}


def rank_bounds(posets) -> RankBounds:
    """Maximum-rank bounds and typical ranks where they are known.

    The product of all but the largest extremal-ray count always bounds the
    maximum ND rank.  It is attained for matrices when one cone is
    simplicial (min of the two counts) and when both posets are the
    "everything below one top" order of equal size (2^(p-1)).
    """
    posets = list(posets)
    q = [len(connected_upsets(P)) for P in posets]
    upper = 1
    for val in sorted(q)[:-1]:
        upper *= val
    if len(posets) == 1:
        upper = 1
    exact_max = None
    typical_min = None
    typical_range = None
    if len(posets) == 2:
        typical_min = min(P.p for P in posets)
        if any(is_simplicial(P) for P in posets):
            exact_max = min(q)
        elif (_is_collider_to_top(posets[0]) and _is_collider_to_top(posets[1])
              and posets[0].p == posets[1].p):
            exact_max = 2 ** (posets[0].p - 1)
        if exact_max is not None:
            typical_range = (typical_min, exact_max)
    return RankBounds(upper=upper, exact_max=exact_max, typical_min=typical_min,
                      typical_range=typical_range, extremal_ray_counts=q)


class TriFactorCheck(NamedTuple):
    ok: bool
    residual: float


def tri_factorization_verify(T, H, posets, tol: float | None = None) -> TriFactorCheck:
    """Check T = V1 H V2' where V_j stacks the extremal rays of each cone.

    H must be nonnegative with shape (q1, q2); the ND rank of T equals the
    smallest nonnegative rank among all feasible H.
    """
    T = np.asarray(T, dtype=float)
    H = np.asarray(H, dtype=float)
    if T.ndim != 2 or len(list(posets)) != 2:
        raise ShapeMismatch("tri-factorization applies to matrices with two posets")
    posets = list(posets)
    V = [order_cone_vrep(P).generators.T for P in posets]  # (p_j, q_j)
    if H.shape != (V[0].shape[1], V[1].shape[1]):
        raise ShapeMismatch(f"H has shape {H.shape}, expected {(V[0].shape[1], V[1].shape[1])}")
    if (H < 0).any():
        raise NonNegativityViolated("H must be nonnegative")
    if tol is None:
        tol = default_tol(T)
    residual = float(np.linalg.norm(T - V[0] @ H @ V[1].T))
    return TriFactorCheck(ok=residual <= tol, residual=residual)
