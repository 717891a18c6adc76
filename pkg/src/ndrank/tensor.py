"""Dense tensor arithmetic and the linear maps tied to poset structure.

Tensors are plain numpy arrays in row-major layout (last index fastest);
linear maps are dense 2-D arrays.  Indices in the public API are 1-based to
match the usual tensor-entry notation; internal storage is 0-based.
"""

from __future__ import annotations

import functools
import json

import numpy as np

from .errors import IndexOutOfRange, NotSimplicial, ParseError, ShapeMismatch
from .poset import Poset, is_simplicial


def as_tensor(data) -> np.ndarray:
    T = np.asarray(data, dtype=float)
    if not np.isfinite(T).all():
        raise ValueError("tensor entries must be finite")
    return T


def outer(vectors) -> np.ndarray:
    """Outer product of k vectors: T[i1,...,ik] = prod_j v_j[i_j]."""
    vecs = [np.asarray(v, dtype=float) for v in vectors]
    if not vecs:
        raise ValueError("need at least one vector")
    for v in vecs:
        if v.ndim != 1 or v.size == 0:
            raise ValueError("each factor must be a non-empty vector")
    return functools.reduce(np.multiply.outer, vecs)


def fibre(T, mode: int, fixed) -> np.ndarray:
    """Mode-``mode`` fibre of T with the other indices held at ``fixed``.

    ``mode`` is 1-based; ``fixed`` lists 1-based indices for the other modes
    in mode order.
    """
    T = np.asarray(T)
    if not 1 <= mode <= T.ndim:
        raise IndexOutOfRange(f"mode {mode} out of range for order-{T.ndim} tensor")
    fixed = list(fixed)
    if len(fixed) != T.ndim - 1:
        raise IndexOutOfRange(f"expected {T.ndim - 1} fixed indices, got {len(fixed)}")
    key = []
    it = iter(fixed)
    for j in range(T.ndim):
        if j == mode - 1:
            key.append(slice(None))
        else:
            i = next(it)
            if not 1 <= i <= T.shape[j]:
                raise IndexOutOfRange(f"index {i} out of range for mode {j + 1} of size {T.shape[j]}")
            key.append(i - 1)
    return T[tuple(key)].copy()


def inner(S, T) -> float:
    S, T = np.asarray(S, dtype=float), np.asarray(T, dtype=float)
    if S.shape != T.shape:
        raise ShapeMismatch(f"shapes {S.shape} and {T.shape} differ")
    return float(np.vdot(S, T))


def frobenius(T) -> float:
    T = np.asarray(T, dtype=float)
    return float(np.linalg.norm(T.ravel()))


def mobius_matrix(P: Poset) -> np.ndarray:
    """Linear map sending each basis vector e_x to the indicator of [x, inf).

    Column x is the indicator of the principal upset of x; for a product
    poset the matrix is the Kronecker product of the factor matrices.
    """
    return P.leq.T.astype(float)


def mobius_inverse_matrix(P: Poset) -> np.ndarray:
    """Inverse of the upset-indicator map, valid for collider-free posets.

    Entry (x, y) is 1 if x = y, -1 if y is covered by x, 0 otherwise; for a
    chain this is the bidiagonal differencing matrix.
    """
    if not is_simplicial(P):
        raise NotSimplicial("the inverse formula requires a collider-free poset")
    M = np.eye(P.p)
    for a, b in P.covers:
        M[b, a] = -1.0
    return M


def apply_kronecker(maps, T) -> np.ndarray:
    """Apply per-mode linear maps A_1 (x) ... (x) A_k to T.

    Result[j1..jk] = sum over i1..ik of A_1[j1,i1] ... A_k[jk,ik] T[i1..ik];
    map j must have as many columns as mode j of T.
    """
    T = np.asarray(T, dtype=float)
    maps = [np.asarray(A, dtype=float) for A in maps]
    if len(maps) != T.ndim:
        raise ShapeMismatch(f"got {len(maps)} maps for an order-{T.ndim} tensor")
    out = T
    for j, A in enumerate(maps):
        if A.ndim != 2 or A.shape[1] != T.shape[j]:
            raise ShapeMismatch(f"map {j + 1} has shape {A.shape}, mode has size {T.shape[j]}")
        out = np.moveaxis(np.tensordot(A, out, axes=(1, j)), 0, j)
    return out


def mode_difference(T, mode: int) -> np.ndarray:
    """First difference along the given 1-based mode, with a zero boundary.

    Entry i along the mode becomes T[i] - T[i-1], where the out-of-range
    T[0] is treated as zero.  Composing over every mode of a product of
    chains applies the Kronecker product of the chain inverse maps.
    """
    T = np.asarray(T, dtype=float)
    if not 1 <= mode <= T.ndim:
        raise IndexOutOfRange(f"mode {mode} out of range for order-{T.ndim} tensor")
    return np.diff(T, axis=mode - 1, prepend=0.0)


def full_difference(T) -> np.ndarray:
    """Compose mode_difference over every mode."""
    T = np.asarray(T, dtype=float)
    for j in range(T.ndim):
        T = np.diff(T, axis=j, prepend=0.0)
    return T


# ---------------------------------------------------------------------------
# file formats: JSON {"shape": [...], "data": [...row-major...]} and, for
# matrices, headerless CSV with rows along mode 1.

def tensor_to_json(T) -> str:
    T = np.asarray(T, dtype=float)
    return json.dumps({"shape": list(T.shape), "data": T.ravel().tolist()})


def tensor_from_json(text: str) -> np.ndarray:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", line=exc.lineno, column=exc.colno) from exc
    if not isinstance(obj, dict) or "shape" not in obj or "data" not in obj:
        raise ParseError("tensor JSON needs 'shape' and 'data' fields")
    shape = tuple(int(s) for s in obj["shape"])
    data = np.asarray(obj["data"], dtype=float)
    if data.size != int(np.prod(shape)):
        raise ParseError(f"data length {data.size} does not match shape {shape}")
    return data.reshape(shape)


def matrix_from_csv(text: str) -> np.ndarray:
    rows = []
    width = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        cells = [c.strip() for c in line.split(",")]
        try:
            row = [float(c) for c in cells]
        except ValueError:
            bad = next(i for i, c in enumerate(cells) if not _is_float(c))
            raise ParseError(f"not a number: {cells[bad]!r}", line=lineno, column=bad + 1) from None
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise ParseError(f"expected {width} columns, got {len(row)}", line=lineno)
        rows.append(row)
    if not rows:
        raise ParseError("empty matrix file")
    return np.asarray(rows, dtype=float)


def _is_float(s: str) -> bool:
    try:
        float(s)
        return True
    except ValueError:
        return False


def read_tensor(path) -> np.ndarray:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    if str(path).endswith(".json"):
        return tensor_from_json(text)
    stripped = text.lstrip()
    if stripped.startswith("{"):
        return tensor_from_json(text)
    return matrix_from_csv(text)


def write_tensor(T, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(tensor_to_json(T))
