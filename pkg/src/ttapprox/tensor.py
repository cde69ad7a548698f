"""Dense order-N tensor algebra with column-major (first index fastest) layout.

Tensors are plain float64 numpy arrays.  All linearization-sensitive
operations (reshape, matricize, serialization) use Fortran order so that
element (i_1,...,i_N) lives at offset sum_n (i_n - 1) * prod_{m<n} I_m,
matching the reshape semantics the decomposition sweeps assume.  Mode
indices in this API are 0-based.
"""

from __future__ import annotations

import numpy as np

from .errors import InvalidArgumentError


def _as_tensor(t) -> np.ndarray:
    return np.asarray(t, dtype=np.float64)


def reshape(t, new_dims) -> np.ndarray:
    """Relabel dims without touching the column-major value buffer."""
    t = _as_tensor(t)
    new_dims = tuple(int(d) for d in new_dims)
    if any(d < 1 for d in new_dims):
        raise InvalidArgumentError(f"dims must be positive, got {new_dims}")
    if int(np.prod(new_dims)) != t.size:
        raise InvalidArgumentError(
            f"cannot reshape {t.size} values into dims {new_dims}"
        )
    return np.reshape(t, new_dims, order="F")


def matricize(t, split: int) -> np.ndarray:
    """Unfold t into a (I_1...I_k) x (I_{k+1}...I_N) matrix, k = split."""
    t = _as_tensor(t)
    n = t.ndim
    if not 1 <= split <= n - 1:
        raise InvalidArgumentError(f"split must be in 1..{n - 1}, got {split}")
    rows = int(np.prod(t.shape[:split]))
    cols = int(np.prod(t.shape[split:]))
    return reshape(t, (rows, cols))


def mode_n_product(t, B, n: int) -> np.ndarray:
    """Contract mode n of t against the columns of B (shape J x I_n)."""
    t = _as_tensor(t)
    B = np.asarray(B, dtype=np.float64)
    if not 0 <= n < t.ndim:
        raise InvalidArgumentError(f"mode {n} out of range for order-{t.ndim} tensor")
    if B.ndim != 2 or B.shape[1] != t.shape[n]:
        raise InvalidArgumentError(
            f"matrix shape {B.shape} does not match mode size {t.shape[n]}"
        )
    out = np.tensordot(B, t, axes=(1, n))  # new mode lands in front
    return np.moveaxis(out, 0, n)


def contract(a, n: int, m: int, b) -> np.ndarray:
    """Contract mode n of a with mode m of b.

    Result modes are a's modes excluding n followed by b's modes
    excluding m; contracting two vectors yields an order-0 tensor.
    """
    a = _as_tensor(a)
    b = _as_tensor(b)
    if not 0 <= n < a.ndim:
        raise InvalidArgumentError(f"mode {n} out of range for order-{a.ndim} tensor")
    if not 0 <= m < b.ndim:
        raise InvalidArgumentError(f"mode {m} out of range for order-{b.ndim} tensor")
    if a.shape[n] != b.shape[m]:
        raise InvalidArgumentError(
            f"common mode mismatch: {a.shape[n]} vs {b.shape[m]}"
        )
    return np.tensordot(a, b, axes=(n, m))


def frobenius_norm(t) -> float:
    t = _as_tensor(t)
    return float(np.linalg.norm(t.ravel()))
