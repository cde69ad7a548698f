"""Synthetic test tensors, AWGN noising and the ".dten" dense container."""

from __future__ import annotations

import struct
from typing import Union

import numpy as np

from .errors import InvalidArgumentError, ParseError

_MAGIC = b"DTEN"
_VERSION = 1


def spectrum_decay_tensor(n: int, T: int, D: float) -> np.ndarray:
    """n x n x n tensor of diagonal frontal slices with a rank-T plateau.

    Slice j (third index, 1-based) has diagonal min(T, j) ones followed
    by 10^-D, 10^-2D, ... down to 10^-(n - min(T, j))D; all off-diagonal
    entries are zero, so each slice's singular values can be read off
    the diagonal.
    """
    if n < 1:
        raise InvalidArgumentError(f"n must be >= 1, got {n}")
    if T < 1:
        raise InvalidArgumentError(f"T must be >= 1, got {T}")
    if D <= 0:
        raise InvalidArgumentError(f"D must be > 0, got {D}")
    out = np.zeros((n, n, n))
    for j in range(1, n + 1):
        m = min(T, j)
        diag = np.ones(n)
        diag[m:] = 10.0 ** (-D * np.arange(1, n - m + 1))
        np.fill_diagonal(out[:, :, j - 1], diag)
    return out


def power_function_tensor(dims, h: float) -> np.ndarray:
    """Entry (i_1,...,i_N) = (i_1^h + ... + i_N^h)^(-1/h), 1-based indices."""
    dims = tuple(int(d) for d in dims)
    if not dims or any(d < 1 for d in dims):
        raise InvalidArgumentError(f"dims must be positive, got {dims}")
    if h <= 0:
        raise InvalidArgumentError(f"h must be > 0, got {h}")
    n_modes = len(dims)
    total = None
    for k, d in enumerate(dims):
        grid = np.arange(1, d + 1, dtype=np.float64) ** float(h)
        grid = grid.reshape([-1 if a == k else 1 for a in range(n_modes)])
        total = grid if total is None else total + grid
    return total ** (-1.0 / h)


def add_awgn(t, snr_db: float, seed: Union[int, np.random.Generator]) -> np.ndarray:
    """Add white Gaussian noise calibrated against measured signal power.

    Noise variance is (||t||_F^2 / numel) / 10^(snr_db/10); deterministic
    for a given seed.
    """
    t = np.asarray(t, dtype=np.float64)
    power = float(np.sum(t**2)) / t.size
    if power == 0.0:
        raise InvalidArgumentError("signal power is zero, SNR undefined")
    sigma = np.sqrt(power / 10.0 ** (snr_db / 10.0))
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    noise = rng.standard_normal(t.size).reshape(t.shape, order="F")
    return t + sigma * noise


def tensor_save(t, path):
    """Write the ".dten" container: magic, u8 version, u32 N, N u64 dims,
    then the values as little-endian f64 in column-major order."""
    t = np.asarray(t, dtype=np.float64)
    with open(path, "wb") as f:
        f.write(_MAGIC)
        f.write(struct.pack("<B", _VERSION))
        f.write(struct.pack("<I", t.ndim))
        f.write(np.asarray(t.shape, dtype="<u8").tobytes())
        f.write(t.ravel(order="F").astype("<f8").tobytes())


def tensor_load(path) -> np.ndarray:
    with open(path, "rb") as f:
        data = f.read()
    if len(data) < 4 or data[:4] != _MAGIC:
        raise ParseError("not a dten file (bad magic)", offset=0)
    if len(data) < 5:
        raise ParseError("truncated version byte", offset=len(data))
    version = data[4]
    if version != _VERSION:
        raise ParseError(f"unsupported version {version}", offset=4)
    if len(data) < 9:
        raise ParseError("truncated mode count", offset=len(data))
    (n_modes,) = struct.unpack_from("<I", data, 5)
    if n_modes == 0:
        raise ParseError("mode count must be positive", offset=5)
    off = 9
    if len(data) < off + 8 * n_modes:
        raise ParseError("truncated dim table", offset=len(data))
    dims = [int(v) for v in np.frombuffer(data, "<u8", n_modes, off)]
    off += 8 * n_modes
    if any(d == 0 for d in dims):
        raise ParseError("zero mode size", offset=9)
    count = 1
    for d in dims:
        count *= d
    if len(data) < off + 8 * count:
        raise ParseError(
            f"dims {dims} need {count} values, file ends early", offset=len(data)
        )
    if len(data) > off + 8 * count:
        raise ParseError("trailing bytes after values", offset=off + 8 * count)
    flat = np.frombuffer(data, "<f8", count, off)
    return np.reshape(flat, dims, order="F").copy()
