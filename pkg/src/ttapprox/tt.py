"""Tensor-train format: the core chain type, reconstruction, validation
and the ".ttc" serialization.

A TT tensor is an ordered list of order-3 cores, core n of shape
(r_{n-1}, I_n, r_n) with boundary ranks r_0 = r_N = 1.  Decomposition
outputs additionally keep cores 1..N-1 left-orthogonal.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass, field
from typing import List, Sequence

import numpy as np

from .errors import InvalidArgumentError, ParseError

_MAGIC = b"TTC1"
_ORTH_TOL = 1e-10


class TTTensor:
    """Immutable chain of order-3 TT cores.

    The constructor only checks core order (each core must be 3-d);
    rank-chain consistency is checked by validate / tt_reconstruct so
    deliberately broken chains can still be inspected.
    """

    def __init__(self, cores: Sequence):
        cores = [np.asarray(c, dtype=np.float64) for c in cores]
        if not cores:
            raise InvalidArgumentError("a TT tensor needs at least one core")
        for i, c in enumerate(cores):
            if c.ndim != 3:
                raise InvalidArgumentError(f"core {i} must be order 3, got order {c.ndim}")
        self.cores = tuple(cores)

    @property
    def order(self) -> int:
        return len(self.cores)

    @property
    def dims(self) -> tuple:
        return tuple(c.shape[1] for c in self.cores)

    @property
    def ranks(self) -> tuple:
        """(r_0, ..., r_N) read off the core shapes."""
        return (self.cores[0].shape[0],) + tuple(c.shape[2] for c in self.cores)

    def __eq__(self, other):
        return (
            isinstance(other, TTTensor)
            and len(self.cores) == len(other.cores)
            and all(np.array_equal(a, b) for a, b in zip(self.cores, other.cores))
        )


def num_params(tt: TTTensor) -> int:
    """Stored parameter count, sum of r_{n-1} * I_n * r_n."""
    return int(sum(c.size for c in tt.cores))


def _check_chain(tt: TTTensor):
    ranks = tt.ranks
    if ranks[0] != 1:
        raise InvalidArgumentError(f"core 0 has boundary rank {ranks[0]}, expected 1")
    if ranks[-1] != 1:
        raise InvalidArgumentError(
            f"core {tt.order - 1} has boundary rank {ranks[-1]}, expected 1"
        )
    for n in range(tt.order - 1):
        if tt.cores[n].shape[2] != tt.cores[n + 1].shape[0]:
            raise InvalidArgumentError(
                f"core {n} has trailing rank {tt.cores[n].shape[2]} but core "
                f"{n + 1} expects {tt.cores[n + 1].shape[0]}"
            )


def tt_reconstruct(tt: TTTensor) -> np.ndarray:
    """Contract the chain back into a dense (I_1, ..., I_N) tensor."""
    _check_chain(tt)
    out = tt.cores[0][0]  # (I_1, r_1)
    for core in tt.cores[1:]:
        out = np.tensordot(out, core, axes=(out.ndim - 1, 0))
    return out[..., 0]


def left_unfolding(core: np.ndarray) -> np.ndarray:
    """(r_{n-1} I_n) x r_n unfolding whose columns are orthonormal for
    left-orthogonal cores."""
    r0, i, r1 = core.shape
    return np.reshape(core, (r0 * i, r1), order="F")


@dataclass
class ValidationReport:
    boundary_ok: bool
    adjacency_ok: bool
    bad_cores: List[int] = field(default_factory=list)
    orth_residuals: List[float] = field(default_factory=list)

    @property
    def left_orthogonal(self) -> bool:
        return all(r <= _ORTH_TOL for r in self.orth_residuals)

    @property
    def ok(self) -> bool:
        return self.boundary_ok and self.adjacency_ok and self.left_orthogonal


def validate(tt: TTTensor) -> ValidationReport:
    """Report rank-chain consistency, boundary ranks and per-core
    left-orthogonality residuals max|Q^T Q - I| for cores 1..N-1."""
    ranks = tt.ranks
    boundary_ok = ranks[0] == 1 and ranks[-1] == 1
    bad = [
        n
        for n in range(tt.order - 1)
        if tt.cores[n].shape[2] != tt.cores[n + 1].shape[0]
    ]
    residuals = []
    for core in tt.cores[:-1]:
        Q = left_unfolding(core)
        G = Q.T @ Q
        residuals.append(float(np.max(np.abs(G - np.eye(G.shape[0])))))
    return ValidationReport(boundary_ok, not bad, bad, residuals)


def tt_save(tt: TTTensor, path):
    """Write the ".ttc" container: magic, u32 N, (N+1) u64 ranks, N u64
    mode sizes, then the cores as little-endian f64 in column-major order."""
    _check_chain(tt)
    ranks = tt.ranks
    dims = tt.dims
    with open(path, "wb") as f:
        f.write(_MAGIC)
        f.write(struct.pack("<I", tt.order))
        f.write(np.asarray(ranks, dtype="<u8").tobytes())
        f.write(np.asarray(dims, dtype="<u8").tobytes())
        for core in tt.cores:
            f.write(core.ravel(order="F").astype("<f8").tobytes())


def tt_load(path) -> TTTensor:
    with open(path, "rb") as f:
        data = f.read()
    if len(data) < 4 or data[:4] != _MAGIC:
        raise ParseError("not a ttc file (bad magic)", offset=0)
    off = 4
    if len(data) < off + 4:
        raise ParseError("truncated core count", offset=len(data))
    (n_cores,) = struct.unpack_from("<I", data, off)
    off += 4
    if n_cores == 0:
        raise ParseError("core count must be positive", offset=4)
    need = (n_cores + 1 + n_cores) * 8
    if len(data) < off + need:
        raise ParseError("truncated rank/dim table", offset=len(data))
    ranks = [int(v) for v in np.frombuffer(data, "<u8", n_cores + 1, off)]
    off += (n_cores + 1) * 8
    dims = [int(v) for v in np.frombuffer(data, "<u8", n_cores, off)]
    off += n_cores * 8
    for n in range(n_cores):
        if ranks[n] == 0 or ranks[n + 1] == 0 or dims[n] == 0:
            raise InvalidArgumentError(f"core {n} has a zero rank or mode size")
    if ranks[0] != 1:
        raise InvalidArgumentError(f"core 0 has boundary rank {ranks[0]}, expected 1")
    if ranks[-1] != 1:
        raise InvalidArgumentError(
            f"core {n_cores - 1} has boundary rank {ranks[-1]}, expected 1"
        )
    cores = []
    for n in range(n_cores):
        count = ranks[n] * dims[n] * ranks[n + 1]
        if len(data) < off + count * 8:
            raise ParseError(f"truncated data for core {n}", offset=len(data))
        flat = np.frombuffer(data, "<f8", count, off)
        cores.append(
            np.reshape(flat, (ranks[n], dims[n], ranks[n + 1]), order="F").copy()
        )
        off += count * 8
    if off != len(data):
        raise ParseError("trailing bytes after last core", offset=off)
    return TTTensor(cores)
