"""Left-to-right TT decomposition sweeps.

All four algorithms share one scaffold: unfold the carried tensor to
(r_{n-1} I_n) x (I_{n+1}...I_N), pick an orthonormal column basis Q of
target width r_n, store Q reshaped as the next core, carry Q^T A (for
the deterministic sweep, diag(S) V^T) into the next step.  They differ
only in how Q is found:

  tt_svd   truncated SVD of the unfolding (deterministic)
  tt_rsvd  QR of the Gaussian sketch A Omega
  tt_rsi   QR of the sketch refined by q rounds of power iteration
  tt_rbki  QR of A U with U a block Krylov basis of depth q

Per-step residuals rho_n = ||(I - Q Q^T) A_n||_F are recorded in the
trace; their squares sum to the final squared approximation error.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from .errors import InvalidArgumentError
from .linalg import block_krylov_basis, economy_qr, gaussian_matrix, svd
from .tt import TTTensor


@dataclass
class TruncationSpec:
    """Either prescribed accuracy epsilon or fixed target ranks."""

    epsilon: Optional[float] = None
    ranks: Optional[Tuple[int, ...]] = None

    def __post_init__(self):
        if (self.epsilon is None) == (self.ranks is None):
            raise InvalidArgumentError("set exactly one of epsilon or ranks")
        if self.epsilon is not None and self.epsilon < 0:
            raise InvalidArgumentError(f"epsilon must be >= 0, got {self.epsilon}")
        if self.ranks is not None:
            self.ranks = tuple(int(r) for r in self.ranks)
            if any(r < 1 for r in self.ranks):
                raise InvalidArgumentError(f"ranks must be positive, got {self.ranks}")


@dataclass
class SketchConfig:
    """Parameters of the randomized sweeps."""

    ranks: Tuple[int, ...]
    p: int = 0
    q: int = 1
    seed: int = 0
    naive_krylov: bool = False
    include_zeroth_block: bool = False
    svd_truncate: bool = False

    def __post_init__(self):
        self.ranks = tuple(int(r) for r in self.ranks)
        if any(r < 1 for r in self.ranks):
            raise InvalidArgumentError(f"ranks must be positive, got {self.ranks}")
        if self.p < 0:
            raise InvalidArgumentError(f"p must be >= 0, got {self.p}")
        if self.q < 1:
            raise InvalidArgumentError(f"q must be >= 1, got {self.q}")


@dataclass
class SweepStep:
    n: int
    rank: int
    residual: float
    elapsed_s: float
    sketch_width: Optional[int] = None
    clamped: bool = False
    padded_cols: int = 0


@dataclass
class SweepTrace:
    steps: List[SweepStep] = field(default_factory=list)
    final_rel_err: Optional[float] = None

    @property
    def residual_sq_sum(self) -> float:
        return float(sum(s.residual**2 for s in self.steps))


def _as_input(t) -> np.ndarray:
    t = np.asarray(t, dtype=np.float64)
    if t.ndim < 1:
        raise InvalidArgumentError("input tensor must have order >= 1")
    return t


def _check_ranks(dims, ranks):
    n_modes = len(dims)
    ranks = tuple(int(r) for r in ranks)
    if len(ranks) != n_modes - 1:
        raise InvalidArgumentError(
            f"need {n_modes - 1} ranks for an order-{n_modes} tensor, got {len(ranks)}"
        )
    r_prev = 1
    for n, r in enumerate(ranks):
        rows = r_prev * dims[n]
        cols = int(np.prod(dims[n + 1 :]))
        if not 1 <= r <= min(rows, cols):
            raise InvalidArgumentError(
                f"rank {r} at step {n} exceeds min({rows}, {cols})"
            )
        r_prev = r
    return ranks


def _sweep(t: np.ndarray, pick_basis) -> Tuple[TTTensor, SweepTrace]:
    """Shared scaffold; pick_basis(A, n) -> (Q, carry, step fields)."""
    dims = t.shape
    cores = []
    trace = SweepTrace()
    C = t
    r_prev = 1
    for n in range(t.ndim - 1):
        A = np.reshape(C, (r_prev * dims[n], -1), order="F")
        t0 = time.perf_counter()
        Q, C, residual, width, clamped, padded = pick_basis(A, n)
        elapsed = time.perf_counter() - t0
        r_n = Q.shape[1]
        cores.append(np.reshape(Q, (r_prev, dims[n], r_n), order="F"))
        trace.steps.append(
            SweepStep(n, r_n, residual, elapsed, width, clamped, padded)
        )
        r_prev = r_n
    cores.append(np.reshape(C, (r_prev, dims[-1], 1), order="F"))
    return TTTensor(cores), trace


def tt_svd(t, trunc: TruncationSpec) -> Tuple[TTTensor, SweepTrace]:
    """Deterministic TT decomposition by per-step truncated SVD.

    In epsilon mode each step truncates at delta = eps ||t||_F /
    sqrt(N-1), which guarantees a final relative error <= eps; in rank
    mode the requested ranks are used exactly.
    """
    t = _as_input(t)
    if trunc.ranks is not None:
        ranks = _check_ranks(t.shape, trunc.ranks)
        delta = None
    else:
        if t.ndim < 2:
            raise InvalidArgumentError("epsilon mode needs an order >= 2 tensor")
        ranks = None
        delta = trunc.epsilon * float(np.linalg.norm(t.ravel())) / math.sqrt(t.ndim - 1)

    def pick(A, n):
        U, s, V, k = svd(A)
        if ranks is not None:
            r = ranks[n]
        else:
            tail_sq = np.concatenate([np.cumsum((s**2)[::-1])[::-1], [0.0]])
            r = k
            for cand in range(1, k + 1):
                if tail_sq[cand] <= delta * delta:
                    r = cand
                    break
        residual = float(np.sqrt(np.sum(s[r:] ** 2)))
        carry = s[:r, None] * V[:, :r].T  # diag(S) V^T
        return U[:, :r], carry, residual, None, False, 0

    return _sweep(t, pick)


def _pad_basis(Q, r, rng):
    """Extend Q with orthonormalized random columns up to width r."""
    rows = Q.shape[0]
    added = 0
    while Q.shape[1] < r:
        G = gaussian_matrix(rows, r - Q.shape[1], rng)
        for _ in range(2):  # reorthogonalize against what we have
            G = G - Q @ (Q.T @ G)
        Qg = economy_qr(G)[0]
        Q = np.hstack([Q, Qg[:, : r - Q.shape[1]]])
        added += Qg.shape[1]
    return Q, added


def _randomized_sweep(t, cfg: SketchConfig, build_y) -> Tuple[TTTensor, SweepTrace]:
    t = _as_input(t)
    ranks = _check_ranks(t.shape, cfg.ranks)
    rng = np.random.default_rng(cfg.seed)

    def pick(A, n):
        r = ranks[n]
        cols = A.shape[1]
        width = min(r + cfg.p, cols)
        clamped = width < r + cfg.p
        Omega = gaussian_matrix(cols, width, rng)
        Y = build_y(A, Omega)
        if cfg.svd_truncate:
            Q = svd(Y).U[:, :r]
        else:
            Q = economy_qr(Y)[0][:, :r]
        padded = 0
        if Q.shape[1] < r:
            Q, padded = _pad_basis(Q, r, rng)
        carry = Q.T @ A
        # rho^2 = ||A||^2 - ||Q^T A||^2, clamped against cancellation
        res_sq = float(np.sum(A**2)) - float(np.sum(carry**2))
        residual = math.sqrt(max(res_sq, 0.0))
        return Q, carry, residual, width, clamped, padded

    return _sweep(t, pick)


def tt_rsvd(t, cfg: SketchConfig) -> Tuple[TTTensor, SweepTrace]:
    """Randomized TT decomposition from a plain Gaussian sketch."""

    def build_y(A, Omega):
        return A @ Omega

    return _randomized_sweep(t, cfg, build_y)


def tt_rsi(t, cfg: SketchConfig) -> Tuple[TTTensor, SweepTrace]:
    """Randomized TT decomposition with q rounds of subspace power
    iteration, re-orthogonalizing after every half step."""

    def build_y(A, Omega):
        Y = A @ Omega
        Q = economy_qr(Y)[0]
        for _ in range(cfg.q):
            Qh = economy_qr(A.T @ Q)[0]
            Y = A @ Qh
            Q = economy_qr(Y)[0]
        return Y

    return _randomized_sweep(t, cfg, build_y)


def tt_rbki(t, cfg: SketchConfig) -> Tuple[TTTensor, SweepTrace]:
    """Randomized TT decomposition through a depth-q block Krylov basis."""

    def build_y(A, Omega):
        U = block_krylov_basis(
            A,
            Omega,
            cfg.q,
            naive=cfg.naive_krylov,
            include_zeroth=cfg.include_zeroth_block,
        )
        return A @ U

    return _randomized_sweep(t, cfg, build_y)


def bound_factors(r, p, q, N, t: float = 1.0, u: float = 1.0, spectrum=None) -> dict:
    """Closed-form error-bound factors for the randomized sweeps.

    Returns eta_rsvd (plain-sketch factor), eta_rbki (Krylov factor),
    power_iter_bound (spectrum-aware power-iteration bound, None when no
    spectrum is given) and the sqrt(N-1) prefactor that turns a per-step
    factor into a whole-sweep bound.
    """
    if r < 0:
        raise InvalidArgumentError(f"r must be >= 0, got {r}")
    if q < 1:
        raise InvalidArgumentError(f"q must be >= 1, got {q}")
    if N < 1:
        raise InvalidArgumentError(f"N must be >= 1, got {N}")
    if t < 1 or u < 1:
        raise InvalidArgumentError("t and u must be >= 1")
    if p < 1:
        raise InvalidArgumentError("eta_rsvd requires p >= 1")
    if p < 2:
        raise InvalidArgumentError("eta_rbki and power_iter_bound require p >= 2")
    s = r + p
    e = math.e
    eta_rsvd = 1.0 + t * math.sqrt(12.0 * r / p) + u * t * e * math.sqrt(s) / (p + 1)
    root = 1.0 / (2 * q + 1)
    eta_rbki = (1.0 + math.sqrt(r / (p - 1)) + e * math.sqrt(s) / p) ** root
    power_iter_bound = None
    if spectrum is not None:
        d = np.asarray(spectrum, dtype=np.float64)
        head = d[r] ** (2 * q + 1) if r < len(d) else 0.0
        tail = math.sqrt(float(np.sum(d[r:] ** (2 * (2 * q + 1)))))
        power_iter_bound = (
            (1.0 + math.sqrt(r / (p - 1))) * head + (e * math.sqrt(s) / p) * tail
        ) ** root
    return {
        "eta_rsvd": eta_rsvd,
        "eta_rbki": eta_rbki,
        "power_iter_bound": power_iter_bound,
        "prefactor": math.sqrt(N - 1),
    }
