"""Benchmark harness: sweep methods x ranks x q x noise x seeds over one
dataset, time the decompositions and emit machine-readable records.

Noising is applied once per (snr, seed) pair and shared by every method
in that cell so comparisons are paired; metrics are always computed
against the clean tensor.  Wall time covers the decomposition call only.

The harness defaults to svd_truncate=True for the randomized methods:
plain QR-column truncation makes the oversampled/Krylov columns inert
(the first r columns of an unpivoted QR depend only on the first r
columns of the input), and the cross-method accuracy comparisons this
harness exists for require the energy-ordered variant.  Set
"svd_truncate": false in the plan to sweep the faithful default instead.
"""

from __future__ import annotations

import csv
import json
import time
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from .datagen import add_awgn, power_function_tensor, spectrum_decay_tensor, tensor_load
from .decompose import SketchConfig, TruncationSpec, tt_rbki, tt_rsi, tt_rsvd, tt_svd
from .errors import InvalidArgumentError
from .metrics import psnr, relative_error
from .tt import tt_reconstruct

_COLUMNS = [
    "method",
    "dataset",
    "ranks",
    "p",
    "q",
    "seed",
    "snr_db",
    "rel_err",
    "psnr",
    "wall_time_s",
    "trace_sum_sq",
]


@dataclass
class BenchRecord:
    method: str
    dataset: str
    ranks: Tuple[int, ...]
    p: int
    q: int
    seed: int
    snr_db: Optional[float]
    rel_err: Optional[float]
    psnr: Optional[float]
    wall_time_s: float
    trace_sum_sq: Optional[float]
    min_wall_time_s: Optional[float] = None
    error: Optional[str] = None  # in-memory diagnostic, not serialized


@dataclass
class BenchPlan:
    dataset: dict
    methods: List[str]
    ranks: list
    p: int = 0
    q: List[int] = field(default_factory=lambda: [1])
    seeds: List[int] = field(default_factory=lambda: [0])
    snr_db: Optional[List[Optional[float]]] = None
    repetitions: int = 1
    output: Optional[str] = None
    svd_truncate: bool = True
    naive_krylov: bool = False
    include_zeroth_block: bool = False

    def __post_init__(self):
        if not isinstance(self.dataset, dict):
            raise InvalidArgumentError("dataset must be an object")
        if not self.methods:
            raise InvalidArgumentError("method list is empty")
        for m in self.methods:
            if m not in _METHODS:
                raise InvalidArgumentError(f"unknown method {m!r}")
        if not self.ranks:
            raise InvalidArgumentError("rank sweep is empty")
        if not self.q:
            raise InvalidArgumentError("q sweep is empty")
        if not self.seeds:
            raise InvalidArgumentError("seed list is empty")
        if self.p < 0:
            raise InvalidArgumentError(f"p must be >= 0, got {self.p}")
        if self.repetitions < 1:
            raise InvalidArgumentError(f"repetitions must be >= 1, got {self.repetitions}")

    @staticmethod
    def from_dict(d: dict) -> "BenchPlan":
        known = {
            "dataset",
            "methods",
            "ranks",
            "p",
            "q",
            "seeds",
            "snr_db",
            "repetitions",
            "output",
            "svd_truncate",
            "naive_krylov",
            "include_zeroth_block",
        }
        extra = set(d) - known
        if extra:
            raise InvalidArgumentError(f"unknown plan keys: {sorted(extra)}")
        missing = {"dataset", "methods", "ranks", "seeds"} - set(d)
        if missing:
            raise InvalidArgumentError(f"plan is missing keys: {sorted(missing)}")
        d = dict(d)
        q = d.get("q", [1])
        d["q"] = [int(v) for v in (q if isinstance(q, list) else [q])]
        snr = d.get("snr_db")
        if snr is not None and not isinstance(snr, list):
            snr = [snr]
        d["snr_db"] = (
            None if snr is None else [None if v is None else float(v) for v in snr]
        )
        return BenchPlan(**d)


def _method_config(ranks, p, q, seed, plan: BenchPlan) -> SketchConfig:
    return SketchConfig(
        ranks=ranks,
        p=p,
        q=q,
        seed=seed,
        naive_krylov=plan.naive_krylov,
        include_zeroth_block=plan.include_zeroth_block,
        svd_truncate=plan.svd_truncate,
    )


def _run_svd(t, ranks, p, q, seed, plan):
    return tt_svd(t, TruncationSpec(ranks=ranks))


def _run_rsvd(t, ranks, p, q, seed, plan):
    return tt_rsvd(t, _method_config(ranks, p, q, seed, plan))


def _run_rsi(t, ranks, p, q, seed, plan):
    return tt_rsi(t, _method_config(ranks, p, q, seed, plan))


def _run_rbki(t, ranks, p, q, seed, plan):
    return tt_rbki(t, _method_config(ranks, p, q, seed, plan))


_METHODS = {"svd": _run_svd, "rsvd": _run_rsvd, "rsi": _run_rsi, "rbki": _run_rbki}


def _build_dataset(spec: dict):
    kind = spec.get("kind")
    if kind == "spectrum":
        n, T, D = int(spec["n"]), int(spec["T"]), float(spec["D"])
        return spectrum_decay_tensor(n, T, D), f"spectrum(n={n},T={T},D={D:g})"
    if kind == "powerfn":
        dims = tuple(int(d) for d in spec["dims"])
        h = float(spec["h"])
        return (
            power_function_tensor(dims, h),
            f"powerfn({'x'.join(map(str, dims))},h={h:g})",
        )
    if kind == "file":
        path = spec["path"]
        return tensor_load(path), str(path)
    raise InvalidArgumentError(f"unknown dataset kind {kind!r}")


def _normalize_ranks(entry, n_modes: int) -> Tuple[int, ...]:
    if isinstance(entry, (list, tuple)):
        ranks = tuple(int(r) for r in entry)
    else:
        ranks = (int(entry),) * (n_modes - 1)
    if len(ranks) != n_modes - 1:
        raise InvalidArgumentError(
            f"rank entry {entry!r} does not fit an order-{n_modes} tensor"
        )
    return ranks


def run_bench(plan: BenchPlan) -> List[BenchRecord]:
    """One BenchRecord per (method, rank, q, snr, seed) cell, sorted."""
    base, dataset_id = _build_dataset(plan.dataset)
    rank_tuples = [_normalize_ranks(r, base.ndim) for r in plan.ranks]
    snr_list = plan.snr_db if plan.snr_db is not None else [None]
    noisy = {}
    records = []
    for method in plan.methods:
        fn = _METHODS[method]
        for ranks in rank_tuples:
            for q in plan.q:
                for snr in snr_list:
                    for seed in plan.seeds:
                        if snr is None:
                            inp = base
                        else:
                            key = (snr, seed)
                            if key not in noisy:
                                noisy[key] = add_awgn(base, snr, seed)
                            inp = noisy[key]
                        records.append(
                            _run_cell(fn, method, inp, base, dataset_id, ranks, plan, q, snr, seed)
                        )
    records.sort(
        key=lambda r: (
            r.dataset,
            r.method,
            r.ranks,
            r.q,
            (r.snr_db is not None, r.snr_db or 0.0),
            r.seed,
        )
    )
    return records


def _run_cell(fn, method, inp, base, dataset_id, ranks, plan, q, snr, seed):
    t0 = time.perf_counter()
    try:
        tt, trace = fn(inp, ranks, plan.p, q, seed, plan)
        wall = time.perf_counter() - t0
        times = [wall]
        for _ in range(plan.repetitions - 1):
            t1 = time.perf_counter()
            fn(inp, ranks, plan.p, q, seed, plan)
            times.append(time.perf_counter() - t1)
        rec = tt_reconstruct(tt)
        return BenchRecord(
            method=method,
            dataset=dataset_id,
            ranks=ranks,
            p=plan.p,
            q=q,
            seed=seed,
            snr_db=snr,
            rel_err=relative_error(base, rec),
            psnr=psnr(base, rec),
            wall_time_s=times[0],
            trace_sum_sq=trace.residual_sq_sum,
            min_wall_time_s=min(times) if plan.repetitions > 1 else None,
        )
    except (InvalidArgumentError, np.linalg.LinAlgError, FloatingPointError) as exc:
        wall = time.perf_counter() - t0
        return BenchRecord(
            method=method,
            dataset=dataset_id,
            ranks=ranks,
            p=plan.p,
            q=q,
            seed=seed,
            snr_db=snr,
            rel_err=None,
            psnr=None,
            wall_time_s=wall,
            trace_sum_sq=None,
            error=str(exc),
        )


def _ranks_str(ranks) -> str:
    return "x".join(str(r) for r in ranks)


def _parse_ranks(s: str) -> Tuple[int, ...]:
    return tuple(int(v) for v in s.split("x"))


def _fmt(v) -> str:
    return "" if v is None else f"{float(v):.17g}"


def emit(records: List[BenchRecord], format: str, path):
    """Write records as CSV or JSON.

    CSV floats use 17 significant digits; JSON floats use Python's
    lossless shortest repr (json emits Infinity for an infinite PSNR).
    A min_wall_time_s column is appended only when some record carries
    repeated-run timings.
    """
    cols = list(_COLUMNS)
    if any(r.min_wall_time_s is not None for r in records):
        cols.append("min_wall_time_s")
    if format == "csv":
        with open(path, "w", newline="") as f:
            w = csv.writer(f)
            w.writerow(cols)
            for r in records:
                w.writerow(_csv_row(r, cols))
    elif format == "json":
        with open(path, "w") as f:
            json.dump([_json_obj(r, cols) for r in records], f, indent=2)
            f.write("\n")
    else:
        raise InvalidArgumentError(f"unknown format {format!r}")


def _csv_row(r: BenchRecord, cols) -> list:
    row = [
        r.method,
        r.dataset,
        _ranks_str(r.ranks),
        str(r.p),
        str(r.q),
        str(r.seed),
        _fmt(r.snr_db),
        _fmt(r.rel_err),
        _fmt(r.psnr),
        _fmt(r.wall_time_s),
        _fmt(r.trace_sum_sq),
    ]
    if "min_wall_time_s" in cols:
        row.append(_fmt(r.min_wall_time_s))
    return row


def _json_obj(r: BenchRecord, cols) -> dict:
    obj = {
        "method": r.method,
        "dataset": r.dataset,
        "ranks": _ranks_str(r.ranks),
        "p": r.p,
        "q": r.q,
        "seed": r.seed,
        "snr_db": r.snr_db,
        "rel_err": r.rel_err,
        "psnr": r.psnr,
        "wall_time_s": r.wall_time_s,
        "trace_sum_sq": r.trace_sum_sq,
    }
    if "min_wall_time_s" in cols:
        obj["min_wall_time_s"] = r.min_wall_time_s
    return obj


def _opt_float(v) -> Optional[float]:
    if v is None or v == "":
        return None
    return float(v)


def load_records(path, format: str = "csv") -> List[BenchRecord]:
    """Read back what emit wrote."""
    if format == "csv":
        with open(path, newline="") as f:
            rows = list(csv.reader(f))
        header, rows = rows[0], rows[1:]
        objs = [dict(zip(header, row)) for row in rows]
    elif format == "json":
        with open(path) as f:
            objs = json.load(f)
    else:
        raise InvalidArgumentError(f"unknown format {format!r}")
    out = []
    for o in objs:
        out.append(
            BenchRecord(
                method=o["method"],
                dataset=o["dataset"],
                ranks=_parse_ranks(o["ranks"]),
                p=int(o["p"]),
                q=int(o["q"]),
                seed=int(o["seed"]),
                snr_db=_opt_float(o["snr_db"]),
                rel_err=_opt_float(o["rel_err"]),
                psnr=_opt_float(o["psnr"]),
                wall_time_s=float(o["wall_time_s"]),
                trace_sum_sq=_opt_float(o["trace_sum_sq"]),
                min_wall_time_s=_opt_float(o.get("min_wall_time_s")),
            )
        )
    return out
