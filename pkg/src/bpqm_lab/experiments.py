"""Experiment sweeps behind the CLI: deterministic rows, CSV emission, worker pool.

Every experiment is a pure function from its configuration to a list of CSV
rows in a fixed grid order; grid points may be dispatched to a process pool
but results are always reassembled in grid order, so repeated runs produce
byte-identical files (modulo the trailing version/hash comment).
"""

from __future__ import annotations

import hashlib
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import __version__
from .codes import resolve_code
from .mpbpqm import mp_bit_success
from .nontree import (
    OPTIMAL,
    ClonerSpec,
    nontree_bit_success,
    nontree_block_success,
    subtree_strategies,
)
from .oracles import classical_map_success, helstrom_bit_success, pgm_block_success

SCHEMAS = {
    "fig12": ["B", "theta", "epsilon"],
    "fig16": ["theta", "target", "decoder", "success"],
    "fig17": ["theta_prime", "decoder", "success"],
    "fig19": ["theta", "decoder", "success"],
    "custom": ["theta", "target", "decoder", "success"],
}

DEFAULT_THETA_GRID = tuple(round(0.05 * i, 10) for i in range(1, 10))  # multiples of pi
DEFAULT_B_GRID = (4, 6, 8, 10, 12, 14, 16)


def _n_workers(requested: int | None) -> int:
    env = os.environ.get("BPQM_THREADS")
    if env:
        return max(1, int(env))
    return max(1, requested or 1)


def _pool_map(fn, items, jobs: int):
    items = list(items)
    if jobs <= 1 or len(items) <= 1:
        return [fn(it) for it in items]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))


def _progress(msg: str) -> None:
    print(msg, file=sys.stderr, flush=True)


def _fig12_point(args):
    code_spec, theta_frac, b, ideal = args
    code = resolve_code(code_spec)
    thetas = np.full(code.n, theta_frac * np.pi)
    got = mp_bit_success(code, thetas, np.zeros(code.n, dtype=np.uint8), 1, b)
    return max(ideal - got, 0.0)


def fig12_rows(code_spec: str = "builtin:code17", theta_frac: float = 0.2,
               b_grid=DEFAULT_B_GRID, jobs: int = 1) -> list[list]:
    """Single-bit suboptimality of the discretized decoder vs register width.

    All theta columns in the CSVs are fractions of pi.
    """
    code = resolve_code(code_spec)
    ideal = helstrom_bit_success(code, np.full(code.n, theta_frac * np.pi), 1)
    eps = _pool_map(_fig12_point, [(code_spec, theta_frac, b, ideal) for b in b_grid], jobs)
    _progress(f"fig12: {len(eps)} register widths done")
    return [[b, theta_frac, e] for b, e in zip(b_grid, eps)]


def _fig16_point(args):
    theta, target, decoder = args
    code = resolve_code("builtin:code8")
    thetas = np.full(code.n, theta)
    if target == "block":
        if decoder.startswith("h"):
            return nontree_block_success(code, theta, int(decoder[1:]))
        if decoder == "classical_blockmap":
            return classical_map_success(code, thetas, "block")
        return pgm_block_success(code, thetas)
    r = 1 if target == "x1" else 5
    if decoder.startswith("h"):
        return nontree_bit_success(code, theta, r, int(decoder[1:]))
    if decoder == "classical_bitmap":
        return classical_map_success(code, thetas, ("bit", r))
    return helstrom_bit_success(code, thetas, r)


def fig16_rows(theta_grid=DEFAULT_THETA_GRID, jobs: int = 1) -> list[list]:
    """Bit/block decoding of the 8-bit code for h=1..3 against the baselines."""
    tasks, keys = [], []
    for target in ("x1", "x5", "block"):
        decoders = ["h1", "h2", "h3"]
        decoders.append("classical_blockmap" if target == "block" else "classical_bitmap")
        decoders.append("quantum_optimal")
        for tfrac in theta_grid:
            for dec in decoders:
                keys.append((tfrac, target, dec))
                tasks.append((tfrac * np.pi, target, dec))
    vals = _pool_map(_fig16_point, tasks, jobs)
    _progress(f"fig16: {len(vals)} grid points done")
    return [[t, target, dec, v] for (t, target, dec), v in zip(keys, vals)]


def _fig17_point(args):
    kind, theta, tp = args
    code = resolve_code("builtin:code8")
    thetas = np.full(code.n, theta)
    if kind == "optimal_cloner":
        return nontree_bit_success(code, theta, 1, 3, ClonerSpec(OPTIMAL, tp))
    if kind == "enu_h3":
        return nontree_bit_success(code, theta, 1, 3)
    if kind == "enu_h2":
        return nontree_bit_success(code, theta, 1, 2)
    return classical_map_success(code, thetas, ("bit", 1))


def fig17_rows(theta: float = 0.2 * np.pi, tp_grid=None, jobs: int = 1) -> list[list]:
    """Optimal-cloner sweep over the assumed clone angle at h=3."""
    if tp_grid is None:
        tp_grid = tuple(round(0.02 + 0.005 * i, 10) for i in range(93))  # of pi
    tasks = [("optimal_cloner", theta, tp * np.pi) for tp in tp_grid]
    sweeps = _pool_map(_fig17_point, tasks, jobs)
    refs = {k: _fig17_point((k, theta, None)) for k in ("enu_h3", "enu_h2", "classical")}
    _progress(f"fig17: swept {len(tp_grid)} clone angles")
    rows = [[tp, "optimal_cloner", v] for tp, v in zip(tp_grid, sweeps)]
    for k, v in refs.items():
        rows += [[tp, k, v] for tp in tp_grid]
    return rows


def _fig19_point(args):
    theta, decoder = args
    code = resolve_code("builtin:code8")
    if decoder == "h2":
        return nontree_bit_success(code, theta, 1, 2)
    curves = subtree_strategies(code, [theta])
    return curves[decoder][0]


def fig19_rows(theta_grid=DEFAULT_THETA_GRID, jobs: int = 1) -> list[list]:
    """Cloning-free subtree strategies against the h=2 unrolled decoder."""
    decoders = ["strategy1", "strategy2", "strategy3", "h2"]
    tasks = [(t * np.pi, d) for t in theta_grid for d in decoders]
    vals = _pool_map(_fig19_point, tasks, jobs)
    _progress(f"fig19: {len(vals)} grid points done")
    keys = [(t, d) for t in theta_grid for d in decoders]
    return [[t, d, v] for (t, d), v in zip(keys, vals)]


def _custom_point(args):
    code_spec, theta, target, mode, b = args
    from . import qsim
    code = resolve_code(code_spec)
    thetas = np.full(code.n, theta)
    if target == "block":
        return qsim.bpqm_block_success(code, thetas)
    r = int(target)
    if mode == "mp":
        return mp_bit_success(code, thetas, np.zeros(code.n, dtype=np.uint8), r, b)
    return qsim.bpqm_bit_success(code, thetas, r)


def custom_rows(code_spec: str, target: str, mode: str = "exact", b: int | None = None,
                theta_grid=DEFAULT_THETA_GRID, jobs: int = 1) -> list[list]:
    """Success-vs-theta sweep of one decoder on one code."""
    tasks = [(code_spec, t * np.pi, target, mode, b) for t in theta_grid]
    vals = _pool_map(_custom_point, tasks, jobs)
    _progress(f"custom: {len(vals)} grid points done")
    label = mode if mode == "exact" else f"mp_B{b}"
    tname = "block" if target == "block" else f"x{target}"
    return [[t, tname, label, v] for t, v in zip(theta_grid, vals)]


def config_hash(config: dict) -> str:
    blob = json.dumps(config, sort_keys=True, default=str).encode()
    return hashlib.sha256(blob).hexdigest()[:12]


def write_csv(path, figure: str, rows: list[list], config: dict) -> None:
    header = SCHEMAS[figure]
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    lines.append(f"# bpqm-lab {__version__} {config_hash(config)}")
    text = "\n".join(lines) + "\n"
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _fmt(v) -> str:
    if isinstance(v, float):
        return format(v, ".12g")
    return str(v)
