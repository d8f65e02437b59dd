"""Command-line entry point: compile, decode, oracle, experiment.

Angles are accepted as multiples of pi ("0.2pi") or plain radians; grids as
comma lists or start:stop:step ranges. All success probabilities are computed
analytically unless --sample is given; progress goes to stderr, data to the
output file or stdout.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import __version__, experiments, oracles, qsim
from .codes import resolve_code
from .mpbpqm import mp_bit_success
from .mpg import build_mpg, compile_lists, format_mpg


def parse_theta(text: str) -> float:
    text = text.strip().lower()
    if text.endswith("pi"):
        return float(text[:-2]) * np.pi
    return float(text)


def parse_theta_grid(text: str) -> list[float]:
    """Fractions of pi: '0.05:0.45:0.05' or '0.1,0.2,0.3' or '0.2pi,0.3pi'."""
    def frac(tok: str) -> float:
        tok = tok.strip().lower()
        if tok.endswith("pi"):
            return float(tok[:-2])
        return float(tok)

    if ":" in text:
        start, stop, step = (frac(t) for t in text.split(":"))
        vals = []
        v = start
        while v <= stop + 1e-12:
            vals.append(round(v, 10))
            v += step
        return vals
    return [frac(t) for t in text.split(",")]


def parse_b_grid(text: str) -> list[int]:
    """Register widths: '4..16' (step 2), '4..16..1', or '4,6,8'."""
    if ".." in text:
        parts = text.split("..")
        lo, hi = int(parts[0]), int(parts[1])
        step = int(parts[2]) if len(parts) > 2 else 2
        return list(range(lo, hi + 1, step))
    return [int(t) for t in text.split(",")]


def _thetas_for(code, args) -> np.ndarray:
    return np.full(code.n, parse_theta(args.theta))


def cmd_compile(args) -> int:
    code = resolve_code(args.code)
    root = build_mpg(code, args.bit)
    thetas = _thetas_for(code, args)
    compiled = compile_lists(root, thetas)
    print(format_mpg(root, thetas))
    print("s,angle,prob")
    for e in compiled.root_branches:
        s = "".join(str(b) for b in e.s) or "-"
        print(f"{s},{e.angle:.12g},{e.prob:.12g}")
    return 0


def cmd_decode(args) -> int:
    code = resolve_code(args.code)
    thetas = _thetas_for(code, args)
    x = np.zeros(code.n, dtype=np.uint8)
    if args.x:
        x = np.array([int(c) for c in args.x], dtype=np.uint8)
        if len(x) != code.n or ((code.H @ x) % 2).any():
            print(f"error: {args.x} is not a codeword of {args.code}", file=sys.stderr)
            return 1
    if args.target == "block":
        target: object = "block"
    else:
        target = int(args.target.removeprefix("bit:"))
    if args.sample:
        success = _sampled_decode(code, thetas, x, target, args)
    elif args.mode == "mp":
        if target == "block":
            print("error: the compact discretized decoder is single-bit only "
                  "(its representation cannot be rewound)", file=sys.stderr)
            return 1
        success = mp_bit_success(code, thetas, x, target, args.B)
    elif target == "block":
        success = qsim.bpqm_block_success(code, thetas, x)
    else:
        success = qsim.bpqm_bit_success(code, thetas, target)
    record = {
        "code": args.code,
        "target": "block" if target == "block" else target,
        "theta": float(parse_theta(args.theta)),
        "mode": args.mode,
        "success": float(success),
    }
    if args.sample:
        record["shots"] = args.sample
        record["seed"] = args.seed
    print(json.dumps(record))
    return 0


def _sampled_decode(code, thetas, x, target, args) -> float:
    """Monte Carlo demonstration mode: projective shots instead of chaining."""
    rng = np.random.default_rng(args.seed)
    from .qsim import apply, apply_inverse, build_Vr, channel_state, measure_probs, project
    from . import _kernels

    def shot_bit(r: int, state) -> tuple[bool, object]:
        compiled = compile_lists(build_mpg(code, r), thetas)
        circuit, roles = build_Vr(compiled)
        st = apply(circuit, state)
        _kernels.apply_h(st.amp, st.m, roles.data)
        p0, p1 = measure_probs(st, roles.data)
        outcome = int(rng.random() < p1 / (p0 + p1))
        st = project(st, roles.data, outcome)
        st.amp /= np.sqrt(st.norm2())
        st.nominal_norm2 = 1.0
        _kernels.apply_h(st.amp, st.m, roles.data)
        st = apply_inverse(circuit, st)
        return outcome == int(x[r - 1]), st

    hits = 0
    for _ in range(args.sample):
        state = channel_state(x, thetas)
        if target == "block":
            ok = True
            for r in code.info_set:
                good, state = shot_bit(r, state)
                ok = ok and good
            hits += ok
        else:
            good, _ = shot_bit(target, state)
            hits += good
    return hits / args.sample


def cmd_oracle(args) -> int:
    code = resolve_code(args.code)
    thetas = _thetas_for(code, args)
    which = args.which
    if which == "pgm":
        value = oracles.pgm_block_success(code, thetas)
    elif which.startswith("helstrom:"):
        value = oracles.helstrom_bit_success(code, thetas, int(which.split(":")[1]))
    elif which == "classical:block":
        value = oracles.classical_map_success(code, thetas, "block")
    elif which.startswith("classical:"):
        value = oracles.classical_map_success(code, thetas, ("bit", int(which.split(":")[1])))
    elif which == "capacities":
        chi, c = oracles.capacities(parse_theta(args.theta))
        print(json.dumps({"theta": parse_theta(args.theta), "holevo": chi, "measured": c}))
        return 0
    else:
        print(f"error: unknown oracle {which!r}", file=sys.stderr)
        return 2
    print(json.dumps({"code": args.code, "oracle": which,
                      "theta": parse_theta(args.theta), "value": float(value)}))
    return 0


def cmd_experiment(args) -> int:
    jobs = experiments._n_workers(args.jobs)
    config = {"experiment": args.figure, "jobs": jobs}
    if args.figure == "fig12":
        theta_frac = parse_theta(args.theta) / np.pi if args.theta else 0.2
        b_grid = parse_b_grid(args.B) if args.B else list(experiments.DEFAULT_B_GRID)
        config.update(code=args.code, theta=theta_frac, B=b_grid)
        rows = experiments.fig12_rows(args.code, theta_frac, b_grid, jobs)
    elif args.figure == "fig16":
        grid = parse_theta_grid(args.thetas) if args.thetas else list(experiments.DEFAULT_THETA_GRID)
        config.update(thetas=grid)
        rows = experiments.fig16_rows(grid, jobs)
    elif args.figure == "fig17":
        theta = parse_theta(args.theta) if args.theta else 0.2 * np.pi
        config.update(theta=theta / np.pi)
        rows = experiments.fig17_rows(theta, None, jobs)
    elif args.figure == "fig19":
        grid = parse_theta_grid(args.thetas) if args.thetas else list(experiments.DEFAULT_THETA_GRID)
        config.update(thetas=grid)
        rows = experiments.fig19_rows(grid, jobs)
    elif args.figure == "custom":
        grid = parse_theta_grid(args.thetas) if args.thetas else list(experiments.DEFAULT_THETA_GRID)
        b = int(args.B) if args.B else None
        config.update(code=args.code, target=args.target, mode=args.mode, B=b, thetas=grid)
        target = "block" if args.target == "block" else args.target.removeprefix("bit:")
        rows = experiments.custom_rows(args.code, target, args.mode, b, grid, jobs)
    else:
        print(f"error: unknown experiment {args.figure!r}", file=sys.stderr)
        return 2
    experiments.write_csv(args.out, args.figure, rows, config)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="bpqm-lab",
                                description="pure-state CQ channel decoding experiments")
    p.add_argument("--version", action="version", version=f"bpqm-lab {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("compile", help="print the MPG and root branch list")
    c.add_argument("--code", required=True)
    c.add_argument("--bit", type=int, default=1)
    c.add_argument("--theta", default="0.2pi")
    c.set_defaults(func=cmd_compile)

    d = sub.add_parser("decode", help="single decode success probability")
    d.add_argument("--code", required=True)
    d.add_argument("--mode", choices=["exact", "mp"], default="exact")
    d.add_argument("--target", default="bit:1", help="bit:<r> or block")
    d.add_argument("--theta", default="0.2pi")
    d.add_argument("--B", type=int, default=None, help="angle register width (mp mode)")
    d.add_argument("--x", default=None, help="codeword bits, e.g. 10011")
    d.add_argument("--sample", type=int, default=None, help="Monte Carlo shots")
    d.add_argument("--seed", type=int, default=0)
    d.set_defaults(func=cmd_decode)

    o = sub.add_parser("oracle", help="optimal/classical reference values")
    o.add_argument("--code", required=True)
    o.add_argument("--which", required=True,
                   help="pgm | helstrom:<r> | classical:<r> | classical:block | capacities")
    o.add_argument("--theta", default="0.2pi")
    o.set_defaults(func=cmd_oracle)

    e = sub.add_parser("experiment", help="figure sweeps emitting CSV")
    e.add_argument("figure", choices=["fig12", "fig16", "fig17", "fig19", "custom"])
    e.add_argument("--code", default="builtin:code17")
    e.add_argument("--theta", default=None)
    e.add_argument("--thetas", default=None, help="grid in fractions of pi")
    e.add_argument("--B", default=None)
    e.add_argument("--target", default="bit:1")
    e.add_argument("--mode", choices=["exact", "mp"], default="exact")
    e.add_argument("--jobs", type=int, default=None)
    e.add_argument("--out", default="-")
    e.set_defaults(func=cmd_experiment)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
