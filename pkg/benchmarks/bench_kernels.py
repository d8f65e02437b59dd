"""Compare the compiled statevector kernels against the numpy fallback.

Usage: python benchmarks/bench_kernels.py [max_qubits]

Times the three gate kernels on random states and a full 17-bit single-bit
decode through each backend.
"""

import sys
import time

import numpy as np

from bpqm_lab._kernels import _pure

try:
    from bpqm_lab._kernels import _core
except ImportError:
    _core = None


def _rand_state(n, rng):
    v = rng.normal(size=2 ** n) + 1j * rng.normal(size=2 ** n)
    return (v / np.linalg.norm(v)).astype(np.complex128)


def _rand_table(patterns, rng):
    mats = []
    for _ in range(patterns):
        q, _ = np.linalg.qr(rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4)))
        mats.append(q)
    return np.ascontiguousarray(np.stack(mats))


def time_gate(fn, amp, *args, repeats=20):
    best = float("inf")
    for _ in range(repeats):
        work = amp.copy()
        t0 = time.perf_counter()
        fn(work, *args)
        best = min(best, time.perf_counter() - t0)
    return best


def bench_gates(max_n):
    rng = np.random.default_rng(0)
    rows = []
    for n in (12, 16, max_n):
        amp = _rand_state(n, rng)
        table = _rand_table(2 ** 6, rng)
        cases = [
            ("h", lambda im: (im.apply_h, (n, n // 2))),
            ("cnot", lambda im: (im.apply_cnot, (n, 1, n - 2))),
            ("uc2(6 ctrl)", lambda im: (im.apply_uc2,
                                        (n, 0, 1, tuple(range(2, 8)), table))),
        ]
        for name, make in cases:
            fn, args = make(_pure)
            t_pure = time_gate(fn, amp, *args)
            if _core is not None:
                fn, args = make(_core)
                t_core = time_gate(fn, amp, *args)
                rows.append((name, n, t_pure, t_core))
            else:
                rows.append((name, n, t_pure, None))
    return rows


def bench_decode():
    import os
    out = {}
    for backend in ("numpy", "cython"):
        if backend == "cython" and _core is None:
            continue
        env = os.environ.copy()
        # re-import cleanly in a subprocess so the backend switch takes effect
        import subprocess
        code = (
            "import time, numpy as np\n"
            "from bpqm_lab.codes import builtin_code\n"
            "from bpqm_lab import qsim\n"
            "from bpqm_lab.mpg import build_mpg, compile_lists\n"
            "code = builtin_code('code17')\n"
            "th = np.full(17, 0.2*np.pi)\n"
            "comp = compile_lists(build_mpg(code, 1), th)\n"
            "circ, roles = qsim.build_Vr(comp)\n"
            "psi = qsim.channel_state(np.zeros(17,dtype=int), th)\n"
            "t0 = time.perf_counter()\n"
            "for _ in range(5): qsim.apply(circ, psi)\n"
            "print((time.perf_counter()-t0)/5)\n"
        )
        env["BPQM_PURE_PYTHON"] = "1" if backend == "numpy" else ""
        res = subprocess.run([sys.executable, "-c", code], env=env,
                             capture_output=True, text=True, check=True)
        out[backend] = float(res.stdout.strip())
    return out


def main():
    max_n = int(sys.argv[1]) if len(sys.argv) > 1 else 18
    print(f"compiled backend available: {_core is not None}")
    print(f"{'kernel':14s} {'n':>3s} {'numpy':>10s} {'cython':>10s} {'speedup':>8s}")
    for name, n, t_pure, t_core in bench_gates(max_n):
        if t_core is None:
            print(f"{name:14s} {n:3d} {t_pure * 1e3:9.3f}ms {'-':>10s}")
        else:
            print(f"{name:14s} {n:3d} {t_pure * 1e3:9.3f}ms {t_core * 1e3:9.3f}ms "
                  f"{t_pure / t_core:7.1f}x")
    decode = bench_decode()
    print("\n17-bit single-bit decode (circuit apply):")
    for backend, t in decode.items():
        print(f"  {backend:7s} {t * 1e3:9.2f} ms")


if __name__ == "__main__":
    main()
