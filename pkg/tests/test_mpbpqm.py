import math

import numpy as np
import pytest

from bpqm_lab import qsim
from bpqm_lab.codes import builtin_code, from_parity_check
from bpqm_lab.mpg import build_mpg, compile_lists
from bpqm_lab.mpbpqm import (
    QuantGrid,
    equality_gate_from_rotations,
    mp_bit_success,
    mp_check,
    mp_equality,
    quantize,
    quantize_rotation,
    rotation_angles,
    run_message_passing,
    success_from_message,
    block_loss_bound,
)

RNG = np.random.default_rng(23)


def test_grid_definition():
    g = QuantGrid(3)
    assert g.delta == pytest.approx(2.0 / 9.0, abs=1e-15)
    assert len(g.points) == 8
    assert g.points[0] > -1.0 and g.points[-1] < 1.0
    assert np.allclose(np.diff(g.points), g.delta)


def test_quantize_nearest_and_ties():
    g1 = QuantGrid(1)
    assert np.allclose(g1.points, [-1 / 3, 1 / 3])
    assert quantize(0.9, g1) == pytest.approx(1 / 3)
    assert quantize(0.0, g1) == pytest.approx(-1 / 3)  # tie rounds toward -1
    g = QuantGrid(6)
    lo, hi = g.points[0], g.points[-1]
    for c in RNG.uniform(-1, 1, 500):
        err = abs(quantize(float(c), g) - c)
        if lo <= c <= hi:
            assert err <= g.delta / 2 + 1e-15
        else:
            # cosines past the outermost grid point clip with error < delta
            assert err <= g.delta


def test_quantize_rotation():
    for B in (2, 5, 9):
        assert quantize_rotation(0.0, B) == 0.0
        assert quantize_rotation(2 * math.pi, B) == pytest.approx(2 * math.pi, abs=1e-12)
        step = math.pi / (2 ** B - 1)
        for phi in RNG.uniform(0, 2 * math.pi, 200):
            assert abs(quantize_rotation(float(phi), B) - phi) <= step + 1e-12


def test_rotation_angles_rebuild_gate():
    worst = 0.0
    for _ in range(1000):
        c1, c2 = RNG.uniform(-0.999, 0.999, 2)
        a, b = rotation_angles(float(c1), float(c2))
        assert 0.0 <= a <= 2 * math.pi and 0.0 <= b <= 2 * math.pi
        rebuilt = equality_gate_from_rotations(a, b)
        target = np.real(qsim.u_ostar(math.acos(c1), math.acos(c2)))
        # global sign is a gauge choice of the angle folding; it cancels in
        # every density-matrix conjugation
        worst = max(worst, min(np.abs(rebuilt - target).max(),
                               np.abs(rebuilt + target).max()))
    assert worst < 1e-12


def test_rotation_angles_symmetric_case():
    a, b = rotation_angles(0.5, 0.5)
    assert math.isfinite(a) and math.isfinite(b)


def test_quantized_gate_error_bound():
    # two R_y rotations, each off by at most half a grid step; operator-norm
    # error <= pi * 2^(1-B) by the R_y Lipschitz bound
    for B in (4, 6, 8):
        worst = 0.0
        for _ in range(200):
            c1, c2 = RNG.uniform(-0.99, 0.99, 2)
            a, b = rotation_angles(float(c1), float(c2))
            exact = equality_gate_from_rotations(a, b)
            quant = equality_gate_from_rotations(
                quantize_rotation(a, B), quantize_rotation(b, B))
            err = np.linalg.norm(quant - exact, ord=2)
            worst = max(worst, err)
        assert worst <= math.pi * 2.0 ** (1 - B) + 1e-12


def _pure_entry(x, theta):
    v = np.array([math.cos(theta / 2), (-1.0) ** x * math.sin(theta / 2)])
    from bpqm_lab.mpbpqm import CompactEntry
    return CompactEntry(1.0, np.outer(v, v), math.cos(theta), ())


def test_mp_equality_pure_inputs():
    from bpqm_lab.mpg import angle_ostar
    for _ in range(50):
        t1, t2 = RNG.uniform(0.1, math.pi - 0.1, 2)
        x = int(RNG.integers(0, 2))
        out = mp_equality([_pure_entry(x, t1)], [_pure_entry(x, t2)], None)
        assert len(out) == 1
        merged = angle_ostar(t1, t2)
        expect = np.outer([math.cos(merged / 2), (-1.0) ** x * math.sin(merged / 2)],
                          [math.cos(merged / 2), (-1.0) ** x * math.sin(merged / 2)])
        assert np.abs(out[0].rho - expect).max() < 1e-12
        assert out[0].c == pytest.approx(math.cos(t1) * math.cos(t2), abs=1e-12)
        assert out[0].p == 1.0


def test_mp_check_pure_inputs():
    from bpqm_lab.mpg import prob_boxstar
    for _ in range(50):
        t1, t2 = RNG.uniform(0.1, math.pi - 0.1, 2)
        x1, x2 = (int(v) for v in RNG.integers(0, 2, 2))
        out = mp_check([_pure_entry(x1, t1)], [_pure_entry(x2, t2)], None)
        assert len(out) == 2
        for e, l in zip(out, (0, 1)):
            assert e.s[0] == l
            assert e.p == pytest.approx(prob_boxstar(t1, t2, l), abs=1e-12)
        assert sum(e.p for e in out) == pytest.approx(1.0, abs=1e-12)


def test_mp_check_equal_inputs_l1_branch():
    g = QuantGrid(6)
    out = mp_check([_pure_entry(0, 0.7)], [_pure_entry(0, 0.7)], g)
    l1 = [e for e in out if e.s[0] == 1][0]
    assert l1.c == pytest.approx(quantize(0.0, g), abs=1e-15)


def test_message_invariants_through_pipeline():
    code = builtin_code("code5")
    thetas = RNG.uniform(0.2, math.pi - 0.2, 5)
    x = code.encode(RNG.integers(0, 2, 3))
    for B in (3, 8, None):
        msg = run_message_passing(build_mpg(code, 1), thetas, x, B)
        assert len(msg) == 4
        assert sum(e.p for e in msg) == pytest.approx(1.0, abs=1e-9)
        for e in msg:
            assert np.trace(e.rho) == pytest.approx(1.0, abs=1e-9)
            assert np.linalg.eigvalsh(e.rho).min() > -1e-10


def test_message_invariants_code17():
    code = builtin_code("code17")
    thetas = np.full(17, 0.2 * math.pi)
    x = code.encode(RNG.integers(0, 2, 11))
    msg = run_message_passing(build_mpg(code, 1), thetas, x, 6)
    assert len(msg) == 2 ** 10
    assert sum(e.p for e in msg) == pytest.approx(1.0, abs=1e-9)
    worst_eig = min(float(np.linalg.eigvalsh(e.rho).min()) for e in msg)
    worst_tr = max(abs(float(np.trace(e.rho)) - 1.0) for e in msg)
    assert worst_eig > -1e-10 and worst_tr < 1e-9


def test_no_quantization_reproduces_exact_decoder():
    for name in ("code5", "code17"):
        code = builtin_code(name)
        thetas = np.full(code.n, 0.2 * math.pi)
        x = np.zeros(code.n, dtype=np.uint8)
        exact = qsim.bpqm_bit_success(code, thetas, 1)
        assert mp_bit_success(code, thetas, x, 1, None) == pytest.approx(exact, abs=1e-8)


def test_no_quantization_matches_branch_weights():
    code = builtin_code("code5")
    thetas = RNG.uniform(0.3, math.pi - 0.3, 5)
    x = code.encode([1, 1, 0])
    msg = run_message_passing(build_mpg(code, 1), thetas, x, None)
    comp = compile_lists(build_mpg(code, 1), thetas)
    probs = {e.s: e.prob for e in comp.root_branches}
    angles = {e.s: e.angle for e in comp.root_branches}
    for e in msg:
        assert e.p == pytest.approx(probs[e.s], abs=1e-10)
        assert e.c == pytest.approx(math.cos(angles[e.s]), abs=1e-10)


def test_large_B_saturates():
    code = builtin_code("code5")
    thetas = np.full(5, 0.2 * math.pi)
    x = np.zeros(5, dtype=np.uint8)
    exact = qsim.bpqm_bit_success(code, thetas, 1)
    assert mp_bit_success(code, thetas, x, 1, 40) == pytest.approx(exact, abs=1e-8)


def test_single_channel_unaffected_by_B():
    code = from_parity_check(np.zeros((0, 1), dtype=np.uint8))
    theta = 0.23 * math.pi
    expect = (1 + math.sin(theta)) / 2
    for B in (1, 4, 12):
        got = mp_bit_success(code, [theta], [0], 1, B)
        assert got == pytest.approx(expect, abs=1e-12)


def test_averaged_cosine_error_bound():
    # probability-weighted register error stays below (2^(n+1) - 3) * delta
    code = builtin_code("code5")
    thetas = np.full(5, 0.2 * math.pi)
    x = np.zeros(5, dtype=np.uint8)
    comp = compile_lists(build_mpg(code, 1), thetas)
    exact = {e.s: (e.prob, math.cos(e.angle)) for e in comp.root_branches}
    for B in (2, 4, 6, 8):
        msg = run_message_passing(build_mpg(code, 1), thetas, x, B)
        total = sum(exact[e.s][0] * abs(exact[e.s][1] - e.c) for e in msg)
        assert total <= (2 ** 6 - 3) * QuantGrid(B).delta


def test_suboptimality_decreases_code17():
    code = builtin_code("code17")
    thetas = np.full(17, 0.2 * math.pi)
    x = np.zeros(17, dtype=np.uint8)
    from bpqm_lab.oracles import helstrom_bit_success
    ideal = helstrom_bit_success(code, thetas, 1)
    eps = {B: ideal - mp_bit_success(code, thetas, x, 1, B) for B in (4, 8, 12)}
    assert eps[4] > eps[8] > eps[12] > 0 or eps[12] < 1e-6


def test_block_loss_bound():
    vals = [block_loss_bound(5, B) for B in range(1, 60, 4)]
    assert all(a > b for a, b in zip(vals, vals[1:]))
    assert block_loss_bound(5, 200) < 1e-3
    with pytest.raises(ValueError):
        block_loss_bound(0, 4)
