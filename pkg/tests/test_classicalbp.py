import itertools
import math

import numpy as np
import pytest

from bpqm_lab.classicalbp import (
    LlrMessage,
    bp_check,
    bp_decode_bit,
    bp_equality,
    brute_force_bit_map,
)
from bpqm_lab.codes import builtin_code

RNG = np.random.default_rng(17)


def test_equality_rule():
    out = bp_equality(LlrMessage(0, 2.0), LlrMessage(1, 2.0))
    assert out == LlrMessage(0, 0.0)  # cancellation, tie convention b=0
    out = bp_equality(LlrMessage(0, 2.0), LlrMessage(0, 3.0))
    assert out == LlrMessage(0, 5.0)
    for _ in range(10 ** 4):
        b1, b2 = RNG.integers(0, 2, 2)
        c1, c2 = RNG.uniform(0, 20, 2)
        out = bp_equality(LlrMessage(b1, c1), LlrMessage(b2, c2))
        l = (-1.0) ** b1 * c1 + (-1.0) ** b2 * c2
        assert out.llr == pytest.approx(l, abs=1e-12)


def test_check_rule():
    assert bp_check(LlrMessage(0, 3.0), LlrMessage(1, 0.0)).c == 0.0
    for _ in range(10 ** 4):
        b1, b2 = (int(v) for v in RNG.integers(0, 2, 2))
        c1, c2 = RNG.uniform(0.01, 15, 2)
        out = bp_check(LlrMessage(b1, c1), LlrMessage(b2, c2))
        assert out.b == b1 ^ b2
        l1, l2 = (-1.0) ** b1 * c1, (-1.0) ** b2 * c2
        expect = 2 * math.atanh(math.tanh(l1 / 2) * math.tanh(l2 / 2))
        assert out.llr == pytest.approx(expect, abs=1e-12)


def test_check_rule_saturation_safe():
    out = bp_check(LlrMessage(0, 1e6), LlrMessage(0, 50.0))
    assert math.isfinite(out.c)
    assert out.c <= 50.0 + 1e-9


def test_all_zero_output_decodes_zero():
    code = builtin_code("code5")
    for p in (0.05, 0.2, 0.45):
        for r in range(1, 6):
            assert bp_decode_bit(code, p, [0, 0, 0, 0, 0], r) == 0


def test_bp_equals_bitmap_exhaustive():
    code = builtin_code("code5")
    for p in np.arange(0.05, 0.46, 0.05):
        for y in itertools.product((0, 1), repeat=5):
            for r in range(1, 6):
                assert bp_decode_bit(code, float(p), y, r) == \
                    brute_force_bit_map(code, float(p), y, r)


def test_threshold_example_output_00011():
    code = builtin_code("code5")
    y = [0, 0, 0, 1, 1]
    assert bp_decode_bit(code, 0.20, y, 1) == 1
    assert bp_decode_bit(code, 0.25, y, 1) == 0


def test_crossover_domain():
    code = builtin_code("code5")
    with pytest.raises(ValueError):
        bp_decode_bit(code, 0.6, [0] * 5, 1)
