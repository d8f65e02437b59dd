"""Both kernel backends must agree gate-for-gate on random states."""

import numpy as np
import pytest

from bpqm_lab import _kernels
from bpqm_lab._kernels import _pure

RNG = np.random.default_rng(11)


def _random_state(n):
    v = RNG.normal(size=2 ** n) + 1j * RNG.normal(size=2 ** n)
    return (v / np.linalg.norm(v)).astype(np.complex128)


def _random_unitary_table(patterns):
    tabs = []
    for _ in range(patterns):
        a = RNG.normal(size=(4, 4)) + 1j * RNG.normal(size=(4, 4))
        q, _ = np.linalg.qr(a)
        tabs.append(q)
    return np.ascontiguousarray(np.stack(tabs))


compiled_missing = _kernels.BACKEND != "cython"


def test_pure_h_involution():
    amp = _random_state(5)
    ref = amp.copy()
    _pure.apply_h(amp, 5, 2)
    _pure.apply_h(amp, 5, 2)
    assert np.allclose(amp, ref, atol=1e-14)


def test_pure_cnot_basis_action():
    amp = np.zeros(4, dtype=np.complex128)
    amp[0b01] = 1.0  # qubit0=1, qubit1=0
    _pure.apply_cnot(amp, 2, 0, 1)
    assert amp[0b11] == 1.0


def test_pure_uc2_selects_pattern():
    # 4 qubits: data (0,1), controls (2,3); table applies X(x)X only on pattern (1,0)
    n = 4
    amp = np.zeros(2 ** n, dtype=np.complex128)
    amp[0b0100] = 1.0  # qubit2=1 -> pattern bit0=1, bit1=0 -> p=1
    table = np.stack([np.eye(4, dtype=np.complex128)] * 4)
    flip = np.zeros((4, 4), dtype=np.complex128)
    flip[0, 3] = flip[3, 0] = flip[1, 2] = flip[2, 1] = 1.0
    table[1] = flip
    _pure.apply_uc2(amp, n, 0, 1, (2, 3), np.ascontiguousarray(table))
    assert amp[0b0111] == 1.0  # both data qubits flipped


@pytest.mark.skipif(compiled_missing, reason="compiled kernels not built")
def test_backends_agree():
    from bpqm_lab._kernels import _core
    for n in (3, 6, 9):
        for _ in range(5):
            amp = _random_state(n)
            a, b = amp.copy(), amp.copy()
            q, c, t = RNG.integers(0, n, 3)
            while t == c:
                t = int(RNG.integers(0, n))
            _pure.apply_h(a, n, int(q))
            _core.apply_h(b, n, int(q))
            assert np.allclose(a, b, atol=1e-13)
            _pure.apply_cnot(a, n, int(c), int(t))
            _core.apply_cnot(b, n, int(c), int(t))
            assert np.allclose(a, b, atol=1e-13)
            qubits = list(RNG.permutation(n))
            d1, d2 = int(qubits[0]), int(qubits[1])
            controls = tuple(int(v) for v in qubits[2:4])
            table = _random_unitary_table(2 ** len(controls))
            _pure.apply_uc2(a, n, d1, d2, controls, table)
            _core.apply_uc2(b, n, d1, d2, controls, table)
            assert np.allclose(a, b, atol=1e-12)


def test_uc2_norm_preserving():
    n = 6
    amp = _random_state(n)
    table = _random_unitary_table(4)
    _kernels.apply_uc2(amp, n, 1, 4, (0, 3), table)
    assert np.linalg.norm(amp) == pytest.approx(1.0, abs=1e-12)
