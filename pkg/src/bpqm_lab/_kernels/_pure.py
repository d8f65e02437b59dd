"""Numpy fallback implementations of the statevector kernels.

All functions mutate ``amp`` (length 2**n, complex128) in place. Qubit 0 is
the least significant bit of the amplitude index.
"""

import numpy as np

_INV_SQRT2 = 1.0 / np.sqrt(2.0)


def apply_h(amp, n, q):
    v = amp.reshape([2] * n)
    ax = n - 1 - q
    lo = [slice(None)] * n
    hi = [slice(None)] * n
    lo[ax], hi[ax] = 0, 1
    lo, hi = tuple(lo), tuple(hi)
    a0 = v[lo].copy()
    a1 = v[hi]
    v[lo] = (a0 + a1) * _INV_SQRT2
    v[hi] = (a0 - a1) * _INV_SQRT2


def apply_cnot(amp, n, ctrl, tgt):
    v = amp.reshape([2] * n)
    i10 = [slice(None)] * n
    i10[n - 1 - ctrl] = 1
    i11 = list(i10)
    i10[n - 1 - tgt] = 0
    i11[n - 1 - tgt] = 1
    i10, i11 = tuple(i10), tuple(i11)
    tmp = v[i10].copy()
    v[i10] = v[i11]
    v[i11] = tmp


def apply_uc2(amp, n, d1, d2, controls, table):
    """Uniformly controlled two-qubit gate.

    ``table`` has shape (2**m, 4, 4); pattern bit i is the value of
    controls[i]; within each 4x4 block the first data qubit is the more
    significant bit.
    """
    m = len(controls)
    v = amp.reshape([2] * n)
    front = [n - 1 - d1, n - 1 - d2] + [n - 1 - c for c in reversed(controls)]
    rest = [a for a in range(n) if a not in front]
    perm = front + rest
    w = np.ascontiguousarray(v.transpose(perm)).reshape(4, 2 ** m, -1)
    w = np.einsum("pij,jpr->ipr", table, w)
    inv = np.argsort(perm)
    amp[...] = w.reshape([2] * n).transpose(inv).reshape(-1)
