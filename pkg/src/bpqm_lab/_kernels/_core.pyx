# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled statevector kernels: the hot loops of the exact simulator.

Same contract as the numpy fallback: in-place on a 2**n complex128 vector,
qubit 0 = least significant index bit.
"""

from libc.stdlib cimport free, malloc

import numpy as np

cimport numpy as cnp

ctypedef double complex cplx

cdef double INV_SQRT2 = 0.7071067811865475244


def apply_h(cplx[::1] amp, int n, int q):
    cdef Py_ssize_t size = 1
    size <<= n
    cdef Py_ssize_t bit = (<Py_ssize_t>1) << q
    cdef Py_ssize_t i
    cdef cplx a0, a1
    for i in range(size):
        if i & bit:
            continue
        a0 = amp[i]
        a1 = amp[i | bit]
        amp[i] = (a0 + a1) * INV_SQRT2
        amp[i | bit] = (a0 - a1) * INV_SQRT2


def apply_cnot(cplx[::1] amp, int n, int ctrl, int tgt):
    cdef Py_ssize_t size = 1
    size <<= n
    cdef Py_ssize_t cbit = (<Py_ssize_t>1) << ctrl
    cdef Py_ssize_t tbit = (<Py_ssize_t>1) << tgt
    cdef Py_ssize_t i
    cdef cplx tmp
    for i in range(size):
        if (i & cbit) and not (i & tbit):
            tmp = amp[i]
            amp[i] = amp[i | tbit]
            amp[i | tbit] = tmp


def apply_uc2(cplx[::1] amp, int n, int d1, int d2, controls, cplx[:, :, ::1] table):
    cdef Py_ssize_t size = 1
    size <<= n
    cdef Py_ssize_t b1 = (<Py_ssize_t>1) << d1
    cdef Py_ssize_t b2 = (<Py_ssize_t>1) << d2
    cdef int m = len(controls)
    cdef Py_ssize_t* cbits = <Py_ssize_t*>malloc(m * sizeof(Py_ssize_t)) if m else NULL
    cdef int j
    for j in range(m):
        cbits[j] = (<Py_ssize_t>1) << <int>controls[j]
    cdef Py_ssize_t i, p
    cdef cplx a0, a1, a2, a3
    try:
        for i in range(size):
            if (i & b1) or (i & b2):
                continue
            p = 0
            for j in range(m):
                if i & cbits[j]:
                    p |= (<Py_ssize_t>1) << j
            a0 = amp[i]
            a1 = amp[i | b2]
            a2 = amp[i | b1]
            a3 = amp[i | b1 | b2]
            amp[i]           = table[p, 0, 0] * a0 + table[p, 0, 1] * a1 + table[p, 0, 2] * a2 + table[p, 0, 3] * a3
            amp[i | b2]      = table[p, 1, 0] * a0 + table[p, 1, 1] * a1 + table[p, 1, 2] * a2 + table[p, 1, 3] * a3
            amp[i | b1]      = table[p, 2, 0] * a0 + table[p, 2, 1] * a1 + table[p, 2, 2] * a2 + table[p, 2, 3] * a3
            amp[i | b1 | b2] = table[p, 3, 0] * a0 + table[p, 3, 1] * a1 + table[p, 3, 2] * a2 + table[p, 3, 3] * a3
    finally:
        if cbits != NULL:
            free(cbits)
