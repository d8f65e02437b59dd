"""Discretized message-passing decoding via the compact (p, rho, c) representation.

Simulating the full register-level circuit would need more than n(B+1) qubits,
so messages are tracked as mixtures: a message is a list of
(probability, 2x2 density matrix, quantized cosine) tuples, one entry per
ancilla pattern of the checks crossed so far. Quantization enters twice: the
running cosine register is snapped to the size-B grid after every node
arithmetic step, and the equality-node gate is rebuilt from rotation angles
snapped to the 2^B-point angle grid. With both switched off the pipeline
reproduces the exact decoder branch for branch.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .codes import BinaryLinearCode
from .mpg import CHECK, MpgNode, build_mpg
from .qsim import u_ostar

HAD = np.array([[1.0, 1.0], [1.0, -1.0]]) / math.sqrt(2.0)
_CNOT = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=float)
_NOTC = np.array([[1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0], [0, 1, 0, 0]], dtype=float)


@dataclass(frozen=True)
class QuantGrid:
    """Cosine grid of 2^B points, spacing delta = 2/(2^B + 1), excluding +-1."""

    B: int

    @property
    def delta(self) -> float:
        return 2.0 / (2 ** self.B + 1)

    @property
    def points(self) -> np.ndarray:
        j = np.arange(2 ** self.B)
        return -1.0 + 2.0 * (1.0 + j) / (2 ** self.B + 1)


def quantize(c: float, grid: QuantGrid) -> float:
    """Snap a cosine to the nearest grid point; exact ties round toward -1."""
    size = 2 ** grid.B
    t = (c + 1.0) / grid.delta - 1.0
    j = int(math.ceil(t - 0.5))
    j = min(max(j, 0), size - 1)
    return -1.0 + grid.delta * (1.0 + j)


def quantize_rotation(phi: float, B: int) -> float:
    """Snap a rotation angle in [0, 2*pi] to the grid 2*pi*k/(2^B - 1)."""
    steps = 2 ** B - 1
    k = math.floor(phi * steps / (2.0 * math.pi) + 0.5)
    k = min(max(k, 0), steps)
    return 2.0 * math.pi * k / steps


def rotation_angles(c1: float, c2: float) -> tuple[float, float]:
    """Rotation angles of the equality-node gate decomposition, in [0, 2*pi]."""
    t1, t2 = math.acos(c1), math.acos(c2)
    ap = (math.cos((t1 - t2) / 2) + math.cos((t1 + t2) / 2)) / math.sqrt(2.0 * (1.0 + c1 * c2))
    bp = (math.sin((t1 + t2) / 2) + math.sin((t1 - t2) / 2)) / math.sqrt(2.0 * (1.0 - c1 * c2))
    ap = min(max(ap, -1.0), 1.0)
    bp = min(max(bp, -1.0), 1.0)
    alpha = (-math.acos(ap) - math.acos(bp)) % (2.0 * math.pi)
    beta = (-math.acos(ap) + math.acos(bp)) % (2.0 * math.pi)
    return alpha, beta


def _ry(phi: float) -> np.ndarray:
    c, s = math.cos(phi / 2), math.sin(phi / 2)
    return np.array([[c, -s], [s, c]])


def equality_gate_from_rotations(alpha: float, beta: float) -> np.ndarray:
    """Rebuild the two-qubit equality gate from its CNOT + R_y decomposition.

    Equals the explicit matrix up to a global sign (the price of folding the
    rotation angles into [0, 2*pi]); the sign cancels in every rho -> U rho U^T
    use below.
    """
    i2 = np.eye(2)
    return _CNOT @ np.kron(i2, _ry(beta)) @ _CNOT @ np.kron(i2, _ry(alpha)) @ _NOTC


@dataclass
class CompactEntry:
    p: float
    rho: np.ndarray          # real 2x2, trace 1
    c: float                 # cosine register value
    s: tuple[int, ...] = ()  # ancilla pattern, kept for cross-checking


CompactMessage = list  # list[CompactEntry]


def _maybe_quant(c: float, grid: QuantGrid | None) -> float:
    return quantize(c, grid) if grid is not None else c


def mp_equality(msg1: CompactMessage, msg2: CompactMessage, grid: QuantGrid | None) -> CompactMessage:
    out = []
    for e1 in msg1:
        for e2 in msg2:
            if grid is None:
                gate = np.real(u_ostar(math.acos(e1.c), math.acos(e2.c)))
            else:
                a, b = rotation_angles(e1.c, e2.c)
                gate = equality_gate_from_rotations(
                    quantize_rotation(a, grid.B), quantize_rotation(b, grid.B))
            joint = gate @ np.kron(e1.rho, e2.rho) @ gate.T
            rho = joint.reshape(2, 2, 2, 2).trace(axis1=1, axis2=3)  # trace out ancilla qubit
            out.append(CompactEntry(
                e1.p * e2.p, rho, _maybe_quant(e1.c * e2.c, grid), e1.s + e2.s))
    return out


def mp_check(msg1: CompactMessage, msg2: CompactMessage, grid: QuantGrid | None) -> CompactMessage:
    out = []
    for l in (0, 1):
        for e1 in msg1:
            for e2 in msg2:
                joint = _CNOT @ np.kron(e1.rho, e2.rho) @ _CNOT
                block = joint[np.ix_([l, 2 + l], [l, 2 + l])]
                tr = float(np.trace(block))
                if tr < 1e-15:
                    rho = np.eye(2) / 2.0
                    tr = max(tr, 0.0)
                else:
                    rho = block / tr
                sgn = -1.0 if l else 1.0
                c = (e1.c + sgn * e2.c) / (1.0 + sgn * e1.c * e2.c)
                out.append(CompactEntry(
                    e1.p * e2.p * tr, rho, _maybe_quant(c, grid), (l,) + e1.s + e2.s))
    return out


def run_message_passing(root: MpgNode, thetas, x, B: int | None) -> CompactMessage:
    """Leaf-to-root pass conditioned on codeword x; returns the root message."""
    thetas = np.asarray(thetas, dtype=float)
    x = np.asarray(x, dtype=np.uint8)
    grid = QuantGrid(B) if B is not None else None

    def leaf_message(var: int) -> CompactMessage:
        th = float(thetas[var - 1])
        v = np.array([math.cos(th / 2), (-1.0) ** int(x[var - 1]) * math.sin(th / 2)])
        return [CompactEntry(1.0, np.outer(v, v), _maybe_quant(math.cos(th), grid), ())]

    def visit(node: MpgNode) -> CompactMessage:
        if node.is_leaf:
            return leaf_message(node.var)
        m1, m2 = visit(node.first), visit(node.second)
        if node.kind == CHECK:
            return mp_check(m1, m2, grid)
        return mp_equality(m1, m2, grid)

    return visit(root)


def success_from_message(msg: CompactMessage, bit: int) -> float:
    """Pr[the |+>/|-> readout reproduces ``bit``], summed over branches."""
    proj = HAD @ np.diag(np.eye(2)[bit]) @ HAD
    return float(sum(e.p * np.trace(proj @ e.rho) for e in msg))


def mp_bit_success(code: BinaryLinearCode, thetas, x, r: int, B: int | None) -> float:
    """Discretized decoding success for X_r on input codeword x.

    ``B`` is the angle-register width; ``None`` disables quantization and
    reproduces the exact decoder.
    """
    root = build_mpg(code, r)
    msg = run_message_passing(root, thetas, x, B)
    x = np.asarray(x, dtype=np.uint8)
    return success_from_message(msg, int(x[r - 1]))


def block_loss_bound(n: int, B: int) -> float:
    """Closed-form bound on the block-success loss of the discretized decoder."""
    if n < 1 or B < 1:
        raise ValueError("n and B must be positive")
    prefactor = 2.0 ** 2.25 * math.sqrt(math.pi) / math.sqrt(3.0)
    return prefactor * n * 2.0 ** (n * (1.5 + 0.5 * math.log2(26.0)) - B / 4.0)
