"""Exact statevector simulation of the quantum decoder.

Channel outputs are real two-level states cos(theta/2)|0> + (-1)^x sin(theta/2)|1>.
The per-bit decoding unitary V_r is compiled from the MPG: every check node is
a CNOT whose target drops out as a classical ancilla, every equality node is a
two-qubit node unitary uniformly controlled on the ancillas accumulated in its
subtree. Decoding measures the root data qubit in the |+>/|-> basis.

Amplitudes are little-endian: qubit i is bit i of the index, and qubit i
carries channel output i+1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .codes import BinaryLinearCode, gf2_rank
from .mpg import (
    CHECK,
    CompiledMpg,
    MpgNode,
    angle_ostar,
    bit_success_from_branches,
    build_mpg,
    compile_lists,
)

MAX_QUBITS = 22


@dataclass
class PureState:
    m: int
    amp: np.ndarray
    nominal_norm2: float = 1.0

    def copy(self) -> "PureState":
        return PureState(self.m, self.amp.copy(), self.nominal_norm2)

    def norm2(self) -> float:
        return float(np.real(np.vdot(self.amp, self.amp)))

    def check_norm(self, tol: float = 1e-9) -> None:
        if abs(self.norm2() - self.nominal_norm2) > tol:
            raise ValueError(
                f"state norm^2 {self.norm2():.12f} drifted from nominal {self.nominal_norm2:.12f}")


def ket(x: int, theta: float) -> np.ndarray:
    return np.array([math.cos(theta / 2), (-1.0) ** x * math.sin(theta / 2)],
                    dtype=np.complex128)


def channel_state(x, thetas) -> PureState:
    """Tensor product of channel outputs for codeword x."""
    x = np.asarray(x, dtype=np.uint8)
    thetas = np.asarray(thetas, dtype=float)
    n = len(thetas)
    if len(x) != n:
        raise ValueError("codeword and angle vector lengths differ")
    if n > MAX_QUBITS:
        raise ValueError(f"n={n} exceeds the {MAX_QUBITS}-qubit statevector guard")
    amp = np.ones(1, dtype=np.complex128)
    for i in range(n):
        amp = np.kron(ket(int(x[i]), float(thetas[i])), amp)
    return PureState(n, amp)


def u_ostar(alpha: float, beta: float) -> np.ndarray:
    """Explicit 4x4 equality-node unitary for data angles (alpha, beta)."""
    merged = angle_ostar(alpha, beta)
    co = abs(math.cos(merged / 2))
    si = abs(math.sin(merged / 2))
    ap = 0.5 * (math.cos((alpha - beta) / 2) + math.cos((alpha + beta) / 2)) / co
    am = 0.5 * (math.cos((alpha - beta) / 2) - math.cos((alpha + beta) / 2)) / co
    bp = 0.5 * (math.sin((alpha + beta) / 2) + math.sin((alpha - beta) / 2)) / si
    bm = 0.5 * (math.sin((alpha + beta) / 2) - math.sin((alpha - beta) / 2)) / si
    return np.array([
        [ap, 0.0, 0.0, am],
        [-am, 0.0, 0.0, ap],
        [0.0, bm, bp, 0.0],
        [0.0, bp, -bm, 0.0],
    ], dtype=np.complex128)


@dataclass(eq=False)
class Cnot:
    ctrl: int
    tgt: int


@dataclass(eq=False)
class Ucu:
    """4x4 block gate on (d1, d2), uniformly controlled on ``controls``.

    ``table[p]`` is the block for ancilla pattern p, where bit i of p is the
    value of controls[i]; d1 is the more significant bit inside the block.
    """
    d1: int
    d2: int
    controls: tuple[int, ...]
    table: np.ndarray


@dataclass(eq=False)
class Had:
    q: int


@dataclass(eq=False)
class Circuit:
    n: int
    gates: list = field(default_factory=list)

    def remap(self, perm: dict[int, int], n_new: int) -> "Circuit":
        """Translate qubit indices; used to place a compiled decoder onto a
        wider physical register."""
        out = Circuit(n_new)
        for g in self.gates:
            if isinstance(g, Cnot):
                out.gates.append(Cnot(perm[g.ctrl], perm[g.tgt]))
            elif isinstance(g, Ucu):
                out.gates.append(Ucu(perm[g.d1], perm[g.d2],
                                     tuple(perm[c] for c in g.controls), g.table))
            else:
                out.gates.append(Had(perm[g.q]))
        return out


@dataclass
class QubitRoles:
    n: int
    data: int
    ancilla: list[tuple[int, int]]  # (check node id, qubit) in root check-list order
    zero: list[int]                 # equality-node leftovers, creation order

    def remap(self, perm: dict[int, int], n_new: int) -> "QubitRoles":
        return QubitRoles(n_new, perm[self.data],
                          [(cid, perm[q]) for cid, q in self.ancilla],
                          [perm[q] for q in self.zero])


def build_Vr(compiled: CompiledMpg) -> tuple[Circuit, QubitRoles]:
    """Lower a compiled MPG to the decoding circuit for its root bit."""
    circuit = Circuit(compiled.n)
    zeros: list[int] = []

    def visit(node: MpgNode) -> tuple[int, list[tuple[int, int]]]:
        if node.is_leaf:
            return node.var - 1, []
        d1, anc1 = visit(node.first)
        d2, anc2 = visit(node.second)
        if node.kind == CHECK:
            circuit.gates.append(Cnot(d1, d2))
            return d1, [(node.id, d2)] + anc1 + anc2
        ancillas = anc1 + anc2
        angles1 = {e.s: e.angle for e in compiled.branch_lists[node.first]}
        angles2 = {e.s: e.angle for e in compiled.branch_lists[node.second]}
        m1, m2 = len(compiled.check_lists[node.first]), len(compiled.check_lists[node.second])
        table = np.empty((2 ** (m1 + m2), 4, 4), dtype=np.complex128)
        for s1, a1 in angles1.items():
            for s2, a2 in angles2.items():
                bits = s1 + s2
                p = sum(b << i for i, b in enumerate(bits))
                table[p] = u_ostar(a1, a2)
        circuit.gates.append(Ucu(d1, d2, tuple(q for _, q in ancillas), table))
        zeros.append(d2)
        return d1, ancillas

    data, ancillas = visit(compiled.root)
    roles = QubitRoles(compiled.n, data, ancillas, zeros)
    return circuit, roles


def _apply_gate(gate, amp: np.ndarray, n: int, inverse: bool) -> None:
    if isinstance(gate, Cnot):
        _kernels.apply_cnot(amp, n, gate.ctrl, gate.tgt)
    elif isinstance(gate, Had):
        _kernels.apply_h(amp, n, gate.q)
    else:
        table = gate.table.conj().transpose(0, 2, 1).copy() if inverse else gate.table
        _kernels.apply_uc2(amp, n, gate.d1, gate.d2, gate.controls, table)


def apply(circuit: Circuit, state: PureState) -> PureState:
    if circuit.n != state.m:
        raise ValueError("qubit counts differ")
    out = state.copy()
    for g in circuit.gates:
        _apply_gate(g, out.amp, out.m, inverse=False)
    out.check_norm()
    return out


def apply_inverse(circuit: Circuit, state: PureState) -> PureState:
    if circuit.n != state.m:
        raise ValueError("qubit counts differ")
    out = state.copy()
    for g in reversed(circuit.gates):
        _apply_gate(g, out.amp, out.m, inverse=True)
    out.check_norm()
    return out


def measure_probs(state: PureState, q: int) -> tuple[float, float]:
    v = np.abs(state.amp) ** 2
    mask = (np.arange(v.size) >> q) & 1
    p1 = float(v[mask == 1].sum())
    return float(v[mask == 0].sum()), p1


def project(state: PureState, q: int, outcome: int) -> PureState:
    """Unnormalized projection of qubit q onto |outcome>."""
    out = state.copy()
    mask = ((np.arange(out.amp.size) >> q) & 1) != outcome
    out.amp[mask] = 0.0
    out.nominal_norm2 = out.norm2()
    return out


def project_plus_minus(state: PureState, q: int, outcome: int) -> PureState:
    """Projection of qubit q onto H|outcome>, i.e. |+> (outcome 0) or |->."""
    out = state.copy()
    _kernels.apply_h(out.amp, out.m, q)
    out = project(out, q, outcome)
    _kernels.apply_h(out.amp, out.m, q)
    out.nominal_norm2 = out.norm2()
    return out


@dataclass
class Branch:
    pattern: tuple[int, ...]
    weight: float
    conditional: np.ndarray  # over (D, Z...) with D as the least significant bit
    z_zero: bool


def branch_decomposition(state: PureState, roles: QubitRoles, z_tol: float = 1e-9) -> list[Branch]:
    """Split a post-V_r state over the check-ancilla patterns.

    Returns one entry per pattern (in root check-list bit order): its weight,
    the normalized conditional state on (data, zero) qubits, and whether the
    zero qubits actually hold |0...0>.
    """
    n = state.m
    anc_qubits = [q for _, q in roles.ancilla]
    keep = [roles.data] + roles.zero
    v = state.amp.reshape([2] * n)
    # move ancilla axes to the front (pattern bit 0 first), keep axes after
    front = [n - 1 - q for q in anc_qubits]
    rest = [n - 1 - q for q in keep]
    order = front + [a for a in range(n) if a not in front]
    w = v.transpose(order)
    out = []
    for p in np.ndindex(*([2] * len(anc_qubits))):
        block = w[p]
        # block axes follow original axis order minus ancillas; pick (D, Z)
        sub_axes = [a for a in range(n) if a not in front]
        perm = [sub_axes.index(ax) for ax in rest]
        other = [i for i in range(len(sub_axes)) if i not in perm]
        cond = np.ascontiguousarray(block.transpose(perm + other)).reshape(-1)
        weight = float(np.real(np.vdot(cond, cond)))
        if weight > 0:
            condn = cond / math.sqrt(weight)
        else:
            condn = cond
        # conditional uses keep[0]=D as the most significant transposed axis;
        # flip to little-endian over the kept qubits
        condn = condn.reshape([2] * len(keep)).transpose(range(len(keep) - 1, -1, -1)).reshape(-1)
        probs = np.abs(condn) ** 2
        # D is bit 0 of the kept register; any mass at nonzero Z bits is leakage
        z_mass = float(probs[(np.arange(probs.size) >> 1) != 0].sum())
        out.append(Branch(tuple(p), weight, condn, z_mass < z_tol))
    return out


def _compiled_for(code: BinaryLinearCode, thetas, r: int) -> CompiledMpg:
    return compile_lists(build_mpg(code, r), thetas)


def bpqm_bit_success(code: BinaryLinearCode, thetas, r: int) -> float:
    """Success probability of decoding X_r, uniform over codewords.

    Exact value from the root branch list: the decoder leaves the data qubit
    as a classical mixture of channel outputs at the branch angles, and the
    |+>/|-> measurement succeeds on each with probability (1+sin angle)/2.
    """
    return bit_success_from_branches(_compiled_for(code, thetas, r).root_branches)


def bit_success_given_codeword(code: BinaryLinearCode, thetas, r: int, x) -> float:
    """Statevector route: Pr[measurement reproduces x_r] for one codeword."""
    compiled = _compiled_for(code, thetas, r)
    circuit, roles = build_Vr(compiled)
    psi = apply(circuit, channel_state(x, thetas))
    _kernels.apply_h(psi.amp, psi.m, roles.data)
    p0, p1 = measure_probs(psi, roles.data)
    return p1 if int(np.asarray(x)[r - 1]) else p0


def bpqm_block_success(code: BinaryLinearCode, thetas, x=None, order=None) -> float:
    """Probability that sequential decoding recovers every bit of x.

    Projection chaining: for each decoded position apply V_r, project the
    root qubit onto H|x_r>, undo V_r, and keep the unnormalized state; the
    final squared norm is the exact block success probability.
    """
    thetas = np.asarray(thetas, dtype=float)
    if x is None:
        x = np.zeros(code.n, dtype=np.uint8)
    x = np.asarray(x, dtype=np.uint8)
    if order is None:
        order = list(code.info_set)
    cols = [r - 1 for r in order]
    if len(order) != code.k or gf2_rank(code.G[:, cols]) != code.k:
        raise ValueError(f"decode order {order} is not an independent position set")
    state = channel_state(x, thetas)
    for r in order:
        compiled = _compiled_for(code, thetas, r)
        circuit, roles = build_Vr(compiled)
        state = apply(circuit, state)
        state = project_plus_minus(state, roles.data, int(x[r - 1]))
        state = apply_inverse(circuit, state)
    return state.norm2()
