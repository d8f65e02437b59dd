"""Decoding codes with cycles: computation-tree unrolling plus approximate cloning.

Unrolling the Tanner graph around the target bit for h rounds yields a tree
code C' whose variables map back to the original ones; variables that appear
several times need approximate clones of their channel output. Cloning is
unitary (adjoint equality-node gates on fresh |0> wires), so a full decode of
one bit can be rewound exactly: clone -> V -> measure -> V^dagger -> unclone.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .codes import BinaryLinearCode, from_parity_check
from .mpg import build_mpg, compile_lists
from .qsim import (
    MAX_QUBITS,
    PureState,
    build_Vr,
    ket,
    measure_probs,
    project_plus_minus,
    u_ostar,
)

MAX_UNROLL_VARS = 20

ENU = "enu"
OPTIMAL = "optimal"


@dataclass
class UnrollMap:
    code: BinaryLinearCode                  # the tree code C'
    r_new: int                              # position of the target bit in C'
    xi: tuple[int, ...]                     # C' position (1-based) -> original variable
    clone_groups: dict[int, list[int]]      # original variable -> its C' positions (>= 2 of them)

    def lam(self, x) -> np.ndarray:
        """Map a codeword of the original code into C'."""
        x = np.asarray(x, dtype=np.uint8)
        return x[[v - 1 for v in self.xi]]


def unroll(code: BinaryLinearCode, r: int, h: int) -> UnrollMap:
    """Breadth-first depth-h computation tree of X_r as a fresh tree code."""
    if h < 1:
        raise ValueError("h must be >= 1")
    tg = code.tanner_graph()
    xi: list[int] = [r]
    checks: list[list[int]] = []
    # frontier entries: (new 1-based index, original variable, check it came from)
    frontier: list[tuple[int, int, int | None]] = [(1, r, None)]
    for _ in range(h):
        nxt: list[tuple[int, int, int | None]] = []
        for new_idx, var, from_check in frontier:
            for cj in tg.var_adj[var - 1]:
                if cj == from_check:
                    continue
                members = [new_idx]
                for w in tg.check_adj[cj]:
                    if w == var:
                        continue
                    xi.append(w)
                    members.append(len(xi))
                    nxt.append((len(xi), w, cj))
                checks.append(members)
        frontier = nxt
    n_new = len(xi)
    if n_new > MAX_UNROLL_VARS:
        raise ValueError(f"unrolled code has {n_new} > {MAX_UNROLL_VARS} variables; lower h")
    h_new = np.zeros((len(checks), n_new), dtype=np.uint8)
    for j, members in enumerate(checks):
        for v in members:
            h_new[j, v - 1] = 1
    code_new = from_parity_check(h_new, name=f"{code.name or 'code'}-r{r}h{h}")
    groups: dict[int, list[int]] = {}
    for pos, var in enumerate(xi, start=1):
        groups.setdefault(var, []).append(pos)
    clone_groups = {v: ps for v, ps in groups.items() if len(ps) >= 2}
    return UnrollMap(code_new, 1, tuple(xi), clone_groups)


@dataclass(frozen=True)
class ClonerSpec:
    """ENU splits at the matched angle; OPTIMAL applies the fixed wrong-angle
    gate (default: the channel angle itself) and lets the decoder assume
    ``theta_prime`` for the clones."""

    kind: str                         # ENU or OPTIMAL
    theta_prime: float | None = None  # decoder angle for clones (OPTIMAL only)
    gate_theta: float | None = None   # gate parameter override (OPTIMAL only)

    def split_angle(self, theta: float) -> float:
        if self.kind != OPTIMAL:
            raise ValueError("ENU split angles are derived per clone group")
        return self.gate_theta if self.gate_theta is not None else theta

    def decoder_angle(self, theta: float, n_copies: int) -> float:
        if self.kind == ENU:
            return math.acos(math.cos(theta) ** (1.0 / n_copies))
        assert self.theta_prime is not None, "optimal cloner needs an assumed angle"
        return self.theta_prime


@dataclass
class CloneStep:
    a: int            # wire carrying the state to split
    b: int            # fresh |0> wire
    gate: np.ndarray  # 4x4 applied as-is when cloning


def enu_clone_steps(theta: float, wires: list[int]) -> list[CloneStep]:
    """Split wires[0] (at angle theta) into len(wires) copies at the ENU angle.

    Step i applies the adjoint equality gate U(theta', rest_i)^dagger, peeling
    one copy at theta' = arccos(cos(theta)^(1/m)) and leaving the remainder on
    the fresh wire; the last remainder is theta' itself.
    """
    m = len(wires)
    thp = math.acos(math.cos(theta) ** (1.0 / m))
    steps = []
    carrier = wires[0]
    for i in range(1, m):
        rest = math.acos(math.cos(theta) ** ((m - i) / m))
        gate = u_ostar(thp, rest).conj().T.copy()
        steps.append(CloneStep(carrier, wires[i], gate))
        carrier = wires[i]
    return steps


def optimal_clone_steps(theta: float, wires: list[int]) -> list[CloneStep]:
    if len(wires) != 2:
        raise ValueError("optimal cloner splits into exactly two copies")
    gate = u_ostar(theta, theta).conj().T.copy()
    return [CloneStep(wires[0], wires[1], gate)]


@dataclass
class _BitDecoder:
    """Everything needed to run one unrolled bit decode on a physical register."""
    clone_steps: list[CloneStep]
    circuit: object
    data_qubit: int
    width: int


def _plan_bit(um: UnrollMap, theta: float, spec: ClonerSpec,
              wire_of_original: dict[int, int], scratch: list[int],
              width: int) -> _BitDecoder:
    """Assign wires, build cloners and the decoder circuit for one target bit."""
    wire_of_pos: dict[int, int] = {}
    scratch_iter = iter(scratch)
    clone_steps: list[CloneStep] = []
    thetas_new = np.full(um.code.n, theta, dtype=float)
    for pos, var in enumerate(um.xi, start=1):
        if var not in um.clone_groups:
            wire_of_pos[pos] = wire_of_original[var]
    for var, positions in sorted(um.clone_groups.items()):
        wires = [wire_of_original[var]] + [next(scratch_iter) for _ in positions[1:]]
        for pos, w in zip(positions, wires):
            wire_of_pos[pos] = w
        m = len(positions)
        if spec.kind == ENU:
            clone_steps += enu_clone_steps(theta, wires)
        else:
            clone_steps += optimal_clone_steps(spec.split_angle(theta), wires)
        for pos in positions:
            thetas_new[pos - 1] = spec.decoder_angle(theta, m)
    compiled = compile_lists(build_mpg(um.code, um.r_new), thetas_new)
    circuit, roles = build_Vr(compiled)
    perm = {pos - 1: wire_of_pos[pos] for pos in range(1, um.code.n + 1)}
    circuit = circuit.remap(perm, width)
    return _BitDecoder(clone_steps, circuit, perm[roles.data], width)


def _apply_clones(state: PureState, steps: list[CloneStep], inverse: bool) -> None:
    seq = reversed(steps) if inverse else steps
    for st in seq:
        gate = st.gate.conj().T.copy() if inverse else st.gate
        _kernels.apply_uc2(state.amp, state.m, st.a, st.b, (), gate[None, :, :])


def _uniform_channel_state(x_bits: dict[int, int], theta: float, width: int) -> PureState:
    amp = np.ones(1, dtype=np.complex128)
    for w in range(width):
        if w in x_bits:
            amp = np.kron(ket(x_bits[w], theta), amp)
        else:
            amp = np.kron(np.array([1.0, 0.0], dtype=np.complex128), amp)
    return PureState(width, amp)


def nontree_bit_success(code: BinaryLinearCode, theta: float, r: int, h: int,
                        cloner: ClonerSpec = ClonerSpec(ENU), x=None) -> float:
    """Success of clone -> tree decode -> measure for bit X_r at uniform theta."""
    from .qsim import _apply_gate

    um = unroll(code, r, h)
    n_scratch = sum(len(ps) - 1 for ps in um.clone_groups.values())
    originals = sorted(set(um.xi))
    wire_of_original = {var: i for i, var in enumerate(originals)}
    scratch = [len(originals) + i for i in range(n_scratch)]
    width = len(originals) + n_scratch
    if width > MAX_QUBITS:
        raise ValueError(f"decode needs {width} qubits > guard {MAX_QUBITS}")
    plan = _plan_bit(um, theta, cloner, wire_of_original, scratch, width)
    if x is None:
        x = np.zeros(code.n, dtype=np.uint8)
    x = np.asarray(x, dtype=np.uint8)
    bits = {wire_of_original[v]: int(x[v - 1]) for v in originals}
    state = _uniform_channel_state(bits, theta, plan.width)
    _apply_clones(state, plan.clone_steps, inverse=False)
    for g in plan.circuit.gates:
        _apply_gate(g, state.amp, state.m, inverse=False)
    _kernels.apply_h(state.amp, state.m, plan.data_qubit)
    p0, p1 = measure_probs(state, plan.data_qubit)
    return p1 if int(x[r - 1]) else p0


def nontree_block_success(code: BinaryLinearCode, theta: float, h: int,
                          cloner: ClonerSpec = ClonerSpec(ENU),
                          order=None, x=None) -> float:
    """Sequential block decode with per-bit unrolling, cloning and full rewind."""
    from .qsim import _apply_gate

    if order is None:
        order = list(code.info_set)
    if x is None:
        x = np.zeros(code.n, dtype=np.uint8)
    x = np.asarray(x, dtype=np.uint8)
    unrolls = {r: unroll(code, r, h) for r in order}
    n_scratch = max(sum(len(ps) - 1 for ps in um.clone_groups.values())
                    for um in unrolls.values())
    width = code.n + n_scratch
    if width > MAX_QUBITS:
        raise ValueError(f"block decode needs {width} qubits > guard {MAX_QUBITS}")
    wire_of_original = {v: v - 1 for v in range(1, code.n + 1)}
    scratch = [code.n + i for i in range(n_scratch)]
    bits = {v - 1: int(x[v - 1]) for v in range(1, code.n + 1)}
    state = _uniform_channel_state(bits, theta, width)
    for r in order:
        um = unrolls[r]
        plan = _plan_bit(um, theta, cloner, wire_of_original, scratch, width)
        _apply_clones(state, plan.clone_steps, inverse=False)
        for g in plan.circuit.gates:
            _apply_gate(g, state.amp, state.m, inverse=False)
        state = project_plus_minus(state, plan.data_qubit, int(x[r - 1]))
        for g in reversed(plan.circuit.gates):
            _apply_gate(g, state.amp, state.m, inverse=True)
        _apply_clones(state, plan.clone_steps, inverse=True)
    return state.norm2()


def optimal_cloner_sweep(code: BinaryLinearCode, r: int, h: int, theta: float,
                         theta_prime_grid) -> list[tuple[float, float]]:
    """Success vs assumed clone angle for the fixed-gate optimal cloner."""
    return [(float(tp), nontree_bit_success(code, theta, r, h,
                                            ClonerSpec(OPTIMAL, float(tp))))
            for tp in theta_prime_grid]


# Cloning-free subtree decoders for the 8-bit benchmark code: spanning tree
# subgraphs of its Tanner graph (variables dropped and checks weakened so the
# result is a tree). Strategies 1 and 2 silently assume X7 = X4, which only
# holds on codewords with X3 = 0.
SUBTREE_STRATEGIES = {
    "strategy1": ([1, 2, 4, 5, 6, 7, 8], [(1, 2, 5), (1, 4, 8), (4, 7), (2, 6)]),
    "strategy2": ([1, 2, 3, 4, 5, 6, 7, 8], [(1, 2, 5), (1, 4, 8), (4, 7), (2, 3, 6)]),
    "strategy3": ([1, 2, 3, 4, 5, 7, 8], [(1, 2, 5), (1, 4, 8), (3, 4, 7)]),
}


def subtree_bit_success(code: BinaryLinearCode, used_vars, checks, theta: float,
                        r: int = 1, x=None, codewords=None) -> float:
    """Success of running the tree decoder of a subgraph code on true outputs.

    ``x`` restricts to one true codeword; otherwise the uniform average over
    ``codewords`` (default: all of them) is returned.
    """
    used = list(used_vars)
    remap = {v: i + 1 for i, v in enumerate(used)}
    h_sub = np.zeros((len(checks), len(used)), dtype=np.uint8)
    for j, members in enumerate(checks):
        for v in members:
            h_sub[j, remap[v] - 1] = 1
    sub = from_parity_check(h_sub, name="subtree")
    thetas = np.full(sub.n, theta, dtype=float)
    compiled = compile_lists(build_mpg(sub, remap[r]), thetas)
    circuit, roles = build_Vr(compiled)

    def one(xv) -> float:
        xv = np.asarray(xv, dtype=np.uint8)
        amp = np.ones(1, dtype=np.complex128)
        for v in used:
            amp = np.kron(ket(int(xv[v - 1]), theta), amp)
        # kron above stacked wires 0..len-1 in `used` order
        st = PureState(sub.n, amp)
        from .qsim import apply
        st = apply(circuit, st)
        _kernels.apply_h(st.amp, st.m, roles.data)
        p0, p1 = measure_probs(st, roles.data)
        return p1 if int(xv[r - 1]) else p0

    if x is not None:
        return one(x)
    cws = code.codewords() if codewords is None else np.asarray(codewords, dtype=np.uint8)
    return float(np.mean([one(xv) for xv in cws]))


def subtree_strategies(code: BinaryLinearCode, theta_grid) -> dict[str, list[float]]:
    """The three cloning-free candidate curves for the 8-bit code."""
    out: dict[str, list[float]] = {}
    for name, (used, checks) in SUBTREE_STRATEGIES.items():
        out[name] = [subtree_bit_success(code, used, checks, float(th)) for th in theta_grid]
    return out
