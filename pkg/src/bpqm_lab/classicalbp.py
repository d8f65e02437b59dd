"""Classical belief propagation on the MPG in (estimate, reliability) form.

Messages are split as l = (-1)^b * c with b the running bit estimate and
c = |l| >= 0 the reliability, mirroring how the quantum decoder carries a data
qubit and an angle register. On tree codes the root decision is the exact
bit-MAP decision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .codes import BinaryLinearCode
from .mpg import CHECK, MpgNode, build_mpg

RELIABILITY_CAP = 700.0


@dataclass(frozen=True)
class LlrMessage:
    b: int
    c: float

    @property
    def llr(self) -> float:
        return (-1.0) ** self.b * self.c

    @classmethod
    def from_llr(cls, l: float) -> "LlrMessage":
        # l = 0 maps to b = 0 by convention
        return cls(0 if l >= 0 else 1, abs(l))


def bp_equality(m1: LlrMessage, m2: LlrMessage) -> LlrMessage:
    return LlrMessage.from_llr(m1.llr + m2.llr)


def bp_check(m1: LlrMessage, m2: LlrMessage) -> LlrMessage:
    c1 = min(m1.c, RELIABILITY_CAP)
    c2 = min(m2.c, RELIABILITY_CAP)
    prod = math.tanh(c1 / 2.0) * math.tanh(c2 / 2.0)
    if prod >= 1.0:
        c = min(c1, c2)  # atanh saturates; exact limit of the rule
    else:
        c = 2.0 * math.atanh(prod)
    return LlrMessage(m1.b ^ m2.b, c)


def bp_decode_bit(code: BinaryLinearCode, p: float, y, r: int) -> int:
    """Hard decision for X_r from BP on the MPG over BSC(p) outputs y."""
    if not (0.0 < p < 0.5):
        raise ValueError("crossover probability must lie in (0, 1/2)")
    y = np.asarray(y, dtype=np.uint8)
    root = build_mpg(code, r)
    c0 = math.log((1.0 - p) / p)

    def visit(node: MpgNode) -> LlrMessage:
        if node.is_leaf:
            return LlrMessage(int(y[node.var - 1]), c0)
        m1, m2 = visit(node.first), visit(node.second)
        return bp_check(m1, m2) if node.kind == CHECK else bp_equality(m1, m2)

    msg = visit(root)
    return 0 if msg.llr >= 0 else 1


def brute_force_bit_map(code: BinaryLinearCode, p: float, y, r: int) -> int:
    """Exhaustive posterior bit-MAP decision (tie -> 0), used as the oracle."""
    y = np.asarray(y, dtype=np.uint8)
    cw = code.codewords()
    d = (cw ^ y[None, :]).sum(axis=1)
    lik = (p ** d) * ((1.0 - p) ** (code.n - d))
    m0 = lik[cw[:, r - 1] == 0].sum()
    m1 = lik[cw[:, r - 1] == 1].sum()
    return 0 if m0 >= m1 else 1
