"""Message-passing graph construction and per-node check/branch list compilation.

The message-passing graph (MPG) for decoding bit X_r is a rooted full binary
tree: channel leaves at the bottom, degree-3 check ('+') and equality ('=')
nodes inside, and an artificial root equality placed on X_r's channel edge.
For a code whose Tanner graph is a tree it is derived mechanically from H;
codes carrying an explicit ``tree_spec`` (the (17,11) benchmark) use that
factorization instead.

Compilation walks the tree leaf-to-root producing, for every node, the list
of check-node ids accumulated so far and a branch list of
(ancilla pattern, angle, probability) triples built from the two angle
convolutions:

    equality:  angle -> arccos(cos a * cos b)         weight unchanged
    check:     angle -> arccos((cos a +/- cos b) / (1 +/- cos a cos b))
               weight *= (1 +/- cos a cos b) / 2      one branch per sign
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .codes import BinaryLinearCode, is_tree

COS_CLAMP = 1.0 - 1e-12

CHANNEL = "channel"
CHECK = "check"
EQUALITY = "equality"
ROOT = "root"


def _clamp_cos(c: float) -> float:
    return max(-COS_CLAMP, min(COS_CLAMP, c))


def angle_ostar(phi1: float, phi2: float) -> float:
    """Equality-node angle convolution."""
    return math.acos(_clamp_cos(math.cos(phi1) * math.cos(phi2)))


def angle_boxstar(phi1: float, phi2: float, l: int) -> float:
    """Check-node angle convolution for branch l in {0, 1}."""
    s = -1.0 if l else 1.0
    c1, c2 = _clamp_cos(math.cos(phi1)), _clamp_cos(math.cos(phi2))
    return math.acos(_clamp_cos((c1 + s * c2) / (1.0 + s * c1 * c2)))


def prob_boxstar(phi1: float, phi2: float, l: int) -> float:
    """Probability of check-node branch l."""
    s = -1.0 if l else 1.0
    return 0.5 * (1.0 + s * math.cos(phi1) * math.cos(phi2))


@dataclass(eq=False)
class MpgNode:
    kind: str                       # channel | check | equality | root
    id: int = 0                     # leaf: variable index; internal: post-order name
    var: int = 0                    # channel nodes only
    first: "MpgNode | None" = None
    second: "MpgNode | None" = None
    min_leaf: int = 0               # smallest channel index in the subtree

    @property
    def is_leaf(self) -> bool:
        return self.kind == CHANNEL

    def walk_postorder(self):
        if self.first is not None:
            yield from self.first.walk_postorder()
        if self.second is not None:
            yield from self.second.walk_postorder()
        yield self


@dataclass(frozen=True)
class BranchEntry:
    s: tuple[int, ...]
    angle: float
    prob: float


@dataclass
class CompiledMpg:
    root: MpgNode
    n: int
    thetas: np.ndarray
    check_lists: dict = field(default_factory=dict)   # MpgNode -> list[int]
    branch_lists: dict = field(default_factory=dict)  # MpgNode -> list[BranchEntry]

    @property
    def root_branches(self) -> list[BranchEntry]:
        return self.branch_lists[self.root]


class _FactorTree:
    """Undirected tree of 'var' leaves and '+'/'=' internal vertices."""

    def __init__(self):
        self.kind: list[str] = []        # "var" | "+" | "="
        self.var: list[int] = []         # variable index for leaves, 0 otherwise
        self.adj: list[list[int]] = []

    def add(self, kind: str, var: int = 0) -> int:
        self.kind.append(kind)
        self.var.append(var)
        self.adj.append([])
        return len(self.kind) - 1

    def connect(self, a: int, b: int) -> None:
        self.adj[a].append(b)
        self.adj[b].append(a)

    def leaf_of_var(self, v: int) -> int:
        for i, (k, w) in enumerate(zip(self.kind, self.var)):
            if k == "var" and w == v:
                return i
        raise ValueError(f"variable {v} not present in factor tree")


def _factor_tree_from_tanner(code: BinaryLinearCode) -> _FactorTree:
    tg = code.tanner_graph()
    if not is_tree(tg):
        raise ValueError(
            f"Tanner graph of {code.name or 'code'} is not a connected tree; "
            "an MPG needs a tree factorization (see the non-tree decoder instead)"
        )
    ft = _FactorTree()
    leaves = [ft.add("var", v) for v in range(1, code.n + 1)]
    # degree-1 variables hook straight into their check; others get an equality
    var_port = []
    for v in range(1, code.n + 1):
        deg = len(tg.var_adj[v - 1])
        if deg == 0:
            raise ValueError(f"variable X{v} appears in no check")
        if deg == 1:
            var_port.append(leaves[v - 1])
        else:
            eq = ft.add("=")
            ft.connect(eq, leaves[v - 1])
            var_port.append(eq)
    for j, members in enumerate(tg.check_adj):
        if len(members) < 2:
            raise ValueError(f"check row {j} has weight {len(members)}; weight-1 rows unsupported")
        if len(members) == 2:
            # degree-2 check forces equality of its two variables: elide it
            a, b = (var_port[v - 1] for v in members)
            ft.connect(a, b)
        else:
            ck = ft.add("+")
            for v in members:
                ft.connect(ck, var_port[v - 1])
    return ft


def _factor_tree_from_spec(spec: tuple) -> tuple[_FactorTree, int]:
    anchor_var, expr = spec
    ft = _FactorTree()

    def build(e) -> int:
        if isinstance(e, int):
            return ft.add("var", e)
        op, left, right = e
        node = ft.add("+" if op == "+" else "=")
        ft.connect(node, build(left))
        ft.connect(node, build(right))
        return node

    top = build(expr)
    anchor_leaf = ft.add("var", anchor_var)
    ft.connect(anchor_leaf, top)
    return ft, anchor_leaf


@dataclass
class _Rooted:
    """Directed view used while lowering the factor tree to a binary MPG."""
    kind: str
    var: int = 0
    children: list = field(default_factory=list)
    min_leaf: int = 0


def _orient(ft: _FactorTree, vertex: int, parent: int) -> _Rooted:
    if ft.kind[vertex] == "var":
        return _Rooted("var", var=ft.var[vertex], min_leaf=ft.var[vertex])
    node = _Rooted("+" if ft.kind[vertex] == "+" else "=")
    for nb in ft.adj[vertex]:
        if nb != parent:
            node.children.append(_orient(ft, nb, vertex))
    node.min_leaf = min(c.min_leaf for c in node.children)
    return node


def _reduce_degree(node: _Rooted) -> _Rooted:
    """Split >2-child nodes into same-kind chains; peel the two largest-leaf
    children into the new node so the smallest leaf stays near the top."""
    if node.kind == "var":
        return node
    node.children = [_reduce_degree(c) for c in node.children]
    node.children.sort(key=lambda c: c.min_leaf)
    while len(node.children) > 2:
        b = node.children.pop()
        a = node.children.pop()
        merged = _Rooted(node.kind, children=[a, b], min_leaf=min(a.min_leaf, b.min_leaf))
        node.children.append(merged)
        node.children.sort(key=lambda c: c.min_leaf)
    if len(node.children) == 1:
        # a degree-2 internal vertex passes its value through untouched
        return node.children[0]
    return node


def _to_mpg(node: _Rooted) -> MpgNode:
    if node.kind == "var":
        return MpgNode(CHANNEL, id=node.var, var=node.var, min_leaf=node.var)
    first, second = (_to_mpg(c) for c in node.children)
    if first.min_leaf < second.min_leaf:
        first, second = second, first
    kind = CHECK if node.kind == "+" else EQUALITY
    return MpgNode(kind, first=first, second=second, min_leaf=min(first.min_leaf, second.min_leaf))


def build_mpg(code: BinaryLinearCode, r: int) -> MpgNode:
    """Rooted MPG of ``code`` for decoding bit X_r.

    The root equality sits on X_r's channel edge; every internal node orders
    its two children deterministically with the subtree holding the larger
    minimal channel index first (the dotted edges of the reference layouts);
    internal nodes are named 1..n-1 in post-order. On codeword inputs the
    ordering is performance-neutral, but it fixes the behaviour of decoders
    that are fed states violating their assumed checks.
    """
    if not (1 <= r <= code.n):
        raise ValueError(f"bit index r={r} out of range 1..{code.n}")
    if code.n == 1:
        # single channel: nothing to combine, decode measures the qubit as-is
        return MpgNode(CHANNEL, id=1, var=1, min_leaf=1)
    if code.tree_spec is not None:
        ft, _ = _factor_tree_from_spec(code.tree_spec)
    else:
        ft = _factor_tree_from_tanner(code)
    leaf = ft.leaf_of_var(r)
    if len(ft.adj[leaf]) != 1:
        raise ValueError(f"channel leaf X{r} must have exactly one edge")
    other = ft.adj[leaf][0]
    side = _reduce_degree(_orient(ft, other, leaf))
    leaf_node = MpgNode(CHANNEL, id=r, var=r, min_leaf=r)
    subtree = _to_mpg(side)
    first, second = leaf_node, subtree
    if first.min_leaf < second.min_leaf:
        first, second = second, first
    root = MpgNode(ROOT, first=first, second=second, min_leaf=min(first.min_leaf, second.min_leaf))

    internal = [nd for nd in root.walk_postorder() if not nd.is_leaf]
    if len(internal) != code.n - 1:
        raise ValueError(
            f"internal node count {len(internal)} != n-1={code.n - 1}; malformed factor tree")
    for i, nd in enumerate(internal, start=1):
        nd.id = i
    n_check = sum(1 for nd in internal if nd.kind == CHECK)
    if n_check != code.k - 1:
        raise ValueError(f"check node count {n_check} != k-1={code.k - 1}")
    return root


def compile_lists(root: MpgNode, thetas) -> CompiledMpg:
    """Per-node check lists and branch lists for the given channel angles."""
    thetas = np.asarray(thetas, dtype=float)
    if np.any(thetas <= 0) or np.any(thetas >= math.pi):
        raise ValueError("channel angles must lie strictly inside (0, pi)")
    compiled = CompiledMpg(root=root, n=len(thetas), thetas=thetas)

    def visit(node: MpgNode) -> None:
        if node.is_leaf:
            compiled.check_lists[node] = []
            compiled.branch_lists[node] = [BranchEntry((), float(thetas[node.var - 1]), 1.0)]
            return
        visit(node.first)
        visit(node.second)
        l1, l2 = compiled.check_lists[node.first], compiled.check_lists[node.second]
        b1, b2 = compiled.branch_lists[node.first], compiled.branch_lists[node.second]
        if node.kind == CHECK:
            compiled.check_lists[node] = [node.id] + l1 + l2
            out = []
            for l in (0, 1):
                for e1 in b1:
                    for e2 in b2:
                        out.append(BranchEntry(
                            (l,) + e1.s + e2.s,
                            angle_boxstar(e1.angle, e2.angle, l),
                            e1.prob * e2.prob * prob_boxstar(e1.angle, e2.angle, l),
                        ))
        else:
            compiled.check_lists[node] = l1 + l2
            out = []
            for e1 in b1:
                for e2 in b2:
                    out.append(BranchEntry(
                        e1.s + e2.s,
                        angle_ostar(e1.angle, e2.angle),
                        e1.prob * e2.prob,
                    ))
        compiled.branch_lists[node] = out

    visit(root)
    return compiled


def bit_success_from_branches(branches: list[BranchEntry]) -> float:
    """Helstrom success of the root-contracted channel mixture."""
    return float(sum(e.prob * 0.5 * (1.0 + math.sin(e.angle)) for e in branches))


def format_mpg(root: MpgNode, thetas=None) -> str:
    """Indented one-node-per-line rendering for the CLI."""
    lines = []

    def visit(node: MpgNode, depth: int) -> None:
        pad = "  " * depth
        if node.is_leaf:
            extra = f" theta={thetas[node.var - 1]:.6g}" if thetas is not None else ""
            lines.append(f"{pad}channel X{node.var}{extra}")
        else:
            label = {CHECK: "check(+)", EQUALITY: "equality(=)", ROOT: "root(=)"}[node.kind]
            lines.append(f"{pad}{label} #{node.id}")
            visit(node.first, depth + 1)
            visit(node.second, depth + 1)

    visit(root, 0)
    return "\n".join(lines)
