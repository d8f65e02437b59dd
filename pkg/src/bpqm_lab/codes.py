"""Binary linear codes over GF(2), their Tanner graphs, and the bundled benchmark codes.

A code is stored through a full-row-rank parity-check matrix H; the generator
matrix is derived so that it is systematic on the lexicographically smallest
information set. Codeword enumeration is in lexicographic message order, which
fixes the row/column indexing of every Gram matrix built downstream.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

MAX_ENUM_K = 24


def gf2_rref(mat: np.ndarray) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form over GF(2). Returns (R, pivot columns)."""
    a = (np.asarray(mat, dtype=np.uint8) & 1).copy()
    rows, cols = a.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        hits = np.nonzero(a[r:, c])[0]
        if hits.size == 0:
            continue
        p = r + int(hits[0])
        if p != r:
            a[[r, p]] = a[[p, r]]
        others = np.nonzero(a[:, c])[0]
        for o in others:
            if o != r:
                a[o] ^= a[r]
        pivots.append(c)
        r += 1
    return a, pivots


def gf2_rank(mat: np.ndarray) -> int:
    if np.asarray(mat).size == 0:
        return 0
    return len(gf2_rref(mat)[1])


def gf2_solve(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Solve a @ x = b over GF(2) for square invertible a."""
    a = (np.asarray(a, dtype=np.uint8) & 1).copy()
    b = (np.asarray(b, dtype=np.uint8) & 1).copy()
    m = a.shape[0]
    aug = np.concatenate([a, b.reshape(m, -1)], axis=1)
    red, piv = gf2_rref(aug)
    if piv != list(range(m)):
        raise ValueError("singular GF(2) system")
    return red[:, m:].reshape(b.shape)


@dataclass(frozen=True)
class TannerGraph:
    """Bipartite variable/check adjacency read off the rows of H."""

    n: int
    n_checks: int
    var_adj: tuple[tuple[int, ...], ...]    # var i (1-based idx i-1) -> check ids (0-based)
    check_adj: tuple[tuple[int, ...], ...]  # check j -> variable indices (1-based)

    @property
    def edge_count(self) -> int:
        return sum(len(c) for c in self.check_adj)


@dataclass(frozen=True)
class BinaryLinearCode:
    """(n, k) binary linear code with parity-check H and generator G.

    ``tree_spec`` optionally records a tree factorization of the membership
    indicator (nested ('=' | '+', left, right) tuples anchored on one
    variable's channel edge) for codes whose plain Tanner graph is not a tree
    but that still admit a tree message-passing graph.
    """

    n: int
    k: int
    H: np.ndarray
    G: np.ndarray
    info_set: tuple[int, ...]           # 1-based positions, ascending; G is systematic there
    name: str = ""
    tree_spec: tuple | None = field(default=None, compare=False)

    def encode(self, message) -> np.ndarray:
        m = np.asarray(message, dtype=np.uint8) & 1
        if m.shape != (self.k,):
            raise ValueError(f"message must have length k={self.k}")
        return (m @ self.G) % 2

    def codewords(self) -> np.ndarray:
        """All 2^k codewords, lexicographic in the k message bits."""
        if self.k > MAX_ENUM_K:
            raise ValueError(f"k={self.k} exceeds enumeration guard {MAX_ENUM_K}")
        msgs = ((np.arange(2 ** self.k)[:, None] >> np.arange(self.k - 1, -1, -1)) & 1).astype(np.uint8)
        return (msgs @ self.G) % 2

    def tanner_graph(self) -> TannerGraph:
        h = self.H
        check_adj = tuple(tuple(int(v) + 1 for v in np.nonzero(row)[0]) for row in h)
        var_adj = tuple(tuple(int(j) for j in np.nonzero(h[:, i])[0]) for i in range(self.n))
        return TannerGraph(self.n, h.shape[0], var_adj, check_adj)


def is_tree(tg: TannerGraph) -> bool:
    """True iff the bipartite graph is connected and acyclic."""
    n_vertices = tg.n + tg.n_checks
    if n_vertices == 0:
        return False
    if tg.edge_count != n_vertices - 1:
        return False
    # connectivity by BFS over the bipartite adjacency
    seen_v = [False] * tg.n
    seen_c = [False] * tg.n_checks
    stack = [("v", 0)]
    seen_v[0] = True
    while stack:
        kind, i = stack.pop()
        if kind == "v":
            for c in tg.var_adj[i]:
                if not seen_c[c]:
                    seen_c[c] = True
                    stack.append(("c", c))
        else:
            for v in tg.check_adj[i]:
                if not seen_v[v - 1]:
                    seen_v[v - 1] = True
                    stack.append(("v", v - 1))
    return all(seen_v) and all(seen_c)


def _lex_info_set(h: np.ndarray) -> list[int]:
    """Lexicographically smallest set of k message positions (0-based).

    A position set I is an information set iff H restricted to the complement
    still has full row rank; greedily grow I from the left.
    """
    rows, n = h.shape
    k = n - rows
    info: list[int] = []
    for j in range(n):
        if len(info) == k:
            break
        candidate = info + [j]
        rest = [c for c in range(n) if c not in candidate]
        if gf2_rank(h[:, rest]) == rows:
            info.append(j)
    if len(info) != k:
        raise ValueError("could not find an information set (H not full rank?)")
    return info


def from_parity_check(h, name: str = "", tree_spec: tuple | None = None) -> BinaryLinearCode:
    """Build a code from a full-row-rank parity-check matrix."""
    h = (np.asarray(h, dtype=np.uint8) & 1).copy()
    if h.ndim != 2:
        raise ValueError("H must be a 2-d 0/1 matrix")
    rows, n = h.shape
    rank = gf2_rank(h)
    if rank != rows:
        raise ValueError(
            f"H must have full row rank over GF(2): rank {rank} < {rows} rows; "
            "remove dependent rows first"
        )
    k = n - rows
    info = _lex_info_set(h)
    comp = [c for c in range(n) if c not in info]
    g = np.zeros((k, n), dtype=np.uint8)
    if k:
        g[np.arange(k), info] = 1
        if comp:
            # H_comp @ x_comp = H_info @ x_info  for each unit message
            rhs = h[:, info] % 2
            sol = gf2_solve(h[:, comp], rhs)  # (n-k, k)
            g[:, comp] = sol.T
    assert not ((g @ h.T) % 2).any()
    h.setflags(write=False)
    g.setflags(write=False)
    return BinaryLinearCode(n=n, k=k, H=h, G=g, info_set=tuple(i + 1 for i in info),
                            name=name, tree_spec=tree_spec)


def _h_from_checks(n: int, checks) -> np.ndarray:
    h = np.zeros((len(checks), n), dtype=np.uint8)
    for j, members in enumerate(checks):
        for v in members:
            h[j, v - 1] = 1
    return h


_H17 = _h_from_checks(17, [
    (2, 3, 4, 5),
    (6, 7, 8, 9),
    (10, 11, 12, 13),
    (14, 15, 16, 17),
    (2, 3, 6, 7, 10, 11, 14, 15),
    (1, 2, 3, 6, 7),
])

# Tree factorization behind the (17,11) code: pairwise checks on the leaf
# pairs, equalities tying their parities together, two further checks and a
# top equality, anchored on X1's channel edge. The plain Tanner graph of _H17
# has 4-cycles, so this is the only route to a tree message-passing graph.
_TREE17 = (1, (
    "=",
    ("+",
     ("=", ("+", 2, 3), ("+", 4, 5)),
     ("=", ("+", 6, 7), ("+", 8, 9))),
    ("+",
     ("=", ("+", 10, 11), ("+", 12, 13)),
     ("=", ("+", 14, 15), ("+", 16, 17))),
))

_BUILTINS = {
    "code5": lambda: from_parity_check([[1, 1, 0, 1, 0], [1, 0, 1, 0, 1]], name="code5"),
    "code6": lambda: from_parity_check(
        _h_from_checks(6, [(1, 3, 5), (1, 2, 4), (3, 4, 6)]), name="code6"),
    "code8": lambda: from_parity_check(
        _h_from_checks(8, [(1, 2, 5), (1, 4, 8), (3, 4, 7), (2, 3, 6)]), name="code8"),
    "code17": lambda: from_parity_check(_H17, name="code17", tree_spec=_TREE17),
}


def builtin_code(name: str) -> BinaryLinearCode:
    try:
        return _BUILTINS[name]()
    except KeyError:
        raise ValueError(f"unknown builtin code {name!r}; choose from {sorted(_BUILTINS)}") from None


def read_code_file(path) -> BinaryLinearCode:
    """Plain-text code format: first line 'n k', then n-k rows of H."""
    with open(path) as fh:
        tokens = fh.read().split()
    if len(tokens) < 2:
        raise ValueError(f"{path}: expected 'n k' header")
    n, k = int(tokens[0]), int(tokens[1])
    body = tokens[2:]
    if len(body) != (n - k) * n:
        raise ValueError(f"{path}: expected {(n - k) * n} matrix entries, got {len(body)}")
    h = np.array([int(t) for t in body], dtype=np.uint8).reshape(n - k, n)
    return from_parity_check(h, name=str(path))


def write_code_file(code: BinaryLinearCode, path) -> None:
    with open(path, "w") as fh:
        fh.write(f"{code.n} {code.k}\n")
        for row in code.H:
            fh.write(" ".join(str(int(v)) for v in row) + "\n")


def resolve_code(spec: str) -> BinaryLinearCode:
    """CLI code source: 'builtin:<name>' or a file path."""
    if spec.startswith("builtin:"):
        return builtin_code(spec.split(":", 1)[1])
    return read_code_file(spec)
