import numpy as np
import pytest

from bpqm_lab.codes import (
    builtin_code,
    from_parity_check,
    is_tree,
    read_code_file,
    resolve_code,
    write_code_file,
)

G5_PRINTED = np.array([[1, 0, 0, 1, 1], [0, 1, 0, 1, 0], [0, 0, 1, 0, 1]], dtype=np.uint8)

G17_PRINTED = np.array([
    [1, 0, 0, 0, 0, 0, 1, 0, 1, 0, 0, 0, 0, 0, 1, 0, 1],
    [0, 1, 0, 0, 1, 0, 1, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0],
    [0, 0, 1, 0, 1, 0, 1, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0],
    [0, 0, 0, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, 0, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, 0, 0, 0, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0, 1, 0, 1],
    [0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 1, 0, 1, 0, 1],
    [0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 1, 0, 0, 0, 0],
    [0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 1, 0, 0],
    [0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 1],
], dtype=np.uint8)


def test_code5_matches_printed_matrices():
    code = from_parity_check([[1, 1, 0, 1, 0], [1, 0, 1, 0, 1]])
    assert (code.n, code.k) == (5, 3)
    assert np.array_equal(code.G, G5_PRINTED)


def test_repetition2():
    code = from_parity_check([[1, 1]])
    assert (code.n, code.k) == (2, 1)
    cws = {tuple(c) for c in code.codewords()}
    assert cws == {(0, 0), (1, 1)}


def test_code17_shape_and_generator():
    code = builtin_code("code17")
    assert (code.n, code.k) == (17, 11)
    assert np.array_equal(code.G, G17_PRINTED)


def test_rank_deficient_rejected():
    with pytest.raises(ValueError, match="full row rank"):
        from_parity_check([[1, 1, 0], [1, 1, 0]])


def test_codewords_code5():
    code = builtin_code("code5")
    cws = code.codewords()
    assert cws.shape == (8, 5)
    assert tuple(cws[0]) == (0, 0, 0, 0, 0)
    assert (1, 0, 0, 1, 1) in {tuple(c) for c in cws}  # message 100


def test_codewords_satisfy_checks_and_encode_bijection():
    for name in ("code5", "code6", "code8", "code17"):
        code = builtin_code(name)
        cws = code.codewords()
        assert not ((cws @ code.H.T) % 2).any()
        assert len({tuple(c) for c in cws}) == 2 ** code.k
        # encode agrees with enumeration order
        msgs = ((np.arange(2 ** code.k)[:, None] >> np.arange(code.k - 1, -1, -1)) & 1)
        for i in (0, 1, 2 ** code.k - 1):
            assert np.array_equal(code.encode(msgs[i]), cws[i])


def test_is_tree():
    assert is_tree(builtin_code("code5").tanner_graph())
    assert not is_tree(builtin_code("code8").tanner_graph())
    assert not is_tree(builtin_code("code6").tanner_graph())
    # the 17-bit benchmark has a cyclic Tanner graph; only its registered
    # factorization is a tree
    assert not is_tree(builtin_code("code17").tanner_graph())
    # single variable, no checks
    single = from_parity_check(np.zeros((0, 1), dtype=np.uint8))
    assert is_tree(single.tanner_graph())


def test_is_tree_agrees_with_edge_count():
    for name in ("code5", "code6", "code8", "code17"):
        tg = builtin_code(name).tanner_graph()
        acyclic_connected = tg.edge_count == tg.n + tg.n_checks - 1
        if is_tree(tg):
            assert acyclic_connected


def test_disconnected_graph_is_not_tree():
    # two independent repetition codes: acyclic but two components
    h = np.array([[1, 1, 0, 0], [0, 0, 1, 1]], dtype=np.uint8)
    assert not is_tree(from_parity_check(h).tanner_graph())


def test_builtin_unknown_name():
    with pytest.raises(ValueError, match="unknown builtin"):
        builtin_code("code99")


def test_code_file_roundtrip(tmp_path):
    code = builtin_code("code5")
    path = tmp_path / "c5.txt"
    write_code_file(code, path)
    back = read_code_file(path)
    assert np.array_equal(back.H, code.H)
    assert np.array_equal(back.G, code.G)
    assert resolve_code(str(path)).n == 5
    assert resolve_code("builtin:code8").n == 8
