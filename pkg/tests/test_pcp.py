from itertools import product

import pytest

from oracles import all_words, eval_pairs
from transreduce import pcp
from transreduce.errors import ReductionError, SizeLimitError
from transreduce.relation import contains

I1, I2 = "i1", "i2"


def test_layer_examples(ex1):
    side = pcp.build_side(ex1, "u")
    assert contains(side.L3, ((I1, "a"), 3))
    assert contains(side.L4, ((I1, "a", "b", "b"), 7))
    assert contains(side.L5, ((I1, "b", "a"), 5))


def test_l0_examples(ex1):
    L0 = pcp.build_l0(ex1)
    assert contains(L0, ((I1, "a"), 3))
    assert not contains(L0, ((I1,), 1))
    assert not contains(L0, (("a",), 2))


def test_solution_witness(ex1):
    assert pcp.solution_witness(ex1, (1, 2)) == ((I1, I2, "a", "b", "b"), 8)
    assert pcp.solution_witness(pcp.PcpInstance((("a", "a"),)), (1,)) == ((I1, "a"), 3)
    with pytest.raises(ReductionError):
        pcp.solution_witness(ex1, (1,))


def test_brute_force(ex1):
    assert pcp.brute_force_pcp(ex1, 3) == (1, 2)
    assert pcp.brute_force_pcp(pcp.PcpInstance((("a", "aa"),)), 5) is None
    assert pcp.brute_force_pcp(pcp.PcpInstance((("a", "a"),)), 1) == (1,)


def _naive_pcp(inst, max_len):
    for n in range(1, max_len + 1):
        for seq in product(range(1, inst.n + 1), repeat=n):
            if inst.is_solution(seq):
                return seq
    return None


@pytest.mark.parametrize(
    "pairs",
    [
        (("ab", "a"), ("b", "bb")),
        (("a", "ab"), ("ba", "a"), ("b", "bb")),
        (("aab", "a"), ("b", "ab"), ("a", "ba")),
        (("ba", "b"), ("a", "ab")),
        (("a", "b"),),
    ],
)
def test_brute_force_is_shortlex_least(pairs):
    inst = pcp.PcpInstance(pairs)
    assert pcp.brute_force_pcp(inst, 5) == _naive_pcp(inst, 5)


@pytest.mark.parametrize(
    "pairs", [(("ab", "a"), ("b", "bb")), (("a", "a"),), (("a", "ab"), ("ba", "a"), ("b", "bb"))]
)
def test_solutions_escape_both_sides(pairs):
    inst = pcp.PcpInstance(pairs)
    seq = pcp.brute_force_pcp(inst, 4)
    assert seq is not None
    w = pcp.solution_witness(inst, seq)
    assert contains(pcp.build_l0(inst), w)
    assert not contains(pcp.build_side(inst, "u").L, w)
    assert not contains(pcp.build_side(inst, "v").L, w)


@pytest.mark.parametrize("pairs", [(("ab", "a"), ("b", "bb")), (("a", "a"),)])
def test_scan_finds_no_violations(pairs):
    assert pcp.scan_claim(pcp.PcpInstance(pairs), 3, 5) == []


def test_scan_witness_in_neither(ex1):
    w = pcp.l0_pair((1, 2), "abb")
    assert pcp.proof_case(ex1, "u", (1, 2), "abb") is None
    assert pcp.proof_case(ex1, "v", (1, 2), "abb") is None
    assert not contains(pcp.build_side(ex1, "u").L, w)
    assert not contains(pcp.build_side(ex1, "v").L, w)


def test_proof_cases(ex1):
    assert pcp.proof_case(ex1, "u", (1,), "abb") == "L4"
    assert pcp.proof_case(ex1, "u", (1,), "a") == "L3"
    assert pcp.proof_case(ex1, "u", (1,), "ba") == "L5"


def test_mismatch_words_cap():
    assert sorted(pcp.mismatch_words("ab")) == ["aa", "ba", "bb"]
    with pytest.raises(SizeLimitError):
        pcp.mismatch_words("a" * 5, cap=16)


def test_instance_validation():
    with pytest.raises(ValueError):
        pcp.PcpInstance(())
    with pytest.raises(ValueError):
        pcp.PcpInstance((("", "a"),))
    with pytest.raises(ValueError):
        pcp.PcpInstance((("ac", "a"),))


# layers against their set definitions ----------------------------------------

def _tree_union(trees):
    trees = list(trees)
    out = trees[0]
    for t in trees[1:]:
        out = ("union", out, t)
    return out


def _tree_concat(*trees):
    out = trees[0]
    for t in trees[1:]:
        out = ("concat", out, t)
    return out


def _layer_trees(inst, side):
    words = inst.words(side)
    k = [len(w) for w in words]
    idx = [f"i{a}" for a in range(1, inst.n + 1)]
    A = lambda word, m: ("atom", (word,) if word in idx else tuple(word), m)
    L1 = ("star", _tree_union(A(idx[a], k[a] + 1) for a in range(inst.n)))
    ones = ("star", _tree_union(A(i, 1) for i in idx))
    single = ("star", _tree_union([A("a", 1), A("b", 1)]))
    double = _tree_union([A("a", 2), A("b", 2)])
    L2 = _tree_union(
        _tree_concat(L1, A(idx[b], j), ones) for b in range(inst.n) for j in range(1, k[b] + 1)
    )
    S = {
        b: ["".join(t) for t in product("ab", repeat=k[b]) if "".join(t) != words[b]]
        for b in range(inst.n)
    }
    L5 = _tree_union(
        _tree_concat(L1, A(idx[b], 1), ones, single, A(mu, 2 * k[b]), ("star", double))
        for b in range(inst.n)
        for mu in S[b]
    )
    return {
        "L3": _tree_concat(L2, single),
        "L4": _tree_concat(L1, single, ("plus", double)),
        "L5": L5,
    }


@pytest.mark.parametrize("side", ["u", "v"])
def test_layers_match_definitions(ex1, side):
    rels = pcp.build_side(ex1, side)
    max_count = 3 * 8
    for name, tree in _layer_trees(ex1, side).items():
        oracle = eval_pairs(tree, 8, max_count)
        layer = getattr(rels, name)
        for pair in oracle:
            assert contains(layer, pair), (name, pair)
        for w in all_words(ex1.alphabet, 4):
            got = {m for m in range(4 * 4 + 1) if contains(layer, (w, m))}
            assert got == {m for x, m in oracle if x == w}, (name, w)


def test_file_roundtrip(tmp_path, ex1):
    path = tmp_path / "ex.pcp"
    path.write_text("# comment\n" + pcp.dump_pcp(ex1) + "\n")
    assert pcp.parse_pcp(path) == ex1
