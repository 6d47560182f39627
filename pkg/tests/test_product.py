import random
from collections import defaultdict
from fractions import Fraction
from itertools import product as iproduct

import pytest
from hypothesis import given, settings, strategies as st

from conftest import never_accepting_d, tiny_c, tiny_d
from oracles import random_zt_parts
from transreduce.defense import Configuration, support_after
from transreduce.errors import ReductionError
from transreduce.product import (
    build_dprime,
    build_product,
    check_correspondence,
    co_simulate,
    find_counterexample,
)
from transreduce.zmachine import ZTransducer, complete_machine, outputs


def words(max_len):
    for n in range(max_len + 1):
        for t in iproduct("01", repeat=n):
            yield "".join(t)


def pairs():
    c = tiny_c()
    return [(c, tiny_d()), (c, complete_machine(c)), (c, never_accepting_d())]


def test_tiny_pair():
    c, d = tiny_c(), tiny_d()
    assert find_counterexample(c, d, 3) == ("0", 1)
    rep = check_correspondence(c, d, 3)
    assert rep.critical == "00"
    assert rep.status == "consistent" and rep.ok


def test_self_pair_inconclusive():
    c = tiny_c()
    rep = check_correspondence(c, complete_machine(c), 6)
    assert rep.counterexample is None and rep.critical is None
    assert rep.status == "inconclusive"


def test_never_accepting_pair():
    rep = check_correspondence(tiny_c(), never_accepting_d(), 4)
    assert rep.counterexample == ("0", 1)
    assert rep.critical is not None and len(rep.critical) <= 4
    assert rep.backward_prefix == ("0", 1)
    assert rep.status == "consistent"


@pytest.mark.parametrize("c, d", pairs())
def test_dprime_keeps_outputs(c, d):
    dp = build_dprime(c, d)
    for w in words(6):
        assert outputs(dp, w) == outputs(d, w)


def test_rejects_bad_pairs():
    nondet = ZTransducer(
        ("q0", "qf"),
        frozenset({("q0", "0", 1, "qf"), ("q0", "0", 2, "qf"), ("q0", "1", 1, "qf")}),
        "q0",
        "qf",
    )
    with pytest.raises(ReductionError):
        build_product(nondet, tiny_d())
    partial = ZTransducer(("g0", "gf"), frozenset({("g0", "0", 1, "gf")}), "g0", "gf")
    with pytest.raises(ReductionError):
        build_product(tiny_c(), partial)


@pytest.mark.parametrize("c, d", pairs())
def test_product_rows_are_stochastic(c, d):
    prod = build_product(c, d)
    assert prod.lines[0] == (prod.c.initial, prod.dprime.initial)
    totals = defaultdict(Fraction)
    for r in prod.nds.rules:
        totals[r.k, r.a] += r.p
    assert set(totals.values()) == {1}
    stay = prod.line_of(prod.c.final, prod.dprime.final)
    assert {(r.j, r.z) for r in prod.nds.rules if r.k == stay} == {(stay, 0)}


def random_pair(seed):
    rng = random.Random(seed)
    cs, ct = random_zt_parts(rng, rng.randint(1, 3), deterministic=True)
    ds, dt = random_zt_parts(rng, rng.randint(1, 3), deterministic=False)
    return ZTransducer(cs, ct, "q0", "f"), ZTransducer(ds, dt, "q0", "f")


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 9))
def test_co_simulation_tracks_output_difference(seed):
    c, d = random_pair(seed)
    prod = build_product(c, d)
    for w in words(5):
        pairs = co_simulate(prod, w)
        support = support_after(prod.nds, w)
        assert {Configuration(*p) for p in pairs} <= support


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 9))
def test_random_pairs_never_violate(seed):
    c, d = random_pair(seed)
    rep = check_correspondence(c, d, 4)
    assert rep.status != "violated", rep.lines()
    if rep.counterexample is not None:
        assert rep.critical is not None
        assert len(rep.critical) <= 2 * len(rep.counterexample[0]) + 2
