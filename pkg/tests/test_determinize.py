import math

import pytest

from wfst import (
    EPSILON, LOG, PROBABILITY, HasTwins, Inconclusive, NonDeterminable, UnsupportedError,
    ViolationWitness, connect, determinize, equivalent, is_deterministic, oracle_weight,
    twins_check_bounded,
)
from wfst.determinize import determinize_with_subsets
from wfst.harness import RandomSpec, generate

from conftest import acceptor, make_fst

a, b, c, d = 1, 2, 3, 4


def non_twins(w1=3.0, w2=4.0):
    """States 1 and 2 are both reached on 'a' and carry 'b' loops of different weight."""
    return acceptor([(0, 1, a, 1.0), (0, 2, a, 2.0), (1, 1, b, w1), (2, 2, b, w2),
                     (1, 3, c, 5.0), (2, 3, d, 6.0)], {3: 0.0})


def test_deterministic_input_keeps_its_size():
    t = acceptor([(0, 1, a, 1.0), (0, 2, b, 2.0), (1, 2, a, 0.5), (2, 0, c, 1.0)], {2: 0.0})
    out = determinize(t)
    assert out.num_states() == connect(t).num_states()
    assert equivalent(t, out, 5)


def test_two_a_arcs_merge_into_one_subset():
    t = acceptor([(0, 1, a, 1.0), (0, 2, a, 3.0)], {1: 0.0, 2: 0.0})
    out, subsets = determinize_with_subsets(t)
    assert out.num_states() == 2
    assert out.arcs(0) == [(a, a, 1.0, 1)]
    assert sorted(subsets[1]) == [(1, 0.0), (2, 2.0)]
    assert out.finals[1] == 0.0
    assert oracle_weight(out, (a,)) == oracle_weight(t, (a,)) == 1.0


def test_non_twins_hits_the_guard():
    with pytest.raises(NonDeterminable) as info:
        determinize(non_twins(), max_states=1000)
    assert info.value.num_subsets > 1000


def test_non_twins_residual_gap_grows():
    # the residual of state 2 grows by one per 'b', so no subset repeats
    with pytest.raises(NonDeterminable):
        determinize(non_twins(), max_states=50)
    t = non_twins()
    for n in range(5):
        x = (a,) + (b,) * n
        # the two sibling continuations drift apart by one per 'b'
        assert oracle_weight(t, x + (d,)) - oracle_weight(t, x + (c,)) == 2 + n


def test_non_twins_witness():
    result = twins_check_bounded(non_twins(), max_len=4)
    assert isinstance(result, ViolationWitness)
    assert set(result.states) == {1, 2}
    assert sorted(result.weights) == [3.0, 4.0]
    assert result.cycle == (b,)


def test_equal_cycle_weights_have_twins_and_determinize():
    t = non_twins(3.0, 3.0)
    assert isinstance(twins_check_bounded(t, max_len=4), HasTwins)
    out = determinize(t, max_states=1000)
    assert is_deterministic(out)
    assert equivalent(t, out, 6)


def test_deterministic_input_has_twins():
    t = acceptor([(0, 1, a, 1.0), (1, 1, b, 2.0)], {1: 0.0})
    assert isinstance(twins_check_bounded(t, 3), HasTwins)


def test_twins_check_reports_when_bound_is_too_small():
    assert isinstance(twins_check_bounded(non_twins(3.0, 3.0), max_len=0), Inconclusive)
    # siblings 1, 2 share the two-step cycle b c; their pair component has size 2
    t = acceptor([(0, 1, a, 0.0), (0, 2, a, 1.0), (1, 3, b, 1.0), (3, 1, c, 1.0),
                  (2, 4, b, 2.0), (4, 2, c, 0.0), (1, 5, d, 0.0), (2, 5, d, 0.0)], {5: 0.0})
    assert isinstance(twins_check_bounded(t, max_len=1), Inconclusive)
    assert isinstance(twins_check_bounded(t, max_len=2), HasTwins)


def test_twins_implies_determinizable_on_random_cyclic_input():
    # the converse needs unambiguous input, which random automata are not
    seen = set()
    for seed in range(60):
        t = generate(RandomSpec(seed, max_states=4, alphabet_size=2, arc_density=1.2, acyclic=False))
        result = twins_check_bounded(t, max_len=6)
        seen.add(type(result))
        if isinstance(result, HasTwins):
            out = determinize(t, max_states=500)
            assert is_deterministic(out)
            assert equivalent(t, out, 5)
    assert {HasTwins, ViolationWitness} <= seen


def test_log_ring_determinization():
    t = acceptor([(0, 1, a, 1.0), (0, 2, a, 2.0), (1, 3, b, 0.0), (2, 3, b, 0.0)], {3: 0.0}, ring=LOG)
    out = determinize(t)
    assert is_deterministic(out)
    assert oracle_weight(out, (a, b)) == pytest.approx(-math.log(math.exp(-1) + math.exp(-2)))


@pytest.mark.parametrize("fst", [
    acceptor([(0, 1, a, 0.5)], {1: 1.0}, ring=PROBABILITY),
    acceptor([(0, 1, EPSILON, 0.0)], {1: 0.0}),
    make_fst([(0, 1, a, b, 0.0)], {1: 0.0}),
])
def test_unsupported_inputs(fst):
    with pytest.raises(UnsupportedError):
        determinize(fst)


@pytest.mark.parametrize("seed", range(30))
def test_determinize_is_idempotent(seed):
    t = generate(RandomSpec(seed, arc_density=1.6))
    once = determinize(t)
    twice = determinize(once)
    assert twice.num_states() == once.num_states()
    assert equivalent(once, twice, 6, delta=0.0)
