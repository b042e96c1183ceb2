import random

import pytest

from wfst import equivalence_pushed, equivalent, is_deterministic, minimize, push_weights
from wfst.harness import (
    add_redundant_state, brute_force_class_count, mutate_arc, random_deterministic,
)
from wfst.minimize import isomorphic, refine_partition

from conftest import acceptor, make_fst

a, b, c = 1, 2, 3


def mergeable():
    # 1 and 2 become identical after pushing: same labels, targets, final weights up to +1
    return acceptor([(0, 1, a, 0.0), (0, 2, b, 0.0), (1, 3, c, 1.0), (2, 3, c, 2.0)],
                    {1: 0.0, 2: 1.0, 3: 0.0})


def test_merges_equivalent_states():
    t = mergeable()
    m = minimize(t)
    assert brute_force_class_count(t) == 3
    assert m.num_states() == 3
    assert equivalent(t, m, 4, delta=0.0)


def test_minimal_input_unchanged():
    t = acceptor([(0, 1, a, 1.0), (1, 2, b, 0.0)], {2: 0.0})
    assert minimize(t).num_states() == 3


def test_minimize_rejects_nondeterministic():
    t = acceptor([(0, 1, a, 1.0), (0, 2, a, 0.0)], {1: 0.0, 2: 0.0})
    with pytest.raises(ValueError):
        minimize(t)


def test_cycle_collapse():
    # an 'a' loop unrolled over three states, all equivalent
    t = acceptor([(0, 1, a, 1.0), (1, 2, a, 1.0), (2, 0, a, 1.0)], {0: 0.0, 1: 0.0, 2: 0.0})
    m = minimize(t)
    assert m.num_states() == 1
    assert equivalent(t, m, 7, delta=0.0)


def test_transducer_pairs_stay_distinct():
    t = make_fst([(0, 1, a, b, 0.0), (0, 2, b, b, 0.0), (1, 3, c, a, 0.0), (2, 3, c, b, 0.0)], {3: 0.0})
    assert minimize(t).num_states() == 4


def test_refine_partition_separates_finals():
    t = acceptor([(0, 1, a, 0.0)], {1: 0.0})
    blocks = refine_partition(t)
    assert blocks[0] != blocks[1]


@pytest.mark.parametrize("seed", range(40))
def test_minimize_random(seed):
    t = random_deterministic(seed)
    m = minimize(t)
    assert is_deterministic(m)
    assert m.num_states() == brute_force_class_count(t)
    assert equivalent(t, m, 6, delta=0.0)
    assert minimize(m).num_states() == m.num_states()
    assert isomorphic(minimize(m), m)


def test_redundant_state_is_removed():
    rng = random.Random(3)
    t = acceptor([(0, 1, a, 1.0), (1, 2, b, 2.0), (2, 1, a, 0.0)], {2: 0.0})
    bigger = add_redundant_state(t, rng, shift=2)
    assert bigger.num_states() == 4
    # the clone only differs by a constant offset on its suffixes
    assert brute_force_class_count(bigger) == 3
    assert minimize(bigger).num_states() == minimize(t).num_states() == 3


def test_equivalence_pushed_examples():
    t = mergeable()
    assert equivalence_pushed(t, t)
    assert equivalence_pushed(t, push_weights(t))
    assert equivalence_pushed(t, minimize(t))
    assert not equivalence_pushed(t, mutate_arc(t))
    assert not equivalent(t, mutate_arc(t), 6)


def test_isomorphic_detects_weight_change():
    t = mergeable()
    u = t.copy()
    u.finals[3] = 0.5
    assert isomorphic(t, t)
    assert not isomorphic(t, u)
