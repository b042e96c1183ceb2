import math

import pytest

from wfst import (
    LOG, PROBABILITY, DomainError, NoPathError, UnsupportedError, equivalent, oracle_weight,
    push_weights, shortest_distance_to_final, shortest_path,
)
from wfst.harness import RandomSpec, generate, is_push_normalized, weights_close
from wfst.oracle import relation

from conftest import acceptor

a, b, c = 1, 2, 3


def diamond(ring=None):
    kw = {"ring": ring} if ring else {}
    return acceptor([(0, 1, a, 1.0), (1, 3, c, 5.0), (0, 2, b, 2.0), (2, 3, c, 1.0)], {3: 0.0}, **kw)


def test_single_final_state():
    t = acceptor([], {0: 0.0})
    assert shortest_distance_to_final(t) == [0.0]


def test_chain_distances(chain):
    assert shortest_distance_to_final(chain) == [6.0, 4.0, 1.0]


def test_diamond_distance():
    assert shortest_distance_to_final(diamond())[0] == 3.0


def test_cyclic_tropical():
    t = acceptor([(0, 1, a, 1.0), (1, 0, b, 1.0), (1, 2, c, 4.0)], {2: 0.0, 0: 10.0})
    assert shortest_distance_to_final(t) == [5.0, 4.0, 0.0]


def test_negative_cycle_is_a_domain_error():
    t = acceptor([(0, 1, a, -1.0), (1, 0, b, -1.0)], {1: 0.0})
    with pytest.raises(DomainError):
        shortest_distance_to_final(t)


def test_cyclic_log_is_unsupported():
    t = acceptor([(0, 0, a, 1.0)], {0: 0.0}, ring=LOG)
    with pytest.raises(UnsupportedError):
        shortest_distance_to_final(t)


def test_log_distance_sums_paths():
    d = shortest_distance_to_final(diamond(LOG))
    assert d[0] == pytest.approx(-math.log(math.exp(-6) + math.exp(-3)))


def test_push_chain_moves_everything_to_the_start(chain):
    p = push_weights(chain)
    assert p.initials == {0: 6.0}
    assert [arc.weight for _, arc in p.all_arcs()] == [0.0, 0.0]
    assert p.finals == {2: 0.0}
    assert oracle_weight(p, (a, b)) == oracle_weight(chain, (a, b)) == 6.0


def test_push_of_pushed_is_unchanged():
    p = push_weights(diamond())
    assert weights_close(push_weights(p), p, 0.0)


def test_probability_two_branch_sums_to_one():
    t = acceptor([(0, 1, a, 0.2), (0, 1, b, 0.6), (1, 2, c, 0.5)], {1: 0.3, 2: 1.0}, ring=PROBABILITY)
    p = push_weights(t)
    for q in p.states():
        total = sum(arc.weight for arc in p.arcs(q)) + p.final(q)
        assert total == pytest.approx(1.0, abs=1e-9)
    before, after = relation(t, 3), relation(p, 3)
    assert before.keys() == after.keys()
    for k in before:
        assert after[k] == pytest.approx(before[k], abs=1e-12)


def test_push_trims_dead_states():
    t = acceptor([(0, 1, a, 1.0), (0, 2, b, 0.0)], {1: 0.0})
    assert push_weights(t).num_states() == 2


@pytest.mark.parametrize("seed", range(25))
def test_push_random(seed):
    t = generate(RandomSpec(seed, arc_density=0.8, acyclic=seed % 2 == 0))
    p = push_weights(t)
    assert equivalent(t, p, 5, delta=0.0 if seed % 2 == 0 else 1e-9)
    assert is_push_normalized(p)


def test_shortest_path():
    best = shortest_path(diamond())
    assert relation(best, 3) == {((b, c), (b, c)): 3.0}
    assert best.num_states() == 3


def test_shortest_path_none():
    with pytest.raises(NoPathError):
        shortest_path(acceptor([(0, 1, a, 1.0)], {}))
