"""Acceptance criteria, one test each.

Every test records a PASS/FAIL line (with its runtime against the budget);
the lines are printed in the terminal summary by ``conftest.py``.
"""

import math
import random
import time

import pytest

from wfst import (
    LOG, PROBABILITY, TROPICAL, HasTwins, NonDeterminable, ViolationWitness, compose,
    determinize, equivalent, is_deterministic, push_weights, read_fst, twins_check_bounded,
    write_fst,
)
from wfst.cascade import build_grammar, build_lexicon, build_recognition_graph, decode, demo_fixture
from wfst.harness import (
    RandomSpec, compose_join_properties, determinize_properties, equivalence_pair,
    equivalence_properties, generate, join, minimize_properties, push_properties,
)
from wfst.oracle import count_matching_paths, relation
from wfst.textio import SymbolTable

from cascade_oracle import sweep
from conftest import acceptor
from test_compose import interleaving_pair
from test_determinize import non_twins

RESULTS: list[str] = []


class Criterion:
    def __init__(self, number, title, budget):
        self.number, self.title, self.budget = number, title, budget
        self.failures: list[str] = []

    def check(self, ok, what):
        if not ok:
            self.failures.append(str(what))

    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, exc_type, exc, tb):
        elapsed = time.perf_counter() - self.t0
        if exc is not None:
            self.failures.append(f"{exc_type.__name__}: {exc}")
        if elapsed >= self.budget:
            self.failures.append(f"runtime {elapsed:.2f}s over budget")
        status = "FAIL" if self.failures else "PASS"
        line = f"{status} [{self.number}] {self.title} ({elapsed:.2f}s / {self.budget:g}s)"
        if self.failures:
            line += ": " + "; ".join(self.failures[:5])
        RESULTS.append(line)
        if exc is None:
            assert not self.failures, line
        return False


def _draw(ring, rng):
    if ring is TROPICAL:
        return rng.choice([math.inf, float(rng.randint(-20, 20)), rng.uniform(-50, 50)])
    if ring is LOG:
        return rng.choice([math.inf, rng.uniform(-10, 10)])
    return rng.choice([0.0, 1.0, rng.uniform(0, 3)])


def test_1_semiring_laws():
    with Criterion(1, "semiring laws, 1000 triples per ring", 1.0) as c:
        rng = random.Random(1)
        for ring in (TROPICAL, LOG, PROBABILITY):
            P, T, eq = ring.plus, ring.times, ring.approx_eq
            for _ in range(1000):
                a, b, x = (_draw(ring, rng) for _ in range(3))
                laws = {
                    "plus-assoc": eq(P(P(a, b), x), P(a, P(b, x))),
                    "plus-comm": eq(P(a, b), P(b, a)),
                    "times-assoc": eq(T(T(a, b), x), T(a, T(b, x))),
                    "left-distrib": eq(T(a, P(b, x)), P(T(a, b), T(a, x))),
                    "right-distrib": eq(T(P(a, b), x), P(T(a, x), T(b, x))),
                    "plus-identity": eq(P(a, ring.zero), a) and eq(P(ring.zero, a), a),
                    "times-identity": eq(T(a, ring.one), a) and eq(T(ring.one, a), a),
                    "annihilator": ring.is_zero(T(a, ring.zero)) and ring.is_zero(T(ring.zero, a)),
                }
                if ring is TROPICAL:
                    laws["idempotence"] = P(a, a) == a
                for name, ok in laws.items():
                    c.check(ok, f"{ring.name} {name} on {(a, b, x)}")


def test_2_composition_join_identity():
    with Criterion(2, "composition join identity, 200 pairs", 120.0) as c:
        for seed in range(200):
            c.check(compose_join_properties(seed)["compose.join"], f"seed {seed}")


def test_3_epsilon_filter_redundancy():
    with Criterion(3, "epsilon-filter redundancy", 1.0) as c:
        t1, t2 = interleaving_pair()
        filtered = compose(t1, t2)
        naive = compose(t1, t2, epsilon_filter=False)
        expected = join(relation(t1, 6), relation(t2, 6), TROPICAL)
        got = relation(filtered, 6)
        c.check(bool(expected), "construction accepts nothing")
        c.check(got == expected, f"weights {got} != join {expected}")
        for x, y in got:
            c.check(count_matching_paths(filtered, x, y) == 1, f"filtered paths for {(x, y)}")
            c.check(count_matching_paths(naive, x, y) >= 2, f"naive paths for {(x, y)}")


def test_4_determinization():
    with Criterion(4, "determinization, 200 acyclic acceptors", 120.0) as c:
        for seed in range(200):
            for name, ok in determinize_properties(seed).items():
                c.check(ok, f"{name} seed {seed}")


def test_5_twins_and_guard():
    with Criterion(5, "twins check and state guard", 10.0) as c:
        try:
            determinize(non_twins(), max_states=1000)
            c.check(False, "non-twins input determinized")
        except NonDeterminable:
            pass
        witness = twins_check_bounded(non_twins(), max_len=4)
        c.check(isinstance(witness, ViolationWitness), f"got {witness}")
        if isinstance(witness, ViolationWitness):
            c.check(sorted(witness.weights) == [3.0, 4.0], f"weights {witness.weights}")
        equal = non_twins(3.0, 3.0)
        c.check(isinstance(twins_check_bounded(equal, max_len=4), HasTwins), "equal variant not twins")
        d = determinize(equal, max_states=1000)
        c.check(is_deterministic(d) and equivalent(equal, d, 6), "equal variant output wrong")


def test_6_weight_pushing():
    with Criterion(6, "weight pushing, 200 automata plus probability fixture", 60.0) as c:
        for seed in range(200):
            for name, ok in push_properties(seed).items():
                c.check(ok, f"{name} seed {seed}")
        t = acceptor([(0, 1, 1, 0.2), (0, 1, 2, 0.6), (1, 2, 3, 0.5)], {1: 0.3, 2: 1.0},
                     ring=PROBABILITY)
        p = push_weights(t)
        for q in p.states():
            total = sum(arc.weight for arc in p.arcs(q)) + p.final(q)
            c.check(abs(total - 1.0) <= 1e-9, f"state {q} sums to {total}")


def test_7_minimization():
    with Criterion(7, "minimization, 100 deterministic acceptors", 120.0) as c:
        for seed in range(100):
            results = minimize_properties(seed)
            for name in ("minimize.minimal", "minimize.equivalent", "minimize.idempotent",
                         "minimize.deterministic"):
                c.check(results[name], f"{name} seed {seed}")


def test_8_equivalence_via_pushing():
    with Criterion(8, "equivalence via pushing, 100 pairs", 60.0) as c:
        verdicts = set()
        for seed in range(100):
            c.check(equivalence_properties(seed)["equivalence.agrees"], f"seed {seed}")
            a, b, _ = equivalence_pair(seed)
            verdicts.add(equivalent(a, b, 6))
        c.check(verdicts == {True, False}, f"only saw verdicts {verdicts}")


def test_9_cascade_demo():
    with Criterion(9, "cascade demo sweep", 10.0) as c:
        entries, bigrams = demo_fixture()
        syms = SymbolTable()
        graph = build_recognition_graph(build_lexicon(entries, syms), build_grammar(bigrams, syms))
        cases = sweep(entries, bigrams)
        c.check(len(cases) > 10, "fixture sweep is too small")
        for phones, (cost, seqs) in cases.items():
            labels = tuple(syms.find(p) for p in phones)
            raw = decode(graph.composed, labels)
            opt = decode(graph.optimized, labels)
            c.check(abs(raw[1] - opt[1]) <= 1e-9, f"{phones}: raw {raw[1]} optimized {opt[1]}")
            c.check(abs(opt[1] - cost) <= 1e-9, f"{phones}: {opt[1]} != hand {cost}")
            words = tuple(syms.find(w) for w in opt[0])
            c.check(words in seqs and raw[0] == opt[0], f"{phones}: words {words}")
        c.check(graph.stage("det")[0] >= graph.stage("min")[0], f"stages {graph.stages}")
        if graph.projection_det is not None:
            c.check(graph.stage("proj-det")[0] >= graph.stage("proj-min")[0], f"stages {graph.stages}")


def test_10_io_round_trip():
    with Criterion(10, "text round-trip, 200 transducers", 5.0) as c:
        for seed in range(200):
            spec = RandomSpec(seed, acceptor=False, acyclic=seed % 2 == 0, epsilon_prob=0.2,
                              arc_density=0.8, weight_range=(0, 5))
            t = generate(spec)
            # non-integer weights exercise the shortest-repr formatting
            if seed % 3 == 0:
                rng = random.Random(seed)
                for q in t.states():
                    t.set_arcs(q, [a._replace(weight=a.weight + rng.random()) for a in t.arcs(q)])
            text = write_fst(t)
            back = read_fst(text)
            c.check(back.same_structure(t), f"seed {seed} structure")
            c.check(write_fst(back) == text and write_fst(t) == text, f"seed {seed} bytes")
