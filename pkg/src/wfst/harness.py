"""Random instance generation and oracle-backed property checks.

Each property takes an instance seed and returns True when the algorithm's
output agrees with the brute-force oracle on that instance. ``check_suite``
runs all of them and reports failing seeds, which replay deterministically.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field, replace
from typing import Callable

from .compose import compose
from .determinize import determinize_with_subsets
from .fst import EPSILON, Arc, Fst, connect, is_deterministic
from .minimize import equivalence_pushed, minimize
from .oracle import StringPair, equivalent, relation
from .reweight import push_weights
from .semiring import DEFAULT_DELTA, get_ring

Tamper = Callable[[str, Fst], Fst]


@dataclass(frozen=True)
class RandomSpec:
    seed: int
    max_states: int = 6
    alphabet_size: int = 3
    # expected number of arcs per (state, label)
    arc_density: float = 0.5
    weight_range: tuple[int, int] = (0, 5)
    acyclic: bool = True
    deterministic: bool = False
    acceptor: bool = True
    epsilon_prob: float = 0.0
    final_prob: float = 0.5
    ring: str = "tropical"


def _draw_weight(rng: random.Random, spec: RandomSpec) -> float:
    lo, hi = spec.weight_range
    if spec.ring == "prob":
        return rng.randint(max(lo, 1), max(hi, 1)) / max(hi, 1)
    return float(rng.randint(lo, hi))


def generate(spec: RandomSpec, max_attempts: int = 1000) -> Fst:
    """Trim, non-empty random fst; equal RandomSpecs always yield equal fsts."""
    if spec.max_states < 1 or spec.alphabet_size < 1:
        raise ValueError("max_states and alphabet_size must be positive")
    if spec.arc_density < 0:
        raise ValueError("arc_density must be non-negative")
    if spec.deterministic and spec.arc_density > 1:
        raise ValueError("a deterministic fst has at most one arc per (state, label)")
    if spec.deterministic and spec.epsilon_prob > 0:
        raise ValueError("a deterministic fst has no epsilon inputs")
    lo, hi = spec.weight_range
    if lo > hi:
        raise ValueError("empty weight range")
    ring = get_ring(spec.ring)
    rng = random.Random(spec.seed)
    labels = range(1, spec.alphabet_size + 1)
    for _ in range(max_attempts):
        n = rng.randint((spec.max_states + 1) // 2, spec.max_states)
        fst = Fst(ring)
        fst.add_states(n)
        fst.set_start(0)
        for q in range(n):
            targets = range(q + 1, n) if spec.acyclic else range(n)
            if targets:
                for label in labels:
                    k = int(spec.arc_density)
                    if rng.random() < spec.arc_density - k:
                        k += 1
                    if spec.deterministic:
                        k = min(k, 1)
                    for _ in range(k):
                        i = label
                        o = label if spec.acceptor else rng.choice(labels)
                        if spec.epsilon_prob and rng.random() < spec.epsilon_prob:
                            if spec.acceptor:
                                i = o = EPSILON
                            elif rng.random() < 0.5:
                                i = EPSILON
                            else:
                                o = EPSILON
                        fst.add_arc(q, Arc(i, o, _draw_weight(rng, spec), rng.choice(targets)))
            if q == n - 1 or rng.random() < spec.final_prob:
                fst.set_final(q, _draw_weight(rng, spec))
        out = connect(fst)
        if out.num_states():
            return out
    raise ValueError(f"no non-empty trim instance found for {spec}")


def add_redundant_state(fst: Fst, rng: random.Random, shift: int = 2) -> Fst:
    """Clone one state with every outgoing weight shifted by ``shift`` and steer
    some of its incoming arcs to the clone; the clone is equivalent up to a
    constant, so a minimal automaton merges it back."""
    out = fst.copy()
    candidates = sorted({a.nextstate for _, a in fst.all_arcs()})
    if not candidates:
        return out
    q = rng.choice(candidates)
    clone = out.add_state()
    for arc in fst.arcs(q):
        target = clone if arc.nextstate == q else arc.nextstate
        out.add_arc(clone, arc._replace(weight=arc.weight + shift, nextstate=target))
    if q in fst.finals:
        out.set_final(clone, fst.finals[q] + shift)
    incoming = [(p, k) for p in fst.states() for k, a in enumerate(fst.arcs(p)) if a.nextstate == q]
    chosen = rng.sample(incoming, max(1, len(incoming) // 2))
    for p, k in chosen:
        arcs = out.arcs(p)
        arcs[k] = arcs[k]._replace(nextstate=clone)
    return connect(out)


# -- independent oracles --


def join(r1: dict, r2: dict, ring) -> dict:
    """Relational join: weight of (x, y) is the sum over z of r1(x, z) r2(z, y)."""
    by_mid: dict[tuple, list] = {}
    for (z, y), w in r2.items():
        by_mid.setdefault(z, []).append((y, w))
    out: dict[StringPair, float] = {}
    for (x, z), w1 in r1.items():
        for y, w2 in by_mid.get(z, ()):
            key = StringPair(x, y)
            w = ring.times(w1, w2)
            out[key] = ring.plus(out[key], w) if key in out else w
    return {k: v for k, v in out.items() if not ring.is_zero(v)}


def suffix_weights(fst: Fst, q: int, depth: int) -> dict[tuple, float]:
    """Weight of every accepted suffix of length <= depth from state ``q``,
    by plain path enumeration."""
    ring = fst.ring
    out: dict[tuple, float] = {}
    stack = [(q, (), ring.one)]
    while stack:
        s, v, w = stack.pop()
        if s in fst.finals:
            fw = ring.times(w, fst.finals[s])
            out[v] = ring.plus(out[v], fw) if v in out else fw
        if len(v) < depth:
            for arc in fst.arcs(s):
                stack.append((arc.nextstate, v + (arc.ilabel, arc.olabel), ring.times(w, arc.weight)))
    return out


def states_equivalent(f: dict, g: dict, delta: float = DEFAULT_DELTA) -> bool:
    """Same suffix support, weights differing by one constant (tropical)."""
    if f.keys() != g.keys():
        return False
    if not f:
        return True
    diffs = [f[k] - g[k] for k in f]
    return all(abs(d - diffs[0]) <= delta for d in diffs)


def brute_force_class_count(fst: Fst, depth: int = 8) -> int:
    """Number of classes of pairwise-equivalent states of a trim deterministic fst."""
    suffixes = [suffix_weights(fst, q, depth) for q in fst.states()]
    reps: list[int] = []
    for q in fst.states():
        if not any(states_equivalent(suffixes[q], suffixes[r]) for r in reps):
            reps.append(q)
    return len(reps)


def mutate_arc(fst: Fst, max_len: int = 6, bump: float = 1.0) -> Fst:
    """Increase the weight of one arc that lies on an accepted string of length
    <= max_len (or the initial weight when no such arc exists)."""
    out = fst.copy()
    start = fst.start
    depth_in = {start: 0}
    frontier = [start]
    while frontier:
        nxt = []
        for p in frontier:
            for arc in fst.arcs(p):
                if arc.nextstate not in depth_in:
                    depth_in[arc.nextstate] = depth_in[p] + 1
                    nxt.append(arc.nextstate)
        frontier = nxt
    depth_out = {q: 0 for q in fst.finals}
    changed = True
    while changed:
        changed = False
        for p, arc in fst.all_arcs():
            if arc.nextstate in depth_out and depth_out.get(p, 1 << 30) > depth_out[arc.nextstate] + 1:
                depth_out[p] = depth_out[arc.nextstate] + 1
                changed = True
    for p in fst.states():
        for k, arc in enumerate(fst.arcs(p)):
            if p in depth_in and arc.nextstate in depth_out:
                if depth_in[p] + 1 + depth_out[arc.nextstate] <= max_len:
                    out.arcs(p)[k] = arc._replace(weight=arc.weight + bump)
                    return out
    out.initials[start] = out.initials[start] + bump
    return out


# -- properties --


def _tamper(tamper: Tamper | None, name: str, fst: Fst) -> Fst:
    return tamper(name, fst) if tamper else fst


def _exact_equal(r1: dict, r2: dict) -> bool:
    return r1 == r2


def compose_join_properties(seed: int, tamper: Tamper | None = None, max_len: int = 6) -> dict[str, bool]:
    """Join identity on an epsilon-free pair and on a pair with epsilons."""
    results = {}
    for name, eps in (("compose.join", 0.0), ("compose.epsilon_join", 0.3)):
        base = RandomSpec(seed, max_states=6, alphabet_size=3, arc_density=1.2,
                          acceptor=False, epsilon_prob=eps)
        a = generate(base)
        b = generate(replace(base, seed=seed + 7_000_003))
        c = _tamper(tamper, "compose", compose(a, b))
        ring = a.ring
        # acyclic operands: every path has fewer arcs than states
        ra = relation(a, a.num_states(), a.num_states())
        rb = relation(b, b.num_states(), b.num_states())
        expected = {
            k: w for k, w in join(ra, rb, ring).items()
            if len(k.input) <= max_len and len(k.output) <= max_len
        }
        results[name] = _exact_equal(relation(c, max_len, max_len), expected)
    return results


def determinize_properties(seed: int, tamper: Tamper | None = None) -> dict[str, bool]:
    # density above one so most inputs have several arcs per (state, label)
    a = generate(RandomSpec(seed, max_states=6, alphabet_size=3, arc_density=1.6))
    d, subsets = determinize_with_subsets(a)
    d = _tamper(tamper, "determinize", d)
    return {
        "determinize.deterministic": is_deterministic(d),
        "determinize.equivalent": equivalent(a, d, 6, delta=0.0),
        "determinize.residuals": all(min(r for _, r in s) == 0.0 for s in subsets),
    }


def is_push_normalized(fst: Fst) -> bool:
    """Tropical: final weight and outgoing arc weights have minimum 0 at every state."""
    for q in fst.states():
        candidates = [a.weight for a in fst.arcs(q)]
        if q in fst.finals:
            candidates.append(fst.finals[q])
        if candidates and min(candidates) != 0.0:
            return False
    return True


def weights_close(a: Fst, b: Fst, delta: float = DEFAULT_DELTA) -> bool:
    """Same shape (ids, labels, targets), weights within ``delta``."""
    ring = a.ring
    if a.num_states() != b.num_states() or a.initials.keys() != b.initials.keys():
        return False
    if a.finals.keys() != b.finals.keys():
        return False
    for q in a.states():
        if len(a.arcs(q)) != len(b.arcs(q)):
            return False
        for x, y in zip(a.arcs(q), b.arcs(q)):
            if (x.ilabel, x.olabel, x.nextstate) != (y.ilabel, y.olabel, y.nextstate):
                return False
            if not ring.approx_eq(x.weight, y.weight, delta):
                return False
    return all(ring.approx_eq(a.finals[q], b.finals[q], delta) for q in a.finals) and all(
        ring.approx_eq(a.initials[q], b.initials[q], delta) for q in a.initials
    )


def push_properties(seed: int, tamper: Tamper | None = None) -> dict[str, bool]:
    a = generate(RandomSpec(seed, max_states=6, alphabet_size=3, arc_density=0.7))
    p = _tamper(tamper, "push", push_weights(a))
    return {
        "push.equivalent": equivalent(a, p, 6, delta=0.0),
        "push.normalized": is_push_normalized(p),
        "push.idempotent": weights_close(push_weights(p), p),
    }


def random_deterministic(seed: int, max_states: int = 8) -> Fst:
    a = generate(RandomSpec(seed, max_states=max_states, alphabet_size=3, arc_density=0.6,
                            acyclic=False, deterministic=True))
    rng = random.Random(seed ^ 0x5EED)
    # half of the instances get a state that minimization must merge
    if rng.random() < 0.5 and a.num_states() < max_states:
        a = add_redundant_state(a, rng, shift=rng.randint(1, 3))
    return a


def minimize_properties(seed: int, tamper: Tamper | None = None) -> dict[str, bool]:
    a = random_deterministic(seed)
    m = _tamper(tamper, "minimize", minimize(a))
    mm = minimize(m) if is_deterministic(m) else m
    return {
        "minimize.deterministic": is_deterministic(m),
        "minimize.equivalent": equivalent(a, m, 6, delta=0.0),
        "minimize.minimal": m.num_states() == brute_force_class_count(a, 8),
        "minimize.no_equivalent_states": brute_force_class_count(m, 8) == m.num_states(),
        "minimize.idempotent": mm.num_states() == m.num_states(),
        "minimize.fewer_arcs": m.num_arcs() <= a.num_arcs(),
    }


def equivalence_pair(seed: int) -> tuple[Fst, Fst, str]:
    a = random_deterministic(seed)
    kind = ("push", "minimize", "mutated")[seed % 3]
    if kind == "push":
        b = push_weights(a)
    elif kind == "minimize":
        b = minimize(a)
    else:
        b = mutate_arc(a)
    return a, b, kind


def equivalence_properties(seed: int, tamper: Tamper | None = None) -> dict[str, bool]:
    a, b, _ = equivalence_pair(seed)
    b = _tamper(tamper, "equivalence", b)
    return {"equivalence.agrees": equivalence_pushed(a, b) == equivalent(a, b, 6)}


PROPERTY_GROUPS = (
    compose_join_properties,
    determinize_properties,
    push_properties,
    minimize_properties,
    equivalence_properties,
)


@dataclass
class Report:
    n: int
    seed: int
    checked: dict[str, int] = field(default_factory=dict)
    failures: dict[str, list[int]] = field(default_factory=dict)
    errors: dict[str, list[tuple[int, str]]] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not any(self.failures.values()) and not any(self.errors.values())

    def record(self, name: str, seed: int, passed: bool) -> None:
        self.checked[name] = self.checked.get(name, 0) + 1
        self.failures.setdefault(name, [])
        if not passed:
            self.failures[name].append(seed)

    def format(self) -> str:
        lines = [f"check: n={self.n} seed={self.seed}"]
        for name in sorted(self.checked):
            bad = self.failures.get(name, [])
            status = "FAIL" if bad else "PASS"
            line = f"{status} {name} ({self.checked[name] - len(bad)}/{self.checked[name]})"
            if bad:
                line += f" failing seeds: {sorted(bad)[:20]}"
            lines.append(line)
        for group, errs in sorted(self.errors.items()):
            for s, msg in errs:
                lines.append(f"ERROR {group} seed {s}: {msg}")
        return "\n".join(lines)


def check_suite(n: int, seed: int = 42, tamper: Tamper | None = None) -> Report:
    """Run every property group on ``n`` instances with seeds ``seed .. seed+n-1``."""
    if n < 1:
        raise ValueError("n must be at least 1")
    report = Report(n, seed)
    for group in PROPERTY_GROUPS:
        for s in range(seed, seed + n):
            try:
                results = group(s, tamper)
            except Exception as e:  # an exception is a failure of this instance
                report.errors.setdefault(group.__name__, []).append((s, f"{type(e).__name__}: {e}"))
                continue
            for name, passed in results.items():
                report.record(name, s, passed)
    return report
