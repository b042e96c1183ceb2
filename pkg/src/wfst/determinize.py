"""Weighted subset construction and a bounded twins-property check."""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from typing import Union

from .errors import NonDeterminable, UnsupportedError
from .fst import EPSILON, Arc, Fst, connect, is_deterministic
from .semiring import DEFAULT_DELTA, LOG, TROPICAL

DEFAULT_MAX_STATES = 10_000
DEFAULT_QUANT = 1e-9

Subset = tuple[tuple[int, float], ...]


def _subset_key(subset: Subset, quant: float):
    return tuple(
        (q, r if math.isinf(r) else round(r / quant)) for q, r in subset
    )


def _check_input(fst: Fst) -> None:
    if fst.ring is not TROPICAL and fst.ring is not LOG:
        raise UnsupportedError(
            f"determinization is only offered for the tropical and log rings, not {fst.ring.name}"
        )
    for _, arc in fst.all_arcs():
        if arc.ilabel != arc.olabel:
            raise UnsupportedError("determinization requires an acceptor (encode transducers first)")
        if arc.ilabel == EPSILON:
            raise UnsupportedError("determinization requires an epsilon-free input")


def determinize_with_subsets(
    fst: Fst, max_states: int = DEFAULT_MAX_STATES, quant: float = DEFAULT_QUANT
) -> tuple[Fst, list[Subset]]:
    """Determinize and also return the weighted subset behind each output state.

    Subsets hold ``(state, residual)`` pairs sorted by state. Residuals are
    compared on a grid of step ``quant``; the first residuals seen for a grid
    cell are the ones kept.
    """
    if max_states < 1:
        raise ValueError("max_states must be at least 1")
    _check_input(fst)
    ring = fst.ring
    out = Fst(ring, fst.isymbols, fst.osymbols)
    subsets: list[Subset] = []
    if not fst.initials:
        return out, subsets

    ids: dict[tuple, int] = {}
    queue: deque[int] = deque()

    def lookup(subset: Subset) -> int:
        key = _subset_key(subset, quant)
        if key in ids:
            return ids[key]
        if len(subsets) >= max_states:
            raise NonDeterminable(len(subsets) + 1, max_states)
        q = out.add_state()
        ids[key] = q
        subsets.append(subset)
        rho = ring.sum(ring.times(v, fst.finals[p]) for p, v in subset if p in fst.finals)
        if not ring.is_zero(rho):
            out.set_final(q, rho)
        queue.append(q)
        return q

    # Factor the common initial weight out so the start subset is normalized too;
    # with a single initial state of weight one this is {(i, 1)} as usual.
    lam = ring.sum(fst.initials.values())
    start = tuple(sorted((q, ring.divide(lam, w)) for q, w in fst.initials.items()))
    out.set_initial(lookup(start), lam)

    while queue:
        src = queue.popleft()
        subset = subsets[src]
        # label -> destination state -> accumulated v (x) w
        moves: dict[int, dict[int, float]] = {}
        for p, v in subset:
            for arc in fst.arcs(p):
                dests = moves.setdefault(arc.ilabel, {})
                vw = ring.times(v, arc.weight)
                q = arc.nextstate
                dests[q] = ring.plus(dests[q], vw) if q in dests else vw
        for label in sorted(moves):
            dests = moves[label]
            w_new = ring.sum(dests.values())
            if ring.is_zero(w_new):
                continue
            residuals = tuple(
                sorted((q, ring.divide(w_new, vw)) for q, vw in dests.items())
            )
            dst = lookup(residuals)
            out.add_arc(src, Arc(label, label, w_new, dst))
    return out, subsets


def determinize(
    fst: Fst, max_states: int = DEFAULT_MAX_STATES, quant: float = DEFAULT_QUANT
) -> Fst:
    """Weighted determinization of an epsilon-free tropical or log acceptor.

    Raises :class:`NonDeterminable` once more than ``max_states`` subsets have
    been created, which happens for inputs without the twins property.
    """
    return determinize_with_subsets(fst, max_states, quant)[0]


# -- twins property --


@dataclass(frozen=True)
class HasTwins:
    pairs_checked: int


@dataclass(frozen=True)
class ViolationWitness:
    states: tuple[int, int]
    access: tuple[int, ...]
    cycle: tuple[int, ...]
    weights: tuple[float, float]


@dataclass(frozen=True)
class Inconclusive:
    pairs_checked: int
    reason: str


TwinsResult = Union[HasTwins, ViolationWitness, Inconclusive]


def _sibling_pairs(fst: Fst, max_len: int):
    """Pairs of states reachable by a common string, with one shortest such string.

    Also reports whether the breadth-first search was cut off by ``max_len``.
    """
    access: dict[tuple[int, int], tuple[int, ...]] = {}
    frontier = []
    for p in fst.initials:
        for q in fst.initials:
            if (p, q) not in access:
                access[(p, q)] = ()
                frontier.append((p, q))
    truncated = False
    for depth in range(max_len + 1):
        nxt = []
        for p, q in frontier:
            for a1 in fst.arcs(p):
                for a2 in fst.arcs(q):
                    if a1.ilabel != a2.ilabel:
                        continue
                    pair = (a1.nextstate, a2.nextstate)
                    if pair in access:
                        continue
                    if depth == max_len:
                        truncated = True
                        continue
                    access[pair] = access[(p, q)] + (a1.ilabel,)
                    nxt.append(pair)
        frontier = nxt
        if not frontier:
            break
    return access, truncated


def _cycle_weights(fst: Fst, p: int, q: int, max_len: int):
    """For each label string v (1 <= |v| <= max_len) with cycles at both p and q,
    the minimum cycle weight at p and at q."""
    best: dict[tuple[int, ...], list[float]] = {}
    stack = [(p, q, (), 0.0, 0.0)]
    while stack:
        s1, s2, v, w1, w2 = stack.pop()
        if v and s1 == p and s2 == q:
            if v in best:
                cur = best[v]
                cur[0], cur[1] = min(cur[0], w1), min(cur[1], w2)
            else:
                best[v] = [w1, w2]
        if len(v) == max_len:
            continue
        for a1 in fst.arcs(s1):
            for a2 in fst.arcs(s2):
                if a1.ilabel == a2.ilabel:
                    stack.append(
                        (a1.nextstate, a2.nextstate, v + (a1.ilabel,), w1 + a1.weight, w2 + a2.weight)
                    )
    return best


def twins_check_bounded(fst: Fst, max_len: int) -> TwinsResult:
    """Search for non-twin siblings using strings of length at most ``max_len``.

    Returns ``HasTwins`` only when the sibling-pair search closed within the
    bound and ``max_len`` covers the largest component of the pair graph, so
    that every simple cycle through two distinct states was examined.
    """
    if fst.ring is not TROPICAL:
        raise UnsupportedError("the twins check is defined for the tropical ring")
    fst = connect(fst)
    if is_deterministic(fst):
        return HasTwins(0)
    access, truncated = _sibling_pairs(fst, max_len)
    for (p, q) in sorted(access, key=lambda pq: (len(access[pq]), pq)):
        if p == q:
            continue
        for v, (w1, w2) in sorted(_cycle_weights(fst, p, q, max_len).items()):
            if abs(w1 - w2) > DEFAULT_DELTA:
                return ViolationWitness((p, q), access[(p, q)], v, (w1, w2))
    checked = len(access)
    if truncated:
        return Inconclusive(checked, "sibling pairs beyond max_len")
    if max_len < _longest_simple_cycle_bound(fst, access):
        return Inconclusive(checked, "cycles longer than max_len not examined")
    return HasTwins(checked)


def _longest_simple_cycle_bound(fst: Fst, pairs) -> int:
    """Size of the largest strongly connected component of the sibling-pair
    graph that contains an off-diagonal pair and a cycle.

    A simple cycle never leaves its component, so examining cycle strings up
    to this length covers every simple cycle through a pair of distinct states.
    """
    succ: dict[tuple[int, int], set[tuple[int, int]]] = {pq: set() for pq in pairs}
    for p, q in pairs:
        for a1 in fst.arcs(p):
            for a2 in fst.arcs(q):
                if a1.ilabel == a2.ilabel and (a1.nextstate, a2.nextstate) in succ:
                    succ[(p, q)].add((a1.nextstate, a2.nextstate))
    bound = 0
    for comp in _sccs(succ):
        cyclic = len(comp) > 1 or any(v in succ[v] for v in comp)
        if cyclic and any(p != q for p, q in comp):
            bound = max(bound, len(comp))
    return bound


def _sccs(succ: dict) -> list[list]:
    """Tarjan's algorithm, iterative."""
    index: dict = {}
    low: dict = {}
    on_stack: set = set()
    stack: list = []
    out: list[list] = []
    for root in succ:
        if root in index:
            continue
        work = [(root, iter(succ[root]))]
        index[root] = low[root] = len(index)
        stack.append(root)
        on_stack.add(root)
        while work:
            v, it = work[-1]
            for w in it:
                if w not in index:
                    index[w] = low[w] = len(index)
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(succ[w])))
                    break
                if w in on_stack:
                    low[v] = min(low[v], index[w])
            else:
                work.pop()
                if work:
                    low[work[-1][0]] = min(low[work[-1][0]], low[v])
                if low[v] == index[v]:
                    comp = []
                    while True:
                        w = stack.pop()
                        on_stack.discard(w)
                        comp.append(w)
                        if w == v:
                            break
                    out.append(comp)
    return out
