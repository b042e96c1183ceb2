"""Shortest distance to the final states, weight pushing and best paths."""

from __future__ import annotations

from collections import deque

from .errors import DomainError, NoPathError, UnsupportedError
from .fst import Arc, Fst, connect
from .oracle import is_acyclic


def _reverse_topological(fst: Fst) -> list[int]:
    order: list[int] = []
    state = [0] * fst.num_states()  # 0 unseen, 1 on stack, 2 done
    for root in fst.states():
        if state[root]:
            continue
        stack = [(root, iter(fst.arcs(root)))]
        state[root] = 1
        while stack:
            q, it = stack[-1]
            for arc in it:
                n = arc.nextstate
                if state[n] == 0:
                    state[n] = 1
                    stack.append((n, iter(fst.arcs(n))))
                    break
            else:
                stack.pop()
                state[q] = 2
                order.append(q)
    return order


def _distance_acyclic(fst: Fst) -> list[float]:
    ring = fst.ring
    d = [ring.zero] * fst.num_states()
    for q in _reverse_topological(fst):
        total = fst.final(q)
        for arc in fst.arcs(q):
            total = ring.plus(total, ring.times(arc.weight, d[arc.nextstate]))
        d[q] = total
    return d


def _distance_relaxation(fst: Fst) -> list[float]:
    """Label-correcting relaxation over reversed arcs (tropical only)."""
    ring = fst.ring
    n = fst.num_states()
    preds: list[list[tuple[int, float]]] = [[] for _ in range(n)]
    for p, arc in fst.all_arcs():
        preds[arc.nextstate].append((p, arc.weight))
    d = [fst.final(q) for q in range(n)]
    queue = deque(q for q in range(n) if q in fst.finals)
    queued = set(queue)
    limit = n * max(1, fst.num_arcs())
    relaxations = 0
    while queue:
        q = queue.popleft()
        queued.discard(q)
        for p, w in preds[q]:
            cand = ring.times(w, d[q])
            if cand < d[p]:
                d[p] = cand
                relaxations += 1
                if relaxations > limit:
                    raise DomainError("negative-weight cycle: shortest distance undefined")
                if p not in queued:
                    queued.add(p)
                    queue.append(p)
    return d


def shortest_distance_to_final(fst: Fst) -> list[float]:
    """``d[q]``: the sum over all paths from ``q`` to a final state, final weight included."""
    if fst.ring.idempotent:
        return _distance_relaxation(fst)
    if not is_acyclic(fst):
        raise UnsupportedError(
            f"shortest distance in the {fst.ring.name} ring needs an acyclic input"
        )
    return _distance_acyclic(fst)


def push_weights(fst: Fst) -> Fst:
    """Reweight towards the initial states, preserving every string's weight.

    The input is trimmed first. Afterwards each state's final weight plus the
    weights of its outgoing arcs sum to one.
    """
    fst = connect(fst)
    ring = fst.ring
    d = shortest_distance_to_final(fst)
    out = Fst(ring, fst.isymbols, fst.osymbols)
    out.add_states(fst.num_states())
    for q in fst.states():
        for arc in fst.arcs(q):
            w = ring.divide(d[q], ring.times(arc.weight, d[arc.nextstate]))
            out.add_arc(q, arc._replace(weight=w))
        if q in fst.finals:
            out.set_final(q, ring.divide(d[q], fst.finals[q]))
    for q, lam in fst.initials.items():
        out.set_initial(q, ring.times(lam, d[q]))
    return out


def shortest_path(fst: Fst) -> Fst:
    """The single best successful path as a linear transducer (tropical only)."""
    if not fst.ring.idempotent:
        raise UnsupportedError("shortest path needs the tropical ring")
    ring = fst.ring
    n = fst.num_states()
    dist = [ring.zero] * n
    back: list[tuple[int, Arc] | None] = [None] * n
    queue = deque()
    for q, lam in fst.initials.items():
        dist[q] = lam
        queue.append(q)
    queued = set(queue)
    limit = n * max(1, fst.num_arcs())
    relaxations = 0
    while queue:
        q = queue.popleft()
        queued.discard(q)
        for arc in fst.arcs(q):
            cand = ring.times(dist[q], arc.weight)
            if cand < dist[arc.nextstate]:
                dist[arc.nextstate] = cand
                back[arc.nextstate] = (q, arc)
                relaxations += 1
                if relaxations > limit:
                    raise DomainError("negative-weight cycle: shortest path undefined")
                if arc.nextstate not in queued:
                    queued.add(arc.nextstate)
                    queue.append(arc.nextstate)
    best, best_w = None, ring.zero
    for q, rho in fst.finals.items():
        w = ring.times(dist[q], rho)
        if w < best_w:
            best, best_w = q, w
    if best is None:
        raise NoPathError("no successful path")
    path: list[Arc] = []
    q = best
    while back[q] is not None:
        p, arc = back[q]
        path.append(arc)
        q = p
    path.reverse()
    out = Fst(ring, fst.isymbols, fst.osymbols)
    s = out.add_state()
    out.set_start(s)
    for arc in path:
        t = out.add_state()
        out.add_arc(s, arc._replace(nextstate=t))
        s = t
    out.set_final(s, ring.times(fst.initials[q], fst.finals[best]))
    return out
