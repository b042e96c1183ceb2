"""Pairwise composition with an epsilon filter.

Each operand is extended with virtual moves before matching. On the left,
an arc writing epsilon is marked ``LEFT_EPS`` and every state gets a virtual
stay-put loop marked ``LEFT_STAY``; on the right, an arc reading epsilon is
marked ``RIGHT_EPS`` and the loop is ``RIGHT_STAY``. A pair of (left, right)
moves is then admitted by the three-state filter:

    move                         allowed from   next filter state
    symbol x : x                 0, 1, 2        0
    LEFT_EPS : RIGHT_EPS         0              0   (both advance on epsilon)
    LEFT_EPS : RIGHT_STAY        0, 1           1   (left advances alone)
    LEFT_STAY : RIGHT_EPS        0, 2           2   (right advances alone)

Between two symbol matches, ``a`` left epsilons and ``b`` right epsilons can
therefore only be interleaved one way: ``min(a, b)`` joint moves followed by
the remainder on a single side.
"""

from __future__ import annotations

from collections import deque

from .errors import CompositionError
from .fst import EPSILON, Arc, Fst, check_same_ring, connect
from .oracle import count_matching_paths  # noqa: F401  (re-exported)

LEFT_EPS, LEFT_STAY, RIGHT_EPS, RIGHT_STAY = -1, -2, -3, -4

_FILTER = {
    (LEFT_EPS, RIGHT_EPS): ((0,), 0),
    (LEFT_EPS, RIGHT_STAY): ((0, 1), 1),
    (LEFT_STAY, RIGHT_EPS): ((0, 2), 2),
}

# Without the filter every combination is admitted from the single state 0.
_NO_FILTER = {
    (LEFT_EPS, RIGHT_EPS): ((0,), 0),
    (LEFT_EPS, RIGHT_STAY): ((0,), 0),
    (LEFT_STAY, RIGHT_EPS): ((0,), 0),
}


def _left_moves(fst: Fst, q: int):
    """(match label, arc) pairs for the left operand, including the stay loop."""
    moves = [(LEFT_STAY, Arc(EPSILON, EPSILON, fst.ring.one, q))]
    for arc in fst.arcs(q):
        moves.append((LEFT_EPS if arc.olabel == EPSILON else arc.olabel, arc))
    return moves


def _right_index(fst: Fst, q: int):
    index: dict[int, list[Arc]] = {RIGHT_STAY: [Arc(EPSILON, EPSILON, fst.ring.one, q)]}
    for arc in fst.arcs(q):
        key = RIGHT_EPS if arc.ilabel == EPSILON else arc.ilabel
        index.setdefault(key, []).append(arc)
    return index


def _admit(table, f: int, lkey: int, rkey: int) -> int | None:
    if lkey >= 0:
        return 0 if lkey == rkey else None
    entry = table.get((lkey, rkey))
    if entry is None or f not in entry[0]:
        return None
    return entry[1]


def compose_raw(a: Fst, b: Fst, epsilon_filter: bool = True):
    """Untrimmed composition; also returns the (q1, q2, filter) tuple of each state."""
    ring = check_same_ring(a, b)
    left_eps = any(arc.olabel == EPSILON for _, arc in a.all_arcs())
    right_eps = any(arc.ilabel == EPSILON for _, arc in b.all_arcs())
    if left_eps and right_eps and not ring.idempotent:
        raise CompositionError(
            f"epsilon on both matched sides is not supported in the {ring.name} ring"
        )
    table = _FILTER if epsilon_filter else _NO_FILTER

    out = Fst(ring, a.isymbols, b.osymbols)
    ids: dict[tuple[int, int, int], int] = {}
    tuples: list[tuple[int, int, int]] = []
    queue: deque[tuple[int, int, int]] = deque()

    def lookup(key):
        if key not in ids:
            ids[key] = out.add_state()
            tuples.append(key)
            queue.append(key)
        return ids[key]

    for q1, w1 in a.initials.items():
        for q2, w2 in b.initials.items():
            out.set_initial(lookup((q1, q2, 0)), ring.times(w1, w2))

    right_cache: dict[int, dict[int, list[Arc]]] = {}
    while queue:
        key = queue.popleft()
        q1, q2, f = key
        src = ids[key]
        if q1 in a.finals and q2 in b.finals:
            out.set_final(src, ring.times(a.finals[q1], b.finals[q2]))
        if q2 not in right_cache:
            right_cache[q2] = _right_index(b, q2)
        rindex = right_cache[q2]
        for lkey, e1 in _left_moves(a, q1):
            if lkey >= 0:
                candidates = ((lkey, e2) for e2 in rindex.get(lkey, ()))
            else:
                candidates = (
                    (rkey, e2)
                    for rkey in (RIGHT_EPS, RIGHT_STAY)
                    for e2 in rindex.get(rkey, ())
                )
            for rkey, e2 in candidates:
                nf = _admit(table, f, lkey, rkey)
                if nf is None:
                    continue
                dst = lookup((e1.nextstate, e2.nextstate, nf))
                out.add_arc(
                    src, Arc(e1.ilabel, e2.olabel, ring.times(e1.weight, e2.weight), dst)
                )
    return out, tuples


def compose(a: Fst, b: Fst, epsilon_filter: bool = True) -> Fst:
    """Composition ``a ∘ b``: weight of (x, y) is the sum over z of a(x, z) b(z, y).

    ``epsilon_filter=False`` gives the naive product that may contain several
    paths for one epsilon interleaving; it exists for comparison only.
    """
    out, _ = compose_raw(a, b, epsilon_filter)
    return connect(out)
