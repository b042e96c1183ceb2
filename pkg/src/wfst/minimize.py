"""Weighted minimization: push, then unweighted partition refinement."""

from __future__ import annotations

import math
from collections import deque

from .fst import Arc, Fst, check_same_ring, connect, is_deterministic
from .reweight import push_weights
from .semiring import DEFAULT_DELTA

DEFAULT_QUANT = 1e-9


def _quantize(w: float, quant: float):
    return w if math.isinf(w) else round(w / quant)


def refine_partition(fst: Fst, quant: float = DEFAULT_QUANT) -> list[int]:
    """Coarsest stable partition of a deterministic fst, as a block id per state.

    Each arc is an opaque symbol (ilabel, olabel, quantized weight); the
    initial partition separates states by quantized final weight (non-final
    states form their own class). Refinement follows Hopcroft: splitters are
    (block, symbol) pairs and only the smaller half of a split block is
    queued when the pair was not already pending.
    """
    n = fst.num_states()
    if n == 0:
        return []
    symbols: dict[tuple, int] = {}
    inverse: list[dict[int, list[int]]] = []  # symbol -> target -> sources
    for q, arc in fst.all_arcs():
        key = (arc.ilabel, arc.olabel, _quantize(arc.weight, quant))
        if key not in symbols:
            symbols[key] = len(symbols)
            inverse.append({})
        inverse[symbols[key]].setdefault(arc.nextstate, []).append(q)

    classes: dict[tuple, int] = {}
    block_of = [0] * n
    blocks: list[set[int]] = []
    for q in range(n):
        key = ("final", _quantize(fst.finals[q], quant)) if q in fst.finals else ("nonfinal",)
        if key not in classes:
            classes[key] = len(blocks)
            blocks.append(set())
        block_of[q] = classes[key]
        blocks[block_of[q]].add(q)

    n_symbols = len(symbols)
    pending = deque((b, a) for b in range(len(blocks)) for a in range(n_symbols))
    in_pending = set(pending)
    while pending:
        splitter = pending.popleft()
        in_pending.discard(splitter)
        b, a = splitter
        sources: set[int] = set()
        for t in blocks[b]:
            sources.update(inverse[a].get(t, ()))
        touched: dict[int, list[int]] = {}
        for s in sources:
            touched.setdefault(block_of[s], []).append(s)
        for y, members in touched.items():
            if len(members) == len(blocks[y]):
                continue
            inside = set(members)
            outside = blocks[y] - inside
            blocks[y] = inside
            new = len(blocks)
            blocks.append(outside)
            for s in outside:
                block_of[s] = new
            smaller = y if len(inside) <= len(outside) else new
            for c in range(n_symbols):
                if (y, c) in in_pending:
                    in_pending.add((new, c))
                    pending.append((new, c))
                elif (smaller, c) not in in_pending:
                    in_pending.add((smaller, c))
                    pending.append((smaller, c))
    return block_of


def _quotient(fst: Fst, block_of: list[int]) -> Fst:
    """Merge states per ``block_of``; blocks are numbered breadth-first from the start."""
    rep: dict[int, int] = {}
    for q, b in enumerate(block_of):
        rep.setdefault(b, q)
    out = Fst(fst.ring, fst.isymbols, fst.osymbols)
    ids: dict[int, int] = {}
    queue: deque[int] = deque()

    def lookup(b: int) -> int:
        if b not in ids:
            ids[b] = out.add_state()
            queue.append(b)
        return ids[b]

    for q, lam in fst.initials.items():
        out.set_initial(lookup(block_of[q]), lam)
    while queue:
        b = queue.popleft()
        q = rep[b]
        src = ids[b]
        if q in fst.finals:
            out.set_final(src, fst.finals[q])
        for arc in fst.arcs(q):
            out.add_arc(src, arc._replace(nextstate=lookup(block_of[arc.nextstate])))
    return out


def minimize(fst: Fst, quant: float = DEFAULT_QUANT) -> Fst:
    """Minimal deterministic fst equivalent to a deterministic input.

    Transducers are handled with each arc's (ilabel, olabel) treated as one
    symbol, so determinism here means input-label determinism of the arcs.
    """
    if not is_deterministic(fst):
        raise ValueError("minimize requires a deterministic input")
    trimmed = connect(fst)
    if trimmed.num_states() == 0:
        return trimmed
    pushed = push_weights(trimmed)
    return _quotient(pushed, refine_partition(pushed, quant))


def isomorphic(a: Fst, b: Fst, delta: float = DEFAULT_DELTA) -> bool:
    """Structural isomorphism of two deterministic fsts, weights within ``delta``.

    Runs a lock-step breadth-first walk from the two start states; determinism
    makes the state bijection forced, so no backtracking is needed.
    """
    ring = check_same_ring(a, b)
    if a.num_states() != b.num_states() or a.num_arcs() != b.num_arcs():
        return False
    if a.num_states() == 0:
        return True
    sa, sb = a.start, b.start
    if sa is None or sb is None:
        return sa is None and sb is None
    if not ring.approx_eq(a.initials[sa], b.initials[sb], delta):
        return False
    fwd, bwd = {sa: sb}, {sb: sa}
    queue = deque([(sa, sb)])
    while queue:
        p, q = queue.popleft()
        if (p in a.finals) != (q in b.finals):
            return False
        if p in a.finals and not ring.approx_eq(a.finals[p], b.finals[q], delta):
            return False
        arcs_b = {arc.ilabel: arc for arc in b.arcs(q)}
        if len(arcs_b) != len(a.arcs(p)):
            return False
        for x in a.arcs(p):
            y: Arc | None = arcs_b.get(x.ilabel)
            if y is None or x.olabel != y.olabel:
                return False
            if not ring.approx_eq(x.weight, y.weight, delta):
                return False
            ta, tb = x.nextstate, y.nextstate
            if ta in fwd or tb in bwd:
                if fwd.get(ta) != tb or bwd.get(tb) != ta:
                    return False
            else:
                fwd[ta], bwd[tb] = tb, ta
                queue.append((ta, tb))
    return True


def equivalence_pushed(a: Fst, b: Fst, delta: float = DEFAULT_DELTA) -> bool:
    """Equivalence of two deterministic fsts by comparing their pushed minimal forms."""
    check_same_ring(a, b)
    for f in (a, b):
        if not is_deterministic(f):
            raise ValueError("equivalence_pushed requires deterministic inputs")
    return isomorphic(minimize(a), minimize(b), delta)
