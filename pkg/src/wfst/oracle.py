"""Brute-force path-enumeration semantics.

Everything here walks individual paths and never shares work between them,
so it can serve as ground truth for the optimizing algorithms. Path length is
capped at ``|Q| * (len(x) + len(y) + 1)`` arcs; any path reaching the cap has
traversed an epsilon cycle. Under an idempotent ring such cycles cannot
improve the result (for non-negative weights) and are cut; in other rings the
sum would be infinite and the oracle refuses.
"""

from __future__ import annotations

from typing import NamedTuple, Sequence

from .errors import OracleInapplicable, UnsupportedError
from .fst import EPSILON, Fst, check_same_ring
from .semiring import DEFAULT_DELTA

MAX_SWEEP_PAIRS = 10**6


class StringPair(NamedTuple):
    input: tuple[int, ...]
    output: tuple[int, ...]


def _cap_hit(fst: Fst) -> None:
    if not fst.ring.idempotent:
        raise OracleInapplicable(
            f"epsilon cycle reached the path-length cap in the {fst.ring.name} ring"
        )


def _matching_paths(fst: Fst, x: Sequence[int], y: Sequence[int], cap: int | None):
    """Yield the weight of every successful path labelled (x, y)."""
    ring = fst.ring
    nx, ny = len(x), len(y)
    stack = [(q, 0, 0, w, 0) for q, w in reversed(list(fst.initials.items()))]
    while stack:
        q, i, j, w, depth = stack.pop()
        if i == nx and j == ny and q in fst.finals:
            yield ring.times(w, fst.finals[q])
        for arc in reversed(fst.arcs(q)):
            if arc.ilabel != EPSILON:
                if i == nx or x[i] != arc.ilabel:
                    continue
                ni = i + 1
            else:
                ni = i
            if arc.olabel != EPSILON:
                if j == ny or y[j] != arc.olabel:
                    continue
                nj = j + 1
            else:
                nj = j
            if cap is not None and depth + 1 > cap:
                _cap_hit(fst)
                continue
            stack.append((arc.nextstate, ni, nj, ring.times(w, arc.weight), depth + 1))


def oracle_weight(fst: Fst, x: Sequence[int], y: Sequence[int] | None = None) -> float:
    """Sum over all successful paths labelled ``x:y`` (``y`` defaults to ``x``)."""
    y = x if y is None else y
    if any(s == EPSILON for s in x) or any(s == EPSILON for s in y):
        raise ValueError("query strings must not contain epsilon")
    cap = fst.num_states() * (len(x) + len(y) + 1)
    return fst.ring.sum(_matching_paths(fst, tuple(x), tuple(y), cap))


def relation(fst: Fst, max_in: int, max_out: int | None = None) -> dict[StringPair, float]:
    """Every string pair within the bounds with a non-zero weight, and its weight."""
    max_out = max_in if max_out is None else max_out
    ring = fst.ring
    cap = fst.num_states() * (max_in + max_out + 1)
    out: dict[StringPair, float] = {}
    stack = [(q, (), (), w, 0) for q, w in reversed(list(fst.initials.items()))]
    while stack:
        q, xs, ys, w, depth = stack.pop()
        if q in fst.finals:
            key = StringPair(xs, ys)
            pw = ring.times(w, fst.finals[q])
            out[key] = ring.plus(out[key], pw) if key in out else pw
        for arc in reversed(fst.arcs(q)):
            nx = xs if arc.ilabel == EPSILON else xs + (arc.ilabel,)
            ny = ys if arc.olabel == EPSILON else ys + (arc.olabel,)
            if len(nx) > max_in or len(ny) > max_out:
                continue
            if depth + 1 > cap:
                _cap_hit(fst)
                continue
            stack.append((arc.nextstate, nx, ny, ring.times(w, arc.weight), depth + 1))
    return {k: v for k, v in out.items() if not ring.is_zero(v)}


def alphabet(fst: Fst, side: str = "both") -> set[int]:
    labels = set()
    for _, arc in fst.all_arcs():
        if side in ("input", "both"):
            labels.add(arc.ilabel)
        if side in ("output", "both"):
            labels.add(arc.olabel)
    labels.discard(EPSILON)
    return labels


def _sweep_size(n_symbols: int, max_len: int) -> int:
    return sum(n_symbols**k for k in range(max_len + 1))


def equivalent(a: Fst, b: Fst, max_len: int, delta: float = DEFAULT_DELTA) -> bool:
    """Bounded equivalence: equal weight on every string pair up to ``max_len``.

    For two acceptors only the diagonal pairs (x, x) can carry weight, so only
    those count towards the sweep size.
    """
    ring = check_same_ring(a, b)
    acceptors = a.is_acceptor() and b.is_acceptor()
    sigma = len(alphabet(a) | alphabet(b))
    size = _sweep_size(sigma, max_len)
    if not acceptors:
        size *= size
    if size > MAX_SWEEP_PAIRS:
        raise ValueError(
            f"exhaustive sweep over {size} string pairs exceeds {MAX_SWEEP_PAIRS}"
        )
    ra = relation(a, max_len)
    rb = relation(b, max_len)
    for key in ra.keys() | rb.keys():
        if not ring.approx_eq(ra.get(key, ring.zero), rb.get(key, ring.zero), delta):
            return False
    return True


def is_acyclic(fst: Fst) -> bool:
    indegree = [0] * fst.num_states()
    for _, arc in fst.all_arcs():
        indegree[arc.nextstate] += 1
    ready = [q for q in fst.states() if indegree[q] == 0]
    seen = 0
    while ready:
        q = ready.pop()
        seen += 1
        for arc in fst.arcs(q):
            indegree[arc.nextstate] -= 1
            if indegree[arc.nextstate] == 0:
                ready.append(arc.nextstate)
    return seen == fst.num_states()


def count_matching_paths(fst: Fst, x: Sequence[int], y: Sequence[int] | None = None) -> int:
    """Number of distinct successful paths labelled ``x:y`` in an acyclic fst."""
    if not is_acyclic(fst):
        raise UnsupportedError("count_matching_paths requires an acyclic fst")
    y = x if y is None else y
    return sum(1 for _ in _matching_paths(fst, tuple(x), tuple(y), None))
