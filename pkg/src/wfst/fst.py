"""Transducer data model and structural operations.

An acceptor is a transducer whose arcs all have ``ilabel == olabel``. Label 0
is epsilon. State ids are dense integers in insertion order.
"""

from __future__ import annotations

from collections import deque
from typing import Iterator, NamedTuple

from .errors import RingMismatchError
from .semiring import TROPICAL, Semiring, get_ring

EPSILON = 0


class Arc(NamedTuple):
    ilabel: int
    olabel: int
    weight: float
    nextstate: int


class Fst:
    """Mutable weighted transducer.

    ``initials`` and ``finals`` map state ids to the initial weight and the
    final weight respectively; a state absent from the map has weight zero.
    Symbol tables are optional and only used for text I/O.
    """

    def __init__(self, ring: Semiring | str = TROPICAL, isymbols=None, osymbols=None):
        self.ring = get_ring(ring)
        self._arcs: list[list[Arc]] = []
        self.initials: dict[int, float] = {}
        self.finals: dict[int, float] = {}
        self.isymbols = isymbols
        self.osymbols = osymbols

    # -- construction --

    def add_state(self) -> int:
        self._arcs.append([])
        return len(self._arcs) - 1

    def add_states(self, n: int) -> list[int]:
        return [self.add_state() for _ in range(n)]

    def _check_state(self, q: int) -> None:
        if not 0 <= q < len(self._arcs):
            raise IndexError(f"unknown state {q} (fst has {len(self._arcs)} states)")

    def add_arc(self, src: int, arc: Arc) -> None:
        self._check_state(src)
        self._check_state(arc.nextstate)
        if arc.ilabel < 0 or arc.olabel < 0:
            raise ValueError("labels must be non-negative")
        self._arcs[src].append(arc._replace(weight=self.ring.check(arc.weight)))

    def set_arcs(self, src: int, arcs: list[Arc]) -> None:
        self._check_state(src)
        self._arcs[src] = []
        for arc in arcs:
            self.add_arc(src, arc)

    def set_initial(self, q: int, weight: float | None = None) -> None:
        self._check_state(q)
        w = self.ring.one if weight is None else self.ring.check(weight)
        if self.ring.is_zero(w):
            self.initials.pop(q, None)
        else:
            self.initials[q] = w

    def set_start(self, q: int) -> None:
        """Make ``q`` the only initial state, with weight one."""
        self.initials.clear()
        self.set_initial(q)

    def set_final(self, q: int, weight: float | None = None) -> None:
        self._check_state(q)
        w = self.ring.one if weight is None else self.ring.check(weight)
        if self.ring.is_zero(w):
            self.finals.pop(q, None)
        else:
            self.finals[q] = w

    # -- access --

    def num_states(self) -> int:
        return len(self._arcs)

    def states(self) -> range:
        return range(len(self._arcs))

    def arcs(self, q: int) -> list[Arc]:
        return self._arcs[q]

    def num_arcs(self, q: int | None = None) -> int:
        if q is not None:
            return len(self._arcs[q])
        return sum(len(a) for a in self._arcs)

    def all_arcs(self) -> Iterator[tuple[int, Arc]]:
        for q, arcs in enumerate(self._arcs):
            for arc in arcs:
                yield q, arc

    def final(self, q: int) -> float:
        return self.finals.get(q, self.ring.zero)

    def initial(self, q: int) -> float:
        return self.initials.get(q, self.ring.zero)

    @property
    def start(self) -> int | None:
        """The unique initial state, or None when there is none."""
        if not self.initials:
            return None
        if len(self.initials) > 1:
            raise ValueError("fst has several initial states")
        return next(iter(self.initials))

    def is_acceptor(self) -> bool:
        return all(a.ilabel == a.olabel for _, a in self.all_arcs())

    def copy(self) -> "Fst":
        out = Fst(self.ring, self.isymbols, self.osymbols)
        out._arcs = [list(a) for a in self._arcs]
        out.initials = dict(self.initials)
        out.finals = dict(self.finals)
        return out

    def same_structure(self, other: "Fst") -> bool:
        """Arc-for-arc identity, including ids, order and exact weights."""
        return (
            self.ring is other.ring
            and self._arcs == other._arcs
            and self.initials == other.initials
            and self.finals == other.finals
        )

    def __repr__(self):
        return (
            f"<Fst {self.ring.name} states={self.num_states()} arcs={self.num_arcs()} "
            f"initials={len(self.initials)} finals={len(self.finals)}>"
        )


def check_same_ring(*fsts: Fst) -> Semiring:
    ring = fsts[0].ring
    for f in fsts[1:]:
        if f.ring is not ring:
            raise RingMismatchError(f"{ring.name} fst combined with {f.ring.name} fst")
    return ring


def is_deterministic(fst: Fst) -> bool:
    if len(fst.initials) != 1:
        return False
    for q in fst.states():
        seen = set()
        for arc in fst.arcs(q):
            if arc.ilabel == EPSILON or arc.ilabel in seen:
                return False
            seen.add(arc.ilabel)
    return True


def accessible(fst: Fst) -> set[int]:
    seen = set(fst.initials)
    queue = deque(seen)
    while queue:
        q = queue.popleft()
        for arc in fst.arcs(q):
            if arc.nextstate not in seen:
                seen.add(arc.nextstate)
                queue.append(arc.nextstate)
    return seen


def coaccessible(fst: Fst) -> set[int]:
    preds: list[list[int]] = [[] for _ in fst.states()]
    for q, arc in fst.all_arcs():
        preds[arc.nextstate].append(q)
    seen = set(fst.finals)
    queue = deque(seen)
    while queue:
        q = queue.popleft()
        for p in preds[q]:
            if p not in seen:
                seen.add(p)
                queue.append(p)
    return seen


def subset(fst: Fst, keep) -> Fst:
    """Induced sub-automaton on ``keep``; survivors keep their relative order."""
    old_to_new = {}
    out = Fst(fst.ring, fst.isymbols, fst.osymbols)
    for q in fst.states():
        if q in keep:
            old_to_new[q] = out.add_state()
    for q, new in old_to_new.items():
        out._arcs[new] = [
            a._replace(nextstate=old_to_new[a.nextstate])
            for a in fst.arcs(q)
            if a.nextstate in old_to_new
        ]
    out.initials = {old_to_new[q]: w for q, w in fst.initials.items() if q in old_to_new}
    out.finals = {old_to_new[q]: w for q, w in fst.finals.items() if q in old_to_new}
    return out


def connect(fst: Fst) -> Fst:
    """Copy of ``fst`` restricted to states that are both accessible and co-accessible."""
    return subset(fst, accessible(fst) & coaccessible(fst))


def encode(fst: Fst, table: list[tuple[int, int]] | None = None):
    """Turn each (ilabel, olabel) pair into a single acceptor label.

    Returns the acceptor and the decoding table, where ``table[k]`` is the
    pair behind label ``k``. The pair (0, 0) keeps label 0. Passing the table
    from an earlier call extends it, so two fsts can share one encoding.
    """
    if table is None:
        table = [(EPSILON, EPSILON)]
    index = {pair: k for k, pair in enumerate(table)}
    out = fst.copy()
    out.isymbols = out.osymbols = None
    for q in out.states():
        new_arcs = []
        for arc in out.arcs(q):
            key = (arc.ilabel, arc.olabel)
            if key not in index:
                index[key] = len(table)
                table.append(key)
            k = index[key]
            new_arcs.append(Arc(k, k, arc.weight, arc.nextstate))
        out._arcs[q] = new_arcs
    return out, table


def decode(fst: Fst, table: list[tuple[int, int]], isymbols=None, osymbols=None) -> Fst:
    out = fst.copy()
    out.isymbols, out.osymbols = isymbols, osymbols
    for q in out.states():
        out._arcs[q] = [
            Arc(*table[a.ilabel], a.weight, a.nextstate) for a in out.arcs(q)
        ]
    return out


def project(fst: Fst, side: str = "input") -> Fst:
    """Acceptor keeping only the input (or output) labels."""
    if side not in ("input", "output"):
        raise ValueError("side must be 'input' or 'output'")
    out = fst.copy()
    for q in out.states():
        if side == "input":
            out._arcs[q] = [a._replace(olabel=a.ilabel) for a in out.arcs(q)]
        else:
            out._arcs[q] = [a._replace(ilabel=a.olabel) for a in out.arcs(q)]
    if side == "input":
        out.osymbols = out.isymbols
    else:
        out.isymbols = out.osymbols
    return out


def linear_fst(labels, ring: Semiring = TROPICAL, olabels=None, weight=None) -> Fst:
    """Single-path transducer reading ``labels`` and writing ``olabels``."""
    olabels = labels if olabels is None else olabels
    if len(olabels) != len(labels):
        raise ValueError("input and output label sequences differ in length")
    out = Fst(ring)
    q = out.add_state()
    out.set_start(q)
    for i, o in zip(labels, olabels):
        nxt = out.add_state()
        out.add_arc(q, Arc(i, o, ring.one, nxt))
        q = nxt
    out.set_final(q, weight)
    return out


def fold_initial_weight(fst: Fst) -> Fst:
    """Equivalent copy whose single initial state has weight one.

    The initial weight is multiplied into the start state's outgoing arcs and
    final weight. If the start state has incoming arcs a fresh start state is
    added instead, so that paths revisiting the old start are unaffected.
    """
    ring = fst.ring
    start = fst.start
    if start is None or fst.initials[start] == ring.one:
        return fst.copy()
    lam = fst.initials[start]
    out = fst.copy()
    if any(arc.nextstate == start for _, arc in fst.all_arcs()):
        new = out.add_state()
        src = start
    else:
        new = src = start
    out._arcs[new] = [a._replace(weight=ring.times(lam, a.weight)) for a in fst.arcs(src)]
    if src in fst.finals:
        out.set_final(new, ring.times(lam, fst.finals[src]))
    out.set_start(new)
    return out
