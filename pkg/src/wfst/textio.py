"""Tab-separated text format for fsts and symbol tables.

    #wfst tropical
    0<TAB>1<TAB>a<TAB>a<TAB>1        arc: src dst isym osym [weight]
    1<TAB>0                          final: state [weight]

The start state is the first state mentioned. Arcs are written with the
start state's arcs first, then the remaining states in id order; a missing
weight means one.
"""

from __future__ import annotations

import math
from typing import Iterable, TextIO

from .errors import FstParseError
from .fst import EPSILON, Arc, Fst
from .semiring import Semiring, get_ring

HEADER = "#wfst"
EPSILON_SYMBOL = "<eps>"


class SymbolTable:
    """Bijection between symbol strings and label ids; ``<eps>`` is always 0."""

    def __init__(self, symbols: Iterable[str] = ()):
        self._ids: dict[str, int] = {EPSILON_SYMBOL: EPSILON}
        self._symbols: dict[int, str] = {EPSILON: EPSILON_SYMBOL}
        for s in symbols:
            self.add_symbol(s)

    def add_symbol(self, symbol: str, label: int | None = None) -> int:
        if symbol in self._ids:
            if label is not None and self._ids[symbol] != label:
                raise ValueError(f"symbol {symbol!r} already has id {self._ids[symbol]}")
            return self._ids[symbol]
        if label is None:
            label = max(self._symbols) + 1
        if label in self._symbols:
            raise ValueError(f"id {label} already bound to {self._symbols[label]!r}")
        if label < 0 or not symbol or any(c.isspace() for c in symbol):
            raise ValueError(f"invalid symbol table entry {symbol!r} {label}")
        self._ids[symbol] = label
        self._symbols[label] = symbol
        return label

    def find(self, key):
        """Id for a symbol string, or symbol string for an id."""
        if isinstance(key, str):
            return self._ids[key]
        return self._symbols[key]

    def __contains__(self, key):
        return key in (self._ids if isinstance(key, str) else self._symbols)

    def __len__(self):
        return len(self._ids)

    def __iter__(self):
        return iter(sorted(self._symbols.items()))

    def __eq__(self, other):
        return isinstance(other, SymbolTable) and self._ids == other._ids

    def write(self) -> str:
        return "".join(f"{s}\t{i}\n" for i, s in self)

    @classmethod
    def read(cls, text: str) -> "SymbolTable":
        table = cls()
        for lineno, line in enumerate(text.splitlines(), 1):
            if not line.strip():
                continue
            fields = line.split()
            if len(fields) != 2:
                raise FstParseError(lineno, f"expected 'symbol<TAB>id', got {line!r}")
            try:
                label = int(fields[1])
            except ValueError:
                raise FstParseError(lineno, f"bad id {fields[1]!r}") from None
            try:
                table.add_symbol(fields[0], label)
            except ValueError as e:
                raise FstParseError(lineno, str(e)) from None
        return table

    @classmethod
    def load(cls, path) -> "SymbolTable":
        with open(path, encoding="utf-8") as f:
            return cls.read(f.read())


def format_weight(w: float) -> str:
    """Shortest decimal that reads back to the same float; integers without '.0'."""
    if math.isinf(w):
        return "Infinity" if w > 0 else "-Infinity"
    if w == int(w) and abs(w) < 2**53:
        return str(int(w))
    return repr(w)


def _parse_weight(field: str, ring: Semiring, lineno: int) -> float:
    try:
        return ring.check(float(field))
    except ValueError as e:
        raise FstParseError(lineno, f"bad weight {field!r}: {e}") from None


def write_fst(fst: Fst, isymbols: SymbolTable | None = None, osymbols: SymbolTable | None = None) -> str:
    isymbols = isymbols if isymbols is not None else fst.isymbols
    osymbols = osymbols if osymbols is not None else fst.osymbols
    ring = fst.ring
    lines = [f"{HEADER} {ring.name}"]
    if fst.num_states() == 0:
        return lines[0] + "\n"
    start = fst.start
    if start is None:
        raise ValueError("cannot serialize an fst without a start state")
    if fst.initials[start] != ring.one:
        raise ValueError("cannot serialize a non-trivial initial weight (fold it first)")
    if not fst.arcs(start) and fst.num_arcs():
        raise ValueError("start state has no arcs while other states do; cannot serialize")

    def sym(table, label):
        if table is None:
            return str(label)
        try:
            return table.find(label)
        except KeyError:
            raise ValueError(f"label {label} missing from symbol table") from None

    order = [start] + [q for q in fst.states() if q != start]
    for q in order:
        for arc in fst.arcs(q):
            lines.append(
                f"{q}\t{arc.nextstate}\t{sym(isymbols, arc.ilabel)}\t"
                f"{sym(osymbols, arc.olabel)}\t{format_weight(arc.weight)}"
            )
    finals = sorted(fst.finals, key=lambda q: (q != start, q))
    for q in finals:
        lines.append(f"{q}\t{format_weight(fst.finals[q])}")
    return "\n".join(lines) + "\n"


def read_fst(
    text: str,
    isymbols: SymbolTable | None = None,
    osymbols: SymbolTable | None = None,
    ring: Semiring | str | None = None,
) -> Fst:
    """Parse the text format.

    Without symbol tables labels must be integers. If ``ring`` is given and
    the text carries a different ring header, the text is rejected.
    """
    expected = get_ring(ring) if ring is not None else None
    lines = text.splitlines()
    body_start = 0
    file_ring = None
    if lines and lines[0].startswith(HEADER):
        parts = lines[0].split()
        if len(parts) != 2 or parts[0] != HEADER:
            raise FstParseError(1, f"malformed header {lines[0]!r}")
        try:
            file_ring = get_ring(parts[1])
        except ValueError as e:
            raise FstParseError(1, str(e)) from None
        body_start = 1
    if expected is not None and file_ring is not None and expected is not file_ring:
        raise FstParseError(1, f"file is {file_ring.name} but {expected.name} was requested")
    fring = file_ring or expected or get_ring("tropical")

    def label(table, field, lineno):
        if table is None:
            try:
                value = int(field)
            except ValueError:
                raise FstParseError(lineno, f"non-numeric label {field!r} and no symbol table") from None
            if value < 0:
                raise FstParseError(lineno, f"negative label {value}")
            return value
        try:
            return table.find(field)
        except KeyError:
            raise FstParseError(lineno, f"unknown symbol {field!r}") from None

    def state(field, lineno):
        try:
            value = int(field)
        except ValueError:
            raise FstParseError(lineno, f"bad state id {field!r}") from None
        if value < 0:
            raise FstParseError(lineno, f"negative state id {value}")
        return value

    arcs: list[tuple[int, Arc]] = []
    finals: list[tuple[int, float]] = []
    start = None
    max_state = -1
    for lineno, line in enumerate(lines[body_start:], body_start + 1):
        if not line.strip():
            continue
        fields = line.split("\t") if "\t" in line else line.split()
        fields = [f.strip() for f in fields]
        if len(fields) in (4, 5):
            src, dst = state(fields[0], lineno), state(fields[1], lineno)
            i = label(isymbols, fields[2], lineno)
            o = label(osymbols, fields[3], lineno)
            w = _parse_weight(fields[4], fring, lineno) if len(fields) == 5 else fring.one
            arcs.append((src, Arc(i, o, w, dst)))
            if start is None:
                start = src
            max_state = max(max_state, src, dst)
        elif len(fields) in (1, 2):
            q = state(fields[0], lineno)
            w = _parse_weight(fields[1], fring, lineno) if len(fields) == 2 else fring.one
            finals.append((q, w))
            if start is None:
                start = q
            max_state = max(max_state, q)
        else:
            raise FstParseError(lineno, f"expected 1, 2, 4 or 5 fields, got {len(fields)}")

    fst = Fst(fring, isymbols, osymbols)
    fst.add_states(max_state + 1)
    for src, arc in arcs:
        fst.add_arc(src, arc)
    for q, w in finals:
        fst.set_final(q, w)
    if start is not None:
        fst.set_start(start)
    return fst


def load_fst(path_or_file, isymbols=None, osymbols=None, ring=None) -> Fst:
    if hasattr(path_or_file, "read"):
        return read_fst(path_or_file.read(), isymbols, osymbols, ring)
    with open(path_or_file, encoding="utf-8") as f:
        return read_fst(f.read(), isymbols, osymbols, ring)


def dump_fst(fst: Fst, out: TextIO, isymbols=None, osymbols=None) -> None:
    out.write(write_fst(fst, isymbols, osymbols))
