"""Toy recognition cascade: pronunciation lexicon composed with a bigram grammar.

The bundled fixture (``data/lexicon.tsv``, ``data/bigrams.tsv``) is invented
illustrative data: three words, up to two pronunciations each, four bigrams.
Phones and words share one symbol table.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from importlib import resources
from typing import NamedTuple, Sequence

from .compose import compose
from .determinize import DEFAULT_MAX_STATES, determinize
from .errors import NoPathError, NonDeterminable, UnsupportedError
from .fst import EPSILON, Arc, Fst, connect, decode as decode_labels, encode, project
from .minimize import minimize
from .semiring import TROPICAL
from .textio import SymbolTable

_SUM_SLACK = 1e-9


class LexiconEntry(NamedTuple):
    word: str
    pronunciation: tuple[str, ...]
    probability: float


class Bigram(NamedTuple):
    prev: str
    word: str
    probability: float


def _cost(p: float) -> float:
    return -math.log(p)


def read_lexicon(text: str) -> list[LexiconEntry]:
    """Parse ``word<TAB>prob<TAB>phone phone ...`` lines."""
    entries = []
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip():
            continue
        parts = line.split("\t")
        if len(parts) != 3:
            raise ValueError(f"lexicon line {lineno}: expected 3 tab-separated fields")
        entries.append(LexiconEntry(parts[0].strip(), tuple(parts[2].split()), float(parts[1])))
    return entries


def read_grammar(text: str) -> list[Bigram]:
    """Parse ``w1<TAB>w2<TAB>prob`` lines."""
    bigrams = []
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip():
            continue
        parts = line.split("\t")
        if len(parts) != 3:
            raise ValueError(f"grammar line {lineno}: expected 3 tab-separated fields")
        bigrams.append(Bigram(parts[0].strip(), parts[1].strip(), float(parts[2])))
    return bigrams


def demo_fixture() -> tuple[list[LexiconEntry], list[Bigram]]:
    data = resources.files("wfst") / "data"
    return (
        read_lexicon((data / "lexicon.tsv").read_text(encoding="utf-8")),
        read_grammar((data / "bigrams.tsv").read_text(encoding="utf-8")),
    )


def _check_distribution(totals: dict[str, float], what: str) -> None:
    for key, total in totals.items():
        if total > 1 + _SUM_SLACK:
            raise ValueError(f"{what} probabilities for {key!r} sum to {total} > 1")


def build_lexicon(entries: Sequence[LexiconEntry], symbols: SymbolTable | None = None) -> Fst:
    """Phone-to-word transducer accepting one or more concatenated words.

    Each pronunciation is a chain from the start state to a shared word-end
    state; its first arc writes the word and carries ``-log(prob)``, the rest
    write epsilon. The word-end state is final and repeats the start state's
    arcs, which closes the loop without epsilon transitions.
    """
    if not entries:
        raise ValueError("empty lexicon")
    symbols = symbols if symbols is not None else SymbolTable()
    totals: dict[str, float] = {}
    for e in entries:
        if not e.pronunciation:
            raise ValueError(f"empty pronunciation for {e.word!r}")
        if not 0 < e.probability <= 1:
            raise ValueError(f"probability of {e.word!r} must lie in (0, 1]")
        totals[e.word] = totals.get(e.word, 0.0) + e.probability
    _check_distribution(totals, "pronunciation")

    fst = Fst(TROPICAL, symbols, symbols)
    start = fst.add_state()
    fst.set_start(start)
    into_end: list[tuple[int, Arc]] = []  # last arc of each chain; target fixed below
    for e in entries:
        word = symbols.add_symbol(e.word)
        phones = [symbols.add_symbol(p) for p in e.pronunciation]
        src = start
        for k, phone in enumerate(phones):
            arc = Arc(phone, word, _cost(e.probability), -1) if k == 0 else Arc(phone, EPSILON, 0.0, -1)
            if k == len(phones) - 1:
                into_end.append((src, arc))
            else:
                nxt = fst.add_state()
                fst.add_arc(src, arc._replace(nextstate=nxt))
                src = nxt
    end = fst.add_state()
    fst.set_final(end)
    for src, arc in into_end:
        fst.add_arc(src, arc._replace(nextstate=end))
    for arc in list(fst.arcs(start)):
        fst.add_arc(end, arc)
    return fst


def build_grammar(bigrams: Sequence[Bigram], symbols: SymbolTable | None = None) -> Fst:
    """Bigram word acceptor.

    One state per word plus a start state. Any word may begin a sentence at
    no cost and every word state is final with weight one; the arc from the
    state of ``prev`` to the state of ``word`` costs ``-log(prob)``.
    """
    if not bigrams:
        raise ValueError("empty grammar")
    symbols = symbols if symbols is not None else SymbolTable()
    totals: dict[str, float] = {}
    for b in bigrams:
        if not 0 < b.probability <= 1:
            raise ValueError(f"bigram probability {b} must lie in (0, 1]")
        totals[b.prev] = totals.get(b.prev, 0.0) + b.probability
    _check_distribution(totals, "bigram")

    words: list[str] = []
    for b in bigrams:
        for w in (b.prev, b.word):
            if w not in words:
                words.append(w)
    fst = Fst(TROPICAL, symbols, symbols)
    start = fst.add_state()
    fst.set_start(start)
    state = {}
    for w in words:
        state[w] = fst.add_state()
        fst.set_final(state[w])
    for w in words:
        label = symbols.add_symbol(w)
        fst.add_arc(start, Arc(label, label, 0.0, state[w]))
    for b in bigrams:
        label = symbols.find(b.word)
        fst.add_arc(state[b.prev], Arc(label, label, _cost(b.probability), state[b.word]))
    return fst


def word_loop(words: Sequence[str], symbols: SymbolTable) -> Fst:
    """Grammar accepting every word sequence at weight one."""
    fst = Fst(TROPICAL, symbols, symbols)
    q = fst.add_state()
    fst.set_start(q)
    fst.set_final(q)
    for w in words:
        label = symbols.add_symbol(w)
        fst.add_arc(q, Arc(label, label, 0.0, q))
    return fst


@dataclass
class RecognitionGraph:
    composed: Fst
    optimized: Fst
    projection_det: Fst | None
    projection_min: Fst | None
    stages: list[tuple[str, int, int]] = field(default_factory=list)

    def stage(self, name: str) -> tuple[int, int]:
        for n, states, arcs in self.stages:
            if n == name:
                return states, arcs
        raise KeyError(name)


def build_recognition_graph(
    lexicon: Fst, grammar: Fst, max_states: int = DEFAULT_MAX_STATES
) -> RecognitionGraph:
    """Compose, then optimize.

    ``optimized`` is the composed transducer determinized and minimized with
    each (phone, word) pair as one symbol; it realizes the same weighted
    relation and is what decoding should use. The input projection is also
    determinized and minimized when the state budget allows, for reporting.
    """
    stages = [
        ("lexicon", lexicon.num_states(), lexicon.num_arcs()),
        ("grammar", grammar.num_states(), grammar.num_arcs()),
    ]
    composed = connect(compose(lexicon, grammar))
    stages.append(("compose", composed.num_states(), composed.num_arcs()))

    encoded, table = encode(composed)
    det = determinize(encoded, max_states)
    stages.append(("det", det.num_states(), det.num_arcs()))
    mini = minimize(det)
    stages.append(("min", mini.num_states(), mini.num_arcs()))
    optimized = decode_labels(mini, table, composed.isymbols, composed.osymbols)

    proj_det = proj_min = None
    try:
        proj_det = determinize(project(composed, "input"), max_states)
    except (NonDeterminable, UnsupportedError):
        pass
    if proj_det is not None:
        proj_min = minimize(proj_det)
        stages.append(("proj-det", proj_det.num_states(), proj_det.num_arcs()))
        stages.append(("proj-min", proj_min.num_states(), proj_min.num_arcs()))
    return RecognitionGraph(composed, optimized, proj_det, proj_min, stages)


def decode(graph: Fst, phones: Sequence[int]) -> tuple[tuple[int, ...], float]:
    """Best output string and weight over paths whose input is ``phones``.

    Dynamic programming over (state, input position): epsilon-input arcs are
    relaxed within a position, symbol arcs advance to the next one.
    """
    if graph.ring is not TROPICAL:
        raise UnsupportedError("decode needs the tropical ring")
    n = len(phones)
    layers: list[dict[int, float]] = [dict() for _ in range(n + 1)]
    back: dict[tuple[int, int], tuple[int, int, int]] = {}
    layers[0].update(graph.initials)
    limit = graph.num_states() * max(1, graph.num_arcs())
    for pos in range(n + 1):
        layer = layers[pos]
        queue = deque(layer)
        queued = set(queue)
        relaxations = 0
        while queue:
            q = queue.popleft()
            queued.discard(q)
            for arc in graph.arcs(q):
                if arc.ilabel != EPSILON:
                    continue
                cand = layer[q] + arc.weight
                if cand < layer.get(arc.nextstate, math.inf):
                    layer[arc.nextstate] = cand
                    back[(pos, arc.nextstate)] = (pos, q, arc.olabel)
                    relaxations += 1
                    if relaxations > limit:
                        raise UnsupportedError("negative epsilon cycle in decoding graph")
                    if arc.nextstate not in queued:
                        queued.add(arc.nextstate)
                        queue.append(arc.nextstate)
        if pos == n:
            break
        nxt = layers[pos + 1]
        for q, w in layer.items():
            for arc in graph.arcs(q):
                if arc.ilabel != phones[pos]:
                    continue
                cand = w + arc.weight
                if cand < nxt.get(arc.nextstate, math.inf):
                    nxt[arc.nextstate] = cand
                    back[(pos + 1, arc.nextstate)] = (pos, q, arc.olabel)
    best, best_w = None, math.inf
    for q, w in layers[n].items():
        if q in graph.finals and w + graph.finals[q] < best_w:
            best, best_w = q, w + graph.finals[q]
    if best is None:
        raise NoPathError("no path matches the phone sequence")
    words = []
    key = (n, best)
    while key in back:
        pos, q, olabel = back[key]
        if olabel != EPSILON:
            words.append(olabel)
        key = (pos, q)
    return tuple(reversed(words)), best_w


def decode_words(graph: Fst, phones: Sequence[str], symbols: SymbolTable) -> tuple[list[str], float]:
    try:
        labels = [symbols.find(p) for p in phones]
    except KeyError as e:
        raise NoPathError(f"unknown phone {e.args[0]!r}") from None
    words, weight = decode(graph, labels)
    return [symbols.find(w) for w in words], weight
