import pytest

from wfst import Arc, Fst, TROPICAL


def make_fst(arcs, finals, ring=TROPICAL, start=0, n=None):
    """arcs: (src, dst, ilabel, olabel, weight); finals: {state: weight}."""
    fst = Fst(ring)
    states = [start, *finals]
    for s, d, *_ in arcs:
        states += [s, d]
    fst.add_states(n if n is not None else max(states) + 1)
    fst.set_start(start)
    for s, d, i, o, w in arcs:
        fst.add_arc(s, Arc(i, o, w, d))
    for q, w in finals.items():
        fst.set_final(q, w)
    return fst


def acceptor(arcs, finals, **kw):
    """arcs: (src, dst, label, weight)."""
    return make_fst([(s, d, x, x, w) for s, d, x, w in arcs], finals, **kw)


@pytest.fixture
def chain():
    # 0 -a/2-> 1 -b/3-> 2, final weight 1
    return acceptor([(0, 1, 1, 2.0), (1, 2, 2, 3.0)], {2: 1.0})


@pytest.fixture
def one_arc():
    return acceptor([(0, 1, 1, 1.0)], {1: 0.0})


def pytest_terminal_summary(terminalreporter):
    import sys

    module = sys.modules.get("test_acceptance")
    if module is None or not module.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(module.RESULTS, key=lambda s: int(s.split("[")[1].split("]")[0])):
        terminalreporter.write_line(line)
