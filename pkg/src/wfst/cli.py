"""``wfst`` command-line tool.

Every subcommand reads fsts in the text format (a file argument or ``-`` /
nothing for stdin) and writes to stdout. Exit status: 0 success, 1 negative
answer (``equal`` mismatch, ``twins`` violation, ``check`` failure), 2 usage
or input error.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import cascade
from .compose import compose
from .determinize import HasTwins, Inconclusive, ViolationWitness, determinize, twins_check_bounded
from .errors import FstError
from .fst import Fst, connect, decode, encode, fold_initial_weight, is_deterministic
from .harness import check_suite
from .minimize import equivalence_pushed, minimize
from .reweight import push_weights, shortest_distance_to_final, shortest_path
from .semiring import RINGS
from .textio import SymbolTable, format_weight, read_fst, write_fst


class UsageError(Exception):
    pass


def _common_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--ring", choices=sorted(RINGS), default=os.environ.get("WFST_RING"),
                   help="expected semiring (default: $WFST_RING, else the file header)")
    p.add_argument("--max-states", type=int, default=10_000,
                   help="determinization state budget (default 10000)")
    p.add_argument("--delta", type=float, default=1e-9,
                   help="weight comparison tolerance (default 1e-9)")
    p.add_argument("--isymbols", help="input symbol table (symbol<TAB>id)")
    p.add_argument("--osymbols", help="output symbol table (defaults to --isymbols)")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common_parser()
    parser = argparse.ArgumentParser(prog="wfst", description="Weighted finite-state transducer tools.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help, inputs=1):
        p = sub.add_parser(name, parents=[common], help=help)
        if inputs == 1:
            p.add_argument("input", nargs="?", default="-")
        elif inputs == 2:
            p.add_argument("first")
            p.add_argument("second")
        return p

    add("compose", "compose two transducers", 2)
    add("determinize", "weighted determinization (transducers: on (in, out) label pairs)")
    add("push", "push weights towards the initial state")
    add("minimize", "weighted minimization of a deterministic fst")
    add("connect", "remove useless states")
    add("equal", "equivalence of two deterministic fsts via pushing", 2)
    p = add("twins", "bounded twins-property check")
    p.add_argument("--max-len", type=int, default=4)
    add("shortest-distance", "print state<TAB>distance to the final states")
    add("shortest-path", "best successful path as a linear fst")
    add("info", "print summary counts")
    p = add("demo-cascade", "decode phones with the lexicon/grammar demo", 0)
    p.add_argument("--lexicon", help="word<TAB>prob<TAB>phones file (default: bundled fixture)")
    p.add_argument("--grammar", help="w1<TAB>w2<TAB>prob file (default: bundled fixture)")
    p.add_argument("--phones", help='space-separated phones, e.g. "d ey t ax"')
    p.add_argument("--write-dir", help="also write L.fst, G.fst and syms.txt to this directory")
    p = add("check", "run the randomized oracle property suite", 0)
    p.add_argument("--n", type=int, default=200)
    p.add_argument("--seed", type=int, default=42)
    return parser


class _Context:
    def __init__(self, args, stdin, stdout):
        self.args = args
        self.stdin = stdin
        self.stdout = stdout
        self.isymbols = SymbolTable.load(args.isymbols) if args.isymbols else None
        self.osymbols = SymbolTable.load(args.osymbols) if args.osymbols else self.isymbols
        if args.delta < 0:
            raise UsageError("--delta must be non-negative")
        if args.max_states < 1:
            raise UsageError("--max-states must be at least 1")

    def read(self, name: str) -> Fst:
        if name == "-":
            text = self.stdin.read()
        else:
            with open(name, encoding="utf-8") as f:
                text = f.read()
        return read_fst(text, self.isymbols, self.osymbols, self.args.ring)

    def write(self, fst: Fst) -> None:
        self.stdout.write(write_fst(fold_initial_weight(fst), self.isymbols, self.osymbols))


def _encoded(fst: Fst, op):
    """Apply an acceptor-only operation, encoding label pairs for transducers."""
    if fst.is_acceptor():
        return op(fst)
    acceptor, table = encode(fst)
    return decode(op(acceptor), table, fst.isymbols, fst.osymbols)


def _cmd_compose(ctx):
    return ctx.write(compose(ctx.read(ctx.args.first), ctx.read(ctx.args.second)))


def _cmd_determinize(ctx):
    fst = ctx.read(ctx.args.input)
    ctx.write(_encoded(fst, lambda a: determinize(a, ctx.args.max_states)))


def _cmd_push(ctx):
    ctx.write(push_weights(ctx.read(ctx.args.input)))


def _cmd_minimize(ctx):
    fst = ctx.read(ctx.args.input)

    def op(a):
        if not is_deterministic(a):
            raise UsageError("minimize: input is not deterministic (run determinize first)")
        return minimize(a)

    ctx.write(_encoded(fst, op))


def _cmd_connect(ctx):
    ctx.write(connect(ctx.read(ctx.args.input)))


def _cmd_equal(ctx):
    a, b = ctx.read(ctx.args.first), ctx.read(ctx.args.second)
    if not (a.is_acceptor() and b.is_acceptor()):
        a, table = encode(a)
        b, _ = encode(b, table)
    for name, f in ((ctx.args.first, a), (ctx.args.second, b)):
        if not is_deterministic(f):
            raise UsageError(f"equal: {name} is not deterministic")
    same = equivalence_pushed(a, b, ctx.args.delta)
    ctx.stdout.write("equal\n" if same else "not equal\n")
    return 0 if same else 1


def _cmd_twins(ctx):
    result = twins_check_bounded(ctx.read(ctx.args.input), ctx.args.max_len)
    out = ctx.stdout
    if isinstance(result, ViolationWitness):
        p, q = result.states
        out.write(
            f"violation: states {p} and {q}, access {list(result.access)}, "
            f"cycle {list(result.cycle)}, weights {format_weight(result.weights[0])} "
            f"!= {format_weight(result.weights[1])}\n"
        )
        return 1
    if isinstance(result, Inconclusive):
        out.write(f"inconclusive: {result.reason} ({result.pairs_checked} pairs checked)\n")
        return 0
    assert isinstance(result, HasTwins)
    out.write(f"twins: no violation ({result.pairs_checked} pairs checked)\n")
    return 0


def _cmd_shortest_distance(ctx):
    d = shortest_distance_to_final(ctx.read(ctx.args.input))
    for q, w in enumerate(d):
        ctx.stdout.write(f"{q}\t{format_weight(w)}\n")


def _cmd_shortest_path(ctx):
    ctx.write(shortest_path(ctx.read(ctx.args.input)))


def _cmd_info(ctx):
    fst = ctx.read(ctx.args.input)
    out = ctx.stdout
    out.write(f"ring\t{fst.ring.name}\n")
    out.write(f"states\t{fst.num_states()}\n")
    out.write(f"arcs\t{fst.num_arcs()}\n")
    out.write(f"initial\t{len(fst.initials)}\n")
    out.write(f"final\t{len(fst.finals)}\n")
    out.write(f"acceptor\t{'yes' if fst.is_acceptor() else 'no'}\n")
    out.write(f"deterministic\t{'yes' if is_deterministic(fst) else 'no'}\n")


def _cmd_demo_cascade(ctx):
    args = ctx.args
    entries, bigrams = cascade.demo_fixture()
    if args.lexicon:
        with open(args.lexicon, encoding="utf-8") as f:
            entries = cascade.read_lexicon(f.read())
    if args.grammar:
        with open(args.grammar, encoding="utf-8") as f:
            bigrams = cascade.read_grammar(f.read())
    symbols = SymbolTable()
    lexicon = cascade.build_lexicon(entries, symbols)
    grammar = cascade.build_grammar(bigrams, symbols)
    if args.write_dir:
        os.makedirs(args.write_dir, exist_ok=True)
        for name, fst in (("L.fst", lexicon), ("G.fst", grammar)):
            with open(os.path.join(args.write_dir, name), "w", encoding="utf-8") as f:
                f.write(write_fst(fst, symbols, symbols))
        with open(os.path.join(args.write_dir, "syms.txt"), "w", encoding="utf-8") as f:
            f.write(symbols.write())
    graph = cascade.build_recognition_graph(lexicon, grammar, args.max_states)
    for name, states, arcs in graph.stages:
        ctx.stdout.write(f"# {name}: {states} states, {arcs} arcs\n")
    if args.phones is None:
        return 0
    words, weight = cascade.decode_words(graph.optimized, args.phones.split(), symbols)
    ctx.stdout.write(f"{' '.join(words)}\t{format_weight(weight)}\n")
    return 0


def _cmd_check(ctx):
    report = check_suite(ctx.args.n, ctx.args.seed)
    ctx.stdout.write(report.format() + "\n")
    return 0 if report.ok else 1


COMMANDS = {
    "compose": _cmd_compose,
    "determinize": _cmd_determinize,
    "push": _cmd_push,
    "minimize": _cmd_minimize,
    "connect": _cmd_connect,
    "equal": _cmd_equal,
    "twins": _cmd_twins,
    "shortest-distance": _cmd_shortest_distance,
    "shortest-path": _cmd_shortest_path,
    "info": _cmd_info,
    "demo-cascade": _cmd_demo_cascade,
    "check": _cmd_check,
}


def run(argv=None, stdin=None, stdout=None, stderr=None) -> int:
    stdin = stdin if stdin is not None else sys.stdin
    stdout = stdout if stdout is not None else sys.stdout
    stderr = stderr if stderr is not None else sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 0 if e.code == 0 else 2
    try:
        ctx = _Context(args, stdin, stdout)
        status = COMMANDS[args.command](ctx)
    except (UsageError, FstError, ValueError, OSError, KeyError) as e:
        stderr.write(f"wfst {args.command}: {e}\n")
        return 2
    return status or 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
