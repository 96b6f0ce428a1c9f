"""
Command line driver: ``pregcirc <command> ...``.

Exit codes: 0 on success (or a grammatical sentence), 1 for an ungrammatical
sentence or a negative comparison, 2 for usage and data errors.  All output
JSON is written with sorted keys, so repeated runs are byte-identical.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import diagram as dg
from .circuit import Circuit, CircuitError, ParameterStore, export
from .compiler import CompileError, QubitConfig
from .diagram import DiagramError
from .fvect import ShapeError
from .lexicon import FORMS, LEXICON_ENV, REWRITES, Lexicon, LexiconError, Ungrammatical
from .pregroup import GrammarError
from .simulator import MeaningState, SimulationError, fidelity, simulate
from .training import METHODS, PairTask, TrainingError, optimize, pair_loss

EXIT_OK, EXIT_NEGATIVE, EXIT_ERROR = 0, 1, 2

DATA_ERRORS = (LexiconError, GrammarError, DiagramError, ShapeError, CompileError,
               CircuitError, SimulationError, TrainingError, OSError, ValueError, KeyError)


class CliError(Exception):
    pass


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def emit(text: str, path: str | None):
    if path:
        Path(path).write_text(text)
    else:
        sys.stdout.write(text)


def read_json(path: str):
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as e:
        raise CliError(f"{path}: invalid JSON ({e})") from None


def load_lexicon(args) -> Lexicon:
    if args.lexicon:
        return Lexicon.load(args.lexicon)
    return Lexicon.default()


def parse_qubits(text: str | None, lex: Lexicon, depth: int | None) -> QubitConfig:
    base = lex.qubits
    counts = dict(base.qubits)
    if text:
        for item in text.split(","):
            name, _, value = item.partition("=")
            if not value:
                raise CliError(f"bad --qubits item {item!r}; expected name=count")
            counts[name.strip()] = int(value)
    return QubitConfig(counts, base.ansatz_depth if depth is None else depth, base.aliases)


def load_store(path: str | None, names, seed: int) -> ParameterStore:
    """Random angles for ``names``, overridden by a params file when given."""
    store = ParameterStore.random(names, seed)
    if path:
        given = ParameterStore.from_dict(read_json(path))
        store = ParameterStore({**store.values, **given.values}, given.frozen)
    return store


def compile_sentence(lex: Lexicon, args, sentence: str) -> Circuit:
    qubits = parse_qubits(args.qubits, lex, args.depth)
    return lex.compile(sentence, args.form, args.rewrite, args.language, qubits)


# commands

def cmd_parse(args) -> int:
    lex = load_lexicon(args)
    link = lex.parse(args.sentence, args.language)
    out = link.to_dict()
    out["sentence"] = args.sentence
    emit(dumps(out), args.output)
    return EXIT_OK if link.grammatical else EXIT_NEGATIVE


def _diagram_text(d: dg.Diagram, fmt: str, extra: dict | None = None) -> str:
    if fmt == "dot":
        return d.to_dot()
    out = d.to_dict()
    if extra:
        out.update(extra)
    return dumps(out)


def cmd_diagram(args) -> int:
    lex = load_lexicon(args)
    d = lex.diagram(args.sentence, args.language)
    emit(_diagram_text(d, args.format), args.output)
    return EXIT_OK


def cmd_rewrite(args) -> int:
    lex = load_lexicon(args)
    target = lex.grammar.target
    d = lex.rewritten(args.sentence, args.rewrite, args.language)
    extra = {}
    if args.bigraph:
        extra["distances"] = dg.distance_from_root(d, target)
        d = dg.bigraph_rewrite(d, target)
    extra["has_snake"] = dg.has_snake(d)
    emit(_diagram_text(d, args.format, extra), args.output)
    return EXIT_OK


def cmd_compile(args) -> int:
    lex = load_lexicon(args)
    c = compile_sentence(lex, args, args.sentence)
    emit(c.to_json() + "\n", args.output)
    if args.qasm:
        store = load_store(args.params, c.params, args.seed)
        Path(args.qasm).write_bytes(export(c, "qasm", store))
    return EXIT_OK


def cmd_simulate(args) -> int:
    c = Circuit.from_dict(read_json(args.circuit))
    store = load_store(args.params, c.params, args.seed)
    state = simulate(c, store)
    emit(state.to_json() + "\n", args.output)
    return EXIT_OK


def cmd_compare(args) -> int:
    lex = load_lexicon(args)
    a = compile_sentence(lex, args, args.sentence_a)
    b = compile_sentence(lex, args, args.sentence_b)
    if len(a.open_qubits) != len(b.open_qubits):
        raise CliError(f"open wires differ: {len(a.open_qubits)} vs {len(b.open_qubits)}")
    store = load_store(args.params, set(a.params) | set(b.params), args.seed)
    sa, sb = simulate(a, store), simulate(b, store)
    f = fidelity(sa, sb)
    out = {"sentences": [args.sentence_a, args.sentence_b], "fidelity": f,
           "a": sa.to_dict(), "b": sb.to_dict()}
    emit(dumps(out), args.output)
    if args.threshold is not None and f < args.threshold:
        return EXIT_NEGATIVE
    return EXIT_OK


def _pairs(args, lex: Lexicon) -> list[tuple[str, str]]:
    if args.pairs:
        data = read_json(args.pairs)
        pairs = data["pairs"] if isinstance(data, dict) else data
    else:
        pairs = lex.pairs
    pairs = [tuple(p) for p in pairs]
    if not pairs or any(len(p) != 2 for p in pairs):
        raise CliError("need a nonempty list of sentence pairs")
    return pairs


def summary_text(pairs, method, seed, trace, initial, final) -> str:
    lines = [f"method: {method}", f"seed: {seed}",
             f"iterations: {trace[-1]['iteration']}",
             f"evaluations: {trace[-1]['evaluations']}",
             f"initial loss: {initial!r}", f"final loss: {final!r}"]
    for a, b in pairs:
        lines.append(f"pair: {a} | {b}")
    return "\n".join(lines) + "\n"


def cmd_train(args) -> int:
    lex = load_lexicon(args)
    pairs = _pairs(args, lex)
    circuits = [(compile_sentence(lex, args, a), compile_sentence(lex, args, b)) for a, b in pairs]
    task = PairTask(circuits, pairs)
    store = load_store(args.init, task.params, args.seed)
    opts = {}
    for key in ("a", "c", "lr", "step"):
        if getattr(args, key) is not None:
            opts[key] = getattr(args, key)
    initial = pair_loss(task, store)
    best, trace = optimize(task, store, args.method, args.budget, args.seed,
                           args.target, args.checkpoint_every, **opts)
    final = pair_loss(task, best)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "params.json").write_text(best.to_json() + "\n")
    (out / "trace.json").write_text(dumps({"method": args.method, "seed": args.seed,
                                           "budget": args.budget, "trace": trace}))
    text = summary_text(pairs, args.method, args.seed, trace, initial, final)
    (out / "summary.txt").write_text(text)
    sys.stdout.write(text)
    return EXIT_OK


def cmd_export(args) -> int:
    data = read_json(args.input)
    if "gates" in data:
        c = Circuit.from_dict(data)
        if args.format == "dot":
            raise CliError("dot export needs a diagram file")
        store = load_store(args.params, c.params, args.seed) if args.format != "json" else None
        blob = export(c, args.format, store)
    elif "nodes" in data:
        d = dg.Diagram.from_dict(data)
        if args.format not in ("json", "dot"):
            raise CliError(f"a diagram exports to json or dot, not {args.format}")
        blob = _diagram_text(d, args.format).encode()
    elif "amplitudes" in data:
        if args.format != "json":
            raise CliError("a meaning state exports to json only")
        blob = (MeaningState.from_dict(data).to_json() + "\n").encode()
    else:
        raise CliError(f"{args.input}: not a circuit, diagram or meaning state")
    if args.output:
        Path(args.output).write_bytes(blob)
    else:
        sys.stdout.buffer.write(blob)
        sys.stdout.flush()
    return EXIT_OK


# argument parsing

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--lexicon", help=f"lexicon JSON (default: ${LEXICON_ENV} or the bundled one)")
    common.add_argument("--seed", type=int, default=0, help="seed for random angles (default 0)")
    common.add_argument("-o", "--output", help="write to this file instead of stdout")

    lang = argparse.ArgumentParser(add_help=False)
    lang.add_argument("--language", help="restrict word lookup to one language")

    pipe = argparse.ArgumentParser(add_help=False, parents=[lang])
    pipe.add_argument("--form", choices=FORMS, default="bigraph")
    pipe.add_argument("--rewrite", choices=REWRITES, default="none")
    pipe.add_argument("--qubits", help="override qubits per basic type, e.g. n=2,s=1")
    pipe.add_argument("--depth", type=int, help="override ansatz depth")

    p = argparse.ArgumentParser(prog="pregcirc", description=__doc__.strip().splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("parse", parents=[common, lang], help="reduce a sentence, print the linkage")
    s.add_argument("sentence")
    s.set_defaults(func=cmd_parse)

    s = sub.add_parser("diagram", parents=[common, lang], help="DisCoCat diagram of a sentence")
    s.add_argument("sentence")
    s.add_argument("--format", choices=("json", "dot"), default="json")
    s.set_defaults(func=cmd_diagram)

    s = sub.add_parser("rewrite", parents=[common, lang], help="snake removal and/or bigraph rewrite")
    s.add_argument("sentence")
    s.add_argument("--rewrite", choices=REWRITES, default="snake")
    s.add_argument("--bigraph", action="store_true", help="also apply the bigraph rewrite")
    s.add_argument("--format", choices=("json", "dot"), default="json")
    s.set_defaults(func=cmd_rewrite)

    s = sub.add_parser("compile", parents=[common, pipe], help="compile a sentence to a circuit")
    s.add_argument("sentence")
    s.add_argument("--qasm", metavar="FILE", help="also write OpenQASM with resolved angles")
    s.add_argument("--params", help="params file for --qasm angles (default: random from --seed)")
    s.set_defaults(func=cmd_compile)

    s = sub.add_parser("simulate", parents=[common], help="simulate a circuit file")
    s.add_argument("circuit")
    s.add_argument("--params", help="params file (missing angles are random from --seed)")
    s.set_defaults(func=cmd_simulate)

    s = sub.add_parser("compare", parents=[common, pipe], help="fidelity of two sentences")
    s.add_argument("sentence_a")
    s.add_argument("sentence_b")
    s.add_argument("--params", help="params file (missing angles are random from --seed)")
    s.add_argument("--threshold", type=float, help="exit 1 if the fidelity is below this")
    s.set_defaults(func=cmd_compare)

    s = sub.add_parser("train", parents=[common, pipe], help="fit shared angles on sentence pairs")
    s.add_argument("pairs", nargs="?", help="JSON list of sentence pairs (default: lexicon pairs)")
    s.add_argument("--method", choices=METHODS, default="fd")
    s.add_argument("--budget", type=int, default=2000, help="loss evaluations")
    s.add_argument("--target", type=float, default=1e-12, help="stop once the loss reaches this")
    s.add_argument("--checkpoint-every", type=int, default=0)
    s.add_argument("--init", help="initial params file")
    s.add_argument("--out", default="train-out", help="directory for params, trace and summary")
    s.add_argument("--a", type=float, help="SPSA gain")
    s.add_argument("--c", type=float, help="SPSA perturbation size")
    s.add_argument("--lr", type=float, help="gradient descent learning rate")
    s.add_argument("--step", type=float, help="finite-difference step")
    s.set_defaults(func=cmd_train)

    s = sub.add_parser("export", parents=[common], help="convert a circuit or diagram file")
    s.add_argument("input")
    s.add_argument("--format", choices=("json", "qasm", "qasm-subset", "dot"), default="json")
    s.add_argument("--params", help="params file for qasm angles (default: random from --seed)")
    s.set_defaults(func=cmd_export)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except Ungrammatical as e:
        sys.stderr.write(f"pregcirc: ungrammatical: {e}\n")
        sys.stdout.write(dumps(e.linkage.to_dict()))
        return EXIT_NEGATIVE
    except (CliError, *DATA_ERRORS) as e:
        sys.stderr.write(f"pregcirc: error: {e}\n")
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
