"""
Acceptance suite.  Each check prints one ``PASS``/``FAIL`` line and the
matching test asserts it.  Run directly for just the report::

    python tests/test_acceptance.py
"""
from __future__ import annotations

import itertools
import json
import math
import os
import subprocess
import sys
import tempfile
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from conftest import (ENGLISH, PERSIAN, ansatz_vector, mat_rx, mat_rz,  # noqa: E402
                      oracle_tensors, template_reference)
from pregcirc import Lexicon  # noqa: E402
from pregcirc import diagram as dg  # noqa: E402
from pregcirc.circuit import Circuit, ParameterStore, cnot_layers  # noqa: E402
from pregcirc.compiler import (EulerParams, QubitConfig, euler_unitary, qubit_count,  # noqa: E402
                               transpose_to_effect, word_state_ansatz)
from pregcirc.fvect import DimConfig, delta, evaluate, indicator, truth_verb  # noqa: E402
from pregcirc.pregroup import Grammar, reduce  # noqa: E402
from pregcirc.simulator import amplitude, circuit_unitary, simulate  # noqa: E402
from pregcirc.training import PairTask, optimize, pair_loss  # noqa: E402

LEX = Lexicon.default()
ALIASES = {"o": "n"}


def report(number, title, ok, detail=""):
    line = f"[{'PASS' if ok else 'FAIL'}] {number:>2}. {title}"
    if detail:
        line += f" ({detail})"
    print(line, flush=True)
    return ok


def random_values(names, rng):
    return {k: float(rng.uniform(0, 2 * math.pi)) for k in names}


# 1

def check_grammaticality():
    g = Grammar(("n", "s", "o"), "s", ALIASES)
    fa = reduce([g.parse_type(t) for t in ("n", "n", "n^r o", "o^r n^r s")], "s")
    en = reduce([g.parse_type(t) for t in ("n", "n^r s n^l", "n n^l", "n")], "s")
    ok = (fa.grammatical and set(fa.cups) == {(1, 2), (3, 4), (0, 5)}
          and en.grammatical and set(en.cups) == {(0, 1), (3, 4), (5, 6)})
    return report(1, "grammaticality golden reductions", ok,
                  f"fa cups {sorted(fa.cups)}, en cups {sorted(en.cups)}")


# 2

def check_truth_closed_form():
    rng = np.random.default_rng(2)
    d = LEX.diagram(PERSIAN)
    worst = 0.0
    for _ in range(20):
        n = int(rng.integers(1, 5))
        alpha = rng.uniform(size=(n, n))
        K = [k for k in range(n) if rng.random() < 0.5]
        L = [l for l in range(n) if rng.random() < 0.5]
        cfg = DimConfig({"n": n, "s": 1}, ALIASES)
        out = evaluate(d, {"Sara": indicator(K, n), "ketab": indicator(L, n),
                           "ra": delta(n, 2), "kharid": truth_verb(alpha)}, cfg)
        closed = sum(alpha[l, k] for k in K for l in L)
        worst = max(worst, abs(out[0] - closed))
    return report(2, "truth-theoretic meaning equals the sum of degrees of truth",
                  worst <= 1e-12, f"max err {worst:.1e}")


# 3

def check_pointwise():
    from pregcirc.fvect import pointwise_meaning
    rng = np.random.default_rng(3)
    worst = 0.0
    for _ in range(200):
        nj, ni = (int(x) for x in rng.integers(1, 6, size=2))
        o, s, c = rng.normal(size=nj), rng.normal(size=ni), rng.normal(size=(nj, ni))
        ref = np.zeros((nj, ni))
        for j, i in itertools.product(range(nj), range(ni)):
            ej, ei = np.eye(nj)[j], np.eye(ni)[i]
            ref += (o @ ej) * (s @ ei) * c[j, i] * np.outer(ej, ei)
        worst = max(worst, float(np.max(abs(pointwise_meaning(o, s, c) - ref))))
    return report(3, "point-wise decomposition identity", worst <= 1e-12,
                  f"200 instances, max err {worst:.1e}")


# 4

def check_rewrite_soundness():
    rng = np.random.default_rng(4)
    worst = 0.0
    for sentence in (PERSIAN, ENGLISH):
        d = LEX.diagram(sentence)
        caps = LEX.cap_words(sentence)
        subst = dg.substitute_cap_words(d, caps)
        snaked = dg.snake_removal(subst)
        big = dg.bigraph_rewrite(d)
        for dims in ({"n": 2, "s": 2}, {"n": 3, "s": 2}):
            cfg = DimConfig(dims, ALIASES)
            for _ in range(50):
                ts = {}
                for _, node in d.words():
                    shape = tuple(cfg[t.base] for t in node.type)
                    ts[node.word] = rng.normal(size=shape) + 1j * rng.normal(size=shape)
                worst = max(worst, float(np.max(abs(evaluate(big, ts, cfg) - evaluate(d, ts, cfg)))))
                for w in caps:
                    ts[w] = delta(cfg["n"], 2)
                ref = evaluate(d, ts, cfg)
                for r in (subst, snaked, dg.bigraph_rewrite(snaked)):
                    worst = max(worst, float(np.max(abs(evaluate(r, ts, cfg) - ref))))
    return report(4, "rewrite soundness under tensor evaluation", worst <= 1e-10,
                  f"max err {worst:.1e}")


# 5

def check_qubit_accounting():
    g = Grammar(("n", "s", "o"), "s", ALIASES)
    five = qubit_count(g.parse_type("o^r n^r s"), QubitConfig({"n": 2, "s": 1}, 1, ALIASES))
    gm = LEX.compile(PERSIAN, "grammar-meaning")
    ch = LEX.compile(PERSIAN, "choi")

    def cup_cnots(c):
        posts = {g.qubits[0] for g in c.gates if g.kind == "POST"}
        return [g for g in c.gates if g.kind == "CNOT" and g.qubits[1] in posts]

    gm_cups = cup_cnots(gm)
    gm_ok = (gm.n_qubits == 4 and len(gm_cups) == 2
             and not set(gm_cups[0].qubits) & set(gm_cups[1].qubits)
             and any(all(x in layer for x in gm_cups) for layer in cnot_layers(gm)))
    ch_cnots = [g for g in ch.gates if g.kind == "CNOT"]
    ch_ok = (ch.n_qubits == 3 and len(cnot_layers(ch)) == len(ch_cnots)
             and all(set(a.qubits) & set(b.qubits) for a, b in zip(ch_cnots, ch_cnots[1:])))
    return report(5, "qubit accounting", five == 5 and gm_ok and ch_ok,
                  f"kharid {five} qubits, grammar-meaning {gm.n_qubits}, choi {ch.n_qubits}")


# 6

def check_compiler_oracle():
    rng = np.random.default_rng(6)
    worst = 0.0
    cfg = LEX.qubits
    dims = DimConfig({"n": 2 ** cfg["n"], "s": 2 ** cfg["s"]}, ALIASES)
    for sentence in (PERSIAN, ENGLISH):
        d = LEX.diagram(sentence)
        senses = LEX.senses(sentence)
        big = LEX.compile(sentence, "bigraph")
        gm = LEX.compile(sentence, "grammar-meaning")
        ch = LEX.compile(sentence, "choi")
        for _ in range(100):
            vals = random_values(big.params, rng)
            ref = evaluate(d, oracle_tensors(d, cfg, senses, vals), dims)
            out = simulate(big, vals).tensor(big.metadata["output_sizes"])
            worst = max(worst, float(np.max(abs(out - ref))))
            vals = random_values(gm.params, rng)
            ref = template_reference(gm, vals)
            outs = (simulate(gm, vals).tensor([1, 1]),
                    simulate(ch, vals).tensor([1, 1]) * ch.metadata["choi_ratio"])
            worst = max(worst, *(float(np.max(abs(o - ref))) for o in outs))
    return report(6, "compiled circuits match tensor contraction", worst <= 1e-10,
                  f"2 sentences x 3 forms x 100 draws, max err {worst:.1e}")


# 7

def check_effect_transposition():
    rng = np.random.default_rng(7)
    worst = 0.0
    for _ in range(100):
        n, depth = int(rng.integers(1, 4)), int(rng.integers(1, 3))
        c = word_state_ansatz("w", n, depth)
        vals = random_values(c.params, rng)
        e = transpose_to_effect(c)
        row = np.array([amplitude(e, vals, initial=np.eye(2 ** n)[i]) for i in range(2 ** n)])
        worst = max(worst, float(np.max(abs(row - ansatz_vector("w", n, depth, vals)))))
    return report(7, "effects are transposed states", worst <= 1e-12, f"max err {worst:.1e}")


# 8

def check_euler():
    rng = np.random.default_rng(8)
    worst = 0.0
    for _ in range(100):
        a, b, g = rng.uniform(-2 * math.pi, 2 * math.pi, size=3)
        m = circuit_unitary(Circuit(1, tuple(euler_unitary(EulerParams(a, b, g)))))
        worst = max(worst, float(np.max(abs(m - mat_rz(a) @ mat_rx(b) @ mat_rz(g)))))
    ident = circuit_unitary(Circuit(1, tuple(euler_unitary(EulerParams(0, 0, 0)))))
    phase = ident[0, 0]
    ident_ok = abs(abs(phase) - 1) < 1e-12 and np.allclose(ident, phase * np.eye(2), atol=1e-12)
    return report(8, "Euler fragment equals Rz Rx Rz", worst <= 1e-12 and ident_ok,
                  f"max err {worst:.1e}")


# 9

def check_choi():
    rng = np.random.default_rng(9)
    gm = LEX.compile(PERSIAN, "grammar-meaning")
    ch = LEX.compile(PERSIAN, "choi")
    ratios = []
    for _ in range(100):
        vals = random_values(gm.params, rng)
        a, b = simulate(gm, vals).tensor([1, 1]), simulate(ch, vals).tensor([1, 1])
        mask = abs(b) > 1e-6
        ratios.extend((a[mask] / b[mask]).tolist())
    ratios = np.array(ratios)
    spread = float(np.max(abs(ratios - ratios[0])))
    ok = spread <= 1e-10 and abs(ratios[0] - ch.metadata["choi_ratio"]) <= 1e-10
    return report(9, "Choi form amplitudes differ by a constant", ok,
                  f"ratio {ratios[0].real:.12g}, spread {spread:.1e}")


# 10

def check_training():
    a, b = LEX.compile(PERSIAN, "bigraph"), LEX.compile(ENGLISH, "bigraph")
    task = PairTask([(a, b)], [(PERSIAN, ENGLISH)])
    store = ParameterStore.random(task.params, 0)
    best, trace = optimize(task, store, budget=2000, seed=0)
    loss = pair_loss(task, best)
    evals = trace[-1]["evaluations"]
    return report(10, "synonymy training reaches loss <= 0.01", loss <= 0.01 and evals <= 2000,
                  f"loss {loss:.2e} after {evals} evaluations")


# 11

def _cli(args, cwd):
    env = dict(os.environ)
    env.pop("PREGCIRC_LEXICON", None)
    r = subprocess.run([sys.executable, "-m", "pregcirc.cli", *args], cwd=cwd, env=env,
                       capture_output=True)
    return r.returncode, r.stdout


def _run_all(cwd):
    cwd = Path(cwd)
    (cwd / "pairs.json").write_text(json.dumps([[PERSIAN, ENGLISH]]))
    outs = []
    commands = [
        ["parse", PERSIAN], ["parse", "Sara Sara"],
        ["diagram", ENGLISH], ["diagram", PERSIAN, "--format", "dot"],
        ["rewrite", PERSIAN, "--bigraph"],
        ["compile", PERSIAN, "--form", "choi", "-o", "choi.json", "--qasm", "choi.qasm"],
        ["compile", ENGLISH, "--qubits", "n=2,s=1", "-o", "big.json"],
        ["simulate", "big.json"],
        ["compare", PERSIAN, ENGLISH],
        ["train", "pairs.json", "--method", "spsa", "--budget", "200", "--out", "tr",
         "--checkpoint-every", "10"],
        ["export", "choi.json", "--format", "qasm"],
    ]
    for args in commands:
        outs.append(_cli(args, cwd))
    files = {p.relative_to(cwd).as_posix(): p.read_bytes()
             for p in sorted(cwd.rglob("*")) if p.is_file()}
    return outs, files


def check_determinism():
    with tempfile.TemporaryDirectory() as d1, tempfile.TemporaryDirectory() as d2:
        first, second = _run_all(d1), _run_all(d2)
    codes = [c for c, _ in first[0]]
    ok = first == second and all(c in (0, 1) for c in codes)
    return report(11, "CLI output is byte-identical across runs", ok,
                  f"{len(first[0])} commands, {len(first[1])} files")


CHECKS = [check_grammaticality, check_truth_closed_form, check_pointwise,
          check_rewrite_soundness, check_qubit_accounting, check_compiler_oracle,
          check_effect_transposition, check_euler, check_choi, check_training,
          check_determinism]


@pytest.mark.parametrize("check", CHECKS, ids=lambda f: f.__name__.removeprefix("check_"))
def test_acceptance(check, capsys):
    with capsys.disabled():
        ok = check()
    assert ok


if __name__ == "__main__":
    results = [check() for check in CHECKS]
    sys.exit(0 if all(results) else 1)
