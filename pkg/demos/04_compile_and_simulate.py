"""
Compile both sentences to circuits and check the simulated meaning against
direct tensor contraction of the sentence diagram.
"""
import numpy as np

from pregcirc import Lexicon, ParameterStore, simulate
from pregcirc.compiler import QubitConfig, ansatz_tensors
from pregcirc.fvect import DimConfig, evaluate

lex = Lexicon.default()
for qubits in ({"n": 1, "s": 1}, {"n": 2, "s": 1}):
    cfg = QubitConfig(qubits, 1, {"o": "n"})
    dims = DimConfig({b: 2 ** q for b, q in qubits.items()}, {"o": "n"})
    for sentence in ("Sara ketab ra kharid", "Sara bought the book"):
        c = lex.compile(sentence, "bigraph", qubits=cfg)
        store = ParameterStore.random(c.params, seed=1)
        d = lex.diagram(sentence)
        ref = evaluate(d, ansatz_tensors(d, cfg, store, lex.senses(sentence)), dims)
        out = simulate(c, store).tensor(c.metadata["output_sizes"])
        print(f"{qubits} {sentence!r}: {c.n_qubits} qubits, {len(c.gates)} gates, "
              f"{c.count('SWAP')} swaps, deviation {np.max(abs(out - ref)):.1e}")

c = lex.compile("Sara ketab ra kharid", "bigraph")
print()
print(c.to_json()[:400], "...")
