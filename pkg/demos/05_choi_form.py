"""
The four-qubit grammar+meaning circuit and its three-qubit variant obtained
by bending the verb into a map.  Their outputs agree for every parameter draw.
"""
import numpy as np

from pregcirc import Lexicon, ParameterStore, simulate
from pregcirc.circuit import cnot_layers, to_qasm

lex = Lexicon.default()
four = lex.compile("Sara ketab ra kharid", "grammar-meaning")
three = lex.compile("Sara ketab ra kharid", "choi")
for c in (four, three):
    layers = [[g.qubits for g in layer] for layer in cnot_layers(c)]
    print(f"{c.metadata['form']}: {c.n_qubits} qubits, CNOT layers {layers}")

worst = 0.0
for seed in range(20):
    store = ParameterStore.random(four.params, seed)
    a, b = simulate(four, store).vector, simulate(three, store).vector
    worst = max(worst, float(np.max(abs(a - three.metadata["choi_ratio"] * b))))
print("largest amplitude mismatch over 20 draws:", worst)
print()
print(to_qasm(three, ParameterStore.random(three.params, 0)))
