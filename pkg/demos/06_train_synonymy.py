"""
Fit the shared word angles so the Persian sentence and its English
translation produce the same meaning state.
"""
from pregcirc import Lexicon, PairTask, ParameterStore, optimize, pair_loss

lex = Lexicon.default()
pairs = lex.pairs
task = PairTask([(lex.compile(a), lex.compile(b)) for a, b in pairs], pairs)
print("shared parameters:", ", ".join(task.params))
for method in ("fd", "spsa"):
    store = ParameterStore.random(task.params, seed=0)
    best, trace = optimize(task, store, method, budget=2000, seed=0)
    print(f"{method}: loss {pair_loss(task, store):.4f} -> {pair_loss(task, best):.2e} "
          f"in {trace[-1]['evaluations']} evaluations")
