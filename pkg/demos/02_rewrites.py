"""
Diagram rewrites.  'ra' and 'the' act as caps, which snake removal yanks
away; the bigraph rewrite turns odd-distance words into effects.  Tensor
evaluation is unchanged by each step.
"""
import numpy as np

from pregcirc import Lexicon, diagram as dg
from pregcirc.fvect import DimConfig, eta, evaluate

lex = Lexicon.default()
cfg = DimConfig({"n": 2, "s": 2}, {"o": "n"})
rng = np.random.default_rng(0)

for sentence in ("Sara ketab ra kharid", "Sara bought the book"):
    d = lex.diagram(sentence)
    caps = lex.cap_words(sentence)
    print(sentence)
    print("  distances from root:", dg.distance_from_root(d))
    big = dg.bigraph_rewrite(d)
    print("  bigraph form:", [(n.word, n.kind) for _, n in big.words()],
          f"with {big.count('swap')} swap(s)")
    snaked = dg.snake_removal(dg.substitute_cap_words(d, caps))
    print("  after yanking", sorted(caps), "->", [n.word for _, n in snaked.words()])

    tensors = {n.word: rng.normal(size=tuple(cfg[t.base] for t in n.type)) for _, n in d.words()}
    for w in caps:
        tensors[w] = eta(2)
    ref = evaluate(d, tensors, cfg)
    for name, r in (("bigraph", big), ("snake", snaked), ("snake+bigraph", dg.bigraph_rewrite(snaked))):
        print(f"  {name:14s} max deviation {np.max(abs(evaluate(r, tensors, cfg) - ref)):.1e}")
