"""
Truth-theoretic and corpus-style meanings.  With a one-dimensional sentence
space the meaning of 'subject verb object' is the total degree of truth over
the individuals in the subject and object sets.
"""
import numpy as np

from pregcirc import Lexicon
from pregcirc.fvect import (DimConfig, eta, evaluate, indicator, pointwise_meaning,
                            truth_sentence_meaning, truth_verb, verb_from_corpus)

lex = Lexicon.default()
d = lex.diagram("Sara ketab ra kharid")
n = 3
# alpha[object, subject]: how true it is that subject i bought object j
alpha = np.array([[1.0, 0.0, 0.5],
                  [0.0, 0.2, 0.0],
                  [0.9, 0.0, 0.0]])
subjects, objects = {0, 2}, {0}
cfg = DimConfig({"n": n, "s": 1}, {"o": "n"})
value = evaluate(d, {"Sara": indicator(subjects, n), "ketab": indicator(objects, n),
                     "ra": eta(n), "kharid": truth_verb(alpha)}, cfg)
print("diagram value:", value[0].real)
print("sum of degrees of truth:", truth_sentence_meaning(subjects, objects, alpha))

corpus = [([1.0, 0.0], [0.0, 1.0]), ([0.5, 0.5], [1.0, 0.0])]
verb = verb_from_corpus(corpus)
print("corpus verb matrix:\n", verb)
print("point-wise meaning of (obj=[1,0], sub=[0.3,0.7]):\n",
      pointwise_meaning([1.0, 0.0], [0.3, 0.7], verb))
