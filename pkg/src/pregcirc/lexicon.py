"""
Lexicon files and the sentence pipeline built on top of them.

A lexicon is a JSON document with ``schema: 1``::

    {"schema": 1,
     "grammar": {"basic_types": ["n", "s", "o"], "target": "s", "aliases": {"o": "n"}},
     "dims": {"n": 2, "s": 2},
     "qubits": {"n": 1, "s": 1},
     "ansatz_depth": 1,
     "words": [{"text": "ketab", "language": "fa", "type": "n",
                "role": "ansatz", "sense": "book"}, ...],
     "pairs": [["Sara ketab ra kharid", "Sara bought the book"]]}

``role`` is ``ansatz`` (parametrised word), ``cap`` (a function word whose
meaning is the identity, ``sum_i e_i (x) e_i``) or ``tensor`` (with a
``tensor`` literal ``{"shape": [...], "entries": [[re, im], ...]}``).  Words
sharing a ``sense`` share circuit parameters.
"""
from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from importlib import resources
from typing import Mapping

import numpy as np

from . import compiler, diagram as dg, fvect
from .circuit import Circuit
from .pregroup import Grammar, PregroupType, ReductionLinkage, reduce

LEXICON_ENV = "PREGCIRC_LEXICON"
SCHEMA = 1
FORMS = ("bigraph", "grammar-meaning", "choi")
REWRITES = ("none", "snake")
ROLES = ("ansatz", "cap", "tensor")


class LexiconError(ValueError):
    pass


class Ungrammatical(ValueError):
    def __init__(self, linkage: ReductionLinkage):
        super().__init__("sentence does not reduce to the target type")
        self.linkage = linkage


@dataclass(frozen=True)
class WordEntry:
    text: str
    language: str
    type: PregroupType
    role: str = "ansatz"
    sense: str = ""
    tensor: np.ndarray | None = field(default=None, compare=False)


@dataclass
class Lexicon:
    grammar: Grammar
    dims: fvect.DimConfig
    qubits: compiler.QubitConfig
    words: list[WordEntry]
    pairs: list[tuple[str, str]] = field(default_factory=list)

    @classmethod
    def from_dict(cls, data: Mapping) -> "Lexicon":
        if data.get("schema") != SCHEMA:
            raise LexiconError(f"unsupported lexicon schema {data.get('schema')!r}")
        g = data["grammar"]
        grammar = Grammar(tuple(g["basic_types"]), g.get("target", "s"),
                          dict(g.get("aliases", {})))
        dims = fvect.DimConfig(dict(data.get("dims", {})), grammar.aliases)
        qubits = compiler.QubitConfig(dict(data["qubits"]), int(data.get("ansatz_depth", 1)),
                                      grammar.aliases)
        words = []
        for w in data["words"]:
            role = w.get("role", "ansatz")
            if role not in ROLES:
                raise LexiconError(f"{w['text']!r}: unknown role {role!r}")
            ty = grammar.parse_type(w["type"])
            tensor = None
            if role == "tensor":
                tensor = fvect.tensor_from_literal(w["tensor"])
                want = tuple(dims[t.base] for t in ty)
                if tensor.shape != want:
                    raise LexiconError(f"{w['text']!r}: tensor shape {tensor.shape} != {want}")
            cty = grammar.canonical_type(ty)
            if role == "cap" and (len(cty) != 2 or cty[0].base != cty[1].base):
                raise LexiconError(f"{w['text']!r}: type {ty} cannot be a cap")
            words.append(WordEntry(w["text"], w.get("language", ""), ty, role,
                                   w.get("sense") or w["text"], tensor))
        pairs = [tuple(p) for p in data.get("pairs", [])]
        return cls(grammar, dims, qubits, words, pairs)

    @classmethod
    def load(cls, path) -> "Lexicon":
        with open(path) as fh:
            return cls.from_dict(json.load(fh))

    @classmethod
    def default(cls) -> "Lexicon":
        path = os.environ.get(LEXICON_ENV)
        if path:
            return cls.load(path)
        text = resources.files("pregcirc").joinpath("data/lexicon.json").read_text()
        return cls.from_dict(json.loads(text))

    @property
    def languages(self) -> list[str]:
        return list(dict.fromkeys(w.language for w in self.words))

    def lookup(self, sentence: str, language: str | None = None) -> list[WordEntry]:
        """Entries for each token, all from one language (first that fits)."""
        tokens = sentence.split()
        if not tokens:
            raise LexiconError("empty sentence")
        langs = [language] if language else self.languages
        for lang in langs:
            table = {w.text: w for w in self.words if w.language == lang}
            if all(t in table for t in tokens):
                return [table[t] for t in tokens]
        missing = [t for t in tokens if not any(w.text == t for w in self.words)]
        if missing:
            raise LexiconError(f"unknown word(s): {', '.join(missing)}")
        raise LexiconError("no single language covers the sentence")

    def parse(self, sentence: str, language: str | None = None) -> ReductionLinkage:
        entries = self.lookup(sentence, language)
        return reduce([e.type for e in entries], self.grammar.target)

    def diagram(self, sentence: str, language: str | None = None) -> dg.Diagram:
        """
        DisCoCat diagram of a grammatical sentence.  Aliased basic types are
        identified first, so every wire carries a canonical base.
        """
        entries = self.lookup(sentence, language)
        types = [self.grammar.canonical_type(e.type) for e in entries]
        link = reduce(types, self.grammar.target)
        if not link.grammatical:
            raise Ungrammatical(link)
        return dg.from_reduction([(e.text, t) for e, t in zip(entries, types)], link)

    def senses(self, sentence: str, language: str | None = None) -> dict[str, str]:
        return {e.text: e.sense for e in self.lookup(sentence, language)}

    def cap_words(self, sentence: str, language: str | None = None) -> set[str]:
        return {e.text for e in self.lookup(sentence, language) if e.role == "cap"}

    def rewritten(self, sentence: str, rewrite: str = "none",
                  language: str | None = None) -> dg.Diagram:
        """DisCoCat diagram, optionally with cap words yanked out."""
        if rewrite not in REWRITES:
            raise LexiconError(f"unknown rewrite {rewrite!r}")
        d = self.diagram(sentence, language)
        if rewrite == "snake":
            d = dg.snake_removal(dg.substitute_cap_words(d, self.cap_words(sentence, language)))
        return d

    def compile(self, sentence: str, form: str = "bigraph", rewrite: str = "none",
                language: str | None = None,
                qubits: compiler.QubitConfig | None = None) -> Circuit:
        if form not in FORMS:
            raise LexiconError(f"unknown form {form!r}")
        senses = self.senses(sentence, language)
        d = self.rewritten(sentence, rewrite, language)
        target = self.grammar.target
        if form == "bigraph":
            d = dg.bigraph_rewrite(d, target)
            c = compiler.compile_bigraph(d, qubits or self.qubits, senses)
        else:
            c = compiler.compile_grammar_meaning(d, senses, target)
            if form == "choi":
                c = compiler.choi_form(c)
        meta = dict(c.metadata)
        meta.update({"sentence": sentence, "rewrite": rewrite})
        return Circuit(c.n_qubits, c.gates, c.open_qubits, meta)

    def tensors(self, sentence: str, language: str | None = None) -> dict[str, np.ndarray]:
        """Fixed tensors for ``tensor`` and ``cap`` words of a sentence."""
        out = {}
        for e in self.lookup(sentence, language):
            if e.role == "tensor":
                out[e.text] = e.tensor
            elif e.role == "cap":
                out[e.text] = fvect.eta(self.dims[e.type[0].base])
        return out
