"""Pregroup reduction of the two sample sentences."""
from pregcirc import Lexicon

lex = Lexicon.default()
for sentence in ("Sara ketab ra kharid", "Sara bought the book", "Sara Sara"):
    link = lex.parse(sentence)
    types = " . ".join(str(e.type) for e in lex.lookup(sentence))
    verdict = "reduces to s" if link.grammatical else "does not reduce"
    print(f"{sentence!r}: {types}")
    print(f"  cups {sorted(link.cups)}, survivors {list(link.survivors)} -> {verdict}")
