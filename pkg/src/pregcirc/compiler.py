"""
Diagrams to parametrised circuits.

Two pipelines are provided.  :func:`compile_bigraph` maps every word of a
(rewritten) diagram to a CNOT+rotation ansatz, effects to transposed ansatze,
swaps to SWAP gates and any remaining cups/caps to Bell effects/states.
:func:`compile_grammar_meaning` builds the four-qubit template for a
transitive sentence with one-qubit nouns, and :func:`choi_form` bends the
verb into a map to get the three-qubit variant.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .circuit import CNOT, POST, PREP, RX, RZ, SWAP, Circuit, Gate, H, export
from .diagram import Diagram, transitive_roles
from .pregroup import PregroupType

SQRT2 = math.sqrt(2.0)

__all__ = [
    "QubitConfig", "EulerParams", "SvdVerbParams", "CompileError",
    "qubit_count", "word_state_ansatz", "transpose_to_effect", "euler_unitary",
    "compile_bigraph", "compile_grammar_meaning", "choi_form", "fuse_rotations",
    "export",
]


class CompileError(ValueError):
    pass


@dataclass(frozen=True)
class QubitConfig:
    qubits: Mapping[str, int]
    ansatz_depth: int = 1
    aliases: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self):
        if not any(int(v) >= 1 for v in self.qubits.values()):
            raise ValueError("at least one basic type needs a qubit")
        if any(int(v) < 0 for v in self.qubits.values()):
            raise ValueError("negative qubit count")
        if self.ansatz_depth < 0:
            raise ValueError("negative ansatz depth")

    def __getitem__(self, base: str) -> int:
        seen = set()
        while base not in self.qubits and base in self.aliases and base not in seen:
            seen.add(base)
            base = self.aliases[base]
        if base not in self.qubits:
            raise CompileError(f"no qubit count for basic type {base!r}")
        return int(self.qubits[base])


@dataclass(frozen=True)
class EulerParams:
    alpha: object = 0.0
    beta: object = 0.0
    gamma: object = 0.0


@dataclass(frozen=True)
class SvdVerbParams:
    left: EulerParams
    right: EulerParams
    alpha_p: object = 0.0

    @classmethod
    def named(cls, prefix: str) -> "SvdVerbParams":
        return cls(
            EulerParams(f"{prefix}.alpha", f"{prefix}.beta", f"{prefix}.gamma"),
            EulerParams(f"{prefix}.alpha_prime", f"{prefix}.beta_prime",
                        f"{prefix}.gamma_prime"),
            f"{prefix}.alpha_p",
        )


def qubit_count(t: PregroupType, cfg: QubitConfig) -> int:
    return sum(cfg[s.base] for s in t)


def _name(word, layer, q, axis):
    return f"{word}.{layer}.{q}.{axis}"


def word_state_ansatz(word: str, n_qubits: int, depth: int = 1) -> Circuit:
    """
    ``depth`` layers of a CNOT ladder followed by RZ and RX on every qubit,
    applied to ``|0...0>``.  Angles are named ``word.layer.qubit.z|x``.
    """
    if n_qubits < 1:
        raise CompileError("an ansatz needs at least one qubit")
    gates = [PREP(q) for q in range(n_qubits)]
    for layer in range(depth):
        gates.extend(CNOT(q, q + 1) for q in range(n_qubits - 1))
        for q in range(n_qubits):
            gates.append(RZ(q, _name(word, layer, q, "z")))
            gates.append(RX(q, _name(word, layer, q, "x")))
    return Circuit(n_qubits, tuple(gates), tuple(range(n_qubits)),
                   {"word": word, "role": "state"})


_SELF_TRANSPOSE = ("RZ", "RX", "H", "CNOT", "SWAP")


def transpose_to_effect(c: Circuit) -> Circuit:
    """Computational-basis transpose of a state circuit, as an effect."""
    if c.count("POST"):
        raise CompileError("only state circuits can be transposed")
    gates = []
    for g in reversed(c.gates):
        if g.kind == "PREP":
            gates.append(POST(g.qubits[0]))
        elif g.kind in _SELF_TRANSPOSE:
            gates.append(g)
        else:
            raise CompileError(f"no transpose for {g.kind}")
    meta = dict(c.metadata)
    if "role" in meta:
        meta["role"] = "effect"
    return Circuit(c.n_qubits, tuple(gates), (), meta)


def euler_unitary(p: EulerParams, q: int = 0) -> list[Gate]:
    """Gates realising ``Rz(alpha) Rx(beta) Rz(gamma)``, applied right to left."""
    return [RZ(q, p.gamma), RX(q, p.beta), RZ(q, p.alpha)]


def _place(c: Circuit, mapping: Sequence[int]) -> list[Gate]:
    return [g.relabel(mapping) for g in c.gates]


def compile_bigraph(d: Diagram, cfg: QubitConfig,
                    senses: Mapping[str, str] | None = None) -> Circuit:
    """
    Compile a diagram whose nodes are in topological order: states and caps
    create wires, swaps permute them, effects and cups consume them.

    ``senses`` maps words to the prefix of their angle names, so that
    translations can share parameters.
    """
    senses = dict(senses or {})
    base = d.base
    size = {w: cfg[b] for w, b in base.items()}
    where: dict[int, list[int]] = {}
    gates: list[Gate] = []
    n = 0
    scalar = 1.0
    words = []

    def alloc(w):
        nonlocal n
        where[w] = list(range(n, n + size[w]))
        n += size[w]
        return where[w]

    def take(w):
        if w not in where:
            raise CompileError(f"wire {w} consumed before it is created")
        return where.pop(w)

    for node in d.nodes:
        if node.kind == "state":
            qs = [q for w in node.ports for q in alloc(w)]
            if qs:
                ansatz = word_state_ansatz(senses.get(node.word, node.word), len(qs),
                                           cfg.ansatz_depth)
                gates.extend(_place(ansatz, qs))
            words.append({"word": node.word, "role": "state", "qubits": qs})
        elif node.kind == "effect":
            # ansatz qubits follow the word's original port order
            qs = [q for w in reversed(node.ports) for q in take(w)]
            if qs:
                ansatz = word_state_ansatz(senses.get(node.word, node.word), len(qs),
                                           cfg.ansatz_depth)
                gates.extend(_place(transpose_to_effect(ansatz), qs))
            words.append({"word": node.word, "role": "effect", "qubits": qs})
        elif node.kind == "cap":
            a, b = alloc(node.ports[0]), alloc(node.ports[1])
            if len(a) != len(b):
                raise CompileError("qubit budget mismatch along a cap")
            for x, y in zip(a, b):
                gates += [PREP(x), PREP(y), H(x), CNOT(x, y)]
                scalar *= SQRT2
        elif node.kind == "cup":
            a, b = take(node.ports[0]), take(node.ports[1])
            if len(a) != len(b):
                raise CompileError("qubit budget mismatch along a cup")
            for x, y in zip(a, b):
                gates += [CNOT(x, y), H(x), POST(x), POST(y)]
                scalar *= SQRT2
        elif node.kind == "swap":
            i0, i1, o0, o1 = node.ports
            a, b = take(i0), take(i1)
            slots = a + b
            content = ["a"] * len(a) + ["b"] * len(b)
            target = ["b"] * len(b) + ["a"] * len(a)
            # bubble the b qubits in front of the a qubits
            while content != target:
                for i in range(len(content) - 1):
                    if content[i] == "a" and content[i + 1] == "b":
                        gates.append(SWAP(slots[i], slots[i + 1]))
                        content[i], content[i + 1] = "b", "a"
            where[o0] = slots[:len(b)]
            where[o1] = slots[len(b):]
        else:
            raise CompileError(f"cannot compile a {node.kind} node")
    open_qubits = []
    for w in d.outputs:
        open_qubits.extend(take(w))
    if where:
        raise CompileError(f"wires {sorted(where)} are never consumed")
    meta = {
        "form": "bigraph",
        "scalar": scalar,
        "output_sizes": [size[w] for w in d.outputs],
        "words": words,
    }
    return Circuit(n, tuple(gates), tuple(open_qubits), meta)


# grammar + meaning template

def noun_gates(prefix: str, q: int) -> list[Gate]:
    """One-qubit noun state ``Rz(beta) Rx(alpha)|0>``."""
    return [RX(q, f"{prefix}.alpha"), RZ(q, f"{prefix}.beta")]


def _grammar_meaning_gates(subj: str, obj: str, verb: SvdVerbParams) -> list[Gate]:
    s, o, a, b = 0, 1, 2, 3
    gates = [PREP(q) for q in range(4)]
    gates += noun_gates(subj, s) + noun_gates(obj, o)
    # diagonal state P spread over both verb legs, then one Euler block per leg
    gates += [RX(a, verb.alpha_p), CNOT(a, b)]
    gates += euler_unitary(verb.left, a) + euler_unitary(verb.right, b)
    # each leg is copied, one copy meets its noun: spider merge = CNOT + post-select
    gates += [CNOT(a, s), CNOT(b, o), POST(s), POST(o)]
    return gates


def compile_grammar_meaning(d: Diagram, senses: Mapping[str, str] | None = None,
                            target: str = "s") -> Circuit:
    """
    Four-qubit circuit of a positive transitive sentence: qubits 0 and 1 hold
    subject and object, qubits 2 and 3 the reduced verb.  The open wires are
    the subject and object legs of the verb.  Function words are ignored.
    """
    senses = dict(senses or {})
    subj, obj, verb = transitive_roles(d, target)
    ps, po, pv = (senses.get(w, w) for w in (subj, obj, verb))
    gates = _grammar_meaning_gates(ps, po, SvdVerbParams.named(pv))
    meta = {
        "form": "grammar-meaning",
        "template": "transitive",
        "roles": {"subject": subj, "object": obj, "verb": verb},
        "params_prefix": {"subject": ps, "object": po, "verb": pv},
        "scalar": 1.0,
        "output_sizes": [1, 1],
    }
    return Circuit(4, tuple(gates), (2, 3), meta)


def choi_form(c: Circuit, fuse: bool = True) -> Circuit:
    """
    Three-qubit variant of the transitive template.  The object is copied
    onto the verb wire, which then passes through the transposed right Euler
    block, the diagonal state P and the left Euler block before meeting the
    subject.  Qubit 0 is reused: it first carries P, then the subject.
    """
    meta = c.metadata
    if meta.get("template") != "transitive" or meta.get("form") != "grammar-meaning":
        raise CompileError("choi_form expects a grammar-meaning transitive circuit")
    pre = meta["params_prefix"]
    verb = SvdVerbParams.named(pre["verb"])
    if c.n_qubits != 4 or list(c.gates) != _grammar_meaning_gates(
            pre["subject"], pre["object"], verb):
        raise CompileError("circuit is not in template form")
    p, o, x = 0, 1, 2
    r = verb.right
    gates = [PREP(q) for q in range(3)]
    gates += noun_gates(pre["object"], o)
    gates += [RX(p, verb.alpha_p)]
    gates += [CNOT(o, x)]
    gates += [RZ(x, r.alpha), RX(x, r.beta), RZ(x, r.gamma)]
    gates += [CNOT(x, p), POST(p)]
    gates += [PREP(p)] + noun_gates(pre["subject"], p)
    gates += euler_unitary(verb.left, x)
    gates += [CNOT(x, p), POST(p)]
    new_meta = dict(meta)
    new_meta["form"] = "choi"
    new_meta["scalar"] = 1.0
    new_meta["choi_ratio"] = 1.0
    out = Circuit(3, tuple(gates), (x, o), new_meta)
    return fuse_rotations(out) if fuse else out


def _passes(g: Gate, q: int, kind: str) -> bool:
    """Whether a rotation of ``kind`` on ``q`` commutes through ``g``."""
    if q not in g.qubits:
        return True
    if g.kind == "CNOT":
        return (kind == "RZ" and g.qubits[0] == q) or (kind == "RX" and g.qubits[1] == q)
    return False


def fuse_rotations(c: Circuit) -> Circuit:
    """
    Merge same-axis rotations on a qubit when everything in between commutes
    with them (Z through CNOT controls, X through CNOT targets).
    """
    gates = list(c.gates)
    changed = True
    while changed:
        changed = False
        for i, g in enumerate(gates):
            if g.kind not in ("RZ", "RX"):
                continue
            q = g.qubits[0]
            for j in range(i + 1, len(gates)):
                h = gates[j]
                if h.kind == g.kind and h.qubits == g.qubits:
                    gates[j] = Gate(g.kind, g.qubits, g.angle + h.angle)
                    del gates[i]
                    changed = True
                    break
                if not _passes(h, q, g.kind):
                    break
            if changed:
                break
    return Circuit(c.n_qubits, tuple(gates), c.open_qubits, dict(c.metadata))


# word tensors for the contraction oracle

def ansatz_tensors(d: Diagram, cfg: QubitConfig, store,
                   senses: Mapping[str, str] | None = None) -> dict:
    """State tensor of every word's ansatz, one axis per port."""
    from .simulator import state_tensor

    senses = dict(senses or {})
    out = {}
    for _, node in d.words():
        sizes = [cfg[t.base] for t in node.type]
        if sum(sizes) == 0:
            raise CompileError(f"{node.word!r} has no qubits")
        c = word_state_ansatz(senses.get(node.word, node.word), sum(sizes), cfg.ansatz_depth)
        out[node.word] = state_tensor(c, store, sizes)
    return out


def template_oracle(c: Circuit, store) -> tuple[Diagram, dict]:
    """
    Spider diagram and word tensors behind a transitive template circuit, for
    evaluation with :func:`pregcirc.fvect.evaluate` at noun dimension 2.
    """
    from .diagram import transitive_meaning_diagram
    from .simulator import state_tensor

    meta = c.metadata
    if meta.get("template") != "transitive":
        raise CompileError("not a transitive template circuit")
    pre, roles = meta["params_prefix"], meta["roles"]
    verb = SvdVerbParams.named(pre["verb"])
    tensors = {}
    for role in ("subject", "object"):
        noun = Circuit(1, tuple([PREP(0)] + noun_gates(pre[role], 0)), (0,))
        tensors[roles[role]] = state_tensor(noun, store, [1])
    vgates = [PREP(0), PREP(1), RX(0, verb.alpha_p), CNOT(0, 1)]
    vgates += euler_unitary(verb.left, 0) + euler_unitary(verb.right, 1)
    tensors[roles["verb"]] = state_tensor(Circuit(2, tuple(vgates), (0, 1)), store, [1, 1])
    d = transitive_meaning_diagram(roles["subject"], roles["object"], roles["verb"])
    return d, tensors
