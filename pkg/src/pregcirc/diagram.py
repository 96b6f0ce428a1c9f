"""
String diagrams as port graphs, plus the rewrites used before compilation.

A diagram is a list of nodes whose ports name wires by integer id, and an
ordered list of output wires.  Every wire has exactly two endpoints, counting
an output slot as an endpoint.  Node kinds:

``state``   a word box with its type's simples as output ports
``effect``  a transposed word, ports in reverse order
``cup``     two wires joined below (evaluation)
``cap``     two wires joined above (coevaluation)
``swap``    ports ``(in0, in1, out0, out1)``; ``out0`` continues ``in1``
``spider``  copy/merge node, a Kronecker delta over all its legs
"""
from __future__ import annotations

import json
from collections import Counter, deque
from dataclasses import dataclass, field, replace
from typing import Iterable, Sequence

from .pregroup import PregroupType, ReductionLinkage, SimpleType

WORD_KINDS = ("state", "effect")
KINDS = ("state", "effect", "cup", "cap", "swap", "spider")


class DiagramError(ValueError):
    pass


@dataclass(frozen=True)
class Node:
    kind: str
    ports: tuple[int, ...]
    word: str | None = None
    type: PregroupType | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise DiagramError(f"unknown node kind {self.kind!r}")
        object.__setattr__(self, "ports", tuple(self.ports))
        if self.kind in ("cup", "cap") and len(self.ports) != 2:
            raise DiagramError(f"{self.kind} needs exactly 2 ports")
        if self.kind == "swap" and len(self.ports) != 4:
            raise DiagramError("swap needs exactly 4 ports")
        if self.kind in WORD_KINDS:
            if self.word is None or self.type is None:
                raise DiagramError("word nodes need a word and a type")
            if len(self.type) != len(self.ports):
                raise DiagramError(
                    f"{self.word!r}: {len(self.ports)} ports for type {self.type}")

    @property
    def is_word(self) -> bool:
        return self.kind in WORD_KINDS

    def port_simples(self) -> tuple[SimpleType, ...]:
        """Simple type carried by each port, in port order."""
        simples = tuple(self.type)
        return simples[::-1] if self.kind == "effect" else simples


@dataclass(frozen=True)
class Diagram:
    nodes: tuple[Node, ...]
    outputs: tuple[int, ...]
    wires: tuple[tuple[int, str], ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(self.nodes))
        object.__setattr__(self, "outputs", tuple(self.outputs))
        object.__setattr__(self, "wires", tuple(sorted(self.wires)))

    @property
    def base(self) -> dict[int, str]:
        return dict(self.wires)

    def words(self) -> list[tuple[int, Node]]:
        return [(k, n) for k, n in enumerate(self.nodes) if n.is_word]

    def count(self, kind: str) -> int:
        return sum(1 for n in self.nodes if n.kind == kind)

    def endpoints(self) -> dict[int, list[tuple[int, int]]]:
        """Map wire id to its endpoints ``(node index, port index)``; outputs use node -1."""
        ends: dict[int, list[tuple[int, int]]] = {}
        for k, node in enumerate(self.nodes):
            for p, w in enumerate(node.ports):
                ends.setdefault(w, []).append((k, p))
        for p, w in enumerate(self.outputs):
            ends.setdefault(w, []).append((-1, p))
        return ends

    def check(self) -> "Diagram":
        ends = self.endpoints()
        base = self.base
        for w, e in ends.items():
            if len(e) != 2:
                raise DiagramError(f"wire {w} has {len(e)} endpoints")
            if w not in base:
                raise DiagramError(f"wire {w} has no base type")
        if set(base) != set(ends):
            raise DiagramError("dangling wire declarations")
        for node in self.nodes:
            if node.kind in ("cup", "cap") and base[node.ports[0]] != base[node.ports[1]]:
                raise DiagramError(f"{node.kind} joins different bases")
            if node.is_word:
                for w, t in zip(node.ports, node.port_simples()):
                    if base[w] != t.base:
                        raise DiagramError(f"wire {w} base mismatch at {node.word!r}")
        return self

    def to_dict(self) -> dict:
        nodes = []
        for n in self.nodes:
            d = {"kind": n.kind, "ports": list(n.ports)}
            if n.is_word:
                d["word"] = n.word
                d["type"] = str(n.type)
            nodes.append(d)
        return {"nodes": nodes, "outputs": list(self.outputs),
                "wires": {str(w): b for w, b in self.wires}}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @classmethod
    def from_dict(cls, data: dict) -> "Diagram":
        from .pregroup import parse_type
        nodes = []
        for d in data["nodes"]:
            ty = parse_type(d["type"]) if "type" in d else None
            nodes.append(Node(d["kind"], tuple(d["ports"]), d.get("word"), ty))
        wires = tuple((int(w), b) for w, b in data["wires"].items())
        return cls(tuple(nodes), tuple(data["outputs"]), wires).check()

    def to_dot(self) -> str:
        lines = ["graph diagram {", "  rankdir=TB;"]
        for k, n in enumerate(self.nodes):
            label = n.word if n.is_word else n.kind
            shape = {"state": "invtriangle", "effect": "triangle"}.get(n.kind, "point")
            if n.is_word:
                lines.append(f'  n{k} [label="{label}", shape={shape}];')
            else:
                lines.append(f'  n{k} [label="", xlabel="{label}", shape={shape}];')
        for p, _ in enumerate(self.outputs):
            lines.append(f'  out{p} [label="out{p}", shape=plaintext];')
        base = self.base
        for w, (a, b) in sorted(self.endpoints().items()):
            na = f"n{a[0]}" if a[0] >= 0 else f"out{a[1]}"
            nb = f"n{b[0]}" if b[0] >= 0 else f"out{b[1]}"
            lines.append(f'  {na} -- {nb} [label="{base.get(w, "")}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def _fresh(d: Diagram) -> int:
    ids = [w for w, _ in d.wires]
    return max(ids) + 1 if ids else 0


def from_reduction(words: Sequence[tuple[str, PregroupType]],
                   linkage: ReductionLinkage) -> Diagram:
    """One state per word, one cup per linked pair, survivors as outputs."""
    flat = tuple(t for _, ty in words for t in ty)
    if flat != tuple(linkage.flat):
        raise DiagramError("linkage was computed for different types")
    n = len(flat)
    for i, j in linkage.cups:
        if not (0 <= i < n and 0 <= j < n):
            raise DiagramError(f"cup ({i}, {j}) out of range")
    nodes = []
    k = 0
    for word, ty in words:
        nodes.append(Node("state", tuple(range(k, k + len(ty))), word, ty))
        k += len(ty)
    nodes.extend(Node("cup", (i, j)) for i, j in sorted(linkage.cups))
    wires = tuple((i, t.base) for i, t in enumerate(flat))
    return Diagram(tuple(nodes), tuple(linkage.survivors), wires).check()


def substitute_cap_words(d: Diagram, cap_words: Iterable[str]) -> Diagram:
    """Replace the named two-wire words by bare caps."""
    cap_words = set(cap_words)
    nodes = []
    for node in d.nodes:
        if node.kind == "state" and node.word in cap_words:
            simples = node.port_simples()
            if len(simples) != 2 or simples[0].base != simples[1].base:
                raise DiagramError(f"{node.word!r} of type {node.type} cannot be a cap")
            nodes.append(Node("cap", node.ports))
        else:
            nodes.append(node)
    return replace(d, nodes=tuple(nodes)).check()


def _rename(nodes: list[Node], outputs: list[int], old: int, new: int):
    for k, node in enumerate(nodes):
        if old in node.ports:
            nodes[k] = replace(node, ports=tuple(new if w == old else w for w in node.ports))
    for p, w in enumerate(outputs):
        if w == old:
            outputs[p] = new


def _yank_once(d: Diagram) -> Diagram | None:
    nodes = list(d.nodes)
    for ci, cap in enumerate(nodes):
        if cap.kind != "cap":
            continue
        for ki, cup in enumerate(nodes):
            if cup.kind != "cup":
                continue
            shared = set(cap.ports) & set(cup.ports)
            if len(shared) != 1:
                continue
            (mid,) = shared
            keep = cap.ports[1] if cap.ports[0] == mid else cap.ports[0]
            gone = cup.ports[1] if cup.ports[0] == mid else cup.ports[0]
            rest = [n for k, n in enumerate(nodes) if k not in (ci, ki)]
            outputs = list(d.outputs)
            _rename(rest, outputs, gone, keep)
            wires = tuple((w, b) for w, b in d.wires if w not in (mid, gone))
            return Diagram(tuple(rest), tuple(outputs), wires)
    return None


def snake_removal(d: Diagram) -> Diagram:
    """Straighten every cap-cup zig-zag until none is left."""
    while True:
        nxt = _yank_once(d)
        if nxt is None:
            return d.check()
        d = nxt


def find_root(d: Diagram, target: str = "s") -> int:
    roots = [k for k, n in d.words()
             if any(t.base == target and t.z == 0 for t in n.type)]
    if len(roots) != 1:
        raise DiagramError(f"expected a unique root word, found {len(roots)}")
    return roots[0]


def _trace(d: Diagram, ends, start: tuple[int, int]) -> tuple[int, int]:
    """Follow a wire from a word port through cups, caps and swaps."""
    node_k, port = start
    w = d.nodes[node_k].ports[port]
    while True:
        a, b = ends[w]
        other = b if a == (node_k, port) else a
        if other[0] < 0 or d.nodes[other[0]].is_word:
            return other
        node = d.nodes[other[0]]
        if node.kind in ("cup", "cap"):
            nxt = 1 - other[1]
        elif node.kind == "swap":
            nxt = {0: 3, 1: 2, 2: 1, 3: 0}[other[1]]
        else:
            raise DiagramError(f"cannot trace through a {node.kind}")
        node_k, port = other[0], nxt
        w = node.ports[port]


def word_links(d: Diagram) -> dict[tuple[int, int], tuple[int, int]]:
    """Map each word port to the word port or output (node -1) it reaches."""
    ends = d.endpoints()
    links = {}
    for k, node in d.words():
        for p in range(len(node.ports)):
            links[(k, p)] = _trace(d, ends, (k, p))
    return links


def _node_distances(d: Diagram, target: str) -> dict[int, int]:
    root = find_root(d, target)
    adj: dict[int, set[int]] = {k: set() for k, _ in d.words()}
    for (k, _), (m, _) in word_links(d).items():
        if m >= 0 and m != k:
            adj[k].add(m)
    dist = {root: 0}
    queue = deque([root])
    while queue:
        k = queue.popleft()
        for m in sorted(adj[k]):
            if m not in dist:
                dist[m] = dist[k] + 1
                queue.append(m)
    if len(dist) != len(adj):
        raise DiagramError("word graph is disconnected")
    return dist


def distance_from_root(d: Diagram, target: str = "s") -> dict[str, int]:
    """BFS distance of every word from the root on the word-adjacency graph."""
    dist = _node_distances(d, target)
    names = Counter(d.nodes[k].word for k in dist)
    out = {}
    seen: Counter = Counter()
    for k in sorted(dist):
        w = d.nodes[k].word
        if names[w] > 1:
            seen[w] += 1
            w = f"{w}#{seen[w]}"
        out[w] = dist[k]
    return out


def bigraph_rewrite(d: Diagram, target: str = "s") -> Diagram:
    """
    Transpose words at odd distance from the root into effects.

    The result lists states first (word order), then the swaps of a bubble
    sort that brings state wires into effect order, then the effects.  Open
    wires are sorted after all effect ports.
    """
    d = snake_removal(d)
    if d.count("cap") or d.count("spider"):
        raise DiagramError("bigraph rewrite needs a diagram without caps or spiders")
    dist = _node_distances(d, target)
    links = word_links(d)
    for (k, p), (m, q) in links.items():
        if m >= 0 and dist[k] % 2 == dist[m] % 2:
            raise DiagramError("word graph is not bipartite")
        if m < 0 and dist[k] % 2:
            raise DiagramError("open wire on a word at odd distance")

    states = [k for k, _ in d.words() if dist[k] % 2 == 0]
    effects = [k for k, _ in d.words() if dist[k] % 2 == 1]
    base = d.base

    # bottom slot of each (word, original port), effects use reversed ports
    slot: dict[tuple[int, int], int] = {}
    s = 0
    for k in effects:
        for p in reversed(range(len(d.nodes[k].ports))):
            slot[(k, p)] = s
            s += 1
    for p, _ in enumerate(d.outputs):
        slot[(-1, p)] = s
        s += 1

    nodes: list[Node] = []
    wires: dict[int, str] = {}
    seq: list[int] = []
    key: list[int] = []
    nid = 0
    for k in states:
        node = d.nodes[k]
        ports = []
        for p in range(len(node.ports)):
            wires[nid] = base[node.ports[p]]
            ports.append(nid)
            seq.append(nid)
            key.append(slot[links[(k, p)]])
            nid += 1
        nodes.append(Node("state", tuple(ports), node.word, node.type))

    changed = True
    while changed:
        changed = False
        for i in range(len(seq) - 1):
            if key[i] > key[i + 1]:
                a, b = seq[i], seq[i + 1]
                wires[nid], wires[nid + 1] = wires[b], wires[a]
                nodes.append(Node("swap", (a, b, nid, nid + 1)))
                seq[i], seq[i + 1] = nid, nid + 1
                key[i], key[i + 1] = key[i + 1], key[i]
                nid += 2
                changed = True

    at_slot = dict(zip(key, seq))
    for k in effects:
        node = d.nodes[k]
        ports = [at_slot[slot[(k, p)]] for p in reversed(range(len(node.ports)))]
        nodes.append(Node("effect", tuple(ports), node.word, node.type))
    outputs = tuple(at_slot[slot[(-1, p)]] for p in range(len(d.outputs)))
    return Diagram(tuple(nodes), outputs, tuple(wires.items())).check()


def is_bipartite_layered(d: Diagram) -> bool:
    kinds = [n.kind for n in d.nodes if n.is_word]
    return "state" not in kinds[kinds.index("effect"):] if "effect" in kinds else True


def has_snake(d: Diagram) -> bool:
    return _yank_once(d) is not None


def transitive_roles(d: Diagram, target: str = "s") -> tuple[str, str, str]:
    """
    ``(subject, object, verb)`` of a positive transitive sentence diagram.

    The verb is the root word; its subject leg is the right adjoint directly
    left of the sentence wire, the object leg is its other noun leg.  Two-port
    function words met on the way ('ra', 'the') are passed through.
    """
    root = find_root(d, target)
    verb = d.nodes[root]
    simples = verb.port_simples()
    s_at = [p for p, t in enumerate(simples) if t.base == target and t.z == 0]
    legs = [p for p in range(len(simples)) if p not in s_at]
    if len(s_at) != 1 or len(legs) != 2:
        raise DiagramError(f"{verb.word!r} is not a transitive verb")
    subj_leg = s_at[0] - 1
    if subj_leg not in legs or simples[subj_leg].z != 1:
        raise DiagramError(f"{verb.word!r} has no subject leg")
    obj_leg = legs[0] if legs[1] == subj_leg else legs[1]
    links = word_links(d)

    def follow(start):
        seen = set()
        k, p = links[start]
        while k >= 0 and len(d.nodes[k].ports) == 2 and k not in seen:
            seen.add(k)
            k, p = links[(k, 1 - p)]
        if k < 0 or len(d.nodes[k].ports) != 1:
            raise DiagramError("verb leg does not end in a noun")
        return d.nodes[k].word

    return follow((root, subj_leg)), follow((root, obj_leg)), verb.word


def transitive_meaning_diagram(subject: str, obj: str, verb: str,
                               noun: str = "n") -> Diagram:
    """
    Nouns and a two-leg reduced verb, each verb leg copied by a spider: one
    copy is cupped with its noun, the other is open.  Outputs are
    ``(subject leg, object leg)``.
    """
    nn = PregroupType((SimpleType(noun), SimpleType(noun)))
    n1 = PregroupType((SimpleType(noun),))
    nodes = (
        Node("state", (0,), subject, n1),
        Node("state", (1,), obj, n1),
        Node("state", (2, 3), verb, nn),
        Node("spider", (2, 4, 6)),
        Node("spider", (3, 5, 7)),
        Node("cup", (0, 4)),
        Node("cup", (1, 5)),
    )
    return Diagram(nodes, (6, 7), tuple((w, noun) for w in range(8))).check()
