"""
Gate-list circuit IR with symbolic angles, JSON round trip and a qasm subset.

Qubits are little-endian: qubit 0 is the least significant bit of an
amplitude index.  ``PREP`` prepares ``|0>`` and ``POST`` post-selects ``|0>``
without renormalising.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping

import numpy as np

GATE_KINDS = {"RZ": 1, "RX": 1, "H": 1, "CNOT": 2, "SWAP": 2, "PREP": 1, "POST": 1}
ROTATIONS = ("RZ", "RX")


class CircuitError(ValueError):
    pass


class UnresolvedAngle(KeyError):
    pass


@dataclass(frozen=True)
class Angle:
    """``const + sum(coeff * value[name])``, kept symbolic until simulation."""

    terms: tuple[tuple[str, float], ...] = ()
    const: float = 0.0

    @classmethod
    def of(cls, x) -> "Angle":
        if isinstance(x, Angle):
            return x
        if isinstance(x, str):
            return cls(((x, 1.0),))
        if isinstance(x, Mapping):
            return cls(tuple(sorted((k, float(v)) for k, v in x.get("terms", {}).items())),
                       float(x.get("const", 0.0)))
        return cls((), float(x))

    def __add__(self, other) -> "Angle":
        other = Angle.of(other)
        acc: dict[str, float] = {}
        for k, v in self.terms + other.terms:
            acc[k] = acc.get(k, 0.0) + v
        terms = tuple(sorted((k, v) for k, v in acc.items() if v != 0.0))
        return Angle(terms, self.const + other.const)

    def __neg__(self) -> "Angle":
        return Angle(tuple((k, -v) for k, v in self.terms), -self.const)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(k for k, _ in self.terms)

    @property
    def is_literal(self) -> bool:
        return not self.terms

    def resolve(self, values: Mapping[str, float]) -> float:
        total = self.const
        for k, v in self.terms:
            if k not in values:
                raise UnresolvedAngle(k)
            total += v * float(values[k])
        return total

    def to_json(self):
        if not self.terms:
            return self.const
        if self.const == 0.0 and len(self.terms) == 1 and self.terms[0][1] == 1.0:
            return self.terms[0][0]
        return {"terms": dict(self.terms), "const": self.const}

    def __str__(self):
        parts = [k if v == 1.0 else f"{v:g}*{k}" for k, v in self.terms]
        if self.const or not parts:
            parts.append(repr(self.const))
        return " + ".join(parts)


@dataclass(frozen=True)
class Gate:
    kind: str
    qubits: tuple[int, ...]
    angle: Angle | None = None

    def __post_init__(self):
        if self.kind not in GATE_KINDS:
            raise CircuitError(f"unknown gate {self.kind!r}")
        object.__setattr__(self, "qubits", tuple(int(q) for q in self.qubits))
        if len(self.qubits) != GATE_KINDS[self.kind]:
            raise CircuitError(f"{self.kind} acts on {GATE_KINDS[self.kind]} qubit(s)")
        if len(set(self.qubits)) != len(self.qubits):
            raise CircuitError(f"{self.kind} needs distinct qubits")
        if (self.kind in ROTATIONS) != (self.angle is not None):
            raise CircuitError(f"angle mismatch for {self.kind}")
        if self.angle is not None:
            object.__setattr__(self, "angle", Angle.of(self.angle))

    def relabel(self, mapping) -> "Gate":
        return Gate(self.kind, tuple(mapping[q] for q in self.qubits), self.angle)

    def to_json(self) -> dict:
        d = {"kind": self.kind, "qubits": list(self.qubits)}
        if self.angle is not None:
            d["angle"] = self.angle.to_json()
        return d

    @classmethod
    def from_json(cls, d) -> "Gate":
        angle = d.get("angle")
        return cls(d["kind"], tuple(d["qubits"]), None if angle is None else Angle.of(angle))


def RZ(q, angle):
    return Gate("RZ", (q,), Angle.of(angle))


def RX(q, angle):
    return Gate("RX", (q,), Angle.of(angle))


def H(q):
    return Gate("H", (q,))


def CNOT(ctrl, tgt):
    return Gate("CNOT", (ctrl, tgt))


def SWAP(a, b):
    return Gate("SWAP", (a, b))


def PREP(q):
    return Gate("PREP", (q,))


def POST(q):
    return Gate("POST", (q,))


@dataclass(frozen=True)
class Circuit:
    n_qubits: int
    gates: tuple[Gate, ...] = ()
    open_qubits: tuple[int, ...] = ()
    metadata: dict = field(default_factory=dict, compare=True)

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(self.gates))
        object.__setattr__(self, "open_qubits", tuple(self.open_qubits))
        for g in self.gates:
            if any(not 0 <= q < self.n_qubits for q in g.qubits):
                raise CircuitError(f"{g.kind} on qubit out of range {g.qubits}")
        if any(not 0 <= q < self.n_qubits for q in self.open_qubits):
            raise CircuitError("open qubit out of range")
        if len(set(self.open_qubits)) != len(self.open_qubits):
            raise CircuitError("repeated open qubit")
        if set(self.open_qubits) & set(self.postselected):
            raise CircuitError("open qubits cannot be post-selected")

    @property
    def postselected(self) -> tuple[int, ...]:
        return tuple(sorted({g.qubits[0] for g in self.gates if g.kind == "POST"}))

    @property
    def params(self) -> tuple[str, ...]:
        seen: dict[str, None] = {}
        for g in self.gates:
            if g.angle is not None:
                for k in g.angle.names:
                    seen.setdefault(k)
        return tuple(seen)

    @property
    def scalar(self) -> float:
        return float(self.metadata.get("scalar", 1.0))

    def count(self, kind: str) -> int:
        return sum(1 for g in self.gates if g.kind == kind)

    def to_dict(self) -> dict:
        return {
            "n_qubits": self.n_qubits,
            "gates": [g.to_json() for g in self.gates],
            "open_qubits": list(self.open_qubits),
            "params": list(self.params),
            "metadata": dict(self.metadata),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @classmethod
    def from_dict(cls, d) -> "Circuit":
        return cls(int(d["n_qubits"]),
                   tuple(Gate.from_json(g) for g in d["gates"]),
                   tuple(d.get("open_qubits", ())),
                   dict(d.get("metadata", {})))

    @classmethod
    def from_json(cls, text: str) -> "Circuit":
        return cls.from_dict(json.loads(text))


def cnot_layers(c: Circuit) -> list[list[Gate]]:
    """Greedy as-soon-as-possible layering of the CNOTs of ``c``."""
    depth = [0] * c.n_qubits
    layers: list[list[Gate]] = []
    for g in c.gates:
        if g.kind in ("PREP", "POST"):
            continue
        t = max(depth[q] for q in g.qubits)
        if g.kind == "CNOT":
            while len(layers) <= t:
                layers.append([])
            layers[t].append(g)
            for q in g.qubits:
                depth[q] = t + 1
    return [layer for layer in layers if layer]


# parameters

@dataclass
class ParameterStore:
    """Angle values by name plus names excluded from optimisation."""

    values: dict[str, float] = field(default_factory=dict)
    frozen: frozenset = frozenset()

    def __getitem__(self, name):
        return self.values[name]

    def __contains__(self, name):
        return name in self.values

    def copy(self) -> "ParameterStore":
        return ParameterStore(dict(self.values), frozenset(self.frozen))

    def updated(self, new: Mapping[str, float]) -> "ParameterStore":
        vals = dict(self.values)
        vals.update({k: float(v) for k, v in new.items()})
        return ParameterStore(vals, self.frozen)

    def trainable(self) -> list[str]:
        return sorted(k for k in self.values if k not in self.frozen)

    def vector(self, names) -> np.ndarray:
        return np.array([self.values[k] for k in names], dtype=float)

    def with_vector(self, names, vec) -> "ParameterStore":
        return self.updated(dict(zip(names, (float(v) for v in vec))))

    @classmethod
    def random(cls, names: Iterable[str], seed: int = 0, frozen=()) -> "ParameterStore":
        names = sorted(set(names))
        rng = np.random.default_rng(seed)
        vals = rng.uniform(0.0, 2 * math.pi, size=len(names))
        return cls(dict(zip(names, (float(v) for v in vals))), frozenset(frozen))

    @classmethod
    def zeros(cls, names: Iterable[str]) -> "ParameterStore":
        return cls({k: 0.0 for k in names})

    def to_dict(self) -> dict:
        return {"values": dict(sorted(self.values.items())), "frozen": sorted(self.frozen)}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @classmethod
    def from_dict(cls, d) -> "ParameterStore":
        if "values" not in d:
            return cls({k: float(v) for k, v in d.items()})
        return cls({k: float(v) for k, v in d["values"].items()}, frozenset(d.get("frozen", ())))


# export

def to_qasm(c: Circuit, store: ParameterStore | Mapping[str, float] | None = None) -> str:
    """
    OpenQASM 2 subset.  ``PREP`` becomes ``reset``; ``POST`` a ``measure``
    annotated with the post-selected outcome.  All angles must resolve.
    """
    values = store.values if isinstance(store, ParameterStore) else (store or {})
    n_post = c.count("POST")
    lines = ["OPENQASM 2.0;", 'include "qelib1.inc";']
    if c.n_qubits:
        lines.append(f"qreg q[{c.n_qubits}];")
    if n_post:
        lines.append(f"creg c[{n_post}];")
    k = 0
    for g in c.gates:
        q = g.qubits
        if g.kind == "PREP":
            lines.append(f"reset q[{q[0]}];")
        elif g.kind == "POST":
            lines.append(f"measure q[{q[0]}] -> c[{k}];  // postselect 0")
            k += 1
        elif g.kind in ROTATIONS:
            try:
                theta = g.angle.resolve(values)
            except UnresolvedAngle as e:
                raise CircuitError(f"unresolved angle {e.args[0]!r} in qasm export") from None
            lines.append(f"{g.kind.lower()}({theta!r}) q[{q[0]}];")
        elif g.kind == "H":
            lines.append(f"h q[{q[0]}];")
        elif g.kind == "CNOT":
            lines.append(f"cx q[{q[0]}],q[{q[1]}];")
        elif g.kind == "SWAP":
            lines.append(f"swap q[{q[0]}],q[{q[1]}];")
    if c.open_qubits:
        lines.append("// open " + " ".join(f"q[{q}]" for q in c.open_qubits))
    return "\n".join(lines) + "\n"


def export(c: Circuit, fmt: str = "json", store=None) -> bytes:
    if fmt == "json":
        return c.to_json().encode()
    if fmt in ("qasm", "qasm-subset"):
        return to_qasm(c, store).encode()
    raise CircuitError(f"unknown export format {fmt!r}")
