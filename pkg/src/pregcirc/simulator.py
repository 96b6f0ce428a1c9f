"""
Dense statevector simulation with post-selection.

The state is kept as a tensor with one axis per qubit (axis ``q`` is qubit
``q``).  Post-selection projects onto ``|0>`` and never renormalises, so
amplitudes of composed processes multiply exactly.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .circuit import Circuit, ParameterStore, UnresolvedAngle

MAX_UNITARY_QUBITS = 10
MAX_QUBITS = 20

_H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)


class SimulationError(ValueError):
    pass


def rz(theta: float) -> np.ndarray:
    return np.array([[np.exp(-0.5j * theta), 0], [0, np.exp(0.5j * theta)]])


def rx(theta: float) -> np.ndarray:
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    return np.array([[c, -1j * s], [-1j * s, c]])


@dataclass(frozen=True)
class MeaningState:
    open_qubits: tuple[int, ...]
    vector: np.ndarray
    scalar: float = 1.0

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.vector))

    def tensor(self, sizes: Sequence[int] | None = None) -> np.ndarray:
        """Amplitudes grouped into wires of ``sizes`` qubits each."""
        if sizes is None:
            sizes = [1] * len(self.open_qubits)
        return to_wire_tensor(self.vector, sizes)

    def to_dict(self) -> dict:
        return {
            "open_qubits": list(self.open_qubits),
            "amplitudes": [[float(z.real), float(z.imag)] for z in self.vector],
            "scalar": self.scalar,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @classmethod
    def from_dict(cls, d) -> "MeaningState":
        vec = np.array([complex(a, b) for a, b in d["amplitudes"]])
        return cls(tuple(d["open_qubits"]), vec, float(d.get("scalar", 1.0)))


def to_wire_tensor(vec, sizes: Sequence[int]) -> np.ndarray:
    """
    Regroup a little-endian vector over ``sum(sizes)`` qubits into a tensor
    with one axis per wire; each wire index is little-endian in its qubits.
    """
    vec = np.asarray(vec)
    m = int(sum(sizes))
    if vec.shape != (2 ** m,):
        raise SimulationError(f"vector of length {vec.shape} for {m} qubits")
    if m == 0:
        return vec.reshape(())
    t = vec.reshape((2,) * m).transpose(tuple(reversed(range(m))))
    perm, o = [], 0
    for c in sizes:
        perm.extend(reversed(range(o, o + c)))
        o += c
    return t.transpose(perm).reshape(tuple(2 ** c for c in sizes))


def _values(store) -> Mapping[str, float]:
    if store is None:
        return {}
    if isinstance(store, ParameterStore):
        return store.values
    return store


def _apply_1q(state, m, q):
    state = np.tensordot(m, state, axes=([1], [q]))
    return np.moveaxis(state, 0, q)


def _apply_cnot(state, c, t):
    s = np.moveaxis(state, (c, t), (0, 1)).copy()
    s[1] = s[1, ::-1].copy()
    return np.moveaxis(s, (0, 1), (c, t))


def _apply_gate(state, g, values):
    k = g.kind
    if k == "RZ":
        return _apply_1q(state, rz(g.angle.resolve(values)), g.qubits[0])
    if k == "RX":
        return _apply_1q(state, rx(g.angle.resolve(values)), g.qubits[0])
    if k == "H":
        return _apply_1q(state, _H, g.qubits[0])
    if k == "CNOT":
        return _apply_cnot(state, *g.qubits)
    if k == "SWAP":
        return np.swapaxes(state, *g.qubits)
    raise SimulationError(k)


def simulate(c: Circuit, store=None, initial=None) -> MeaningState:
    """
    Run ``c`` from ``|0...0>``, or from ``initial`` (a little-endian vector on
    all qubits, which then count as prepared).
    """
    n = c.n_qubits
    if n > MAX_QUBITS:
        raise SimulationError(f"{n} qubits is too many")
    values = _values(store)
    if initial is None:
        state = np.zeros((2,) * n, dtype=complex)
        state[(0,) * n] = 1.0
        live: set[int] = set()
    else:
        initial = np.asarray(initial, dtype=complex)
        if initial.shape != (2 ** n,):
            raise SimulationError("initial state has the wrong length")
        state = initial.reshape((2,) * n).transpose(tuple(reversed(range(n)))).copy()
        live = set(range(n))
    touched = set(live)
    dead: set[int] = set()
    try:
        for g in c.gates:
            if g.kind == "PREP":
                q = g.qubits[0]
                if q in live:
                    raise SimulationError(f"qubit {q} prepared while in use")
                live.add(q)
                dead.discard(q)
                touched.add(q)
                continue
            for q in g.qubits:
                if q not in live:
                    raise SimulationError(f"{g.kind} on unprepared qubit {q}")
            if g.kind == "POST":
                q = g.qubits[0]
                idx = [slice(None)] * n
                idx[q] = 1
                state[tuple(idx)] = 0.0
                live.discard(q)
                dead.add(q)
            else:
                state = _apply_gate(state, g, values)
    except UnresolvedAngle as e:
        raise SimulationError(f"unresolved angle {e.args[0]!r}") from None
    stray = live - set(c.open_qubits)
    if stray:
        raise SimulationError(f"qubits {sorted(stray)} neither open nor post-selected")
    for q in c.open_qubits:
        if q not in live:
            raise SimulationError(f"open qubit {q} is not live")
    # every non-open qubit is now |0>
    idx = tuple(slice(None) if q in c.open_qubits else 0 for q in range(n))
    rest = [q for q in range(n) if q in c.open_qubits]
    sub = state[idx]
    order = [rest.index(q) for q in c.open_qubits]
    sub = np.transpose(sub, order) if order else sub
    vec = np.transpose(sub, tuple(reversed(range(len(order))))).reshape(-1)
    scalar = c.scalar
    return MeaningState(c.open_qubits, vec * scalar, scalar)


def amplitude(c: Circuit, store=None, initial=None) -> complex:
    if c.open_qubits:
        raise SimulationError("amplitude needs a circuit without open qubits")
    return complex(simulate(c, store, initial).vector[0])


def fidelity(a, b) -> float:
    """``|<a|b>|^2 / (|a|^2 |b|^2)`` for meaning states or plain vectors."""
    va = a.vector if isinstance(a, MeaningState) else np.asarray(a)
    vb = b.vector if isinstance(b, MeaningState) else np.asarray(b)
    va, vb = va.reshape(-1), vb.reshape(-1)
    if va.shape != vb.shape:
        raise SimulationError("meaning states live on different numbers of qubits")
    na, nb = np.vdot(va, va).real, np.vdot(vb, vb).real
    if na == 0.0 or nb == 0.0:
        raise SimulationError("fidelity of a zero vector")
    f = abs(np.vdot(va, vb)) ** 2 / (na * nb)
    return float(min(max(f, 0.0), 1.0))


def circuit_unitary(c: Circuit, store=None) -> np.ndarray:
    """
    The ``2^n x 2^n`` matrix of the gates of ``c`` in little-endian order;
    preparations and post-selections are skipped.
    """
    n = c.n_qubits
    if n > MAX_UNITARY_QUBITS:
        raise SimulationError(f"{n} qubits is too many for a unitary")
    values = _values(store)
    dim = 2 ** n
    # axes: qubits 0..n-1, then the column index
    u = np.eye(dim, dtype=complex).reshape((2,) * n + (dim,))
    u = np.moveaxis(u.reshape((2,) * n + (dim,)), tuple(range(n)), tuple(reversed(range(n))))
    try:
        for g in c.gates:
            if g.kind in ("PREP", "POST"):
                continue
            u = _apply_gate(u, g, values)
    except UnresolvedAngle as e:
        raise SimulationError(f"unresolved angle {e.args[0]!r}") from None
    u = np.moveaxis(u, tuple(reversed(range(n))), tuple(range(n)))
    return u.reshape(dim, dim)


def state_tensor(c: Circuit, store=None, sizes: Sequence[int] | None = None) -> np.ndarray:
    """Statevector of a state circuit via its unitary, grouped into wires."""
    vec = circuit_unitary(c, store)[:, 0]
    return to_wire_tensor(vec, sizes if sizes is not None else [1] * c.n_qubits)
