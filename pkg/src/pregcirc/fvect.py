"""
Tensor semantics: the functor into finite dimensional vector spaces.

Every type is sent to a tensor product of spaces, adjoints to the same space
(real bases make ``V^l = V^r = V``), cups to ``epsilon`` and caps to ``eta``.
Diagrams are evaluated by a single ``einsum`` over the port graph.  All
tensors are complex ``numpy`` arrays so that the same contraction serves as
the oracle for circuits.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .diagram import Diagram, DiagramError


class ShapeError(ValueError):
    pass


@dataclass(frozen=True)
class DimConfig:
    dims: Mapping[str, int]
    aliases: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self):
        for b, v in self.dims.items():
            if int(v) < 1:
                raise ValueError(f"dimension of {b!r} must be positive")

    def __getitem__(self, base: str) -> int:
        seen = set()
        while base not in self.dims and base in self.aliases and base not in seen:
            seen.add(base)
            base = self.aliases[base]
        try:
            return int(self.dims[base])
        except KeyError:
            raise ShapeError(f"no dimension for basic type {base!r}") from None


def eta(dim: int) -> np.ndarray:
    """The cap ``1 -> sum_i e_i (x) e_i`` as an order-2 tensor."""
    return np.eye(dim, dtype=complex)


def epsilon(dim: int) -> np.ndarray:
    """The cup ``v_i (x) w_j -> <v_i|w_j>``; same entries as :func:`eta`."""
    return np.eye(dim, dtype=complex)


def delta(dim: int, legs: int) -> np.ndarray:
    t = np.zeros((dim,) * legs, dtype=complex)
    idx = np.arange(dim)
    t[(idx,) * legs] = 1.0
    return t


def swap_tensor(d0: int, d1: int) -> np.ndarray:
    """Ports ``(in0, in1, out0, out1)`` with ``out0 = in1`` and ``out1 = in0``."""
    return np.einsum("ad,bc->abcd", np.eye(d0), np.eye(d1)).astype(complex)


def _node_tensor(node, dims_of, lexicon):
    if node.kind in ("state", "effect"):
        if node.word not in lexicon:
            raise KeyError(f"no tensor for word {node.word!r}")
        t = np.asarray(lexicon[node.word], dtype=complex)
        if node.kind == "effect":
            t = np.transpose(t)
    elif node.kind in ("cup", "cap"):
        t = np.eye(dims_of[0], dtype=complex)
    elif node.kind == "swap":
        t = swap_tensor(dims_of[0], dims_of[1])
    elif node.kind == "spider":
        t = delta(dims_of[0], len(node.ports))
    else:
        raise DiagramError(node.kind)
    if tuple(t.shape) != tuple(dims_of):
        name = node.word or node.kind
        raise ShapeError(f"{name}: tensor shape {t.shape} != wire dims {tuple(dims_of)}")
    return t


def evaluate(d: Diagram, lexicon: Mapping[str, np.ndarray], cfg: DimConfig) -> np.ndarray:
    """
    Contract the diagram.  Returns the tensor on ``d.outputs`` (0-d when the
    diagram is closed).
    """
    base = d.base
    wdim = {w: cfg[b] for w, b in base.items()}
    label = {w: i for i, w in enumerate(sorted(base))}
    if len(label) > 52:
        raise ShapeError("diagram too large for einsum")
    operands = []
    for node in d.nodes:
        dims_of = [wdim[w] for w in node.ports]
        operands.append(_node_tensor(node, dims_of, lexicon))
        operands.append([label[w] for w in node.ports])
    out = [label[w] for w in d.outputs]
    if not d.nodes:
        return np.ones((), dtype=complex)
    if len(d.nodes) == 1:
        return np.einsum(*operands, out)
    return np.einsum(*operands, out, optimize="greedy")


# truth-theoretic and corpus models

def truth_verb(alpha, n_dim: int | None = None) -> np.ndarray:
    """
    Verb tensor ``sum_ji n_j (x) n_i (x) alpha_ji 1`` of shape ``(N, N, 1)``;
    ``j`` indexes objects, ``i`` subjects.
    """
    alpha = np.asarray(alpha, dtype=float)
    if alpha.ndim != 2 or alpha.shape[0] != alpha.shape[1]:
        raise ShapeError("alpha must be a square matrix")
    if n_dim is not None and alpha.shape[0] != n_dim:
        raise ShapeError(f"alpha is {alpha.shape}, N = {n_dim}")
    if np.any(alpha < 0) or np.any(alpha > 1):
        raise ValueError("degrees of truth must lie in [0, 1]")
    return alpha.astype(complex)[:, :, None]


def indicator(indices, dim: int) -> np.ndarray:
    v = np.zeros(dim, dtype=complex)
    for k in indices:
        if not 0 <= k < dim:
            raise IndexError(f"basis index {k} out of range")
        v[k] += 1.0
    return v


def truth_sentence_meaning(sub_indices, obj_indices, alpha) -> float:
    """Sum of the degrees of truth over all (object, subject) index pairs."""
    alpha = np.asarray(alpha, dtype=float)
    n = alpha.shape[0]
    for k in list(sub_indices) + list(obj_indices):
        if not 0 <= k < n:
            raise IndexError(f"basis index {k} out of range")
    return float(sum(alpha[l, k] for k in sub_indices for l in obj_indices))


def verb_from_corpus(pairs: Sequence[tuple[Sequence[float], Sequence[float]]]) -> np.ndarray:
    """Sum of ``obj (x) sub`` over the (object, subject) pairs of a corpus."""
    if not pairs:
        raise ValueError("empty corpus")
    dim = None
    total = None
    for obj, sub in pairs:
        obj, sub = np.asarray(obj, dtype=float), np.asarray(sub, dtype=float)
        if dim is None:
            dim = (obj.shape[0], sub.shape[0])
            total = np.zeros(dim)
        if (obj.shape[0], sub.shape[0]) != dim:
            raise ShapeError("inconsistent vector lengths in corpus")
        total += np.outer(obj, sub)
    return total


def pointwise_meaning(obj, sub, verb) -> np.ndarray:
    """``(obj (x) sub) * verb`` elementwise."""
    obj, sub, verb = np.asarray(obj), np.asarray(sub), np.asarray(verb)
    if verb.shape != (obj.shape[0], sub.shape[0]):
        raise ShapeError(f"verb {verb.shape} does not match vectors "
                         f"({obj.shape[0]}, {sub.shape[0]})")
    return np.outer(obj, sub) * verb


# lexicon tensor literal: {"shape": [...], "entries": [[re, im], ...]}

def tensor_from_literal(lit: Mapping) -> np.ndarray:
    shape = tuple(int(s) for s in lit["shape"])
    entries = lit["entries"]
    vals = [complex(e[0], e[1]) if isinstance(e, (list, tuple)) else complex(e)
            for e in entries]
    if len(vals) != int(np.prod(shape, dtype=int)):
        raise ShapeError(f"{len(vals)} entries for shape {shape}")
    return np.array(vals, dtype=complex).reshape(shape)


def tensor_to_literal(t) -> dict:
    t = np.asarray(t, dtype=complex)
    return {"shape": list(t.shape),
            "entries": [[float(z.real), float(z.imag)] for z in t.reshape(-1)]}
