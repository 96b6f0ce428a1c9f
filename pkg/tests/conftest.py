"""Shared fixtures and small, independent numpy oracles."""
from __future__ import annotations

import numpy as np
import pytest

from pregcirc import Lexicon

PERSIAN = "Sara ketab ra kharid"
ENGLISH = "Sara bought the book"

I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
HAD = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)


def mat_rz(t):
    return np.diag([np.exp(-0.5j * t), np.exp(0.5j * t)])


def mat_rx(t):
    return np.cos(t / 2) * I2 - 1j * np.sin(t / 2) * X


def kron_all(mats):
    """Big-endian Kronecker product: the first factor is the most significant."""
    out = np.eye(1, dtype=complex)
    for m in mats:
        out = np.kron(out, m)
    return out


def op_on(n, q, m):
    """``m`` acting on qubit ``q`` of ``n``, little-endian (qubit 0 is the LSB)."""
    return kron_all([m if k == q else I2 for k in reversed(range(n))])


def cnot_matrix(n, c, t):
    dim = 2 ** n
    out = np.zeros((dim, dim), dtype=complex)
    for i in range(dim):
        j = i ^ (1 << t) if (i >> c) & 1 else i
        out[j, i] = 1
    return out


def ansatz_vector(word, n, depth, values):
    """Little-endian statevector of the CNOT ladder + RZ/RX ansatz."""
    v = np.zeros(2 ** n, dtype=complex)
    v[0] = 1
    for layer in range(depth):
        for q in range(n - 1):
            v = cnot_matrix(n, q, q + 1) @ v
        for q in range(n):
            v = op_on(n, q, mat_rz(values[f"{word}.{layer}.{q}.z"])) @ v
            v = op_on(n, q, mat_rx(values[f"{word}.{layer}.{q}.x"])) @ v
    return v


def group_wires(vec, sizes):
    """Little-endian vector over sum(sizes) qubits -> one axis per wire."""
    n = int(sum(sizes))
    out = np.zeros(tuple(2 ** s for s in sizes), dtype=complex)
    for i in range(2 ** n):
        idx, off = [], 0
        for s in sizes:
            idx.append((i >> off) & (2 ** s - 1))
            off += s
        out[tuple(idx)] = vec[i]
    return out


# word tensors behind compiled circuits, built from plain matrices

def oracle_tensors(d, cfg, senses, values, skip=()):
    out = {}
    for _, node in d.words():
        if node.word in skip:
            continue
        sizes = [cfg[t.base] for t in node.type]
        name = senses.get(node.word, node.word)
        vec = ansatz_vector(name, sum(sizes), cfg.ansatz_depth, values)
        out[node.word] = group_wires(vec, sizes)
    return out


def noun_vec(a, b):
    return mat_rz(b) @ mat_rx(a) @ np.array([1, 0])


def verb_matrix(v, p):
    psi = np.zeros((2, 2), dtype=complex)
    psi[0, 0] = 1
    psi = mat_rx(v[p + ".alpha_p"]) @ psi
    psi = np.array([[psi[a, b ^ a] for b in range(2)] for a in range(2)])
    ul = mat_rz(v[p + ".alpha"]) @ mat_rx(v[p + ".beta"]) @ mat_rz(v[p + ".gamma"])
    ur = mat_rz(v[p + ".alpha_prime"]) @ mat_rx(v[p + ".beta_prime"]) @ mat_rz(v[p + ".gamma_prime"])
    return ul @ psi @ ur.T


def template_reference(c, v):
    pre = c.metadata["params_prefix"]
    s = noun_vec(v[pre["subject"] + ".alpha"], v[pre["subject"] + ".beta"])
    o = noun_vec(v[pre["object"] + ".alpha"], v[pre["object"] + ".beta"])
    return s[:, None] * o[None, :] * verb_matrix(v, pre["verb"])


@pytest.fixture(scope="session")
def lex():
    return Lexicon.default()


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
