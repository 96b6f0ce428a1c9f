"""
Fit shared angles so that paired sentences produce the same meaning state.

The loss of a pair is ``1 - fidelity`` of the two post-selected meaning
states; a task averages it over its pairs.  Two derivative-free optimisers
are available: SPSA and gradient descent on central finite differences.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .circuit import Circuit, ParameterStore
from .simulator import SimulationError, fidelity, simulate

__all__ = ["ParameterStore", "PairTask", "TrainingError", "pair_loss",
           "finite_difference_gradient", "optimize", "METHODS"]

METHODS = ("spsa", "fd")


class TrainingError(RuntimeError):
    pass


@dataclass
class PairTask:
    pairs: list[tuple[Circuit, Circuit]]
    labels: list[tuple[str, str]] = field(default_factory=list)
    history: list[float] = field(default_factory=list)

    def __post_init__(self):
        for k, (a, b) in enumerate(self.pairs):
            if len(a.open_qubits) != len(b.open_qubits):
                raise TrainingError(f"pair {k}: open-qubit counts differ "
                                    f"({len(a.open_qubits)} vs {len(b.open_qubits)})")

    @property
    def params(self) -> list[str]:
        names: dict[str, None] = {}
        for a, b in self.pairs:
            for k in a.params + b.params:
                names.setdefault(k)
        return sorted(names)

    def label(self, k):
        return self.labels[k] if k < len(self.labels) else (f"#{k}a", f"#{k}b")


def pair_loss(task: PairTask, store) -> float:
    """Mean of ``1 - fidelity`` over the pairs, in ``[0, 1]``."""
    total = 0.0
    for k, (a, b) in enumerate(task.pairs):
        try:
            total += 1.0 - fidelity(simulate(a, store), simulate(b, store))
        except SimulationError as e:
            raise TrainingError(f"pair {task.label(k)}: {e}") from None
    return total / len(task.pairs)


def finite_difference_gradient(task: PairTask, store: ParameterStore,
                               names: Sequence[str], step: float = 1e-4) -> np.ndarray:
    x = store.vector(names)
    grad = np.zeros_like(x)
    for i in range(len(x)):
        e = np.zeros_like(x)
        e[i] = step
        hi = pair_loss(task, store.with_vector(names, x + e))
        lo = pair_loss(task, store.with_vector(names, x - e))
        grad[i] = (hi - lo) / (2 * step)
    return grad


class _Budget:
    def __init__(self, task, budget, names, base):
        self.task, self.left, self.names, self.base = task, budget, names, base
        self.evals = 0
        self.best = math.inf
        self.best_x = None

    def __call__(self, x) -> float:
        if self.left <= 0:
            raise StopIteration
        self.left -= 1
        self.evals += 1
        loss = pair_loss(self.task, self.base.with_vector(self.names, x))
        if not math.isfinite(loss):
            raise TrainingError(f"non-finite loss {loss} at evaluation {self.evals}")
        if loss < self.best:
            self.best, self.best_x = loss, np.array(x, copy=True)
        return loss


def optimize(task: PairTask, store: ParameterStore, method: str = "fd",
             budget: int = 2000, seed: int = 0, target: float = 1e-12,
             checkpoint_every: int = 0, **opts) -> tuple[ParameterStore, list[dict]]:
    """
    Minimise :func:`pair_loss` within ``budget`` loss evaluations.

    Returns the best store seen and a trace with one record per iteration.
    Frozen parameters are never touched.  Stops early once the best loss is
    at most ``target``.  Options: ``a``, ``c``, ``A``, ``alpha``, ``gamma``
    for SPSA; ``lr`` and ``step`` for finite differences.
    """
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}; use one of {METHODS}")
    if budget <= 0:
        raise ValueError("budget must be positive")
    names = [k for k in task.params if k not in store.frozen]
    missing = [k for k in task.params if k not in store]
    if missing:
        raise TrainingError(f"unresolved parameters {missing}")
    f = _Budget(task, budget, names, store)
    x = store.vector(names)
    trace: list[dict] = []

    def record(it, loss):
        rec = {"iteration": it, "evaluations": f.evals, "loss": loss, "best": f.best}
        if checkpoint_every and it % checkpoint_every == 0:
            rec["params"] = dict(zip(names, (float(v) for v in f.best_x)))
        trace.append(rec)

    try:
        record(0, f(x))
        if f.best <= target or not names:
            task.history.extend(r["best"] for r in trace)
            return store.copy(), trace
        rng = np.random.default_rng(seed)
        if method == "spsa":
            _spsa(f, x, rng, record, target, **opts)
        else:
            _gradient_descent(f, x, record, target, **opts)
    except StopIteration:
        pass
    task.history.extend(r["best"] for r in trace)
    return store.with_vector(names, f.best_x), trace


def _spsa(f: Callable, x, rng, record, target, a=0.1, c=0.1, A=None,
          alpha=0.602, gamma=0.101):
    if A is None:
        A = 0.01 * f.left
    k = 0
    while True:
        ak = a / (k + 1 + A) ** alpha
        ck = c / (k + 1) ** gamma
        delta = rng.choice((-1.0, 1.0), size=x.shape)
        lp = f(x + ck * delta)
        lm = f(x - ck * delta)
        x = x - ak * (lp - lm) / (2 * ck) * delta
        k += 1
        record(k, f(x))
        if f.best <= target:
            return


def _gradient_descent(f: Callable, x, record, target, lr=0.5, step=1e-4):
    k = 0
    loss = f.best
    while True:
        grad = np.zeros_like(x)
        for i in range(len(x)):
            e = np.zeros_like(x)
            e[i] = step
            grad[i] = (f(x + e) - f(x - e)) / (2 * step)
        trial = x - lr * grad
        new = f(trial)
        # halve the step on overshoot, keep the iterate otherwise
        if new <= loss:
            x, loss = trial, new
        else:
            lr *= 0.5
        k += 1
        record(k, new)
        if f.best <= target:
            return
