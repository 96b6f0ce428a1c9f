import math

import numpy as np
import pytest

from conftest import ENGLISH, PERSIAN
from pregcirc import training
from pregcirc.circuit import PREP, RX, Circuit, ParameterStore
from pregcirc.simulator import MeaningState, simulate
from pregcirc.training import (PairTask, TrainingError, finite_difference_gradient, optimize,
                               pair_loss)


@pytest.fixture(scope="module")
def sample_task():
    from pregcirc import Lexicon
    lex = Lexicon.default()
    return PairTask([(lex.compile(PERSIAN), lex.compile(ENGLISH))], [(PERSIAN, ENGLISH)])


def one_qubit(angle):
    return Circuit(1, (PREP(0), RX(0, angle)), (0,))


def test_identical_pair_has_zero_loss(sample_task):
    a = sample_task.pairs[0][0]
    task = PairTask([(a, a)])
    store = ParameterStore.random(task.params, 5)
    assert abs(pair_loss(task, store)) < 1e-12


def test_orthogonal_pair_has_unit_loss():
    task = PairTask([(one_qubit(0.0), one_qubit(math.pi))])
    assert abs(pair_loss(task, {}) - 1) < 1e-12


def test_sample_pair_loss_by_hand(sample_task):
    store = ParameterStore.random(sample_task.params, 0)
    a, b = (simulate(c, store).vector for c in sample_task.pairs[0])
    inner = sum(x.conjugate() * y for x, y in zip(a, b))
    fid = abs(inner) ** 2 / (sum(abs(x) ** 2 for x in a) * sum(abs(y) ** 2 for y in b))
    assert abs(pair_loss(sample_task, store) - (1 - fid)) < 1e-12


def test_loss_bounds(sample_task):
    for seed in range(20):
        loss = pair_loss(sample_task, ParameterStore.random(sample_task.params, seed))
        assert 0.0 <= loss <= 1.0


def test_mismatched_open_qubits():
    with pytest.raises(TrainingError):
        PairTask([(one_qubit(0.0), Circuit(2, (PREP(0), PREP(1)), (0, 1)))])


def test_zero_meaning_state_names_the_pair(monkeypatch):
    task = PairTask([(one_qubit(0.0), one_qubit(0.0))], [("left", "right")])
    monkeypatch.setattr(training, "simulate",
                        lambda c, s: MeaningState((0,), np.zeros(2, dtype=complex)))
    with pytest.raises(TrainingError, match="left"):
        pair_loss(task, {})


def test_non_finite_loss_aborts():
    task = PairTask([(one_qubit("t"), one_qubit(0.0))])
    with pytest.raises(TrainingError, match="non-finite"):
        optimize(task, ParameterStore({"t": float("nan")}), "fd", 10)


def test_already_converged_returns_input(sample_task):
    a = sample_task.pairs[0][0]
    task = PairTask([(a, a)])
    store = ParameterStore.random(task.params, 1)
    out, trace = optimize(task, store, "spsa", 100)
    assert out == store and len(trace) == 1 and trace[0]["evaluations"] == 1


def test_unknown_method_and_budget(sample_task):
    store = ParameterStore.random(sample_task.params, 0)
    with pytest.raises(ValueError):
        optimize(sample_task, store, "adam", 10)
    with pytest.raises(ValueError):
        optimize(sample_task, store, "fd", 0)


def test_unresolved_parameters(sample_task):
    with pytest.raises(TrainingError):
        optimize(sample_task, ParameterStore({}), "fd", 10)


def test_fd_gradient_matches_central_difference(sample_task):
    store = ParameterStore.random(sample_task.params, 3)
    names = sample_task.params
    grad = finite_difference_gradient(sample_task, store, names)
    x = store.vector(names)
    h = 1e-5
    ref = np.array([(pair_loss(sample_task, store.with_vector(names, x + h * e))
                     - pair_loss(sample_task, store.with_vector(names, x - h * e))) / (2 * h)
                    for e in np.eye(len(x))])
    assert np.linalg.norm(grad - ref) <= 1e-3 * np.linalg.norm(ref)


@pytest.mark.parametrize("method", ["spsa", "fd"])
def test_determinism_and_monotone_best(sample_task, method):
    store = ParameterStore.random(sample_task.params, 2)
    s1, t1 = optimize(sample_task, store, method, 300, seed=7)
    s2, t2 = optimize(sample_task, store, method, 300, seed=7)
    assert t1 == t2 and s1 == s2
    best = [r["best"] for r in t1]
    assert all(b2 <= b1 for b1, b2 in zip(best, best[1:]))
    assert t1[-1]["evaluations"] <= 300


def test_frozen_parameters_untouched(sample_task):
    base = ParameterStore.random(sample_task.params, 4)
    frozen = frozenset(k for k in sample_task.params if k.startswith("sara."))
    store = ParameterStore(base.values, frozen)
    out, _ = optimize(sample_task, store, "spsa", 200)
    assert frozen and all(out.values[k] == store.values[k] for k in frozen)
    assert any(out.values[k] != store.values[k] for k in sample_task.params if k not in frozen)


def test_checkpoints(sample_task):
    store = ParameterStore.random(sample_task.params, 0)
    _, trace = optimize(sample_task, store, "fd", 200, checkpoint_every=2)
    marked = [r for r in trace if "params" in r]
    assert marked and all(r["iteration"] % 2 == 0 for r in marked)


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_sample_pair_converges(sample_task, seed):
    store = ParameterStore.random(sample_task.params, seed)
    out, trace = optimize(sample_task, store, "fd", 2000, seed=seed)
    assert trace[-1]["evaluations"] <= 2000
    assert pair_loss(sample_task, out) <= 0.01
