"""Unit tests for the message update rules and the message store."""

import numpy as np
import pytest

from mpia.channel import ChannelSet, random_channel_set
from mpia.graph import build_graph
from mpia.linalg import random_truncated_unitary
from mpia.messages import (
    InnerLoopConfig,
    MessageMonitor,
    MessageStore,
    MissingMessageError,
    PsdMessage,
    extract_belief,
    fn_to_other_var_message,
    fn_to_own_var_message,
    var_to_fn_message,
)
from mpia.schedules import initialize


def full_graph(K=3, N=4, M=4, d=2, seed=0):
    ch = random_channel_set(K, N, M, d, np.random.default_rng(seed))
    return build_graph(ch)


def zero_store(graph, monitor=None):
    return initialize(graph, "zero", np.random.default_rng(0), monitor=monitor)


def explicit_channels(H, d=1):
    K, _, N, M = H.shape[0], H.shape[1], H.shape[2], H.shape[3]
    return ChannelSet(K=K, N=N, M=M, d=d, H=np.asarray(H, dtype=complex))


# ------------------------------------------------------------------ MessageStore

def test_store_roundtrip_and_missing():
    g = full_graph()
    store = MessageStore(g)
    with pytest.raises(MissingMessageError):
        store.get(("V", 1), ("f", 0))
    assert isinstance(MissingMessageError("x"), KeyError)
    Q = np.diag([1.0, 2.0, 3.0, 4.0]).astype(complex)
    store.put(PsdMessage(source=("V", 1), target=("f", 0), Q=Q))
    assert (("V", 1), ("f", 0)) in store
    got = store.get(("V", 1), ("f", 0))
    assert got.source == ("V", 1) and got.target == ("f", 0)
    assert np.array_equal(got.Q, Q)
    assert len(store) == 1


def test_store_hermitizes_on_put():
    g = full_graph()
    store = MessageStore(g)
    Q = np.diag([1.0, 1.0, 1.0, 1.0]).astype(complex)
    Q[0, 1] = 0.2j  # small skew part, no matching conjugate
    store.put(PsdMessage(source=("V", 1), target=("f", 0), Q=Q))
    S = store.form(("V", 1), ("f", 0))
    assert np.array_equal(S, S.conj().T)
    assert S[0, 1] == pytest.approx(0.1j)
    assert S[1, 0] == pytest.approx(-0.1j)


def test_store_warns_below_psd_floor():
    g = full_graph()
    store = MessageStore(g)
    Q = np.diag([-0.5, 1.0, 1.0, 1.0]).astype(complex)
    with pytest.warns(UserWarning, match="PSD floor"):
        store.put(PsdMessage(source=("V", 1), target=("f", 0), Q=Q))


def test_store_rejects_malformed_edges():
    g = full_graph()
    store = MessageStore(g)
    Q4 = np.eye(4, dtype=complex)
    with pytest.raises(ValueError):  # variable -> variable
        store.put(PsdMessage(source=("U", 0), target=("V", 1), Q=Q4))
    with pytest.raises(ValueError):  # function -> function
        store.put(PsdMessage(source=("f", 0), target=("g", 1), Q=Q4))
    with pytest.raises(ValueError):  # no such edge (self link)
        store.put(PsdMessage(source=("V", 0), target=("f", 0), Q=Q4))
    with pytest.raises(ValueError):  # wrong dimension
        store.put(PsdMessage(source=("V", 1), target=("f", 0), Q=np.eye(3, dtype=complex)))


def test_store_dimension_follows_variable_side():
    ch = random_channel_set(2, 3, 2, 1, np.random.default_rng(0))
    g = build_graph(ch)
    store = MessageStore(g)
    store.put(PsdMessage(source=("f", 0), target=("U", 0), Q=np.eye(3, dtype=complex)))
    store.put(PsdMessage(source=("V", 0), target=("g", 0), Q=np.eye(2, dtype=complex)))
    with pytest.raises(ValueError):
        store.put(PsdMessage(source=("V", 0), target=("g", 0), Q=np.eye(3, dtype=complex)))


def test_monitor_counts_and_cross_detection():
    g = full_graph()
    mon = MessageMonitor()
    store = MessageStore(g, monitor=mon)
    store.put(PsdMessage(source=("V", 1), target=("f", 0), Q=np.eye(4, dtype=complex)))
    assert mon.messages_seen == 1 and mon.cross_messages == 0
    store.put(PsdMessage(source=("f", 0), target=("U", 0), Q=np.eye(4, dtype=complex)))
    assert mon.cross_messages == 0  # own-variable message is not a cross send
    W = np.zeros((4, 2), dtype=complex)
    W[0, 0] = W[1, 1] = 1.0
    store.put(PsdMessage(source=("f", 0), target=("V", 1), Q=W @ W.conj().T))
    assert mon.cross_messages == 1
    assert mon.cross_rank_max == 2
    assert mon.max_hermitian_dev == 0.0
    assert mon.min_eig_rel >= -1e-12


# -------------------------------------------------------------- var -> fn update

def test_var_to_fn_sums_all_but_destination():
    g = full_graph()
    store = zero_store(g)
    A = np.diag([1.0, 0, 0, 0]).astype(complex)
    B = np.diag([0, 2.0, 0, 0]).astype(complex)
    C = np.diag([0, 0, 3.0, 0]).astype(complex)
    store.put(PsdMessage(source=("f", 0), target=("U", 0), Q=A))
    store.put(PsdMessage(source=("g", 1), target=("U", 0), Q=B))
    store.put(PsdMessage(source=("g", 2), target=("U", 0), Q=C))
    out = var_to_fn_message(g, store, ("U", 0), ("f", 0))
    assert np.array_equal(out.Q, B + C)
    out2 = var_to_fn_message(g, store, ("U", 0), ("g", 2))
    assert np.array_equal(out2.Q, A + B)


def test_var_to_fn_is_exactly_linear():
    g = full_graph(seed=2)
    rng = np.random.default_rng(3)
    store1 = zero_store(g)
    store2 = zero_store(g)
    for fn in (("f", 0), ("g", 1), ("g", 2)):
        A = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        Q = A @ A.conj().T
        store1.put(PsdMessage(source=fn, target=("U", 0), Q=Q))
        store2.put(PsdMessage(source=fn, target=("U", 0), Q=2.0 * Q))
    m1 = var_to_fn_message(g, store1, ("U", 0), ("f", 0))
    m2 = var_to_fn_message(g, store2, ("U", 0), ("f", 0))
    assert np.array_equal(m2.Q, 2.0 * m1.Q)


def test_var_to_fn_validation():
    g = full_graph()
    store = zero_store(g)
    with pytest.raises(ValueError):
        var_to_fn_message(g, store, ("f", 0), ("U", 0))  # wrong direction
    with pytest.raises(ValueError):
        var_to_fn_message(g, store, ("U", 0), ("g", 0))  # no such edge


def test_var_to_fn_missing_input_raises():
    g = full_graph()
    store = MessageStore(g)  # empty, not zero-initialized
    with pytest.raises(MissingMessageError):
        var_to_fn_message(g, store, ("U", 0), ("f", 0))


# --------------------------------------------------------- fn -> own-var update

def test_fn_to_own_var_identity_channels_sums_projectors():
    H = np.zeros((3, 3, 4, 4), dtype=complex)
    for i in range(3):
        for j in range(3):
            H[i, j] = np.eye(4)
    ch = explicit_channels(H, d=2)
    g = build_graph(ch)
    store = zero_store(g)
    rng = np.random.default_rng(0)
    store.put(PsdMessage(source=("V", 1), target=("f", 0),
                         Q=np.diag([0.0, 1.0, 2.0, 3.0]).astype(complex)))
    store.put(PsdMessage(source=("V", 2), target=("f", 0),
                         Q=np.diag([5.0, 0.0, 0.0, 5.0]).astype(complex)))
    out = fn_to_own_var_message(g, store, ("f", 0), rng)
    assert out.source == ("f", 0) and out.target == ("U", 0)
    # V_1 collapses to axes {0,1}, V_2 to axes {1,2}; identity channels make
    # the covariance the sum of the two subspace projectors.
    assert np.allclose(out.Q, np.diag([1.0, 2.0, 1.0, 0.0]), atol=1e-12)


def test_fn_to_own_var_trace_counts_streams_identity_channels():
    # With identity channels every collapsed basis is orthonormal, so the
    # covariance trace is (number of interferers) * d regardless of inputs.
    H = np.zeros((3, 3, 4, 4), dtype=complex)
    for i in range(3):
        for j in range(3):
            H[i, j] = np.eye(4)
    ch = explicit_channels(H, d=2)
    g = build_graph(ch)
    rng = np.random.default_rng(1)
    store = zero_store(g)
    for j in (1, 2):
        A = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        store.put(PsdMessage(source=("V", j), target=("f", 0), Q=A @ A.conj().T))
    out = fn_to_own_var_message(g, store, ("f", 0), rng)
    assert np.trace(out.Q).real == pytest.approx(4.0, abs=1e-10)


def test_fn_to_own_var_g_side_uses_adjoint_channel():
    H = np.zeros((2, 2, 2, 2), dtype=complex)
    H[1, 0] = np.array([[1.0, 2.0], [3.0, 4.0]])
    H[0, 1] = np.eye(2)
    ch = explicit_channels(H, d=1)
    g = build_graph(ch)
    store = zero_store(g)
    rng = np.random.default_rng(0)
    # U_1's message to g_0 selects axis 1 as the weakest direction.
    store.put(PsdMessage(source=("U", 1), target=("g", 0),
                         Q=np.diag([7.0, 1.0]).astype(complex)))
    out = fn_to_own_var_message(g, store, ("g", 0), rng)
    assert out.target == ("V", 0)
    W = H[1, 0].conj().T @ np.array([[0.0], [1.0]])
    assert np.allclose(out.Q, W @ W.conj().T, atol=1e-12)


def test_fn_to_own_var_respects_mask():
    mask = np.ones((3, 3), dtype=bool)
    mask[0, 2] = False
    ch = random_channel_set(3, 4, 4, 2, np.random.default_rng(5), mask=mask)
    g = build_graph(ch)
    store = zero_store(g)
    rng = np.random.default_rng(0)
    store.put(PsdMessage(source=("V", 1), target=("f", 0),
                         Q=np.diag([0.0, 1.0, 2.0, 3.0]).astype(complex)))
    out = fn_to_own_var_message(g, store, ("f", 0), rng)
    # Only transmitter 1 contributes; rank is at most d.
    assert np.linalg.matrix_rank(out.Q, tol=1e-9) <= 2


def test_fn_to_own_var_rejects_variable_node():
    g = full_graph()
    store = zero_store(g)
    with pytest.raises(ValueError):
        fn_to_own_var_message(g, store, ("U", 0), np.random.default_rng(0))


# ------------------------------------------------------- fn -> other-var update

def test_cross_message_two_users_closed_form():
    # K=2 has no third parties, so the inner loop reduces to one nu_min of the
    # hub form and the output is an exact rank-d sandwich through the channel.
    H = np.zeros((2, 2, 2, 2), dtype=complex)
    H[0, 1] = np.array([[1.0, 2.0], [3.0, 4.0]])
    H[1, 0] = np.array([[0.0, 1.0], [1.0, 0.0]])
    ch = explicit_channels(H, d=1)
    g = build_graph(ch)
    store = zero_store(g)
    rng = np.random.default_rng(0)
    cfg = InnerLoopConfig()
    store.put(PsdMessage(source=("U", 0), target=("f", 0),
                         Q=np.diag([2.0, 1.0]).astype(complex)))
    out = fn_to_other_var_message(g, store, ("f", 0), ("V", 1), cfg, rng)
    hub = np.array([[0.0], [1.0]])  # weakest axis of diag(2, 1)
    W = H[0, 1].conj().T @ hub
    assert np.allclose(out.Q, W @ W.conj().T, atol=1e-12)

    store.put(PsdMessage(source=("V", 0), target=("g", 0),
                         Q=np.diag([5.0, 1.0]).astype(complex)))
    out_g = fn_to_other_var_message(g, store, ("g", 0), ("U", 1), cfg, rng)
    Wg = H[1, 0] @ np.array([[0.0], [1.0]])
    assert np.allclose(out_g.Q, Wg @ Wg.conj().T, atol=1e-12)


def test_cross_message_rank_at_most_d():
    g = full_graph(K=4, N=5, M=5, d=2, seed=9)
    rng = np.random.default_rng(4)
    store = initialize(g, "random", np.random.default_rng(8))
    cfg = InnerLoopConfig()
    out = fn_to_other_var_message(g, store, ("f", 0), ("V", 2), cfg, rng)
    eigs = np.linalg.eigvalsh(out.Q)
    floor = 1e-9 * max(1.0, eigs[-1])
    assert int(np.count_nonzero(eigs > floor)) <= 2
    assert eigs[0] >= -1e-9 * max(1.0, eigs[-1])


def test_cross_message_warm_start_shape_checked():
    g = full_graph()
    store = initialize(g, "random", np.random.default_rng(1))
    cfg = InnerLoopConfig()
    with pytest.raises(ValueError):
        fn_to_other_var_message(g, store, ("f", 0), ("V", 1), cfg,
                                np.random.default_rng(0),
                                warm_start=np.zeros((3, 2), dtype=complex))


def test_cross_message_with_warm_start_is_seed_independent():
    # A provided warm start removes the only generic randomness in the inner
    # loop, so different generators give identical messages.
    g = full_graph(seed=6)
    store = initialize(g, "random", np.random.default_rng(2))
    cfg = InnerLoopConfig()
    warm = random_truncated_unitary(4, 2, np.random.default_rng(3))
    a = fn_to_other_var_message(g, store, ("f", 0), ("V", 1), cfg,
                                np.random.default_rng(10), warm_start=warm)
    b = fn_to_other_var_message(g, store, ("f", 0), ("V", 1), cfg,
                                np.random.default_rng(99), warm_start=warm)
    assert np.array_equal(a.Q, b.Q)


def test_cross_message_validation():
    g = full_graph()
    store = initialize(g, "random", np.random.default_rng(1))
    cfg = InnerLoopConfig()
    rng = np.random.default_rng(0)
    with pytest.raises(ValueError):
        fn_to_other_var_message(g, store, ("U", 0), ("V", 1), cfg, rng)
    with pytest.raises(ValueError):  # own-variable target belongs to the other rule
        fn_to_other_var_message(g, store, ("f", 0), ("U", 0), cfg, rng)
    with pytest.raises(ValueError):  # not an edge
        fn_to_other_var_message(g, store, ("f", 0), ("V", 0), cfg, rng)


def test_inner_loop_never_increases_objective():
    mon = MessageMonitor()
    g = full_graph(K=4, N=4, M=4, d=2, seed=12)
    store = initialize(g, "random", np.random.default_rng(7), monitor=mon)
    cfg = InnerLoopConfig()
    rng = np.random.default_rng(5)
    for i in range(4):
        for j in range(4):
            if i != j:
                fn_to_other_var_message(g, store, ("f", i), ("V", j), cfg, rng)
                fn_to_other_var_message(g, store, ("g", j), ("U", i), cfg, rng)
    assert mon.inner_steps > 0
    assert mon.max_inner_increase <= 1e-10


def test_inner_loop_config_validation():
    with pytest.raises(ValueError):
        InnerLoopConfig(max_inner_iters=0)
    with pytest.raises(ValueError):
        InnerLoopConfig(inner_tol=-1e-3)


# ----------------------------------------------------------------------- beliefs

def test_extract_belief_uses_all_incoming():
    g = full_graph()
    store = zero_store(g)
    rng = np.random.default_rng(0)
    store.put(PsdMessage(source=("f", 0), target=("U", 0),
                         Q=np.diag([3.0, 1.0, 4.0, 2.0]).astype(complex)))
    store.put(PsdMessage(source=("g", 1), target=("U", 0),
                         Q=np.diag([0.0, 1.0, 0.0, 3.0]).astype(complex)))
    X = extract_belief(g, store, ("U", 0), rng)
    # Total form diag(3, 2, 4, 5): weakest axes are 1 then 0.
    expect = np.zeros((4, 2))
    expect[1, 0] = 1.0
    expect[0, 1] = 1.0
    assert np.allclose(X, expect, atol=1e-12)


def test_extract_belief_rejects_function_node():
    g = full_graph()
    store = zero_store(g)
    with pytest.raises(ValueError):
        extract_belief(g, store, ("f", 0), np.random.default_rng(0))
