import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bpedelay.confidence import DelayParams, psi
from bpedelay.diagnostics import audit_delays, info_gain, variance_sum_constant
from bpedelay.environment import DelayedEnvironment, DelayModel
from bpedelay.kernels import KernelSpec, gram
from bpedelay.posterior import VarianceTracker

SE2 = KernelSpec("se", 0.8, input_dim=2)


def test_single_point():
    rep = info_gain(KernelSpec("se", 1.0, input_dim=1), 1.0, [[0.0]])
    # 0.5 log 2 and 1/2
    assert rep.realized_gain == pytest.approx(0.34657359027997264, rel=1e-14)
    assert rep.effective_dim == pytest.approx(0.5, rel=1e-14)


def test_empty():
    rep = info_gain(SE2, 0.1, np.zeros((0, 2)))
    assert rep.realized_gain == 0.0 and rep.effective_dim == 0.0


def test_against_slogdet_and_trace():
    rng = np.random.default_rng(0)
    X = rng.uniform(0, 3, (40, 2))
    lam = 0.3
    rep = info_gain(SE2, lam, X)
    K = gram(SE2, X)
    _, logdet = np.linalg.slogdet(np.eye(40) + K / lam**2)
    assert rep.realized_gain == pytest.approx(0.5 * logdet, rel=1e-10)
    eff = np.trace(K @ np.linalg.inv(K + lam**2 * np.eye(40)))
    assert rep.effective_dim == pytest.approx(eff, rel=1e-9)


def test_increments_match_tracker():
    rng = np.random.default_rng(1)
    X = rng.uniform(0, 3, (25, 2))
    lam = 0.2
    tr = VarianceTracker(SE2, lam)
    inc = []
    for x in X:
        inc.append(0.5 * math.log1p(tr.variance([x])[0] / lam**2))
        tr.add_point(x)
    np.testing.assert_allclose(info_gain(SE2, lam, X).increments, inc, atol=1e-10)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**31 - 1), st.integers(1, 30), st.floats(0.05, 2.0))
def test_effective_dim_bounds(seed, n, lam):
    X = np.random.default_rng(seed).uniform(0, 3, (n, 2))
    rep = info_gain(SE2, lam, X)
    assert rep.effective_dim <= n + 1e-9
    assert rep.effective_dim <= 2 * rep.realized_gain + 1e-9


def test_variance_sum_constant():
    assert variance_sum_constant(1.0) == pytest.approx(2 / math.log(2))
    # 1 / lam^2 grows without bound so c1 shrinks to zero
    assert variance_sum_constant(1e-3) < variance_sum_constant(0.1)


def _trace(delay, T=200, seed=0):
    env = DelayedEnvironment(np.zeros(3), 0.1, delay, seed)
    for t in range(T):
        env.query(t % 3)
    return env.regret_trace()


def test_audit_constant_delay():
    dp = DelayParams(xi=1.0, b=1.0, mean_delay=0.0)
    tr = _trace(DelayModel("constant", 40))
    bound = [psi(t, 0.1, dp) for t in range(1, 201)]
    expected = sum(40 > b for b in bound)
    rep = audit_delays(tr, dp, 0.1)
    assert rep.violations == expected and rep.violated == (expected > 0)
    assert rep.fraction == pytest.approx(expected / 200)
    assert audit_delays(_trace(DelayModel("constant", 2)), DelayParams(1.0, 1.0, 2.0), 0.1).violations == 0


def test_audit_no_declared_delay():
    assert audit_delays(_trace(DelayModel("none")), None, 0.1).violations == 0
    assert audit_delays(_trace(DelayModel("constant", 1)), None, 0.1).violations == 200
