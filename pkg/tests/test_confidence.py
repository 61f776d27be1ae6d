import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from bpedelay.confidence import (
    ConfidenceParams,
    DelayParams,
    beta,
    beta_finite,
    beta_prime,
    interval_continuous,
    interval_finite,
    psi,
    u_T,
    with_delta,
)

PAPER_DELAY = DelayParams(xi=9.0, b=1.0, mean_delay=50.0)


def P(**kw):
    base = dict(C_k=1.0, sigma=1.0, lam=1.0, delta=0.1)
    base.update(kw)
    return ConfidenceParams(**base)


def test_beta_values():
    assert beta(P(delta=1.0)) == 1.0
    assert beta(P(delta=0.1)) == pytest.approx(3.1459660262893472, rel=1e-14)
    assert beta(P(C_k=0.0, sigma=2.0, lam=1.0, delta=math.exp(-2))) == pytest.approx(4.0, rel=1e-14)


def test_beta_finite_value_and_identity():
    p = P(delta=0.1, domain_card=2500)
    # 1 + sqrt(2 ln 400000) at 40 digits
    assert beta_finite(p, 4) == pytest.approx(6.079216440769210, rel=1e-13)
    assert beta_finite(p, 4) == pytest.approx(beta(with_delta(p, 0.1 / (4 * 4 * 2500))), rel=1e-14)
    assert beta_finite(P(domain_card=3000), 4) >= beta_finite(P(domain_card=2500), 4)


def _beta_prime_oracle(C_k, sigma, k_max, lam, delta, d, c, t):
    mp.mp.dps = 50
    C_k, sigma, k_max, lam, delta, c = map(mp.mpf, (C_k, sigma, k_max, lam, delta, c))
    c_tilde = C_k + max(sigma, k_max) * mp.sqrt(t) / lam * mp.sqrt(2 * mp.log(2 * t / (delta / 2)))
    gamma_t = c * c_tilde**d * mp.mpf(t) ** d
    return float(C_k + sigma / lam * mp.sqrt(2 * mp.log(1 / (delta / (2 * gamma_t)))))


def test_beta_prime_chain():
    p = P(delta=0.5, d=1, disc_c=1.0, k_max=1.0)
    ref = _beta_prime_oracle(1, 1, 1, 1, 0.5, 1, 1, 1)
    assert ref == pytest.approx(3.2351432916571807, rel=1e-15)
    assert beta_prime(p, 1) == pytest.approx(ref, rel=1e-10)


@pytest.mark.parametrize("d,t,c", [(2, 50, 1.0), (3, 1000, 0.5), (8, 10**6, 2.0)])
def test_beta_prime_other_points(d, t, c):
    p = P(C_k=2.0, sigma=0.02, lam=0.05, delta=0.05, d=d, disc_c=c, k_max=1.0)
    assert beta_prime(p, t) == pytest.approx(_beta_prime_oracle(2.0, 0.02, 1.0, 0.05, 0.05, d, c, t), rel=1e-10)


def test_beta_prime_no_overflow_large_dim():
    p = P(d=500, delta=1e-6)
    assert math.isfinite(beta_prime(p, 10**9))


@given(st.integers(1, 10**6), st.integers(1, 10**6))
def test_beta_prime_monotone_and_dominates(t1, t2):
    p = P(C_k=1.5, sigma=0.3, lam=0.2, delta=0.05, d=2)
    lo, hi = sorted((t1, t2))
    assert beta_prime(p, lo) <= beta_prime(p, hi) + 1e-12
    assert beta_prime(p, lo) >= beta(p)


def test_psi_reference_setup():
    L = math.log(30000)
    assert math.sqrt(2 * 81 * L) == pytest.approx(40.86624928990151, rel=1e-13)
    assert psi(2000, 0.1, PAPER_DELAY) == pytest.approx(20.617905321288585, rel=1e-13)
    assert psi(2000, 0.1, PAPER_DELAY, combine="max") == pytest.approx(40.86624928990151, rel=1e-13)


def test_psi_limits():
    wide = DelayParams(xi=9.0, b=math.inf)
    assert psi(100, 0.1, wide) == pytest.approx(math.sqrt(2 * 81 * math.log(1500)))
    # delta just below 1 with t = 1: L = log(1.5 / delta) stays positive and psi is small
    assert 0 < psi(1, 0.999999, PAPER_DELAY) < 1.0
    with pytest.raises(ValueError):
        psi(0, 0.1, PAPER_DELAY)


def test_u_T():
    assert u_T(2000, 0.1, None) == 0.0
    assert u_T(2000, 0.1, PAPER_DELAY) == pytest.approx(50 + psi(2000, 0.05, PAPER_DELAY))
    assert u_T(2000, 0.1, PAPER_DELAY) == pytest.approx(72.00419968240848, rel=1e-13)
    vals = [u_T(T, 0.1, PAPER_DELAY) for T in (1, 10, 100, 1000, 10**5)]
    assert vals == sorted(vals)


def test_interval_finite():
    assert interval_finite(0.0, 1.0, 2.0) == (-2.0, 2.0)
    assert interval_finite(0.5, 0.0, 3.0) == (0.5, 0.5)
    with pytest.raises(ValueError):
        interval_finite(0.0, -0.1, 1.0)
    rng = np.random.default_rng(0)
    mu, sd, b = rng.normal(size=20), rng.uniform(0, 2, 20), rng.uniform(0, 5, 20)
    lo, up = interval_finite(mu, sd, b)
    np.testing.assert_allclose(up, mu + b * sd)
    np.testing.assert_allclose(lo, mu - b * sd)


def test_interval_continuous():
    lo, up = interval_continuous(0.0, 0.0, 1.0, 4)
    assert (lo, up) == (-1.5, 1.5)
    mu, sd, bp, q = 0.3, 0.2, 2.5, 9
    lo, up = interval_continuous(mu, sd, bp, q)
    assert up - lo == pytest.approx(2 * (2 / q + bp * sd + 2 * bp / math.sqrt(q)))
    lo_big, up_big = interval_continuous(mu, sd, bp, 10**12)
    f_lo, f_up = interval_finite(mu, sd, bp)
    assert lo_big == pytest.approx(f_lo, abs=1e-5) and up_big == pytest.approx(f_up, abs=1e-5)
    with pytest.raises(ValueError):
        interval_continuous(0.0, 1.0, 1.0, 0)


def test_params_validation():
    with pytest.raises(ValueError):
        P(delta=0.0)
    with pytest.raises(ValueError):
        P(lam=0.0)
    with pytest.raises(ValueError):
        DelayParams(xi=0.0, b=1.0)
