import math

import numpy as np
import pytest

import levycomp as lc


def test_exponent_values():
    g = lc.LevyExponent("gaussian", {"sigma2": 2.0})
    xi = np.array([0.0, 1.0, 3.0])
    np.testing.assert_allclose(lc.psi(g, xi).real, -xi**2)
    c = lc.LevyExponent("cauchy")
    assert lc.psi(c, np.array([2.5]))[0] == pytest.approx(-2.5)
    assert lc.bg_indices(lc.LevyExponent("sas", {"alpha": 1.5})) == (1.5, 1.5)
    assert lc.bg_indices(lc.LevyExponent("laplace")) == (0.0, 0.0)


def test_theoretical_kappa():
    assert lc.theoretical_kappa(lc.LevyExponent("gaussian"), 1.0, 1)["lower"] == pytest.approx(0.5)
    k = lc.theoretical_kappa(lc.LevyExponent("compound_poisson", {"lambda": 1.0}), 1.0, 1)
    assert k["kind"] == "infinite"


def test_bad_parameters_raise():
    with pytest.raises(lc.ParameterError):
        lc.LevyExponent("sas")
    with pytest.raises(lc.LevyError):
        lc.LevyExponent("nope")


def test_noise_and_process():
    e = lc.LevyExponent("cauchy")
    w = lc.generate_noise(e, 1, 10, 7)
    assert w.shape == (1024,)
    assert abs(w.mean()) < 1e-9 * np.abs(w).max()
    np.testing.assert_array_equal(w, lc.generate_noise(e, 1, 10, 7))
    s = lc.synthesize_process(e, 2, 6, 3, operator="matern", gamma=1.5)
    assert s.shape == (64, 64)


def test_dwt_parseval():
    rng = np.random.default_rng(0)
    f = rng.standard_normal(512)
    c = lc.dwt(f, k=2)
    lam = c["values"]
    assert lam.size == 512
    ortho = lam * 2.0 ** (-(c["j"] + c["zeta"]) / 2.0)
    assert np.sum(ortho**2) == pytest.approx(np.sum(f**2) / 512, rel=1e-10)
    with pytest.raises(lc.ShapeError):
        lc.dwt(np.zeros(100))


def test_sigma_curve_and_fit():
    s = lc.synthesize_process(lc.LevyExponent("gaussian"), 1, 12, 11)
    n, sigma = lc.sigma_curve(s)
    assert np.all(np.diff(sigma) <= 0)
    fit = lc.estimate_kappa(n, sigma, 16, 256)
    assert 0.2 < fit["kappa"] < 0.8
    exact = lc.estimate_kappa([2**i for i in range(10)], [2.0 ** (-2 * i) for i in range(10)], 1, 512)
    assert exact["kappa"] == pytest.approx(2.0)


def test_run_experiment():
    summary = lc.run_experiment("family = gaussian\nJ = 12\ntrials = 3\nseed = 5\n", threads=1)
    assert summary["trials"] == 3
    assert summary["theory"]["kind"] == "exact"
    assert math.isfinite(summary["kappa_hat_median"])
    with pytest.raises(lc.ConfigError):
        lc.run_experiment("gama = 1\n")


def test_selftest():
    assert all(passed for _, passed, _ in lc.selftest())
