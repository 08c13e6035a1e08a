import math

import numpy as np
import pytest

import fspde_split as fs


def test_hurst_model():
    h = fs.HurstModel(0.7)
    assert h.value == 0.7
    assert h.regime == fs.HurstRegime.smooth
    assert h.theory_rate() == pytest.approx(0.45)
    assert h.c_H() == pytest.approx(0.21836182617678247, rel=1e-13)
    with pytest.raises(ValueError):
        fs.HurstModel(1.2)


def test_covariance_and_sampling():
    c = fs.exact_covariance_matrix(4, 0.7, 1.0)
    assert c.shape == (4, 4)
    assert c[0, 2] == pytest.approx(0.5 * (3**1.4 - 2 * 2**1.4 + 1), rel=1e-12)
    assert np.all(np.linalg.eigvalsh(c) > 0)
    assert fs.fgn_autocovariance(0, 0.3, 0.01) == pytest.approx(0.01**0.6)

    a = fs.sample_fgn_path(64, 0.7, 1 / 64, seed=3)
    b = fs.sample_fgn_path(64, 0.7, 1 / 64, seed=3)
    assert a.shape == (64,)
    np.testing.assert_array_equal(a, b)
    np.testing.assert_allclose(fs.coarsen(a, 8), a.reshape(8, 8).sum(axis=1), rtol=1e-14)
    with pytest.raises(ValueError):
        fs.coarsen(a, 7)


def test_noise_lattice():
    lat = fs.NoiseLattice.sample(seed=1, H=0.3, n_modes=3, n_steps=16, dt_fine=1 / 16)
    arr = lat.to_numpy()
    assert arr.shape == (3, 16)
    np.testing.assert_allclose(lat.coarsened(4).to_numpy(), arr.reshape(3, 4, 4).sum(axis=2), rtol=1e-14)
    csv = lat.to_csv().splitlines()
    assert csv[0] == "mode,step,value"
    assert len(csv) == 1 + 48


def test_spectral_round_trip():
    x = fs.grid_points(31)
    f = np.sin(np.pi * x) + 0.3 * np.sin(4 * np.pi * x)
    c = fs.dst_forward(f)
    assert c[0] == pytest.approx(1 / math.sqrt(2), abs=1e-12)
    assert c[3] == pytest.approx(0.3 / math.sqrt(2), abs=1e-12)
    np.testing.assert_allclose(fs.dst_inverse(c), f, atol=1e-12)
    assert fs.smoothed_increment_factor(5, 1.0, 0.1) <= 0.1
    assert fs.semigroup_factor(1, 1.0, 0.1) == pytest.approx(math.exp(-(math.pi**2) * 0.1))


def test_flows():
    assert fs.poly_flow(1.0, 0.5) == pytest.approx(1 / math.sqrt(2), rel=1e-14)
    assert fs.cubic_linear_flow(1.0, 3.0) == pytest.approx(1.0)
    assert fs.ode_oracle(2.0, 0.1, lambda z: z - z**3, 2000) == pytest.approx(
        fs.cubic_linear_flow(2.0, 0.1), abs=1e-9
    )


def test_scheme_runs():
    noise = fs.NoiseLattice.sample(seed=2, H=0.7, n_modes=16, n_steps=64, dt_fine=1 / 64)
    steps, coeffs = fs.run_trajectory(1.0, 16, 16, 1.0, noise, f="poly_odd", g="identity", save_every=4)
    assert steps == [0, 4, 8, 12, 16]
    assert all(c.shape == (16,) for c in coeffs)
    assert coeffs[0][0] == pytest.approx(1 / math.sqrt(2))

    # A Python callable drift goes through the numerical flow and matches the built-in one.
    _, custom = fs.run_trajectory(1.0, 16, 16, 1.0, noise, f=lambda z: -(z**3), g="identity")
    np.testing.assert_allclose(custom[-1], coeffs[-1], atol=1e-7)

    lin = fs.run_linear(1.0, 16, 16, 1.0, noise)
    assert len(lin) == 17
    assert np.all(lin[0] == 0)

    with pytest.raises(fs.DivergenceError):
        fs.run_trajectory(1.0, 4, 4, 1.0, fs.NoiseLattice.sample(0, 0.7, 4, 4, 0.25), f="zero",
                          g=lambda z: 1e4 * z)


def test_oracle_and_lemmas():
    v = fs.discrete_fou_variance(2.0, 0.5, 0.01, 100)
    expect = sum(0.01 * math.exp(-2 * 2.0 * 0.01 * i) for i in range(1, 101))
    assert v == pytest.approx(expect, rel=1e-12)
    report = fs.verify_lemmas(0.7)
    assert report["pass"] is True
    assert {c["lemma"] for c in report["checks"]} == {
        "moment_bound",
        "discrete_moment_bound",
        "temporal_regularity",
        "discretization_error",
    }


def test_convergence_study_small():
    config = {
        "T": 1.0, "N": 8, "hurst": 0.7, "seed": 11,
        "drift": {"f": "poly_odd", "q": 1, "g": "identity"}, "x0": "sin_pi",
        "L_list": [4, 8, 16], "L_ref": 64, "M": 32,
    }
    r = fs.convergence_study(config)
    assert [e["L"] for e in r["entries"]] == [4, 8, 16]
    assert all(e["rms_error"] > 0 for e in r["entries"])
    assert r["theory_slope"] == pytest.approx(0.45)
    assert r["seed"] == 11
    assert r["passes"] is True
    again = fs.convergence_study(config)
    assert again["entries"] == r["entries"]
    with pytest.raises(ValueError):
        fs.convergence_study({**config, "L_ref": 60})
