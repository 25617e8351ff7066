import csv
import io

import numpy as np
import pytest

import tddprecoding as tp


def test_gzf_identities():
    rng = np.random.default_rng(0)
    H = (rng.standard_normal((3, 6)) + 1j * rng.standard_normal((3, 6))) / np.sqrt(2)
    p = [0.5, 1.0, 2.0]
    g = tp.build_gzf(H, p)
    assert abs(np.trace(g.A.conj().T @ g.A).real - 1.0) < 1e-12
    H_ds = H / np.sqrt(np.array(p))[:, None]
    assert np.allclose(H_ds @ g.A, g.chi * np.eye(3), atol=1e-10)
    assert g.selection == [0, 1, 2]


def test_config_validation():
    cfg = tp.make_homogeneous(8, 4, 30, 4, 10.0, 1.0)
    assert cfg.data_symbols() == 25
    assert np.allclose(np.array(cfg.est_vars()) + np.array(cfg.err_vars()), 1.0)
    cfg.tau_r = 2
    with pytest.raises(tp.ConfigError):
        tp.validate_config(cfg)


def test_precoder_parameters_symmetric():
    cfg = tp.make_homogeneous(16, 4, 30, 4, 10.0, 1.0)
    p = tp.optimize_precoder_params(cfg)
    assert np.allclose(p, p[0])


def test_draws_are_reproducible():
    cfg = tp.make_homogeneous(4, 2, 30, 2, 1.0, 1.0)
    H1, Hh1 = tp.draw_estimate(cfg, 3)
    H2, Hh2 = tp.draw_estimate(cfg, 3)
    assert H1.shape == (2, 4)
    assert np.array_equal(H1, H2) and np.array_equal(Hh1, Hh2)


def test_scheme_rate_and_bound():
    cfg = tp.make_homogeneous(8, 4, 30, 4, tp.db_to_linear(10.0), 1.0)
    s = tp.Scheme("zf-sch:fp1")
    assert s.label == "ZF-Sch-FP(1)"
    r = tp.evaluate_scheme(cfg, s, 3, trials=400, seed=2)
    b = tp.evaluate_scheme_bound(cfg, s, 3, trials=400, seed=2)
    assert 0.0 <= r.net <= r.weighted_sum
    assert b.weighted_sum >= r.weighted_sum
    with pytest.raises(tp.ConfigError):
        tp.Scheme("mmse")


def test_run_scenario_csv():
    text = "M: 8\nK: 4\ntau_r: 4\nrho_f_db: 10\nscheme: [zf, gzf-sch]\nsweep: {axis: M, values: [8, 12]}\n"
    out = tp.run_scenario(text, seed=4, trials=300)
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 4
    assert {r["scheme"] for r in rows} == {"ZF-FP(0)", "GZF-Sch-FP(0)"}
    assert out == tp.run_scenario(text, seed=4, trials=300)
