import csv
import io
import json
import math

import pytest

import hbsm_lab as h


def test_hybrid_element_anchors():
    d = h.assemble_hbsm(0.1, 1.0, 0.9, 0.9)
    assert d[0] == 0.0
    assert d[1] == pytest.approx(0.1 * 0.9 * math.erf(0.5), rel=1e-12)
    assert d[2] == pytest.approx(0.025410, rel=1e-4)
    assert h.closed_form_diag(0.1, 1.0, 0.9, 0.9, 2) == pytest.approx(d[2], abs=1e-12)
    conj = h.assemble_hbsm_by_conjugation(0.1, 1.0, 0.9, 0.9)
    assert conj == pytest.approx(d, abs=1e-12)


def test_detectors_and_purity():
    assert h.spd_on_off(0.5)[2] == pytest.approx(0.75)
    pnr = h.pnr_single_click(0.6, 2)
    assert pnr[2] == pytest.approx(0.6 * (2 * 0.4 + 0.3))
    assert h.pnr_single_click(1.0) == [0, 1, 0, 0, 0, 0]
    assert h.purity([0, 0.3, 0.3]) == pytest.approx(0.5)
    assert h.purity([0, 0, 0]) is None
    assert h.p_max([0, 0.09, 0.17]) == 0.17
    assert h.asymptotic_purity(0.9) == pytest.approx(0.7222, abs=1e-4)
    assert h.bernoulli_loss([1, 1, 1], 0.3) == pytest.approx([1, 1, 1])
    assert h.hd_windowed(1.0, 1.0)[0] == pytest.approx(math.erf(0.5))


def test_protocols():
    det = h.assemble_hbsm(0.1, 0.1, 0.5, 0.9)
    out = h.teleport(0.5, det)
    assert out["single_photon_prob"] == pytest.approx(0.25, abs=1e-12)
    assert out["two_photon_prob"] == pytest.approx(0.125, abs=1e-12)
    assert 0.9 < out["fidelity"] < 1.0
    assert h.herald(0.5, det)["success_prob"] == pytest.approx(1.878e-3, rel=1e-3)
    assert h.herald(0.5, det, "mixed")["fidelity"] == pytest.approx(h.herald(0.5, det)["fidelity"], abs=1e-12)
    assert h.herald_baseline(0.3) == pytest.approx(0.3)
    assert h.swap(0.0, det)["fidelity"] is None
    plus = h.swap(0.4, det)
    minus = h.swap(0.4, det, port="minus")
    assert plus["fidelity"] == pytest.approx(minus["fidelity"], abs=1e-12)


def test_crossover():
    assert h.find_crossover("purity") == pytest.approx(0.8512, abs=1e-3)
    assert h.find_crossover("purity", N_det=2) is None


def test_errors():
    with pytest.raises(h.DomainError):
        h.assemble_hbsm(1.5, 0.1, 0.5, 0.9)
    with pytest.raises(h.ConfigError):
        h.run_sweep_csv('{"task": "purity", "fixed": {"R": 2}}')
    with pytest.raises(h.ConfigError):
        h.run_sweep_csv("not json")
    with pytest.raises(h.ConfigError):
        h.preset_config("fig99")


def test_sweep_and_presets():
    assert "fig5" in h.preset_names()
    config = h.preset_config("fig2")[0]
    rows = list(csv.DictReader(io.StringIO(h.run_sweep_csv(config, 1))))
    assert [float(r["delta"]) for r in rows] == [10, 1, 0.25, 0.001]
    assert float(rows[0]["trace_0_4"]) == pytest.approx(0.824, rel=0.015)
    spec = json.loads(h.preset_config("fig7")[0])
    assert spec["task"] == "swap"
    assert h.run_sweep_csv(h.preset_config("fig7")[0], 1) == h.run_sweep_csv(h.preset_config("fig7")[0], 3)
