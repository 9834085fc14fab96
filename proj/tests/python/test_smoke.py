import math

import pytest

import ampsim


def test_standard_sets_and_kinds():
    names = [s["name"] for s in ampsim.standard_sets()]
    assert names == ["hardest", "hard", "moderate", "easiest"]
    assert "uniform" in ampsim.scheme_kinds()
    assert "rfqa-d" in ampsim.scheme_kinds()


def test_energy_endpoints():
    assert ampsim.classical_energy(10, 0.3, 0.64, 1.0) == pytest.approx(-0.3)
    assert ampsim.classical_energy(10, 0.3, 0.64, 0.0) == pytest.approx(0.0)
    assert len(ampsim.sector_energies(10, 0.3, 0.64)) == 11


def test_density_of_states_sums_to_one():
    assert sum(ampsim.density_of_states(12)) == pytest.approx(1.0)


def test_gap_and_forward_prediction():
    g = ampsim.gap_profile(8, 0.34, 0.59)
    assert 0.0 < g["s_min"] < 1.0
    assert g["delta_min"] > 0.0
    assert ampsim.critical_kappa(10, 0.34, 0.59) == pytest.approx(1.73, abs=0.1)
    assert ampsim.forward_gap(8, 0.34, 0.59) > 0.0


def test_evolution_and_tts():
    p = ampsim.success_probability("uniform", 5, 0.34, 0.59)
    assert 0.0 < p <= 1.0
    rec = ampsim.averaged_tts("rfqa-m", 5, 0.34, 0.59, draws=2, seed=3)
    assert rec["draws"] == 2
    assert rec["tts"] == pytest.approx(ampsim.tts(rec["t_f"], rec["p_success"]))
    again = ampsim.averaged_tts("rfqa-m", 5, 0.34, 0.59, draws=2, seed=3)
    assert again == rec


def test_fit_and_errors():
    fit = ampsim.fit_exponential([(n, 2.0 ** (0.5 + 0.25 * n)) for n in range(4, 10)])
    assert fit["gamma"] == pytest.approx(0.25)
    assert math.isinf(ampsim.tts(10.0, 0.0))
    with pytest.raises(ValueError):
        ampsim.success_probability("no-such-scheme", 5, 0.34, 0.59)
    with pytest.raises(ValueError):
        ampsim.classical_energy(10, 0.3, 0.4, 0.5)
