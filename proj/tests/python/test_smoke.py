import json
import math

import pytest

import ionsplit


def test_trap_spec_equilibrium_distance():
    trap = ionsplit.make_trap_spec("Be9+", 2.0e6)
    assert trap.d0_m == pytest.approx(5.80e-6, abs=0.01e-6)
    assert trap.d0 == pytest.approx((2.0 * trap.coulomb) ** (1.0 / 3.0), rel=1e-12)


def test_unknown_species_raises():
    with pytest.raises(ionsplit.ConfigError):
        ionsplit.make_trap_spec("Xx3+", 2.0e6)


def test_design_and_classical_roundtrip(tmp_path):
    trap = ionsplit.make_trap_spec("Be9+", 2.0e6)
    wf = ionsplit.design_waveform(trap, tf_us=8.0, order=11, n_samples=801)
    assert len(wf) == 801
    assert wf.d[0] == pytest.approx(trap.d0, rel=1e-9)
    assert wf.d[-1] == pytest.approx(10.0 * trap.d0, rel=1e-9)
    assert wf.omega_plus_sq[0] == pytest.approx(3.0, abs=1e-12)

    report = ionsplit.simulate_classical_waveform(wf, n_steps=100000)
    assert report.method == "classical"
    assert report.excitation_quanta < 0.01
    assert report.per_mode.plus_quanta >= 0.0

    csv = ionsplit.waveform_csv(wf, trap)
    header = csv.splitlines()[0]
    assert header.startswith("t_s,alpha_si,beta_si,d_si")
    assert len(csv.splitlines()) == 802


def test_shoot_exposes_design():
    trap = ionsplit.make_trap_spec("Be9+", 2.0e6)
    t_f = 8.0e-6 * trap.omega0_rad_s
    result = ionsplit.shoot(trap.coulomb, t_f, sep_factor=10.0, order=11)
    assert result.converged
    assert result.objective < 1e-6
    assert result.design.order == 11
    assert result.design.d_final == pytest.approx(10.0 * result.design.d0, rel=1e-12)


def test_reference_ramp_endpoints():
    trap = ionsplit.make_trap_spec("Be9+", 2.0e6)
    t_f = 20.0e-6 * trap.omega0_rad_s
    wf = ionsplit.reference_ramp(trap.coulomb, t_f, sep_factor=10.0, n_samples=401)
    assert wf.d[0] == pytest.approx(trap.d0, rel=1e-12)
    assert wf.d[-1] == pytest.approx(10.0 * trap.d0, rel=1e-12)
    # the prescribed schedule inverts the stretch curvature mid-ramp
    assert min(wf.omega_plus_sq) < 0.0


def test_run_experiment_design(tmp_path):
    cfg = {
        "trap": {"species": "Be9+", "omega0_hz": 2.0e6},
        "protocol": {"t_f_us": 8.0, "order": 11},
        "output": {"dir": str(tmp_path)},
    }
    out = json.loads(ionsplit.run_experiment("design", json.dumps(cfg)))
    assert out["converged"] is True
    assert out["beta_max_si"] > 0.0
    assert any(name.endswith("design.json") for name in out["files"])


def test_run_experiment_rejects_unknown_kind():
    with pytest.raises(ionsplit.ConfigError):
        ionsplit.run_experiment("frobnicate", "{}")
