"""Real and complex spectra: four solvers, counts, critical couplings."""

import math

import pytest

import properties as P
from ptwell.errors import WindowError
from ptwell.model import ModelParams, sigma_tau_from_st, st_from_sigma_tau, RotatedPoint
from ptwell.constraint import sigma_star, xi_branch
from ptwell.matching import residual_real
from ptwell.spectrum import (
    EnergyWindow,
    complex_spectrum,
    count_real,
    critical_couplings,
    determinant_real_roots,
    hermitian_spectrum,
    real_spectrum_bracket,
    real_spectrum_lattice,
)

PI = math.pi

# Frozen from this build and cross-checked against the two other root
# finders to 1e-8 (see the three-method agreement tests below).
GOLDEN_Z1_OM0 = [
    2.5699590331233,
    9.79227238721084,
    22.2180196719001,
    39.4593591524662,
    61.6891014668864,
    88.8179849828254,
    120.904727289334,
    157.908917532688,
    199.860742064099,
    246.737068993474,
    298.556371426108,
    355.303646911256,
]

GOLDEN_PAIRS_Z1_OM01 = [
    2289.9840950119 + 47.609684509179j,
    2598.4036813864 + 80.561041560981j,
    2925.9889404016 + 114.32959153166j,
    3272.7555739764 + 150.78121333665j,
]


def _energies(states):
    return [st.energy for st in states]


# ---------------------------------------------------------------------------
# Hermitian limit


def test_hermitian_levels():
    got = _energies(hermitian_spectrum(ModelParams(Z=0.0, omega=0.0), e_max=30.0))
    assert got == pytest.approx([PI**2 / 4, PI**2, 9 * PI**2 / 4], rel=1e-12)


def test_hermitian_levels_ignore_omega():
    a = _energies(hermitian_spectrum(ModelParams(Z=0.0, omega=0.0), e_max=200.0))
    b = _energies(hermitian_spectrum(ModelParams(Z=0.0, omega=0.5), e_max=200.0))
    assert a == b


def test_hermitian_empty_below_ground_state():
    assert hermitian_spectrum(ModelParams(Z=0.0, omega=0.0), e_max=1.0) == []


def test_hermitian_requires_zero_coupling():
    with pytest.raises(ValueError):
        hermitian_spectrum(ModelParams(Z=1.0, omega=0.0), e_max=10.0)


def test_hermitian_formula_first_20():
    got = _energies(hermitian_spectrum(ModelParams(Z=0.0, omega=0.0), e_max=21**2 * PI**2 / 4))
    want = [(n + 1) ** 2 * PI**2 / 4 for n in range(20)]
    assert got[:20] == pytest.approx(want, rel=1e-12)


# ---------------------------------------------------------------------------
# real spectrum, three methods


def test_bracket_golden_levels():
    got = _energies(real_spectrum_bracket(ModelParams(Z=1.0, omega=0.0), e_max=400.0))
    assert got == pytest.approx(GOLDEN_Z1_OM0, rel=1e-9)


def test_bracket_s_range_does_not_clip_these_levels():
    a = _energies(real_spectrum_bracket(ModelParams(Z=1.0, omega=0.0), s_max=5.0, e_max=400.0))
    assert a == pytest.approx(GOLDEN_Z1_OM0, rel=1e-10)


def test_bracket_dispatches_hermitian_at_zero_coupling():
    a = _energies(real_spectrum_bracket(ModelParams(Z=0.0, omega=0.3), e_max=100.0))
    b = _energies(hermitian_spectrum(ModelParams(Z=0.0, omega=0.3), e_max=100.0))
    assert a == b


def test_bracket_honors_energy_ceiling():
    states = real_spectrum_bracket(ModelParams(Z=2.0, omega=0.1), e_max=250.0)
    assert states and all(st.energy <= 250.0 for st in states)


def test_lattice_matches_bracket():
    for Z, om in ((1.0, 0.1), (2.0, -0.2)):
        params = ModelParams(Z=Z, omega=om)
        brack = _energies(real_spectrum_bracket(params))
        latt = [e for e in _energies(real_spectrum_lattice(params, k_max=16)) if e <= 2000.0]
        assert len(latt) == len(brack)
        assert latt == pytest.approx(brack, rel=1e-8)


def test_lattice_rejects_empty_stripe_range():
    with pytest.raises(ValueError):
        real_spectrum_lattice(ModelParams(Z=1.0, omega=0.1), k_max=0)


def test_determinant_roots_match_bracket():
    params = ModelParams(Z=1.0, omega=0.1)
    brack = _energies(real_spectrum_bracket(params))
    det = determinant_real_roots(params, e_max=2000.0)
    assert det == pytest.approx(brack, rel=1e-8)


def test_real_states_report_kind_and_amplitude():
    states = real_spectrum_bracket(ModelParams(Z=1.0, omega=0.1), e_max=100.0)
    for st in states:
        assert st.kind == "real"
        assert st.wave is not None and st.wave.s >= 0.0
        assert st.A is None or math.isfinite(st.A)


# ---------------------------------------------------------------------------
# counting and saturation


def test_count_values():
    assert count_real(ModelParams(Z=0.0, omega=0.0), 100.0) == 6
    assert count_real(ModelParams(Z=1.0, omega=0.0), 100.0) == 6


def test_count_saturates_with_rotation():
    params = ModelParams(Z=1.0, omega=0.1)
    assert count_real(params, 1e4) == 29
    assert count_real(params, 1e6) == 29


def test_count_keeps_growing_without_rotation():
    params = ModelParams(Z=1.0, omega=0.0)
    assert count_real(params, 4e4) > count_real(params, 1e4)


# ---------------------------------------------------------------------------
# complex spectrum


def test_complex_spectrum_pure_real_at_zero_coupling():
    rep = complex_spectrum(ModelParams(Z=0.0, omega=0.3), window=EnergyWindow(0.0, 100.0, -10.0, 10.0))
    assert len(rep.real_levels) == 6 and rep.complex_pairs == []
    want = [(n + 1) ** 2 * PI**2 / 4 for n in range(6)]
    assert _energies(rep.real_levels) == pytest.approx(want, rel=1e-8)


def test_complex_spectrum_real_only_window():
    rep = complex_spectrum(ModelParams(Z=1.0, omega=0.0), window=EnergyWindow(0.0, 100.0, -10.0, 10.0))
    assert len(rep.real_levels) == 6 and rep.complex_pairs == []
    assert _energies(rep.real_levels) == pytest.approx(GOLDEN_Z1_OM0[:6], rel=1e-8)


def test_complex_spectrum_finds_conjugate_pairs():
    rep = complex_spectrum(
        ModelParams(Z=1.0, omega=0.1), window=EnergyWindow(2100.0, 3500.0, -200.0, 200.0)
    )
    assert rep.real_levels == []
    assert rep.complex_pairs == pytest.approx(GOLDEN_PAIRS_Z1_OM01, rel=1e-9)
    assert all(e.imag > 0 for e in rep.complex_pairs)
    d = rep.diagnostics
    assert d["n_pairs"] == 4 and d["n_real"] == 0 and d["winding_total"] == 8


def test_complex_spectrum_diagnostics_carry_crossover():
    rep = complex_spectrum(ModelParams(Z=1.0, omega=0.1), window=EnergyWindow(0.0, 50.0, -5.0, 5.0))
    assert rep.diagnostics["sigma_star"] == pytest.approx(-9.880453922598624, abs=1e-6)


def test_complex_spectrum_rejects_asymmetric_window():
    with pytest.raises(WindowError):
        complex_spectrum(ModelParams(Z=1.0, omega=0.1), window=EnergyWindow(0.0, 100.0, -5.0, 6.0))


def test_energy_window_validation():
    with pytest.raises(WindowError):
        EnergyWindow(10.0, 0.0, -5.0, 5.0)
    with pytest.raises(WindowError):
        EnergyWindow(0.0, 10.0, 5.0, -5.0)


# ---------------------------------------------------------------------------
# critical couplings


def test_critical_couplings_at_zero_rotation():
    crits = critical_couplings(0.0, 2)
    assert crits == pytest.approx([4.475311279, 12.80154419], abs=5e-3)


def test_critical_couplings_shift_with_rotation():
    # frozen from this solver; the first merge moves by ~8% per 0.05 of
    # rotation and is not even in its sign
    assert critical_couplings(0.05, 1)[0] == pytest.approx(4.826568604, abs=1e-2)
    assert critical_couplings(-0.05, 1)[0] == pytest.approx(4.106964111, abs=1e-2)


def test_critical_coupling_continuity_in_small_rotation():
    z1 = critical_couplings(0.001, 1)[0]
    assert abs(z1 - 4.475311279) < 0.05


# ---------------------------------------------------------------------------
# structural properties


def test_no_real_roots_beyond_crossover():
    params = ModelParams(Z=1.0, omega=0.1)
    star = sigma_star(params)
    signs = set()
    min_abs = float("inf")
    sig = star
    while sig > star - 25.0:
        tau = xi_branch(sig, params)
        w = st_from_sigma_tau(RotatedPoint(sig, tau), params)
        r = residual_real(w, params)
        signs.add(r > 0)
        min_abs = min(min_abs, abs(r))
        sig -= 0.01
    assert len(signs) == 1 and min_abs > 0.0


def test_real_levels_continuous_in_small_rotation():
    base = _energies(real_spectrum_bracket(ModelParams(Z=1.0, omega=0.0)))[:3]
    tilt = _energies(real_spectrum_bracket(ModelParams(Z=1.0, omega=1e-3)))[:3]
    for a, b in zip(base, tilt):
        assert abs(a - b) < 1e-2


def test_hermitian_limit_of_small_coupling():
    got = _energies(real_spectrum_bracket(ModelParams(Z=1e-6, omega=0.0), e_max=200.0))[:8]
    want = [(n + 1) ** 2 * PI**2 / 4 for n in range(8)]
    assert got == pytest.approx(want, abs=1e-3)


def test_property_real_residuals():
    assert P.check_real_residuals() >= 30
