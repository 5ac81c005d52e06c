import numpy as np
import pytest

from conftest import random_cp_matrix

from lindblad2 import (
    check_form_e,
    check_gram_psd,
    choi_check,
    dissipation_matrix,
    form_e_pack,
    gram_from_dissipation,
    is_completely_positive,
)
from lindblad2.errors import NegativeTimeError


def test_check_form_e_dephasing_is_cp():
    verdict = check_form_e(form_e_pack(np.diag([0.5, 0.5, 0.0])))
    assert verdict.cp
    assert verdict.reason is None


def test_check_form_e_detects_condition_a():
    # Companion matrix diag(1, 1, -0.1): T < 0.
    ell = np.diag([0.45, 0.45, 1.0])
    assert np.allclose(gram_from_dissipation(ell), np.diag([1.0, 1.0, -0.1]))
    verdict = check_form_e(form_e_pack(ell))
    assert not verdict.cp
    assert verdict.reason == "(a) T >= 0"
    # The spectral oracle agrees that the companion matrix is indefinite.
    assert np.linalg.eigvalsh(gram_from_dissipation(ell))[0] < 0.0


def test_check_form_e_zero_is_cp():
    assert check_form_e(form_e_pack(np.zeros((3, 3)))).cp


def test_check_gram_psd_examples():
    assert check_gram_psd(np.eye(3)).cp

    verdict = check_gram_psd(np.diag([1.0, 1.0, -0.1]))
    assert not verdict.cp
    assert verdict.reason == "(i) M33 >= 0"

    m = np.full((3, 3), -0.6)
    np.fill_diagonal(m, 1.0)
    assert np.linalg.det(m) == pytest.approx(-0.512, abs=1e-12)
    verdict = check_gram_psd(m)
    assert not verdict.cp
    assert verdict.reason == "(iii) det(M) >= 0"
    assert np.linalg.eigvalsh(m)[0] < 0.0


def test_is_completely_positive_isotropic():
    lam = 0.7
    verdict, certificate = is_completely_positive(lam * np.eye(3))
    assert verdict.cp
    assert len(certificate.terms) == 3
    assert np.max(np.abs(dissipation_matrix(certificate) - lam * np.eye(3))) < 1e-10


def test_is_completely_positive_dephasing_certificate():
    verdict, certificate = is_completely_positive(np.diag([0.5, 0.5, 0.0]))
    assert verdict.cp
    assert len(certificate.terms) == 1
    rate, axis = certificate.terms[0]
    assert rate == pytest.approx(1.0)
    assert np.allclose(np.abs(axis), [0.0, 0.0, 1.0])


def test_is_completely_positive_rejects_single_axis_excess():
    verdict, certificate = is_completely_positive(np.diag([0.0, 0.0, 1.0]))
    assert not verdict.cp
    assert certificate is None
    assert verdict.reason == "(i) M33 >= 0"


def test_is_completely_positive_zero_dissipator():
    verdict, certificate = is_completely_positive(np.zeros((3, 3)))
    assert verdict.cp
    assert certificate is None


def test_verdict_scale_invariant():
    rng = np.random.default_rng(67)
    for _ in range(200):
        ell = rng.uniform(-1.0, 1.0, size=(3, 3))
        ell = 0.5 * (ell + ell.T)
        verdict, _ = is_completely_positive(ell)
        for s in (1e-3, 7.0, 1e4):
            scaled, _ = is_completely_positive(s * ell)
            assert scaled.cp == verdict.cp


def test_oracle_agreement_random():
    rng = np.random.default_rng(71)
    for _ in range(2000):
        ell = rng.uniform(-1.0, 1.0, size=(3, 3))
        ell = 0.5 * (ell + ell.T)
        via_e = check_form_e(form_e_pack(ell))
        m = gram_from_dissipation(ell)
        via_m = check_gram_psd(m)
        min_eig = float(np.linalg.eigvalsh(m / np.linalg.norm(m))[0])
        if abs(min_eig) > 1e-9:
            assert via_e.cp == via_m.cp == (min_eig > 0.0)


def test_certificate_soundness_random():
    rng = np.random.default_rng(73)
    for _ in range(200):
        ell = random_cp_matrix(rng, int(rng.integers(1, 5)))
        verdict, certificate = is_completely_positive(ell)
        assert verdict.cp
        assert np.max(np.abs(dissipation_matrix(certificate) - ell)) < 1e-10


def test_choi_identity_map_spectrum():
    minima = choi_check([0.0, 0.0, 0.0], np.diag([0.5, 0.5, 0.0]), [0.0])
    assert minima[0] == pytest.approx(0.0, abs=1e-12)
    # Full spectrum at t = 0 is {2, 0, 0, 0}: the maximally entangled
    # projector scaled by 2; checked via the trace.
    from lindblad2.cpcheck import _propagate
    from lindblad2.dynamics import matrix_exponential

    transfer = matrix_exponential(0.0 * np.eye(3))
    choi = np.zeros((4, 4), dtype=complex)
    for i in range(2):
        for j in range(2):
            unit = np.zeros((2, 2), dtype=complex)
            unit[i, j] = 1.0
            choi += np.kron(unit, _propagate(transfer, unit))
    eigs = np.linalg.eigvalsh(choi)
    assert np.allclose(eigs, [0.0, 0.0, 0.0, 2.0], atol=1e-12)


def test_choi_cp_generator_stays_positive():
    minima = choi_check([0.0, 0.0, 0.0], np.diag([0.5, 0.5, 0.0]), [0.1, 1.0, 10.0])
    assert np.all(minima >= -1e-10)


def test_choi_witnesses_cp_failure():
    minima = choi_check([0.0, 0.0, 0.0], np.diag([0.0, 0.0, 1.0]), [0.01, 0.1, 1.0])
    assert np.min(minima) < -1e-6
    # Analytic value at small t: (exp(-t) - 1) / 2.
    assert minima[0] == pytest.approx(0.5 * (np.exp(-0.01) - 1.0), abs=1e-10)


def test_choi_random_cp_generators():
    rng = np.random.default_rng(79)
    for _ in range(30):
        ell = random_cp_matrix(rng, int(rng.integers(1, 4)))
        h = rng.normal(size=3)
        minima = choi_check(h, ell, [0.01, 0.1, 1.0, 10.0])
        assert np.all(minima >= -1e-8)


def test_choi_rejects_negative_time():
    with pytest.raises(NegativeTimeError):
        choi_check([0.0, 0.0, 0.0], np.eye(3), [-1.0])


def test_not_cp_stays_not_cp_under_scaling():
    rng = np.random.default_rng(83)
    found = 0
    while found < 50:
        ell = rng.uniform(-1.0, 1.0, size=(3, 3))
        ell = 0.5 * (ell + ell.T)
        verdict, _ = is_completely_positive(ell)
        if verdict.cp:
            continue
        found += 1
        for s in (0.5, 3.0, 100.0):
            scaled, _ = is_completely_positive(s * ell)
            assert not scaled.cp
