import math

import numpy as np
import pytest

from conemetric import cones, linalg
from conemetric.cones import Cone
from conemetric.states import maximally_entangled, werner_state

PSD = Cone.psd()


def test_member_psd_and_ppt():
    omega = maximally_entangled(2)
    assert cones.member(PSD, omega)
    assert not cones.member(Cone.ppt(2, 2), omega)
    assert cones.member(Cone.ppt_cap_psd(2, 2), np.eye(4) / 4)
    assert cones.member(Cone.conv_psd_ppt(2, 2), omega)


def test_member_shape_mismatch():
    with pytest.raises(ValueError):
        cones.member(Cone.ppt(2, 2), np.eye(6))


def test_feasibility_decompose_trivial_cases():
    rng = np.random.default_rng(2)
    v = linalg.random_psd(rng, 4)
    res = cones.feasibility_decompose(v, 2, 2)
    assert res.status == "feasible"
    assert np.allclose(res.P, v, atol=1e-9)
    assert linalg.op_norm(res.Q) <= 1e-12

    q0 = linalg.random_psd(rng, 4)
    res = cones.feasibility_decompose(linalg.partial_transpose(q0, 2, 2), 2, 2)
    assert res.status == "feasible"
    assert np.allclose(res.Q, q0, atol=1e-9)


def test_feasibility_decompose_genuinely_mixed_instance():
    # 0.2*Omega + (0.2*Omega)^{T1} + 0.01*I is neither psd nor ppt, yet it
    # decomposes across the two cones by construction.
    omega = maximally_entangled(2)
    v = 0.2 * omega + 0.2 * linalg.partial_transpose(omega, 2, 2) + 0.01 * np.eye(4)
    assert not linalg.psd_check(v)
    assert not linalg.psd_check(linalg.partial_transpose(v, 2, 2))
    res = cones.feasibility_decompose(v, 2, 2, tol=1e-8)
    assert res.status == "feasible"
    recon = res.P + linalg.partial_transpose(res.Q, 2, 2)
    assert linalg.op_norm(recon - v) <= 1e-6
    assert linalg.psd_check(res.P, 1e-7)
    assert linalg.psd_check(res.Q, 1e-7)


def test_member_conv_outside_despite_entangled_positive_part():
    # Omega - 0.05*I admits the separating functional (I - Omega)/3.
    omega = maximally_entangled(2)
    assert not cones.member(Cone.conv_psd_ppt(2, 2), omega - 0.05 * np.eye(4), tol=1e-7)


def test_feasibility_decompose_infeasible_with_witness():
    res = cones.feasibility_decompose(-np.eye(4), 2, 2)
    assert res.status == "infeasible"
    assert res.witness is not None
    assert res.witness_value < 0
    W = res.witness
    assert linalg.psd_check(W, 1e-8)
    assert linalg.psd_check(linalg.partial_transpose(W, 2, 2), 1e-8)


def test_sup_ratio_commuting():
    assert cones.sup_ratio(PSD, np.diag([2.0, 1.0]), np.eye(2)) == pytest.approx(2.0)
    assert cones.inf_ratio(PSD, np.diag([2.0, 1.0]), np.eye(2)) == pytest.approx(1.0)


def test_sup_ratio_disjoint_supports():
    a = np.diag([1.0, 0.0])
    b = np.diag([0.0, 1.0])
    assert cones.sup_ratio(PSD, a, b) == math.inf
    assert cones.inf_ratio(PSD, a, b) == 0.0
    assert cones.hilbert_distance(PSD, a, b) == math.inf


def test_sup_ratio_zero_conventions():
    z = np.zeros((2, 2))
    rho = np.eye(2) / 2
    assert cones.sup_ratio(PSD, z, rho) == 0.0
    assert cones.sup_ratio(PSD, rho, z) == math.inf
    assert cones.hilbert_distance(PSD, z, z) == 0.0
    assert cones.hilbert_distance(PSD, rho, z) == math.inf
    assert cones.hilbert_distance(PSD, z, rho) == math.inf


def test_sup_ratio_werner_pair():
    rho1 = werner_state(3, 0.9)
    rho2 = werner_state(3, 0.4)
    assert cones.sup_ratio(PSD, rho1, rho2) == pytest.approx(0.9 / 0.4, rel=1e-10)
    assert cones.inf_ratio(PSD, rho1, rho2) == pytest.approx(0.1 / 0.6, rel=1e-10)


def test_sup_ratio_rejects_non_members():
    with pytest.raises(cones.ConeMembershipError):
        cones.sup_ratio(PSD, np.diag([1.0, -1.0]), np.eye(2))


@pytest.mark.parametrize("dim", [2, 3, 4])
def test_oracle_matches_closed_form_psd(dim):
    rng = np.random.default_rng(100 + dim)
    for _ in range(8):
        a = linalg.random_psd(rng, dim)
        b = linalg.random_psd(rng, dim)
        closed = cones.sup_ratio(PSD, a, b)
        oracle = cones.sup_ratio_oracle(PSD, a, b, tol=1e-8)
        assert oracle == pytest.approx(closed, rel=1e-6)


def test_oracle_trivial_values():
    rng = np.random.default_rng(42)
    a = linalg.random_psd(rng, 3)
    assert cones.sup_ratio_oracle(PSD, a, a, tol=1e-9) == pytest.approx(1.0, rel=1e-8)
    assert cones.sup_ratio_oracle(PSD, 2.0 * a, a, tol=1e-9) == pytest.approx(2.0, rel=1e-8)


def test_oracle_detail_flags():
    rng = np.random.default_rng(44)
    a = linalg.random_psd(rng, 2)
    detail = {}
    cones.sup_ratio_oracle(PSD, a, a, tol=1e-9, detail=detail)
    assert detail["reason"] == "bracketed"
    detail = {}
    # disjoint supports: any tolerance-based bracket saturates, reported inf
    assert cones.sup_ratio_oracle(
        PSD, np.diag([1.0, 0.0]), np.diag([0.0, 1.0]), detail=detail) == math.inf
    assert detail["reason"] in ("doubling_cap_reached", "tolerance_saturated")
    detail = {}
    assert cones.sup_ratio_oracle(PSD, a, np.zeros((2, 2)), detail=detail) == math.inf
    assert detail["reason"] == "zero_denominator"


def test_oracle_matches_closed_form_ppt():
    rng = np.random.default_rng(61)
    cone = Cone.ppt(2, 2)
    for _ in range(6):
        a = linalg.partial_transpose(linalg.random_psd(rng, 4), 2, 2)
        b = linalg.partial_transpose(linalg.random_psd(rng, 4), 2, 2)
        closed = cones.sup_ratio(cone, a, b)
        oracle = cones.sup_ratio_oracle(cone, a, b, tol=1e-8)
        assert oracle == pytest.approx(closed, rel=1e-6)


def test_intersection_cone_is_max_of_components():
    rng = np.random.default_rng(17)
    cone = Cone.ppt_cap_psd(2, 2)
    for _ in range(6):
        a = linalg.random_psd(rng, 4)
        b = linalg.random_psd(rng, 4)
        a = a + linalg.partial_transpose(linalg.random_psd(rng, 4), 2, 2)
        b = b + linalg.partial_transpose(linalg.random_psd(rng, 4), 2, 2)
        if not (cones.member(cone, a) and cones.member(cone, b)):
            continue
        s = cones.sup_ratio(cone, a, b)
        s_psd = cones.sup_ratio(PSD, a, b, check=False)
        s_ppt = cones.sup_ratio(
            PSD,
            linalg.partial_transpose(a, 2, 2),
            linalg.partial_transpose(b, 2, 2),
            check=False,
        )
        assert s == pytest.approx(max(s_psd, s_ppt), rel=1e-12)
        oracle = cones.sup_ratio_oracle(cone, a, b, tol=1e-8)
        assert oracle == pytest.approx(s, rel=1e-6)


def test_hilbert_distance_basics():
    rng = np.random.default_rng(8)
    rho = linalg.random_density(rng, 3)
    assert cones.hilbert_distance(PSD, rho, rho) == pytest.approx(0.0, abs=1e-9)
    h = cones.hilbert_distance(PSD, np.diag([2.0, 1.0]) / 3.0, np.eye(2) / 2.0)
    assert h == pytest.approx(math.log(2.0), rel=1e-12)


def test_hilbert_distance_scale_invariance():
    rng = np.random.default_rng(12)
    a = linalg.random_psd(rng, 3)
    b = linalg.random_psd(rng, 3)
    h = cones.hilbert_distance(PSD, a, b)
    for alpha, beta in [(0.3, 7.0), (2.0, 0.11), (9.5, 9.5)]:
        assert cones.hilbert_distance(PSD, alpha * a, beta * b) == pytest.approx(h, abs=1e-9)


def test_hilbert_distance_triangle_inequality():
    rng = np.random.default_rng(23)
    for _ in range(100):
        a = linalg.random_psd(rng, 3)
        b = linalg.random_psd(rng, 3)
        c = linalg.random_psd(rng, 3)
        hab = cones.hilbert_distance(PSD, a, b)
        hbc = cones.hilbert_distance(PSD, b, c)
        hac = cones.hilbert_distance(PSD, a, c)
        assert hac <= hab + hbc + 1e-8


def test_hilbert_distance_additive_on_lines():
    rng = np.random.default_rng(31)
    for lam in (0.25, 0.5, 0.8):
        a = linalg.random_psd(rng, 3)
        c = linalg.random_psd(rng, 3)
        b = lam * a + (1 - lam) * c
        lhs = cones.hilbert_distance(PSD, a, c)
        rhs = cones.hilbert_distance(PSD, a, b) + cones.hilbert_distance(PSD, b, c)
        assert lhs == pytest.approx(rhs, abs=1e-8)


def test_hilbert_distance_additive_on_tensor_products():
    rng = np.random.default_rng(37)
    for _ in range(5):
        a1, b1 = linalg.random_psd(rng, 2), linalg.random_psd(rng, 2)
        a2, b2 = linalg.random_psd(rng, 3), linalg.random_psd(rng, 3)
        lhs = cones.hilbert_distance(PSD, np.kron(a1, a2), np.kron(b1, b2))
        rhs = cones.hilbert_distance(PSD, a1, b1) + cones.hilbert_distance(PSD, a2, b2)
        assert lhs == pytest.approx(rhs, abs=1e-8)


def test_oscillation():
    rng = np.random.default_rng(41)
    a = linalg.random_psd(rng, 3)
    b = linalg.random_psd(rng, 3)
    assert cones.oscillation(PSD, a, a) == pytest.approx(0.0, abs=1e-12)
    assert cones.oscillation(PSD, np.diag([2.0, 1.0]), np.eye(2)) == pytest.approx(1.0)
    # invariance under a -> a + beta*b
    osc1 = cones.oscillation(PSD, a, b)
    osc2 = cones.oscillation(PSD, a + 3.0 * b, b)
    assert osc2 == pytest.approx(osc1, rel=1e-9)


def test_conv_cone_werner_ratios():
    rho1 = werner_state(3, 0.9)
    rho2 = werner_state(3, 0.4)
    cone = Cone.conv_psd_ppt(3, 3)
    sup = cones.sup_ratio(cone, rho1, rho2)
    assert sup == pytest.approx(0.9 / 0.4, rel=2e-3)
    inf = cones.inf_ratio(cone, rho1, rho2)
    assert inf == pytest.approx((4 - 1.8) / (4 - 0.8), rel=2e-3)


def test_conv_cone_sup_bounded_by_psd_sup():
    # The conv cone contains the psd cone, so its order is weaker and the
    # sup ratio can only shrink.
    rng = np.random.default_rng(53)
    cone = Cone.conv_psd_ppt(2, 2)
    for _ in range(3):
        a = linalg.random_density(rng, 4)
        b = linalg.random_density(rng, 4)
        s_conv = cones.sup_ratio(cone, a, b)
        s_psd = cones.sup_ratio(PSD, a, b)
        assert s_conv <= s_psd * (1 + 1e-6)
        assert s_conv >= 1e-6


def test_deformed_cone_membership():
    sphere = Cone.qubit_sphere(0.5)
    assert cones.member(sphere, np.eye(2) / 2)
    # Bloch radius 0.6 exceeds the deformed base radius 0.5.
    rho = np.array([[0.8, 0.0], [0.0, 0.2]])
    assert not cones.member(sphere, rho)
    rho = np.array([[0.7, 0.0], [0.0, 0.3]])
    assert cones.member(sphere, rho)


def test_dual_cone_mapping():
    assert cones.dual_cone(PSD).kind == "psd"
    assert cones.dual_cone(Cone.ppt(2, 2)).kind == "ppt"
    assert cones.dual_cone(Cone.ppt_cap_psd(2, 2)).kind == "conv_psd_ppt"
    assert cones.dual_cone(Cone.conv_psd_ppt(2, 2)).kind == "ppt_cap_psd"
