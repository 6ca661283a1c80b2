import math

import numpy as np
import pytest

from conemetric import linalg, synthesis
from conemetric.channels import diameter_sampled, from_kraus, identity_channel, is_trace_preserving, to_choi
from conemetric.cones import Cone, hilbert_distance
from conemetric.synthesis import (
    complete_to_instrument,
    feasible,
    instrument_success_branch,
    optimality_witness,
    support_compatible,
    synthesize,
)

PSD = Cone.psd()


def test_support_compatible_cases():
    rng = np.random.default_rng(1)
    full = [linalg.random_density(rng, 2) for _ in range(4)]
    assert support_compatible(*full)
    r1 = np.diag([1.0, 0.0]).astype(complex)
    r2 = np.eye(2) / 2
    r1p = np.eye(2) / 2
    r2p = np.diag([0.0, 1.0]).astype(complex)
    assert not support_compatible(r1, r2, r1p, r2p)
    assert support_compatible(r1, r2, r1, r2)


def test_feasible_directions():
    r1 = np.diag([0.75, 0.25]).astype(complex)
    r2 = np.eye(2) / 2
    assert feasible(r1, r2, r1, r2).feasible
    fwd = feasible(r1, r2, r2, r2)
    assert fwd.feasible and fwd.h_in == pytest.approx(math.log(3.0), rel=1e-9)
    rev = feasible(r2, r2, r1, r2)
    assert not rev.feasible
    assert rev.reason == "hilbert distance would increase"


def test_synthesize_worked_example():
    r1 = np.diag([0.75, 0.25]).astype(complex)
    r2 = np.eye(2) / 2
    result = synthesize(r1, r2, r2, r2)
    assert result.feasible
    assert result.p1 == pytest.approx(1.0, abs=1e-9)
    assert result.p2 == pytest.approx(1.0, abs=1e-9)
    # hand execution: T(rho) = tr(rho) I/2
    rng = np.random.default_rng(3)
    rho = linalg.random_hermitian(rng, 2)
    out = result.channel.apply(rho)
    assert np.allclose(out, np.trace(rho).real * np.eye(2) / 2, atol=1e-9)
    assert result.choi_min_eigenvalue >= -1e-9
    assert max(result.residuals) <= 1e-8


def test_synthesize_identity_pair():
    rng = np.random.default_rng(5)
    r1 = linalg.random_density(rng, 2)
    r2 = linalg.random_density(rng, 2)
    result = synthesize(r1, r2, r1, r2)
    assert result.feasible
    assert result.choi_min_eigenvalue >= -1e-9
    assert max(result.residuals) <= 1e-8


def test_synthesize_refuses_reverse():
    r1 = np.diag([0.75, 0.25]).astype(complex)
    r2 = np.eye(2) / 2
    result = synthesize(r2, r2, r1, r2)
    assert not result.feasible
    assert result.channel is None


def test_synthesize_disjoint_support_branch():
    r1 = np.diag([1.0, 0.0, 0.0]).astype(complex)
    r2 = np.diag([0.0, 0.5, 0.5]).astype(complex)
    rng = np.random.default_rng(7)
    r1p = linalg.random_density(rng, 2)
    r2p = linalg.random_density(rng, 2)
    result = synthesize(r1, r2, r1p, r2p)
    assert result.feasible
    assert result.branch == "no_inclusion"
    assert result.choi_min_eigenvalue >= -1e-9
    assert max(result.residuals) <= 1e-8
    assert result.p1 > 0 and result.p2 > 0


def test_synthesize_random_round_trip():
    rng = np.random.default_rng(11)
    successes = 0
    for _ in range(40):
        dim = int(rng.integers(2, 4))
        r1 = linalg.random_density(rng, dim)
        r2 = linalg.random_density(rng, dim)
        r1p = linalg.random_density(rng, dim)
        r2p = linalg.random_density(rng, dim)
        check = feasible(r1, r2, r1p, r2p)
        result = synthesize(r1, r2, r1p, r2p)
        assert result.feasible == check.feasible
        if result.feasible:
            successes += 1
            assert result.choi_min_eigenvalue >= -1e-9
            assert max(result.residuals) <= 1e-8
            assert result.p1 > 0 and result.p2 > 0
            # monotonicity direction: the synthesized map contracts h
            h_out = hilbert_distance(
                PSD, result.channel.apply(r1), result.channel.apply(r2), check=False)
            assert h_out <= check.h_in + 1e-8
    assert successes >= 5  # random qubit/qutrit pairs are often feasible


def test_complete_to_instrument_trace_preserving_map():
    T = identity_channel(2)
    inst = complete_to_instrument(T)
    assert is_trace_preserving(inst, 1e-9)
    rng = np.random.default_rng(13)
    rho = linalg.random_density(rng, 2)
    branch = instrument_success_branch(inst, rho)
    assert np.allclose(branch, rho, atol=1e-9)  # c = 1, B = 0


def test_complete_to_instrument_rescales_subnormalized_map():
    half = from_kraus([np.eye(2) / np.sqrt(2.0)], label="half identity")
    inst = complete_to_instrument(half)
    assert is_trace_preserving(inst, 1e-9)
    rng = np.random.default_rng(17)
    rho = linalg.random_density(rng, 2)
    branch = instrument_success_branch(inst, rho)
    # c = 1/||T*(1)||_inf = 2, so the success branch is the full identity.
    assert np.allclose(branch, rho, atol=1e-9)


def test_complete_to_instrument_from_synthesis():
    r1 = np.diag([0.75, 0.25]).astype(complex)
    r2 = np.eye(2) / 2
    result = synthesize(r1, r2, r2, r2)
    inst = complete_to_instrument(result.channel)
    assert is_trace_preserving(inst, 1e-9)
    assert linalg.psd_check(to_choi(inst), 1e-8)
    for rho, p, target in ((r1, result.p1, r2), (r2, result.p2, r2)):
        branch = instrument_success_branch(inst, rho)
        success = float(np.trace(branch).real)
        assert success > 0
        assert np.allclose(branch / success, target, atol=1e-8)


def test_complete_to_instrument_rejects_zero_map():
    zero = from_kraus([np.zeros((2, 2))])
    with pytest.raises(ValueError):
        complete_to_instrument(zero)


@pytest.mark.parametrize("delta", [0.5, 1.0, 2.0])
def test_optimality_witness_equal_weights(delta):
    wit = optimality_witness(delta, 1.0, 1.0)
    assert wit.negativity_ratio == pytest.approx(math.tanh(delta / 4.0), abs=1e-8)
    assert wit.diameter == pytest.approx(delta, abs=1e-9)


def test_optimality_witness_base_norm_limit():
    delta = 1.0
    lam2 = 1.0
    lam1 = 0.999 * math.exp(delta) * lam2
    wit = optimality_witness(delta, lam1, lam2)
    assert wit.base_norm_ratio == pytest.approx(math.tanh(delta / 2.0), abs=1e-2)


def test_optimality_witness_small_delta_limit():
    wit = optimality_witness(1e-4, 1.0, 1.0)
    assert wit.negativity_ratio == pytest.approx(0.0, abs=1e-4)
    assert wit.base_norm_ratio == pytest.approx(0.0, abs=1e-3)


def test_optimality_witness_sampled_diameter():
    wit = optimality_witness(1.0, 1.0, 1.0)
    est = diameter_sampled(wit.channel, PSD, n_samples=24, n_refine=3, seed=5)
    assert est.lower == pytest.approx(1.0, abs=1e-3)


def test_optimality_witness_rejects_bad_parameters():
    with pytest.raises(ValueError):
        optimality_witness(1.0, 1.0, 0.3)  # lam2 <= exp(-delta)*lam1
    with pytest.raises(ValueError):
        optimality_witness(-1.0, 1.0, 1.0)
