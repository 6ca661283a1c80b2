import math

import numpy as np
import pytest

from conemetric import demos
from conemetric.states import antisymmetric_state, swap_operator, symmetric_state, werner_state


def test_states_are_normalized_and_orthogonal():
    for d in (2, 3):
        sym = symmetric_state(d)
        anti = antisymmetric_state(d)
        assert np.trace(sym).real == pytest.approx(1.0, abs=1e-12)
        assert np.trace(anti).real == pytest.approx(1.0, abs=1e-12)
        assert np.trace(sym @ anti).real == pytest.approx(0.0, abs=1e-12)
        F = swap_operator(d)
        assert np.allclose(F @ F, np.eye(d * d))
        w = werner_state(d, 0.7)
        assert np.trace(w).real == pytest.approx(1.0, abs=1e-12)


def test_data_hiding_report():
    out = demos.data_hiding(3, 0.9, 0.4)
    assert out["norms"]["m_plus"]["value"] == pytest.approx(1.0, abs=1e-10)
    assert out["norms"]["m_ppt"]["value"] == pytest.approx(2 / 3, abs=1e-10)
    assert out["norms"]["m_ppt_plus"]["value"] == pytest.approx(0.5, abs=1e-4)
    # chain bounds hold for both cones and the psd sup/inf take Werner values
    psd_chain = out["chain_bounds"]["psd"]
    assert psd_chain["sup"] == pytest.approx(2.25, rel=1e-9)
    assert all(link["passed"] for link in psd_chain["links"])
    conv_chain = out["chain_bounds"]["conv_psd_ppt"]
    assert conv_chain["sup"] == pytest.approx(2.25, rel=2e-3)
    assert conv_chain["inf"] == pytest.approx(2.2 / 3.2, rel=2e-3)
    assert all(link["passed"] for link in conv_chain["links"])
    # p2 < 1/2: the second state leaves the ppt cone, so h_ppt is undefined
    assert out["ppt_cone_distance_defined"] is False


def test_data_hiding_ppt_cone_defined_above_half():
    out = demos.data_hiding(3, 0.9, 0.6)
    assert out["ppt_cone_distance_defined"] is True
    assert out["chain_bounds"]["ppt"]["sup"] > 1.0


def test_werner_diameters_crossover_report():
    out = demos.werner_diameters(3, 0.5)
    rows = {row["q"]: row for row in out["rows"]}
    q_star = out["crossover_q"]
    assert q_star == pytest.approx(2 / 3)
    assert rows[0.5]["order"] == "psd < ppt"
    assert rows[q_star]["order"] == "equal"
    assert rows[1.0]["order"] == "psd > ppt"
    assert abs(rows[q_star]["psd_lower"] - rows[q_star]["ppt_lower"]) <= 1e-9


def test_optimality_report():
    out = demos.optimality(deltas=(1.0,))
    row = out["rows"][0]
    assert row["negativity_ratio_at_equal_weights"] == pytest.approx(math.tanh(0.25), abs=1e-9)
    assert abs(row["base_norm_ratio_near_limit"] - row["tanh_half"]) <= 1e-2


def test_run_demo_rejects_unknown():
    with pytest.raises(ValueError):
        demos.run_demo("unknown_demo")
