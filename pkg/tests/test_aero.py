import numpy as np
import pytest

from twinsim.dynamics.aero import CasedAero, ConstantAero, aero_forces

CASED = CasedAero(f_d_max=1200.0, f_d_idle=200.0, f_d_rev=300.0,
                  v_max=50.0, v_rev=10.0, downforce_coeff=10.0)


def test_constant_drag_proportional():
    p = ConstantAero(linear_drag=1.2, angular_drag=0.02)
    drag, torque, down = aero_forces(np.array([2.0, -1.0, 0.0]),
                                     np.array([0.0, 0.0, 3.0]), 0.0, 0, 0.0, p)
    assert np.allclose(drag, [-2.4, 1.2, 0.0])
    assert torque[2] == pytest.approx(-0.06)
    assert down == 0.0


def test_cased_idle_at_zero_output_torque():
    drag, _, _ = aero_forces(np.array([5.0, 0, 0]), np.zeros(3), 0.0, 1, 100.0, CASED)
    assert np.linalg.norm(drag) == pytest.approx(200.0)


def test_cased_max_at_top_speed():
    drag, _, _ = aero_forces(np.array([55.0, 0, 0]), np.zeros(3), 100.0, 5, 100.0, CASED)
    assert np.linalg.norm(drag) == pytest.approx(1200.0)


def test_cased_reverse():
    drag, _, _ = aero_forces(np.array([-12.0, 0, 0]), np.zeros(3), 50.0, -1, -30.0, CASED)
    assert np.linalg.norm(drag) == pytest.approx(300.0)


def test_cased_default_idle():
    drag, _, _ = aero_forces(np.array([12.0, 0, 0]), np.zeros(3), 50.0, 2, 100.0, CASED)
    assert np.linalg.norm(drag) == pytest.approx(200.0)


def test_downforce_linear_in_speed():
    _, _, down = aero_forces(np.array([5.0, 0, 0]), np.zeros(3), 50.0, 2, 100.0, CASED)
    assert down == pytest.approx(50.0)


def test_drag_opposes_motion():
    drag, _, _ = aero_forces(np.array([3.0, 4.0, 0.0]), np.zeros(3), 50.0, 2, 100.0, CASED)
    assert np.dot(drag, [3.0, 4.0, 0.0]) < 0.0
