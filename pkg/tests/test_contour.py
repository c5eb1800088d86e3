"""Contour-dynamics discretization, linearization checks and branches."""

import math
from dataclasses import replace

import numpy as np
import pytest

from vstates import contour, dispersion, models


EULER = models.euler_plane()


def _state(b=0.5, m=4, n=8, omega=0.0):
    return contour.trivial_state(b, m, n, omega)


# ---------------------------------------------------------------------------
# state and geometry
# ---------------------------------------------------------------------------

def test_state_validation():
    with pytest.raises(ValueError):
        contour.PerturbationState(b=0.5, m=0, n_modes=4,
                                  a1=np.zeros(4), a2=np.zeros(4))
    with pytest.raises(ValueError):
        contour.PerturbationState(b=1.5, m=3, n_modes=4,
                                  a1=np.zeros(4), a2=np.zeros(4))
    with pytest.raises(ValueError):
        contour.PerturbationState(b=0.5, m=3, n_modes=4,
                                  a1=np.zeros(3), a2=np.zeros(4))


def test_grid_size():
    st = _state(m=4, n=8)
    assert st.grid_size == 4 * 8 * 4
    assert len(st.theta_grid()) == st.grid_size


def test_radius_positivity_enforced():
    st = _state(b=0.3)
    bad = replace(st, a1=st.a1 + np.array([0.1] + [0.0] * 7))
    with pytest.raises(contour.GeometryError):
        bad.radii(bad.theta_grid())


def test_curve_intersection_detected():
    st = _state(b=0.9)
    bad = replace(st, a1=st.a1 + np.array([0.12] + [0.0] * 7))
    with pytest.raises(contour.GeometryError):
        contour.eval_f0(EULER, bad)


def test_domain_violation_detected():
    model = models.euler_annulus(0.45, 1.2)
    st = _state(b=0.5)
    bad = replace(st, a2=st.a2 + np.array([0.25] + [0.0] * 7))
    with pytest.raises(contour.GeometryError):
        contour.eval_f0(model, bad)


def test_unsupported_model_rejected():
    with pytest.raises(ValueError):
        contour.eval_f0(models.gsqg_disc(0.5, 2.0), _state())


def test_boundary_export_circles_at_zero():
    st = _state(b=0.4)
    inner, outer = contour.boundary_export(st, samples=64)
    assert np.max(np.abs(np.abs(inner) - 0.4)) < 1e-14
    assert np.max(np.abs(np.abs(outer) - 1.0)) < 1e-14


# ---------------------------------------------------------------------------
# the functional at the trivial state
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("model", [
    EULER, models.gsqg_plane(0.5), models.qgsw_plane(2.0),
    models.euler_disc(2.0), models.euler_annulus(0.1, 10.0),
    models.euler_exterior(0.1)])
def test_annulus_is_equilibrium(model):
    st = _state(omega=0.25)
    f01, f02 = contour.eval_f0(model, st)
    # stream function constant on each circle
    assert np.std(f01) < 1e-12
    assert np.std(f02) < 1e-12
    assert contour.eval_f(model, st).norm() < 1e-12


def test_f0_even_symmetry():
    # cosine perturbations keep F0 even in theta
    st = _state()
    pert = replace(st, a1=st.a1 + 0.01 * np.eye(8)[0],
                   a2=st.a2 + 0.005 * np.eye(8)[1])
    f01, f02 = contour.eval_f0(EULER, pert)
    for f in (f01, f02):
        assert np.max(np.abs(f - np.roll(f[::-1], 1))) < 1e-12


def test_residual_vector_shape_and_norm():
    st = _state(omega=0.1)
    pert = replace(st, a2=st.a2 + 0.01 * np.eye(8)[0])
    res = contour.eval_f(EULER, pert)
    assert len(res.s1) == len(res.s2) == 8
    assert res.norm() > 0
    assert len(res.stacked()) == 16


# ---------------------------------------------------------------------------
# linearization against the dispersion multipliers
# ---------------------------------------------------------------------------

def _fd_block(model, st, k, eps=1e-5):
    block = np.zeros((2, 2))
    for col in range(2):
        coeffs = [st.a1.copy(), st.a2.copy()]
        coeffs[col][k - 1] = eps
        rp = contour.eval_f(model, replace(st, a1=coeffs[0], a2=coeffs[1]))
        coeffs[col][k - 1] = -eps
        rm = contour.eval_f(model, replace(st, a1=coeffs[0], a2=coeffs[1]))
        block[0, col] = (rp.s1[k - 1] - rm.s1[k - 1]) / (2 * eps)
        block[1, col] = (rp.s2[k - 1] - rm.s2[k - 1]) / (2 * eps)
    return block


@pytest.mark.parametrize("model", [
    EULER, models.gsqg_plane(0.5), models.qgsw_plane(2.0),
    models.euler_disc(2.0), models.euler_exterior(0.1)])
def test_fd_jacobian_matches_multiplier_blocks(model):
    b, m, n_modes, omega = 0.5, 4, 4, 0.2
    st = _state(b, m, n_modes, omega)
    for k in (1, 2, 3):
        n = k * m
        target = -n * dispersion.q_matrix(model, n, b, omega)
        block = _fd_block(model, st, k)
        rel = np.max(np.abs(block - target)) / np.max(np.abs(target))
        assert rel < 1e-6


def test_fd_jacobian_off_mode_coupling_vanishes():
    # perturbing mode m must not excite mode 2m at linear order
    st = _state(0.5, 4, 4, 0.2)
    eps = 1e-5
    rp = contour.eval_f(EULER, replace(st, a1=st.a1 + eps * np.eye(4)[0]))
    rm = contour.eval_f(EULER, replace(st, a1=st.a1 - eps * np.eye(4)[0]))
    col1 = (rp.s1 - rm.s1) / (2 * eps)
    assert np.max(np.abs(col1[1:])) < 1e-8 * abs(col1[0])


def test_scalar_f0_linearization_rows():
    # d F0[0] h for h = (0, cos(n eta)): row 1 carries the cross coefficient
    # lamt + pt, row 2 carries V^2 + lam_n1 + p_n1
    model = models.euler_annulus(0.1, 10.0)
    b, m, n_modes = 0.5, 4, 4
    st = _state(b, m, n_modes)
    theta = st.theta_grid()
    f01, f02 = contour.eval_f0(model, st)
    eps = 1e-6
    n = m
    row = dispersion.spectral_row(model, n, b)
    v1, v2 = dispersion.v_constants(model, b)
    g1, g2 = contour.eval_f0(model, replace(st, a2=st.a2 + eps * np.eye(4)[0]))
    c1 = 2.0 * np.mean((g1 - f01) / eps * np.cos(n * theta))
    c2 = 2.0 * np.mean((g2 - f02) / eps * np.cos(n * theta))
    assert c1 == pytest.approx(row.lamt_nb + row.pt_nb, abs=1e-6)
    assert c2 == pytest.approx(v2 + row.lam_n1 + row.p_n1, abs=1e-6)


# ---------------------------------------------------------------------------
# branch continuation
# ---------------------------------------------------------------------------

def test_branch_requires_simple_eigenvalue():
    with pytest.raises(ValueError):
        contour.branch_continue(EULER, 0.5, 3)   # degenerate fold


@pytest.mark.parametrize("branch", ["+", "-"])
def test_branch_tangent_and_speed(branch):
    b, m = 0.5, 5
    pt = dispersion.dispersion_point(EULER, m, b)
    omega0 = pt.omega_plus if branch == "+" else pt.omega_minus
    kvec = dispersion.kernel_vector(EULER, m, b, branch)
    pts = contour.branch_continue(EULER, b, m, branch=branch,
                                  s_max=4e-4, steps=4, n_modes=8)
    s, st = pts[0]
    assert st.s == pytest.approx(s)
    got = np.array([st.a1[0], st.a2[0]])
    rel = np.linalg.norm(got - s * kvec) / np.linalg.norm(s * kvec)
    assert rel < 1e-4
    assert abs(st.omega - omega0) < 1e-4
    # every accepted point is an equilibrium of the discretized functional
    for s_i, st_i in pts:
        assert contour.eval_f(EULER, st_i).norm() < 1e-10


def test_branch_states_nontrivial_and_m_fold():
    pts = contour.branch_continue(EULER, 0.5, 5, branch="+",
                                  s_max=1e-3, steps=2, n_modes=8)
    _, st = pts[-1]
    assert abs(st.a1[0]) > 0 or abs(st.a2[0]) > 0
    inner, outer = contour.boundary_export(st)
    size = len(inner)
    shift = size // 5      # rotation by 2 pi / m maps the curve to itself
    rot = np.exp(2j * np.pi / 5)
    assert np.max(np.abs(inner - np.roll(inner, -shift) / rot)) < 1e-12


def test_branch_error_reports_progress():
    # driving the amplitude far beyond the local branch breaks the geometry
    with pytest.raises(contour.BranchError) as err:
        contour.branch_continue(EULER, 0.5, 5, branch="+", s_max=3.0,
                                steps=3, n_modes=8)
    assert isinstance(err.value.points, list)
    # the small-amplitude prefix still converged before the failure
    assert len(err.value.points) >= 1
