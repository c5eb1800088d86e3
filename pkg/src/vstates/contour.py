"""Discretized contour dynamics for doubly connected patches.

The patch is the region between two star-shaped curves sqrt(b^2 + 2 r1) e^{i theta}
and sqrt(1 + 2 r2) e^{i theta} with m-fold symmetric, even perturbations r1, r2.
The rotating-patch equation F(Omega, r) = Omega r' + d/dtheta F0[r] = 0 is
evaluated spectrally: the convolution part of the kernel is reduced to
boundary integrals by the divergence theorem, its angular singularities are
integrated with exact Fourier weights, and the smooth kernel part of bounded
domains is integrated over the patch area.  Newton continuation in the
kernel-mode amplitude produces the local bifurcation branches.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np
from scipy import special as _sp

from .cmkernel import c_beta
from .models import KernelModel
from . import dispersion as _dispersion

__all__ = [
    "GeometryError",
    "BranchError",
    "PerturbationState",
    "ResidualVector",
    "trivial_state",
    "eval_f0",
    "eval_f",
    "branch_continue",
    "boundary_export",
]

_SUPPORTED = ("EulerPlane", "GsqgPlane", "QgswPlane", "EulerDisc",
              "EulerAnnulus", "EulerExterior")

_RHO_NODES = 24
_EULER_GAMMA = 0.5772156649015328606


class GeometryError(ValueError):
    """Boundary curves left the admissible configuration."""


class BranchError(RuntimeError):
    """Newton continuation failed; carries the last converged points."""

    def __init__(self, message: str, points: list):
        super().__init__(message)
        self.points = points


@dataclass(frozen=True)
class PerturbationState:
    """Cosine-mode perturbation of the annulus b < |x| < 1.

    a1[k-1], a2[k-1] are the cos(k m theta) coefficients of r1, r2 for
    k = 1..n_modes; omega is the rotation speed, s the kernel amplitude.
    """

    b: float
    m: int
    n_modes: int
    a1: np.ndarray
    a2: np.ndarray
    omega: float = 0.0
    s: float = 0.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "a1", np.asarray(self.a1, dtype=float))
        object.__setattr__(self, "a2", np.asarray(self.a2, dtype=float))
        if self.m < 1 or self.n_modes < 1:
            raise ValueError("PerturbationState needs m >= 1, n_modes >= 1")
        if len(self.a1) != self.n_modes or len(self.a2) != self.n_modes:
            raise ValueError("coefficient arrays must have length n_modes")
        if not 0.0 < self.b < 1.0:
            raise ValueError("PerturbationState requires b in (0, 1)")

    @property
    def grid_size(self) -> int:
        return 4 * self.n_modes * self.m

    def theta_grid(self) -> np.ndarray:
        size = self.grid_size
        return 2.0 * np.pi * np.arange(size) / size

    def _modes(self) -> np.ndarray:
        return self.m * np.arange(1, self.n_modes + 1)

    def r_values(self, theta: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        kk = self._modes()
        cos = np.cos(np.outer(theta, kk))
        return cos @ self.a1, cos @ self.a2

    def r_derivatives(self, theta: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        kk = self._modes()
        dsin = -np.sin(np.outer(theta, kk)) * kk
        return dsin @ self.a1, dsin @ self.a2

    def radii(self, theta: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        r1, r2 = self.r_values(theta)
        sq1 = self.b * self.b + 2.0 * r1
        sq2 = 1.0 + 2.0 * r2
        if np.any(sq1 <= 0.0) or np.any(sq2 <= 0.0):
            raise GeometryError("boundary radius collapsed to zero")
        return np.sqrt(sq1), np.sqrt(sq2)


@dataclass(frozen=True)
class ResidualVector:
    """Sine coefficients of F at frequencies m, 2m, ..., n_modes*m."""

    m: int
    n_modes: int
    s1: np.ndarray
    s2: np.ndarray
    grid1: np.ndarray = field(repr=False, default=None)
    grid2: np.ndarray = field(repr=False, default=None)

    def norm(self) -> float:
        return max(float(np.max(np.abs(self.s1))),
                   float(np.max(np.abs(self.s2))))

    def stacked(self) -> np.ndarray:
        return np.concatenate([self.s1, self.s2])


def trivial_state(b: float, m: int, n_modes: int = 64,
                  omega: float = 0.0) -> PerturbationState:
    z = np.zeros(n_modes)
    return PerturbationState(b=b, m=m, n_modes=n_modes, a1=z, a2=z.copy(),
                             omega=omega)


# ---------------------------------------------------------------------------
# kernel family dispatch
# ---------------------------------------------------------------------------

def _kernel_family(model: KernelModel) -> tuple[str, float]:
    v = model.variant
    if v in ("EulerPlane", "EulerDisc", "EulerAnnulus", "EulerExterior"):
        return ("euler", 0.0)
    if v == "GsqgPlane":
        return ("gsqg", model.params["beta"])
    if v == "QgswPlane":
        return ("qgsw", model.params["eps"])
    raise ValueError(f"contour dynamics not supported for {v!r}")


def _log_weight_hat(size: int) -> np.ndarray:
    # Fourier coefficients of log(2|sin(u/2)|): -pi/|k|, zero mean
    k = np.abs(np.fft.fftfreq(size, d=1.0 / size))
    with np.errstate(divide="ignore"):
        w = -np.pi / k
    w[0] = 0.0
    return w


def _pow_weight_hat(size: int, beta: float) -> np.ndarray:
    # Fourier coefficients of |2 sin(u/2)|^{-beta}
    k = np.abs(np.fft.fftfreq(size, d=1.0 / size))
    lg = _sp.gammaln
    log_pref = (math.log(2.0 * math.pi) + lg(1.0 - beta)
                - lg(beta / 2.0) - lg(1.0 - beta / 2.0))
    return np.exp(log_pref + lg(k + beta / 2.0) - lg(k + 1.0 - beta / 2.0))


def _sing_conv(s_matrix: np.ndarray, w_hat: np.ndarray) -> np.ndarray:
    """diag of the spectral product: sum_k s-hat_{i,k} W-hat_k e^{i k theta_i}."""
    transformed = np.fft.ifft(np.fft.fft(s_matrix, axis=1) * w_hat, axis=1)
    return np.diagonal(transformed)


def _qgsw_q0(z: np.ndarray) -> np.ndarray:
    """Q(z) = K_0(z) + log(z) I_0(z), analytic; series below z = 0.5."""
    z = np.asarray(z, dtype=float)
    out = np.empty_like(z)
    small = z < 0.5
    zs = z[small]
    qs = zs * zs / 4.0
    # Q = (log 2 - gamma) I0(z) + sum_{k>=1} H_k (z^2/4)^k / (k!)^2
    acc = np.zeros_like(zs)
    term = np.ones_like(zs)
    harmonic = 0.0
    for k in range(1, 12):
        term = term * qs / (k * k)
        harmonic += 1.0 / k
        acc = acc + term * harmonic
    out[small] = (math.log(2.0) - _EULER_GAMMA) * _sp.i0(zs) + acc
    big = ~small
    zb = z[big]
    out[big] = _sp.k0(zb) + np.log(zb) * _sp.i0(zb)
    return out


def _qgsw_s0(z: np.ndarray) -> np.ndarray:
    """S(z) with (1 - z K_1(z))/z^2 = -log(z/2) I_1(z)/z + S(z)."""
    z = np.asarray(z, dtype=float)
    out = np.empty_like(z)
    small = z < 0.5
    zs = z[small]
    qs = zs * zs / 4.0
    acc = np.zeros_like(zs)
    term = np.ones_like(zs)
    for k in range(0, 12):
        if k > 0:
            term = term * qs / (k * (k + 1.0))
        psi1 = -_EULER_GAMMA + sum(1.0 / j for j in range(1, k + 1))
        psi2 = -_EULER_GAMMA + sum(1.0 / j for j in range(1, k + 2))
        acc = acc + term * (psi1 + psi2)
    out[small] = acc / 4.0
    big = ~small
    zb = z[big]
    t_direct = (1.0 - zb * _sp.k1(zb)) / (zb * zb)
    out[big] = t_direct + np.log(zb / 2.0) * _sp.i1(zb) / zb
    return out


def _i1_over_z(z: np.ndarray) -> np.ndarray:
    z = np.asarray(z, dtype=float)
    out = np.empty_like(z)
    small = z < 1e-6
    out[small] = 0.5 + z[small] ** 2 / 16.0
    out[~small] = _sp.i1(z[~small]) / z[~small]
    return out


# ---------------------------------------------------------------------------
# boundary integrals of the convolution kernel
# ---------------------------------------------------------------------------

def _geometry_matrices(z: np.ndarray, w: np.ndarray, wp: np.ndarray,
                       self_interaction: bool):
    """Distance d_ij = |z_i - w_j| and, for self-interaction, the smooth
    quotient g_ij = d_ij / |2 sin((theta_i - eta_j)/2)| with g_ii = |w'_i|."""
    diff = z[:, None] - w[None, :]
    d = np.abs(diff)
    if not self_interaction:
        return diff, d, None
    size = len(z)
    idx = np.arange(size)
    u = (idx[:, None] - idx[None, :]) * (2.0 * np.pi / size)
    sin_fac = 2.0 * np.abs(np.sin(u / 2.0))
    g = np.empty_like(d)
    off = sin_fac > 0
    g[off] = d[off] / sin_fac[off]
    g[idx, idx] = np.abs(wp)
    return diff, d, g


def _k0_velocity_integral(kind: str, param: float, z: np.ndarray,
                          w: np.ndarray, wp: np.ndarray, v: np.ndarray,
                          self_interaction: bool) -> np.ndarray:
    """int K0(|z_i - w(eta)|) v(eta) d eta, complex-valued."""
    size = len(w)
    h = 2.0 * np.pi / size
    diff, d, g = _geometry_matrices(z, w, wp, self_interaction)
    if not self_interaction:
        if kind == "euler":
            kern = -np.log(d) / (2.0 * np.pi)
        elif kind == "gsqg":
            kern = c_beta(param) * d ** (-param)
        else:
            kern = _sp.k0(param * d) / (2.0 * np.pi)
        return (kern * v[None, :]).sum(axis=1) * h
    if kind == "euler":
        smooth = (-np.log(g) / (2.0 * np.pi)) * v[None, :]
        sing = np.broadcast_to(v, g.shape) * (-1.0 / (2.0 * np.pi))
        w_hat = _log_weight_hat(size)
    elif kind == "gsqg":
        smooth = None
        sing = c_beta(param) * g ** (-param) * v[None, :]
        w_hat = _pow_weight_hat(size, param)
    else:
        ed = param * d
        smooth = ((_qgsw_q0(ed) - np.log(param * g) * _sp.i0(ed))
                  / (2.0 * np.pi)) * v[None, :]
        sing = (-_sp.i0(ed) / (2.0 * np.pi)) * v[None, :]
        w_hat = _log_weight_hat(size)
    total = _sing_conv(sing, w_hat).copy()
    if smooth is not None:
        total += smooth.sum(axis=1) * h
    return total


def _k0_stream_integral(kind: str, param: float, z: np.ndarray,
                        w: np.ndarray, wp: np.ndarray, v: np.ndarray,
                        self_interaction: bool) -> np.ndarray:
    """int (h(d)/d) (w(eta) - z_i) . v(eta) d eta  with h' + h/rho = K0."""
    size = len(w)
    step = 2.0 * np.pi / size
    diff, d, g = _geometry_matrices(z, w, wp, self_interaction)
    # dot_ij = (w_j - z_i) . v_j as plane vectors
    dot = (-diff.real) * v.real[None, :] + (-diff.imag) * v.imag[None, :]
    if not self_interaction:
        if kind == "euler":
            ratio = -(np.log(d) - 0.5) / (4.0 * np.pi)
        elif kind == "gsqg":
            ratio = c_beta(param) / (2.0 - param) * d ** (-param)
        else:
            ed = param * d
            ratio = (1.0 - ed * _sp.k1(ed)) / (ed * ed) / (2.0 * np.pi)
        return (ratio * dot).sum(axis=1) * step
    if kind == "euler":
        smooth = -(np.log(g) - 0.5) / (4.0 * np.pi) * dot
        sing = -dot / (4.0 * np.pi)
        w_hat = _log_weight_hat(size)
    elif kind == "gsqg":
        smooth = None
        sing = c_beta(param) / (2.0 - param) * g ** (-param) * dot
        w_hat = _pow_weight_hat(size, param)
    else:
        ed = param * d
        i1z = _i1_over_z(ed)
        smooth = (_qgsw_s0(ed) - np.log(param * g / 2.0) * i1z) / (2.0 * np.pi) * dot
        sing = -i1z / (2.0 * np.pi) * dot
        w_hat = _log_weight_hat(size)
    total = np.real(_sing_conv(sing.astype(complex), w_hat)).copy()
    if smooth is not None:
        total += smooth.sum(axis=1) * step
    return total


# ---------------------------------------------------------------------------
# smooth kernel part of bounded domains (area integrals)
# ---------------------------------------------------------------------------

def _k1_batch(model: KernelModel, z: np.ndarray, y: np.ndarray,
              want_grad: bool) -> tuple[np.ndarray, np.ndarray | None]:
    """K1(z_i, y_q) and optionally its z-gradient, broadcast over (i, q)."""
    v = model.variant
    if v in ("EulerDisc", "EulerExterior"):
        r = model.params["r"]
        f = r - z[:, None] * np.conj(y)[None, :] / r
        val = np.log(np.abs(f)) / (2.0 * np.pi)
        grad = None
        if want_grad:
            grad = np.conj((-np.conj(y)[None, :] / r) / f) / (2.0 * np.pi)
        return val, grad
    if v == "EulerAnnulus":
        return _annulus_k1_batch(model.params["r1"], model.params["r2"],
                                 z, y, want_grad)
    raise ValueError(f"no smooth kernel part for {v!r}")


def _annulus_k1_batch(rd1: float, rd2: float, z: np.ndarray, y: np.ndarray,
                      want_grad: bool) -> tuple[np.ndarray, np.ndarray | None]:
    rho = np.abs(z)[:, None]
    theta = np.angle(z)[:, None]
    ry = np.abs(y)[None, :]
    dang = theta - np.angle(y)[None, :]
    denom_log = math.log(rd1 / rd2)
    val = (math.log(rd2) * np.log(rd1 / ry) / denom_log
           + (np.log(ry / rd2) / denom_log) * np.log(rho))
    d_rho = np.broadcast_to(np.log(ry / rd2) / denom_log / rho,
                            val.shape).copy()
    d_theta = np.zeros_like(val)
    # term ratios (rho ry / rd2^2)^m and (rd1^2/(rho ry))^m set the cap
    qmax = max(float(np.max(rho) * np.max(ry)) / rd2 ** 2,
               rd1 ** 2 / float(np.min(rho) * np.min(ry)))
    cap = min(400, max(8, int(math.ceil(-16.0 * math.log(10.0)
                                        / math.log(qmax)))))
    for m in range(1, cap + 1):
        den = rd2 ** (2 * m) - rd1 ** (2 * m)
        am = (ry ** m - (rd1 * rd1 / ry) ** m) / den
        bm = rd1 ** (2 * m) * ((rd2 * rd2 / ry) ** m - ry ** m) / den
        cos_m, sin_m = np.cos(m * dang), np.sin(m * dang)
        pw, ipw = rho ** m, rho ** (-m)
        val -= (am * pw + bm * ipw) / m * cos_m
        if want_grad:
            d_rho -= (am * pw / rho - bm * ipw / rho) * cos_m
            d_theta += (am * pw + bm * ipw) * sin_m
    val = val / (2.0 * np.pi)
    grad = None
    if want_grad:
        grad = (np.exp(1j * theta) * (d_rho + 1j * d_theta / rho)
                / (2.0 * np.pi))
    return val, grad


def _k1_area_terms(model: KernelModel, z: np.ndarray,
                   state: PerturbationState,
                   want_grad: bool) -> tuple[np.ndarray, np.ndarray]:
    """Stream and velocity contributions of K1 integrated over the patch."""
    if model.variant in ("EulerPlane", "GsqgPlane", "QgswPlane"):
        zero = np.zeros(len(z))
        return zero, np.zeros(len(z), dtype=complex)
    eta = state.theta_grid()
    ra, rb = state.radii(eta)
    gx, gw = np.polynomial.legendre.leggauss(_RHO_NODES)
    mid = 0.5 * (ra + rb)
    half = 0.5 * (rb - ra)
    rho = mid[:, None] + half[:, None] * gx[None, :]       # (M, R)
    wgt = (half[:, None] * gw[None, :]) * rho              # rho drho jacobian
    y = (rho * np.exp(1j * eta)[:, None]).ravel()
    wy = (wgt * (2.0 * np.pi / len(eta))).ravel()
    val, grad = _k1_batch(model, z, y, want_grad)
    psi = val @ wy
    vel = grad @ wy if want_grad else np.zeros(len(z), dtype=complex)
    return psi, vel


# ---------------------------------------------------------------------------
# geometry assembly and the functional
# ---------------------------------------------------------------------------

def _check_geometry(model: KernelModel, ra: np.ndarray,
                    rb: np.ndarray) -> None:
    if np.any(rb - ra <= 0.0):
        raise GeometryError("boundary curves intersect")
    v = model.variant
    if v in ("EulerDisc",) and np.any(rb >= model.params["r"]):
        raise GeometryError("outer boundary left the domain disc")
    if v == "EulerAnnulus":
        if np.any(ra <= model.params["r1"]) or np.any(rb >= model.params["r2"]):
            raise GeometryError("patch left the annular domain")
    if v == "EulerExterior" and np.any(ra <= model.params["r"]):
        raise GeometryError("inner boundary entered the excluded disc")


def _boundary_data(state: PerturbationState):
    theta = state.theta_grid()
    ra, rb = state.radii(theta)
    d1, d2 = state.r_derivatives(theta)
    rap = d1 / ra
    rbp = d2 / rb
    phase = np.exp(1j * theta)
    w1 = ra * phase
    w2 = rb * phase
    w1p = (rap + 1j * ra) * phase
    w2p = (rbp + 1j * rb) * phase
    return theta, ra, rb, w1, w2, w1p, w2p, d1, d2


def eval_f0(model: KernelModel, state: PerturbationState
            ) -> tuple[np.ndarray, np.ndarray]:
    """Stream function F0[r] sampled on the theta grid for both boundaries."""
    if model.variant not in _SUPPORTED:
        raise ValueError(f"contour dynamics not supported for {model.variant!r}")
    kind, param = _kernel_family(model)
    theta, ra, rb, w1, w2, w1p, w2p, _, _ = _boundary_data(state)
    _check_geometry(model, ra, rb)
    out = []
    for z, selfs in ((w1, (True, False)), (w2, (False, True))):
        inner_self, outer_self = selfs
        v2 = -1j * w2p
        v1 = -1j * w1p
        s = (_k0_stream_integral(kind, param, z, w2, w2p, v2, outer_self)
             - _k0_stream_integral(kind, param, z, w1, w1p, v1, inner_self))
        psi1, _ = _k1_area_terms(model, z, state, want_grad=False)
        out.append(s + psi1)
    return out[0], out[1]


def _velocity(model: KernelModel, state: PerturbationState
              ) -> tuple[np.ndarray, np.ndarray]:
    """Gradient of the stream function on the two boundaries (complex)."""
    kind, param = _kernel_family(model)
    theta, ra, rb, w1, w2, w1p, w2p, _, _ = _boundary_data(state)
    _check_geometry(model, ra, rb)
    out = []
    for z, selfs in ((w1, (True, False)), (w2, (False, True))):
        inner_self, outer_self = selfs
        u = (_k0_velocity_integral(kind, param, z, w2, w2p, 1j * w2p,
                                   outer_self)
             - _k0_velocity_integral(kind, param, z, w1, w1p, 1j * w1p,
                                     inner_self))
        _, vel = _k1_area_terms(model, z, state, want_grad=True)
        out.append(u + vel)
    return out[0], out[1]


def _sine_project(values: np.ndarray, m: int, n_modes: int) -> np.ndarray:
    size = len(values)
    theta = 2.0 * np.pi * np.arange(size) / size
    kk = m * np.arange(1, n_modes + 1)
    return (2.0 / size) * (np.sin(np.outer(kk, theta)) @ values)


def eval_f(model: KernelModel, state: PerturbationState) -> ResidualVector:
    """F(Omega, r) = Omega r' + d/dtheta F0[r], projected on the sine basis."""
    theta, ra, rb, w1, w2, w1p, w2p, d1, d2 = _boundary_data(state)
    u1, u2 = _velocity(model, state)
    # d/dtheta F0_j = grad psi(z_j) . z_j'
    f1 = state.omega * d1 + np.real(u1 * np.conj(w1p))
    f2 = state.omega * d2 + np.real(u2 * np.conj(w2p))
    return ResidualVector(m=state.m, n_modes=state.n_modes,
                          s1=_sine_project(f1, state.m, state.n_modes),
                          s2=_sine_project(f2, state.m, state.n_modes),
                          grid1=f1, grid2=f2)


# ---------------------------------------------------------------------------
# branch continuation
# ---------------------------------------------------------------------------

def _augmented_residual(model: KernelModel, base: PerturbationState,
                        u: np.ndarray, s: float,
                        kvec: np.ndarray) -> np.ndarray:
    n = base.n_modes
    state = replace(base, a1=u[:n], a2=u[n:2 * n], omega=u[2 * n])
    res = eval_f(model, state)
    proj = (u[0] * kvec[0] + u[n] * kvec[1]) / (kvec @ kvec)
    return np.concatenate([res.stacked(), [proj - s]])


def branch_continue(model: KernelModel, b: float, m: int, branch: str = "+",
                    s_max: float = 1e-2, steps: int = 10,
                    n_modes: int = 8, newton_tol: float = 1e-11,
                    max_iter: int = 30) -> list[tuple[float, PerturbationState]]:
    """Amplitude-parameterized branch of m-fold V-states near the annulus.

    Solves {F = 0, kernel-direction amplitude = s} for the 2*n_modes cosine
    coefficients and Omega by damped Newton with a finite-difference
    Jacobian, marching s from 0 to s_max.
    """
    point = _dispersion.dispersion_point(model, m, b)
    if point.delta <= _dispersion.DEGENERACY_TOL:
        raise ValueError(f"Delta_{m},b is not positive: no simple eigenvalue")
    kvec = _dispersion.kernel_vector(model, m, b, branch)
    omega0 = point.omega_plus if branch == "+" else point.omega_minus
    base = trivial_state(b, m, n_modes, omega0)
    n = n_modes
    u = np.zeros(2 * n + 1)
    u[2 * n] = omega0
    results: list[tuple[float, PerturbationState]] = []
    s_grid = np.linspace(0.0, s_max, steps + 1)[1:]
    u_prev = None
    for s in s_grid:
        # predictor: tangent along the kernel direction, then secant
        if u_prev is None:
            guess = u.copy()
            guess[0] += s * kvec[0]
            guess[n] += s * kvec[1]
        else:
            guess = 2.0 * u - u_prev
        cur = guess
        converged = False
        for _ in range(max_iter):
            try:
                r0 = _augmented_residual(model, base, cur, s, kvec)
            except GeometryError:
                break
            if np.max(np.abs(r0)) < newton_tol:
                converged = True
                break
            jac = np.empty((2 * n + 1, 2 * n + 1))
            h = 1e-7
            for j in range(2 * n + 1):
                step_vec = np.zeros(2 * n + 1)
                step_vec[j] = h
                rp = _augmented_residual(model, base, cur + step_vec, s, kvec)
                rm = _augmented_residual(model, base, cur - step_vec, s, kvec)
                jac[:, j] = (rp - rm) / (2.0 * h)
            try:
                delta = np.linalg.solve(jac, r0)
            except np.linalg.LinAlgError:
                break
            cur = cur - delta
        if not converged:
            raise BranchError(f"Newton failed at s = {s:g}", results)
        u_prev, u = u, cur
        state = replace(base, a1=cur[:n], a2=cur[n:2 * n],
                        omega=cur[2 * n], s=float(s))
        results.append((float(s), state))
    return results


def boundary_export(state: PerturbationState,
                    samples: int | None = None
                    ) -> tuple[np.ndarray, np.ndarray]:
    """Complex samples of the two boundary curves on a uniform grid."""
    if samples is None:
        theta = state.theta_grid()
    else:
        theta = 2.0 * np.pi * np.arange(samples) / samples
    ra, rb = state.radii(theta)
    phase = np.exp(1j * theta)
    return ra * phase, rb * phase
