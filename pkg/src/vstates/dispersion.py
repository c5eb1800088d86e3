"""Spectral engine for the linearized patch dynamics.

Assembles the coefficient rows and dispersion points of the annulus
1_{D \\ b D}, evaluates the discriminant and its large-n limit, locates the
smallest symmetry fold m admitting simple real eigenvalues, scans the
monotone ordering of the two branches, and classifies stability.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate as _integrate

from . import models as _models
from .cmkernel import Measure
from .models import KernelModel
from .universal import phi_n, phi_nb, psi_b

__all__ = [
    "DEGENERACY_TOL",
    "SpectralRow",
    "DispersionPoint",
    "MonotonicityReport",
    "FoldNotFound",
    "spectral_row",
    "dispersion_point",
    "delta_inf",
    "s_membership",
    "min_fold",
    "annulus_fold_inequality",
    "exterior_fold_inequality",
    "monotonicity_scan",
    "classify",
    "q_matrix",
    "kernel_vector",
]

# absolute tolerance identifying a degenerate discriminant
DEGENERACY_TOL = 1e-9


class FoldNotFound(RuntimeError):
    """No symmetry fold below the cap satisfies the bifurcation conditions."""


@dataclass(frozen=True)
class SpectralRow:
    """Coefficients entering the n-th Fourier block of the linearization."""

    n: int
    b: float
    lam_nb: float
    lam_n1: float
    lamt_nb: float
    p_nb: float
    p_n1: float
    pt_nb: float
    c_b: float
    ct_b: float
    source: dict = field(default_factory=dict)


@dataclass(frozen=True)
class DispersionPoint:
    """Dispersion data at mode n: quadratic coefficients, discriminant, roots."""

    n: int
    b: float
    a_nb: float
    b_nb: float
    delta: float
    omega_plus: float | None
    omega_minus: float | None
    classification: str  # {"stable", "unstable", "degenerate"}
    row: SpectralRow


@dataclass(frozen=True)
class MonotonicityReport:
    case: str  # {"V1>V2", "V1<V2"}
    ok: bool
    first_violation: int | None
    n_values: tuple[int, ...]
    omega_plus: tuple[float, ...]
    omega_minus: tuple[float, ...]
    v1: float
    v2: float


# ---------------------------------------------------------------------------
# quadrature fallback for convolution models without closed forms
# ---------------------------------------------------------------------------

def _phi_tail_model(n: int, y: float) -> float:
    # large-argument expansion phi_n(y) = 2/y - (2 n^2 - 1/4)/y^3 + O(y^-5)
    return 2.0 / y - (2.0 * n * n - 0.25) / y ** 3


def _phi_batch(n: int, ys: np.ndarray) -> np.ndarray:
    """phi_n over an array of arguments via the graded Gauss-Legendre rule."""
    from .universal import _phi_gauss
    ys = np.asarray(ys, dtype=float)
    coarse = _phi_gauss(n, ys, 48)
    fine = _phi_gauss(n, ys, 96)
    if np.max(np.abs(fine - coarse)) > 1e-10:
        fine = _phi_gauss(n, ys, 192)
    return fine


def _phi_nb_batch(n: int, b: float, xs: np.ndarray) -> np.ndarray:
    """phi_{n,b} over an array of arguments, shared trapezoid grid."""
    xs = np.asarray(xs, dtype=float)
    m = 64
    h = 2.0 * np.pi / m

    def level_sum(eta: np.ndarray) -> np.ndarray:
        dist = np.sqrt(1.0 + b * b - 2.0 * b * np.cos(eta))
        return (np.exp(-xs[:, None] * dist) * np.cos(n * eta)).sum(axis=1)

    total = level_sum(np.arange(m) * h) * h
    while m < (1 << 21):
        mid = np.arange(m) * h + 0.5 * h
        total_new = 0.5 * total + level_sum(mid) * (0.5 * h)
        m *= 2
        h *= 0.5
        if np.max(np.abs(total_new - total)) <= 1e-12:
            return total_new
        total = total_new
    return total


def _density_nodes(mu: Measure, x_hi: float,
                   order: int = 32) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes/weights for the density part of mu on (0, x_hi).

    Weights include the density value.  Panels refine geometrically toward
    the lower endpoint; the shifted family integrates in u with
    x = eps cosh(u), which removes its inverse-square-root singularity.
    """
    gx, gw = np.polynomial.legendre.leggauss(order)

    def panels(lo: float, hi: float, geometric: bool = True) -> np.ndarray:
        if geometric:
            frac = hi - lo
            edges = [lo]
            scales = [2.0 ** -k for k in range(14, 0, -1)]
            edges += [lo + frac * s for s in scales] + [hi]
            return np.array(edges)
        return np.linspace(lo, hi, 17)

    def assemble(edges: np.ndarray, fun_x, fun_w) -> tuple[np.ndarray, np.ndarray]:
        xs, ws = [], []
        for a, c in zip(edges[:-1], edges[1:]):
            mid, half = 0.5 * (a + c), 0.5 * (c - a)
            u = mid + half * gx
            xs.append(fun_x(u))
            ws.append(fun_w(u) * half * gw)
        return np.concatenate(xs), np.concatenate(ws)

    if mu.family == "qgsw_shifted":
        eps = mu.params["eps"]
        u_hi = math.acosh(max(x_hi / eps, 1.5))
        return assemble(panels(0.0, u_hi, geometric=False),
                        lambda u: eps * np.cosh(u),
                        lambda u: eps * np.cosh(u) / (2.0 * math.pi))
    if mu.family == "truncated_low":
        lo, hi = 0.0, min(mu.params["x_star"], x_hi)
    elif mu.family == "truncated_high":
        lo, hi = mu.params["x_star"], max(x_hi, mu.params["x_star"] + 10.0)
    else:
        lo, hi = 0.0, x_hi
    dens = np.vectorize(mu.density)
    return assemble(panels(lo, hi), lambda u: u, lambda u: dens(u))


def _lambda_quadrature(mu: Measure, n: int, scale: float) -> float:
    """int phi_n(scale * x) dmu(x)/x with the algebraic tail summed by model."""
    x_cut = 300.0 / scale
    total = 0.0
    for x, m in mu.atoms:
        if x == 0.0:
            raise ValueError("spectral coefficient undefined for atom at 0")
        total += m * phi_n(n, scale * x) / x
    if mu.family is None:
        return total
    xs, ws = _density_nodes(mu, x_cut)
    total += float(np.sum(_phi_batch(n, scale * xs) * ws / xs))
    tail, _ = _integrate.quad(
        lambda x: _phi_tail_model(n, scale * x) * mu.density(x) / x,
        x_cut, np.inf, limit=200)
    return total + tail


def _lambda_tilde_quadrature(mu: Measure, n: int, b: float) -> float:
    """int phi_{n,b}(x) dmu(x)/x; the integrand decays like e^{-(1-b)x}."""
    decay = max(1.0 - b, 1e-3)
    x_cut = math.log(2.0 * math.pi / 1e-14) / decay + 10.0
    total = 0.0
    for x, m in mu.atoms:
        total += m * phi_nb(n, b, x) / x
    if mu.family is None:
        return total
    xs, ws = _density_nodes(mu, x_cut)
    total += float(np.sum(_phi_nb_batch(n, b, xs) * ws / xs))
    return total


# ---------------------------------------------------------------------------
# row / point assembly
# ---------------------------------------------------------------------------

def spectral_row(model: KernelModel, n: int, b: float) -> SpectralRow:
    """Assemble the six coefficients and two constants of the n-th block."""
    if n < 1:
        raise ValueError("spectral_row requires n >= 1")
    if not model.contains_b(b):
        raise ValueError(f"b = {b} outside the admissible interval {model.s_max}")
    source: dict = {}
    lam_nb = _models.closed_lambda(model, n, b)
    lam_n1 = _models.closed_lambda(model, n, 1.0)
    lamt_nb = _models.closed_tilde_lambda(model, n, b)
    if lam_nb is not None:
        source["lambda"] = "closed"
    else:
        mu = model.measure()
        if mu is None:
            raise ValueError("model provides neither closed forms nor a measure")
        lam_nb = _lambda_quadrature(mu, n, b)
        lam_n1 = _lambda_quadrature(mu, n, 1.0)
        lamt_nb = _lambda_tilde_quadrature(mu, n, b)
        source["lambda"] = "quadrature"
    if model.variant in ("GsqgDisc", "QgswDisc"):
        source["p"] = "series"
    elif model.variant in _models._PLANE:
        source["p"] = "zero"
    else:
        source["p"] = "closed"
    p_nb, p_n1, pt_nb = _models.closed_p(model, n, b)
    c_b, ct_b = _models.c_terms(model, b)
    return SpectralRow(n=n, b=b, lam_nb=lam_nb, lam_n1=lam_n1, lamt_nb=lamt_nb,
                      p_nb=p_nb, p_n1=p_n1, pt_nb=pt_nb, c_b=c_b, ct_b=ct_b,
                      source=source)


def dispersion_point(model: KernelModel, n: int, b: float,
                     tol: float = DEGENERACY_TOL) -> DispersionPoint:
    """Quadratic coefficients A, B, discriminant and roots at mode n."""
    row = spectral_row(model, n, b)
    v1, v2 = v_constants(model, b)
    a_nb = -v1 + row.lam_nb + row.p_nb
    b_nb = -v2 - row.lam_n1 - row.p_n1
    off = row.lamt_nb + row.pt_nb
    delta = (a_nb - b_nb) ** 2 - 4.0 * off * off
    if delta >= 0.0:
        half_gap = math.sqrt(delta) / 2.0
        omega_p = (a_nb + b_nb) / 2.0 + half_gap
        omega_m = (a_nb + b_nb) / 2.0 - half_gap
    else:
        omega_p = omega_m = None
    if delta > tol:
        cls = "stable"
    elif delta < -tol:
        cls = "unstable"
    else:
        cls = "degenerate"
    return DispersionPoint(n=n, b=b, a_nb=a_nb, b_nb=b_nb, delta=delta,
                           omega_plus=omega_p, omega_minus=omega_m,
                           classification=cls, row=row)


def v_constants(model: KernelModel, b: float) -> tuple[float, float]:
    """(V^1, V^2), falling back to quadrature for custom measures."""
    if model.variant == "CustomConvolution":
        mu = model.measure()
        lam_b = _lambda_quadrature(mu, 1, b)
        lam_1 = _lambda_quadrature(mu, 1, 1.0)
        lamt_b = _lambda_tilde_quadrature(mu, 1, b)
        return (lam_b - lamt_b / b, -lam_1 + b * lamt_b)
    return _models.v1_v2(model, b)


def delta_inf(model: KernelModel, b: float, via_psi: bool = False) -> float:
    """Large-n limit of the discriminant, (V^1 - V^2)^2.

    With via_psi=True the convolution part is re-assembled through the
    integral of Psi_b against the measure (independent route), plus the
    smooth-part constants c_b - ct_b.
    """
    if not via_psi:
        v1, v2 = v_constants(model, b)
        return (v1 - v2) ** 2
    mu = model.measure()
    if mu is None:
        raise ValueError("Psi-integral form needs a convolution measure")
    x_cut = 300.0 / min(b, 1.0)
    total = sum(m * psi_b(b, x) / x for x, m in mu.atoms if x > 0)
    if mu.family is not None:
        xs, ws = _density_nodes(mu, x_cut)
        psi = (_phi_batch(1, xs) + _phi_batch(1, b * xs)
               - (b + 1.0 / b) * _phi_nb_batch(1, b, xs))
        total += float(np.sum(psi * ws / xs))

        # phi_{1,b} is exponentially small beyond the cut
        def tail_model(x: float) -> float:
            return (_phi_tail_model(1, x) + _phi_tail_model(1, b * x)) / x

        tail, _ = _integrate.quad(lambda x: tail_model(x) * mu.density(x),
                                  x_cut, np.inf, limit=200)
        total += tail
    c_b, ct_b = _models.c_terms(model, b)
    return (total + c_b - ct_b) ** 2


def s_membership(model: KernelModel, b: float,
                 tol: float = DEGENERACY_TOL) -> bool:
    """True when the velocity gap V^1 - V^2 is nonzero beyond tol."""
    v1, v2 = v_constants(model, b)
    return abs(v1 - v2) > tol


# ---------------------------------------------------------------------------
# fold selection
# ---------------------------------------------------------------------------

def annulus_fold_inequality(model: KernelModel, b: float, n: int) -> bool:
    """Closed positivity condition for the annulus discriminant at mode n."""
    if model.variant != "EulerAnnulus":
        raise ValueError("annulus_fold_inequality needs an EulerAnnulus model")
    r1, r2 = model.params["r1"], model.params["r2"]
    cf = _models.annulus_c_frak(r1, r2, b)
    q = (r1 / r2) ** (2 * n)
    rhs = (b * b / ((1.0 - b * b) * (b * b + 2.0 * cf))) / (1.0 - q) * (
        2.0 - r1 ** (2 * n) - (r1 / b) ** (2 * n)
        - (b ** (2 * n) + 1.0 - 2.0 * r1 ** (2 * n)) / r2 ** (2 * n)
        + 2.0 * (1.0 - r2 ** (-2 * n)) * b ** n * (1.0 - (r1 / b) ** (2 * n)))
    return n > rhs


def exterior_fold_inequality(model: KernelModel, b: float, m: int) -> bool:
    """Closed positivity condition for the exterior-domain discriminant."""
    if model.variant != "EulerExterior":
        raise ValueError("exterior_fold_inequality needs an EulerExterior model")
    r = model.params["r"]
    rhs = (b * b / (1.0 - b * b)) * (
        2.0 - r ** (2 * m) + (r / b) ** (2 * m)
        + 2.0 * b ** m * (1.0 - (r / b) ** (2 * m)))
    return m > rhs


def _tail_certified(model: KernelModel, b: float, m: int, k_max: int,
                    tol: float, d_inf: float) -> bool:
    # beyond k_max: accept if |Delta_{km} - Delta_inf| decreased monotonically
    # over the last 5 samples and the limit is safely positive
    if d_inf <= 4.0 * tol:
        return False
    ks = range(max(1, k_max - 4), k_max + 1)
    gaps = [abs(dispersion_point(model, k * m, b).delta - d_inf) for k in ks]
    return all(gaps[i + 1] < gaps[i] for i in range(len(gaps) - 1))


def min_fold(model: KernelModel, b: float, k_max: int = 10,
             tol: float = DEGENERACY_TOL, m_cap: int = 64) -> int:
    """Smallest symmetry fold m with a simple real spectrum on all modes km.

    Conditions per candidate m: Delta_{km,b} > tol for k = 1..k_max, all
    Omega^{+/-}_{km} pairwise distinct beyond tol (including the limit
    values -V^1, -V^2), and the tail |Delta_{km} - Delta_inf| certified to
    converge monotonically.  Annulus and exterior models are additionally
    cross-checked against their closed inequalities.
    """
    if not s_membership(model, b, tol):
        raise ValueError("b lies outside the admissible set: V^1 = V^2")
    v1, v2 = v_constants(model, b)
    d_inf = (v1 - v2) ** 2
    for m in range(1, m_cap + 1):
        points = [dispersion_point(model, k * m, b) for k in range(1, k_max + 1)]
        if any(p.delta <= tol for p in points):
            continue
        omegas = [p.omega_plus for p in points] + [p.omega_minus for p in points]
        omegas += [-v1, -v2]
        collision = any(abs(omegas[i] - omegas[j]) <= tol
                        for i in range(len(omegas))
                        for j in range(i + 1, len(omegas)))
        if collision:
            continue
        if not _tail_certified(model, b, m, k_max, tol, d_inf):
            continue
        if model.variant == "EulerAnnulus":
            if not all(annulus_fold_inequality(model, b, k * m)
                       for k in range(1, k_max + 1)):
                raise RuntimeError(
                    "annulus closed inequality disagrees with the Delta scan")
        if model.variant == "EulerExterior":
            if not all(exterior_fold_inequality(model, b, k * m)
                       for k in range(1, k_max + 1)):
                raise RuntimeError(
                    "exterior closed inequality disagrees with the Delta scan")
        return m
    raise FoldNotFound(f"no fold m <= {m_cap} satisfies the conditions")


# ---------------------------------------------------------------------------
# monotonicity, classification, kernel data
# ---------------------------------------------------------------------------

def monotonicity_scan(model: KernelModel, b: float, m_start: int,
                      count: int) -> MonotonicityReport:
    """Check the monotone branch ordering over n = m_start .. m_start+count-1.

    Case V^1 > V^2: Omega^+ increases toward -V^2, Omega^- decreases toward
    -V^1, and every root lies strictly inside (-V^1, -V^2); mirrored when
    V^1 < V^2.
    """
    v1, v2 = v_constants(model, b)
    case = "V1>V2" if v1 > v2 else "V1<V2"
    lo, hi = (-v1, -v2) if v1 > v2 else (-v2, -v1)
    ns = tuple(range(m_start, m_start + count))
    plus, minus = [], []
    for n in ns:
        p = dispersion_point(model, n, b)
        if p.omega_plus is None:
            raise ValueError(f"Delta < 0 at n = {n}: scan needs a real spectrum")
        plus.append(p.omega_plus)
        minus.append(p.omega_minus)
    first_violation = None
    for i, n in enumerate(ns):
        inside = lo < minus[i] <= plus[i] < hi
        ordered = True
        if i > 0:
            if v1 > v2:
                ordered = plus[i] > plus[i - 1] and minus[i] < minus[i - 1]
            else:
                ordered = plus[i] < plus[i - 1] and minus[i] > minus[i - 1]
        if not (inside and ordered):
            first_violation = n
            break
    return MonotonicityReport(case=case, ok=first_violation is None,
                              first_violation=first_violation, n_values=ns,
                              omega_plus=tuple(plus), omega_minus=tuple(minus),
                              v1=v1, v2=v2)


def classify(model: KernelModel, n: int, b: float,
             tol: float = DEGENERACY_TOL) -> str:
    """Stability of mode n: the eigenvalue pair -i n Omega^{+/-} leaves the
    imaginary axis exactly when the discriminant is negative."""
    return dispersion_point(model, n, b, tol).classification


def q_matrix(model: KernelModel, n: int, b: float, omega: float) -> np.ndarray:
    """The 2x2 multiplier block Q_{n,b}(Omega)."""
    p = dispersion_point(model, n, b)
    off = p.row.lamt_nb + p.row.pt_nb
    return np.array([[omega - p.a_nb, off],
                     [-off, omega - p.b_nb]])


def kernel_vector(model: KernelModel, m: int, b: float,
                  branch: str = "+") -> np.ndarray:
    """Generator of ker Q_{m,b}(Omega^{branch}); needs a simple spectrum."""
    if branch not in ("+", "-"):
        raise ValueError("branch must be '+' or '-'")
    p = dispersion_point(model, m, b)
    if p.delta <= DEGENERACY_TOL:
        raise ValueError(f"degenerate spectrum at m = {m}: Delta = {p.delta:.3e}")
    omega = p.omega_plus if branch == "+" else p.omega_minus
    vec = np.array([-(p.row.lamt_nb + p.row.pt_nb), omega - p.a_nb])
    if np.allclose(vec, 0.0):
        raise ValueError("kernel vector degenerated to zero")
    return vec
