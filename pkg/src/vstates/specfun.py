"""Special functions backing the closed-form spectra.

Gamma, Bessel J/I/K, Bessel zeros, the Gauss hypergeometric function,
Chebyshev polynomials and the Pochhammer symbol.  Only integer Bessel
orders are needed; arguments are real.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special as _sp

__all__ = [
    "BesselZeroTable",
    "gamma_fn",
    "pochhammer",
    "bessel_j",
    "bessel_jp",
    "bessel_i",
    "bessel_k",
    "bessel_zeros",
    "hyp2f1",
    "chebyshev_t",
    "chebyshev_u",
]

# math.gamma overflows just above 171.6; keep a round threshold below it
_GAMMA_OVERFLOW = 171.0


def gamma_fn(x: float) -> float:
    """Gamma function for x > 0."""
    if x <= 0.0:
        raise ValueError(f"gamma_fn requires x > 0, got {x}")
    if x > _GAMMA_OVERFLOW:
        raise OverflowError(f"gamma_fn overflow for x = {x}")
    return math.gamma(x)


def pochhammer(x: float, n: int) -> float:
    """Rising factorial (x)_n = x (x+1) ... (x+n-1), with (x)_0 = 1."""
    if n < 0:
        raise ValueError("pochhammer requires n >= 0")
    out = 1.0
    for k in range(n):
        out *= x + k
    return out


def bessel_j(n: int, x: float) -> float:
    """Bessel function of the first kind, integer order n >= 0."""
    if n < 0:
        raise ValueError("bessel_j requires n >= 0")
    return float(_sp.jv(n, x))


def bessel_jp(n: int, x: float) -> float:
    """Derivative J_n'(x), used by the zero-finder Newton polish."""
    if n == 0:
        return -bessel_j(1, x)
    return 0.5 * (bessel_j(n - 1, x) - bessel_j(n + 1, x))


def bessel_i(n: int, x: float) -> float:
    """Modified Bessel function of the first kind, integer order."""
    if n < 0:
        raise ValueError("bessel_i requires n >= 0")
    val = float(_sp.iv(n, x))
    if math.isinf(val):
        raise OverflowError(f"bessel_i overflow at (n={n}, x={x})")
    return val


def bessel_k(n: int, x: float) -> float:
    """Modified Bessel function of the second kind; requires x > 0."""
    if n < 0:
        raise ValueError("bessel_k requires n >= 0")
    if x <= 0.0:
        raise ValueError(f"bessel_k requires x > 0, got {x}")
    return float(_sp.kv(n, x))


@dataclass(frozen=True)
class BesselZeroTable:
    """First zeros x_{n,1} < x_{n,2} < ... of J_n."""

    order: int
    zeros: np.ndarray

    def __post_init__(self) -> None:
        z = np.asarray(self.zeros, dtype=float)
        object.__setattr__(self, "zeros", z)
        if z.size and not np.all(np.diff(z) > 0):
            raise ValueError("Bessel zeros must be strictly increasing")

    def __len__(self) -> int:
        return len(self.zeros)

    def __getitem__(self, k: int) -> float:
        return float(self.zeros[k])


def _mcmahon_guess(n: int, k: int) -> float:
    """McMahon's large-k asymptotic for the k-th positive zero of J_n."""
    beta = (k + 0.5 * n - 0.25) * math.pi
    mu = 4.0 * n * n
    # first three correction terms of the McMahon expansion
    b8 = 8.0 * beta
    guess = beta - (mu - 1.0) / b8
    guess -= 4.0 * (mu - 1.0) * (7.0 * mu - 31.0) / (3.0 * b8**3)
    guess -= (32.0 * (mu - 1.0) * (83.0 * mu * mu - 982.0 * mu + 3779.0)
              / (15.0 * b8**5))
    return guess


def bessel_zeros(n: int, count: int, tol: float = 1e-13,
                 max_iter: int = 60) -> BesselZeroTable:
    """First `count` positive zeros of J_n.

    McMahon asymptotic initial guess, then a safeguarded Newton polish
    (bisection fallback when the Newton step leaves the bracket).
    """
    if count < 1:
        raise ValueError("bessel_zeros requires count >= 1")
    zeros = np.empty(count)
    for k in range(1, count + 1):
        x = _mcmahon_guess(n, k)
        # bracket the root around the asymptotic guess
        lo, hi = x - 1.2, x + 1.2
        if lo <= max(n, 0.0):
            lo = max(n * 0.5, 1e-3)
        flo, fhi = bessel_j(n, lo), bessel_j(n, hi)
        widen = 0
        while flo * fhi > 0 and widen < 30:
            lo = max(lo - 0.5, 1e-3)
            hi += 0.5
            flo, fhi = bessel_j(n, lo), bessel_j(n, hi)
            widen += 1
        if flo * fhi > 0:
            raise RuntimeError(f"bessel_zeros: bracketing failed at (n={n}, k={k})")
        converged = False
        for _ in range(max_iter):
            f = bessel_j(n, x)
            if abs(f) < tol:
                converged = True
                break
            fp = bessel_jp(n, x)
            step_ok = fp != 0.0
            if step_ok:
                x_new = x - f / fp
                step_ok = lo < x_new < hi
            if not step_ok:
                x_new = 0.5 * (lo + hi)
            if f * flo < 0:
                hi = x
            else:
                lo, flo = x, f
            if abs(x_new - x) < 1e-15 * max(1.0, abs(x)):
                x = x_new
                converged = abs(bessel_j(n, x)) < 1e-12
                break
            x = x_new
        if not converged and abs(bessel_j(n, x)) > 1e-12:
            raise RuntimeError(f"bessel_zeros: no convergence at (n={n}, k={k})")
        zeros[k - 1] = x
    return BesselZeroTable(order=n, zeros=zeros)


def _hyp2f1_series(a: float, b: float, c: float, z: float,
                   tol: float = 1e-15, max_terms: int = 20000) -> float:
    total = term = 1.0
    for k in range(max_terms):
        term *= (a + k) * (b + k) / ((c + k) * (k + 1.0)) * z
        total += term
        if abs(term) < tol * max(1.0, abs(total)):
            return total
    raise RuntimeError("hyp2f1 series did not converge")


def hyp2f1(a: float, b: float, c: float, z: float) -> float:
    """Gauss hypergeometric function F(a, b; c; z) for real z in [0, 1].

    Direct series for z <= 0.75; for larger z the evaluation switches to
    scipy's implementation, which applies the standard z -> 1-z linear
    transformation (z = 1 itself uses the Gauss summation value and needs
    c - a - b > 0).
    """
    if c <= 0 and c == int(c):
        raise ValueError(f"hyp2f1 pole: c = {c} is a nonpositive integer")
    if not 0.0 <= z <= 1.0:
        raise ValueError(f"hyp2f1 requires z in [0, 1], got {z}")
    if z == 1.0:
        if c - a - b <= 0:
            raise ValueError("hyp2f1 at z=1 requires c - a - b > 0")
        return (math.gamma(c) * math.gamma(c - a - b)
                / (math.gamma(c - a) * math.gamma(c - b)))
    if a <= 0 and a == int(a):
        # polynomial case, series terminates
        return _hyp2f1_series(a, b, c, z)
    if z <= 0.75:
        return _hyp2f1_series(a, b, c, z)
    return float(_sp.hyp2f1(a, b, c, z))


def chebyshev_t(n: int, x: float) -> float:
    """Chebyshev polynomial of the first kind via the stable recurrence."""
    if n < 0:
        raise ValueError("chebyshev_t requires n >= 0")
    if n == 0:
        return 1.0
    tm, t = 1.0, x
    for _ in range(n - 1):
        tm, t = t, 2.0 * x * t - tm
    return t


def chebyshev_u(n: int, x: float) -> float:
    """Chebyshev polynomial of the second kind via the stable recurrence."""
    if n < 0:
        raise ValueError("chebyshev_u requires n >= 0")
    if n == 0:
        return 1.0
    um, u = 1.0, 2.0 * x
    for _ in range(n - 1):
        um, u = u, 2.0 * x * u - um
    return u
