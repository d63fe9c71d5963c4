"""Independent one-dimensional oracle for the P^1 period.

K_{i mu}(z) = int_0^inf exp(-z cosh th) cos(mu th) d th is evaluated with
QUADPACK (scipy), a route that shares nothing with the nested
Gauss-Kronrod code used for general periods.
"""
from __future__ import annotations

import cmath
import math

from scipy import integrate

from .errors import NotConverged

_TAIL = 40.0  # exp(-40) relative tail


def bessel_k_oracle(mu: float, z: float, rel_tol: float = 1e-13) -> float:
    """Modified Bessel function of imaginary order, K_{i mu}(z), for z > 0."""
    if not z > 0:
        raise ValueError(f"z must be positive, got {z}")
    # beyond theta_max the integrand is below exp(-z) * exp(-_TAIL)
    theta_max = math.acosh(1.0 + _TAIL / z)
    kwargs = dict(epsabs=0.0, epsrel=rel_tol, limit=500, full_output=1)
    if mu == 0:
        res = integrate.quad(lambda th: math.exp(-z * (math.cosh(th) - 1.0)), 0.0, theta_max, **kwargs)
    else:
        res = integrate.quad(lambda th: math.exp(-z * (math.cosh(th) - 1.0)), 0.0, theta_max,
                             weight="cos", wvar=abs(mu), **kwargs)
    value, err = res[0], res[1]
    if len(res) > 3:
        # cancellation limits relative accuracy for large mu; judge the
        # error against the non-oscillating envelope instead
        envelope = integrate.quad(lambda th: math.exp(-z * (math.cosh(th) - 1.0)), 0.0, theta_max,
                                  epsabs=0.0, epsrel=1e-10, limit=500)[0]
        if err > 1e-9 * max(abs(value), envelope):
            raise NotConverged(f"K_i{mu}({z}) oracle: {res[3]}")
    return math.exp(-z) * value


def p1_closed_form(lambda1: float, lambda2: float, x: float) -> complex:
    """P^1 period 2 exp(i (l1 + l2) x / 2) K_{i (l1 - l2)}(2 exp(x / 2))."""
    phase = cmath.exp(0.5j * (lambda1 + lambda2) * x)
    return 2.0 * phase * bessel_k_oracle(lambda1 - lambda2, 2.0 * math.exp(0.5 * x))
