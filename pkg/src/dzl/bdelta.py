"""The unit-modulus periodic phase function b_delta and its Fourier coefficients.

b_delta has period 1 and two branches:

    i * exp(i pi theta)                     for delta <= theta <= 1 - delta
    -exp((1 - 1/(2 delta)) i pi theta)      for -delta < theta <= delta

Its Fourier coefficients are real with a closed form; a quadrature oracle
splitting panels at the branch points is provided for verification.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .gk import gk_integrate_real

__all__ = ["BDelta", "FourierPropertyReport"]

TWO_PI = 2.0 * math.pi


@dataclass
class FourierPropertyReport:
    passed: bool
    failures: list  # (property_id, delta, j, residual)
    envelope_constant: float  # fitted sup of |b_hat(j)| (1 + j^2)


class BDelta:
    """Evaluator + coefficient cache for one value of delta in [0, 1/2]."""

    def __init__(self, delta: float):
        if not 0.0 <= delta <= 0.5:
            raise ValueError("delta must lie in [0, 1/2]")
        self.delta = float(delta)
        self._cache: dict[int, float] = {}

    def __repr__(self):
        return f"BDelta(delta={self.delta:g})"

    def eval(self, theta: float) -> complex:
        """b_delta(theta); theta reduced mod 1 into (-delta, 1-delta]."""
        d = self.delta
        t = theta - math.floor(theta)  # [0, 1)
        if t > 1 - d:
            t -= 1.0  # (-delta, 0)
        if d == 0.0:
            # second branch collapses to theta=0; define b_0(0) = -1 by continuity
            if t == 0.0:
                return -1.0 + 0.0j
            return 1j * complex(math.cos(math.pi * t), math.sin(math.pi * t))
        if d <= t <= 1 - d:
            return 1j * np.exp(1j * math.pi * t)
        return -np.exp((1.0 - 1.0 / (2.0 * d)) * 1j * math.pi * t)

    def eval_many(self, thetas: np.ndarray) -> np.ndarray:
        return np.array([self.eval(float(t)) for t in np.atleast_1d(thetas)])

    def coeff(self, j: int) -> float:
        """Closed-form Fourier coefficient b_hat_delta(j) (real, cached)."""
        if j in self._cache:
            return self._cache[j]
        d = self.delta
        q = j * d - 0.5 * d + 0.25
        x = TWO_PI * q
        if abs(q) < 1e-8:
            # sin(x)/x limit to dodge cancellation at the removable point
            sinc = 1.0 - x * x / 6.0
            val = sinc / (2 * j - 1)
        else:
            val = math.sin(x) / ((2 * j - 1) * x)
        self._cache[j] = val
        return val

    def coeff_quadrature(self, j: int, tol: float = 1e-11) -> complex:
        """Oracle: int_0^1 b(theta) exp(-2 pi i j theta) d(theta).

        Integrates over one period (-delta, 1-delta], split at the branch
        points so each panel sees a smooth integrand.
        """
        d = self.delta

        def integrand_re(t):
            return np.array([ (self.eval(tt) * np.exp(-2j * math.pi * j * tt)).real
                              for tt in np.atleast_1d(t) ])

        def integrand_im(t):
            return np.array([ (self.eval(tt) * np.exp(-2j * math.pi * j * tt)).imag
                              for tt in np.atleast_1d(t) ])

        pieces = [(-d, d), (d, 1 - d)] if d > 0 else [(0.0, 1.0)]
        re = im = 0.0
        for a, b in pieces:
            if b > a:
                re += gk_integrate_real(integrand_re, a, b, tol=tol).value
                im += gk_integrate_real(integrand_im, a, b, tol=tol).value
        return complex(re, im)

    def gap(self) -> float:
        """b_hat(1) - b_hat(0) in closed form: (2 cos(pi d)/pi)(2/(1-4d^2))."""
        d = self.delta
        if d >= 0.5:
            raise ValueError("gap undefined at delta = 1/2 (zero denominator)")
        return (2.0 * math.cos(math.pi * d) / math.pi) * (2.0 / (1.0 - 4.0 * d * d))

    def coeff_abs_tail(self, J: int) -> float:
        """Upper bound for sum_{|j| > J} |b_hat(j)|.

        |b_hat(j)| <= 1 / (2 pi |q| |2j-1|) with q = d(2j-1)/2 + 1/4, summed
        exactly out to |j| = J + 2000 and closed with an integral-test bound.
        """
        J = int(J)
        tail = 0.0
        for j in list(range(J + 1, J + 2001)) + list(range(-J - 2000, -J)):
            tail += abs(self.coeff(j))
        # |b_hat(j)| <= 2/(pi (2j-1)^2 (2 delta + 1/(2|j|)))-ish; use the crude
        # 1/(pi (2|j|-1)^2 max(delta, 1/(8|j|))) envelope beyond the exact range
        jj = J + 2000
        d = max(self.delta, 1e-12)
        tail += 2.0 / (math.pi * d * 2.0 * (2 * jj - 1))
        return tail


def verify_fourier_properties(bs: list[BDelta], J: int,
                              quad_tol: float = 1e-11) -> FourierPropertyReport:
    """Numerically check the five Fourier-coefficient properties.

    (i)   coefficients are real: |Im quadrature| < 1e-9;
    (ii)  |b_hat(j)| (1+j^2) bounded (fitted constant reported);
    (iii) b_hat_delta(j) -> 2/(pi(2j-1)) as delta -> 0+ along a decreasing grid;
    (iv)  delta -> b_hat(1) - b_hat(0) strictly decreasing;
    (v)   b_hat_0(j) <= 2/pi.
    """
    if J < 2:
        raise ValueError("J must be >= 2")
    failures = []
    env = 0.0
    for b in bs:
        for j in range(-J, J + 1):
            c_quad = b.coeff_quadrature(j, tol=quad_tol)
            if abs(c_quad.imag) >= 1e-9:
                failures.append(("i", b.delta, j, abs(c_quad.imag)))
            resid = abs(b.coeff(j) - c_quad.real)
            if resid >= 1e-9:
                failures.append(("closed_form", b.delta, j, resid))
            env = max(env, abs(b.coeff(j)) * (1 + j * j))
    # (ii): the fitted constant must be finite and stable; re-check against it
    for b in bs:
        for j in range(-J, J + 1):
            if abs(b.coeff(j)) * (1 + j * j) > env * (1 + 1e-12):
                failures.append(("ii", b.delta, j, abs(b.coeff(j)) * (1 + j * j)))
    # (iii): convergence to the delta=0 coefficients along a decreasing sequence
    b0 = BDelta(0.0)
    for j in range(-J, J + 1):
        target = b0.coeff(j)
        deltas = [0.01, 0.001, 0.0001]
        errs = [abs(BDelta(d).coeff(j) - target) for d in deltas]
        if not errs[-1] < 1e-3:
            failures.append(("iii", deltas[-1], j, errs[-1]))
        if not (errs[0] >= errs[-1] or errs[0] < 1e-12):
            failures.append(("iii-monotone", deltas[0], j, errs[0]))
    # (iv): gap strictly decreasing on a delta grid
    grid = np.linspace(0.0, 0.45, 46)
    gaps = [BDelta(float(d)).gap() for d in grid]
    for i in range(len(gaps) - 1):
        if not gaps[i] > gaps[i + 1]:
            failures.append(("iv", float(grid[i]), 0, gaps[i + 1] - gaps[i]))
    # (v)
    for j in range(-J, J + 1):
        if b0.coeff(j) > 2.0 / math.pi + 1e-15:
            failures.append(("v", 0.0, j, b0.coeff(j) - 2.0 / math.pi))
    return FourierPropertyReport(passed=not failures, failures=failures,
                                 envelope_constant=env)
