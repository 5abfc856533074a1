"""Floating-point estimate of whether the positive root dominates.

Advisory only: nothing in the certificate path imports this module.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

from .spectrum import CharPoly


@dataclass
class DominanceReport:
    root_estimates: list[complex]
    dominant_modulus: float
    second_modulus: float
    unique_dominant: bool
    margin: float
    converged: bool = True
    diagnostic: str = ""
    iterations: int = 0
    residual: float = field(default=math.nan)

    def to_json(self) -> dict:
        return {
            "root_estimates": [[z.real, z.imag] for z in self.root_estimates],
            "dominant_modulus": self.dominant_modulus,
            "second_modulus": self.second_modulus,
            "unique_dominant": self.unique_dominant,
            "margin": self.margin,
            "converged": self.converged,
            "diagnostic": self.diagnostic,
            "certifying": False,
        }


def _horner_with_derivative(coeffs: list[complex], z: complex) -> tuple[complex, complex]:
    p = 0j
    dp = 0j
    for c in reversed(coeffs):
        dp = dp * z + p
        p = p * z + c
    return p, dp


def aberth_roots(coeffs: list[complex], tol: float = 1e-14, max_iter: int = 500):
    """All roots of the polynomial with ascending ``coeffs`` by Aberth-Ehrlich iteration.

    Returns ``(roots, iterations, converged)``.
    """
    deg = len(coeffs) - 1
    lead = coeffs[-1]
    monic = [c / lead for c in coeffs]
    if deg == 1:
        return [-monic[0]], 0, True
    # starting points on a circle of the Fujiwara radius, rotated off the axes
    radius = 2 * max(abs(monic[deg - i]) ** (1.0 / i) for i in range(1, deg + 1))
    radius = radius or 1.0
    roots = [radius * cmath.exp(1j * (2 * math.pi * k / deg + 0.4)) for k in range(deg)]
    for it in range(1, max_iter + 1):
        biggest = 0.0
        for i in range(deg):
            z = roots[i]
            p, dp = _horner_with_derivative(monic, z)
            if p == 0:
                continue
            ratio = p / dp if dp != 0 else p
            s = sum(1 / (z - roots[j]) for j in range(deg) if j != i and z != roots[j])
            step = ratio / (1 - ratio * s)
            roots[i] = z - step
            biggest = max(biggest, abs(step) / max(1.0, abs(roots[i])))
        if biggest < tol:
            return roots, it, True
    return roots, max_iter, False


def dominance_report(cp: CharPoly, margin: float = 1e-6, max_iter: int = 500) -> DominanceReport:
    coeffs = [complex(float(c)) for c in cp.poly.coeffs]
    roots, iters, converged = aberth_roots(coeffs, max_iter=max_iter)
    residual = max(abs(_horner_with_derivative(coeffs, z)[0]) / max(1.0, abs(z)) ** (len(coeffs) - 1)
                   for z in roots)
    ordered = sorted(roots, key=abs, reverse=True)
    top = abs(ordered[0])
    second = abs(ordered[1]) if len(ordered) > 1 else 0.0
    lead = ordered[0]
    real_positive = lead.real > 0 and abs(lead.imag) <= 1e-9 * max(1.0, top)
    separated = top - second > margin * top
    diagnostic = ""
    if not converged:
        diagnostic = f"no convergence after {iters} iterations"
    elif not real_positive:
        diagnostic = "largest-modulus root is not real positive"
    elif not separated:
        diagnostic = "two or more roots share the largest modulus within the margin"
    return DominanceReport(
        root_estimates=ordered,
        dominant_modulus=top,
        second_modulus=second,
        unique_dominant=converged and real_positive and separated,
        margin=margin,
        converged=converged,
        diagnostic=diagnostic,
        iterations=iters,
        residual=residual,
    )
