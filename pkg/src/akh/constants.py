"""Sobolev-type constants built from sphere volumes and a trigonometric moment.

The dimension-n constant pair (C_tilde_n, C_n) controls an L^1 and an L^2
Sobolev embedding on negatively curved 2n-manifolds; both reduce to unit
sphere volumes and one moment integral, so they are computed here to
quadrature accuracy and cross-checked in tests against a Beta-function
closed form.
"""
import math

from scipy.integrate import quad

from .errors import ArgumentError


def sphere_volume(m: int) -> float:
    """Riemannian volume of the standard unit m-sphere."""
    if m < 0:
        raise ArgumentError(f"sphere dimension must be >= 0, got {m}")
    return 2.0 * math.pi ** ((m + 1) / 2.0) / math.gamma((m + 1) / 2.0)


def trig_moment(n: int, tol: float = 1e-13) -> float:
    """integral over [0, pi/2] of cos^(n/(n-1))(t) * sin^(2n-2)(t) dt."""
    a = n / (n - 1.0)
    b = 2 * n - 2
    val, _ = quad(lambda t: math.cos(t) ** a * math.sin(t) ** b,
                  0.0, math.pi / 2.0, epsabs=tol, epsrel=tol)
    return val


def croke_constants(n: int) -> dict:
    """The pair {C_tilde_n, C_n} for even real dimension 2n, n >= 2.

    C_tilde_n = Vol(S^(2n-2))^(2n-2) / Vol(S^(2n-1))^(2n-1) * I^(2n-2)
    with I the trigonometric moment above, and
    C_n = ((2n-1)/(n-1))^2 * C_tilde_n^(1/n).
    """
    if not isinstance(n, int) or isinstance(n, bool) or n < 2:
        raise ArgumentError(f"need an integer n >= 2, got {n!r}")
    moment = trig_moment(n)
    v_even = sphere_volume(2 * n - 2)
    v_odd = sphere_volume(2 * n - 1)
    c_tilde = v_even ** (2 * n - 2) / v_odd ** (2 * n - 1) * moment ** (2 * n - 2)
    c = ((2.0 * n - 1.0) / (n - 1.0)) ** 2 * c_tilde ** (1.0 / n)
    return {"C_tilde_n": c_tilde, "C_n": c}
