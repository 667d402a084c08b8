"""The Muskat nonlinearity and its symmetrized paralinearization.

With ``F(a) = a^2 / (1 + a^2)`` the nonlinearity is

    T(f)g = -(1/pi) int Delta_alpha g_x * F(Delta_alpha f) d(alpha),

and the equation reads ``f_t + Lambda f = T(f)f``.  Splitting ``F(Delta_alpha f)``
into parts even and odd in alpha gives

    T(f)g = gamma(f) Lambda g + V(f) g_x + R(f, g),   gamma(f) = F(f_x),

with the drift ``V(f) = -(1/pi) int O(alpha, .) / alpha d(alpha)``.

All integrals are alpha-quadratures over an :class:`AlphaRule`; slopes for
every node are formed at once as ``(nodes, N)`` arrays.  The ``alpha -> 0``
values of each integrand are Taylor limits:

* ``Delta_alpha g_x F(Delta_alpha f) -> g_xx F(f_x)``
* ``(Delta_alpha - bar Delta_alpha) g_x * E -> 2 g_xx F(f_x)``, while
  ``Delta_alpha g_x * O -> 0`` because ``O(0, .) = 0``
* ``O / alpha -> -F'(f_x) f_xx / 2``, from ``Delta_alpha f = f_x - alpha f_xx / 2 + ...``
  and ``bar Delta_alpha f = -f_x - alpha f_xx / 2 + ...``
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .finite_diff import AlphaRule, alpha_integrate, default_rule, shift_stack
from .spectral import (
    RealField,
    _check_epsilon,
    apply_lambda,
    check_same_grid,
    dealiased_product,
    derivative,
    paraproduct,
)


def kernel_fraction(a):
    """``F(a) = a^2 / (1 + a^2)``."""
    a2 = np.square(a)
    return a2 / (1.0 + a2)


def kernel_fraction_prime(a):
    """``F'(a) = 2a / (1 + a^2)^2``."""
    return 2.0 * a / np.square(1.0 + np.square(a))


def gamma(f: RealField) -> RealField:
    """Elliptic coefficient ``f_x^2 / (1 + f_x^2)``."""
    return RealField(f.grid, kernel_fraction(derivative(f).samples))


def _rule(f: RealField, rule: AlphaRule | None) -> AlphaRule:
    return default_rule(f.grid) if rule is None else rule


def slope_rows(u: RealField, rule: AlphaRule) -> np.ndarray:
    """``Delta_alpha u`` for every node of ``rule``, shape ``(nodes, N)``."""
    a = rule.nodes[:, None]
    return (u.samples[None, :] - shift_stack(u, rule.nodes)) / a


def _bar(rows: np.ndarray) -> np.ndarray:
    # bar Delta_alpha u = -Delta_{-alpha} u, and the nodes are symmetric.
    return -rows[::-1]


def _integrate(rows, limit: RealField, rule: AlphaRule, factor: float) -> RealField:
    return factor * alpha_integrate(rows, limit, rule)


def t_operator(f: RealField, g: RealField, rule: AlphaRule | None = None) -> RealField:
    check_same_grid(f, g)
    rule = _rule(f, rule)
    gx = derivative(g)
    integrand = slope_rows(gx, rule) * kernel_fraction(slope_rows(f, rule))
    limit = derivative(gx) * kernel_fraction(derivative(f).samples)
    return _integrate(integrand, limit, rule, -1.0 / np.pi)


def rhs_arctan(f: RealField, rule: AlphaRule | None = None) -> RealField:
    """``(1/pi) d/dx int arctan(Delta_alpha f) d(alpha)`` (density jump 2)."""
    rule = _rule(f, rule)
    limit = RealField(f.grid, np.arctan(derivative(f).samples))
    inner = alpha_integrate(np.arctan(slope_rows(f, rule)), limit, rule)
    return derivative(inner) / np.pi


@dataclass(frozen=True)
class SymmetrizedKernels:
    """Even/odd parts of ``F(Delta_alpha f)`` on the nodes of a rule.

    ``even``, ``odd``, ``defect`` (``Q = E - F(f_x)``) and ``s_slope``
    (``S_alpha f``) are ``(nodes, N)`` arrays aligned with ``nodes``.
    """

    nodes: np.ndarray
    even: np.ndarray
    odd: np.ndarray
    defect: np.ndarray
    s_slope: np.ndarray

    def at(self, alpha: float):
        i = int(np.argmin(np.abs(self.nodes - alpha)))
        return self.even[i], self.odd[i], self.defect[i]


def kernels(f: RealField, rule: AlphaRule | None = None) -> SymmetrizedKernels:
    rule = _rule(f, rule)
    d = slope_rows(f, rule)
    db = _bar(d)
    fd, fdb = kernel_fraction(d), kernel_fraction(db)
    even = 0.5 * (fd + fdb)
    odd = 0.5 * (fd - fdb)
    defect = even - kernel_fraction(derivative(f).samples)[None, :]
    return SymmetrizedKernels(rule.nodes, even, odd, defect, d + db)


def t_even(f: RealField, g: RealField, rule: AlphaRule | None = None) -> RealField:
    check_same_grid(f, g)
    rule = _rule(f, rule)
    ker = kernels(f, rule)
    gx = derivative(g)
    dg = slope_rows(gx, rule)
    limit = 2.0 * derivative(gx) * kernel_fraction(derivative(f).samples)
    return _integrate((dg - _bar(dg)) * ker.even, limit, rule, -0.5 / np.pi)


def t_odd(f: RealField, g: RealField, rule: AlphaRule | None = None) -> RealField:
    check_same_grid(f, g)
    rule = _rule(f, rule)
    ker = kernels(f, rule)
    dg = slope_rows(derivative(g), rule)
    return _integrate(dg * ker.odd, RealField.zeros(f.grid), rule, -1.0 / np.pi)


def drift(f: RealField, rule: AlphaRule | None = None) -> RealField:
    """Transport coefficient ``V(f) = -(1/pi) int O(alpha, .) / alpha``."""
    rule = _rule(f, rule)
    ker = kernels(f, rule)
    fx = derivative(f)
    limit = derivative(fx) * (-0.5 * kernel_fraction_prime(fx.samples))
    return _integrate(ker.odd / rule.nodes[:, None], limit, rule, -1.0 / np.pi)


def remainder(f: RealField, g: RealField, rule: AlphaRule | None = None,
              epsilon: float = 0.1) -> RealField:
    """``R(f, g) = T(f)g - gamma(f) Lambda g - V(f) g_x``.

    ``epsilon`` only selects the admissible regime in which the remainder
    bound is measured; the value of R does not depend on it.
    """
    _check_epsilon(epsilon)
    check_same_grid(f, g)
    rule = _rule(f, rule)
    elliptic = dealiased_product(gamma(f), apply_lambda(g, 1.0))
    transport = dealiased_product(drift(f, rule), derivative(g))
    return t_operator(f, g, rule) - elliptic - transport


def commutator_lambda(f: RealField, g: RealField, epsilon: float,
                      rule: AlphaRule | None = None) -> RealField:
    """``Lambda^{1+eps} T(f)g - T(f) Lambda^{1+eps} g``."""
    _check_epsilon(epsilon)
    rule = _rule(f, rule)
    s = 1.0 + epsilon
    return apply_lambda(t_operator(f, g, rule), s) - t_operator(f, apply_lambda(g, s), rule)


@dataclass(frozen=True)
class ParalinearizedRHS:
    """``T(f)f`` split as ``elliptic + transport + remainder``."""

    elliptic: RealField
    transport: RealField
    remainder: RealField

    @property
    def total(self) -> RealField:
        return self.elliptic + self.transport + self.remainder


def paralinearized_rhs(f: RealField, epsilon: float,
                       rule: AlphaRule | None = None) -> ParalinearizedRHS:
    _check_epsilon(epsilon)
    rule = _rule(f, rule)
    elliptic = paraproduct(gamma(f), apply_lambda(f, 1.0), epsilon)
    transport = paraproduct(drift(f, rule), derivative(f), epsilon)
    rest = t_operator(f, f, rule) - elliptic - transport
    return ParalinearizedRHS(elliptic, transport, rest)
