"""Truncated Taylor arithmetic on numpy arrays.

A :class:`Jet` of order ``k`` stores the normalized Taylor coefficients
``f(r), f'(r), f''(r)/2!, ..., f^(k)(r)/k!`` for every point of an array of
evaluation points at once. Arithmetic follows the usual recurrences
(Cauchy product, power/exp/log recurrences) and is exact up to rounding.
"""
from __future__ import annotations

from math import factorial

import numpy as np


class Jet:
    """Vectorized truncated Taylor series.

    Parameters
    ----------
    coeffs : array_like, shape (order + 1, ...)
        Normalized Taylor coefficients, ``coeffs[j] = f^(j) / j!``.
    """

    __slots__ = ("coeffs",)
    __array_priority__ = 100

    def __init__(self, coeffs):
        self.coeffs = np.asarray(coeffs, dtype=float)

    # construction -----------------------------------------------------------
    @classmethod
    def variable(cls, x, order):
        x = np.asarray(x, dtype=float)
        c = np.zeros((order + 1,) + x.shape)
        c[0] = x
        if order >= 1:
            c[1] = 1.0
        return cls(c)

    @classmethod
    def constant(cls, value, order, shape=()):
        c = np.zeros((order + 1,) + tuple(shape))
        c[0] = value
        return cls(c)

    @classmethod
    def from_derivatives(cls, derivs):
        derivs = np.asarray(derivs, dtype=float)
        scale = np.array([1.0 / factorial(j) for j in range(derivs.shape[0])])
        return cls(derivs * scale.reshape((-1,) + (1,) * (derivs.ndim - 1)))

    # accessors --------------------------------------------------------------
    @property
    def order(self):
        return self.coeffs.shape[0] - 1

    @property
    def value(self):
        return self.coeffs[0]

    def derivatives(self):
        """Return ``[f, f', f'', ...]`` stacked along axis 0."""
        scale = np.array([float(factorial(j)) for j in range(self.order + 1)])
        return self.coeffs * scale.reshape((-1,) + (1,) * (self.coeffs.ndim - 1))

    def derivative(self, j):
        return self.coeffs[j] * factorial(j)

    def copy(self):
        return Jet(self.coeffs.copy())

    def __repr__(self):
        return f"Jet(order={self.order}, coeffs={self.coeffs!r})"

    # arithmetic -------------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, Jet):
            return other
        c = np.zeros_like(self.coeffs)
        c[0] = other
        return Jet(c)

    def __add__(self, other):
        if isinstance(other, Jet):
            return Jet(self.coeffs + other.coeffs)
        c = self.coeffs.copy()
        c[0] = c[0] + other
        return Jet(c)

    __radd__ = __add__

    def __neg__(self):
        return Jet(-self.coeffs)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Jet):
            return Jet(self.coeffs * other)
        a, b = self.coeffs, other.coeffs
        k = min(a.shape[0], b.shape[0])
        out = np.zeros(np.broadcast_shapes(a[:k].shape, b[:k].shape))
        for n in range(k):
            for i in range(n + 1):
                out[n] += a[i] * b[n - i]
        return Jet(out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, Jet):
            return Jet(self.coeffs / other)
        return self * other.reciprocal()

    def __rtruediv__(self, other):
        return self.reciprocal() * other

    def __pow__(self, alpha):
        return self.power(alpha)

    def reciprocal(self):
        b = self.coeffs
        y = np.zeros_like(b)
        y[0] = 1.0 / b[0]
        for n in range(1, b.shape[0]):
            acc = np.zeros_like(b[0])
            for k in range(1, n + 1):
                acc += b[k] * y[n - k]
            y[n] = -acc / b[0]
        return Jet(y)

    def power(self, alpha):
        """``self ** alpha`` for a real exponent; requires a positive value."""
        x = self.coeffs
        y = np.zeros_like(x)
        y[0] = x[0] ** alpha
        for n in range(1, x.shape[0]):
            acc = np.zeros_like(x[0])
            for k in range(1, n + 1):
                acc += ((alpha + 1.0) * k - n) * x[k] * y[n - k]
            y[n] = acc / (n * x[0])
        return Jet(y)

    def exp(self):
        x = self.coeffs
        y = np.zeros_like(x)
        y[0] = np.exp(x[0])
        for n in range(1, x.shape[0]):
            acc = np.zeros_like(x[0])
            for k in range(1, n + 1):
                acc += k * x[k] * y[n - k]
            y[n] = acc / n
        return Jet(y)

    def log(self):
        x = self.coeffs
        y = np.zeros_like(x)
        y[0] = np.log(x[0])
        for n in range(1, x.shape[0]):
            acc = np.zeros_like(x[0])
            for k in range(1, n):
                acc += k * y[k] * x[n - k]
            y[n] = (x[n] - acc / n) / x[0]
        return Jet(y)

    def with_value(self, value):
        """Same derivatives, value coefficient replaced (precision repair)."""
        c = self.coeffs.copy()
        c[0] = value
        return Jet(c)


def power_of_variable(x, alpha, order):
    """Jet of ``x**alpha`` at ``x`` with closed-form coefficients."""
    x = np.asarray(x, dtype=float)
    c = np.empty((order + 1,) + x.shape)
    binom = 1.0
    for j in range(order + 1):
        if binom == 0.0:
            c[j] = 0.0
        else:
            c[j] = binom * x ** (alpha - j)
        binom *= (alpha - j) / (j + 1)
    return Jet(c)
