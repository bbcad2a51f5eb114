"""Truncated Taylor-series arithmetic for forward-mode differentiation.

A ``Series`` holds coefficients ``c[0] + c[1] e + c[2] e^2 + ...`` truncated
at a fixed order.  Coefficients may be floats, numpy arrays (vectorized
evaluation over a grid) or other ``Series`` (nesting gives mixed partial
derivatives in several variables).
"""

from __future__ import annotations

import math

import numpy as np

__all__ = [
    "Series",
    "var",
    "const",
    "sin",
    "cos",
    "sinh",
    "cosh",
    "exp",
    "log",
    "sqrt",
    "atan",
]


def _zero(c):
    return c * 0.0


class Series:
    """Taylor polynomial truncated at order ``len(c) - 1``."""

    __slots__ = ("c",)
    # keep numpy from elementwise-broadcasting over Series operands
    __array_ufunc__ = None
    __array_priority__ = 1000

    def __init__(self, coeffs):
        self.c = list(coeffs)

    @property
    def order(self):
        return len(self.c) - 1

    def _coerce(self, other, n):
        if isinstance(other, Series):
            return other
        return Series([other] + [_zero(other) for _ in range(n - 1)])

    def __add__(self, other):
        other = self._coerce(other, len(self.c))
        n = max(len(self.c), len(other.c))
        a = _pad(self.c, n)
        b = _pad(other.c, n)
        return Series([x + y for x, y in zip(a, b)])

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-1.0) * other

    def __rsub__(self, other):
        return (-1.0) * self + other

    def __neg__(self):
        return Series([-x for x in self.c])

    def __mul__(self, other):
        if not isinstance(other, Series):
            return Series([x * other for x in self.c])
        n = max(len(self.c), len(other.c))
        a = _pad(self.c, n)
        b = _pad(other.c, n)
        out = []
        for k in range(n):
            acc = a[0] * b[k]
            for j in range(1, k + 1):
                acc = acc + a[j] * b[k - j]
            out.append(acc)
        return Series(out)

    def __rmul__(self, other):
        return Series([other * x for x in self.c])

    def __truediv__(self, other):
        if not isinstance(other, Series):
            return Series([x / other for x in self.c])
        n = max(len(self.c), len(other.c))
        a = _pad(self.c, n)
        b = _pad(other.c, n)
        q = []
        for k in range(n):
            acc = a[k]
            for j in range(k):
                acc = acc - q[j] * b[k - j]
            q.append(acc / b[0])
        return Series(q)

    def __rtruediv__(self, other):
        return self._coerce(other, len(self.c)) / self

    def __pow__(self, p):
        if not isinstance(p, int) or p < 0:
            raise ValueError("Series ** only supports nonnegative integers")
        out = self._coerce(1.0, len(self.c))
        base = self
        while p:
            if p & 1:
                out = out * base
            base = base * base
            p >>= 1
        return out

    def deriv_coeff(self, k):
        """k-th derivative with respect to this series' variable (k! * c[k])."""
        return self.c[k] * float(math.factorial(k))

    def xderiv(self):
        """Series of the derivative (one order shorter)."""
        return Series([self.c[k] * float(k) for k in range(1, len(self.c))])

    def __repr__(self):
        return f"Series({self.c!r})"


def _pad(c, n):
    if len(c) == n:
        return c
    z = _zero(c[0])
    return list(c) + [z] * (n - len(c))


def var(value, n):
    """Seed series ``value + e`` with ``n`` coefficients (order ``n - 1``)."""
    if n < 2:
        raise ValueError("need at least 2 coefficients to carry a derivative")
    one = _zero(value) + 1.0
    z = _zero(value)
    return Series([value, one] + [z] * (n - 2))


def const(value, n):
    """Constant series with ``n`` coefficients."""
    z = _zero(value)
    return Series([value] + [z] * (n - 1))


def promote(inner, n):
    """Lift ``inner`` (scalar or Series) to a constant of an outer variable."""
    return const(inner, n)


def sin(u):
    if not isinstance(u, Series):
        return np.sin(u)
    s, _ = _sincos(u)
    return s


def cos(u):
    if not isinstance(u, Series):
        return np.cos(u)
    _, c = _sincos(u)
    return c


def _sincos(u):
    n = len(u.c)
    s = [sin(u.c[0])]
    c = [cos(u.c[0])]
    for k in range(1, n):
        sa = _zero(s[0])
        ca = _zero(c[0])
        for j in range(1, k + 1):
            sa = sa + float(j) * u.c[j] * c[k - j]
            ca = ca + float(j) * u.c[j] * s[k - j]
        s.append(sa * (1.0 / k))
        c.append(ca * (-1.0 / k))
    return Series(s), Series(c)


def sinh(u):
    if not isinstance(u, Series):
        return np.sinh(u)
    s, _ = _sinhcosh(u)
    return s


def cosh(u):
    if not isinstance(u, Series):
        return np.cosh(u)
    _, c = _sinhcosh(u)
    return c


def _sinhcosh(u):
    n = len(u.c)
    s = [sinh(u.c[0])]
    c = [cosh(u.c[0])]
    for k in range(1, n):
        sa = _zero(s[0])
        ca = _zero(c[0])
        for j in range(1, k + 1):
            sa = sa + float(j) * u.c[j] * c[k - j]
            ca = ca + float(j) * u.c[j] * s[k - j]
        s.append(sa * (1.0 / k))
        c.append(ca * (1.0 / k))
    return Series(s), Series(c)


def exp(u):
    if not isinstance(u, Series):
        return np.exp(u)
    n = len(u.c)
    e = [exp(u.c[0])]
    for k in range(1, n):
        acc = _zero(e[0])
        for j in range(1, k + 1):
            acc = acc + float(j) * u.c[j] * e[k - j]
        e.append(acc * (1.0 / k))
    return Series(e)


def log(u):
    if not isinstance(u, Series):
        return np.log(u)
    n = len(u.c)
    b = [log(u.c[0])]
    for k in range(1, n):
        acc = float(k) * u.c[k]
        for m in range(1, k):
            acc = acc - float(k - m) * u.c[m] * b[k - m]
        b.append(acc / (float(k) * u.c[0]))
    return Series(b)


def sqrt(u):
    if not isinstance(u, Series):
        return np.sqrt(u)
    n = len(u.c)
    b = [sqrt(u.c[0])]
    for k in range(1, n):
        acc = u.c[k]
        for j in range(1, k):
            acc = acc - b[j] * b[k - j]
        b.append(acc / (2.0 * b[0]))
    return Series(b)


def atan(u):
    if not isinstance(u, Series):
        return np.arctan(u)
    n = len(u.c)
    g = 1.0 + u * u  # same truncation order
    b = [atan(u.c[0])]
    for k in range(1, n):
        acc = float(k) * u.c[k]
        for m in range(1, k):
            acc = acc - float(k - m) * g.c[m] * b[k - m]
        b.append(acc / (float(k) * g.c[0]))
    return Series(b)
