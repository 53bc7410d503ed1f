"""Truncated Taylor-series (jet) arithmetic.

A univariate jet stores the Taylor coefficients of a function at an
expansion point: ``coeffs[i] = f^(i)(t0) / i!`` for ``i = 0..order``.  All
combination rules propagate derivatives exactly, up to floating-point
rounding, which is what makes jets usable as derivative oracles when
classifying zeros by their vanishing order.

Coefficients may be plain floats or numpy arrays of expansion points; every
operation is written array-agnostic, so one code path serves both scalar
evaluation and vectorized grid sweeps.
"""

from __future__ import annotations

import math
from typing import Union

import numpy as np

from .errors import JetDomainError, JetOrderError

#: Default truncation order; covers the contact orders of interest with margin.
DEFAULT_ORDER = 12

#: Scale-free coefficient vanishing test: a coefficient counts as zero when
#: |c_i| <= max(VANISH_REL * max_j |c_j|, VANISH_ABS).
VANISH_REL = 1e-9
VANISH_ABS = 1e-12

Coeff = Union[float, np.ndarray]


class TaylorJet:
    """Taylor coefficients of a smooth function at one expansion point."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        self.coeffs = list(coeffs)
        if not self.coeffs:
            raise ValueError("a jet needs at least the order-0 coefficient")

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @classmethod
    def constant(cls, c: Coeff, order: int) -> "TaylorJet":
        return cls([c] + [0.0] * order)

    @classmethod
    def variable(cls, t0: Coeff, order: int) -> "TaylorJet":
        """Jet of the identity function t -> t at t0."""
        if order == 0:
            return cls([t0])
        return cls([t0, 1.0] + [0.0] * (order - 1))

    def value(self) -> Coeff:
        return self.coeffs[0]

    def derivative_value(self, k: int) -> Coeff:
        """k-th derivative at the expansion point, i.e. k! * coeffs[k]."""
        if k > self.order:
            raise JetOrderError("jet order exceeded")
        return self.coeffs[k] * float(math.factorial(k))

    def truncate(self, order: int) -> "TaylorJet":
        if order > self.order:
            raise JetOrderError("jet order exceeded")
        return TaylorJet(self.coeffs[: order + 1])

    def derivative(self) -> "TaylorJet":
        """Jet of f' at the same point, one order shorter."""
        if self.order == 0:
            raise JetOrderError("jet order exceeded")
        return TaylorJet([(i + 1) * c for i, c in enumerate(self.coeffs[1:])])

    # -- arithmetic ---------------------------------------------------------

    def _coerce(self, other) -> "TaylorJet":
        if isinstance(other, TaylorJet):
            if other.order != self.order:
                raise ValueError("jets have different orders")
            return other
        if isinstance(other, np.ndarray):
            return TaylorJet.constant(other, self.order)
        return TaylorJet.constant(float(other), self.order)

    def __add__(self, other):
        b = self._coerce(other)
        return TaylorJet([x + y for x, y in zip(self.coeffs, b.coeffs)])

    __radd__ = __add__

    def __sub__(self, other):
        b = self._coerce(other)
        return TaylorJet([x - y for x, y in zip(self.coeffs, b.coeffs)])

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __neg__(self):
        return TaylorJet([-c for c in self.coeffs])

    def __mul__(self, other):
        b = self._coerce(other)
        a = self.coeffs
        n = self.order
        out = []
        for k in range(n + 1):
            s = a[0] * b.coeffs[k]
            for j in range(1, k + 1):
                s = s + a[j] * b.coeffs[k - j]
            out.append(s)
        return TaylorJet(out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        b = self._coerce(other)
        b0 = b.coeffs[0]
        if np.any(np.asarray(b0) == 0.0):
            raise JetDomainError("jet division by zero at expansion point")
        a = self.coeffs
        out = [a[0] / b0]
        for k in range(1, self.order + 1):
            s = a[k]
            for j in range(k):
                s = s - out[j] * b.coeffs[k - j]
            out.append(s / b0)
        return TaylorJet(out)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __pow__(self, exponent: int):
        if not isinstance(exponent, (int, np.integer)) or exponent < 0:
            raise ValueError("jet exponent must be a non-negative integer")
        result = TaylorJet.constant(1.0, self.order)
        base = self
        e = int(exponent)
        while e:
            if e & 1:
                result = result * base
            base = base * base if e > 1 else base
            e >>= 1
        return result

    def __repr__(self):
        return f"TaylorJet({self.coeffs!r})"


# -- elementary functions ---------------------------------------------------


def jet_sin(a: TaylorJet) -> TaylorJet:
    return _sin_cos(a)[0]


def jet_cos(a: TaylorJet) -> TaylorJet:
    return _sin_cos(a)[1]


def _sin_cos(a: TaylorJet):
    n = a.order
    s = [np.sin(a.coeffs[0])]
    c = [np.cos(a.coeffs[0])]
    for k in range(1, n + 1):
        sk = 0.0
        ck = 0.0
        for j in range(1, k + 1):
            sk = sk + j * a.coeffs[j] * c[k - j]
            ck = ck - j * a.coeffs[j] * s[k - j]
        s.append(sk / k)
        c.append(ck / k)
    return TaylorJet(s), TaylorJet(c)


def jet_exp(a: TaylorJet) -> TaylorJet:
    n = a.order
    e = [np.exp(a.coeffs[0])]
    for k in range(1, n + 1):
        s = 0.0
        for j in range(1, k + 1):
            s = s + j * a.coeffs[j] * e[k - j]
        e.append(s / k)
    return TaylorJet(e)


def jet_sqrt(a: TaylorJet) -> TaylorJet:
    a0 = np.asarray(a.coeffs[0])
    if np.any(a0 <= 0.0):
        raise JetDomainError("sqrt domain error")
    n = a.order
    r = [np.sqrt(a.coeffs[0])]
    for k in range(1, n + 1):
        s = a.coeffs[k]
        for j in range(1, k):
            s = s - r[j] * r[k - j]
        r.append(s / (2.0 * r[0]))
    return TaylorJet(r)


def jet_atan(a: TaylorJet) -> TaylorJet:
    n = a.order
    b0 = np.arctan(a.coeffs[0])
    if n == 0:
        return TaylorJet([b0])
    # atan(a)' = a' / (1 + a^2); integrate the quotient series.
    g = (TaylorJet.constant(1.0, n) + a * a).truncate(n - 1)
    q = a.derivative() / g
    out = [b0]
    for k in range(1, n + 1):
        out.append(q.coeffs[k - 1] / k)
    return TaylorJet(out)


_ELEMENTARY = {
    "sin": jet_sin,
    "cos": jet_cos,
    "exp": jet_exp,
    "sqrt": jet_sqrt,
    "atan": jet_atan,
}


# -- spec-level operations --------------------------------------------------


def jet_arith(op: str, a: TaylorJet, b) -> TaylorJet:
    """Combine jets: op in {add, sub, mul, div, pow_int}.

    For pow_int, b is a non-negative integer exponent.
    """
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    if op == "pow_int":
        return a ** b
    raise ValueError(f"unknown jet operation {op!r}")


def jet_elementary(fn: str, a: TaylorJet) -> TaylorJet:
    """Compose an elementary function (sin, cos, exp, sqrt, atan) with a jet."""
    try:
        impl = _ELEMENTARY[fn]
    except KeyError:
        raise ValueError(f"unknown elementary function {fn!r}") from None
    return impl(a)


def derivative_at(f, t0: float, order: int, max_order: int = DEFAULT_ORDER) -> float:
    """Exact i-th derivative of an evaluable scalar function at t0.

    ``f`` is anything with a ``jet(t0, order)`` method, or a callable that
    maps a :class:`TaylorJet` of the variable to the jet of the function.
    """
    if order > max_order:
        raise JetOrderError("jet order exceeded")
    if hasattr(f, "jet"):
        j = f.jet(t0, order)
    else:
        j = f(TaylorJet.variable(t0, order))
    return float(j.derivative_value(order))


def compose(outer: TaylorJet, inner: TaylorJet) -> TaylorJet:
    """Jet of g(h(u)) given the jet of g at h(u0) and the jet of h at u0.

    The caller guarantees that ``outer`` is expanded at ``inner.coeffs[0]``.
    """
    if outer.order != inner.order:
        raise ValueError("jets have different orders")
    n = outer.order
    w = TaylorJet([0.0] + list(inner.coeffs[1:]))  # h(u) - h(u0)
    result = TaylorJet.constant(outer.coeffs[n], n)
    for i in range(n - 1, -1, -1):
        result = result * w + outer.coeffs[i]
    return result


def first_nonvanishing(jet: TaylorJet, scale: float = 0.0) -> int | None:
    """Smallest index whose coefficient survives the vanishing threshold.

    A coefficient counts as zero when it is small against the running
    prefix maximum and against the caller's function scale.  The prefix
    rule matters: Taylor coefficients of frame quotients grow geometrically
    when the nearest complex singularity is close, and a threshold tied to
    the largest coefficient of the whole jet would swamp genuine low-order
    entries.  Rounding noise at index k only stems from indices <= k, so
    the prefix maximum is the right reference.

    Returns None when every coefficient vanishes.  Scalar jets only.
    """
    mags = [abs(float(c)) for c in jet.coeffs]
    running = float(scale)
    for i, m in enumerate(mags):
        running = max(running, m)
        if m > max(VANISH_REL * running, VANISH_ABS):
            return i
    return None


# -- order-2 bivariate jets -------------------------------------------------


class BiJet2:
    """Value, gradient and Hessian of a function of (x, y) at one point.

    Only the mixed second partial is stored once; symmetry is implicit.
    """

    __slots__ = ("value", "dx", "dy", "dxx", "dxy", "dyy")

    def __init__(self, value, dx=0.0, dy=0.0, dxx=0.0, dxy=0.0, dyy=0.0):
        self.value = value
        self.dx = dx
        self.dy = dy
        self.dxx = dxx
        self.dxy = dxy
        self.dyy = dyy

    @property
    def grad(self):
        return (self.dx, self.dy)

    @property
    def hess(self):
        return (self.dxx, self.dxy, self.dyy)

    @classmethod
    def var_x(cls, x0):
        return cls(x0, dx=1.0)

    @classmethod
    def var_y(cls, y0):
        return cls(y0, dy=1.0)

    @classmethod
    def constant(cls, c):
        return cls(c)

    def _coerce(self, other):
        if isinstance(other, BiJet2):
            return other
        return BiJet2.constant(float(other))

    def __add__(self, other):
        b = self._coerce(other)
        return BiJet2(self.value + b.value, self.dx + b.dx, self.dy + b.dy,
                      self.dxx + b.dxx, self.dxy + b.dxy, self.dyy + b.dyy)

    __radd__ = __add__

    def __sub__(self, other):
        b = self._coerce(other)
        return BiJet2(self.value - b.value, self.dx - b.dx, self.dy - b.dy,
                      self.dxx - b.dxx, self.dxy - b.dxy, self.dyy - b.dyy)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __neg__(self):
        return BiJet2(-self.value, -self.dx, -self.dy, -self.dxx, -self.dxy, -self.dyy)

    def __mul__(self, other):
        b = self._coerce(other)
        a = self
        return BiJet2(
            a.value * b.value,
            a.dx * b.value + a.value * b.dx,
            a.dy * b.value + a.value * b.dy,
            a.dxx * b.value + 2.0 * a.dx * b.dx + a.value * b.dxx,
            a.dxy * b.value + a.dx * b.dy + a.dy * b.dx + a.value * b.dxy,
            a.dyy * b.value + 2.0 * a.dy * b.dy + a.value * b.dyy,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        b = self._coerce(other)
        if np.any(np.asarray(b.value) == 0.0):
            raise JetDomainError("jet division by zero at expansion point")
        return self * b._chain(1.0 / b.value, -1.0 / b.value ** 2, 2.0 / b.value ** 3)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __pow__(self, exponent: int):
        if not isinstance(exponent, (int, np.integer)) or exponent < 0:
            raise ValueError("jet exponent must be a non-negative integer")
        result = BiJet2.constant(1.0)
        base = self
        e = int(exponent)
        while e:
            if e & 1:
                result = result * base
            base = base * base if e > 1 else base
            e >>= 1
        return result

    def _chain(self, f, fp, fpp):
        """Compose with a scalar function given f(u), f'(u), f''(u)."""
        return BiJet2(
            f,
            fp * self.dx,
            fp * self.dy,
            fp * self.dxx + fpp * self.dx * self.dx,
            fp * self.dxy + fpp * self.dx * self.dy,
            fp * self.dyy + fpp * self.dy * self.dy,
        )

    def sin(self):
        u = self.value
        return self._chain(np.sin(u), np.cos(u), -np.sin(u))

    def cos(self):
        u = self.value
        return self._chain(np.cos(u), -np.sin(u), -np.cos(u))

    def exp(self):
        e = np.exp(self.value)
        return self._chain(e, e, e)

    def sqrt(self):
        u = np.asarray(self.value)
        if np.any(u <= 0.0):
            raise JetDomainError("sqrt domain error")
        r = np.sqrt(self.value)
        return self._chain(r, 0.5 / r, -0.25 / (r * self.value))

    def atan(self):
        u = self.value
        g = 1.0 + u * u
        return self._chain(np.arctan(u), 1.0 / g, -2.0 * u / (g * g))

    def __repr__(self):
        return (f"BiJet2(value={self.value!r}, grad=({self.dx!r}, {self.dy!r}), "
                f"hess=({self.dxx!r}, {self.dxy!r}, {self.dyy!r}))")
