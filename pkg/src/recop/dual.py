"""First-order dual numbers: value plus directional derivative."""

from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class Dual:
    """a + b*eps with eps^2 = 0; carries one directional derivative."""

    value: float
    deriv: float

    def __add__(self, other: "Dual") -> "Dual":
        return Dual(self.value + other.value, self.deriv + other.deriv)

    def __sub__(self, other: "Dual") -> "Dual":
        return Dual(self.value - other.value, self.deriv - other.deriv)

    def __mul__(self, other: "Dual") -> "Dual":
        return Dual(
            self.value * other.value,
            self.value * other.deriv + self.deriv * other.value,
        )

    def __truediv__(self, other: "Dual") -> "Dual":
        # Caller guarantees other.value != 0.
        v = other.value
        return Dual(
            self.value / v,
            (self.deriv * v - self.value * other.deriv) / (v * v),
        )

    def __neg__(self) -> "Dual":
        return Dual(-self.value, -self.deriv)


def constant(x: float) -> Dual:
    return Dual(x, 0.0)


def sin(d: Dual) -> Dual:
    return Dual(math.sin(d.value), math.cos(d.value) * d.deriv)


def cos(d: Dual) -> Dual:
    return Dual(math.cos(d.value), -math.sin(d.value) * d.deriv)


def exp(d: Dual) -> Dual:
    e = math.exp(d.value)
    return Dual(e, e * d.deriv)


def log(d: Dual) -> Dual:
    # Caller guarantees d.value > 0.
    return Dual(math.log(d.value), d.deriv / d.value)


def sqrt(d: Dual) -> Dual:
    # Caller guarantees d.value > 0.
    r = math.sqrt(d.value)
    return Dual(r, d.deriv / (2.0 * r))


def powi(d: Dual, n: int) -> Dual:
    """Integer power by repeated multiplication (exact products, exact
    zero derivative for a zero direction). Caller guarantees
    d.value != 0 when n < 0."""
    if n < 0:
        return constant(1.0) / powi(d, -n)
    result = constant(1.0)
    base = d
    m = n
    while m > 0:
        if m & 1:
            result = result * base
        base = base * base
        m >>= 1
    return result


def powf(base: Dual, expo: Dual) -> Dual:
    """General power for positive base: d(u^v) = u^v * (v' ln u + v u'/u).
    Caller guarantees base.value > 0."""
    u, du = base.value, base.deriv
    v, dv = expo.value, expo.deriv
    w = math.pow(u, v)
    return Dual(w, w * (dv * math.log(u) + v * du / u))
