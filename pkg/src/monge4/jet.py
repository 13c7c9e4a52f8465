"""Second-order forward-mode jets in one and two variables.

Every curvature formula in this package consumes exact first and second
partial derivatives of the patch functions.  A jet carries those derivatives
through arithmetic and elementary functions by the chain rule, so the exact
pipeline involves no numerical differentiation at all.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


class DomainError(ValueError):
    """A function was evaluated outside its differentiable domain."""

    def __init__(self, message: str, position: int | None = None):
        super().__init__(message)
        self.position = position


@dataclass(frozen=True)
class Jet2:
    """Value and partial derivatives up to second order at a point (u, v).

    The mixed partial is stored once (duv), so symmetry of second partials
    holds by construction.
    """

    val: float
    du: float = 0.0
    dv: float = 0.0
    duu: float = 0.0
    duv: float = 0.0
    dvv: float = 0.0

    @property
    def is_constant(self) -> bool:
        return (self.du == 0.0 and self.dv == 0.0 and self.duu == 0.0
                and self.duv == 0.0 and self.dvv == 0.0)

    def chain(self, f0: float, f1: float, f2: float) -> "Jet2":
        """Compose with a scalar function given its value and derivatives."""
        return Jet2(
            f0,
            f1 * self.du,
            f1 * self.dv,
            f2 * self.du * self.du + f1 * self.duu,
            f2 * self.du * self.dv + f1 * self.duv,
            f2 * self.dv * self.dv + f1 * self.dvv,
        )

    def __add__(self, other):
        other = _lift2(other)
        return Jet2(self.val + other.val, self.du + other.du, self.dv + other.dv,
                    self.duu + other.duu, self.duv + other.duv, self.dvv + other.dvv)

    __radd__ = __add__

    def __sub__(self, other):
        other = _lift2(other)
        return Jet2(self.val - other.val, self.du - other.du, self.dv - other.dv,
                    self.duu - other.duu, self.duv - other.duv, self.dvv - other.dvv)

    def __rsub__(self, other):
        return _lift2(other).__sub__(self)

    def __mul__(self, other):
        a, b = self, _lift2(other)
        return Jet2(
            a.val * b.val,
            a.du * b.val + a.val * b.du,
            a.dv * b.val + a.val * b.dv,
            a.duu * b.val + 2.0 * a.du * b.du + a.val * b.duu,
            a.duv * b.val + a.du * b.dv + a.dv * b.du + a.val * b.duv,
            a.dvv * b.val + 2.0 * a.dv * b.dv + a.val * b.dvv,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self * _reciprocal(_lift2(other))

    def __rtruediv__(self, other):
        return _lift2(other) * _reciprocal(self)

    def __neg__(self):
        return Jet2(-self.val, -self.du, -self.dv, -self.duu, -self.duv, -self.dvv)

    def __pow__(self, other):
        return jet_pow(self, other)


@dataclass(frozen=True)
class Jet1:
    """Value and first two derivatives of a one-variable function."""

    val: float
    d1: float = 0.0
    d2: float = 0.0

    @property
    def is_constant(self) -> bool:
        return self.d1 == 0.0 and self.d2 == 0.0

    def chain(self, f0: float, f1: float, f2: float) -> "Jet1":
        return Jet1(f0, f1 * self.d1, f2 * self.d1 * self.d1 + f1 * self.d2)

    def __add__(self, other):
        other = _lift1(other)
        return Jet1(self.val + other.val, self.d1 + other.d1, self.d2 + other.d2)

    __radd__ = __add__

    def __sub__(self, other):
        other = _lift1(other)
        return Jet1(self.val - other.val, self.d1 - other.d1, self.d2 - other.d2)

    def __rsub__(self, other):
        return _lift1(other).__sub__(self)

    def __mul__(self, other):
        a, b = self, _lift1(other)
        return Jet1(
            a.val * b.val,
            a.d1 * b.val + a.val * b.d1,
            a.d2 * b.val + 2.0 * a.d1 * b.d1 + a.val * b.d2,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self * _reciprocal(_lift1(other))

    def __rtruediv__(self, other):
        return _lift1(other) * _reciprocal(self)

    def __neg__(self):
        return Jet1(-self.val, -self.d1, -self.d2)

    def __pow__(self, other):
        return jet_pow(self, other)


def _lift2(x):
    if isinstance(x, Jet2):
        return x
    if isinstance(x, (int, float)):
        return Jet2(float(x))
    raise TypeError(f"cannot mix Jet2 with {type(x).__name__}")


def _lift1(x):
    if isinstance(x, Jet1):
        return x
    if isinstance(x, (int, float)):
        return Jet1(float(x))
    raise TypeError(f"cannot mix Jet1 with {type(x).__name__}")


def _reciprocal(a):
    x = a.val
    if x == 0.0:
        raise DomainError("division by zero")
    inv = 1.0 / x
    return a.chain(inv, -inv * inv, 2.0 * inv * inv * inv)


def seed_u(u0: float, v0: float) -> Jet2:
    """Jet of the coordinate function u at (u0, v0)."""
    del v0
    return Jet2(float(u0), 1.0, 0.0, 0.0, 0.0, 0.0)


def seed_v(u0: float, v0: float) -> Jet2:
    """Jet of the coordinate function v at (u0, v0)."""
    del u0
    return Jet2(float(v0), 0.0, 1.0, 0.0, 0.0, 0.0)


def seed_const(c: float) -> Jet2:
    """Jet of a constant in two variables."""
    return Jet2(float(c))


def seed1(u0: float) -> Jet1:
    """Jet of the identity in one variable."""
    return Jet1(float(u0), 1.0, 0.0)


def const1(c: float) -> Jet1:
    """Jet of a constant in one variable."""
    return Jet1(float(c))


def jet_binary(op: str, a, b):
    """Apply a named binary operation: add, sub, mul or div."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown binary operation {op!r}")


def _fn_sin(x):
    return math.sin(x), math.cos(x), -math.sin(x)


def _fn_cos(x):
    return math.cos(x), -math.sin(x), -math.cos(x)


def _fn_tan(x):
    t = math.tan(x)
    s = 1.0 + t * t
    return t, s, 2.0 * t * s


def _fn_exp(x):
    e = math.exp(x)
    return e, e, e


def _fn_log(x):
    if x <= 0.0:
        raise DomainError(f"log requires a positive argument, got {x!r}")
    return math.log(x), 1.0 / x, -1.0 / (x * x)


def _fn_sqrt(x):
    if x <= 0.0:
        raise DomainError(f"sqrt requires a positive argument, got {x!r}")
    s = math.sqrt(x)
    return s, 0.5 / s, -0.25 / (s * x)


def _fn_sinh(x):
    return math.sinh(x), math.cosh(x), math.sinh(x)


def _fn_cosh(x):
    return math.cosh(x), math.sinh(x), math.cosh(x)


def _fn_abs(x):
    if x == 0.0:
        raise DomainError("abs is not differentiable at 0")
    s = 1.0 if x > 0.0 else -1.0
    return abs(x), s, 0.0


def _fn_neg(x):
    return -x, -1.0, 0.0


_UNARY = {
    "neg": _fn_neg,
    "sin": _fn_sin,
    "cos": _fn_cos,
    "tan": _fn_tan,
    "exp": _fn_exp,
    "log": _fn_log,
    "sqrt": _fn_sqrt,
    "sinh": _fn_sinh,
    "cosh": _fn_cosh,
    "abs": _fn_abs,
}

UNARY_NAMES = frozenset(_UNARY)


def apply_unary(fn: str, a):
    """Apply a named elementary function to a Jet1 or Jet2."""
    try:
        table = _UNARY[fn]
    except KeyError:
        raise ValueError(f"unknown function {fn!r}") from None
    try:
        f0, f1, f2 = table(a.val)
    except OverflowError:
        raise DomainError(f"{fn} overflowed at {a.val!r}") from None
    return a.chain(f0, f1, f2)


def jet_unary(fn: str, a):
    """Alias of apply_unary, named after the operation family."""
    return apply_unary(fn, a)


def pow_int(a, n: int):
    """Integer power by the exact power rule; valid for negative bases."""
    n = int(n)
    if n == 0:
        return a.chain(1.0, 0.0, 0.0)
    x = a.val
    if n < 0 and x == 0.0:
        raise DomainError("zero base with a negative exponent")
    f0 = x ** n
    f1 = n * x ** (n - 1)
    coef2 = n * (n - 1)
    f2 = coef2 * x ** (n - 2) if coef2 != 0 else 0.0
    return a.chain(f0, f1, f2)


def pow_real(a, p: float):
    """Real power by the power rule; requires a positive base."""
    x = a.val
    if x <= 0.0:
        raise DomainError(f"x^{p!r} requires a positive base, got {x!r}")
    f0 = x ** p
    f1 = p * x ** (p - 1.0)
    f2 = p * (p - 1.0) * x ** (p - 2.0)
    return a.chain(f0, f1, f2)


def jet_pow(a, b):
    """General power a^b for jet base and jet or scalar exponent.

    Constant exponents use the power rule (integer exponents admit negative
    bases); a genuinely variable exponent requires a positive base and goes
    through exp(b*log(a)).
    """
    if isinstance(b, (Jet1, Jet2)):
        if b.is_constant:
            b = b.val
        else:
            if a.val <= 0.0:
                raise DomainError(
                    f"variable exponent requires a positive base, got {a.val!r}")
            return apply_unary("exp", b * apply_unary("log", a))
    if isinstance(b, (int, float)):
        if float(b).is_integer():
            return pow_int(a, int(b))
        return pow_real(a, float(b))
    raise TypeError(f"unsupported exponent type {type(b).__name__}")
