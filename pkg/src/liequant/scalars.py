"""Exact scalars: rationals and truncated formal power series in hbar.

All coefficients in the library are either `fractions.Fraction` (exact
rationals, always in lowest terms with positive denominator) or `HSeries`
(polynomials in hbar truncated at a fixed order, with Fraction
coefficients).  The two kinds mix freely in arithmetic; a Fraction is
treated as a constant series of infinite precision.
"""

from __future__ import annotations

from fractions import Fraction

#: default truncation order: series are kept modulo hbar^(DEFAULT_ORDER+1)
DEFAULT_ORDER = 4


def rat(p, q=1):
    """Exact rational p/q."""
    return Fraction(p, q)


class HSeries:
    """Truncated power series  c0 + c1*hbar + ... + cN*hbar^N  (mod hbar^(N+1)).

    Immutable.  Arithmetic between series of different orders truncates to
    the smaller order; arithmetic with plain rationals/integers keeps the
    order of the series operand.
    """

    __slots__ = ("coeffs", "order")

    def __init__(self, coeffs, order=None):
        if order is None:
            order = DEFAULT_ORDER
        cs = [Fraction(c) for c in coeffs[: order + 1]]
        cs.extend([Fraction(0)] * (order + 1 - len(cs)))
        self.coeffs = tuple(cs)
        self.order = order

    # -- constructors ------------------------------------------------------

    @staticmethod
    def const(c, order=None):
        return HSeries([Fraction(c)], order)

    @staticmethod
    def hbar(order=None):
        return HSeries([0, 1], order)

    @staticmethod
    def hpow(k, c=1, order=None):
        """c * hbar^k."""
        if order is None:
            order = DEFAULT_ORDER
        coeffs = [Fraction(0)] * (order + 1)
        if k <= order:
            coeffs[k] = Fraction(c)
        return HSeries(coeffs, order)

    # -- queries -----------------------------------------------------------

    def coeff(self, k):
        """Coefficient of hbar^k (0 beyond the truncation order)."""
        if 0 <= k <= self.order:
            return self.coeffs[k]
        return Fraction(0)

    def valuation(self):
        """Smallest k with nonzero coefficient; None for the zero series."""
        for k, c in enumerate(self.coeffs):
            if c:
                return k
        return None

    def is_const(self):
        return all(c == 0 for c in self.coeffs[1:])

    def __bool__(self):
        return any(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, HSeries):
            n = min(self.order, other.order)
            return self.coeffs[: n + 1] == other.coeffs[: n + 1]
        if isinstance(other, (int, Fraction)):
            return self.coeffs[0] == other and not any(self.coeffs[1:])
        return NotImplemented

    def __hash__(self):
        # hash as a constant when possible so mixed dicts behave
        if self.is_const():
            return hash(self.coeffs[0])
        return hash(self.coeffs)

    # -- arithmetic --------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, HSeries):
            return other
        if isinstance(other, (int, Fraction)):
            return HSeries.const(other, self.order)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        n = min(self.order, o.order)
        return HSeries([self.coeffs[k] + o.coeffs[k] for k in range(n + 1)], n)

    __radd__ = __add__

    def __neg__(self):
        return HSeries([-c for c in self.coeffs], self.order)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        n = min(self.order, o.order)
        out = [Fraction(0)] * (n + 1)
        for i, a in enumerate(self.coeffs[: n + 1]):
            if not a:
                continue
            for j in range(n + 1 - i):
                b = o.coeffs[j]
                if b:
                    out[i + j] += a * b
        return HSeries(out, n)

    __rmul__ = __mul__

    def inverse(self):
        """Multiplicative inverse; requires an invertible constant term."""
        c0 = self.coeffs[0]
        if c0 == 0:
            raise ZeroDivisionError("HSeries with zero constant term is not invertible")
        n = self.order
        inv = [Fraction(0)] * (n + 1)
        inv[0] = 1 / c0
        for k in range(1, n + 1):
            s = Fraction(0)
            for j in range(1, k + 1):
                s += self.coeffs[j] * inv[k - j]
            inv[k] = -s / c0
        return HSeries(inv, n)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def shift(self, k):
        """Multiply by hbar^k (k may be negative; dropping below hbar^0 errors)."""
        if k >= 0:
            return HSeries([Fraction(0)] * k + list(self.coeffs), self.order)
        if any(self.coeffs[:-k]):
            raise ValueError("negative hbar shift hits a nonzero low-order term")
        return HSeries(list(self.coeffs[-k:]) + [Fraction(0)] * (-k), self.order)

    def __repr__(self):
        parts = []
        for k, c in enumerate(self.coeffs):
            if not c:
                continue
            if k == 0:
                parts.append(str(c))
            elif k == 1:
                parts.append(f"{c}*h" if c != 1 else "h")
            else:
                parts.append(f"{c}*h^{k}" if c != 1 else f"h^{k}")
        return " + ".join(parts) if parts else "0"


def as_series(c, order=None):
    """Coerce a scalar to HSeries."""
    if isinstance(c, HSeries):
        return c
    return HSeries.const(c, order)


def scalar_is_zero(c):
    if isinstance(c, HSeries):
        return not c
    return c == 0


def scalar_str(c):
    """Serialize a scalar: "p/q" for rationals, list of such for series."""
    if isinstance(c, HSeries):
        return [str(x) for x in c.coeffs]
    return str(Fraction(c))


def scalar_from_json(v, order=None):
    if isinstance(v, list):
        return HSeries([Fraction(x) for x in v], order if order is not None else len(v) - 1)
    return Fraction(v)
