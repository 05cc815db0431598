"""Exact arithmetic layer: y-polynomials, truncated series, Bernoulli numbers,
the Hirzebruch root series Q_y and Newton's identities.

Every coefficient is a :class:`fractions.Fraction`; nothing here ever touches
floating point.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Iterable, Sequence, Union

__all__ = [
    "Rational",
    "YPolynomial",
    "Y",
    "UniSeries",
    "bernoulli",
    "qy_series",
    "log_qy_coeffs",
    "inv_qy_coeffs",
    "series_invert",
    "series_exp",
    "series_log",
    "powersums_from_chern",
    "chern_from_powersums",
    "parse_rational",
    "format_rational",
]

Rational = Fraction
Scalar = Union[int, Fraction]


def parse_rational(text: str) -> Fraction:
    """Parse ``"num/den"`` or an integer string."""
    return Fraction(text.strip())


def format_rational(value: Fraction) -> str:
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


class YPolynomial:
    """Polynomial in the formal variable y with rational coefficients.

    Stored densely as a tuple ``(a_0, a_1, ...)`` with no trailing zeros, so
    the zero polynomial is the empty tuple. Instances are immutable and
    hashable.
    """

    __slots__ = ("_c",)

    def __init__(self, coeffs: Iterable[Scalar] = ()):
        c = [Fraction(a) for a in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self._c = tuple(c)

    @classmethod
    def _raw(cls, coeffs: tuple) -> "YPolynomial":
        obj = cls.__new__(cls)
        c = list(coeffs)
        while c and c[-1] == 0:
            c.pop()
        obj._c = tuple(c)
        return obj

    @classmethod
    def const(cls, a: Scalar) -> "YPolynomial":
        return cls((a,))

    @classmethod
    def from_dict(cls, terms: dict) -> "YPolynomial":
        if not terms:
            return cls()
        top = max(terms)
        if min(terms) < 0:
            raise ValueError("negative exponent in y-polynomial")
        c = [Fraction(0)] * (top + 1)
        for e, a in terms.items():
            c[e] += Fraction(a)
        return cls(c)

    @property
    def coeffs(self) -> tuple:
        return self._c

    def to_dict(self) -> dict:
        return {e: a for e, a in enumerate(self._c) if a != 0}

    @property
    def degree(self) -> int:
        return len(self._c) - 1

    def is_zero(self) -> bool:
        return not self._c

    def is_constant(self) -> bool:
        return len(self._c) <= 1

    def constant_term(self) -> Fraction:
        return self._c[0] if self._c else Fraction(0)

    def __getitem__(self, e: int) -> Fraction:
        if 0 <= e < len(self._c):
            return self._c[e]
        return Fraction(0)

    # -- arithmetic -----------------------------------------------------
    @staticmethod
    def _coerce(other) -> "YPolynomial | None":
        if isinstance(other, YPolynomial):
            return other
        if isinstance(other, (int, Fraction)):
            return YPolynomial((other,))
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, b = self._c, o._c
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, v in enumerate(b):
            out[i] += v
        return YPolynomial._raw(tuple(out))

    __radd__ = __add__

    def __neg__(self):
        return YPolynomial._raw(tuple(-v for v in self._c))

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return YPolynomial()
            return YPolynomial._raw(tuple(v * other for v in self._c))
        if not isinstance(other, YPolynomial):
            return NotImplemented
        a, b = self._c, other._c
        if not a or not b:
            return YPolynomial()
        out = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, u in enumerate(a):
            if u == 0:
                continue
            for j, v in enumerate(b):
                out[i + j] += u * v
        return YPolynomial._raw(tuple(out))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (1 / Fraction(other))
        return NotImplemented

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power of a y-polynomial")
        result = YPolynomial.const(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self._c == o._c

    def __hash__(self):
        return hash(self._c)

    def __bool__(self):
        return bool(self._c)

    # -- evaluation -----------------------------------------------------
    def __call__(self, y0: Scalar) -> Fraction:
        return self.evaluate(y0)

    def evaluate(self, y0: Scalar) -> Fraction:
        y0 = Fraction(y0)
        acc = Fraction(0)
        for a in reversed(self._c):
            acc = acc * y0 + a
        return acc

    def compose(self, inner: "YPolynomial") -> "YPolynomial":
        """Substitute ``inner`` for the variable (Horner scheme)."""
        acc = YPolynomial()
        for a in reversed(self._c):
            acc = acc * inner + a
        return acc

    # -- formatting -----------------------------------------------------
    def format(self, var: str = "y") -> str:
        """Descending exponents with explicit signs, e.g. ``32*y^2 - 80*y + 32``."""
        if not self._c:
            return "0"
        parts = []
        for e in range(len(self._c) - 1, -1, -1):
            a = self._c[e]
            if a == 0:
                continue
            sign = "-" if a < 0 else "+"
            mag = -a if a < 0 else a
            if e == 0:
                body = format_rational(mag)
            else:
                mono = var if e == 1 else f"{var}^{e}"
                body = mono if mag == 1 else f"{format_rational(mag)}*{mono}"
            parts.append((sign, body))
        first_sign, first_body = parts[0]
        out = ("-" if first_sign == "-" else "") + first_body
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __str__(self):
        return self.format()

    def __repr__(self):
        return f"YPolynomial({self.format()!r})"

    def to_json(self) -> list:
        return [[format_rational(a), e] for e, a in enumerate(self._c) if a != 0]

    @classmethod
    def from_json(cls, data: Sequence) -> "YPolynomial":
        terms: dict = {}
        for coeff, e in data:
            terms[int(e)] = terms.get(int(e), Fraction(0)) + parse_rational(str(coeff))
        return cls.from_dict(terms)


Y = YPolynomial((0, 1))
_ONE = YPolynomial.const(1)
_ZERO = YPolynomial()


def _as_ypoly(a) -> YPolynomial:
    if isinstance(a, YPolynomial):
        return a
    return YPolynomial.const(a)


class UniSeries:
    """Truncated power series in one variable with y-polynomial coefficients.

    ``coeffs[n]`` is the coefficient of ``var**n`` for ``0 <= n <= order``.
    Binary operations truncate to the smaller of the two orders.
    """

    __slots__ = ("var", "order", "coeffs")

    def __init__(self, coeffs: Sequence, order: int, var: str = "a"):
        if order < 0:
            raise ValueError("order must be >= 0")
        c = [_as_ypoly(a) for a in list(coeffs)[: order + 1]]
        c += [_ZERO] * (order + 1 - len(c))
        self.var = var
        self.order = order
        self.coeffs = tuple(c)

    def __getitem__(self, n: int) -> YPolynomial:
        return self.coeffs[n]

    def __eq__(self, other):
        if not isinstance(other, UniSeries):
            return NotImplemented
        return self.order == other.order and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.order, self.coeffs))

    def __add__(self, other: "UniSeries") -> "UniSeries":
        order = min(self.order, other.order)
        return UniSeries([self[n] + other[n] for n in range(order + 1)], order, self.var)

    def __sub__(self, other: "UniSeries") -> "UniSeries":
        order = min(self.order, other.order)
        return UniSeries([self[n] - other[n] for n in range(order + 1)], order, self.var)

    def __neg__(self):
        return UniSeries([-a for a in self.coeffs], self.order, self.var)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, YPolynomial)):
            return UniSeries([a * other for a in self.coeffs], self.order, self.var)
        if not isinstance(other, UniSeries):
            return NotImplemented
        order = min(self.order, other.order)
        out = [_ZERO] * (order + 1)
        for i in range(order + 1):
            a = self[i]
            if a.is_zero():
                continue
            for j in range(order + 1 - i):
                b = other[j]
                if not b.is_zero():
                    out[i + j] = out[i + j] + a * b
        return UniSeries(out, order, self.var)

    __rmul__ = __mul__

    def evaluate_y(self, y0: Scalar) -> "UniSeries":
        return UniSeries([YPolynomial.const(a(y0)) for a in self.coeffs], self.order, self.var)

    def truncate(self, order: int) -> "UniSeries":
        return UniSeries(self.coeffs, min(order, self.order), self.var)

    def __repr__(self):
        terms = [f"({a})*{self.var}^{n}" for n, a in enumerate(self.coeffs) if a]
        return f"UniSeries({' + '.join(terms) or '0'}, order={self.order})"


@lru_cache(maxsize=None)
def _bernoulli_table(n: int) -> tuple:
    # Akiyama-Tanigawa; yields the B_1 = +1/2 convention directly.
    a = [Fraction(0)] * (n + 1)
    out = []
    for m in range(n + 1):
        a[m] = Fraction(1, m + 1)
        for j in range(m, 0, -1):
            a[j - 1] = j * (a[j - 1] - a[j])
        out.append(a[0])
    return tuple(out)


def bernoulli(n: int) -> Fraction:
    """B_n with B_1 = +1/2, i.e. t/(1 - e^{-t}) = sum B_n t^n / n!."""
    if n < 0:
        raise ValueError("n must be >= 0")
    return _bernoulli_table(max(n, 16))[n]


def qy_series(order: int, var: str = "a") -> UniSeries:
    """Truncation of Q_y(a) = a(1+y)/(1 - e^{-a(1+y)}) - a*y."""
    if order < 0:
        raise ValueError("order must be >= 0")
    one_plus_y = YPolynomial((1, 1))
    coeffs = []
    for n in range(order + 1):
        if n == 1:
            coeffs.append(YPolynomial((Fraction(1, 2), Fraction(-1, 2))))
        else:
            coeffs.append(one_plus_y ** n * (bernoulli(n) / factorial(n)))
    return UniSeries(coeffs, order, var)


def series_invert(s: UniSeries) -> UniSeries:
    if s[0] != _ONE:
        raise ValueError("series_invert needs constant term 1")
    out = [_ONE]
    for n in range(1, s.order + 1):
        acc = _ZERO
        for j in range(1, n + 1):
            if not s[j].is_zero():
                acc = acc + s[j] * out[n - j]
        out.append(-acc)
    return UniSeries(out, s.order, s.var)


def series_log(s: UniSeries) -> UniSeries:
    """log(s) for constant term 1, via n*l_n = n*s_n - sum_{j<n} j*l_j*s_{n-j}."""
    if s[0] != _ONE:
        raise ValueError("series_log needs constant term 1")
    out = [_ZERO]
    for n in range(1, s.order + 1):
        acc = s[n] * n
        for j in range(1, n):
            if not out[j].is_zero() and not s[n - j].is_zero():
                acc = acc - out[j] * s[n - j] * j
        out.append(acc / n)
    return UniSeries(out, s.order, s.var)


def series_exp(s: UniSeries) -> UniSeries:
    """exp(s) for constant term 0, via n*e_n = sum_{j=1..n} j*s_j*e_{n-j}."""
    if not s[0].is_zero():
        raise ValueError("series_exp needs constant term 0")
    out = [_ONE]
    for n in range(1, s.order + 1):
        acc = _ZERO
        for j in range(1, n + 1):
            if not s[j].is_zero():
                acc = acc + s[j] * out[n - j] * j
        out.append(acc / n)
    return UniSeries(out, s.order, s.var)


@lru_cache(maxsize=None)
def _log_qy(order: int) -> tuple:
    return series_log(qy_series(order)).coeffs[1:]


def log_qy_coeffs(order: int) -> list:
    """[g_1, ..., g_order] with log Q_y(a) = sum_m g_m(y) a^m."""
    if order < 1:
        raise ValueError("order must be >= 1")
    return list(_log_qy(order))


@lru_cache(maxsize=None)
def _inv_qy(order: int) -> tuple:
    return series_invert(qy_series(order)).coeffs


def inv_qy_coeffs(order: int) -> list:
    """Coefficients of 1/Q_y(a) up to ``order``."""
    return list(_inv_qy(order))


# -- Newton's identities ------------------------------------------------------

def powersums_from_chern(c: Sequence, rank, order: int) -> list:
    """Power sums p_0..p_order from Chern classes.

    ``c[j]`` is c_j for j >= 1 (``c[0]`` is ignored, c_0 = 1); missing entries
    are zero. The result has ``p[0] = rank``. Coefficients may live in any
    commutative ring supporting ``+``, ``-`` and integer scaling.
    """
    def cc(j):
        return c[j] if j < len(c) else None

    p: list = [rank]
    for n in range(1, order + 1):
        acc = None
        for i in range(1, n):
            ci = cc(i)
            if ci is None:
                continue
            term = ci * p[n - i]
            if (i - 1) % 2:
                term = -term
            acc = term if acc is None else acc + term
        cn = cc(n)
        if cn is not None:
            term = cn * n
            if (n - 1) % 2:
                term = -term
            acc = term if acc is None else acc + term
        if acc is None:
            acc = 0 * p[n - 1] if n > 1 else 0 * rank
        p.append(acc)
    return p


def chern_from_powersums(p: Sequence, order: int, one=1) -> list:
    """Chern classes c_0..c_order from power sums ``p`` (``p[0]`` = rank, unused).

    n*c_n = sum_{i=1..n} (-1)^{i-1} c_{n-i} p_i.
    """
    c: list = [one]
    for n in range(1, order + 1):
        acc = None
        for i in range(1, n + 1):
            if i >= len(p) or p[i] is None:
                continue
            term = c[n - i] * p[i]
            if (i - 1) % 2:
                term = -term
            acc = term if acc is None else acc + term
        if acc is None:
            acc = one * 0
        c.append(acc * Fraction(1, n))
    return c
