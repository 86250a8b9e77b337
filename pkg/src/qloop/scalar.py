"""Exact ground-field arithmetic.

Rationals are :class:`fractions.Fraction`.  On top of them this module
provides Laurent polynomials and rational functions in the quantum
parameter ``q``, the quantum integers, factorials and binomials, and
specialization ``q -> zeta`` at a rational point.

A computation runs either *specialized* (every scalar is a ``Fraction``
and ``zeta`` is a ``Fraction``) or *generic* (every scalar is a
``RationalFunction`` and ``zeta`` is the generator :data:`Q`).  Module
code never branches on the tag; it only uses field operations, so both
work through the same paths.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Dict, Iterable, Union

__all__ = [
    "Fraction",
    "LaurentPoly",
    "RationalFunction",
    "ArithmeticError_",
    "ZetaError",
    "Q",
    "qint",
    "qfact",
    "qbinom",
    "specialize",
    "is_valid_zeta",
    "check_zeta",
    "coerce",
    "is_generic",
    "is_zero",
    "bar",
    "rational_to_str",
    "rational_from_str",
    "scalar_to_json",
]


class ArithmeticError_(ArithmeticError):
    """Raised when an exact operation that must succeed does not."""


class ZetaError(ValueError):
    """Raised for a specialization point that is zero or a root of unity."""


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return rational_from_str(x)
    raise TypeError(f"cannot interpret {x!r} as a rational")


class LaurentPoly:
    """Finite sum ``sum c_e q^e`` with rational coefficients.

    Zero coefficients are never stored, so two polynomials are equal iff
    their coefficient maps are equal.
    """

    __slots__ = ("coeffs", "_hash")

    def __init__(self, coeffs: Union[Dict[int, object], None] = None):
        c = {}
        if coeffs:
            for e, v in coeffs.items():
                v = _frac(v)
                if v:
                    c[int(e)] = v
        self.coeffs: Dict[int, Fraction] = c
        self._hash = None

    @classmethod
    def const(cls, c) -> "LaurentPoly":
        return cls({0: c})

    @classmethod
    def monomial(cls, e: int, c=1) -> "LaurentPoly":
        return cls({e: c})

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    @property
    def low(self) -> int:
        return min(self.coeffs) if self.coeffs else 0

    @property
    def high(self) -> int:
        return max(self.coeffs) if self.coeffs else 0

    def _coerce(self, other):
        if isinstance(other, LaurentPoly):
            return other
        if isinstance(other, (int, Fraction)):
            return LaurentPoly.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        c = dict(self.coeffs)
        for e, v in other.coeffs.items():
            c[e] = c.get(e, 0) + v
        return LaurentPoly(c)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly({e: -v for e, v in self.coeffs.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        c: Dict[int, Fraction] = {}
        for e1, v1 in self.coeffs.items():
            for e2, v2 in other.coeffs.items():
                c[e1 + e2] = c.get(e1 + e2, 0) + v1 * v2
        return LaurentPoly(c)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            if len(self.coeffs) != 1:
                raise ArithmeticError_("only monomials are invertible in the Laurent ring")
            (e, v), = self.coeffs.items()
            return LaurentPoly({e * n: v ** n})
        result = LaurentPoly.const(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __truediv__(self, other):
        return RationalFunction(self, other)

    def __rtruediv__(self, other):
        return RationalFunction(other, self)

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            if isinstance(other, RationalFunction):
                return other == self
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(tuple(sorted(self.coeffs.items())))
        return self._hash

    def shift(self, k: int) -> "LaurentPoly":
        """Multiply by ``q^k``."""
        return LaurentPoly({e + k: v for e, v in self.coeffs.items()})

    def bar(self) -> "LaurentPoly":
        """The substitution ``q -> q^{-1}``."""
        return LaurentPoly({-e: v for e, v in self.coeffs.items()})

    def evaluate(self, x):
        total = 0
        for e, v in self.coeffs.items():
            total += v * x ** e
        return total

    def divmod_exact(self, other: "LaurentPoly") -> "LaurentPoly":
        """Exact quotient ``self / other``; raises if there is a remainder."""
        if other.is_zero():
            raise ZeroDivisionError("division by the zero Laurent polynomial")
        a = _to_poly(self.shift(-self.low)) if self else []
        b = _to_poly(other.shift(-other.low))
        qt, r = _poly_divmod(a, b)
        if any(r):
            raise ArithmeticError_(f"inexact division of {self} by {other}")
        return _from_poly(qt).shift(self.low - other.low) if self else LaurentPoly()

    def to_json(self) -> Dict[str, str]:
        return {str(e): rational_to_str(v) for e, v in sorted(self.coeffs.items())}

    @classmethod
    def from_json(cls, data: Dict[str, str]) -> "LaurentPoly":
        return cls({int(e): rational_from_str(v) for e, v in data.items()})

    def __repr__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for e in sorted(self.coeffs):
            v = self.coeffs[e]
            if e == 0:
                terms.append(str(v))
            else:
                mono = "q" if e == 1 else f"q^{e}"
                if v == 1:
                    terms.append(mono)
                elif v == -1:
                    terms.append("-" + mono)
                else:
                    terms.append(f"{v}*{mono}")
        return " + ".join(terms).replace("+ -", "- ")


# dense polynomial helpers: lists of Fractions, index = degree


def _to_poly(p: LaurentPoly):
    if not p.coeffs:
        return []
    assert p.low >= 0
    out = [Fraction(0)] * (p.high + 1)
    for e, v in p.coeffs.items():
        out[e] = v
    return out


def _from_poly(a) -> LaurentPoly:
    return LaurentPoly({i: v for i, v in enumerate(a) if v})


def _trim(a):
    a = list(a)
    while a and not a[-1]:
        a.pop()
    return a


def _poly_divmod(a, b):
    a = _trim(a)
    b = _trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    if len(a) < len(b):
        return [], a
    qt = [Fraction(0)] * (len(a) - len(b) + 1)
    r = list(a)
    lead = b[-1]
    for k in range(len(a) - len(b), -1, -1):
        c = r[k + len(b) - 1] / lead
        qt[k] = c
        if c:
            for j, bj in enumerate(b):
                r[k + j] -= c * bj
    return qt, _trim(r[: len(b) - 1])


def _poly_gcd(a, b):
    a, b = _trim(a), _trim(b)
    while b:
        _, r = _poly_divmod(a, b)
        a, b = b, r
    if not a:
        return [Fraction(1)]
    lead = a[-1]
    return [c / lead for c in a]


def _primitive_scale(a) -> Fraction:
    """Factor ``s`` with ``s*a`` integral, content 1, lowest coefficient > 0."""
    den = 1
    for c in a:
        if c:
            den = den * c.denominator // gcd(den, c.denominator)
    ints = [int(c * den) for c in a]
    g = 0
    for c in ints:
        g = gcd(g, c)
    low = next(c for c in ints if c)
    s = Fraction(den, g)
    return -s if low < 0 else s


class RationalFunction:
    """Element of ``Q(q)``.

    Canonical form: ``numerator / denominator`` where the denominator is an
    honest polynomial with nonzero constant term, integral coefficients of
    content 1 and positive constant term, coprime to the numerator.  Any
    power of ``q`` lives in the numerator.  Equality is then syntactic.
    """

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num=0, den=1):
        num = _as_laurent(num)
        den = _as_laurent(den)
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if num.is_zero():
            self.num, self.den = LaurentPoly(), LaurentPoly.const(1)
            self._hash = None
            return
        shift = num.low - den.low
        a = _to_poly(num.shift(-num.low))
        b = _to_poly(den.shift(-den.low))
        if len(b) > 1:
            g = _poly_gcd(a, b)
            if len(g) > 1:
                a, r1 = _poly_divmod(a, g)
                b, r2 = _poly_divmod(b, g)
                assert not r1 and not r2
        s = _primitive_scale(b)
        self.num = _from_poly([c * s for c in a]).shift(shift)
        self.den = _from_poly([c * s for c in b])
        self._hash = None

    @classmethod
    def _raw(cls, num: LaurentPoly, den: LaurentPoly) -> "RationalFunction":
        obj = cls.__new__(cls)
        obj.num, obj.den, obj._hash = num, den, None
        return obj

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __bool__(self):
        return not self.num.is_zero()

    def is_laurent(self) -> bool:
        return self.den == LaurentPoly.const(1)

    def _coerce(self, other):
        if isinstance(other, RationalFunction):
            return other
        if isinstance(other, (int, Fraction, LaurentPoly)):
            return RationalFunction._raw(_as_laurent(other), LaurentPoly.const(1))
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.den == other.den:
            return RationalFunction(self.num + other.num, self.den)
        return RationalFunction(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction._raw(-self.num, self.den)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return RationalFunction()
        return RationalFunction(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if other.is_zero():
            raise ZeroDivisionError("division by the zero rational function")
        return RationalFunction(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __pow__(self, n: int):
        if n < 0:
            return RationalFunction(1) / (self ** (-n))
        return RationalFunction(self.num ** n, self.den ** n)

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.num, self.den))
        return self._hash

    def bar(self) -> "RationalFunction":
        return RationalFunction(self.num.bar(), self.den.bar())

    def __repr__(self):
        if self.is_laurent():
            return repr(self.num)
        return f"({self.num})/({self.den})"

    def to_json(self):
        return {"num": self.num.to_json(), "den": self.den.to_json()}

    @classmethod
    def from_json(cls, data) -> "RationalFunction":
        return cls(LaurentPoly.from_json(data["num"]), LaurentPoly.from_json(data["den"]))


def _as_laurent(x) -> LaurentPoly:
    if isinstance(x, LaurentPoly):
        return x
    if isinstance(x, (int, Fraction, str)):
        return LaurentPoly.const(_frac(x))
    raise TypeError(f"cannot interpret {x!r} as a Laurent polynomial")


#: the generic parameter ``q`` as a field element of ``Q(q)``
Q = RationalFunction(LaurentPoly.monomial(1))


@lru_cache(maxsize=None)
def qint(n: int) -> LaurentPoly:
    """Quantum integer ``[n] = q^{1-n} + q^{3-n} + ... + q^{n-1}``.

    Negative arguments use ``[n] = -[-n]``.
    """
    if n < 0:
        return -qint(-n)
    return LaurentPoly({1 - n + 2 * k: 1 for k in range(n)})


@lru_cache(maxsize=None)
def qfact(n: int) -> LaurentPoly:
    if n < 0:
        raise ValueError(f"quantum factorial of negative integer {n}")
    out = LaurentPoly.const(1)
    for k in range(2, n + 1):
        out = out * qint(k)
    return out


@lru_cache(maxsize=None)
def qbinom(m: int, p: int) -> LaurentPoly:
    if m < 0 or p < 0:
        raise ValueError("quantum binomial needs nonnegative arguments")
    if p > m:
        raise ValueError(f"quantum binomial [{m} choose {p}] with p > m")
    return qfact(m).divmod_exact(qfact(p) * qfact(m - p))


def is_valid_zeta(zeta) -> bool:
    """True iff ``zeta`` is a nonzero rational that is not a root of unity."""
    zeta = _frac(zeta)
    return zeta not in (0, 1, -1)


def check_zeta(zeta):
    """Validate a specialization point; the generic point ``Q`` always passes."""
    if isinstance(zeta, RationalFunction):
        if zeta != Q:
            raise ZetaError("generic computations must use q itself as zeta")
        return zeta
    zeta = _frac(zeta)
    if not is_valid_zeta(zeta):
        raise ZetaError(f"zeta={zeta} is zero or a root of unity")
    return zeta


def is_generic(zeta) -> bool:
    return isinstance(zeta, RationalFunction)


def specialize(f, zeta) -> Fraction:
    """Evaluate ``f`` at ``q = zeta`` exactly."""
    zeta = check_zeta(zeta)
    if isinstance(f, (int, Fraction)):
        return Fraction(f)
    if isinstance(f, LaurentPoly):
        return Fraction(f.evaluate(zeta))
    d = f.den.evaluate(zeta)
    if d == 0:
        raise ZeroDivisionError(f"denominator {f.den} vanishes at q={zeta}")
    return Fraction(f.num.evaluate(zeta)) / d


def coerce(f, zeta):
    """Bring ``f`` (int, Fraction, LaurentPoly or RationalFunction) into the
    field selected by ``zeta``."""
    if is_generic(zeta):
        if isinstance(f, RationalFunction):
            return f
        return RationalFunction(f)
    return specialize(f, zeta)


def is_zero(x) -> bool:
    return not x


def bar(x):
    """``q -> q^{-1}`` on generic scalars; constants are fixed."""
    if isinstance(x, (RationalFunction, LaurentPoly)):
        return x.bar()
    return x


def rational_to_str(x) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def rational_from_str(s: str) -> Fraction:
    s = s.strip()
    if "/" in s:
        a, b = s.split("/")
        if int(b) <= 0:
            raise ValueError(f"denominator must be positive in {s!r}")
        return Fraction(int(a), int(b))
    return Fraction(int(s))


def scalar_to_json(x):
    if isinstance(x, RationalFunction):
        return x.to_json()
    if isinstance(x, LaurentPoly):
        return x.to_json()
    return rational_to_str(x)


def poly_in_z_to_str(coeffs: Iterable) -> str:
    """Render ascending coefficients of a polynomial in ``z``, e.g. ``z^2 - 2*z + 3/4``."""
    coeffs = list(coeffs)
    out = ""
    for k in range(len(coeffs) - 1, -1, -1):
        c = coeffs[k]
        if not c:
            continue
        mono = "" if k == 0 else ("z" if k == 1 else f"z^{k}")
        if isinstance(c, RationalFunction):
            body = f"({c})" + (f"*{mono}" if mono else "")
            out += (" + " if out else "") + body
            continue
        c = Fraction(c)
        sign = "-" if c < 0 else "+"
        a = abs(c)
        num = str(a.numerator) if a.denominator == 1 else f"{a.numerator}/{a.denominator}"
        body = mono if (mono and a == 1) else (f"{num}*{mono}" if mono else num)
        if out:
            out += f" {sign} {body}"
        else:
            out = body if sign == "+" else "-" + body
    return out or "0"
