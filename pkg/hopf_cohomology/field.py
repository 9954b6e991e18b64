"""Exact scalars over Q and the cyclotomic fields Q(zeta_ell).

Rationals are ``sympy.QQ`` elements, cyclotomic values are ``ANP`` instances reduced modulo the
cyclotomic polynomial. ``Scalar`` wraps either one together with its :class:`FieldContext` so that
mixing two fields is detected instead of silently coerced.
"""
import functools
import math
import re

from sympy import QQ, I, Poly, cyclotomic_poly, exp, pi, symbols
from sympy.polys.densearith import dup_rem
from sympy.polys.densebasic import dup_strip
from sympy.polys.polyclasses import ANP

from hopf_cohomology.exceptions import ContextMismatch, DivisionByZero, OutOfRange, ZeroInput

MAX_CYCLOTOMIC_ORDER = 64

_TERM_RE = re.compile(r"^(?:(?P<coef>[0-9]+(?:/[0-9]+)?)\*?)?(?:zeta(?P<order>[0-9]+)(?:\^(?P<power>-?[0-9]+))?)?$")


@functools.lru_cache(maxsize=None)
def cyclotomic_coeffs(ell):
    """Integer coefficients of the ell-th cyclotomic polynomial, leading coefficient first."""
    if ell < 1 or ell > MAX_CYCLOTOMIC_ORDER:
        raise OutOfRange(f"cyclotomic order {ell} outside 1..{MAX_CYCLOTOMIC_ORDER}")
    return tuple(int(c) for c in cyclotomic_poly(ell, polys=True).all_coeffs())


def lcm(a, b):
    return a * b // math.gcd(a, b)


@functools.lru_cache(maxsize=None)
def cyclotomic_domain(ell):
    """sympy domain QQ<zeta_ell>, generated by zeta_ell itself with the ell-th cyclotomic polynomial as modulus."""
    x = symbols("x")
    minpoly = Poly(cyclotomic_poly(ell, x), x, domain=QQ)
    return QQ.algebraic_field((minpoly, exp(2 * pi * I / ell)))


class FieldContext:
    """The coefficient field: Q (``ell is None``) or Q(zeta_ell)."""

    __slots__ = ("__ell", "__mod")

    def __init__(self, ell=None):
        self.__ell = ell
        self.__mod = None
        if ell is not None:
            self.__mod = [QQ(c) for c in cyclotomic_coeffs(ell)]

    @classmethod
    @functools.lru_cache(maxsize=None)
    def rational(cls):
        return cls(None)

    @classmethod
    @functools.lru_cache(maxsize=None)
    def cyclotomic(cls, ell):
        return cls(ell)

    @classmethod
    def for_texts(cls, *texts):
        """Smallest context able to parse every given text (lcm of the zeta orders mentioned)."""
        ell = 1
        for text in texts:
            for order in re.findall(r"zeta([0-9]+)", str(text)):
                ell = lcm(ell, int(order))
        return cls.rational() if ell == 1 else cls.cyclotomic(ell)

    @property
    def kind(self):
        return "rational" if self.__ell is None else "cyclotomic"

    @property
    def ell(self):
        return self.__ell

    @property
    def phi_coeffs(self):
        return None if self.__ell is None else cyclotomic_coeffs(self.__ell)

    @property
    def degree(self):
        return 1 if self.__ell is None else len(self.__mod) - 1

    @property
    def domain(self):
        """The sympy domain used for matrix elimination."""
        return QQ if self.__ell is None else cyclotomic_domain(self.__ell)

    def to_domain(self, value):
        if self.__ell is None:
            return value._v
        return self.domain.new(value._v.to_list())

    def from_domain(self, elem):
        if self.__ell is None:
            return Scalar(self, QQ.convert(elem))
        return Scalar(self, self.raw_from_coeffs(list(reversed(elem.to_list()))))

    def raw(self, value):
        """Convert an int or a QQ element into this context's raw representation."""
        if self.__ell is None:
            return QQ.convert(value)
        return ANP([QQ.convert(value)], self.__mod, QQ)

    def raw_from_coeffs(self, coeffs):
        """Build a raw value from coefficients in ascending powers of zeta."""
        if self.__ell is None:
            (value,) = coeffs or (0,)
            return QQ.convert(value)
        rep = dup_strip(list(reversed([QQ.convert(c) for c in coeffs])))
        if len(rep) >= len(self.__mod):
            rep = dup_rem(rep, self.__mod, QQ)
        return ANP(rep, self.__mod, QQ)

    def __call__(self, value):
        if isinstance(value, Scalar):
            if value.ctx != self:
                raise ContextMismatch(f"{value.ctx!r} vs {self!r}")
            return value
        if isinstance(value, str):
            return self.parse(value)
        return Scalar(self, self.raw(value))

    @property
    def zero(self):
        return Scalar(self, self.raw(0))

    @property
    def one(self):
        return Scalar(self, self.raw(1))

    def zeta(self, order=None, power=1):
        """Primitive ``order``-th root of unity raised to ``power`` (order defaults to ell)."""
        if self.__ell is None:
            order = order or 1
            if order > 2:
                raise ContextMismatch(f"zeta{order} is not rational")
            return self.one if order == 1 or power % 2 == 0 else -self.one
        order = order or self.__ell
        if self.__ell % order:
            raise ContextMismatch(f"zeta{order} does not live in Q(zeta{self.__ell})")
        exponent = (self.__ell // order) * power % self.__ell
        coeffs = [0] * (exponent + 1)
        coeffs[exponent] = 1
        return Scalar(self, self.raw_from_coeffs(coeffs))

    def parse(self, text):
        """Parse ``"p/q"``, ``"zeta3"``, ``"zeta9^3"``, ``"2*zeta4-1/2"`` and sums of such terms."""
        source = str(text).replace(" ", "")
        if not source:
            raise ValueError("empty scalar")
        total = self.zero
        for sign, term in re.findall(r"([+-]?)([^+-]+)", source):
            match = _TERM_RE.match(term)
            if match is None or not term:
                raise ValueError(f"cannot parse scalar term {term!r} in {text!r}")
            coef = match.group("coef")
            value = self(QQ(*map(int, coef.split("/")))) if coef else self.one
            if match.group("order"):
                value = value * self.zeta(int(match.group("order")), int(match.group("power") or 1))
            total = total - value if sign == "-" else total + value
        return total

    def from_json(self, data):
        if "rat" in data:
            return self(QQ(*map(int, data["rat"].split("/"))))
        cyc = data["cyc"]
        if cyc["ell"] != self.__ell:
            raise ContextMismatch(f"scalar over zeta{cyc['ell']} read in {self!r}")
        return Scalar(self, self.raw_from_coeffs([QQ(*map(int, c.split("/"))) for c in cyc["coeffs"]]))

    def to_json(self):
        if self.__ell is None:
            return {"kind": "rational"}
        return {"kind": "cyclotomic", "ell": self.__ell}

    @classmethod
    def from_description(cls, data):
        if data.get("kind", "rational") == "rational":
            return cls.rational()
        return cls.cyclotomic(int(data["ell"]))

    def __eq__(self, other):
        return isinstance(other, FieldContext) and other.ell == self.__ell

    def __hash__(self):
        return hash(("FieldContext", self.__ell))

    def __repr__(self):
        return "FieldContext(Q)" if self.__ell is None else f"FieldContext(Q(zeta{self.__ell}))"


class Scalar:
    """Immutable exact field element."""

    __slots__ = ("ctx", "_v")

    def __init__(self, ctx, raw):
        self.ctx = ctx
        self._v = raw

    def _coerce(self, other):
        if isinstance(other, Scalar):
            if other.ctx is not self.ctx and other.ctx != self.ctx:
                raise ContextMismatch(f"{self.ctx!r} vs {other.ctx!r}")
            return other._v
        if isinstance(other, int):
            return self.ctx.raw(other)
        return NotImplemented

    def __add__(self, other):
        raw = self._coerce(other)
        if raw is NotImplemented:
            return raw
        return Scalar(self.ctx, self._v + raw)

    __radd__ = __add__

    def __sub__(self, other):
        raw = self._coerce(other)
        if raw is NotImplemented:
            return raw
        return Scalar(self.ctx, self._v - raw)

    def __rsub__(self, other):
        raw = self._coerce(other)
        if raw is NotImplemented:
            return raw
        return Scalar(self.ctx, raw - self._v)

    def __mul__(self, other):
        raw = self._coerce(other)
        if raw is NotImplemented:
            return raw
        return Scalar(self.ctx, self._v * raw)

    __rmul__ = __mul__

    def __truediv__(self, other):
        raw = self._coerce(other)
        if raw is NotImplemented:
            return raw
        if not raw:
            raise DivisionByZero("division by an exact zero")
        return Scalar(self.ctx, self._v / raw)

    def __neg__(self):
        return Scalar(self.ctx, -self._v)

    def __pow__(self, exponent):
        if exponent < 0:
            return self.inv() ** (-exponent)
        result = self.ctx.raw(1)
        base = self._v
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return Scalar(self.ctx, result)

    def inv(self):
        if not self._v:
            raise DivisionByZero("inverse of zero")
        return Scalar(self.ctx, self.ctx.raw(1) / self._v)

    def __bool__(self):
        return bool(self._v)

    @property
    def is_zero(self):
        return not self._v

    @property
    def is_one(self):
        return self == 1

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.ctx(other)
        if not isinstance(other, Scalar):
            return NotImplemented
        return self.ctx == other.ctx and self.coeffs() == other.coeffs()

    def __hash__(self):
        return hash((self.ctx.ell, self.coeffs()))

    def coeffs(self):
        """Rational coefficients in ascending powers of zeta (a 1-tuple over Q)."""
        if self.ctx.ell is None:
            return (QQ.convert(self._v),)
        return tuple(reversed(self._v.to_list()))

    @property
    def is_rational(self):
        return len(self.coeffs()) <= 1

    def to_json(self):
        if self.ctx.ell is None:
            return {"rat": _fraction_text(self._v)}
        return {"cyc": {"ell": self.ctx.ell, "coeffs": [_fraction_text(c) for c in self.coeffs()]}}

    def __str__(self):
        coeffs = self.coeffs()
        if not any(coeffs):
            return "0"
        parts = []
        for power, coef in enumerate(coeffs):
            if not coef:
                continue
            if power == 0:
                parts.append(_fraction_text(coef))
                continue
            base = f"zeta{self.ctx.ell}" + (f"^{power}" if power > 1 else "")
            if coef == 1:
                parts.append(base)
            elif coef == -1:
                parts.append("-" + base)
            else:
                parts.append(f"{_fraction_text(coef)}*{base}")
        text = "+".join(parts)
        return text.replace("+-", "-")

    def __repr__(self):
        return f"Scalar({self})"


def _fraction_text(value):
    value = QQ.convert(value)
    num, den = int(value.numerator), int(value.denominator)
    return str(num) if den == 1 else f"{num}/{den}"


def scalar_arith(op, a, b=None):
    """Dispatch ``add``, ``sub``, ``mul``, ``inv`` or ``neg`` on exact scalars."""
    if b is not None and a.ctx != b.ctx:
        raise ContextMismatch(f"{a.ctx!r} vs {b.ctx!r}")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "inv":
        return a.inv()
    if op == "neg":
        return -a
    raise ValueError(f"unknown scalar operation {op!r}")


def multiplicative_order(q):
    """Smallest n with q**n == 1, or ``math.inf``."""
    if q.is_zero:
        raise ZeroInput("multiplicative order of zero")
    if q.ctx.ell is None or q.is_rational:
        if q == 1:
            return 1
        if q == -1:
            return 2
        return math.inf
    bound = max(2 * q.ctx.ell, q.ctx.ell * q.ctx.degree)
    power = q
    for n in range(1, bound + 1):
        if power == 1:
            return n
        power = power * q
    return math.inf


def q_integer(n, q):
    """[n]_q = 1 + q + ... + q^(n-1)."""
    total = q.ctx.zero
    power = q.ctx.one
    for _ in range(n):
        total = total + power
        power = power * q
    return total


def q_factorial(n, q):
    result = q.ctx.one
    for k in range(1, n + 1):
        result = result * q_integer(k, q)
    return result


def q_binomial(n, m, q):
    """Gaussian binomial (n choose m)_q, exact at roots of unity."""
    if m < 0 or n < 0 or m > n:
        raise OutOfRange(f"q-binomial needs 0 <= m <= n, got n={n}, m={m}")
    order = multiplicative_order(q)
    if order == 1:
        return q.ctx(math.comb(n, m))
    if order != math.inf:
        r_n, q_n = n % order, n // order
        r_m, q_m = m % order, m // order
        if r_n < r_m:
            return q.ctx.zero
        return _q_binomial_product(r_n, r_m, q) * math.comb(q_n, q_m)
    return _q_binomial_product(n, m, q)


def _q_binomial_product(n, m, q):
    num = q.ctx.one
    den = q.ctx.one
    for i in range(m):
        num = num * q_integer(n - i, q)
        den = den * q_integer(i + 1, q)
    return num / den
