"""Exact arithmetic over Q(zeta).

Dense polynomials with rational coefficients, reduced rational functions,
the derivation delta = psi * d/dzeta, orders at points, the two Moebius
substitutions zeta -> 1/zeta and zeta -> -zeta-1, and exact inversion of
bivariate power series.

The five points Lambda = {0, 1, -1, -2, -1/2} are special throughout:
every rational function is stored with the factors zeta - a (and
2*zeta + 1 for a = -1/2) split off its numerator and denominator, so
cancellation against them is exact exponent arithmetic rather than a
polynomial gcd.  Values are immutable after construction and all
operations are pure, so everything here is safe to share across threads.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Union

Rational = Fraction

Coeff = Union[int, Fraction]

#: order of a zero/pole at infinity is reported against this sentinel
INF = math.inf

#: the five finite distinguished points, in canonical order
LAMBDA = (
    Fraction(0),
    Fraction(1),
    Fraction(-1),
    Fraction(-2),
    Fraction(-1, 2),
)

# linear factors zeta, zeta+1, zeta-1, zeta+2, 2*zeta+1 (ascending coeffs)
_CUSP_FACTORS = ((0, 1), (-1, 1), (1, 1), (2, 1), (1, 2))

# Moebius matrices (a, b, c, d) for zeta -> (a*zeta + b)/(c*zeta + d)
SUB_INV = (0, 1, 1, 0)
SUB_REFLECT = (-1, -1, 0, 1)


class ZeroFunctionError(ZeroDivisionError):
    """Raised when an order or factorization of the zero function is requested."""


class CenterIsZeroError(ValueError):
    """Raised when a bivariate series is expanded around a zero of its denominator."""


# ---------------------------------------------------------------------------
# integer coefficient lists (ascending, trailing zeros trimmed)
# ---------------------------------------------------------------------------


def _trim(p: list) -> tuple:
    n = len(p)
    while n and not p[n - 1]:
        n -= 1
    return tuple(p[:n])


def _padd(p: tuple, q: tuple) -> tuple:
    if len(p) < len(q):
        p, q = q, p
    out = list(p)
    for i, c in enumerate(q):
        out[i] += c
    return _trim(out)


def _pneg(p: tuple) -> tuple:
    return tuple(-c for c in p)


def _pscale(p: tuple, c) -> tuple:
    if not c:
        return ()
    return tuple(a * c for a in p)


_KRONECKER_CUTOFF = 256


def _pmul(p: tuple, q: tuple) -> tuple:
    if not p or not q:
        return ()
    if len(p) == 1:
        return _pscale(q, p[0])
    if len(q) == 1:
        return _pscale(p, q[0])
    if len(p) * len(q) >= _KRONECKER_CUTOFF:
        return _pmul_kronecker(p, q)
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return _trim(out)


def _pmul_kronecker(p: tuple, q: tuple) -> tuple:
    # pack into one big integer each; a product coefficient is bounded by
    # min(len) * max|p| * max|q|, so this digit size recovers it exactly
    mp = max(abs(c) for c in p)
    mq = max(abs(c) for c in q)
    bits = mp.bit_length() + mq.bit_length() + min(len(p), len(q)).bit_length() + 2
    base = 1 << bits
    half = base >> 1
    np_ = 0
    for c in reversed(p):
        np_ = (np_ << bits) + c
    nq = 0
    for c in reversed(q):
        nq = (nq << bits) + c
    prod = np_ * nq
    out = []
    for _ in range(len(p) + len(q) - 1):
        digit = prod & (base - 1)
        if digit >= half:
            digit -= base
        prod = (prod - digit) >> bits
        out.append(digit)
    return _trim(out)


def _ppow(p: tuple, n: int) -> tuple:
    result = (1,)
    base = p
    while n:
        if n & 1:
            result = _pmul(result, base)
        n >>= 1
        if n:
            base = _pmul(base, base)
    return result


def _pderiv(p: tuple) -> tuple:
    return _trim([i * c for i, c in enumerate(p)][1:])


def _peval(p: tuple, x):
    result = 0
    for c in reversed(p):
        result = result * x + c
    return result


def _pcontent(p: tuple) -> int:
    g = 0
    for c in p:
        g = math.gcd(g, c)
        if g == 1:
            return 1
    return g


def _pprimitive(p: tuple) -> tuple[tuple, int]:
    """Return (primitive part with positive leading coefficient, signed content)."""
    if not p:
        return (), 0
    g = _pcontent(p)
    if p[-1] < 0:
        g = -g
    if g == 1:
        return p, 1
    return tuple(c // g for c in p), g


def _pdivmod(p: tuple, q: tuple) -> tuple[tuple, tuple]:
    """Division over Q; quotient/remainder may have Fraction coefficients."""
    if not q:
        raise ZeroDivisionError("polynomial division by zero")
    if len(p) < len(q):
        return (), p
    rem = list(p)
    lead = q[-1]
    dq = len(q) - 1
    quot = [0] * (len(p) - dq)
    for i in range(len(p) - 1, dq - 1, -1):
        c = rem[i]
        if not c:
            continue
        if isinstance(c, int) and isinstance(lead, int) and c % lead == 0:
            f = c // lead
        else:
            f = _norm_coeff(Fraction(c) / lead)
        quot[i - dq] = f
        rem[i] = 0
        for j in range(dq):
            rem[i - dq + j] -= f * q[j]
    return _trim(quot), _trim(rem)


def _pexact_div(p: tuple, q: tuple) -> tuple:
    quot, rem = _pdivmod(p, q)
    if rem:
        raise ArithmeticError("polynomial division is not exact")
    return quot


def _plinear_div(p: tuple, factor: tuple) -> tuple | None:
    """Exact division by a primitive linear a + b*zeta, or None when not exact.

    Integer synthetic division suffices: for integral p and primitive linear
    divisor, an exact quotient over Q is integral by Gauss's lemma.
    """
    a, b = factor
    n = len(p)
    if n == 0:
        return ()
    if n == 1:
        return None
    if a == 0:
        # factor is b*zeta; divisible iff the constant term vanishes
        if p[0] != 0:
            return None
        s = list(p[1:])
        if b != 1:
            if any(c % b for c in s):
                return None
            s = [c // b for c in s]
        return _trim(s)
    # p = (a + b z) s: ascending recursion p_i = a s_i + b s_{i-1}
    s = [0] * (n - 1)
    prev = 0
    for i in range(n - 1):
        num = p[i] - b * prev
        if num % a:
            return None
        prev = s[i] = num // a
    if p[n - 1] != b * prev:
        return None
    return _trim(s)


def _pseudo_rem(p: tuple, q: tuple) -> tuple:
    dp, dq = len(p) - 1, len(q) - 1
    lead = q[-1]
    rem = list(p)
    for i in range(dp, dq - 1, -1):
        c = rem[i]
        for j in range(len(rem)):
            rem[j] *= lead
        if c:
            for j in range(dq):
                rem[i - dq + j] -= c * q[j]
        rem[i] = 0
    return _trim(rem[:dp])


def _pgcd(p: tuple, q: tuple) -> tuple:
    """GCD of integer polynomials, primitive with positive leading coefficient."""
    if not p:
        return _pprimitive(q)[0]
    if not q:
        return _pprimitive(p)[0]
    if len(p) == 1 or len(q) == 1:
        return (1,)
    # evaluation pretest: coprime values at any point certify coprimality
    for x0 in (9973, 31337):
        if math.gcd(_peval(p, x0), _peval(q, x0)) == 1:
            return (1,)
    a, _ = _pprimitive(p)
    b, _ = _pprimitive(q)
    if len(a) < len(b):
        a, b = b, a
    while True:
        r = _pseudo_rem(a, b)
        if not r:
            return _pprimitive(b)[0]
        if len(r) == 1:
            return (1,)
        a, b = b, _pprimitive(r)[0]


def _pcompose_linear(p: tuple, a: int, b: int) -> tuple:
    """p(a*zeta + b) with integer coefficients."""
    result: tuple = ()
    lin = (b, a)
    for c in reversed(p):
        result = _padd(_pmul(result, lin), (c,) if c else ())
    return result


def _pcompose_mobius(p: tuple, m: tuple[int, int, int, int]) -> tuple:
    """Numerator of p((a z + b)/(c z + d)) after clearing (c z + d)^deg(p)."""
    a, b, c, d = m
    num = _trim([b, a])
    den = _trim([d, c])
    deg = len(p) - 1
    result: tuple = ()
    den_pow = (1,)
    # Horner from the top: result = result*num + coeff*den^(deg-i)
    for i in range(deg, -1, -1):
        result = _pmul(result, num)
        if p[i]:
            result = _padd(result, _pscale(den_pow, p[i]))
        if i:
            den_pow = _pmul(den_pow, den)
    return result


# ---------------------------------------------------------------------------
# public polynomial wrapper (rational coefficients allowed)
# ---------------------------------------------------------------------------


def _norm_coeff(c: Coeff) -> Coeff:
    if isinstance(c, Fraction) and c.denominator == 1:
        return c.numerator
    return c


class Polynomial:
    """Dense univariate polynomial, ascending rational coefficients.

    The zero polynomial has an empty coefficient tuple and degree -1.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[Coeff] = ()):
        clist = [_norm_coeff(Fraction(c) if not isinstance(c, (int, Fraction)) else c) for c in coeffs]
        object.__setattr__(self, "coeffs", _trim(clist))

    def __setattr__(self, name, value):
        raise AttributeError("Polynomial is immutable")

    @classmethod
    def _raw(cls, coeffs: tuple) -> "Polynomial":
        self = object.__new__(cls)
        object.__setattr__(self, "coeffs", coeffs)
        return self

    @classmethod
    def constant(cls, c: Coeff) -> "Polynomial":
        c = _norm_coeff(c)
        return cls._raw((c,) if c else ())

    @classmethod
    def zeta(cls) -> "Polynomial":
        return cls._raw((0, 1))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __eq__(self, other) -> bool:
        if isinstance(other, Polynomial):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self == Polynomial.constant(other)
        return NotImplemented

    def __hash__(self):
        return hash(("Polynomial", self.coeffs))

    def __add__(self, other) -> "Polynomial":
        other = self._coerce(other)
        return Polynomial._raw(_padd(self.coeffs, other.coeffs))

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return Polynomial._raw(_pneg(self.coeffs))

    def __sub__(self, other) -> "Polynomial":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "Polynomial":
        return self._coerce(other) - self

    def __mul__(self, other) -> "Polynomial":
        if isinstance(other, (int, Fraction)):
            return Polynomial._raw(_trim(list(_pscale(self.coeffs, _norm_coeff(other)))))
        other = self._coerce(other)
        return Polynomial._raw(_pmul(self.coeffs, other.coeffs))

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Polynomial":
        if n < 0:
            raise ValueError("negative power of a polynomial")
        return Polynomial._raw(_ppow(self.coeffs, n))

    def __divmod__(self, other) -> tuple["Polynomial", "Polynomial"]:
        other = self._coerce(other)
        q, r = _pdivmod(self.coeffs, other.coeffs)
        return Polynomial._raw(q), Polynomial._raw(r)

    def __floordiv__(self, other) -> "Polynomial":
        return divmod(self, other)[0]

    def __mod__(self, other) -> "Polynomial":
        return divmod(self, other)[1]

    @staticmethod
    def _coerce(other) -> "Polynomial":
        if isinstance(other, Polynomial):
            return other
        if isinstance(other, (int, Fraction)):
            return Polynomial.constant(other)
        raise TypeError(f"cannot coerce {type(other).__name__} to Polynomial")

    def derivative(self) -> "Polynomial":
        return Polynomial._raw(_pderiv(self.coeffs))

    def __call__(self, x):
        return _peval(self.coeffs, x)

    def is_integer(self) -> bool:
        return all(isinstance(c, int) for c in self.coeffs)

    def primitive(self) -> tuple["Polynomial", Fraction]:
        """Return (primitive integer part with positive lead, rational content)."""
        if not self.coeffs:
            return Polynomial._raw(()), Fraction(0)
        den = 1
        for c in self.coeffs:
            if isinstance(c, Fraction):
                den = den * c.denominator // math.gcd(den, c.denominator)
        ints = tuple(int(c * den) for c in self.coeffs)
        prim, cont = _pprimitive(ints)
        return Polynomial._raw(prim), Fraction(cont, den)

    def compose_linear(self, a: Coeff, b: Coeff) -> "Polynomial":
        result = Polynomial._raw(())
        for c in reversed(self.coeffs):
            result = result * Polynomial._raw((_norm_coeff(b), _norm_coeff(a))) + c
        return result

    def __repr__(self) -> str:
        return f"Polynomial({list(self.coeffs)!r})"

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            if i == 0:
                parts.append(f"{c}")
            else:
                mon = "z" if i == 1 else f"z^{i}"
                if c == 1:
                    parts.append(mon)
                elif c == -1:
                    parts.append(f"-{mon}")
                else:
                    parts.append(f"{c}*{mon}")
        out = parts[0]
        for p in parts[1:]:
            out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
        return out


# ---------------------------------------------------------------------------
# rational functions in cusp-factored canonical form
# ---------------------------------------------------------------------------


def _strip_cusps(p: tuple) -> tuple[tuple, list[int]]:
    """Split off all cusp factors: p = (result) * prod factor_i^(e_i)."""
    exps = [0, 0, 0, 0, 0]
    if not p:
        return p, exps
    for idx, fac in enumerate(_CUSP_FACTORS):
        while len(p) > 1:
            q = _plinear_div(p, fac)
            if q is None:
                break
            p = q
            exps[idx] += 1
    return p, exps


class RationalFunction:
    """Reduced rational function of zeta, value = lead * prod(cusp^e) * num/den.

    num and den are primitive integer polynomials with positive leading
    coefficients and no roots in Lambda; gcd(num, den) = 1.  The rational
    scalar ``lead`` carries sign and scale; lead == 0 encodes the zero
    function.  Instances are immutable and hashable.
    """

    __slots__ = ("lead", "exps", "num", "den")

    def __init__(self, lead: Coeff, exps=(0, 0, 0, 0, 0), num=(1,), den=(1,)):
        lead = Fraction(lead)
        if not lead:
            exps, num, den = (0, 0, 0, 0, 0), (1,), (1,)
        object.__setattr__(self, "lead", lead)
        object.__setattr__(self, "exps", tuple(exps))
        object.__setattr__(self, "num", tuple(num))
        object.__setattr__(self, "den", tuple(den))

    def __setattr__(self, name, value):
        raise AttributeError("RationalFunction is immutable")

    # -- constructors ------------------------------------------------------

    @classmethod
    def _make(cls, lead: Fraction, exps, num: tuple, den: tuple) -> "RationalFunction":
        self = object.__new__(cls)
        if not lead:
            exps, num, den = (0, 0, 0, 0, 0), (1,), (1,)
        object.__setattr__(self, "lead", lead)
        object.__setattr__(self, "exps", tuple(exps))
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)
        return self

    @classmethod
    def from_parts(cls, num, den=1) -> "RationalFunction":
        """Build and fully reduce from arbitrary polynomial/scalar parts."""
        npoly = num if isinstance(num, Polynomial) else Polynomial.constant(num) if isinstance(num, (int, Fraction)) else Polynomial(num)
        dpoly = den if isinstance(den, Polynomial) else Polynomial.constant(den) if isinstance(den, (int, Fraction)) else Polynomial(den)
        if not dpoly:
            raise ZeroDivisionError("zero denominator")
        if not npoly:
            return cls._make(Fraction(0), (0,) * 5, (1,), (1,))
        nprim, ncont = npoly.primitive()
        dprim, dcont = dpoly.primitive()
        return cls._reduce(Fraction(ncont, 1) / dcont, nprim.coeffs, dprim.coeffs)

    @classmethod
    def _reduce(cls, lead: Fraction, num: tuple, den: tuple) -> "RationalFunction":
        """Reduce integer num/den with scalar lead into canonical form."""
        num, nexp = _strip_cusps(num)
        den, dexp = _strip_cusps(den)
        exps = tuple(a - b for a, b in zip(nexp, dexp))
        # the factor 2*zeta+1 is primitive, so stripping kept things integral;
        # any residual common part is a genuine gcd
        g = _pgcd(num, den)
        if len(g) > 1:
            num = _pexact_div(num, g)
            den = _pexact_div(den, g)
        num, cn = _pprimitive(tuple(num))
        den, cd = _pprimitive(tuple(den))
        return cls._make(lead * Fraction(cn, cd), exps, num, den)

    @classmethod
    def constant(cls, c) -> "RationalFunction":
        return cls._make(Fraction(c), (0,) * 5, (1,), (1,))

    @classmethod
    def zeta(cls) -> "RationalFunction":
        return cls._make(Fraction(1), (1, 0, 0, 0, 0), (1,), (1,))

    @classmethod
    def cusp_monomial(cls, lead, exps) -> "RationalFunction":
        return cls._make(Fraction(lead), tuple(exps), (1,), (1,))

    # -- views -------------------------------------------------------------

    @property
    def numerator(self) -> Polynomial:
        """Primitive integer numerator with the positive cusp powers expanded."""
        p = self.num
        for idx, e in enumerate(self.exps):
            if e > 0:
                p = _pmul(p, _ppow(_CUSP_FACTORS[idx], e))
        return Polynomial._raw(p)

    @property
    def denominator(self) -> Polynomial:
        p = self.den
        for idx, e in enumerate(self.exps):
            if e < 0:
                p = _pmul(p, _ppow(_CUSP_FACTORS[idx], -e))
        return Polynomial._raw(p)

    def __bool__(self) -> bool:
        return bool(self.lead)

    def __eq__(self, other) -> bool:
        if isinstance(other, RationalFunction):
            return (
                self.lead == other.lead
                and self.exps == other.exps
                and self.num == other.num
                and self.den == other.den
            )
        if isinstance(other, (int, Fraction)):
            return self == RationalFunction.constant(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.lead, self.exps, self.num, self.den))

    def is_constant(self) -> bool:
        return not self.lead or (
            all(e == 0 for e in self.exps) and self.num == (1,) and self.den == (1,)
        )

    def is_polynomial(self) -> bool:
        return self.den == (1,) and all(e >= 0 for e in self.exps)

    def to_polynomial(self) -> Polynomial:
        if not self.is_polynomial():
            raise ValueError("not a polynomial")
        return Polynomial(tuple(c * self.lead for c in self.numerator.coeffs))

    # -- arithmetic ---------------------------------------------------------

    def _expanded(self) -> tuple[tuple, tuple]:
        """(numerator, denominator) as integer tuples with cusp powers expanded."""
        return self.numerator.coeffs, self.denominator.coeffs

    def __mul__(self, other) -> "RationalFunction":
        if isinstance(other, (int, Fraction)):
            return RationalFunction._make(self.lead * Fraction(other), self.exps, self.num, self.den)
        if not isinstance(other, RationalFunction):
            return NotImplemented
        if not self.lead or not other.lead:
            return _ZERO
        # cross-cancel the cusp-free parts pairwise
        n1, d1, n2, d2 = self.num, self.den, other.num, other.den
        g = _pgcd(n1, d2)
        if len(g) > 1:
            n1 = _pexact_div(n1, g)
            d2 = _pexact_div(d2, g)
        g = _pgcd(n2, d1)
        if len(g) > 1:
            n2 = _pexact_div(n2, g)
            d1 = _pexact_div(d1, g)
        num = _pmul(n1, n2)
        den = _pmul(d1, d2)
        exps = tuple(a + b for a, b in zip(self.exps, other.exps))
        return RationalFunction._make(self.lead * other.lead, exps, num, den)

    __rmul__ = __mul__

    def inverse(self) -> "RationalFunction":
        if not self.lead:
            raise ZeroDivisionError("inverse of the zero function")
        return RationalFunction._make(1 / self.lead, tuple(-e for e in self.exps), self.den, self.num)

    def __truediv__(self, other) -> "RationalFunction":
        if isinstance(other, (int, Fraction)):
            if not other:
                raise ZeroDivisionError("division by zero")
            return RationalFunction._make(self.lead / Fraction(other), self.exps, self.num, self.den)
        if not isinstance(other, RationalFunction):
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other) -> "RationalFunction":
        return RationalFunction.constant(other) * self.inverse()

    def __pow__(self, n: int) -> "RationalFunction":
        if n == 0:
            return _ONE
        if n < 0:
            return self.inverse() ** (-n)
        return RationalFunction._make(
            self.lead**n,
            tuple(e * n for e in self.exps),
            _ppow(self.num, n),
            _ppow(self.den, n),
        )

    def __neg__(self) -> "RationalFunction":
        return RationalFunction._make(-self.lead, self.exps, self.num, self.den)

    def __add__(self, other) -> "RationalFunction":
        if isinstance(other, (int, Fraction)):
            other = RationalFunction.constant(other)
        if not isinstance(other, RationalFunction):
            return NotImplemented
        if not other.lead:
            return self
        if not self.lead:
            return other
        # shared cusp part: min exponents; shared polynomial part of denominators
        shared = tuple(min(a, b) for a, b in zip(self.exps, other.exps))
        gden = _pgcd(self.den, other.den)
        d1 = _pexact_div(self.den, gden) if len(gden) > 1 else self.den
        d2 = _pexact_div(other.den, gden) if len(gden) > 1 else other.den
        # term_i = lead_i * prod(cusp^(exps_i - shared)) * num_i * d_{3-i}
        t1 = _pmul(self.num, d2)
        t2 = _pmul(other.num, d1)
        for idx in range(5):
            e1 = self.exps[idx] - shared[idx]
            e2 = other.exps[idx] - shared[idx]
            if e1:
                t1 = _pmul(t1, _ppow(_CUSP_FACTORS[idx], e1))
            if e2:
                t2 = _pmul(t2, _ppow(_CUSP_FACTORS[idx], e2))
        a, b = self.lead, other.lead
        scale = Fraction(math.gcd(a.numerator, b.numerator), a.denominator * b.denominator // math.gcd(a.denominator, b.denominator))
        ca = int(a / scale)
        cb = int(b / scale)
        num = _padd(_pscale(t1, ca), _pscale(t2, cb))
        if not num:
            return _ZERO
        den = _pmul(_pmul(d1, d2), gden)
        res = RationalFunction._reduce(scale, num, den)
        return RationalFunction._make(res.lead, tuple(e + s for e, s in zip(res.exps, shared)), res.num, res.den)

    __radd__ = __add__

    def __sub__(self, other) -> "RationalFunction":
        if isinstance(other, (int, Fraction)):
            other = RationalFunction.constant(other)
        return self + (-other)

    def __rsub__(self, other) -> "RationalFunction":
        return (-self) + other

    # -- calculus and substitution ------------------------------------------

    def derivative(self) -> "RationalFunction":
        """d/dzeta, fully reduced."""
        if not self.lead:
            return _ZERO
        num, den = self._expanded()
        dnum = _padd(_pmul(_pderiv(num), den), _pneg(_pmul(num, _pderiv(den))))
        if not dnum:
            return _ZERO
        return RationalFunction._reduce(self.lead, dnum, _pmul(den, den))

    def delta(self) -> "RationalFunction":
        """The derivation psi * d/dzeta with psi = z(z+1)(z-1)(z+2)/(2(2z+1)^2)."""
        return psi() * self.derivative()

    def __call__(self, x):
        """Evaluate at a rational, float or complex point."""
        bases = []
        for idx, e in enumerate(self.exps):
            if e:
                a0, a1 = _CUSP_FACTORS[idx]
                bases.append((a0 + a1 * x, e))
        nv = _peval(self.num, x)
        dv = _peval(self.den, x)
        val = self.lead
        for b, e in bases:
            if e > 0:
                val = val * b**e
            else:
                val = val / b ** (-e)
        return val * nv / dv

    def substitute(self, m: tuple[int, int, int, int]) -> "RationalFunction":
        """Exact composition with zeta -> (a*zeta+b)/(c*zeta+d)."""
        if not self.lead:
            return _ZERO
        a, b, c, d = m
        if a * d - b * c == 0:
            raise ValueError("singular Moebius matrix")
        num, den = self._expanded()
        nhat = _pcompose_mobius(num, m)
        dhat = _pcompose_mobius(den, m)
        shift = (len(den) - 1) - (len(num) - 1)
        lin = _trim([d, c])
        if shift > 0:
            nhat = _pmul(nhat, _ppow(lin, shift))
        elif shift < 0:
            dhat = _pmul(dhat, _ppow(lin, -shift))
        return RationalFunction._reduce(self.lead, nhat, dhat)

    # -- orders and factorization --------------------------------------------

    def order_at(self, a) -> int:
        """Order at a point of C or at INF.

        The order m satisfies (zeta - a)^(-m) * f finite and nonzero at a;
        at infinity, zeta^m * f is finite and nonzero.
        """
        if not self.lead:
            raise ZeroFunctionError("order of the zero function")
        if a == INF:
            num, den = self._expanded()
            return (len(den) - 1) - (len(num) - 1)
        a = Fraction(a)
        if a in LAMBDA:
            return self.exps[LAMBDA.index(a)]
        mult = 0
        p = self.num
        while _peval(p, a) == 0:
            p, _ = _pdivmod(p, (-a.numerator, a.denominator))
            p = tuple(p)
            mult += 1
        if mult:
            return mult
        q = self.den
        while _peval(q, a) == 0:
            q, _ = _pdivmod(q, (-a.numerator, a.denominator))
            q = tuple(q)
            mult -= 1
        return mult

    def factor_over_cusps(self) -> "FactoredForm":
        if not self.lead:
            raise ZeroFunctionError("cannot factor the zero function")
        if self.den != (1,):
            raise ValueError("denominator has an irreducible part outside Lambda")
        return FactoredForm(
            lead=self.lead,
            exponents={a: e for a, e in zip(LAMBDA, self.exps)},
            remainder=Polynomial._raw(self.num),
        )

    def __repr__(self) -> str:
        return f"RationalFunction({self.lead}, {self.exps}, {self.num}, {self.den})"

    def __str__(self) -> str:
        if not self.lead:
            return "0"
        names = ("z", "(z-1)", "(z+1)", "(z+2)", "(2z+1)")
        up, down = [], []
        if self.lead != 1:
            up.append(str(self.lead))
        for name, e in zip(names, self.exps):
            if e > 0:
                up.append(name if e == 1 else f"{name}^{e}")
            elif e < 0:
                down.append(name if e == -1 else f"{name}^{-e}")
        if self.num != (1,):
            up.append(f"({Polynomial._raw(self.num)})")
        if self.den != (1,):
            down.append(f"({Polynomial._raw(self.den)})")
        s = "*".join(up) if up else "1"
        if down:
            s += " / (" + "*".join(down) + ")"
        return s


_ZERO = RationalFunction._make(Fraction(0), (0,) * 5, (1,), (1,))
_ONE = RationalFunction._make(Fraction(1), (0,) * 5, (1,), (1,))


class FactoredForm:
    """lead * prod over Lambda of (zeta - a)^e  (with 2*zeta+1 at a = -1/2) * remainder."""

    __slots__ = ("lead", "exponents", "remainder")

    def __init__(self, lead: Fraction, exponents: dict, remainder: Polynomial):
        object.__setattr__(self, "lead", Fraction(lead))
        object.__setattr__(self, "exponents", {Fraction(k): int(v) for k, v in exponents.items()})
        object.__setattr__(self, "remainder", remainder)

    def __setattr__(self, name, value):
        raise AttributeError("FactoredForm is immutable")

    def reassemble(self) -> RationalFunction:
        exps = tuple(self.exponents.get(a, 0) for a in LAMBDA)
        rf = RationalFunction._make(Fraction(1), exps, (1,), (1,))
        return rf * RationalFunction.from_parts(self.remainder) * self.lead

    def __eq__(self, other):
        if not isinstance(other, FactoredForm):
            return NotImplemented
        return (
            self.lead == other.lead
            and all(self.exponents.get(a, 0) == other.exponents.get(a, 0) for a in LAMBDA)
            and self.remainder == other.remainder
        )

    def __hash__(self):
        return hash((self.lead, tuple(self.exponents.get(a, 0) for a in LAMBDA), self.remainder))

    def __repr__(self):
        return f"FactoredForm({self.lead}, {self.exponents}, {self.remainder!r})"


# ---------------------------------------------------------------------------
# module-level operations (the spec surface)
# ---------------------------------------------------------------------------


_PSI = None
_TZ = None


def psi() -> RationalFunction:
    """The multiplier in delta = psi * d/dzeta: z(z+1)(z-1)(z+2)/(2(2z+1)^2)."""
    global _PSI
    if _PSI is None:
        _PSI = RationalFunction._make(Fraction(1, 2), (1, 1, 1, 1, -2), (1,), (1,))
    return _PSI


def t_of_zeta() -> RationalFunction:
    """The Hauptmodul change of variables t = z(z+2)^3/(1+2z)^3."""
    global _TZ
    if _TZ is None:
        _TZ = RationalFunction._make(Fraction(1), (1, 0, 0, 3, -3), (1,), (1,))
    return _TZ


def delta(f: RationalFunction) -> RationalFunction:
    return f.delta()


def order_at(f: RationalFunction, a) -> int:
    return f.order_at(a)


def substitute(f: RationalFunction, m) -> RationalFunction:
    return f.substitute(m)


def factor_over_cusps(f: RationalFunction) -> FactoredForm:
    return f.factor_over_cusps()


def bivariate_series_invert(
    g_coeffs: dict,
    center: tuple,
    order: int,
) -> dict:
    """Taylor coefficients of 1/G around ``center``, exact over Q(zeta).

    ``g_coeffs`` maps (i, j) to the RationalFunction coefficient of x^i y^j
    in the bivariate polynomial G.  The result maps (i, j), 0 <= i, j <=
    order, to the coefficient of (x-a)^i (y-b)^j in the expansion of 1/G.
    """
    if order < 0:
        raise ValueError("order must be nonnegative")
    a, b = center
    if isinstance(a, (int, Fraction)):
        a = RationalFunction.constant(a)
    if isinstance(b, (int, Fraction)):
        b = RationalFunction.constant(b)
    # shift: coefficients of G(a + X, b + Y)
    shifted: dict = {}
    for (i, j), c in g_coeffs.items():
        if not c:
            continue
        for p in range(i + 1):
            ap = math.comb(i, p) * a ** (i - p)
            for q in range(j + 1):
                term = c * ap * (math.comb(j, q) * b ** (j - q))
                if (p, q) in shifted:
                    shifted[(p, q)] = shifted[(p, q)] + term
                else:
                    shifted[(p, q)] = term
    g00 = shifted.get((0, 0), _ZERO)
    if not g00:
        raise CenterIsZeroError("G vanishes at the expansion center")
    inv00 = g00.inverse()
    h: dict = {(0, 0): inv00}
    for s in range(1, 2 * order + 1):
        for i in range(min(s, order), -1, -1):
            j = s - i
            if j > order:
                continue
            acc = _ZERO
            for (p, q), g in shifted.items():
                if (p or q) and p <= i and q <= j:
                    acc = acc + g * h[(i - p, j - q)]
            h[(i, j)] = -inv00 * acc
    return h
