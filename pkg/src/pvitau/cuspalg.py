"""Exact algebra of fractional-power monomials over the five basis factors.

Monomials live over {zeta, zeta+1, zeta-1, zeta+2, 2*zeta+1} with unit
constants of the form e^(i*pi*r) * 2^s * 3^u, r, s, u rational.  This is
enough to express the seed images of the extended generators u, v,
tau_0..tau_4, to convert eta-quotient monomials to the zeta chart, and to
build the normalizing prefactor of a lattice index together with its
logarithmic delta-derivative.

Fractional powers of the negative constants appearing in the basis
relations use the principal branch (phase +i*pi per negative sign).  The
resulting units are pinned by exact identities (the u,v decomposition of
t and 1-t, the four unit combinations, the seven log-derivative values)
and cross-checked numerically against eta products; no correction units
turned out to be necessary.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable

from .exactfield import Polynomial, RationalFunction, psi

F = Fraction

#: basis order used by all monomial exponent vectors
BASIS_NAMES = ("z", "z+1", "z-1", "z+2", "2z+1")

#: positions of the basis factors inside exactfield's LAMBDA ordering
_TO_LAMBDA = (0, 2, 1, 3, 4)

_BASIS_POLYS = tuple(
    Polynomial(c) for c in ((0, 1), (1, 1), (-1, 1), (2, 1), (1, 2))
)


class SingularBasisError(RuntimeError):
    """The fixed basis-relation matrix failed its startup invertibility check."""


class NonIntegerExponentError(ArithmeticError):
    """An exponent that is provably integral came out fractional."""


class NotRationalError(ValueError):
    """Conversion of a monomial with fractional data to a rational function."""


@dataclass(frozen=True)
class UnitConst:
    """The constant e^(i*pi*r) * 2^s * 3^u with r normalized into [0, 2)."""

    r: Fraction = F(0)
    s: Fraction = F(0)
    u: Fraction = F(0)

    def __post_init__(self):
        object.__setattr__(self, "r", F(self.r) % 2)
        object.__setattr__(self, "s", F(self.s))
        object.__setattr__(self, "u", F(self.u))

    def __mul__(self, other: "UnitConst") -> "UnitConst":
        return UnitConst(self.r + other.r, self.s + other.s, self.u + other.u)

    def __pow__(self, n) -> "UnitConst":
        n = F(n)
        return UnitConst(self.r * n, self.s * n, self.u * n)

    def inverse(self) -> "UnitConst":
        return UnitConst(-self.r, -self.s, -self.u)

    def is_rational(self) -> bool:
        return self.r in (0, 1) and self.s.denominator == 1 and self.u.denominator == 1

    def as_fraction(self) -> Fraction:
        if not self.is_rational():
            raise NotRationalError(f"unit {self} is not rational")
        sign = -1 if self.r == 1 else 1
        val = F(2) ** int(self.s) * F(3) ** int(self.u)
        return sign * val

    def __str__(self) -> str:
        return f"e^(i*pi*{self.r})*2^({self.s})*3^({self.u})"


_UNIT_ONE = UnitConst()


def _expvec(exps: Iterable) -> tuple:
    v = tuple(F(e) for e in exps)
    if len(v) != 5:
        raise ValueError("expected five exponents")
    return v


@dataclass(frozen=True)
class PhiMonomial:
    """unit * phi_1^e1 * ... * phi_5^e5 with rational exponents."""

    unit: UnitConst
    exps: tuple

    def __post_init__(self):
        object.__setattr__(self, "exps", _expvec(self.exps))

    def __mul__(self, other: "PhiMonomial") -> "PhiMonomial":
        return PhiMonomial(self.unit * other.unit, tuple(a + b for a, b in zip(self.exps, other.exps)))

    def __pow__(self, n) -> "PhiMonomial":
        n = F(n)
        return PhiMonomial(self.unit**n, tuple(e * n for e in self.exps))


@dataclass(frozen=True)
class CuspMonomial:
    """unit * z^e0 (z+1)^e1 (z-1)^e2 (z+2)^e3 (2z+1)^e4 with rational exponents."""

    unit: UnitConst
    exps: tuple

    def __post_init__(self):
        object.__setattr__(self, "exps", _expvec(self.exps))

    def __mul__(self, other: "CuspMonomial") -> "CuspMonomial":
        return CuspMonomial(self.unit * other.unit, tuple(a + b for a, b in zip(self.exps, other.exps)))

    def __truediv__(self, other: "CuspMonomial") -> "CuspMonomial":
        return self * other.inverse()

    def inverse(self) -> "CuspMonomial":
        return CuspMonomial(self.unit.inverse(), tuple(-e for e in self.exps))

    def __pow__(self, n) -> "CuspMonomial":
        n = F(n)
        return CuspMonomial(self.unit**n, tuple(e * n for e in self.exps))

    def is_rational_function(self) -> bool:
        return self.unit.is_rational() and all(e.denominator == 1 for e in self.exps)

    def to_rational_function(self) -> RationalFunction:
        if not self.is_rational_function():
            raise NotRationalError(f"monomial is not a rational function: {self}")
        lam_exps = [0] * 5
        for pos, e in enumerate(self.exps):
            lam_exps[_TO_LAMBDA[pos]] = int(e)
        return RationalFunction.cusp_monomial(self.unit.as_fraction(), lam_exps)

    def __str__(self) -> str:
        body = "*".join(f"({n})^({e})" for n, e in zip(BASIS_NAMES, self.exps) if e)
        return f"{self.unit}" + (f"*{body}" if body else "")


MONOMIAL_ONE = CuspMonomial(_UNIT_ONE, (0, 0, 0, 0, 0))


# ---------------------------------------------------------------------------
# basis relations: each basis factor as a constant times a phi-monomial
# ---------------------------------------------------------------------------

# rows: (phi-exponent vector of the relation, sign, exponent of 2, exponent of 3)
#   z     = -2 phi1 phi2^2 phi5^3 / (phi3 phi4^2)
#   z + 1 = -  phi1^2 phi2 phi5^3 / (phi3^2 phi4)
#   z - 1 = -3 phi1^2 phi2 phi3^2 phi5 / phi4
#   z + 2 =  6 phi1 phi2^2 phi4^2 phi5 / phi3
#   2z+ 1 = -3 phi5^10 / (phi3^4 phi4^4)
_RELATION_ROWS = (
    ((1, 2, -1, -2, 3), True, 1, 0),
    ((2, 1, -2, -1, 3), True, 0, 0),
    ((2, 1, 2, -1, 1), True, 0, 1),
    ((1, 2, -1, 2, 1), False, 1, 1),
    ((0, 0, -4, -4, 10), True, 0, 1),
)


def _invert_matrix(rows):
    n = len(rows)
    aug = [[F(rows[i][j]) for j in range(n)] + [F(int(i == j)) for j in range(n)] for i in range(n)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if aug[r][col]), None)
        if pivot is None:
            raise SingularBasisError("basis relation matrix is singular")
        aug[col], aug[pivot] = aug[pivot], aug[col]
        pv = aug[col][col]
        aug[col] = [x / pv for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


# transpose of the exponent matrix, inverted once at import time
_RT_INV = _invert_matrix([[_RELATION_ROWS[j][0][i] for j in range(5)] for i in range(5)])


def phi_to_cusp(m: PhiMonomial) -> CuspMonomial:
    """Exact conversion of a phi-monomial to a cusp monomial.

    Solves the basis relations for the cusp exponents and folds the
    relation constants, raised to the solved rational powers under the
    principal branch, into the unit.
    """
    x = [sum(_RT_INV[i][j] * m.exps[j] for j in range(5)) for i in range(5)]
    unit = m.unit
    for xa, (_, neg, s2, s3) in zip(x, _RELATION_ROWS):
        if xa:
            unit = unit * UnitConst(-xa if neg else 0, -xa * s2, -xa * s3)
    return CuspMonomial(unit, x)


# ---------------------------------------------------------------------------
# seed images of the extended generators
# ---------------------------------------------------------------------------

_GENERATOR_PHI = {
    "u": PhiMonomial(UnitConst(0, F(-2, 3), 0), (2, 0, 4, 0, -4)),
    "v": PhiMonomial(UnitConst(1, F(4, 3), 0), (0, 2, 0, 4, -4)),
    "tau0": PhiMonomial(_UNIT_ONE, (0, 0, 0, 0, -1)),
    "tau1": PhiMonomial(UnitConst(1, 0, 0), (0, 0, 1, 1, -2)),
    "tau2": PhiMonomial(UnitConst(F(1, 2), F(-2, 3), 0), (-2, -2, -2, -2, 4)),
    "tau3": PhiMonomial(UnitConst(F(1, 4), 0, 0), (0, 0, -1, 0, 1)),
    "tau4": PhiMonomial(UnitConst(F(3, 4), 0, 0), (0, 0, 0, -1, 1)),
}

GENERATORS = tuple(_GENERATOR_PHI)


@lru_cache(maxsize=None)
def x_image(name: str) -> CuspMonomial:
    """Seed image of a generator in {u, v, tau0..tau4} as a cusp monomial."""
    try:
        phim = _GENERATOR_PHI[name]
    except KeyError:
        raise KeyError(f"unknown generator {name!r}; expected one of {GENERATORS}")
    return phi_to_cusp(phim)


def generator_phi(name: str) -> PhiMonomial:
    """Seed image of a generator as a phi-monomial (eta-quotient exponents)."""
    return _GENERATOR_PHI[name]


def seed_q() -> RationalFunction:
    """The seed solution q = z(z+2)/(2z+1)."""
    return CuspMonomial(_UNIT_ONE, (1, 0, 0, 1, -1)).to_rational_function()


def seed_p() -> RationalFunction:
    """The seed momentum p = (2z+1)/(2(1-z)(z+2))."""
    return CuspMonomial(UnitConst(1, -1, 0), (0, 0, -1, -1, 1)).to_rational_function()


# ---------------------------------------------------------------------------
# the normalizing prefactor of a lattice index and its closed forms
# ---------------------------------------------------------------------------


def _binom2(n: int) -> int:
    return n * (n - 1) // 2


def _binom3(n: int) -> int:
    p = n * (n - 1) * (n - 2)
    assert p % 6 == 0
    return p // 6


def l0_of(l: tuple) -> int:
    l1, l2, l3, l4 = l
    return -(l1 + 2 * l2 + l3 + l4)


@lru_cache(maxsize=None)
def prefactor(l: tuple) -> CuspMonomial:
    """Seed image of the normalizing prefactor of the index (l1, l2, l3, l4).

    The u and v exponents are provably even products halved; a fractional
    value would mean a transcription bug, hence the hard error.
    """
    l1, l2, l3, l4 = l
    l0 = l0_of(l)
    sign_exp = (
        _binom3(l1 + 1)
        + _binom3(l3 + 1)
        + _binom3(l4 + 1)
        + (_binom2(l3 + 1) + l1 * l3 + l2) * l4
    )
    i_exp = (
        _binom2(l3 + 1)
        + _binom2(l4 + 1)
        - l1 * l1 * l3
        + l1 * l4 * l4
        + l2
        + l3
        + l4
    )
    two_exp = l0 * (l0 - 1) + l1 * l1 + l3 * l3 + l4 * l4
    cusp = (
        l4 * l4 - l0 * (l0 - 1) - (l0 + l2) * (l2 + l4),
        l3 * l3 - l0 * (l0 - 1) - (l0 + l2) * (l2 + l3),
        (l0 + l2) * (l1 + l4) - (l2 + l3) ** 2 - l3,
        -3 * l2 * (l0 + l2 + l4) - (l0 + l4) * (l4 + 1),
        -l0 * l0 - l1 * (l0 + l1 + 3 * l2 + 1) - l2,
    )
    fu2 = (l1 - l3) * (l1 + l3 + 2 * l4 - 1) + 4 * l2 * (l0 + l2)
    fv2 = (l1 - l4) * (l1 + l4 + 2 * l3 - 1) + 4 * l2 * (l0 + l2)
    if fu2 % 2 or fv2 % 2:
        raise NonIntegerExponentError(f"u/v exponent is fractional at l={l}")
    out = CuspMonomial(UnitConst(sign_exp + F(i_exp, 2), -two_exp, 0), cusp)
    out = out * x_image("u") ** (fu2 // 2) * x_image("v") ** (fv2 // 2)
    out = out * x_image("tau0") ** (l0 + 1)
    for name, e in (("tau1", l1), ("tau2", l2), ("tau3", l3), ("tau4", l4)):
        if e:
            out = out * x_image(name) ** e
    return out


def pph_exponents(l: tuple) -> tuple:
    """Closed-form cusp exponents of the prefactor (basis order)."""
    l1, l2, l3, l4 = l
    l0 = l0_of(l)
    q0, q1, q3, q4 = l0 * l0, l1 * l1, l3 * l3, l4 * l4
    return (
        F(-10 * q0 - q1 - q3 + 14 * q4 - 6 * l0 * l4 + 16 * l0 + 6 * l4 + 2, 12),
        F(-10 * q0 - q1 + 14 * q3 - q4 - 6 * l0 * l3 + 16 * l0 + 6 * l3 + 2, 12),
        F(-6 * q0 - 3 * q1 - 6 * q3 - 3 * q4 + 6 * l0 * l3 - 6 * l3 - 2, 12),
        F(6 * q0 - 3 * q1 - 3 * q3 - 6 * q4 + 6 * l0 * l4 - 12 * l0 - 6 * l4 - 2, 12),
        F(-6 * q0 - 6 * q1 - 3 * q3 - 3 * q4 + 6 * l0 * l1 - 6 * l1 - 2, 12),
    )


# delta(b)/b for each basis factor, precomputed once
_LOGDELTA_BASIS = None


def _logdelta_basis():
    global _LOGDELTA_BASIS
    if _LOGDELTA_BASIS is None:
        p = psi()
        out = []
        for poly in _BASIS_POLYS:
            b = RationalFunction.from_parts(poly)
            out.append(p * b.derivative() / b)
        _LOGDELTA_BASIS = tuple(out)
    return _LOGDELTA_BASIS


def log_delta(m: CuspMonomial) -> RationalFunction:
    """delta(m)/m = sum of exponents times delta(basis)/basis; units drop out."""
    acc = RationalFunction.constant(0)
    for e, ld in zip(m.exps, _logdelta_basis()):
        if e:
            acc = acc + e * ld
    return acc


@lru_cache(maxsize=None)
def dpn(l: tuple) -> RationalFunction:
    """Closed form of delta(prefactor)/prefactor at the index (l1, l2, l3, l4)."""
    l1, l2, l3, l4 = l
    l0 = l0_of(l)
    P = Polynomial
    RF = RationalFunction

    def rf(coeffs):
        return RF.from_parts(P(coeffs))

    # quartic coefficients of the quadratic index terms, ascending in zeta
    acc = (
        rf([-10, -38, 6, 70, 26]) * (-(l0 * l0))
        + rf([-1, -14, 0, 28, 14]) * (-(l1 * l1))
        + rf([1, -10, -36, -10, 1]) * (l3 * l3)
        + rf([-14, -28, 0, 14, 1]) * (l4 * l4)
        # cross terms, kept in factored form (LAMBDA order: z, z-1, z+1, z+2, 2z+1)
        + RF.cusp_monomial(6, (1, 1, 1, 1, 0)) * (l1 * (l0 - 1))
        + RF.cusp_monomial(6, (1, 0, 0, 1, 1)) * (l3 * (l0 - 1))
        - RF.cusp_monomial(6, (0, 1, 1, 0, 1)) * (l4 * (l0 - 1))
        + RF.cusp_monomial(2, (0, 1, 0, 0, 1)) * rf([8, 17, 5]) * l0
        - 2 * rf([1, 1, 1]) ** 2
    )
    return acc / (12 * RF.cusp_monomial(1, (0, 0, 0, 0, 3)))


def sh_table() -> dict:
    """The seven seed log-derivatives delta(X(g))/X(g), one per generator."""
    P = Polynomial
    cube = RationalFunction.cusp_monomial(1, (0, 0, 0, 0, 3))
    qq = RationalFunction.from_parts(P([1, 1, 1]))  # z^2 + z + 1

    def rf(num, dencoef):
        return RationalFunction.from_parts(P(num)) / (dencoef * cube)

    return {
        "u": rf([1, 14, 24, 14, 1], 6),
        "v": rf([-2, -4, -12, -10, 1], 6),
        "tau0": -qq**2 / (6 * cube),
        "tau1": rf([1, 8, 6, -4, -2], 12),
        "tau2": -qq * RationalFunction.from_parts(P([-1, 2, 2])) / (3 * cube),
        "tau3": rf([1, -4, -12, -4, 1], 12),
        "tau4": rf([-2, -4, 6, 8, 1], 12),
    }
