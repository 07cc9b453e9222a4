"""The four-parameter lattice of tau polynomials and its closure engine.

Entries t^(k0,k1,k2,k3) are rational functions of zeta computed from three
initial values by two corner recursions, a diagonal bilinear relation and
five symmetries, with every insertion validated against the closed-form
cusp orders.  A breadth-first planner fills boxes of indices and serves
arbitrary targets through orbit canonicalization.

Also here: the finite abelian group of phase automorphisms multiplying the
extended generators by fourth roots of unity, and exact composition of the
two substitution automorphisms acting on the seed algebra (the dicyclic
group checks).
"""

from __future__ import annotations

import threading
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial

from .cuspalg import dpn, l0_of, seed_q
from .exactfield import (
    INF,
    LAMBDA,
    SUB_INV,
    SUB_REFLECT,
    Polynomial,
    RationalFunction,
    t_of_zeta,
)

F = Fraction
RF = RationalFunction

KIndex = tuple  # (k0, k1, k2, k3), even component sum
LIndex = tuple  # (l1, l2, l3, l4)


class OddParityError(ValueError):
    """A k-index with odd component sum is outside the lattice."""


class UnreachableError(RuntimeError):
    """The planner exhausted its budget without deriving the target."""


class InconsistentLatticeError(RuntimeError):
    """Two derivations disagree, or an entry violates its predicted orders."""


class DivisorVanishesError(ZeroDivisionError):
    """A recursion step attempted to divide by a zero lattice value."""


class MissingDependencyError(LookupError):
    """A step was invoked without all of its prerequisite entries."""


class NotPolynomialError(ArithmeticError):
    """A coefficient that must reduce to a polynomial failed to."""


# ---------------------------------------------------------------------------
# index bookkeeping
# ---------------------------------------------------------------------------


def n_of(k: KIndex) -> int:
    total = k[0] + k[1] + k[2] + k[3]
    if total % 2:
        raise OddParityError(f"component sum of {k} is odd")
    return total // 2


def is_valid_k(k) -> bool:
    return len(k) == 4 and (k[0] + k[1] + k[2] + k[3]) % 2 == 0


def k_from_l(l: LIndex) -> KIndex:
    l1, l2, l3, l4 = l
    l0 = l0_of(l)
    return (l0 + l2 + l3, -l2, l0 + l2 + l4, l0 + l1 + l2)


def l_from_k(k: KIndex) -> LIndex:
    n = n_of(k)
    k0, k1, k2, k3 = k
    return (k1 + k3 - n, -k1, k0 + k1 - n, k1 + k2 - n)


@lru_cache(maxsize=None)
def y_const(k: int) -> Fraction:
    """The normalization constants with Y_{k+1} Y_{k-1} = 2(2k+1) Y_k^2."""
    if k >= 0:
        prod = 1
        for j in range(1, k + 1):
            prod *= factorial(2 * j - 1) // factorial(j - 1)
        return F(prod)
    prod = 1
    for j in range(1, -k):
        prod *= factorial(2 * j - 1) // factorial(j - 1)
    sign = -1 if (k * (k + 1) // 2) % 2 else 1
    return sign * F(2) ** (-(2 * k + 1)) * prod


def y_product(k: KIndex) -> Fraction:
    return y_const(k[0]) * y_const(k[1]) * y_const(k[2]) * y_const(k[3])


# ---------------------------------------------------------------------------
# predicted cusp orders and leading-behaviour exponents
# ---------------------------------------------------------------------------


def _ota(k: KIndex) -> int:
    n = n_of(k)
    s = k[1] + k[2]
    return s * (2 * n - s - 1) + max((n + 1) * (s - n), 0)


def _otb(k: KIndex) -> int:
    n = n_of(k)
    s = k[1] + k[2]
    return (s - 1) ** 2 // 4 - s * (n - 1)


def predicted_order(k: KIndex, cusp) -> int:
    """Order of t^(k) at a point of Lambda or at INF.

    Orders at 0 and -2 are the closed forms; the rest are obtained by
    transporting those through the two substitution symmetries.
    """
    n = n_of(k)
    k0, k1, k2, k3 = k
    if cusp == INF:
        return _ota((k0, k1, k3, k2)) - 3 * n * (n - 1)
    cusp = F(cusp)
    if cusp == 0:
        return _ota(k)
    if cusp == -2:
        return _otb(k)
    if cusp == -1:
        return _ota((k2, k1, k0, k3))
    if cusp == 1:
        return n * (n - 1) + _otb((k2, k1, k0, k3))
    if cusp == F(-1, 2):
        return n * (n - 1) + _otb((k0, k1, k3, k2))
    raise ValueError(f"not a lattice cusp: {cusp}")


def _c0(l0: int, l1: int, l3: int, l4: int) -> Fraction:
    return (
        F(l0 * l0, 6)
        - F(l1 * l1, 12)
        - F(l3 * l3, 12)
        + F(l4 * l4, 6)
        - F(l0 * l4, 2)
        + F(l0, 3)
        - F(l4, 2)
        + F(1, 6)
        + max((l0 + 1) * l4, 0)
    )


def _cm2(l0: int, l1: int, l3: int, l4: int) -> Fraction:
    return (
        -F(l0 * l0, 2)
        - F(l1 * l1, 4)
        - F(l3 * l3, 4)
        - F(l4 * l4, 2)
        - F(l0 * l4, 2)
        + F(l4, 2)
        - F(1, 6)
        + (l0 + l4 - 1) ** 2 // 4
    )


def c_exponents(l: LIndex) -> tuple[dict, int]:
    """Leading exponents C_a of the seed tau function at each cusp, plus deg p.

    deg p is minus the sum of all six exponents; it equals the degree of
    the cusp-free remainder of the lattice entry.
    """
    l1, _, l3, l4 = l
    l0 = l0_of(l)
    exps = {
        F(0): _c0(l0, l1, l3, l4),
        F(-1): _c0(l0, l1, l4, l3),
        INF: _c0(l0, l4, l3, l1),
        F(-2): _cm2(l0, l1, l3, l4),
        F(1): _cm2(l0, l1, l4, l3),
        F(-1, 2): _cm2(l0, l4, l3, l1),
    }
    degp = -sum(exps.values())
    assert degp.denominator == 1
    return exps, int(degp)


# ---------------------------------------------------------------------------
# bilinear coefficient functions
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def coeff_Q(l: LIndex) -> RationalFunction:
    l1, _, l3, l4 = l
    l0 = l0_of(l)
    t = t_of_zeta()
    part1 = F((l1 - l4) * (l0 - l3 + 1), 12) * (t - 2)
    mid = (l1 + l4) ** 2 + (F(2 * (l0 - l1) + 1, 2)) * (F(2 * (l3 - l4) - 1, 2)) - F(1, 4)
    return part1 + F(mid, 12) * (t + 1)


@lru_cache(maxsize=None)
def coeff_R(l: LIndex) -> RationalFunction:
    l1, _, l3, l4 = l
    l0 = l0_of(l)
    t = t_of_zeta()
    part1 = F((l1 - l4) * (l0 - l3 + 1), 12) * (t - 2)
    mid = (l0 + l3 + 1) ** 2 + (F(2 * (l0 - l1) + 1, 2)) * (F(2 * (l3 - l4) - 1, 2)) - F(1, 4)
    return part1 + F(mid, 12) * (t + 1)


def coeff_S(l: LIndex) -> RationalFunction:
    l1, _, l3, l4 = l
    l0 = l0_of(l)
    val = F(
        2 * l0 * l0 - l1 * l1 + 2 * l3 * l3 - l4 * l4 + 6 * l0 * l3 + 4 * l0 + 6 * l3 + 2,
        12,
    )
    return RF.constant(val)


_CUBE = RF.cusp_monomial(1, (0, 0, 0, 0, 3))  # (2z+1)^3


def _combination_to_polynomial(comb: RationalFunction, what: str) -> Polynomial:
    scaled = -8 * _CUBE * comb
    if not scaled.is_polynomial():
        raise NotPolynomialError(f"{what} did not reduce to a polynomial")
    return scaled.to_polynomial()


@lru_cache(maxsize=None)
def coeff_A(k: KIndex) -> Polynomial:
    """Corner-recursion coefficient for the +e1 branch, reconstructed exactly."""
    l = l_from_k(k)
    l1, l2, l3, l4 = l
    lp = (l1 + 1, l2 - 1, l3, l4 + 1)
    comb = coeff_R(l) + F(2 * k[0] - 1, 2) * dpn(l) - F(2 * k[0] + 1, 2) * dpn(lp)
    return _combination_to_polynomial(comb, f"A{k}")


@lru_cache(maxsize=None)
def coeff_B(k: KIndex) -> Polynomial:
    """Corner-recursion coefficient for the -e1 branch, reconstructed exactly."""
    l = l_from_k(k)
    l1, l2, l3, l4 = l
    lp = (l1, l2 + 1, l3 - 1, l4)
    comb = coeff_Q(l) + F(2 * k[0] - 1, 2) * dpn(l) - F(2 * k[0] + 1, 2) * dpn(lp)
    return _combination_to_polynomial(comb, f"B{k}")


@lru_cache(maxsize=None)
def nbr_C(k: KIndex) -> Polynomial:
    """The explicit quartic coefficient of the diagonal bilinear relation."""
    k0, k1, k2, k3 = k
    P = Polynomial
    zm1 = P([-1, 1])
    acc = (
        P([9, 50, 116, 110, 39]) * (k0 * k0)
        + P([5, 50, 124, 110, 35]) * (k1 * k1)
        + P([-11, -14, 32, 70, 31]) * (k2 * k2)
        + P([1, 10, 32, 46, 19]) * (k3 * k3)
        + P([-1, 50, 136, 110, 29]) * (2 * k0 * k1)
        + zm1 * P([25, 87, 93, 35]) * (2 * k0 * k2)
        + zm1 * zm1 * P([5, 8, 5]) * (2 * k0 * k3)
        + zm1 * P([3, 17, 19, 9]) * (2 * k1 * k2)
        + zm1 * P([21, 71, 73, 27]) * (2 * k1 * k3)
        + P([-13, -2, 48, 58, 17]) * (2 * k2 * k3)
        + P([-27, -112, -136, -52, 3]) * (-2 * k0)
        + P([31, 112, 128, 52, 1]) * (2 * k1)
        + P([-15, -16, 44, 68, 27]) * (-2 * k2)
        + P([-3, 8, 44, 44, 15]) * (-2 * k3)
        + P([1, 1]) ** 2 * P([2, 1]) * P([1, 2]) * 8
    )
    return acc


def nbr_C_from_identity(k: KIndex) -> Polynomial:
    """Independent route to the quartic coefficient via the log-derivative form."""
    l = l_from_k(k)
    lam = dpn(l)
    t = t_of_zeta()
    from .exactfield import psi

    inner = coeff_S(l) + psi() / t * lam.derivative() - lam
    scaled = 16 * RF.cusp_monomial(1, (0, 0, 0, 2, 2)) * inner
    if not scaled.is_polynomial():
        raise NotPolynomialError(f"C{k} did not reduce to a polynomial")
    return scaled.to_polynomial()


# ---------------------------------------------------------------------------
# recursion products (right-hand sides)
# ---------------------------------------------------------------------------

_KMA_FRONT = RF.cusp_monomial(1, (2, 1, 1, 0, 2))  # z^2 (z+1)(z-1)(2z+1)^2
_KMB_FRONT = RF.cusp_monomial(1, (-2, 1, 1, 2, 2))  # (z+1)(z-1)(z+2)^2 (2z+1)^2 / z^2
_NBR_A = RF.cusp_monomial(1, (1, 2, 2, 1, 1))  # z (z+1)^2 (z-1)^2 (z+2)(2z+1)
_NBR_B = 2 * RF.cusp_monomial(1, (0, 1, 2, 0, 0)) * RF.from_parts(Polynomial([-1, -6, -3, 1]))


def kma_product(k: KIndex, t_k: RationalFunction, t_up: RationalFunction) -> RationalFunction:
    """t^(k-2e0) * t^(k+e0+e1) expressed through t^(k) and t^(k-e0+e1)."""
    k0 = k[0]
    bracket = F(1, 2 * k0 - 1) * t_k * t_up.derivative() - F(1, 2 * k0 + 1) * t_k.derivative() * t_up
    front = RF.cusp_monomial(F(1, 2 * (2 * k0 - 1) * (2 * k0 + 1)), (1, 0, 0, -1, 1))
    a_rf = RF.from_parts(coeff_A(k))
    return _KMA_FRONT * bracket + front * a_rf * t_k * t_up


def kmb_product(k: KIndex, t_k: RationalFunction, t_dn: RationalFunction) -> RationalFunction:
    """t^(k-2e0) * t^(k+e0-e1) expressed through t^(k) and t^(k-e0-e1)."""
    k0 = k[0]
    bracket = F(1, 2 * k0 - 1) * t_k * t_dn.derivative() - F(1, 2 * k0 + 1) * t_k.derivative() * t_dn
    front = RF.cusp_monomial(F(1, 2 * (2 * k0 - 1) * (2 * k0 + 1)), (-3, 0, 0, 1, 1))
    b_rf = RF.from_parts(coeff_B(k))
    return _KMB_FRONT * bracket + front * b_rf * t_k * t_dn


def nbr_product(k: KIndex, t_k: RationalFunction) -> RationalFunction:
    """t^(k+e0+e1) * t^(k-e0-e1) expressed through t^(k) alone."""
    d1 = t_k.derivative()
    d2 = d1.derivative()
    rhs = (
        _NBR_A * (d2 * t_k - d1 * d1)
        + _NBR_B * d1 * t_k
        + F(1, 4) * RF.from_parts(nbr_C(k)) * t_k * t_k
    )
    scale = RF.cusp_monomial(-F(1, (2 * k[0] + 1) * (2 * k[1] + 1)), (2, 0, 0, -2, 0))
    return scale * rhs


# ---------------------------------------------------------------------------
# symmetries
# ---------------------------------------------------------------------------

SYMMETRIES = ("tsa", "tsb", "tsc", "tsd", "tse")


def symmetry_index(sym: str, k: KIndex) -> KIndex:
    k0, k1, k2, k3 = k
    if sym == "tsa":
        return (k1, k0, k3, k2)
    if sym == "tsb":
        return (-k0 - 1, -k1 - 1, -k2 - 1, -k3 - 1)
    if sym == "tsc":
        return (k0, k1, k3, k2)
    if sym == "tsd":
        return (k2, k1, k0, k3)
    if sym == "tse":
        n = n_of(k)
        return (n - k0, n - k1, n - k2, n - k3)
    raise ValueError(f"unknown symmetry {sym!r}")


def apply_symmetry(sym: str, k_src: KIndex, value: RationalFunction) -> tuple[KIndex, RationalFunction]:
    """Map an entry through one of the five symmetries.

    Every map is an involution on indices; the value transforms by the
    printed prefactor (and a substitution for the two coordinate changes).
    """
    kd = symmetry_index(sym, k_src)
    n = n_of(kd)
    K0, K1, K2, K3 = kd
    if sym == "tsa":
        pre = RF.cusp_monomial(
            1,
            (
                (K1 + K2 - n) * (n - 1),
                0,
                0,
                -(K1 + K2 - n) * (n - 1),
                (K0 + K2 - n) * (n - 1),
            ),
        )
        return kd, pre * value
    if sym == "tsb":
        lead = F(-1, 12) ** (n + 1)
        pre = RF.cusp_monomial(
            lead,
            (
                -2 * (K1 + K2 + 2 * n + 3),
                -2 * (K2 + K3 + 1),
                -2 * (K0 + K1 + 2 * n + 3),
                2 * (K1 + K2 + n + 2),
                -2 * (K0 + K2 + 1),
            ),
        )
        return kd, pre * value
    if sym == "tsc":
        pre = RF.cusp_monomial(1, (3 * n * (n - 1), 0, 0, -n * (n - 1), n * (n - 1)))
        return kd, pre * value.substitute(SUB_INV)
    if sym == "tsd":
        pre = RF.cusp_monomial(1, (0, n * (n - 1), 0, -n * (n - 1), 0))
        return kd, pre * value.substitute(SUB_REFLECT)
    if sym == "tse":
        sign = -1 if ((K0 + K1 + n) * (K1 + K3 + n)) % 2 else 1
        yr = y_product((n - K0, n - K1, n - K2, n - K3)) / y_product(kd)
        pre = RF.cusp_monomial(
            sign * yr,
            (
                (K1 + K2 - n) * (n - 1),
                -(K0 + K1 - n) * (n - 1),
                (K0 + K1 - n) * (n - 1),
                -(K1 + K2 - n) * (n - 1),
                -(K1 + K3 - n) * (n - 1),
            ),
        )
        return kd, pre * value
    raise ValueError(f"unknown symmetry {sym!r}")


# ---------------------------------------------------------------------------
# cache and planner
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TauEntry:
    k: KIndex
    value: RationalFunction
    provenance: tuple

    @property
    def factored(self):
        return self.value.factor_over_cusps()


def initial_values() -> dict:
    return {
        (0, 0, 0, 0): RF.constant(1),
        (1, -1, 0, 0): RF.constant(1),
        (0, -1, -1, 0): RF.cusp_monomial(-2, (2, 1, 2, -2, 1)),
    }


def validate_entry(k: KIndex, value: RationalFunction) -> None:
    """Check the value against all predicted orders; raise on any mismatch."""
    if not value:
        raise InconsistentLatticeError(f"zero value at {k}")
    if value.den != (1,):
        raise InconsistentLatticeError(f"pole outside Lambda at {k}")
    for cusp in (*LAMBDA, INF):
        got = value.order_at(cusp)
        want = predicted_order(k, cusp)
        if got != want:
            raise InconsistentLatticeError(
                f"order mismatch at {k}, cusp {cusp}: got {got}, predicted {want}"
            )


_E0P1 = (1, 1, 0, 0)


def _shift(k, d, s=1):
    return (k[0] + s * d[0], k[1] + s * d[1], k[2] + s * d[2], k[3] + s * d[3])


def orbit_indices(k: KIndex) -> set:
    """All indices related to k by the symmetry group (at most 96)."""
    import itertools

    n = n_of(k)
    affine = {
        tuple(k),
        tuple(-c - 1 for c in k),
        tuple(n - c for c in k),
        tuple(c - n - 1 for c in k),
    }
    out = set()
    for base in affine:
        for perm in itertools.permutations(base):
            out.add(perm)
    return out


def canonical_index(k: KIndex) -> KIndex:
    return min(orbit_indices(k), key=lambda c: (max(abs(x) for x in c), sum(abs(x) for x in c), c))


class TauLatticeCache:
    """Memoized lattice with breadth-first closure derivation.

    Entries are immutable once inserted; insertion is serialized behind a
    lock while reads need no coordination.  Every insert is validated
    against the predicted cusp orders, and any re-derivation of a cached
    index must reproduce it exactly.
    """

    def __init__(self, validate: bool = True):
        self.validate = validate
        self._entries: dict = {}
        self._lock = threading.Lock()
        self.rederivations = 0
        for k, v in initial_values().items():
            self._insert(k, v, ("seed",))

    def __contains__(self, k) -> bool:
        return tuple(k) in self._entries

    def __len__(self) -> int:
        return len(self._entries)

    def keys(self):
        return self._entries.keys()

    def get(self, k) -> TauEntry | None:
        return self._entries.get(tuple(k))

    def value(self, k) -> RationalFunction:
        entry = self.get(k)
        if entry is None:
            raise MissingDependencyError(f"no cached entry at {k}")
        return entry.value

    def _insert(self, k, value, provenance) -> bool:
        """Insert or cross-check; returns True when the index is new."""
        k = tuple(k)
        with self._lock:
            existing = self._entries.get(k)
            if existing is not None:
                if existing.value != value:
                    raise InconsistentLatticeError(
                        f"derivations disagree at {k}: {provenance} vs {existing.provenance}"
                    )
                self.rederivations += 1
                return False
            if self.validate:
                validate_entry(k, value)
            self._entries[k] = TauEntry(k, value, provenance)
            return True

    # -- single steps -------------------------------------------------------

    def step_kma(self, pivot: KIndex, direction: int) -> TauEntry:
        """Derive the corner k-2e0 (direction -1) or k+e0+e1 (direction +1)."""
        t_k = self.value(pivot)
        t_up = self.value(_shift(pivot, (-1, 1, 0, 0)))
        product = kma_product(pivot, t_k, t_up)
        if direction > 0:
            known, target = _shift(pivot, (-2, 0, 0, 0)), _shift(pivot, (1, 1, 0, 0))
        else:
            known, target = _shift(pivot, (1, 1, 0, 0)), _shift(pivot, (-2, 0, 0, 0))
        divisor = self.value(known)
        if not divisor:
            raise DivisorVanishesError(f"zero divisor at {known}")
        value = product / divisor
        self._insert(target, value, ("kma", pivot, direction))
        return self._entries[target]

    def step_kmb(self, pivot: KIndex, direction: int) -> TauEntry:
        """Derive the corner k-2e0 (direction -1) or k+e0-e1 (direction +1)."""
        t_k = self.value(pivot)
        t_dn = self.value(_shift(pivot, (-1, -1, 0, 0)))
        product = kmb_product(pivot, t_k, t_dn)
        if direction > 0:
            known, target = _shift(pivot, (-2, 0, 0, 0)), _shift(pivot, (1, -1, 0, 0))
        else:
            known, target = _shift(pivot, (1, -1, 0, 0)), _shift(pivot, (-2, 0, 0, 0))
        divisor = self.value(known)
        if not divisor:
            raise DivisorVanishesError(f"zero divisor at {known}")
        value = product / divisor
        self._insert(target, value, ("kmb", pivot, direction))
        return self._entries[target]

    def step_nbr(self, pivot: KIndex, direction: int) -> TauEntry:
        """Derive the diagonal neighbor at k + direction*(e0+e1)."""
        product = nbr_product(pivot, self.value(pivot))
        known = _shift(pivot, _E0P1, -direction)
        target = _shift(pivot, _E0P1, direction)
        divisor = self.value(known)
        if not divisor:
            raise DivisorVanishesError(f"zero divisor at {known}")
        value = product / divisor
        self._insert(target, value, ("nbr", pivot, direction))
        return self._entries[target]

    def step_symmetry(self, sym: str, k_src: KIndex) -> TauEntry:
        kd, vd = apply_symmetry(sym, tuple(k_src), self.value(k_src))
        self._insert(kd, vd, (sym, tuple(k_src)))
        return self._entries[kd]

    # -- closure ------------------------------------------------------------

    def _try_recursions_at(self, x: KIndex, offer):
        """Enumerate every recursion instance in which x plays a role."""
        e = self._entries
        for pivot in (x, _shift(x, (1, -1, 0, 0)), _shift(x, (2, 0, 0, 0)), _shift(x, (-1, -1, 0, 0))):
            if pivot in e and _shift(pivot, (-1, 1, 0, 0)) in e:
                lo, hi = _shift(pivot, (-2, 0, 0, 0)), _shift(pivot, (1, 1, 0, 0))
                if lo in e:
                    offer("kma", pivot, +1, hi)
                if hi in e:
                    offer("kma", pivot, -1, lo)
        for pivot in (x, _shift(x, (1, 1, 0, 0)), _shift(x, (2, 0, 0, 0)), _shift(x, (-1, 1, 0, 0))):
            if pivot in e and _shift(pivot, (-1, -1, 0, 0)) in e:
                lo, hi = _shift(pivot, (-2, 0, 0, 0)), _shift(pivot, (1, -1, 0, 0))
                if lo in e:
                    offer("kmb", pivot, +1, hi)
                if hi in e:
                    offer("kmb", pivot, -1, lo)
        for pivot in (x, _shift(x, _E0P1, -1), _shift(x, _E0P1, +1)):
            if pivot in e:
                lo, hi = _shift(pivot, _E0P1, -1), _shift(pivot, _E0P1, +1)
                if lo in e:
                    offer("nbr", pivot, +1, hi)
                if hi in e:
                    offer("nbr", pivot, -1, lo)

    def closure(self, in_box, verify_rederive: bool = False, max_entries: int | None = None):
        """Fixpoint of all moves whose conclusions stay inside the box."""
        queue = deque(k for k in self._entries if in_box(k))
        steps = {"kma": self.step_kma, "kmb": self.step_kmb, "nbr": self.step_nbr}

        def offer(kind, pivot, direction, target):
            if not in_box(target):
                return
            if target in self._entries and not verify_rederive:
                return
            fresh = target not in self._entries
            steps[kind](pivot, direction)
            if fresh:
                if max_entries is not None and len(self._entries) > max_entries:
                    raise UnreachableError("entry budget exhausted during closure")
                queue.append(target)

        while queue:
            x = queue.popleft()
            for sym in SYMMETRIES:
                kd = symmetry_index(sym, x)
                if in_box(kd) and (kd not in self._entries or verify_rederive):
                    fresh = kd not in self._entries
                    self.step_symmetry(sym, x)
                    if fresh:
                        if max_entries is not None and len(self._entries) > max_entries:
                            raise UnreachableError("entry budget exhausted during closure")
                        queue.append(kd)
            self._try_recursions_at(x, offer)

    def fill_box(self, radius: int, verify_rederive: bool = False, max_entries: int | None = None):
        """Close the lattice over the box max|k_i| <= radius."""
        self.closure(
            lambda k: all(abs(c) <= radius for c in k),
            verify_rederive=verify_rederive,
            max_entries=max_entries,
        )

    def compute(self, k, budget: int = 250_000) -> TauEntry:
        """Derive t^(k), planning through the orbit-canonical representative."""
        k = tuple(int(c) for c in k)
        if not is_valid_k(k):
            raise OddParityError(f"component sum of {k} is odd")
        if k in self._entries:
            return self._entries[k]
        rep = canonical_index(k)
        if rep not in self._entries:
            base = max(1, max(abs(c) for c in rep))
            for margin in (1, 2, 3, 4):
                radius = base + margin
                if (2 * radius + 1) ** 4 // 2 > budget:
                    raise UnreachableError(f"budget {budget} exhausted before reaching {k}")
                self.fill_box(radius, max_entries=budget)
                if rep in self._entries:
                    break
            else:
                raise UnreachableError(f"search exhausted without reaching {rep}")
        # expand the (finite) symmetry orbit of rep until k appears
        pending = deque([rep])
        seen = {rep}
        while pending and k not in self._entries:
            src = pending.popleft()
            for sym in SYMMETRIES:
                kd = symmetry_index(sym, src)
                if kd not in seen:
                    seen.add(kd)
                    if src in self._entries:
                        self.step_symmetry(sym, src)
                    pending.append(kd)
        if k not in self._entries:
            raise UnreachableError(f"orbit expansion failed to reach {k}")
        return self._entries[k]

    def compute_l(self, l: LIndex, budget: int = 250_000) -> TauEntry:
        return self.compute(k_from_l(tuple(l)), budget=budget)


# ---------------------------------------------------------------------------
# phase automorphisms
# ---------------------------------------------------------------------------

#: generator order for multiplier vectors
PHASE_GENERATORS = ("u", "v", "tau0", "tau1", "tau2", "tau3", "tau4")


@dataclass(frozen=True)
class PhaseAutomorphism:
    """Multiplies each extended generator by i^e; composition adds exponents."""

    vec: tuple  # seven exponents of i, mod 4

    def __post_init__(self):
        object.__setattr__(self, "vec", tuple(v % 4 for v in self.vec))

    def __mul__(self, other: "PhaseAutomorphism") -> "PhaseAutomorphism":
        return PhaseAutomorphism(tuple(a + b for a, b in zip(self.vec, other.vec)))

    def __pow__(self, n: int) -> "PhaseAutomorphism":
        return PhaseAutomorphism(tuple(v * n for v in self.vec))

    def is_identity(self) -> bool:
        return all(v == 0 for v in self.vec)

    def multiplier_exponent(self, generator: str) -> int:
        return self.vec[PHASE_GENERATORS.index(generator)]


PHASE_ID = PhaseAutomorphism((0,) * 7)

PSI_AUTOS = {
    1: PhaseAutomorphism((2, 2, 3, 3, 0, 3, 3)),
    2: PhaseAutomorphism((0, 0, 0, 2, 0, 2, 2)),
    3: PhaseAutomorphism((0, 2, 3, 3, 0, 3, 3)),
    4: PhaseAutomorphism((2, 0, 3, 3, 0, 3, 3)),
}

CHI_AUTOS = {
    1: PhaseAutomorphism((0, 0, 0, 0, 0, 2, 2)),
    2: PhaseAutomorphism((0, 0, 2, 2, 0, 2, 2)),
    3: PhaseAutomorphism((0, 0, 0, 2, 0, 0, 2)),
    4: PhaseAutomorphism((0, 0, 0, 2, 0, 2, 0)),
}


def _b2(n: int) -> int:
    return n * (n - 1) // 2


def phase_X(l: LIndex) -> PhaseAutomorphism:
    """The phase automorphism produced when a substitution crosses T^l."""
    l1, l2, l3, l4 = l
    chi2_exp = l2 * (l1 + l3 + l4) + (l3 - l1) * (l4 - l1) * (l4 - l3) // 2
    return (
        PSI_AUTOS[1] ** l1
        * PSI_AUTOS[2] ** l2
        * PSI_AUTOS[3] ** l3
        * PSI_AUTOS[4] ** l4
        * CHI_AUTOS[1] ** (_b2(l1) + l3 * l4)
        * CHI_AUTOS[3] ** (_b2(l3) + l1 * l4)
        * CHI_AUTOS[4] ** (_b2(l4) + l1 * l3)
        * CHI_AUTOS[2] ** chi2_exp
    )


def phase_X_generator_word(l: LIndex) -> dict:
    """Exponents of the psi/chi generators in the closed form, before reduction."""
    l1, l2, l3, l4 = l
    return {
        ("psi", 1): l1,
        ("psi", 2): l2,
        ("psi", 3): l3,
        ("psi", 4): l4,
        ("chi", 1): _b2(l1) + l3 * l4,
        ("chi", 2): l2 * (l1 + l3 + l4) + (l3 - l1) * (l4 - l1) * (l4 - l3) // 2,
        ("chi", 3): _b2(l3) + l1 * l4,
        ("chi", 4): _b2(l4) + l1 * l3,
    }


def conjugate_word_by_T(word: dict, j: int) -> dict:
    """Image of a psi/chi word under g -> T_j^(-1) g T_j, as a word."""
    out = dict(word)

    def bump(key, amount):
        out[key] = out.get(key, 0) + amount

    for (kind, i), e in word.items():
        if not e:
            continue
        if kind == "psi":
            if i == j == 2:
                continue
            if i == j:
                bump(("chi", i), e)
            elif 2 in (i, j):
                bump(("chi", 2), e)
            else:
                third = ({1, 3, 4} - {i, j}).pop()
                bump(("chi", third), e)
        else:
            if i == j or 2 in (i, j):
                continue
            bump(("chi", 2), e)
    return out


def word_to_phase(word: dict) -> PhaseAutomorphism:
    acc = PHASE_ID
    for (kind, i), e in word.items():
        gen = PSI_AUTOS[i] if kind == "psi" else CHI_AUTOS[i]
        acc = acc * gen**e
    return acc


def ttc_phase(l: LIndex, which: str) -> tuple[int, LIndex]:
    """Power of i and permuted index for the two substitution actions on tau_l."""
    l1, l2, l3, l4 = l
    e = 1 + (2 * l2 - 1) * (l1 + l3 + l4) + (l3 - l1) * (l4 - l1) * (l4 - l3)
    if which == "t1":
        return e % 4, (l4, l2, l3, l1)
    if which == "t3":
        return e % 4, (l1, l2, l4, l3)
    raise ValueError("which must be 't1' or 't3'")


# ---------------------------------------------------------------------------
# exact substitution automorphisms of the seed algebra (dicyclic relations)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class _GenImage:
    i_pow: int  # power of i, mod 4
    coeff: RationalFunction
    exps: tuple  # exponents over the seven generators

    def __post_init__(self):
        object.__setattr__(self, "i_pow", self.i_pow % 4)


def _unit_image(idx: int, i_pow: int = 0) -> _GenImage:
    exps = [0] * 7
    exps[idx] = 1
    return _GenImage(i_pow, RF.constant(1), tuple(exps))


@dataclass(frozen=True)
class SeedAutomorphism:
    """A field automorphism acting by a Moebius map on zeta and monomially
    (with coefficients in Q(i)(zeta)) on the seven extended generators."""

    mobius: tuple  # (a, b, c, d), normalized
    images: tuple  # seven _GenImage

    @staticmethod
    def _norm_mobius(m):
        a, b, c, d = m
        from math import gcd

        g = gcd(gcd(abs(a), abs(b)), gcd(abs(c), abs(d)))
        if g:
            a, b, c, d = a // g, b // g, c // g, d // g
        for x in (a, b, c, d):
            if x:
                if x < 0:
                    a, b, c, d = -a, -b, -c, -d
                break
        return (a, b, c, d)

    @classmethod
    def identity(cls) -> "SeedAutomorphism":
        return cls((1, 0, 0, 1), tuple(_unit_image(i) for i in range(7)))

    @classmethod
    def make(cls, mobius, images) -> "SeedAutomorphism":
        return cls(cls._norm_mobius(tuple(mobius)), tuple(images))

    def act_coeff(self, c: RationalFunction) -> RationalFunction:
        a, b, cc, d = self.mobius
        if (a, b, cc, d) == (1, 0, 0, 1):
            return c
        return c.substitute(self.mobius)

    def __mul__(self, other: "SeedAutomorphism") -> "SeedAutomorphism":
        """Composition (self * other)(x) = self(other(x))."""
        new_images = []
        for g in range(7):
            im = other.images[g]
            i_pow = im.i_pow
            coeff = self.act_coeff(im.coeff)
            exps = [0] * 7
            for j, e in enumerate(im.exps):
                if e:
                    tj = self.images[j]
                    i_pow += tj.i_pow * e
                    coeff = coeff * tj.coeff**e
                    for idx in range(7):
                        exps[idx] += tj.exps[idx] * e
            new_images.append(_GenImage(i_pow, coeff, tuple(exps)))
        a1, b1, c1, d1 = self.mobius
        a2, b2, c2, d2 = other.mobius
        # substitutions compose contravariantly: zeta-image of self*other is
        # other's matrix applied after self's value is substituted in
        m = (
            a2 * a1 + b2 * c1,
            a2 * b1 + b2 * d1,
            c2 * a1 + d2 * c1,
            c2 * b1 + d2 * d1,
        )
        return SeedAutomorphism.make(m, new_images)

    def __pow__(self, n: int) -> "SeedAutomorphism":
        acc = SeedAutomorphism.identity()
        for _ in range(n):
            acc = acc * self
        return acc

    def is_identity(self) -> bool:
        if self.mobius != (1, 0, 0, 1):
            return False
        return all(
            im.i_pow == 0 and im.coeff == RF.constant(1) and im.exps == tuple(int(i == g) for i in range(7))
            for g, im in enumerate(self.images)
        )


def t1_automorphism() -> SeedAutomorphism:
    q = seed_q()
    images = [
        _unit_image(0),  # u -> u
        _GenImage(1, RF.constant(1), (-1, -1, 0, 0, 0, 0, 0)),  # v -> i/(uv)
        _unit_image(2, 1),  # tau0 -> i tau0
        _unit_image(6),  # tau1 -> tau4
        _GenImage(2, q, (0, 0, 0, 0, 1, 0, 0)),  # tau2 -> -q tau2
        _unit_image(5),  # tau3 -> tau3
        _unit_image(3),  # tau4 -> tau1
    ]
    return SeedAutomorphism.make(SUB_INV, images)


def t3_automorphism() -> SeedAutomorphism:
    images = [
        _unit_image(1),  # u -> v
        _unit_image(0),  # v -> u
        _unit_image(2, 1),  # tau0 -> i tau0
        _unit_image(3),  # tau1 -> tau1
        _unit_image(4),  # tau2 -> tau2
        _unit_image(6),  # tau3 -> tau4
        _unit_image(5),  # tau4 -> tau3
    ]
    return SeedAutomorphism.make(SUB_REFLECT, images)


def sigma_automorphism() -> SeedAutomorphism:
    images = [_unit_image(i) for i in range(7)]
    images[2] = _unit_image(2, 2)  # tau0 -> -tau0
    return SeedAutomorphism.make((1, 0, 0, 1), images)


def phase_as_seed_automorphism(p: PhaseAutomorphism) -> SeedAutomorphism:
    return SeedAutomorphism.make(
        (1, 0, 0, 1), tuple(_unit_image(i, p.vec[i]) for i in range(7))
    )
