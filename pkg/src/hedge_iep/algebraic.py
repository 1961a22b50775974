"""Exact arithmetic in Q[xi], where xi is the smallest positive root of

    x^6 - 3 x^5 - 11 x^4 + 24 x^3 - 6 x^2 - 48 x + 16.

Elements are degree-6 coordinate vectors over the rationals; products reduce
by the sextic.  Sign tests refine the isolating interval of xi by bisection
and bound the coordinate polynomial with interval arithmetic, so comparisons
are exact decisions, never float guesses.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .polys import PolyQ, count_real_roots, poly_xgcd

# ascending coefficients of the defining sextic
SEXTIC = PolyQ.of(16, -48, -6, 24, -11, -3, 1)

# xi^6 in terms of lower powers
_REDUCE = (
    Fraction(-16),
    Fraction(48),
    Fraction(6),
    Fraction(-24),
    Fraction(11),
    Fraction(3),
)

_XI_LO = Fraction(1, 3)
_XI_HI = Fraction(17, 50)

if not (SEXTIC(_XI_LO) > 0) != (SEXTIC(_XI_HI) > 0):  # pragma: no cover
    raise AssertionError("the seed interval must bracket a sign change")

_interval = [_XI_LO, _XI_HI]


def isolating_interval() -> tuple[Fraction, Fraction]:
    return _XI_LO, _XI_HI


def minimal_polynomial() -> PolyQ:
    return SEXTIC


def verify_isolation() -> bool:
    """Sturm counts: no root of the sextic in (0, lo], exactly one in
    (lo, hi], so xi is the smallest positive root."""
    lo, hi = _XI_LO, _XI_HI
    return (
        count_real_roots(SEXTIC, Fraction(0), lo) == 0
        and count_real_roots(SEXTIC, lo, hi) == 1
    )


def refined_xi(eps: Fraction) -> tuple[Fraction, Fraction]:
    """Shrink (and cache) the isolating interval to width below eps."""
    lo, hi = _interval
    sign_lo = 1 if SEXTIC(lo) > 0 else -1
    while hi - lo >= eps:
        mid = (lo + hi) / 2
        v = SEXTIC(mid)
        if v == 0:  # pragma: no cover - xi is irrational
            lo = hi = mid
            break
        if (1 if v > 0 else -1) == sign_lo:
            lo = mid
        else:
            hi = mid
    _interval[0], _interval[1] = lo, hi
    return lo, hi


def xi_approx(eps: Fraction = Fraction(1, 10**15)) -> Fraction:
    lo, hi = refined_xi(Fraction(eps))
    return (lo + hi) / 2


def _coerce(x) -> "QXi | None":
    if isinstance(x, QXi):
        return x
    if isinstance(x, (int, Fraction)):
        return QXi((Fraction(x),) + (Fraction(0),) * 5)
    return None


@dataclass(frozen=True)
class QXi:
    """An element of Q[xi] as coordinates against (1, xi, ..., xi^5)."""

    coords: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if len(self.coords) != 6:
            raise ValueError("need exactly six coordinates")

    @classmethod
    def of(cls, *coords) -> "QXi":
        cs = [Fraction(c) for c in coords]
        cs += [Fraction(0)] * (6 - len(cs))
        return cls(tuple(cs))

    @classmethod
    def xi(cls) -> "QXi":
        return cls.of(0, 1)

    @classmethod
    def from_poly_coeffs(cls, coeffs, denom=1) -> "QXi":
        """Coordinates from descending xi^5..xi^0 coefficients over a common
        denominator (the layout the closed-form values are printed in)."""
        cs = [Fraction(c, denom) for c in reversed(list(coeffs))]
        return cls.of(*cs)

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __add__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return QXi(tuple(a + b for a, b in zip(self.coords, o.coords)))

    __radd__ = __add__

    def __neg__(self) -> "QXi":
        return QXi(tuple(-a for a in self.coords))

    def __sub__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return QXi(tuple(a - b for a, b in zip(self.coords, o.coords)))

    def __rsub__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        prod = [Fraction(0)] * 11
        for i, a in enumerate(self.coords):
            if a == 0:
                continue
            for j, b in enumerate(o.coords):
                if b == 0:
                    continue
                prod[i + j] += a * b
        for d in range(10, 5, -1):
            c = prod[d]
            if c == 0:
                continue
            prod[d] = Fraction(0)
            for i, r in enumerate(_REDUCE):
                prod[d - 6 + i] += c * r
        return QXi(tuple(prod[:6]))

    __rmul__ = __mul__

    def inverse(self) -> "QXi":
        if self.is_zero():
            raise ZeroDivisionError("zero element of Q[xi]")
        p = PolyQ(tuple(self.coords[: self._degree() + 1]))
        g, s, _ = poly_xgcd(p, SEXTIC)
        if g.degree != 0:
            raise ArithmeticError("element shares a factor with the sextic")
        inv = s.scale(1 / g.coeffs[0])
        cs = list(inv.coeffs) + [Fraction(0)] * 6
        out = QXi(tuple(cs[:6]))
        return out

    def _degree(self) -> int:
        for i in range(5, -1, -1):
            if self.coords[i] != 0:
                return i
        return 0

    def __truediv__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, k: int) -> "QXi":
        if k < 0:
            return self.inverse() ** (-k)
        out = QXi.of(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other) -> bool:
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return self.coords == o.coords

    def __hash__(self) -> int:
        return hash(self.coords)

    def _interval_value(self, lo: Fraction, hi: Fraction) -> tuple[Fraction, Fraction]:
        # xi > 0, so monomial bounds are monotone in the endpoints
        vlo = vhi = Fraction(0)
        plo = phi = Fraction(1)
        for c in self.coords:
            a, b = c * plo, c * phi
            if a > b:
                a, b = b, a
            vlo += a
            vhi += b
            plo *= lo
            phi *= hi
        return vlo, vhi

    def sign(self) -> int:
        """Exact sign via interval refinement; zero iff all coordinates are."""
        if self.is_zero():
            return 0
        eps = _XI_HI - _XI_LO
        for _ in range(64):
            lo, hi = refined_xi(eps)
            vlo, vhi = self._interval_value(lo, hi)
            if vlo > 0:
                return 1
            if vhi < 0:
                return -1
            eps /= 2**8
        raise ArithmeticError(
            "sign undecided after deep refinement; is the element truly nonzero?"
        )

    def __lt__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return (self - o).sign() < 0

    def __le__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return (self - o).sign() <= 0

    def __gt__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return (self - o).sign() > 0

    def __ge__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return (self - o).sign() >= 0

    def approx(self, eps: Fraction = Fraction(1, 10**15)) -> Fraction:
        lo, hi = refined_xi(Fraction(eps))
        vlo, vhi = self._interval_value(lo, hi)
        # one more refinement round if the value interval is still wide
        while vhi - vlo > eps:
            lo, hi = refined_xi((hi - lo) / 2**8)
            vlo, vhi = self._interval_value(lo, hi)
        return (vlo + vhi) / 2

    def __float__(self) -> float:
        return float(self.approx())

    def __repr__(self) -> str:
        terms = []
        for i, c in enumerate(self.coords):
            if c == 0:
                continue
            if i == 0:
                terms.append(str(c))
            elif i == 1:
                terms.append(f"{c}*xi")
            else:
                terms.append(f"{c}*xi^{i}")
        return " + ".join(terms) if terms else "0"
