"""Dense univariate polynomials over an exact scalar ring.

Coefficients may be Fractions, integers, field extension elements or
multivariate polynomials; the only requirements are ring arithmetic and an
honest ``== 0`` test (so this type is not meant for floats).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


class NonzeroRemainder(ArithmeticError):
    pass


class ZeroPolynomial(ValueError):
    pass


def _trim(coeffs: list) -> tuple:
    k = len(coeffs)
    while k > 0 and coeffs[k - 1] == 0:
        k -= 1
    return tuple(coeffs[:k])


@dataclass(frozen=True)
class PolyQ:
    """Polynomial with exact coefficients, ascending order."""

    coeffs: tuple

    @classmethod
    def of(cls, *coeffs) -> "PolyQ":
        return cls(_trim([Fraction(c) if isinstance(c, int) else c for c in coeffs]))

    @classmethod
    def const(cls, c) -> "PolyQ":
        return cls(_trim([c]))

    @classmethod
    def x_minus(cls, a) -> "PolyQ":
        return cls(_trim([-a, a * 0 + 1]))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1  # -1 for the zero polynomial

    def is_zero(self) -> bool:
        return not self.coeffs

    def leading(self):
        if self.is_zero():
            raise ZeroPolynomial("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def __add__(self, other: "PolyQ") -> "PolyQ":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = out[i] + c
        return PolyQ(_trim(out))

    def __sub__(self, other: "PolyQ") -> "PolyQ":
        return self + (-other)

    def __neg__(self) -> "PolyQ":
        return PolyQ(tuple(-c for c in self.coeffs))

    def __mul__(self, other: "PolyQ") -> "PolyQ":
        if self.is_zero() or other.is_zero():
            return PolyQ(())
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return PolyQ(_trim(out))

    def scale(self, s) -> "PolyQ":
        return PolyQ(_trim([c * s for c in self.coeffs]))

    def shift_mul_x(self, k: int) -> "PolyQ":
        if self.is_zero():
            return self
        return PolyQ((0,) * k + self.coeffs)

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def derivative(self) -> "PolyQ":
        return PolyQ(_trim([i * c for i, c in enumerate(self.coeffs)][1:]))

    def divmod(self, other: "PolyQ") -> tuple["PolyQ", "PolyQ"]:
        """Division when leading coefficients divide exactly (fields, or a
        monic divisor over a ring)."""
        if other.is_zero():
            raise ZeroPolynomial("division by zero polynomial")
        rem = list(self.coeffs)
        q = [0] * max(0, len(rem) - len(other.coeffs) + 1)
        lc = other.leading()
        d = other.degree
        while len(_trim(rem)) - 1 >= d:
            rem = list(_trim(rem))
            k = len(rem) - 1 - d
            factor = rem[-1] / lc if lc != 1 else rem[-1]
            q[k] = factor
            for i, c in enumerate(other.coeffs):
                rem[k + i] = rem[k + i] - factor * c
        return PolyQ(_trim(q)), PolyQ(_trim(rem))

    def exact_div(self, other: "PolyQ") -> "PolyQ":
        q, r = self.divmod(other)
        if not r.is_zero():
            raise NonzeroRemainder(f"remainder {r} in exact division")
        return q

    def monic(self) -> "PolyQ":
        if self.is_zero():
            return self
        lc = self.leading()
        return self.scale(1 / lc) if lc != 1 else self


def poly_gcd(a: PolyQ, b: PolyQ) -> PolyQ:
    """Monic gcd over a field (Fraction coefficients)."""
    while not b.is_zero():
        a, b = b, a.divmod(b)[1]
    return a.monic() if not a.is_zero() else a


def poly_xgcd(a: PolyQ, b: PolyQ) -> tuple[PolyQ, PolyQ, PolyQ]:
    """Extended gcd: (g, s, t) with s*a + t*b = g, g monic."""
    r0, r1 = a, b
    s0, s1 = PolyQ.of(1), PolyQ.of(0)
    t0, t1 = PolyQ.of(0), PolyQ.of(1)
    while not r1.is_zero():
        q, r = r0.divmod(r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if r0.is_zero():
        return r0, s0, t0
    lc = r0.leading()
    return r0.scale(1 / lc), s0.scale(1 / lc), t0.scale(1 / lc)


def sturm_sequence(p: PolyQ) -> list[PolyQ]:
    seq = [p, p.derivative()]
    while not seq[-1].is_zero():
        rem = seq[-2].divmod(seq[-1])[1]
        if rem.is_zero():
            break
        seq.append(-rem)
    return seq


def _sign_changes(seq: list[PolyQ], x: Fraction) -> int:
    signs = []
    for p in seq:
        v = p(x)
        if v != 0:
            signs.append(1 if v > 0 else -1)
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def count_real_roots(p: PolyQ, lo: Fraction, hi: Fraction) -> int:
    """Number of distinct real roots in (lo, hi] via Sturm's theorem."""
    seq = sturm_sequence(p)
    return _sign_changes(seq, Fraction(lo)) - _sign_changes(seq, Fraction(hi))


def refine_root(p: PolyQ, lo: Fraction, hi: Fraction, eps: Fraction) -> tuple[Fraction, Fraction]:
    """Bisect a sign-changing interval down to width eps."""
    lo, hi = Fraction(lo), Fraction(hi)
    flo = p(lo)
    if flo == 0:
        return lo, lo
    while hi - lo > eps:
        mid = (lo + hi) / 2
        fm = p(mid)
        if fm == 0:
            return mid, mid
        if (fm > 0) == (flo > 0):
            lo = mid
        else:
            hi = mid
    return lo, hi


def real_roots(p: PolyQ, lo: Fraction, hi: Fraction, eps: Fraction) -> list[Fraction]:
    """All distinct real roots in (lo, hi], isolated by Sturm bisection and
    refined to width eps; returns midpoints."""
    seq = sturm_sequence(p)

    def count(a: Fraction, b: Fraction) -> int:
        return _sign_changes(seq, a) - _sign_changes(seq, b)

    out: list[Fraction] = []
    stack = [(Fraction(lo), Fraction(hi))]
    while stack:
        a, b = stack.pop()
        c = count(a, b)
        if c == 0:
            continue
        if c == 1:
            aa, bb = a, b
            fa, fb = p(aa), p(bb)
            if fb == 0:
                out.append(bb)
                continue
            if fa != 0 and (fa > 0) != (fb > 0):
                # simple sign change: refine on p alone, much cheaper than
                # re-evaluating the Sturm sequence
                while bb - aa > eps:
                    mid = (aa + bb) / 2
                    fm = p(mid)
                    if fm == 0:
                        aa = bb = mid
                        break
                    if (fm > 0) == (fa > 0):
                        aa, fa = mid, fm
                    else:
                        bb = mid
            else:
                # tangency at an endpoint or an even crossing: narrow by
                # Sturm counting
                while bb - aa > eps:
                    mid = (aa + bb) / 2
                    if count(aa, mid) == 1:
                        bb = mid
                    else:
                        aa = mid
            out.append((aa + bb) / 2)
            continue
        # pick a split point that is not itself a root so the half-open
        # intervals (a, mid] and (mid, b] partition the root set
        mid = (a + b) / 2
        k = 3
        while p(mid) == 0 and k < 2 * len(p.coeffs) + 10:
            mid = a + (b - a) / k
            k += 1
        stack.append((a, mid))
        stack.append((mid, b))
    return sorted(out)


def is_squarefree(p: PolyQ) -> bool:
    return poly_gcd(p, p.derivative()).degree <= 0
