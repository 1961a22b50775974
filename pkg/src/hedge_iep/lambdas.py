"""The five distinguished eigenvalues, their feasibility regions and the
greedy tridiagonal family built from them.

A tuple (alpha1, alpha2, beta2, beta3, beta4) admits the full coefficient
recipe exactly when it falls in one of twelve disjoint order regions; the
first six are the reverses of the last six, so negating a tuple moves region
k to region k +- 6.  The matrices C_n carry alpha values with period two on
the diagonal and beta values with period three on the superdiagonal.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .polys import NonzeroRemainder, PolyQ
from .trees import RootedTree
from .weights import WeightedMatrix


class DuplicateValues(ValueError):
    pass


class NotInB(ValueError):
    pass


class NotInB3(NotInB):
    pass


class DegenerateSum(ValueError):
    pass


# ascending label chains; aux is the required sign of alpha2+beta2-beta3-beta4
_REGIONS: tuple[tuple[tuple[str, ...], int], ...] = (
    (("b2", "a1", "a2", "b3", "b4"), 0),
    (("b2", "b4", "a1", "a2", "b3"), 0),
    (("b4", "b2", "a1", "a2", "b3"), +1),
    (("b3", "b2", "a1", "a2", "b4"), -1),
    (("b3", "b2", "b4", "a1", "a2"), 0),
    (("b4", "b3", "b2", "a1", "a2"), 0),
    (("b4", "b3", "a2", "a1", "b2"), 0),
    (("b3", "a2", "a1", "b4", "b2"), 0),
    (("b3", "a2", "a1", "b2", "b4"), -1),
    (("b4", "a2", "a1", "b2", "b3"), +1),
    (("a2", "a1", "b4", "b2", "b3"), 0),
    (("a2", "a1", "b2", "b3", "b4"), 0),
)

_LABELS = ("a1", "a2", "b2", "b3", "b4")


def region_of(values) -> int | None:
    """Region index 1..12 of (alpha1, alpha2, beta2, beta3, beta4), or None.

    Boundary points of the auxiliary inequality in regions 3, 4, 9, 10 get
    None; membership is only claimed on the open regions.
    """
    if len(values) != 5:
        raise ValueError("need exactly five values")
    if len(set(values)) != 5:
        raise DuplicateValues("the five values must be pairwise distinct")
    named = dict(zip(_LABELS, values))
    chain = tuple(sorted(_LABELS, key=lambda k: named[k]))
    s = named["a2"] + named["b2"] - named["b3"] - named["b4"]
    for idx, (pattern, aux) in enumerate(_REGIONS, start=1):
        if chain != pattern:
            continue
        if aux == 0:
            return idx
        if aux > 0 and s > 0:
            return idx
        if aux < 0 and s < 0:
            return idx
        return None
    return None


@dataclass(frozen=True)
class LambdaTuple:
    """The distinguished eigenvalues; beta4 (and beta3) may be omitted when
    only the short matrices C_1..C_3 are needed."""

    alpha1: object
    alpha2: object | None = None
    beta2: object | None = None
    beta3: object | None = None
    beta4: object | None = None

    def values(self) -> tuple:
        out = [self.alpha1, self.alpha2, self.beta2, self.beta3, self.beta4]
        return tuple(v for v in out if v is not None)

    def full(self) -> bool:
        return self.beta4 is not None

    def region(self) -> int | None:
        if not self.full():
            return None
        return region_of((self.alpha1, self.alpha2, self.beta2, self.beta3, self.beta4))

    def alpha(self, i: int):
        """alpha_i: period two, alpha1 on odd indices."""
        if i == 1:
            return self.alpha1
        if i == 2:
            return self.alpha2
        return self.alpha1 if i % 2 == 1 else self.alpha2

    def beta(self, i: int):
        """beta_i for i >= 2: period three extending (beta2, beta3, beta4)."""
        if i < 2:
            raise ValueError("beta_i is defined for i >= 2")
        return (self.beta2, self.beta3, self.beta4)[(i - 2) % 3]

    def negated(self) -> "LambdaTuple":
        neg = lambda x: None if x is None else -x
        return LambdaTuple(
            neg(self.alpha1), neg(self.alpha2), neg(self.beta2),
            neg(self.beta3), neg(self.beta4),
        )


def in_B3(lam: LambdaTuple) -> bool:
    """Membership in the projection that drops beta4: four distinct values
    with b2 and b3 positive."""
    vals = (lam.alpha1, lam.alpha2, lam.beta2, lam.beta3)
    if any(v is None for v in vals) or len(set(vals)) != 4:
        return False
    b2 = (lam.beta2 - lam.alpha1) * (lam.alpha1 - lam.alpha2)
    b3 = (lam.beta3 - lam.alpha2) * (lam.beta3 - lam.beta2)
    return b2 > 0 and b3 > 0


def abc_coefficients(lam: LambdaTuple, n: int) -> tuple[list, list]:
    """The diagonal entries a_1..a_n and superdiagonal entries b_2..b_n of
    the greedy family, by the closed forms; every b_i must come out positive."""
    if n < 1:
        raise ValueError("n must be >= 1")
    need = 1 if n == 1 else (3 if n == 2 else (4 if n == 3 else 5))
    vals = lam.values()
    if len(vals) < need:
        raise NotInB(f"n = {n} needs {need} distinguished values")
    if len(set(vals)) != len(vals):
        raise DuplicateValues("distinguished values must be pairwise distinct")
    if n >= 4 and lam.alpha2 + lam.beta2 == lam.beta3 + lam.beta4:
        raise DegenerateSum("alpha2 + beta2 = beta3 + beta4 breaks the recipe")
    a = []
    for i in range(1, n + 1):
        if i == 2:
            a.append(-lam.alpha1 + lam.alpha2 + lam.beta2)
        else:
            a.append(lam.alpha(i))
    b = []
    for i in range(2, n + 1):
        if i == 2:
            bi = (lam.beta2 - lam.alpha1) * (lam.alpha1 - lam.alpha2)
        elif i == 3:
            bi = (lam.beta3 - lam.alpha2) * (lam.beta3 - lam.beta2)
        elif i == 4:
            bi = (
                (lam.beta4 - lam.alpha1)
                * (lam.beta3 - lam.beta4)
                * (lam.alpha2 + lam.beta2 - lam.beta3 - lam.beta4)
            ) / (lam.beta4 - lam.beta2)
        else:
            bi = (lam.beta(i) - lam.alpha1) * (lam.beta(i) - lam.alpha2)
        if not bi > 0:
            err = NotInB3 if n <= 3 else NotInB
            raise err(f"b_{i} = {bi} is not positive")
        b.append(bi)
    return a, b


def build_C(lam: LambdaTuple, n: int) -> WeightedMatrix:
    """The n-by-n greedy path matrix: unit subdiagonal, diagonal
    (a_n, ..., a_1), superdiagonal (b_n, ..., b_2)."""
    a, b = abc_coefficients(lam, n)
    zero = lam.alpha1 * 0
    one = zero + 1
    rows = [[zero] * n for _ in range(n)]
    for i in range(n):
        rows[i][i] = a[n - 1 - i]
    for i in range(n - 1):
        rows[i][i + 1] = b[n - 2 - i]  # b list starts at b_2
        rows[i + 1][i] = one
    path = RootedTree(tuple(range(0, n)))
    return WeightedMatrix(path, tuple(tuple(r) for r in rows))


def char_polys(lam: LambdaTuple, n: int) -> list[PolyQ]:
    """Exact characteristic polynomials p_0..p_n of the trailing submatrices,
    by the three-term recursion; needs exact scalars."""
    a, b = abc_coefficients(lam, n)
    ps = [PolyQ.of(1), PolyQ.x_minus(a[0])]
    for k in range(2, n + 1):
        ps.append(PolyQ.x_minus(a[k - 1]) * ps[k - 1] - PolyQ.const(b[k - 2]) * ps[k - 2])
    return ps


def remainder_poly(lam: LambdaTuple, n: int) -> PolyQ:
    """r_n = p_n / ((x - alpha_n)(x - beta_n)): the level-n eigenvalues that
    are not distinguished ones.  Exact division; a nonzero remainder means
    the tuple is not eligible."""
    if n < 3:
        raise ValueError("remainder polynomials start at n = 3")
    ps = char_polys(lam, n)
    divisor = PolyQ.x_minus(lam.alpha(n)) * PolyQ.x_minus(lam.beta(n))
    try:
        return ps[n].exact_div(divisor)
    except NonzeroRemainder as exc:
        raise NonzeroRemainder(
            f"p_{n} is not divisible by (x - alpha_{n})(x - beta_{n}): {exc}"
        ) from exc


def level_spectra_numeric(lam: LambdaTuple, n: int) -> list[np.ndarray]:
    """Eigenvalues of C_1..C_n as float arrays (via the symmetric image)."""
    a, b = abc_coefficients(lam, n)
    af = [float(x) for x in a]
    bf = [float(x) for x in b]
    out = []
    for k in range(1, n + 1):
        m = np.diag(af[k - 1 :: -1])
        for i in range(k - 1):
            x = np.sqrt(bf[k - 2 - i])
            m[i, i + 1] = m[i + 1, i] = x
        out.append(np.sort(np.linalg.eigvalsh(m)))
    return out


def step_lemma_checks(lam: LambdaTuple, n: int, tol: float = 1e-8) -> list[str]:
    """Check, on the built family, the subpath eigenvalue-step facts:
    consecutive spectra are disjoint, an eigenvalue of C_{k-2} recurs in C_k
    iff a_k equals it, and one of C_{k-3} recurs iff b_k matches the product
    rule.  Returns a list of violations (empty on success)."""
    if n < 4:
        raise ValueError("the checks need n >= 4")
    a, b = abc_coefficients(lam, n)
    return step_lemma_checks_raw([float(x) for x in a], [float(x) for x in b], tol)


def step_lemma_checks_raw(a: list, b: list, tol: float = 1e-8) -> list[str]:
    """Same checks for an arbitrary coefficient family (a_1.., b_2..)."""
    n = len(a)
    specs = [np.array([])]
    for k in range(1, n + 1):
        m = np.diag(a[k - 1 :: -1])
        for i in range(k - 1):
            x = np.sqrt(b[k - 2 - i])
            m[i, i + 1] = m[i + 1, i] = x
        specs.append(np.sort(np.linalg.eigvalsh(m)))
    width = max(1.0, float(specs[n][-1] - specs[n][0]))
    close = lambda x, y: abs(x - y) <= tol * width
    member = lambda x, spec: bool(np.min(np.abs(spec - x)) <= tol * width)
    bad = []
    for k in range(2, n + 1):
        gap = min(abs(x - y) for x in specs[k] for y in specs[k - 1])
        if gap <= tol * width:
            bad.append(f"spec(C_{k-1}) meets spec(C_{k})")
    for k in range(3, n + 1):
        for x in specs[k - 2]:
            if member(x, specs[k]) != close(a[k - 1], x):
                bad.append(f"alpha-step fails at k={k}, value {x}")
    for k in range(4, n + 1):
        for x in specs[k - 3]:
            rule = close(b[k - 1 - 1], (x - a[k - 1]) * (x - a[k - 2]))
            if member(x, specs[k]) != rule:
                bad.append(f"beta-step fails at k={k}, value {x}")
    return bad


# ---------------------------------------------------------------------------
# sampling


def sample_in_region(region: int, rng: np.random.Generator, exact: bool = False) -> LambdaTuple:
    """A random tuple in the given open region; regions with an auxiliary
    inequality are sampled through the gamma = alpha2+beta2-beta4 chart."""
    if not 1 <= region <= 12:
        raise ValueError("region must be 1..12")
    if region > 6:
        return sample_in_region(region - 6, rng, exact).negated()
    if exact:
        raw = sorted(int(x) for x in rng.choice(np.arange(-60, 61), size=5, replace=False))
        den = 3 * int(rng.integers(1, 5))
        vals = [Fraction(x, den) for x in raw]
    else:
        vals = sorted(rng.uniform(-3.0, 3.0, size=5).tolist())
    v1, v2, v3, v4, v5 = vals
    if region == 1:
        lam = LambdaTuple(v2, v3, v1, v4, v5)
    elif region == 2:
        lam = LambdaTuple(v3, v4, v1, v5, v2)
    elif region == 3:
        # chart: beta2 < alpha1 < alpha2 < beta3 < gamma, beta4 = a2+b2-gamma
        lam = LambdaTuple(v2, v3, v1, v4, v3 + v1 - v5)
    elif region == 4:
        # chart: gamma < beta3 < beta2 < alpha1 < alpha2
        lam = LambdaTuple(v4, v5, v3, v2, v5 + v3 - v1)
    elif region == 5:
        lam = LambdaTuple(v4, v5, v2, v1, v3)
    else:
        lam = LambdaTuple(v4, v5, v3, v2, v1)
    if region_of((lam.alpha1, lam.alpha2, lam.beta2, lam.beta3, lam.beta4)) != region:
        raise AssertionError("sampler produced a tuple outside its region")
    return lam
