"""Path-to-hedge construction, its spectrum, critical lists and the
cascade that inverts the construction.

The forward direction distributes a path matrix's edge weights over a hedge;
the spectrum is the union of level spectra weighted by the branching profile.
The recognizer runs the collapse cascade: fix diagonals by height parity,
then collapse pendent h-paths for h = 1..H, insisting at every step that the
hanging chains all carry the weight of the corresponding trailing submatrix.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import covers
from .lambdas import (
    LambdaTuple,
    NotInB,
    NotInB3,
    abc_coefficients,
    build_C,
    char_polys,
    in_B3,
    remainder_poly,
)
from .numeric import cluster_multiplicities, eigenvalues_sym
from .polys import PolyQ, poly_gcd
from .spectra import GapVector, MultiplicityList, SpectrumMultiset, gap_vector
from .trees import (
    HedgeProfile,
    NotLush,
    RootedTree,
    is_hedge,
    is_lush,
    pendent_paths,
    profile,
)
from .weights import (
    DuplicationSplit,
    WeightFn,
    WeightedMatrix,
    collapse_pendent_k_paths,
    symmetric_representative,
)

DEFAULT_TOL = 1e-9


class HeightMismatch(ValueError):
    pass


class BadSplit(ValueError):
    pass


class NotFromConstruction(ValueError):
    def __init__(self, step, detail: str):
        super().__init__(f"cascade fails at step {step}: {detail}")
        self.step = step
        self.detail = detail


class WrongArity(ValueError):
    pass


class HeightTooSmall(ValueError):
    pass


class BadShape(ValueError):
    pass


# ---------------------------------------------------------------------------
# forward construction


def _path_weight(c) -> WeightFn:
    w = c.weight() if isinstance(c, WeightedMatrix) else c
    t = w.tree
    for v in t.vertices:
        if len(t.children[v]) > 1:
            raise HeightMismatch("the source matrix must live on a path")
    return w


def ph_construct(c, t: RootedTree, splits="uniform") -> WeightFn:
    """A member of the path-to-hedge family: vertex weights copied by height
    from the path, each path edge weight split over the children at the
    matching height."""
    w_c = _path_weight(c)
    if not is_hedge(t):
        raise HeightMismatch("target must be a hedge")
    height = t.height
    if w_c.tree.n != height + 1:
        raise HeightMismatch(
            f"path has {w_c.tree.n} vertices but the hedge needs {height + 1}"
        )
    hm = t.height_map
    path_at = {height - (i - 1): i for i in w_c.tree.vertices}  # height -> path vertex
    exact = w_c.is_exact()
    vw = {v: w_c.v(path_at[hm[v]]) for v in t.vertices}
    ew = {}
    for v in t.vertices:
        kids = t.children[v]
        if not kids:
            continue
        if splits == "uniform":
            split = DuplicationSplit.uniform(len(kids), exact=exact)
        else:
            if v not in splits:
                raise BadSplit(f"no split supplied for vertex {v}")
            raw = splits[v]
            split = raw if isinstance(raw, DuplicationSplit) else DuplicationSplit(tuple(raw))
            if len(split) != len(kids):
                raise BadSplit(f"split at {v} has {len(split)} parts for {len(kids)} children")
        i = path_at[hm[v]]
        base = w_c.e(i, i + 1)
        for tk, u in zip(split.t, kids):
            ew[(min(v, u), max(v, u))] = tk * base
    out = WeightFn(t, vw, ew)
    _assert_ph_member(out, w_c)
    return out


def _assert_ph_member(w: WeightFn, w_c: WeightFn, tol: float = 1e-12) -> None:
    """Membership by definition: heights carry the path's vertex weights and
    children edge weights sum to the path's edge weight."""
    t = w.tree
    hm = t.height_map
    height = t.height
    path_at = {height - (i - 1): i for i in w_c.tree.vertices}
    exact = w.is_exact() and w_c.is_exact()

    def close(x, y):
        return x == y if exact else abs(float(x) - float(y)) <= tol * max(1.0, abs(float(y)))

    for v in t.vertices:
        if not close(w.v(v), w_c.v(path_at[hm[v]])):
            raise AssertionError(f"vertex weight at {v} disagrees with the path")
    for v in t.vertices:
        kids = t.children[v]
        if not kids:
            continue
        i = path_at[hm[v]]
        total = w.e(v, kids[0])
        for u in kids[1:]:
            total = total + w.e(v, u)
        if not close(total, w_c.e(i, i + 1)):
            raise AssertionError(f"edge weights at {v} do not sum to the path weight")


def level_submatrix_spectra(c, n: int | None = None) -> list[np.ndarray]:
    """Float spectra of the trailing i-by-i submatrices of a path matrix."""
    w_c = _path_weight(c)
    m = w_c.tree.n
    n = m if n is None else n
    diag = [float(w_c.v(i)) for i in w_c.tree.vertices]
    off = [float(w_c.e(i, i + 1)) for i in range(1, m)]
    out = []
    for i in range(1, n + 1):
        d = diag[m - i :]
        e = [np.sqrt(x) for x in off[m - i :]]
        mat = np.diag(d)
        for k in range(i - 1):
            mat[k, k + 1] = mat[k + 1, k] = e[k]
        out.append(np.sort(np.linalg.eigvalsh(mat)))
    return out


def ph_spectrum(c, prof: HedgeProfile, cluster_tol: float = 1e-7) -> SpectrumMultiset:
    """Spectrum of any member of the family: the union over levels i of
    ell_i copies of the trailing i-by-i submatrix spectrum."""
    specs = level_submatrix_spectra(c, prof.height + 1)
    values = []
    for i in range(1, prof.height + 2):
        li = prof.ell_at(i)
        if li == 0:
            continue
        for v in specs[i - 1]:
            values.extend([float(v)] * li)
    return cluster_multiplicities(values, cluster_tol)


# ---------------------------------------------------------------------------
# critical lists


@dataclass(frozen=True)
class CriticalWitness:
    """Positions in a multiplicity list playing (m1, m2, n2, n3, n4); index
    None marks the zero-multiplicity placeholder for n4."""

    indices: tuple[int | None, ...]
    multiplicities: tuple[int, ...]
    thresholds: tuple[int, ...]


def critical_thresholds(prof: HedgeProfile) -> tuple[int, ...]:
    return (
        covers.M_formula(prof, 0),
        covers.M_formula(prof, 1),
        covers.Mhat_formula(prof, 1),
        covers.Mhat_formula(prof, 2),
        covers.Mhat_formula(prof, 3),
    )


def critical_check(t: RootedTree, m: MultiplicityList) -> CriticalWitness | None:
    """First assignment (in index order) of five list entries meeting the
    critical thresholds, allowing an implicit zero placeholder for the last
    slot when its threshold is zero; None if no assignment works."""
    if not is_lush(t) or t.height < 2:
        raise NotLush("critical lists are defined for lush hedges of height >= 2")
    prof = profile(t)
    thr = critical_thresholds(prof)
    ell3 = prof.ell_at(3)
    entries = list(m.ordered)
    idxs = range(len(entries))

    def candidates(threshold, upper=None):
        for i in idxs:
            v = entries[i]
            if v >= threshold and (upper is None or v < upper):
                yield i

    for i1 in candidates(thr[0]):
        for i2 in candidates(thr[1]):
            if i2 == i1:
                continue
            for i3 in candidates(thr[2]):
                if i3 in (i1, i2):
                    continue
                for i4 in candidates(thr[3]):
                    if i4 in (i1, i2, i3):
                        continue
                    used = {i1, i2, i3, i4}
                    for i5 in candidates(thr[4], upper=ell3):
                        if i5 in used:
                            continue
                        mult5 = (entries[i1], entries[i2], entries[i3], entries[i4], entries[i5])
                        return CriticalWitness((i1, i2, i3, i4, i5), mult5, thr)
                    if thr[4] == 0 and 0 < ell3:
                        mult5 = (entries[i1], entries[i2], entries[i3], entries[i4], 0)
                        return CriticalWitness((i1, i2, i3, i4, None), mult5, thr)
    return None


def forced_fifth_eigenvalue(lam4) -> object:
    """Four high multiplicities force a fifth one; its eigenvalue is
    alpha2 + beta2 - beta3."""
    a1, a2, b2, b3 = lam4
    lam = LambdaTuple(a1, a2, b2, b3)
    if not in_B3(lam):
        raise NotInB3("the four values do not admit the three-level family")
    return a2 + b2 - b3


# ---------------------------------------------------------------------------
# recognizer


@dataclass(frozen=True)
class RecognizeResult:
    lam: LambdaTuple
    region: int | None
    path_weight: WeightFn  # recovered weight of C_{H+1}
    target: WeightedMatrix  # C_{H+1}^Lambda built from the recipe


def _expected_chain_weight(a: list, b: list, h: int):
    """Vertex and edge weights a pendent h-path must carry: the trailing
    h-by-h submatrix, listed from the attached end downwards."""
    diag = [a[h - j] for j in range(1, h + 1)]  # a_h .. a_1
    off = [b[h - j - 1] for j in range(1, h)]  # b_h .. b_2 (b list starts at b_2)
    return diag, off


def recognize(
    w: WeightFn, lam: LambdaTuple, tol: float = DEFAULT_TOL
) -> RecognizeResult:
    """Run the collapse cascade for a designated eigenvalue assignment.

    Verifies the height-parity diagonal conditions, collapses pendent
    h-paths for h = 1..H checking every hanging chain against the trailing
    submatrix weight, and finally matches the leftover path against the full
    recipe matrix.  Raises NotFromConstruction at the first mismatch.
    """
    t = w.tree
    if not is_lush(t) or t.height < 2:
        raise NotLush("the cascade runs on lush hedges of height >= 2")
    height = t.height
    exact = w.is_exact() and all(
        isinstance(v, (Fraction, int)) for v in lam.values()
    )

    def close(x, y):
        return x == y if exact else abs(float(x) - float(y)) <= tol

    try:
        a, b = abc_coefficients(lam, height + 1)
    except (NotInB, ValueError) as exc:
        raise NotFromConstruction(0, f"assignment is not feasible: {exc}") from exc

    hm = t.height_map
    for v in t.vertices:
        hv = hm[v]
        if hv % 2 == 0 and not close(w.v(v), lam.alpha1):
            raise NotFromConstruction(0, f"even-height vertex {v} has diagonal {w.v(v)}")
        if hv % 2 == 1 and hv >= 3 and not close(w.v(v), lam.alpha2):
            raise NotFromConstruction(0, f"odd-height vertex {v} has diagonal {w.v(v)}")

    cur = w
    for h in range(1, height + 1):
        diag, off = _expected_chain_weight(a, b, h)
        chains = pendent_paths(cur.tree, h)
        if not chains:
            raise NotFromConstruction(h, "no pendent paths to collapse")
        for q in chains:
            for pos, u in enumerate(q.vertices):
                if not close(cur.v(u), diag[pos]):
                    raise NotFromConstruction(
                        h, f"chain {q.vertices}: vertex weight {cur.v(u)} != a value"
                    )
            for pos in range(h - 1):
                got = cur.e(q.vertices[pos], q.vertices[pos + 1])
                if not close(got, off[pos]):
                    raise NotFromConstruction(
                        h, f"chain {q.vertices}: edge weight {got} != b value"
                    )
        try:
            result = collapse_pendent_k_paths(cur, h, tol=tol)
        except Exception as exc:
            raise NotFromConstruction(h, f"collapse failed: {exc}") from exc
        cur = result.weight

    # what remains must be the path carrying the full recipe weight
    if cur.tree.n != height + 1:
        raise NotFromConstruction(height, "cascade did not end on the bare path")
    diag, off = _expected_chain_weight(a, b, height + 1)
    for i in range(1, height + 2):
        if not close(cur.v(i), diag[i - 1]):
            raise NotFromConstruction(height, f"final diagonal {cur.v(i)} != a value")
    for i in range(1, height + 1):
        if not close(cur.e(i, i + 1), off[i - 1]):
            raise NotFromConstruction(height, f"final edge {cur.e(i, i + 1)} != b value")

    target = build_C(lam, height + 1)
    _assert_ph_member(w, target.weight() if exact else target.weight().as_float())
    return RecognizeResult(lam, lam.region(), cur, target)


def recognize_search(w: WeightFn, tol: float = DEFAULT_TOL, cluster_tol: float = 1e-7):
    """Recover the eigenvalue assignment from the spectrum alone: enumerate
    the assignments consistent with the critical thresholds and return the
    first for which the cascade succeeds."""
    t = w.tree
    if not is_lush(t) or t.height < 2:
        raise NotLush("the cascade runs on lush hedges of height >= 2")
    prof = profile(t)
    thr = critical_thresholds(prof)
    ell3 = prof.ell_at(3)
    spec = cluster_multiplicities(
        eigenvalues_sym(symmetric_representative(w).to_numpy()), cluster_tol
    )
    vals = spec.values
    mult = {v: m for v, m in spec.entries}

    def options(threshold, upper=None):
        return [v for v in vals if mult[v] >= threshold and (upper is None or mult[v] < upper)]

    beta4_opts: list = options(thr[4], upper=ell3) if thr[4] > 0 else [None]
    failures = []
    for a1 in options(thr[0]):
        for a2 in options(thr[1]):
            for b2 in options(thr[2]):
                for b3 in options(thr[3]):
                    for b4 in beta4_opts:
                        chosen = [a1, a2, b2, b3] + ([b4] if b4 is not None else [])
                        if len(set(chosen)) != len(chosen):
                            continue
                        lam = LambdaTuple(a1, a2, b2, b3, b4)
                        try:
                            return recognize(w, lam, tol)
                        except (NotFromConstruction, NotInB) as exc:
                            failures.append(str(exc))
    raise NotFromConstruction(
        "search",
        f"no eigenvalue assignment admits the cascade "
        f"({len(failures)} candidate(s) failed)" if failures
        else "the multiplicity list does not meet the critical thresholds",
    )


# ---------------------------------------------------------------------------
# the height-3 running example: explicit rational family


def t31_lambda(x: Fraction) -> LambdaTuple:
    """The parametric tuple with beta2 = 1/3, beta3 = 1/9 and the level-4
    remainder roots pinned at 0 and 1; valid on the stated x interval."""
    x = Fraction(x)
    if not (Fraction(1, 3) < x and 27 * x * x - 66 * x + 28 > 0 and x < 1):
        raise ValueError("x outside the admissible interval")
    den = 9 * (4 - 3 * x)
    return LambdaTuple(
        x,
        Fraction(28 - 30 * x, 1) / den,
        Fraction(1, 3),
        Fraction(1, 9),
        (-27 * x * x + 24 * x + 4) / den,
    )


def t31_exact_spectrum(x: Fraction, prof: HedgeProfile) -> SpectrumMultiset:
    """Exact spectrum of the family on a height-3 hedge with the given
    profile; checks that the level-4 remainder is x^2 - x."""
    if prof.height != 3:
        raise HeightMismatch("the explicit family lives on height-3 hedges")
    lam = t31_lambda(x)
    r4 = remainder_poly(lam, 4)
    if r4 != PolyQ.of(0, -1, 1):
        raise AssertionError("level-4 remainder is not x^2 - x")
    delta1 = lam.alpha2 + lam.beta2 - lam.beta3
    l1, l2, l3, l4 = (prof.ell_at(i) for i in (1, 2, 3, 4))
    pairs = [
        (lam.alpha1, l1 + l3),
        (lam.alpha2, l2 + l4),
        (lam.beta2, l2),
        (lam.beta3, l3),
        (delta1, l3),
        (lam.beta4, l4),
        (Fraction(0), l4),
        (Fraction(1), l4),
    ]
    return SpectrumMultiset.from_pairs(pairs)


def t31_constraints_check(values) -> dict[str, bool]:
    """The two linear constraints, the cubic one and the derived
    combination, on eight distinct eigenvalues listed in increasing order."""
    vals = list(values)
    if len(vals) != 8 or len(set(vals)) != 8:
        raise WrongArity("need exactly eight distinct eigenvalues")
    l = dict(zip(range(1, 9), vals))
    lin1 = l[3] + l[6] == l[2] + l[7]
    lin2 = l[3] + l[5] + l[6] == l[1] + l[4] + l[8]
    cubic = (l[2] - l[3]) * (l[5] - l[3]) * (l[7] - l[3]) == (l[1] - l[3]) * (
        l[4] - l[3]
    ) * (l[8] - l[3])
    combo = l[5] + 3 * l[3] + 3 * l[6] == 2 * l[2] + 2 * l[7] + l[1] + l[4] + l[8]
    return {"linear": lin1, "trace": lin2, "cubic": cubic, "combined": combo}


# ---------------------------------------------------------------------------
# conjecture counterexamples


@dataclass(frozen=True)
class SplittingCounterexample:
    lam: LambdaTuple
    realizable: tuple[int, ...]  # unordered multiplicity list, descending
    not_realizable: tuple[int, ...]
    forced_eigenvalue: Fraction
    forced_multiplicity: int
    max_distinct: int

    def report(self) -> str:
        return (
            f"m  = {set_notation(self.realizable)} is realizable;\n"
            f"m' = {set_notation(self.not_realizable)} is critical but has "
            f"{len(self.not_realizable)} entries while any matrix achieving the five "
            f"critical multiplicities has at most {self.max_distinct} distinct "
            f"eigenvalues (the repeated eigenvalue {self.forced_eigenvalue} of "
            f"multiplicity {self.forced_multiplicity} cannot be split)."
        )


def set_notation(ms) -> str:
    return "{" + ", ".join(str(m) for m in ms) + "}"


def _distinct_value_budget(height: int) -> int:
    # one new value at level 1, two at level 2, then i-2 remainder roots plus
    # the new beta at levels 3 and 4
    return 5 + (height - 1) * height // 2


def splitting_counterexample(
    t: RootedTree, lam: LambdaTuple | None = None
) -> SplittingCounterexample:
    """A realizable / non-realizable pair differing by one split multiplicity.

    The realizable list is the generic family list; the split list is still
    critical, so the converse theorem forces the whole spectrum, which has
    too few distinct values.  The genericity of the chosen tuple (no extra
    coincidences between levels) is certified by exact gcd computations.
    """
    if not is_lush(t):
        raise NotLush("need a lush hedge")
    prof = profile(t)
    height = prof.height
    if height < 3:
        raise HeightTooSmall("the split needs ell_3 >= 2, so height >= 3")
    if lam is None:
        lam = LambdaTuple(
            Fraction(0), Fraction(1), Fraction(-1), Fraction(2), Fraction(3)
        )
    ps = char_polys(lam, height + 1)
    distinguished = {1: [lam.alpha1], 2: [lam.alpha2, lam.beta2]}
    for i in range(3, height + 2):
        distinguished[i] = [lam.alpha(i), lam.beta(i)]
    rs = {i: remainder_poly(lam, i) for i in range(3, height + 2)}
    # genericity: remainder roots never hit distinguished values ...
    all_distinguished = set(lam.values())
    for i, r in rs.items():
        for v in all_distinguished:
            if r(v) == 0:
                raise AssertionError(f"tuple is not generic: r_{i}({v}) = 0")
    # ... and remainder polynomials share no roots across levels
    for i in rs:
        for j in rs:
            if i < j and poly_gcd(rs[i], rs[j]).degree > 0:
                raise AssertionError(f"tuple is not generic: r_{i}, r_{j} share a root")
    alpha1_mult = sum(prof.ell_at(i) for i in range(1, height + 2) if i % 2 == 1)
    alpha2_mult = sum(prof.ell_at(i) for i in range(2, height + 2) if i % 2 == 0)
    entries = [alpha1_mult, alpha2_mult]
    for j in (2, 3, 4):
        entries.append(covers.Mhat_formula(prof, j - 1))
    delta1 = lam.alpha2 + lam.beta2 - lam.beta3
    forced_mult = prof.ell_at(3)
    for i in range(3, height + 2):
        entries.extend([prof.ell_at(i)] * (i - 2))
    m = tuple(sorted(entries, reverse=True))
    budget = _distinct_value_budget(height)
    if len(m) != budget:
        raise AssertionError("generic list length disagrees with the level budget")
    # split the delta_1 multiplicity (one of the ell_3 entries)
    entries_prime = list(m)
    entries_prime.remove(forced_mult)
    entries_prime.extend([forced_mult - 1, 1])
    m_prime = tuple(sorted(entries_prime, reverse=True))
    if critical_check(t, MultiplicityList(m_prime)) is None:
        raise AssertionError("split list lost the critical property")
    if len(m_prime) <= budget:
        raise AssertionError("split list does not exceed the distinct-value budget")
    return SplittingCounterexample(
        lam, m, m_prime, delta1, forced_mult, budget
    )


@dataclass(frozen=True)
class ZeroOneReport:
    child_counts: dict[int, int]
    critical_list: tuple[int, ...]
    contradiction: bool

    def report(self) -> str:
        if self.contradiction:
            return (
                f"height-1 child counts {sorted(self.child_counts.values())} are not "
                f"all equal, but a realization of {set_notation(self.critical_list)} "
                "with unit off-diagonal entries would force the squared path entry "
                "to equal every count at once"
            )
        return "all height-1 child counts agree; the zero-one test is inconclusive"


def zero_one_counterexample_check(t: RootedTree) -> ZeroOneReport:
    """Unit off-diagonal entries force |children(z)| to be the same for all
    height-1 vertices z; report the contradiction when the counts differ."""
    if not is_lush(t) or t.height != 2:
        raise BadShape("the zero-one test runs on lush hedges of height 2")
    prof = profile(t)
    hm = t.height_map
    counts = {v: len(t.children[v]) for v in t.vertices if hm[v] == 1}
    l1, l2, l3 = prof.ell
    critical = tuple(sorted((l1 + l3, l2, l2, 1, 1), reverse=True))
    return ZeroOneReport(counts, critical, len(set(counts.values())) > 1)


# re-exported for API completeness
__all__ = [
    "BadShape",
    "BadSplit",
    "CriticalWitness",
    "GapVector",
    "HeightMismatch",
    "HeightTooSmall",
    "MultiplicityList",
    "NotFromConstruction",
    "RecognizeResult",
    "SpectrumMultiset",
    "SplittingCounterexample",
    "WrongArity",
    "ZeroOneReport",
    "critical_check",
    "critical_thresholds",
    "forced_fifth_eigenvalue",
    "gap_vector",
    "level_submatrix_spectra",
    "ph_construct",
    "ph_spectrum",
    "recognize",
    "recognize_search",
    "splitting_counterexample",
    "t31_constraints_check",
    "t31_exact_spectrum",
    "t31_lambda",
    "zero_one_counterexample_check",
]
