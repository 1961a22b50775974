"""Dense symmetric eigensolving, exact characteristic polynomials and
multiplicity clustering.

The floating-point eigensolver is LAPACK via numpy; the exact routines act
as its independent oracle in the test suite.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .polys import PolyQ
from .spectra import SpectrumMultiset


class NotSymmetric(ValueError):
    pass


class NoConvergence(RuntimeError):
    pass


@dataclass(frozen=True)
class SymTridiag:
    """Symmetric tridiagonal matrix with strictly positive off-diagonal,
    hence simple eigenvalues."""

    diagonal: tuple[float, ...]
    off_diagonal: tuple[float, ...]

    def __post_init__(self) -> None:
        if len(self.off_diagonal) != max(0, len(self.diagonal) - 1):
            raise ValueError("off-diagonal length must be n-1")
        if any(not b > 0 for b in self.off_diagonal):
            raise ValueError("off-diagonal must be strictly positive")

    def dense(self) -> np.ndarray:
        n = len(self.diagonal)
        m = np.diag(np.asarray(self.diagonal, dtype=float))
        for k in range(n - 1):
            m[k, k + 1] = m[k + 1, k] = self.off_diagonal[k]
        return m


def eigenvalues_sym(m: np.ndarray, sym_tol: float = 1e-12) -> np.ndarray:
    """Sorted eigenvalues of a dense symmetric matrix."""
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise NotSymmetric("matrix must be square")
    scale = max(1.0, float(np.max(np.abs(m))))
    if np.max(np.abs(m - m.T)) > sym_tol * scale:
        raise NotSymmetric("matrix is not symmetric within tolerance")
    try:
        return np.sort(np.linalg.eigvalsh(m))
    except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK failure
        raise NoConvergence(str(exc)) from exc


def eigenvalues_tridiag(t: SymTridiag) -> np.ndarray:
    return eigenvalues_sym(t.dense())


def char_poly_tridiag(diag, sup) -> PolyQ:
    """Characteristic polynomial of the matrix with the given diagonal
    (a_n..a_1 top to bottom), superdiagonal (b_n..b_2) and unit subdiagonal,
    via the trailing-submatrix three-term recursion."""
    n = len(diag)
    a = list(reversed(diag))  # a[0] = a_1
    b = list(reversed(sup))  # b[0] = b_2
    p_prev = PolyQ.of(1)
    if n == 0:
        return p_prev
    p_cur = PolyQ.x_minus(a[0])
    for k in range(2, n + 1):
        p_next = PolyQ.x_minus(a[k - 1]) * p_cur - PolyQ.const(b[k - 2]) * p_prev
        p_prev, p_cur = p_cur, p_next
    return p_cur


def _bareiss_det_poly(mat: list[list[PolyQ]]) -> PolyQ:
    """Fraction-free determinant for a matrix of exact polynomials."""
    n = len(mat)
    m = [row[:] for row in mat]
    sign = 1
    prev = PolyQ.of(1)
    for k in range(n - 1):
        if m[k][k].is_zero():
            for i in range(k + 1, n):
                if not m[i][k].is_zero():
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return PolyQ(())
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = m[i][j] * m[k][k] - m[i][k] * m[k][j]
                m[i][j] = num.exact_div(prev)
        prev = m[k][k]
    det = m[n - 1][n - 1]
    return det if sign == 1 else -det


def char_poly_exact(entries) -> PolyQ:
    """Exact characteristic polynomial det(xI - A) of a rational matrix.

    Path (tridiagonal) matrices use the three-term recursion; anything else
    falls back to a fraction-free Bareiss expansion over polynomials.
    """
    n = len(entries)
    rows = [[Fraction(entries[i][j]) for j in range(n)] for i in range(n)]
    is_tridiag = all(
        rows[i][j] == 0 for i in range(n) for j in range(n) if abs(i - j) > 1
    )
    unit_sub = all(rows[i + 1][i] == 1 for i in range(n - 1))
    if is_tridiag and unit_sub:
        diag = [rows[i][i] for i in range(n)]
        sup = [rows[i][i + 1] for i in range(n - 1)]
        return char_poly_tridiag(diag, sup)
    if is_tridiag and n > 1:
        # similarity-invariant reduction: char poly depends only on the
        # products of opposite off-diagonal entries
        diag = [rows[i][i] for i in range(n)]
        sup = [rows[i][i + 1] * rows[i + 1][i] for i in range(n - 1)]
        return char_poly_tridiag(diag, sup)
    mat = [
        [
            PolyQ.x_minus(rows[i][j]) if i == j else PolyQ.const(-rows[i][j])
            for j in range(n)
        ]
        for i in range(n)
    ]
    return _bareiss_det_poly(mat)


def cluster_multiplicities(values, tol: float = 1e-7) -> SpectrumMultiset:
    """Greedy gap clustering of a sorted value list, after normalizing the
    spectrum to unit width."""
    vals = sorted(float(v) for v in values)
    if not vals:
        return SpectrumMultiset(())
    width = vals[-1] - vals[0]
    if width == 0:
        return SpectrumMultiset(((vals[0], len(vals)),))
    groups: list[list[float]] = [[vals[0]]]
    for v in vals[1:]:
        if v - groups[-1][-1] > tol * width:
            groups.append([v])
        else:
            groups[-1].append(v)
    return SpectrumMultiset(
        tuple((sum(g) / len(g), len(g)) for g in groups)
    )


def numeric_nullity(m: np.ndarray, tol: float = 1e-8) -> int:
    """Nullity as the count of singular values below tol * max(1, s_max)."""
    m = np.asarray(m, dtype=float)
    if m.size == 0:
        return 0
    s = np.linalg.svd(m, compute_uv=False)
    cut = tol * max(1.0, float(s[0]))
    return int(np.sum(s < cut))
