"""Weight functions on trees and the branch duplication / collapse calculus.

A weight function carries one real per vertex (a diagonal entry) and one
positive real per edge (the product of the two opposite off-diagonal
entries); it is exactly the data of a diagonal-similarity class in the set
of combinatorially symmetric matrices with the given tree pattern.  Weights
support two scalar backends, floats and exact Fractions; conversions are
explicit.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import numpy as np

from .trees import RootedTree

FLOAT_WEIGHT_TOL = 1e-9  # absolute tolerance for float weight equality


class NonPositiveEdgeWeight(ValueError):
    pass


class NotABranch(ValueError):
    pass


class BadSplit(ValueError):
    pass


class NotCollapsible(ValueError):
    def __init__(self, vertex: int, detail: str):
        super().__init__(f"branches at vertex {vertex} are not collapsible: {detail}")
        self.vertex = vertex
        self.detail = detail


def _edge_key(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class WeightFn:
    tree: RootedTree
    vertex_weight: dict[int, object]
    edge_weight: dict[tuple[int, int], object]

    def __post_init__(self) -> None:
        t = self.tree
        if set(self.vertex_weight) != set(t.vertices):
            raise ValueError("vertex weights must cover exactly V(T)")
        if set(self.edge_weight) != set(t.edges):
            raise ValueError("edge weights must cover exactly E(T)")
        for e, w in self.edge_weight.items():
            if not w > 0:
                raise NonPositiveEdgeWeight(f"edge {e} has weight {w}")

    def v(self, u: int):
        return self.vertex_weight[u]

    def e(self, u: int, v: int):
        return self.edge_weight[_edge_key(u, v)]

    def as_float(self) -> "WeightFn":
        return WeightFn(
            self.tree,
            {u: float(w) for u, w in self.vertex_weight.items()},
            {e: float(w) for e, w in self.edge_weight.items()},
        )

    def as_fraction(self) -> "WeightFn":
        return WeightFn(
            self.tree,
            {u: Fraction(w) for u, w in self.vertex_weight.items()},
            {e: Fraction(w) for e, w in self.edge_weight.items()},
        )

    def is_exact(self) -> bool:
        return all(
            isinstance(w, (Fraction, int)) for w in self.vertex_weight.values()
        ) and all(isinstance(w, (Fraction, int)) for w in self.edge_weight.values())


@dataclass(frozen=True)
class WeightedMatrix:
    """A concrete representative of a weight class; entries kept exact when
    the weight is exact."""

    tree: RootedTree
    entries: tuple[tuple[object, ...], ...]

    @property
    def n(self) -> int:
        return len(self.entries)

    def to_numpy(self) -> np.ndarray:
        return np.array([[float(x) for x in row] for row in self.entries])

    def weight(self) -> WeightFn:
        t = self.tree
        vw = {u: self.entries[u - 1][u - 1] for u in t.vertices}
        ew = {
            (u, v): self.entries[u - 1][v - 1] * self.entries[v - 1][u - 1]
            for u, v in t.edges
        }
        return WeightFn(t, vw, ew)

    def submatrix(self, vertices) -> "WeightedMatrix":
        from .trees import induced_tree

        sub, back = induced_tree(self.tree, vertices)
        order = [back[i] for i in sub.vertices]
        rows = tuple(
            tuple(self.entries[u - 1][v - 1] for v in order) for u in order
        )
        return WeightedMatrix(sub, rows)


@dataclass(frozen=True)
class DuplicationSplit:
    t: tuple

    def __post_init__(self) -> None:
        if any(not x > 0 for x in self.t):
            raise BadSplit("split entries must be strictly positive")
        s = sum(self.t)
        exact = all(isinstance(x, (Fraction, int)) for x in self.t)
        if exact:
            if s != 1:
                raise BadSplit(f"split must sum to 1, got {s}")
        elif abs(s - 1.0) > 1e-12:
            raise BadSplit(f"split must sum to 1, got {s}")

    @classmethod
    def uniform(cls, parts: int, exact: bool = True) -> "DuplicationSplit":
        if exact:
            return cls(tuple(Fraction(1, parts) for _ in range(parts)))
        return cls(tuple(1.0 / parts for _ in range(parts)))

    def __len__(self) -> int:
        return len(self.t)


def symmetric_representative(w: WeightFn) -> WeightedMatrix:
    """The symmetric matrix with off-diagonal entries sqrt(edge weight);
    cospectral with every member of the weight class.  Always float."""
    t = w.tree
    n = t.n
    rows = [[0.0] * n for _ in range(n)]
    for u in t.vertices:
        rows[u - 1][u - 1] = float(w.v(u))
    for u, v in t.edges:
        x = math.sqrt(float(w.e(u, v)))
        rows[u - 1][v - 1] = rows[v - 1][u - 1] = x
    return WeightedMatrix(t, tuple(tuple(r) for r in rows))


def unit_lower_representative(w: WeightFn) -> WeightedMatrix:
    """The representative with every lower-adjacent entry equal to 1, so the
    partner entry carries the full edge weight; exact for exact weights."""
    t = w.tree
    n = t.n
    zero = w.v(t.root) * 0
    rows = [[zero] * n for _ in range(n)]
    for u in t.vertices:
        rows[u - 1][u - 1] = w.v(u)
    for u, v in t.edges:  # u < v by construction
        rows[v - 1][u - 1] = zero + 1
        rows[u - 1][v - 1] = w.e(u, v)
    return WeightedMatrix(t, tuple(tuple(r) for r in rows))


def spectrum_of(w: WeightFn) -> np.ndarray:
    from .numeric import eigenvalues_sym

    return eigenvalues_sym(symmetric_representative(w).to_numpy())


# ---------------------------------------------------------------------------
# branch signatures


def _branch_signature(w: WeightFn, root: int):
    """Canonical encoding of (shape, vertex weights, internal edge weights)
    of the branch hanging below ``root``; the attaching edge is excluded."""

    def enc(u: int):
        subs = sorted(
            (w.e(u, c), enc(c)) for c in w.tree.children[u]
        )
        return (w.v(u), tuple(subs))

    return enc(root)


def _sig_close(s1, s2, tol: float) -> bool:
    v1, subs1 = s1
    v2, subs2 = s2
    if len(subs1) != len(subs2):
        return False
    if isinstance(v1, float) or isinstance(v2, float):
        if abs(float(v1) - float(v2)) > tol:
            return False
    elif v1 != v2:
        return False
    for (e1, c1), (e2, c2) in zip(subs1, subs2):
        if isinstance(e1, float) or isinstance(e2, float):
            if abs(float(e1) - float(e2)) > tol:
                return False
        elif e1 != e2:
            return False
        if not _sig_close(c1, c2, tol):
            return False
    return True


def collapsible_branches(
    w: WeightFn, v: int, tol: float = FLOAT_WEIGHT_TOL
) -> list[list[int]]:
    """Partition of the branches at v (by their connecting child) into
    maximal groups that are mutually collapsible for w."""
    t = w.tree
    groups: list[tuple[object, list[int]]] = []
    for c in t.children[v]:
        sig = _branch_signature(w, c)
        for gsig, members in groups:
            if _sig_close(gsig, sig, tol):
                members.append(c)
                break
        else:
            groups.append((sig, [c]))
    return [members for _, members in groups]


# ---------------------------------------------------------------------------
# duplication


def duplicate_branch(
    w: WeightFn, v: int, b0: int, split: DuplicationSplit
) -> WeightFn:
    """s-summand duplication of the branch below b0 at v, where s + 1 is the
    split length; attaching edge weights are the split fractions of the old
    one, so spectra gain s copies of the branch spectrum."""
    t = w.tree
    if b0 not in t.children[v]:
        raise NotABranch(f"{b0} is not a child of {v}")
    s = len(split) - 1
    branch = t.subtree_vertices(b0)
    n = t.n
    parent = list(t.parent)
    vw = dict(w.vertex_weight)
    ew = dict(w.edge_weight)
    base_edge = w.e(v, b0)
    ew[_edge_key(v, b0)] = split.t[0] * base_edge
    next_label = n + 1
    for k in range(1, s + 1):
        remap = {}
        for u in branch:
            remap[u] = next_label
            next_label += 1
        for u in branch:
            p = t.parent[u - 1]
            parent.append(v if u == b0 else remap[p])
            vw[remap[u]] = w.v(u)
        for u in branch:
            p = t.parent[u - 1]
            if u != b0:
                ew[_edge_key(remap[u], remap[p])] = w.e(u, p)
        ew[_edge_key(v, remap[b0])] = split.t[k] * base_edge
    return WeightFn(RootedTree(tuple(parent)), vw, ew)


# ---------------------------------------------------------------------------
# collapsing


@dataclass(frozen=True)
class CollapseResult:
    weight: WeightFn
    removed_count: int
    branch_weights: dict[int, WeightFn]  # attach vertex -> weight on P_k
    old_to_new: dict[int, int]

    @property
    def common_branch_weight(self) -> WeightFn | None:
        ws = list(self.branch_weights.values())
        if not ws:
            return None
        first = ws[0]
        for other in ws[1:]:
            if not _path_weights_close(first, other):
                return None
        return first


def _path_weights_close(a: WeightFn, b: WeightFn, tol: float = FLOAT_WEIGHT_TOL) -> bool:
    if a.tree.n != b.tree.n:
        return False
    k = a.tree.n
    for i in range(1, k + 1):
        x, y = a.v(i), b.v(i)
        if isinstance(x, float) or isinstance(y, float):
            if abs(float(x) - float(y)) > tol:
                return False
        elif x != y:
            return False
    for i in range(1, k):
        x, y = a.e(i, i + 1), b.e(i, i + 1)
        if isinstance(x, float) or isinstance(y, float):
            if abs(float(x) - float(y)) > tol:
                return False
        elif x != y:
            return False
    return True


def path_weight_of_chain(w: WeightFn, chain: tuple[int, ...]) -> WeightFn:
    """Weight restricted to a hanging chain, as a weight on P_k rooted at the
    attached end."""
    k = len(chain)
    t = RootedTree(tuple(range(0, k)))  # parent of vertex i+1 is i; root 1
    vw = {i + 1: w.v(chain[i]) for i in range(k)}
    ew = {(i, i + 1): w.e(chain[i - 1], chain[i]) for i in range(1, k)}
    return WeightFn(t, vw, ew)


def collapse_pendent_k_paths(
    w: WeightFn, k: int, tol: float = FLOAT_WEIGHT_TOL
) -> CollapseResult:
    """Collapse every family of pendent k-paths meeting a common vertex to a
    single representative (the smallest-labelled one, which is the branch
    containing the default distinguished child).

    All pendent k-paths at a common vertex must carry identical weights;
    otherwise NotCollapsible is raised.  Attaching edge weights add up, so
    spectra lose one branch-spectrum copy per deleted path.
    """
    from .trees import pendent_paths

    t = w.tree
    paths = pendent_paths(t, k)
    by_vertex: dict[int, list] = {}
    for q in paths:
        by_vertex.setdefault(q.attach_point, []).append(q)
    removed_vertices: set[int] = set()
    removed_count = 0
    branch_weights: dict[int, WeightFn] = {}
    new_edge_at: dict[tuple[int, int], object] = {}
    for v in sorted(by_vertex):
        qs = sorted(by_vertex[v], key=lambda q: q.vertices[0])
        rep = qs[0]
        rep_weight = path_weight_of_chain(w, rep.vertices)
        for q in qs[1:]:
            qw = path_weight_of_chain(w, q.vertices)
            if not _path_weights_close(rep_weight, qw, tol):
                raise NotCollapsible(
                    v, f"paths {rep.vertices} and {q.vertices} carry different weights"
                )
        branch_weights[v] = rep_weight
        total = w.e(v, rep.vertices[0])
        for q in qs[1:]:
            total = total + w.e(v, q.vertices[0])
            removed_vertices.update(q.vertices)
            removed_count += 1
        new_edge_at[_edge_key(v, rep.vertices[0])] = total
    keep = [u for u in t.vertices if u not in removed_vertices]
    old_to_new = {u: i + 1 for i, u in enumerate(keep)}
    parent = []
    for u in keep:
        p = t.parent[u - 1]
        parent.append(0 if p in (0, u) else old_to_new[p])
    new_tree = RootedTree(tuple(parent))
    vw = {old_to_new[u]: w.v(u) for u in keep}
    ew = {}
    for u, vv in t.edges:
        if u in removed_vertices or vv in removed_vertices:
            continue
        val = new_edge_at.get(_edge_key(u, vv), w.e(u, vv))
        ew[_edge_key(old_to_new[u], old_to_new[vv])] = val
    return CollapseResult(
        WeightFn(new_tree, vw, ew), removed_count, branch_weights, old_to_new
    )


# ---------------------------------------------------------------------------
# JSON round trip


def weight_to_json(w: WeightFn) -> dict:
    from .trees import tree_to_json

    def num(x):
        if isinstance(x, Fraction):
            return str(x)
        return x

    return {
        "tree": tree_to_json(w.tree),
        "vertexWeight": {str(u): num(x) for u, x in sorted(w.vertex_weight.items())},
        "edgeWeight": {f"{u}-{v}": num(x) for (u, v), x in sorted(w.edge_weight.items())},
    }


def weight_from_json(data: dict) -> WeightFn:
    from .trees import tree_from_json

    def num(x):
        if isinstance(x, str):
            return Fraction(x)
        return x

    t = tree_from_json(data["tree"])
    vw = {int(u): num(x) for u, x in data["vertexWeight"].items()}
    ew = {}
    for key, x in data["edgeWeight"].items():
        u, v = key.split("-")
        ew[_edge_key(int(u), int(v))] = num(x)
    return WeightFn(t, vw, ew)


def load_weight(path: str | Path) -> WeightFn:
    with open(path) as fh:
        return weight_from_json(json.load(fh))


def save_weight(w: WeightFn, path: str | Path) -> None:
    with open(path, "w") as fh:
        json.dump(weight_to_json(w), fh)
        fh.write("\n")
