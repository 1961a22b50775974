"""Path covers, zero forcing and the minimal-cover formulas for hedges.

Everything here works on induced subforests of a rooted tree, since the
combinatorial lemmas are applied to trees with level sets or pendent paths
deleted.  The peeling algorithm extracts a path through an appropriate
vertex (one with at least two adjacent pendent paths), which is always part
of some minimal cover; components with no appropriate vertex are bare paths.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from . import numeric
from .trees import (
    HedgeProfile,
    NotLush,
    PendentPath,
    RootedTree,
    induced_tree,
    is_lush,
    pendent_paths,
    subtree_chain,
)


class BadPath(ValueError):
    pass


class SubtreesNotIndependent(ValueError):
    pass


class SubmatrixSingular(ValueError):
    pass


Adjacency = dict[int, set[int]]


def _adjacency(t: RootedTree, vertices=None) -> Adjacency:
    vs = set(t.vertices) if vertices is None else set(vertices)
    adj: Adjacency = {v: set() for v in vs}
    for u, v in t.edges:
        if u in vs and v in vs:
            adj[u].add(v)
            adj[v].add(u)
    return adj


def _components(adj: Adjacency) -> list[set[int]]:
    seen: set[int] = set()
    comps = []
    for v in sorted(adj):
        if v in seen:
            continue
        comp = {v}
        stack = [v]
        while stack:
            u = stack.pop()
            for w in adj[u]:
                if w not in comp:
                    comp.add(w)
                    stack.append(w)
        seen |= comp
        comps.append(comp)
    return comps


def _chain_from(adj: Adjacency, v: int, start: int) -> list[int] | None:
    """Walk from v into the branch through ``start``; the vertex list if that
    branch is a bare path, else None."""
    chain = [start]
    prev, cur = v, start
    while True:
        nxt = [w for w in adj[cur] if w != prev]
        if not nxt:
            return chain
        if len(nxt) > 1:
            return None
        prev, cur = cur, nxt[0]
        chain.append(cur)


def _cover_component(adj: Adjacency, comp: set[int]) -> list[tuple[int, ...]]:
    """Minimal path cover of one tree component by appropriate-vertex peeling."""
    live = set(comp)
    paths: list[tuple[int, ...]] = []
    while live:
        sub = {v: {w for w in adj[v] if w in live} for v in live}
        appropriate = None
        for v in sorted(live):
            if len(sub[v]) < 3:
                continue
            chains = []
            for w in sorted(sub[v]):
                c = _chain_from(sub, v, w)
                if c is not None:
                    chains.append(c)
                if len(chains) == 2:
                    break
            if len(chains) == 2:
                appropriate = (v, chains)
                break
        if appropriate is None:
            # every remaining component is a bare path; peel them all
            for piece in _components(sub):
                ends = sorted(v for v in piece if len(sub[v] & piece) <= 1)
                path = [ends[0]]
                prev = None
                while len(path) < len(piece):
                    cur = path[-1]
                    nxt = [w for w in sub[cur] if w in piece and w != prev]
                    prev = cur
                    path.append(nxt[0])
                paths.append(tuple(path))
            break
        v, (c1, c2) = appropriate
        path = tuple(reversed(c1)) + (v,) + tuple(c2)
        paths.append(path)
        live -= set(path)
    return paths


@dataclass(frozen=True)
class PathCover:
    paths: tuple[tuple[int, ...], ...]

    def __len__(self) -> int:
        return len(self.paths)

    @property
    def vertices(self) -> frozenset[int]:
        return frozenset(v for p in self.paths for v in p)


def _canonical_paths(paths) -> tuple[tuple[int, ...], ...]:
    out = []
    for p in paths:
        out.append(p if p[0] <= p[-1] else tuple(reversed(p)))
    return tuple(sorted(out))


def path_cover_number(t: RootedTree, vertices=None) -> tuple[int, PathCover]:
    """Minimum number of vertex-disjoint induced paths covering the induced
    subforest, with a witness cover."""
    adj = _adjacency(t, vertices)
    paths = []
    for comp in _components(adj):
        paths.extend(_cover_component(adj, comp))
    cover = PathCover(_canonical_paths(paths))
    return len(cover), cover


def brute_force_path_cover(t: RootedTree, vertices=None) -> int:
    """Exact minimum by exhaustive search over edge subsets of maximum
    degree two (every such subset of a forest is a disjoint union of induced
    paths).  Backtracking with a count bound keeps trees around 20 vertices
    feasible."""
    adj = _adjacency(t, vertices)
    vs = sorted(adj)
    n = len(vs)
    if n == 0:
        return 0
    edges = sorted(
        (u, v) for u in adj for v in adj[u] if u < v
    )
    best = 0
    deg = {v: 0 for v in vs}

    def rec(i: int, taken: int) -> None:
        nonlocal best
        if taken + (len(edges) - i) <= best:
            return
        if i == len(edges):
            best = max(best, taken)
            return
        u, v = edges[i]
        if deg[u] < 2 and deg[v] < 2:
            deg[u] += 1
            deg[v] += 1
            rec(i + 1, taken + 1)
            deg[u] -= 1
            deg[v] -= 1
        rec(i + 1, taken)

    rec(0, 0)
    return n - best


@dataclass(frozen=True)
class ForcingState:
    """Final state of a forcing process: the derived blue set and the map
    recording who forced whom (each vertex forces at most once, and the
    forcing chains trace induced paths)."""

    blue: frozenset[int]
    chains: dict[int, int]

    def chain_paths(self) -> tuple[tuple[int, ...], ...]:
        """The forcing chains as vertex paths, one per chain start."""
        targets = set(self.chains.values())
        paths = []
        for v in sorted(self.blue):
            if v in targets:
                continue
            chain = [v]
            while chain[-1] in self.chains:
                chain.append(self.chains[chain[-1]])
            paths.append(tuple(chain))
        return tuple(sorted(paths))


def forcing_process(t: RootedTree, blue, vertices=None) -> ForcingState:
    """Run the color change rule to a fixpoint, recording the forces.

    The derived set does not depend on the order of forces; the recorded
    chain map is the one obtained by always applying the smallest-labelled
    available force.
    """
    adj = _adjacency(t, vertices)
    b = set(blue)
    if not b <= set(adj):
        raise ValueError("blue set must be a subset of the vertex set")
    chains: dict[int, int] = {}
    changed = True
    while changed:
        changed = False
        for v in sorted(b):
            if v in chains:
                continue  # each vertex forces at most one neighbor
            white = [w for w in adj[v] if w not in b]
            if len(white) == 1:
                chains[v] = white[0]
                b.add(white[0])
                changed = True
                break
    return ForcingState(frozenset(b), chains)


def derived_set(t: RootedTree, blue, vertices=None) -> frozenset[int]:
    """Closure of a blue set under the color change rule (a blue vertex with
    exactly one white neighbor forces it)."""
    return forcing_process(t, blue, vertices).blue


def _forcing_set_from_peeling(adj: Adjacency, comp: set[int]) -> set[int]:
    """A forcing set of size P(component): one end of the path extracted at
    each appropriate vertex, plus one end of every leftover bare path."""
    live = set(comp)
    chosen: set[int] = set()
    while live:
        sub = {v: {w for w in adj[v] if w in live} for v in live}
        appropriate = None
        for v in sorted(live):
            if len(sub[v]) < 3:
                continue
            chains = []
            for w in sorted(sub[v]):
                c = _chain_from(sub, v, w)
                if c is not None:
                    chains.append(c)
                if len(chains) == 2:
                    break
            if len(chains) == 2:
                appropriate = (v, chains)
                break
        if appropriate is None:
            for piece in _components(sub):
                ends = sorted(v for v in piece if len(sub[v] & piece) <= 1)
                chosen.add(ends[0])
            break
        v, (c1, c2) = appropriate
        chosen.add(c1[-1])  # far end of the first pendent path
        live -= set(c1) | {v} | set(c2)
    return chosen


def zero_forcing_number(t: RootedTree, vertices=None) -> tuple[int, frozenset[int]]:
    """Zero forcing number with a witness minimal forcing set.

    For forests Z equals the path cover number; the witness is constructed
    from the peeling order and validated by simulation.
    """
    adj = _adjacency(t, vertices)
    p, _ = path_cover_number(t, vertices)
    blue: set[int] = set()
    for comp in _components(adj):
        blue |= _forcing_set_from_peeling(adj, comp)
    if len(blue) != p:
        raise AssertionError("forcing witness size disagrees with path cover number")
    if derived_set(t, blue, vertices) != set(adj):
        raise AssertionError("constructed forcing set does not force the forest")
    return p, frozenset(blue)


def brute_force_zero_forcing(t: RootedTree, vertices=None) -> int:
    """Exact Z by iterating vertex subsets in size order with early exit."""
    adj = _adjacency(t, vertices)
    vs = sorted(adj)
    full = set(vs)
    if not vs:
        return 0
    for size in range(1, len(vs) + 1):
        for blue in combinations(vs, size):
            if derived_set(t, blue, vertices) == full:
                return size
    raise AssertionError("unreachable: the full set always forces")


def M_formula(prof: HedgeProfile, h: int) -> int:
    """Path cover number of T^(h): the sum of ell_i over i >= h+1 with
    i = h+1 (mod 2); zero for h beyond the height."""
    if h > prof.height:
        return 0
    return sum(
        prof.ell_at(i)
        for i in range(h + 1, prof.height + 2)
        if (i - (h + 1)) % 2 == 0
    )


def Mhat_formula(prof: HedgeProfile, h: int) -> int:
    """Same sum along the period-3 ladder: i >= h+1 with i = h+1 (mod 3)."""
    if h > prof.height:
        return 0
    return sum(
        prof.ell_at(i)
        for i in range(h + 1, prof.height + 2)
        if (i - (h + 1)) % 3 == 0
    )


def sigma_counts(t: RootedTree, h: int, q: PendentPath | None = None) -> tuple[int, int]:
    """Path cover numbers (P(T^(h) minus (Q and V_hat)), P(T^(h) minus V_hat))
    where V_hat collects the vertices of height h+2 (mod 3), height >= h+2.

    For 1 <= h <= H these equal (Mhat(T^(h)) - 1, Mhat(T^(h))); at h = 0 the
    first count can exceed the formula when a height-1 vertex has exactly two
    children.  For h = H the degenerate root path is accepted as q.
    """
    if not is_lush(t):
        raise NotLush("sigma counts are stated for lush hedges")
    height = t.height
    if height < 2:
        raise NotLush("need height >= 2")
    if not 0 <= h <= height:
        raise BadPath(f"h must be in 0..{height}")
    chain = subtree_chain(t)
    tvs = chain.vertices_at(h)
    hm = t.height_map
    sub, back = induced_tree(t, tvs)
    available = [
        PendentPath(tuple(back[v] for v in p.vertices), back[p.attach_point])
        for p in pendent_paths(sub, h + 1)
    ]
    if h == height:
        available = [PendentPath(tuple(sorted(tvs)), 0)]  # degenerate root path
    if q is None:
        if not available:
            raise BadPath("no pendent path of the requested length in T^(h)")
        q = available[0]
    if set(q.vertices) not in [set(p.vertices) for p in available]:
        raise BadPath("q is not a pendent (h+1)-path of T^(h)")
    qset = set(q.vertices)
    vhat = {v for v in tvs if hm[v] >= h + 2 and (hm[v] - (h + 2)) % 3 == 0}
    p_without_q, _ = path_cover_number(t, tvs - vhat - qset)
    p_with_q, _ = path_cover_number(t, tvs - vhat)
    return p_without_q, p_with_q


def nullity_bound_check(t: RootedTree, subtrees, a, tol: float = 1e-8) -> bool:
    """Invertible-subtrees bound: nullity(A) <= P(T minus the subtrees).

    ``subtrees`` is a list of vertex collections; they must be mutually
    independent (no edge of t between two of them) and each principal
    submatrix must be invertible at the given tolerance.
    """
    m = np.asarray(a, dtype=float)
    subs = [sorted(set(s)) for s in subtrees]
    flat = [v for s in subs for v in s]
    if len(flat) != len(set(flat)):
        raise SubtreesNotIndependent("subtrees overlap")
    owner = {}
    for i, s in enumerate(subs):
        for v in s:
            owner[v] = i
    for u, v in t.edges:
        if u in owner and v in owner and owner[u] != owner[v]:
            raise SubtreesNotIndependent(f"edge {u}-{v} joins two subtrees")
    for s in subs:
        idx = [v - 1 for v in s]
        block = m[np.ix_(idx, idx)]
        sv = np.linalg.svd(block, compute_uv=False)
        if sv.size and sv[-1] < tol * max(1.0, float(sv[0])):
            raise SubmatrixSingular(f"submatrix on {s} is singular at tol {tol}")
    rest = set(t.vertices) - set(flat)
    p, _ = path_cover_number(t, rest)
    return numeric.numeric_nullity(m, tol) <= p
