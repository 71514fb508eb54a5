"""
Labeled simple graphs on [n] and the extremal graphs A^i_{n,m}.

Vertices are 1-based everywhere in the public interface. Internally a graph is
a tuple of bitset rows: bit ``v - 1`` of ``rows[u - 1]`` is set iff uv is an edge.
Graph values are immutable; every operation returns a new graph.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from math import comb
from typing import Iterable, Optional, Sequence

from .config import ISOMORPHISM_MAX_N


Edge = tuple[int, int]


def _bit(v: int) -> int:
    return 1 << (v - 1)


def vertices_of(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length())
        mask ^= low
    return out


@dataclass(frozen=True)
class Graph:
    n: int
    rows: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError(f"A graph needs at least one vertex, got n={self.n}.")
        if len(self.rows) != self.n:
            raise ValueError("Row count does not match the vertex count.")
        full = (1 << self.n) - 1
        for u, row in enumerate(self.rows, start=1):
            if row & ~full:
                raise ValueError(f"Row {u} references a vertex outside [{self.n}].")
            if row & _bit(u):
                raise ValueError(f"Loop at vertex {u}.")
            for v in vertices_of(row):
                if not self.rows[v - 1] & _bit(u):
                    raise ValueError(f"Adjacency is not symmetric at {u},{v}.")

    @property
    def vertex_mask(self) -> int:
        return (1 << self.n) - 1

    @property
    def edge_count(self) -> int:
        return sum(row.bit_count() for row in self.rows) // 2

    def has_edge(self, u: int, v: int) -> bool:
        _check_vertex(self, u)
        _check_vertex(self, v)
        return bool(self.rows[u - 1] & _bit(v))


class ExtremalKind(str, enum.Enum):
    A1 = "A1"
    A_M_PLUS_1 = "A_m_plus_1"
    NEITHER = "neither"


@dataclass(frozen=True)
class Recognition:
    kind: ExtremalKind
    witness: frozenset[int] = frozenset()


@dataclass(frozen=True)
class ExtremalParams:
    n: int
    m: int
    i: int

    def __post_init__(self) -> None:
        if self.m < 1 or 2 * self.m > self.n - 2:
            raise ValueError(
                f"Need 1 <= m <= (n-2)/2, got n={self.n}, m={self.m}."
            )
        if not 1 <= self.i <= self.m + 1:
            raise ValueError(f"Need 1 <= i <= m+1, got i={self.i}, m={self.m}.")

    @property
    def hub_size(self) -> int:
        return self.i - 1

    @property
    def clique_size(self) -> int:
        return 2 * self.m - 2 * self.i + 3

    @property
    def independent_size(self) -> int:
        return self.n - 2 * self.m + self.i - 2

    @property
    def expected_edge_count(self) -> int:
        a = self.hub_size
        return comb(a, 2) + a * (self.n - a) + comb(self.clique_size, 2)


@dataclass(frozen=True)
class InducedSubgraph:
    graph: Graph
    labels: tuple[int, ...]

    def lift(self, v: int) -> int:
        return self.labels[v - 1]


def _check_vertex(g: Graph, v: int) -> None:
    if not isinstance(v, int) or not 1 <= v <= g.n:
        raise ValueError(f"Vertex {v} is outside [{g.n}].")


def _from_rows(n: int, rows: Sequence[int]) -> Graph:
    return Graph(n, tuple(rows))


def empty_graph(n: int) -> Graph:
    if n < 1:
        raise ValueError(f"A graph needs at least one vertex, got n={n}.")
    return Graph(n, (0,) * n)


def complete_graph(n: int) -> Graph:
    full = (1 << n) - 1
    return Graph(n, tuple(full & ~_bit(v) for v in range(1, n + 1)))


def add_edge(g: Graph, u: int, v: int) -> Graph:
    _check_vertex(g, u)
    _check_vertex(g, v)
    if u == v:
        raise ValueError(f"Loops are not allowed (vertex {u}).")
    rows = list(g.rows)
    rows[u - 1] |= _bit(v)
    rows[v - 1] |= _bit(u)
    return _from_rows(g.n, rows)


def remove_edge(g: Graph, u: int, v: int) -> Graph:
    _check_vertex(g, u)
    _check_vertex(g, v)
    rows = list(g.rows)
    rows[u - 1] &= ~_bit(v)
    rows[v - 1] &= ~_bit(u)
    return _from_rows(g.n, rows)


def from_edges(n: int, edge_list: Iterable[Edge]) -> Graph:
    if n < 1:
        raise ValueError(f"A graph needs at least one vertex, got n={n}.")
    rows = [0] * n
    for u, v in edge_list:
        if not (1 <= u <= n and 1 <= v <= n):
            raise ValueError(f"Edge {u},{v} is outside [{n}].")
        if u == v:
            raise ValueError(f"Loops are not allowed (vertex {u}).")
        rows[u - 1] |= _bit(v)
        rows[v - 1] |= _bit(u)
    return _from_rows(n, rows)


def edges(g: Graph) -> list[Edge]:
    """Edges as (u, v) with u < v, in lexicographic order."""
    out = []
    for u in range(1, g.n + 1):
        higher = g.rows[u - 1] >> u
        for v in vertices_of(higher):
            out.append((u, u + v))
    return out


def edge_count(g: Graph) -> int:
    return g.edge_count


def complement(g: Graph) -> Graph:
    full = g.vertex_mask
    return _from_rows(
        g.n, [(~row & full) & ~_bit(u) for u, row in enumerate(g.rows, start=1)]
    )


def _part_mask(n: int, part: Iterable[int]) -> int:
    mask = 0
    for v in part:
        if not 1 <= v <= n:
            raise ValueError(f"Vertex {v} is outside [{n}].")
        mask |= _bit(v)
    return mask


def _support(g: Graph) -> int:
    mask = 0
    for u, row in enumerate(g.rows, start=1):
        if row:
            mask |= _bit(u)
    return mask


def _combine(g1: Graph, g2: Graph, part: Optional[Iterable[int]], join: bool) -> Graph:
    if part is None:
        n = g1.n + g2.n
        rows = list(g1.rows) + [row << g1.n for row in g2.rows]
        if join:
            left = g1.vertex_mask
            right = g2.vertex_mask << g1.n
            rows = [row | right for row in rows[: g1.n]] + [
                row | left for row in rows[g1.n :]
            ]
        return _from_rows(n, rows)

    if g1.n != g2.n:
        raise ValueError("Both graphs must live on the same vertex set [n].")
    n = g1.n
    left = _part_mask(n, part)
    right = ((1 << n) - 1) & ~left
    if _support(g1) & ~left or _support(g2) & ~right:
        raise ValueError("Edge supports overlap the vertex split.")
    rows = [a | b for a, b in zip(g1.rows, g2.rows)]
    if join:
        rows = [
            row | (right if left & _bit(u) else left)
            for u, row in enumerate(rows, start=1)
        ]
    return _from_rows(n, rows)


def union(g1: Graph, g2: Graph, part: Optional[Iterable[int]] = None) -> Graph:
    """
    With ``part`` given, both graphs live on [n], g1's edges inside ``part``
    and g2's edges inside its complement. Without it, g2 is relabeled to
    follow g1 (labels n1+1 .. n1+n2).
    """
    return _combine(g1, g2, part, join=False)


def join(g1: Graph, g2: Graph, part: Optional[Iterable[int]] = None) -> Graph:
    return _combine(g1, g2, part, join=True)


def construct_extremal(p: ExtremalParams) -> Graph:
    """A^i_{n,m}: K on [i-1] joined to (K on [2m-i+2] minus [i-1], plus isolated rest)."""
    n = p.n
    hub = (1 << p.hub_size) - 1
    clique_top = 2 * p.m - p.i + 2
    clique = ((1 << clique_top) - 1) & ~hub
    everyone = (1 << n) - 1
    rows = []
    for v in range(1, n + 1):
        b = _bit(v)
        if hub & b:
            row = everyone
        elif clique & b:
            row = hub | clique
        else:
            row = hub
        rows.append(row & ~b)
    return _from_rows(n, rows)


def degree(g: Graph, v: int) -> int:
    _check_vertex(g, v)
    return g.rows[v - 1].bit_count()


def neighbors(g: Graph, v: int) -> frozenset[int]:
    _check_vertex(g, v)
    return frozenset(vertices_of(g.rows[v - 1]))


def degree_sequence(g: Graph) -> tuple[int, ...]:
    return tuple(sorted((row.bit_count() for row in g.rows), reverse=True))


def is_independent(g: Graph, vertex_set: Iterable[int]) -> bool:
    mask = _part_mask(g.n, vertex_set)
    return all(not (g.rows[v - 1] & mask) for v in vertices_of(mask))


def component_masks(g: Graph) -> list[int]:
    seen = 0
    out = []
    for start in range(1, g.n + 1):
        if seen & _bit(start):
            continue
        comp = _bit(start)
        frontier = comp
        while frontier:
            nxt = 0
            for v in vertices_of(frontier):
                nxt |= g.rows[v - 1]
            frontier = nxt & ~comp
            comp |= frontier
        seen |= comp
        out.append(comp)
    return out


def is_connected(g: Graph) -> bool:
    return len(component_masks(g)) == 1


def induced(g: Graph, vertex_set: Iterable[int]) -> InducedSubgraph:
    """Relabels the kept vertices 1..|S| in the given order (sorted if a set is passed)."""
    if isinstance(vertex_set, (set, frozenset)):
        labels = tuple(sorted(vertex_set))
    else:
        labels = tuple(vertex_set)
    if not labels:
        raise ValueError("Cannot induce on an empty vertex set.")
    if len(set(labels)) != len(labels):
        raise ValueError("Induced vertex set has repeated labels.")
    for v in labels:
        _check_vertex(g, v)
    position = {v: idx for idx, v in enumerate(labels, start=1)}
    rows = []
    for v in labels:
        row = 0
        for w in vertices_of(g.rows[v - 1]):
            if w in position:
                row |= _bit(position[w])
        rows.append(row)
    return InducedSubgraph(_from_rows(len(labels), rows), labels)


def lift_edges(sub: InducedSubgraph, edge_list: Iterable[Edge]) -> list[Edge]:
    lifted = []
    for u, v in edge_list:
        a, b = sub.lift(u), sub.lift(v)
        lifted.append((min(a, b), max(a, b)))
    return lifted


def relabel(g: Graph, perm: Sequence[int]) -> Graph:
    """``perm[u - 1]`` is the new label of vertex u."""
    if sorted(perm) != list(range(1, g.n + 1)):
        raise ValueError("Relabeling must be a permutation of [n].")
    return from_edges(g.n, ((perm[u - 1], perm[v - 1]) for u, v in edges(g)))


def graphs_equal(g1: Graph, g2: Graph) -> bool:
    if g1.n != g2.n:
        raise ValueError(f"Vertex sets differ: [{g1.n}] vs [{g2.n}].")
    return g1.rows == g2.rows


def are_isomorphic(g1: Graph, g2: Graph) -> bool:
    """Brute force over vertex permutations; restricted to small n."""
    if g1.n != g2.n:
        return False
    if g1.n > ISOMORPHISM_MAX_N:
        raise ValueError(
            f"Permutation search is limited to n <= {ISOMORPHISM_MAX_N}, got {g1.n}."
        )
    if g1.edge_count != g2.edge_count or degree_sequence(g1) != degree_sequence(g2):
        return False
    if g1.rows == g2.rows:
        return True
    deg1 = [row.bit_count() for row in g1.rows]
    deg2 = [row.bit_count() for row in g2.rows]
    candidates = [
        [w for w in range(1, g2.n + 1) if deg2[w - 1] == deg1[v - 1]]
        for v in range(1, g1.n + 1)
    ]
    target = g2.rows

    def extend(v: int, image: list[int], used: int) -> bool:
        if v > g1.n:
            return True
        earlier = g1.rows[v - 1] & ((1 << (v - 1)) - 1)
        mapped_nbrs = 0
        for u in vertices_of(earlier):
            mapped_nbrs |= _bit(image[u - 1])
        for w in candidates[v - 1]:
            if used & _bit(w):
                continue
            # adjacency to already-placed vertices must match exactly
            if target[w - 1] & used != mapped_nbrs:
                continue
            image.append(w)
            if extend(v + 1, image, used | _bit(w)):
                return True
            image.pop()
        return False

    return extend(1, [], 0)


def recognize_extremal(g: Graph, n: int, m: int) -> Recognition:
    """
    Structural recognition of the two exceptional shapes, up to relabeling:
    the complete split graph K_m v (n-m)K_1 (witness W, the full-degree
    vertices) and the clique K_{2m+1} plus isolated vertices (witness U).
    """
    if m < 1 or 2 * m > n - 2:
        raise ValueError(f"Need 1 <= m <= (n-2)/2, got n={n}, m={m}.")
    if g.n != n:
        raise ValueError(f"Graph has {g.n} vertices, expected {n}.")

    full_degree = 0
    for v, row in enumerate(g.rows, start=1):
        if row.bit_count() == n - 1:
            full_degree |= _bit(v)
    if full_degree.bit_count() == m:
        rest = g.vertex_mask & ~full_degree
        if all(not (g.rows[v - 1] & rest) for v in vertices_of(rest)):
            return Recognition(ExtremalKind.A_M_PLUS_1, frozenset(vertices_of(full_degree)))

    support = _support(g)
    size = 2 * m + 1
    if support.bit_count() == size and g.edge_count == comb(size, 2):
        return Recognition(ExtremalKind.A1, frozenset(vertices_of(support)))
    return Recognition(ExtremalKind.NEITHER)


def is_extremal_copy(g: Graph, m: int, kind: ExtremalKind) -> bool:
    return recognize_extremal(g, g.n, m).kind is kind
