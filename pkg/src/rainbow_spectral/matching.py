"""
Matchings, rainbow matchings, and the two constructive procedures for
families of exceptional graphs (distinct full-degree sets / distinct cliques).
"""

from __future__ import annotations

import functools
import itertools
import logging
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import networkx as nx

from .graph_core import Edge, ExtremalKind, Graph, edges, recognize_extremal
from .graph_io import to_networkx


_LOGGER = logging.getLogger(__name__)


class AllMembersEqual(ValueError):
    pass


class NotExtremalFamily(ValueError):
    pass


@dataclass(frozen=True)
class GraphFamily:
    n: int
    members: tuple[Graph, ...]

    def __post_init__(self) -> None:
        if not self.members:
            raise ValueError("A family needs at least one member.")
        for idx, g in enumerate(self.members, start=1):
            if g.n != self.n:
                raise ValueError(f"Member {idx} has {g.n} vertices, expected {self.n}.")

    @classmethod
    def of(cls, graphs: Iterable[Graph]) -> "GraphFamily":
        members = tuple(graphs)
        if not members:
            raise ValueError("A family needs at least one member.")
        return cls(members[0].n, members)

    @property
    def size(self) -> int:
        return len(self.members)


@dataclass(frozen=True)
class RainbowMatching:
    """``picks`` holds (member index, edge) pairs; member indices are 1-based."""

    picks: tuple[tuple[int, Edge], ...]

    def violations(self, family: GraphFamily) -> list[str]:
        problems = []
        indices = [idx for idx, _ in self.picks]
        if len(set(indices)) != len(indices):
            problems.append("member indices repeat")
        if sorted(indices) != list(range(1, family.size + 1)):
            problems.append("not exactly one pick per member")
        used = 0
        for idx, (u, v) in self.picks:
            if not 1 <= idx <= family.size:
                problems.append(f"member index {idx} out of range")
                continue
            if u == v or not family.members[idx - 1].has_edge(u, v):
                problems.append(f"{u}-{v} is not an edge of member {idx}")
            mask = (1 << (u - 1)) | (1 << (v - 1))
            if used & mask:
                problems.append(f"edge {u}-{v} of member {idx} reuses a vertex")
            used |= mask
        return problems

    def is_valid_for(self, family: GraphFamily) -> bool:
        return not self.violations(family)


@dataclass(frozen=True)
class MatchingResult:
    size: int
    edges: tuple[Edge, ...]


@dataclass(frozen=True)
class HallResult:
    transversal: Optional[tuple[int, ...]] = None
    deficient: Optional[frozenset[int]] = None

    @property
    def ok(self) -> bool:
        return self.transversal is not None


def max_matching(g: Graph) -> MatchingResult:
    chosen = nx.max_weight_matching(to_networkx(g), maxcardinality=True)
    pairs = sorted((min(u, v), max(u, v)) for u, v in chosen)
    return MatchingResult(len(pairs), tuple(pairs))


def _greedy_matching(rows: Sequence[int]) -> int:
    used = 0
    size = 0
    for u, row in enumerate(rows):
        if used >> u & 1:
            continue
        free = row & ~used
        if free:
            v = (free & -free).bit_length() - 1
            used |= (1 << u) | (1 << v)
            size += 1
    return size


def matching_number_rows(rows: Sequence[int], cap: Optional[int] = None) -> int:
    """Exact matching number by branch-and-bound over vertex masks; stops at ``cap``."""
    n = len(rows)
    target = n // 2 if cap is None else min(cap, n // 2)
    if _greedy_matching(rows) >= target:
        return target
    memo: dict[int, int] = {}

    def best(mask: int) -> int:
        if mask in memo:
            return memo[mask]
        while mask:
            v = (mask & -mask).bit_length() - 1
            if rows[v] & mask:
                break
            mask &= mask - 1
        if mask.bit_count() < 2:
            return 0
        rest = mask & ~(1 << v)
        value = best(rest)
        nbrs = rows[v] & rest
        while nbrs and value < target:
            low = nbrs & -nbrs
            value = max(value, 1 + best(rest & ~low))
            nbrs ^= low
        memo[mask] = value
        return value

    return min(best((1 << n) - 1), target)


def has_matching_of_size(g: Graph, k: int) -> bool:
    return matching_number_rows(g.rows, cap=k) >= k


@functools.lru_cache(maxsize=8192)
def _edge_masks(g: Graph) -> tuple[tuple[Edge, int], ...]:
    return tuple(((u, v), (1 << (u - 1)) | (1 << (v - 1))) for u, v in edges(g))


def find_rainbow(family: GraphFamily) -> Optional[RainbowMatching]:
    """
    Exact backtracking: members by ascending edge count, edges lexicographic,
    pruning any branch that leaves a later member without a free edge.
    """
    per_member = [_edge_masks(g) for g in family.members]
    if any(not options for options in per_member):
        return None
    order = sorted(range(family.size), key=lambda idx: (len(per_member[idx]), idx))
    chosen: dict[int, Edge] = {}

    def feasible(pos: int, used: int) -> bool:
        for idx in order[pos:]:
            if all(mask & used for _, mask in per_member[idx]):
                return False
        return True

    def search(pos: int, used: int) -> bool:
        if pos == len(order):
            return True
        idx = order[pos]
        for edge, mask in per_member[idx]:
            if mask & used:
                continue
            if not feasible(pos + 1, used | mask):
                continue
            chosen[idx] = edge
            if search(pos + 1, used | mask):
                return True
        return False

    if not search(0, 0):
        return None
    return RainbowMatching(tuple((idx + 1, chosen[idx]) for idx in range(family.size)))


def brute_force_rainbow(family: GraphFamily) -> Optional[RainbowMatching]:
    """Tuple-enumeration oracle; exponential, for cross-checks only."""
    per_member = [_edge_masks(g) for g in family.members]
    for combo in itertools.product(*per_member):
        used = 0
        for _, mask in combo:
            if used & mask:
                break
            used |= mask
        else:
            return RainbowMatching(
                tuple((idx, edge) for idx, (edge, _) in enumerate(combo, start=1))
            )
    return None


def hall_bipartite_matching(sets: Sequence[Iterable[int]]) -> HallResult:
    """
    Distinct representatives x_i in W_i (1-based set indices), or a set S of
    indices whose union is smaller than |S| (read off a Koenig cover).
    """
    families = [sorted(set(s)) for s in sets]
    left = [("set", idx) for idx in range(1, len(families) + 1)]
    h = nx.Graph()
    h.add_nodes_from(left, bipartite=0)
    for idx, members in enumerate(families, start=1):
        for x in members:
            h.add_node(("vertex", x), bipartite=1)
            h.add_edge(("set", idx), ("vertex", x))
    matching = nx.bipartite.hopcroft_karp_matching(h, top_nodes=left)
    if all(node in matching for node in left):
        return HallResult(transversal=tuple(matching[node][1] for node in left))
    cover = nx.bipartite.to_vertex_cover(h, matching, top_nodes=left)
    deficient = frozenset(idx for (_, idx) in left if ("set", idx) not in cover)
    covered = set().union(*(families[idx - 1] for idx in deficient)) if deficient else set()
    if len(covered) >= len(deficient):
        raise RuntimeError("Koenig cover did not yield a Hall violator.")
    return HallResult(deficient=deficient)


def _check_family_shape(family: GraphFamily, m: int, kind: ExtremalKind) -> list[frozenset[int]]:
    n = family.n
    if m < 1 or n < 2 * m + 2:
        raise ValueError(f"Need m >= 1 and n >= 2m+2, got n={n}, m={m}.")
    if family.size != m + 1:
        raise ValueError(f"Expected {m + 1} members, got {family.size}.")
    witnesses = []
    for idx, g in enumerate(family.members, start=1):
        rec = recognize_extremal(g, n, m)
        if rec.kind is not kind:
            raise NotExtremalFamily(
                f"Member {idx} is not a labeled copy of {kind.value} for n={n}, m={m}."
            )
        witnesses.append(rec.witness)
    if len(set(witnesses)) == 1:
        raise AllMembersEqual(
            f"All members share the witness set {sorted(witnesses[0])}."
        )
    return witnesses


def rainbow_from_split_family(family: GraphFamily, m: int) -> RainbowMatching:
    """
    Every member is K_m v (n-m)K_1 and the full-degree sets W_i are not all
    equal: pick distinct x_i in W_i (Hall), then distinct partners y_i outside
    {x_i}; x_i y_i is an edge of member i because x_i has full degree.
    """
    w_sets = _check_family_shape(family, m, ExtremalKind.A_M_PLUS_1)
    hall = hall_bipartite_matching(w_sets)
    if not hall.ok:
        raise RuntimeError(f"No transversal for W-sets; deficient indices {sorted(hall.deficient)}.")
    xs = hall.transversal
    taken = set(xs)
    outside = [v for v in range(1, family.n + 1) if v not in taken]
    picks = []
    for idx, (x, y) in enumerate(zip(xs, outside), start=1):
        picks.append((idx, (min(x, y), max(x, y))))
    result = RainbowMatching(tuple(picks))
    _LOGGER.debug("split-family rainbow matching %s", result.picks)
    return result


def rainbow_from_clique_family(family: GraphFamily, m: int) -> RainbowMatching:
    """
    Every member is K_{2m+1} plus isolated vertices with cliques U_i not all
    equal. Start from x_1 in U_p minus U_q, put member q last and extend
    greedily; the counting bound leaves >= 3 free clique vertices in the
    middle steps and >= 2 at the last one.
    """
    u_sets = _check_family_shape(family, m, ExtremalKind.A1)
    k = family.size
    p, q = next(
        (a, b) for a in range(k) for b in range(k) if a != b and u_sets[a] != u_sets[b]
    )
    x1 = min(u_sets[p] - u_sets[q])
    y1 = min(u_sets[p] - {x1})
    order = [p] + [idx for idx in range(k) if idx not in (p, q)] + [q]
    chosen: dict[int, Edge] = {p: (min(x1, y1), max(x1, y1))}
    used = {x1, y1}
    for idx in order[1:]:
        free = sorted(u_sets[idx] - used)
        if len(free) < 2:
            raise RuntimeError(f"Member {idx + 1} ran out of free clique vertices.")
        chosen[idx] = (free[0], free[1])
        used.update(free[:2])
    return RainbowMatching(tuple((idx + 1, chosen[idx]) for idx in range(k)))
