"""
Labeled-graph streams for the sweeps.

A graph on [n] is a bit vector over the C(n, 2) pairs in graph6 column order
(1,2), (1,3), (2,3), (1,4), ...; its integer rank puts pair (1,2) in the most
significant bit, so ascending rank is exactly graph6-lexicographic order.

Randomness always comes from ``numpy.random.Generator(PCG64(seed))``, which is
platform independent for a given seed.
"""

from __future__ import annotations

import itertools
import logging
import multiprocessing
from dataclasses import dataclass
from math import comb
from typing import Iterator, Optional, Sequence

import numpy as np

from .graph_core import (
    ExtremalKind,
    ExtremalParams,
    Graph,
    construct_extremal,
    edges,
    from_edges,
    relabel,
)
from .spectral import spectral_radii


_LOGGER = logging.getLogger(__name__)

DEFAULT_CHUNK = 1 << 15


class BudgetExceeded(ValueError):
    pass


@dataclass(frozen=True)
class Candidate:
    index: int
    graph: Graph
    rho: Optional[float] = None


@dataclass(frozen=True)
class GraphFilter:
    """Edge-count membership first (cheap), then a batched rho window."""

    min_rho: Optional[float] = None
    max_rho: Optional[float] = None
    edge_counts: Optional[frozenset[int]] = None

    @property
    def needs_rho(self) -> bool:
        return self.min_rho is not None or self.max_rho is not None

    def select(self, n: int, bits: np.ndarray) -> tuple[np.ndarray, Optional[np.ndarray]]:
        keep = np.ones(bits.shape[0], dtype=bool)
        if self.edge_counts is not None:
            keep &= np.isin(bits.sum(axis=1), sorted(self.edge_counts))
        idx = np.nonzero(keep)[0]
        if not self.needs_rho:
            return idx, None
        rhos = spectral_radii(adjacency_stack(n, bits[idx]))
        ok = np.ones(rhos.shape[0], dtype=bool)
        if self.min_rho is not None:
            ok &= rhos >= self.min_rho
        if self.max_rho is not None:
            ok &= rhos <= self.max_rho
        return idx[ok], rhos[ok]


def random_generator(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def pair_order(n: int) -> list[tuple[int, int]]:
    return [(u, v) for v in range(2, n + 1) for u in range(1, v)]


def pair_count(n: int) -> int:
    return comb(n, 2)


def graph_count(n: int) -> int:
    return 1 << pair_count(n)


def _pair_index_arrays(n: int) -> tuple[np.ndarray, np.ndarray]:
    pairs = pair_order(n)
    rows = np.array([u - 1 for u, _ in pairs], dtype=np.intp)
    cols = np.array([v - 1 for _, v in pairs], dtype=np.intp)
    return rows, cols


def bits_from_ranks(n: int, ranks: np.ndarray) -> np.ndarray:
    total = pair_count(n)
    shifts = np.arange(total - 1, -1, -1, dtype=np.int64)
    return ((ranks.astype(np.int64)[:, np.newaxis] >> shifts) & 1).astype(np.uint8)


def adjacency_stack(n: int, bits: np.ndarray) -> np.ndarray:
    rows, cols = _pair_index_arrays(n)
    adj = np.zeros((bits.shape[0], n, n), dtype=np.float64)
    adj[:, rows, cols] = bits
    adj[:, cols, rows] = bits
    return adj


def graph_from_bits(n: int, bits: Sequence[int]) -> Graph:
    return from_edges(n, (pair for pair, bit in zip(pair_order(n), bits) if bit))


def graph_from_rank(n: int, rank: int) -> Graph:
    total = pair_count(n)
    if not 0 <= rank < (1 << total):
        raise ValueError(f"Rank {rank} is outside [0, 2^{total}).")
    return Graph(n, rows_from_rank(n, rank))


def rank_of(g: Graph) -> int:
    total = pair_count(g.n)
    position = {pair: j for j, pair in enumerate(pair_order(g.n))}
    rank = 0
    for pair in edges(g):
        rank |= 1 << (total - 1 - position[pair])
    return rank


def _scan_range(args: tuple[int, int, int, GraphFilter]) -> tuple[np.ndarray, Optional[np.ndarray]]:
    n, start, stop, flt = args
    ranks = np.arange(start, stop, dtype=np.int64)
    keep, rhos = flt.select(n, bits_from_ranks(n, ranks))
    return ranks[keep], rhos


def rows_from_rank(n: int, rank: int) -> tuple[int, ...]:
    """Bitset rows of the graph with this rank, without building a validated Graph."""
    total = pair_count(n)
    rows = [0] * n
    j = total - 1
    for v in range(1, n):
        for u in range(v):
            if rank >> j & 1:
                rows[u] |= 1 << v
                rows[v] |= 1 << u
            j -= 1
    return tuple(rows)


def exhaustive_chunks(
    n: int,
    flt: GraphFilter,
    budget: int,
    workers: int = 1,
    chunk: int = DEFAULT_CHUNK,
) -> Iterator[tuple[np.ndarray, Optional[np.ndarray]]]:
    """(ranks, rhos) of the graphs passing ``flt``, chunk by chunk in rank order."""
    total = graph_count(n)
    if total > budget:
        raise BudgetExceeded(
            f"Exhaustive scan of n={n} needs {total} graphs, budget is {budget}."
        )
    ranges = [(n, start, min(start + chunk, total), flt) for start in range(0, total, chunk)]
    _LOGGER.info("scanning %d labeled graphs on n=%d in %d chunks", total, n, len(ranges))
    if workers > 1 and len(ranges) > 1:
        with multiprocessing.Pool(workers) as pool:
            # imap keeps chunk order, so the merged stream is deterministic
            yield from pool.imap(_scan_range, ranges)
    else:
        for args in ranges:
            yield _scan_range(args)


def exhaustive_scan(
    n: int,
    flt: GraphFilter,
    budget: int,
    workers: int = 1,
    chunk: int = DEFAULT_CHUNK,
) -> Iterator[Candidate]:
    """Every labeled graph on [n] passing ``flt``, in graph6-lexicographic order."""
    for ranks, rhos in exhaustive_chunks(n, flt, budget, workers, chunk):
        yield from _candidates(n, ranks, rhos)


def _candidates(n: int, ranks: np.ndarray, rhos: Optional[np.ndarray]) -> Iterator[Candidate]:
    for pos, rank in enumerate(ranks.tolist()):
        yield Candidate(
            index=rank,
            graph=graph_from_rank(n, rank),
            rho=None if rhos is None else float(rhos[pos]),
        )


def fixed_size_scan(
    n: int,
    size: int,
    flt: GraphFilter,
    budget: int,
    chunk: int = DEFAULT_CHUNK,
) -> list[Candidate]:
    """
    Every labeled graph on [n] with exactly ``size`` edges passing ``flt``,
    returned in graph6-lexicographic order.
    """
    total = pair_count(n)
    if not 0 <= size <= total:
        raise ValueError(f"Edge count {size} is outside [0, {total}].")
    count = comb(total, size)
    if count > budget:
        raise BudgetExceeded(
            f"{count} graphs on n={n} have {size} edges, budget is {budget}."
        )
    _LOGGER.info("scanning %d labeled graphs on n=%d with %d edges", count, n, size)
    found: list[tuple[int, Candidate]] = []
    combos = itertools.combinations(range(total), size)
    while True:
        block = list(itertools.islice(combos, chunk))
        if not block:
            break
        bits = np.zeros((len(block), total), dtype=np.uint8)
        if size:
            bits[np.arange(len(block))[:, np.newaxis], np.array(block, dtype=np.intp)] = 1
        keep, rhos = flt.select(n, bits)
        for pos, row in enumerate(keep.tolist()):
            graph = graph_from_bits(n, bits[row].tolist())
            rank = rank_of(graph)
            found.append(
                (rank, Candidate(rank, graph, None if rhos is None else float(rhos[pos])))
            )
    found.sort(key=lambda item: item[0])
    return [cand for _, cand in found]


class GraphSampler:
    """Uniform labeled graphs on [n] (each pair present with probability 1/2), filtered."""

    def __init__(
        self,
        n: int,
        flt: GraphFilter,
        rng: np.random.Generator,
        chunk: int = 4096,
        max_empty_chunks: int = 1000,
    ):
        self.n = n
        self.flt = flt
        self.rng = rng
        self.chunk = chunk
        self.max_empty_chunks = max_empty_chunks
        self.drawn = 0
        self._buffer: list[Candidate] = []

    def draw_chunk(self) -> list[Candidate]:
        """One block of ``chunk`` uniform draws, keeping those that pass the filter."""
        bits = self.rng.integers(0, 2, size=(self.chunk, pair_count(self.n)), dtype=np.uint8)
        keep, rhos = self.flt.select(self.n, bits)
        base = self.drawn
        self.drawn += self.chunk
        return [
            Candidate(
                index=base + row,
                graph=graph_from_bits(self.n, bits[row].tolist()),
                rho=None if rhos is None else float(rhos[pos]),
            )
            for pos, row in enumerate(keep.tolist())
        ]

    def _refill(self) -> None:
        empty = 0
        while not self._buffer:
            if empty >= self.max_empty_chunks:
                raise BudgetExceeded(
                    f"No graph on n={self.n} passed the filter in {self.drawn} draws."
                )
            self._buffer = self.draw_chunk()
            self._buffer.reverse()
            empty += 1

    def next(self) -> Candidate:
        self._refill()
        return self._buffer.pop()

    def take(self, count: int) -> list[Candidate]:
        return [self.next() for _ in range(count)]


def sampled_scan(
    n: int, flt: GraphFilter, rng: np.random.Generator, draws: int, chunk: int = 4096
) -> Iterator[Candidate]:
    """The candidates passing ``flt`` among exactly ``draws`` uniform draws."""
    sampler = GraphSampler(n, flt, rng, chunk=min(chunk, max(draws, 1)))
    while sampler.drawn < draws:
        for cand in sampler.draw_chunk():
            if cand.index < draws:
                yield cand


def random_graph(n: int, rng: np.random.Generator, p: float = 0.5) -> Graph:
    bits = rng.random(pair_count(n)) < p
    return graph_from_bits(n, bits.tolist())


def random_permutation(n: int, rng: np.random.Generator) -> list[int]:
    return [int(v) + 1 for v in rng.permutation(n)]


def random_extremal_copy(n: int, m: int, kind: ExtremalKind, rng: np.random.Generator) -> Graph:
    i = 1 if kind is ExtremalKind.A1 else m + 1
    return relabel(construct_extremal(ExtremalParams(n, m, i)), random_permutation(n, rng))
