"""
The (x, y)-shift (Kelmans operation) and iterated shifting.

S_xy replaces y by x in every edge that contains y but not x, unless the
replacement is already an edge of the ORIGINAL graph; all moves of one
application are evaluated against the input edge set at once.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Iterator

from .graph_core import Graph, vertices_of, edges, is_connected
from .matching import GraphFamily


_LOGGER = logging.getLogger(__name__)

SWEEP_ORDERS = ("lex", "reverse")


class NotConnected(ValueError):
    pass


class EmptyRewireSet(ValueError):
    pass


@dataclass(frozen=True)
class ShiftStep:
    x: int
    y: int
    edges_moved: int


@dataclass(frozen=True)
class ShiftTrace:
    steps: tuple[ShiftStep, ...]
    result: Graph


def _check_pair(g: Graph, x: int, y: int) -> None:
    for v in (x, y):
        if not isinstance(v, int) or not 1 <= v <= g.n:
            raise ValueError(f"Vertex {v} is outside [{g.n}].")
    if x == y:
        raise ValueError(f"Shift needs two distinct vertices, got x = y = {x}.")


def _move_neighbors(g: Graph, to: int, frm: int, movable: int) -> Graph:
    """Replace edge {frm, z} by {to, z} for every z in ``movable``."""
    rows = list(g.rows)
    bit_to, bit_frm = 1 << (to - 1), 1 << (frm - 1)
    rows[frm - 1] &= ~movable
    rows[to - 1] |= movable
    for z in vertices_of(movable):
        rows[z - 1] = (rows[z - 1] & ~bit_frm) | bit_to
    return Graph(g.n, tuple(rows))


def _movable(g: Graph, x: int, y: int) -> int:
    return g.rows[y - 1] & ~g.rows[x - 1] & ~(1 << (x - 1))


def shift_xy(g: Graph, x: int, y: int) -> Graph:
    _check_pair(g, x, y)
    movable = _movable(g, x, y)
    if not movable:
        return g
    return _move_neighbors(g, x, y, movable)


def is_shifted(g: Graph) -> bool:
    """Single-step domination: every edge {a, b}, a < b, forces {a, c} for c < b and {c, b} for c < a."""
    for a, b in edges(g):
        below_b = ((1 << (b - 1)) - 1) & ~(1 << (a - 1))
        if g.rows[a - 1] & below_b != below_b:
            return False
        below_a = (1 << (a - 1)) - 1
        if g.rows[b - 1] & below_a != below_a:
            return False
    return True


def potential(g: Graph) -> int:
    """Sum of the labels over all edge endpoints; each non-identity x<y shift lowers it."""
    return sum(v * row.bit_count() for v, row in enumerate(g.rows, start=1))


def _pairs(n: int, order: str) -> Iterator[tuple[int, int]]:
    if order == "lex":
        for x in range(1, n + 1):
            for y in range(x + 1, n + 1):
                yield x, y
    elif order == "reverse":
        for x in range(n, 0, -1):
            for y in range(n, x, -1):
                yield x, y
    else:
        raise ValueError(f"Unknown sweep order {order!r}; use one of {SWEEP_ORDERS}.")


def fully_shift(g: Graph, order: str = "lex") -> ShiftTrace:
    steps: list[ShiftStep] = []
    current = g
    changed = True
    sweeps = 0
    while changed:
        changed = False
        sweeps += 1
        for x, y in _pairs(g.n, order):
            movable = _movable(current, x, y)
            if movable:
                current = _move_neighbors(current, x, y, movable)
                steps.append(ShiftStep(x, y, movable.bit_count()))
                changed = True
    _LOGGER.debug("fully_shift: %d steps over %d sweeps", len(steps), sweeps)
    return ShiftTrace(tuple(steps), current)


def observation_closure_holds(g: Graph) -> bool:
    """For every edge {y1 < y2}: each {x1, x2} with x1 <= y1, x2 <= y2, x1 != x2 is an edge."""
    for y1, y2 in edges(g):
        for x1 in range(1, y1 + 1):
            for x2 in range(1, y2 + 1):
                if x1 != x2 and not g.rows[x1 - 1] >> (x2 - 1) & 1:
                    return False
    return True


def rewire_set(g: Graph, u: int, v: int) -> frozenset[int]:
    _check_pair(g, u, v)
    return frozenset(vertices_of(_movable(g, u, v)))


def rewire_neighbors(g: Graph, u: int, v: int) -> Graph:
    """Delete {v, v_i} and add {u, v_i} for every v_i in N(v) minus (N(u) + u)."""
    _check_pair(g, u, v)
    if not is_connected(g):
        raise NotConnected("Neighbor rewiring needs a connected graph.")
    movable = _movable(g, u, v)
    if not movable:
        raise EmptyRewireSet(f"N({v}) minus N({u}) and {u} is empty; nothing to rewire.")
    return _move_neighbors(g, u, v, movable)


def shift_family(family: GraphFamily, x: int, y: int) -> GraphFamily:
    return GraphFamily(family.n, tuple(shift_xy(g, x, y) for g in family.members))


def fully_shift_family(family: GraphFamily, order: str = "lex") -> GraphFamily:
    return GraphFamily(
        family.n, tuple(fully_shift(g, order).result for g in family.members)
    )
