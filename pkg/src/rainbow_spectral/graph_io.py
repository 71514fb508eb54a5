"""
graph6 and edge-list codecs.

graph6 goes through networkx (upper-triangle bits in column order
x(1,2), x(1,3), x(2,3), x(1,4), ...); vertex u of a Graph is node u - 1 on the
networkx side. The ``>>graph6<<`` header is accepted on decode and never emitted.

Edge-list text: a line ``n <n>`` followed by one ``u v`` pair per line, 1-based.
Blank lines and ``#`` comments are ignored; a new ``n`` line starts a new graph.
"""

from __future__ import annotations

import networkx as nx

from .config import GRAPH6_MAX_N
from .graph_core import Graph, edges, from_edges


GRAPH6_HEADER = ">>graph6<<"


def to_networkx(g: Graph) -> nx.Graph:
    h = nx.Graph()
    h.add_nodes_from(range(1, g.n + 1))
    h.add_edges_from(edges(g))
    return h


def from_networkx(h: nx.Graph) -> Graph:
    nodes = list(h.nodes())
    index = {node: pos for pos, node in enumerate(nodes, start=1)}
    return from_edges(len(nodes), ((index[a], index[b]) for a, b in h.edges()))


def encode_graph6(g: Graph) -> str:
    if g.n > GRAPH6_MAX_N:
        raise ValueError(f"graph6 is supported for n <= {GRAPH6_MAX_N}, got {g.n}.")
    data = nx.to_graph6_bytes(to_networkx(g), nodes=list(range(1, g.n + 1)), header=False)
    return data.decode("ascii").strip()


def decode_graph6(text: str) -> Graph:
    line = text.strip()
    if line.startswith(GRAPH6_HEADER):
        line = line[len(GRAPH6_HEADER) :]
    if not line:
        raise ValueError("Empty graph6 string.")
    first = ord(line[0]) - 63
    if not 1 <= first <= GRAPH6_MAX_N:
        raise ValueError(f"graph6 is supported for 1 <= n <= {GRAPH6_MAX_N}.")
    try:
        h = nx.from_graph6_bytes(line.encode("ascii"))
    except (nx.NetworkXError, ValueError, UnicodeEncodeError) as exc:
        raise ValueError(f"Malformed graph6 string {line!r}: {exc}") from exc
    return from_edges(first, ((a + 1, b + 1) for a, b in h.edges()))


def encode_edge_list(g: Graph) -> str:
    lines = [f"n {g.n}"]
    lines.extend(f"{u} {v}" for u, v in edges(g))
    return "\n".join(lines) + "\n"


def decode_edge_list(text: str) -> list[Graph]:
    graphs: list[Graph] = []
    n = None
    pairs: list[tuple[int, int]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        if fields[0] == "n":
            if n is not None:
                graphs.append(from_edges(n, pairs))
            if len(fields) != 2 or not fields[1].isdigit():
                raise ValueError(f"Line {lineno}: expected 'n <count>', got {raw!r}.")
            n, pairs = int(fields[1]), []
            continue
        if n is None:
            raise ValueError(f"Line {lineno}: edge before the 'n <count>' header.")
        if len(fields) != 2:
            raise ValueError(f"Line {lineno}: expected 'u v', got {raw!r}.")
        try:
            pairs.append((int(fields[0]), int(fields[1])))
        except ValueError as exc:
            raise ValueError(f"Line {lineno}: non-integer vertex in {raw!r}.") from exc
    if n is None:
        raise ValueError("No graph found in edge-list input.")
    graphs.append(from_edges(n, pairs))
    return graphs


def is_edge_list(text: str) -> bool:
    """Edge lists open with 'n' plus whitespace; graph6 never contains whitespace."""
    stripped = text.lstrip()
    return len(stripped) >= 2 and stripped[0] == "n" and stripped[1] in " \t"


def read_graphs(text: str) -> list[Graph]:
    if is_edge_list(text):
        return decode_edge_list(text)
    graphs = [decode_graph6(line) for line in text.splitlines() if line.strip()]
    if not graphs:
        raise ValueError("No graph found in graph6 input.")
    return graphs


def write_graphs(graphs: list[Graph], fmt: str = "graph6") -> str:
    if fmt == "graph6":
        return "".join(encode_graph6(g) + "\n" for g in graphs)
    if fmt == "edges":
        return "".join(encode_edge_list(g) for g in graphs)
    raise ValueError(f"Unknown graph format {fmt!r}.")
