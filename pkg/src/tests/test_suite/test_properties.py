"""
Property-based tests. hypothesis draws labeled graphs and families and checks the
invariants that must hold for every input: spectral bounds and residuals,
shifting invariants, codec inverses and agreement of the rainbow search with
brute force.
"""

import itertools

import networkx as nx
import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from rainbow_spectral.graph_core import Graph, complement, degree_sequence, from_edges
from rainbow_spectral.graph_io import decode_graph6, encode_graph6, to_networkx
from rainbow_spectral.matching import GraphFamily, brute_force_rainbow, find_rainbow, max_matching
from rainbow_spectral.shifting import (
    SWEEP_ORDERS,
    fully_shift,
    is_shifted,
    observation_closure_holds,
    potential,
    shift_family,
    shift_xy,
)
from rainbow_spectral.spectral import add_edge_rho_monotone_check, adjacency_matrix, spectral_radius


@st.composite
def graphs(draw, min_n: int = 2, max_n: int = 7) -> Graph:
    n = draw(st.integers(min_value=min_n, max_value=max_n))
    pairs = list(itertools.combinations(range(1, n + 1), 2))
    picked = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return from_edges(n, [p for p, keep in zip(pairs, picked) if keep])


@st.composite
def shift_pairs(draw, g: Graph) -> tuple[int, int]:
    x = draw(st.integers(min_value=1, max_value=g.n))
    y = draw(st.integers(min_value=1, max_value=g.n).filter(lambda v: v != x))
    return x, y


@st.composite
def families(draw, size: int = 2, n: int = 5) -> GraphFamily:
    return GraphFamily.of([draw(graphs(min_n=n, max_n=n)) for _ in range(size)])


@given(st.data())
def test_shift_keeps_edge_count_and_never_lowers_rho(data):
    g = data.draw(graphs())
    x, y = data.draw(shift_pairs(g))
    shifted = shift_xy(g, x, y)
    assert shifted.edge_count == g.edge_count
    assert spectral_radius(shifted).rho >= spectral_radius(g).rho - 1e-9


@given(graphs())
def test_fully_shifted_graphs_are_closed(g):
    result = fully_shift(g).result
    assert is_shifted(result)
    assert observation_closure_holds(result)
    assert result.edge_count == g.edge_count


@given(graphs())
def test_power_iteration_matches_dense_eigensolver(g):
    expected = np.linalg.eigvalsh(adjacency_matrix(g))[-1]
    assert abs(spectral_radius(g).rho - expected) <= 1e-8 * max(1.0, expected)


@given(st.data())
def test_adding_an_edge_never_lowers_rho(data):
    g = data.draw(graphs())
    missing = [(u, v) for u, v in itertools.combinations(range(1, g.n + 1), 2) if not g.has_edge(u, v)]
    if not missing:
        return
    u, v = data.draw(st.sampled_from(missing))
    assert add_edge_rho_monotone_check(g, u, v).non_decreasing


@given(graphs(min_n=1, max_n=12))
def test_graph6_decodes_what_it_encodes(g):
    assert decode_graph6(encode_graph6(g)) == g


@given(graphs(max_n=9))
def test_matching_number_agrees_with_networkx(g):
    expected = len(nx.max_weight_matching(to_networkx(g), maxcardinality=True))
    assert max_matching(g).size == expected


@settings(max_examples=200)
@given(families(size=3, n=6))
def test_rainbow_search_agrees_with_brute_force(family):
    fast = find_rainbow(family)
    slow = brute_force_rainbow(family)
    assert (fast is None) == (slow is None)
    if fast is not None:
        assert fast.is_valid_for(family)


@given(st.data())
def test_shifting_a_family_cannot_create_rainbow_matchings(data):
    family = data.draw(families(size=2, n=5))
    x, y = data.draw(shift_pairs(family.members[0]))
    if find_rainbow(shift_family(family, x, y)) is not None:
        assert find_rainbow(family) is not None


@given(graphs(min_n=1, max_n=9))
def test_rho_lies_between_degree_bounds(g):
    rho = spectral_radius(g).rho
    max_deg = degree_sequence(g)[0]
    slack = 1e-8 * max(1.0, max_deg)
    assert max(2 * g.edge_count / g.n, max_deg**0.5) - slack <= rho <= max_deg + slack


@given(graphs(min_n=1, max_n=9), st.sampled_from([1e-4, 1e-7, 1e-10]))
def test_residual_stays_within_tolerance(g, tol):
    result = spectral_radius(g, tol)
    assert result.residual <= tol * max(1.0, result.rho)


@given(graphs(min_n=1, max_n=12))
def test_complement_is_an_involution(g):
    assert complement(complement(g)) == g
    assert g.edge_count + complement(g).edge_count == g.n * (g.n - 1) // 2


@given(graphs(), st.sampled_from(SWEEP_ORDERS))
def test_potential_drops_at_every_recorded_shift(g, order):
    trace = fully_shift(g, order)
    current = g
    for step in trace.steps:
        after = shift_xy(current, step.x, step.y)
        assert potential(after) < potential(current)
        current = after
    assert current == trace.result
