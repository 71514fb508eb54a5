"""
Desk-scale verification sweeps with JSON-lines certificates.

Every sweep is a generator of ``Certificate``s closed by one summary
certificate. Per-instance evaluation lives in the ``evaluate_*`` functions so
that ``replay`` re-runs a single instance through exactly the code the sweep
used; the batched eigenvalues of the enumeration layer only pre-filter and
never appear in a certificate.
"""

from __future__ import annotations

import functools
import itertools
import logging
from collections import Counter
from dataclasses import dataclass
from math import comb
from typing import Callable, Iterable, Iterator, Optional, Sequence

import numpy as np

from .config import CROSS_CHECK_TOL, DEFAULT_BUDGET, ISOMORPHISM_MAX_N, SPECTRAL_MARGIN
from .enumeration import (
    Candidate,
    GraphFilter,
    GraphSampler,
    exhaustive_scan,
    fixed_size_scan,
    graph_count,
    pair_order,
    random_extremal_copy,
    random_generator,
    random_graph,
    sampled_scan,
)
from .graph_core import (
    ExtremalKind,
    ExtremalParams,
    Graph,
    are_isomorphic,
    complete_graph,
    construct_extremal,
    edges,
    graphs_equal,
    is_connected,
    recognize_extremal,
    relabel,
)
from .graph_io import decode_graph6, encode_graph6
from .matching import (
    GraphFamily,
    RainbowMatching,
    brute_force_rainbow,
    find_rainbow,
    matching_number_rows,
    rainbow_from_clique_family,
    rainbow_from_split_family,
)
from .schemas import Certificate, CertificateParams, SweepPlan
from .shifting import fully_shift, fully_shift_family, rewire_neighbors, rewire_set, shift_xy
from .spectral import (
    adjacency_matrix,
    closed_form_rho_extremal,
    spectral_radii,
    spectral_radius,
    threshold,
)


_LOGGER = logging.getLogger(__name__)

REGIME_BELOW = "n<3m+2"
REGIME_AT = "n=3m+2"
REGIME_ABOVE = "n>3m+2"

PROP_CHECKS = (
    "csikvari",
    "shift_strictness",
    "shift_order",
    "rewire",
    "rainbow_preservation",
    "constructors",
)


@dataclass(frozen=True)
class BoundCase:
    name: str
    bound: float
    # empty means the only equality graph is K_n
    allowed: tuple[ExtremalKind, ...]


@dataclass(frozen=True)
class Evaluation:
    """``status`` is one of skipped, pass, notable, counterexample."""

    status: str
    certificate: Optional[Certificate] = None


SKIPPED = Evaluation("skipped")
SILENT_PASS = Evaluation("pass")
SUMMARY_STATUSES = ("counterexample", "notable", "pass", "skipped")

STRICTNESS_EXHAUSTIVE_MAX_N = 6
PRESERVATION_EXHAUSTIVE_MAX_N = 5


def regime(n: int, m: int) -> str:
    if n < 3 * m + 2:
        return REGIME_BELOW
    if n == 3 * m + 2:
        return REGIME_AT
    return REGIME_ABOVE


def allowed_exceptions(n: int, m: int) -> tuple[ExtremalKind, ...]:
    """Extremal shapes a rainbow-free qualifying family may consist of."""
    tag = regime(n, m)
    if tag == REGIME_BELOW:
        return (ExtremalKind.A1,)
    if tag == REGIME_AT:
        return (ExtremalKind.A1, ExtremalKind.A_M_PLUS_1)
    return (ExtremalKind.A_M_PLUS_1,)


def t12_case(n: int, m: int) -> BoundCase:
    if m < 1 or n < 2 * m:
        raise ValueError(f"Need m >= 1 and n >= 2m, got n={n}, m={m}.")
    if n <= 2 * m + 1:
        return BoundCase("n<=2m+1", float(n - 1), ())
    return BoundCase(regime(n, m), threshold(n, m), allowed_exceptions(n, m))


def extremal_index(kind: ExtremalKind, m: int) -> int:
    if kind is ExtremalKind.A1:
        return 1
    if kind is ExtremalKind.A_M_PLUS_1:
        return m + 1
    raise ValueError(f"{kind.value} is not an extremal shape.")


def _entry(result) -> dict:
    return {"value": result.rho, "residual": result.residual, "iterations": result.iterations}


def _rho_entry(g: Graph, tol: float) -> dict:
    return _entry(spectral_radius(g, tol))


def _certificate(
    kind: str,
    params: CertificateParams,
    graphs: Sequence[Graph],
    measured: dict,
    counterexample: bool,
    witness: Optional[dict],
) -> Certificate:
    return Certificate(
        kind=kind,
        params=params,
        instance=[encode_graph6(g) for g in graphs],
        measured=measured,
        outcome="COUNTEREXAMPLE" if counterexample else "PASS",
        witness=witness,
    )


def _summary(
    kind: str, params: CertificateParams, stats: Counter, measured: Optional[dict] = None
) -> Certificate:
    counts = Counter(dict.fromkeys(SUMMARY_STATUSES, 0))
    counts.update(stats)
    summary = {key: counts[key] for key in sorted(counts)}
    return Certificate(
        kind=kind,
        params=params.model_copy(update={"index": None}),
        instance=[],
        measured=measured or {},
        outcome="COUNTEREXAMPLE" if stats["counterexample"] else "PASS",
        witness={"summary": summary},
    )


def _base_params(plan: SweepPlan, tag: str, check: str, mode: Optional[str] = None) -> CertificateParams:
    mode = mode or plan.mode
    return CertificateParams(
        n=plan.n,
        m=plan.m,
        regime=tag,
        check=check,
        mode=mode,
        seed=plan.seed if "sampled" in mode else None,
        margin=plan.margin,
        tol=plan.tol,
    )


def _picks_json(rm: RainbowMatching) -> list:
    return [[idx, list(edge)] for idx, edge in rm.picks]


# ---------------------------------------------------------------------------
# qualifying graphs


def enumerate_qualifying(
    n: int,
    m: int,
    margin: float = SPECTRAL_MARGIN,
    budget: int = DEFAULT_BUDGET,
    samples: Optional[int] = None,
    seed: int = 0,
    workers: int = 1,
) -> Iterator[Candidate]:
    """
    Labeled graphs on [n] with rho >= threshold(n, m) - margin. Exhaustive in
    graph6-lexicographic order, or among ``samples`` seeded uniform draws.
    """
    flt = GraphFilter(min_rho=threshold(n, m) - margin)
    if samples is None:
        return exhaustive_scan(n, flt, budget, workers)
    return sampled_scan(n, flt, random_generator(seed), samples)


# ---------------------------------------------------------------------------
# spectral bound for graphs with bounded matching number


def _is_equality_graph(g: Graph, case: BoundCase, m: int) -> Optional[dict]:
    if not case.allowed:
        if graphs_equal(g, complete_graph(g.n)):
            return {"equality": "K_n", "closed_form": float(g.n - 1)}
        return None
    rec = recognize_extremal(g, g.n, m)
    if rec.kind not in case.allowed:
        return None
    closed = closed_form_rho_extremal(ExtremalParams(g.n, m, extremal_index(rec.kind, m)))
    return {"equality": rec.kind.value, "witness_set": sorted(rec.witness), "closed_form": closed}


def evaluate_t12(g: Graph, params: CertificateParams, emit_all: bool = False) -> Evaluation:
    n, m = params.n, params.m
    case = t12_case(n, m)
    nu = matching_number_rows(g.rows, cap=m + 1)
    if nu > m:
        return SKIPPED
    spectral = spectral_radius(g, params.tol)
    rho = spectral.rho
    if rho < case.bound - params.margin and not emit_all:
        return SILENT_PASS
    measured = {"rho": [_entry(spectral)], "bound": case.bound, "nu": nu}
    if rho < case.bound - params.margin:
        return Evaluation("pass", _certificate("T12", params, [g], measured, False, None))
    if rho > case.bound + params.margin:
        witness = {"reason": "bound_exceeded", "excess": rho - case.bound}
        return Evaluation("counterexample", _certificate("T12", params, [g], measured, True, witness))

    equality = _is_equality_graph(g, case, m)
    if equality is None:
        witness = {"reason": "near_equality_not_extremal", "near_threshold": True}
        return Evaluation("counterexample", _certificate("T12", params, [g], measured, True, witness))
    gap = abs(equality["closed_form"] - rho)
    if gap > CROSS_CHECK_TOL:
        witness = {"reason": "closed_form_mismatch", "gap": gap, **equality}
        return Evaluation("counterexample", _certificate("T12", params, [g], measured, True, witness))
    return Evaluation("notable", _certificate("T12", params, [g], measured, False, equality))


def check_T12(plan: SweepPlan) -> Iterator[Certificate]:
    case = t12_case(plan.n, plan.m)
    params = _base_params(plan, case.name, "bound")
    flt = GraphFilter(min_rho=None if plan.emit_all else case.bound - plan.margin)
    if plan.mode == "sampled":
        stream = sampled_scan(plan.n, flt, random_generator(plan.seed), plan.samples)
    else:
        stream = exhaustive_scan(plan.n, flt, plan.budget, plan.workers)
    _LOGGER.info("T12 n=%d m=%d case %s bound %.12g", plan.n, plan.m, case.name, case.bound)
    stats: Counter = Counter()
    for cand in stream:
        stats["candidates"] += 1
        result = evaluate_t12(cand.graph, params.model_copy(update={"index": [cand.index]}), plan.emit_all)
        stats[result.status] += 1
        if result.certificate is not None:
            yield result.certificate
    yield _summary("T12", params, stats, {"bound": case.bound})


# ---------------------------------------------------------------------------
# rainbow matchings in families


def _t11_bound(n: int, m: int) -> int:
    return max(comb(n, 2) - comb(n - m, 2), comb(2 * m + 1, 2))


def _family_measured(kind: str, members: Sequence[Graph], params: CertificateParams) -> dict:
    n, m = params.n, params.m
    if kind == "T11":
        return {
            "edge_counts": [g.edge_count for g in members],
            "bound": _t11_bound(n, m),
        }
    return {
        "rho": [_rho_entry(g, params.tol) for g in members],
        "threshold": threshold(n, m),
    }


def evaluate_family(
    kind: str, members: Sequence[Graph], params: CertificateParams, emit_all: bool = False
) -> Evaluation:
    family = GraphFamily.of(members)
    rm = find_rainbow(family)
    if rm is not None:
        problems = rm.violations(family)
        if problems:
            raise RuntimeError(f"find_rainbow returned an invalid matching: {problems}")
        if not emit_all:
            return SILENT_PASS
        measured = _family_measured(kind, members, params)
        return Evaluation(
            "pass",
            _certificate(kind, params, members, measured, False, {"rainbow": _picks_json(rm)}),
        )

    measured = _family_measured(kind, members, params)
    if kind == "T11":
        witness = {"reason": "no_rainbow_matching"}
        return Evaluation("counterexample", _certificate(kind, params, members, measured, True, witness))

    n, m = params.n, params.m
    allowed = allowed_exceptions(n, m)
    recs = [recognize_extremal(g, n, m) for g in members]
    all_equal = all(graphs_equal(members[0], g) for g in members[1:])
    if all_equal and recs[0].kind in allowed:
        witness = {"exception": recs[0].kind.value, "witness_set": sorted(recs[0].witness)}
        return Evaluation("notable", _certificate(kind, params, members, measured, False, witness))

    bar = threshold(n, m)
    near = [
        entry["value"] < bar + params.margin and rec.kind not in allowed
        for entry, rec in zip(measured["rho"], recs)
    ]
    witness = {
        "reason": "rainbow_free_not_exception",
        "members_equal": all_equal,
        "recognized": [rec.kind.value for rec in recs],
        "near_threshold": near,
    }
    return Evaluation("counterexample", _certificate(kind, params, members, measured, True, witness))


def evaluate_shifted_structure(
    members: Sequence[Graph], params: CertificateParams, emit_all: bool = False
) -> Evaluation:
    """
    A rainbow-free qualifying family must fully shift to identical members,
    each labeled-equal to A^1 or A^{m+1} as the regime allows.
    """
    n, m = params.n, params.m
    shifted = fully_shift_family(GraphFamily.of(members)).members
    targets = {
        kind: construct_extremal(ExtremalParams(n, m, extremal_index(kind, m)))
        for kind in allowed_exceptions(n, m)
    }
    matched = next(
        (kind for kind, target in targets.items() if all(graphs_equal(h, target) for h in shifted)),
        None,
    )
    if matched is not None and not emit_all:
        return SILENT_PASS
    measured = {"shifted": [encode_graph6(h) for h in shifted]}
    if matched is None:
        witness = {"reason": "shifted_family_not_extremal"}
        return Evaluation("counterexample", _certificate("PROP", params, members, measured, True, witness))
    return Evaluation("pass", _certificate("PROP", params, members, measured, False, {"shifted_to": matched.value}))


def _pair_masks(g: Graph, position: dict[tuple[int, int], int]) -> int:
    mask = 0
    for pair in edges(g):
        mask |= 1 << position[pair]
    return mask


def _rainbow_vertex_sets(options: Sequence[Sequence[int]]) -> set[int]:
    """Vertex sets covered by the rainbow matchings of a prefix (one edge per member)."""
    found: set[int] = set()

    def extend(pos: int, used: int) -> None:
        if pos == len(options):
            found.add(used)
            return
        for mask in options[pos]:
            if not mask & used:
                extend(pos + 1, used | mask)

    extend(0, 0)
    return found


def _filtered_families(
    pool: Sequence[Candidate], k: int, n: int, stats: Counter
) -> Iterator[tuple[list[int], list[Graph]]]:
    """
    Families over ``pool`` with no rainbow matching. For each (k-1)-prefix the
    last member fails exactly when none of its edges avoids every rainbow
    matching of the prefix; that test is one vectorized AND over the pool.
    """
    pairs = pair_order(n)
    if len(pairs) > 64:
        raise ValueError(f"Filtered enumeration packs pairs into 64 bits; n={n} is too large.")
    position = {pair: j for j, pair in enumerate(pairs)}
    vertex_mask = [(1 << (u - 1)) | (1 << (v - 1)) for u, v in pairs]
    pool_masks = np.array([_pair_masks(c.graph, position) for c in pool], dtype=np.uint64)
    edge_vertex_masks = [[vertex_mask[j] for j in range(len(pairs)) if int(pm) >> j & 1] for pm in pool_masks]
    free_pairs: dict[int, int] = {}

    def avoiding(used: int) -> int:
        if used not in free_pairs:
            free_pairs[used] = sum(1 << j for j, vm in enumerate(vertex_mask) if not vm & used)
        return free_pairs[used]

    for prefix in itertools.product(range(len(pool)), repeat=k - 1):
        stats["families"] += len(pool)
        allowed = 0
        for used in _rainbow_vertex_sets([edge_vertex_masks[idx] for idx in prefix]):
            allowed |= avoiding(used)
        failing = np.nonzero((pool_masks & np.uint64(allowed)) == 0)[0]
        for last in failing.tolist():
            chosen = list(prefix) + [last]
            yield [pool[idx].index for idx in chosen], [pool[idx].graph for idx in chosen]


def _sampled_families(
    plan: SweepPlan, flt: GraphFilter, kinds: tuple[ExtremalKind, ...], k: int
) -> Iterator[tuple[list[int], list[Graph]]]:
    rng = random_generator(plan.seed)
    sampler = GraphSampler(plan.n, flt, rng)
    mixing = bool(kinds) and plan.extremal_mix > 0
    for draw in range(plan.samples):
        u = float(rng.random()) if mixing else 1.0
        if u < plan.extremal_mix / 2:
            kind = kinds[int(rng.integers(len(kinds)))]
            g = random_extremal_copy(plan.n, plan.m, kind, rng)
            yield [draw], [g] * k
        elif u < plan.extremal_mix:
            kind = kinds[int(rng.integers(len(kinds)))]
            yield [draw], [random_extremal_copy(plan.n, plan.m, kind, rng) for _ in range(k)]
        else:
            yield [draw], [cand.graph for cand in sampler.take(k)]


def _family_sweep(
    kind: str,
    plan: SweepPlan,
    flt: GraphFilter,
    tag: str,
    kinds: tuple[ExtremalKind, ...],
    measured: dict,
) -> Iterator[Certificate]:
    k = plan.m + 1
    stats: Counter = Counter()
    mode = plan.mode
    families: Iterable[tuple[list[int], list[Graph]]]
    if mode == "sampled":
        families = _sampled_families(plan, flt, kinds, k)
    else:
        pool = list(exhaustive_scan(plan.n, flt, plan.budget, plan.workers))
        stats["pool"] = len(pool)
        _LOGGER.info("%s n=%d m=%d: %d qualifying graphs", kind, plan.n, plan.m, len(pool))
        if mode == "exhaustive" and len(pool) ** k <= plan.budget:
            families = (
                ([pool[i].index for i in combo], [pool[i].graph for i in combo])
                for combo in itertools.product(range(len(pool)), repeat=k)
            )
        elif mode == "filtered-exhaustive" and len(pool) ** (k - 1) <= plan.budget:
            families = _filtered_families(pool, k, plan.n, stats)
        else:
            _LOGGER.warning(
                "%d qualifying graphs exceed the budget %d for %s tuples; sampling %d families instead",
                len(pool),
                plan.budget,
                mode,
                plan.samples,
            )
            mode = "sampled(fallback)"
            families = _sampled_families(plan, flt, kinds, k)

    params = _base_params(plan, tag, "rainbow", mode)
    shifted_params = params.model_copy(update={"check": "shifted_structure"})
    for index, members in families:
        if mode != "filtered-exhaustive":
            stats["families"] += 1
        instance_params = params.model_copy(update={"index": index})
        result = evaluate_family(kind, members, instance_params, plan.emit_all)
        stats[result.status] += 1
        if result.certificate is not None:
            yield result.certificate
        if kind == "T13" and result.status != "pass":
            near = (result.certificate.witness or {}).get("near_threshold") or []
            if any(near):
                continue
            shifted = evaluate_shifted_structure(
                members, shifted_params.model_copy(update={"index": index}), plan.emit_all
            )
            stats[f"shifted_{shifted.status}"] += 1
            if shifted.status == "counterexample":
                stats["counterexample"] += 1
            if shifted.certificate is not None:
                yield shifted.certificate
    yield _summary(kind, params, stats, measured)


def check_T13(plan: SweepPlan) -> Iterator[Certificate]:
    n, m = plan.n, plan.m
    bar = threshold(n, m)
    flt = GraphFilter(min_rho=bar - plan.margin)
    return _family_sweep("T13", plan, flt, regime(n, m), allowed_exceptions(n, m), {"threshold": bar})


def check_T11(plan: SweepPlan) -> Iterator[Certificate]:
    n, m = plan.n, plan.m
    if m < 1 or n < 2 * m + 2:
        raise ValueError(f"Need m >= 1 and n >= 2m+2, got n={n}, m={m}.")
    bound = _t11_bound(n, m)
    flt = GraphFilter(edge_counts=frozenset(range(bound + 1, comb(n, 2) + 1)))
    return _family_sweep("T11", plan, flt, regime(n, m), (), {"bound": bound})


# ---------------------------------------------------------------------------
# extremal rigidity under shifting


def _shift_images(g: Graph, full_shift: bool) -> Iterator[tuple[Optional[tuple[int, int]], Graph]]:
    if full_shift:
        yield None, fully_shift(g).result
        return
    for x in range(1, g.n + 1):
        for y in range(x + 1, g.n + 1):
            yield (x, y), shift_xy(g, x, y)


def evaluate_rigidity(g: Graph, params: CertificateParams, emit_all: bool = False) -> Evaluation:
    n, m = params.n, params.m
    kind = ExtremalKind(params.regime)
    full_shift = params.check == "rigidity_full_shift"
    target = closed_form_rho_extremal(ExtremalParams(n, m, extremal_index(kind, m)))
    own = recognize_extremal(g, n, m).kind
    hits = []
    for pair, image in _shift_images(g, full_shift):
        if recognize_extremal(image, n, m).kind is kind:
            hits.append(pair)
            if own is not kind:
                measured = {"rho": [_rho_entry(g, params.tol)], "target": target}
                witness = {
                    "reason": "shifted_image_extremal_but_graph_not",
                    "pair": list(pair) if pair else None,
                    "image": encode_graph6(image),
                }
                return Evaluation(
                    "counterexample", _certificate("PROP", params, [g], measured, True, witness)
                )
    if not emit_all:
        return SILENT_PASS
    measured = {"rho": [_rho_entry(g, params.tol)], "target": target}
    witness = {"recognized": own.value, "extremal_images": len(hits)}
    return Evaluation("pass", _certificate("PROP", params, [g], measured, False, witness))


def check_extremal_rigidity(plan: SweepPlan, full_shift: bool = False) -> Iterator[Certificate]:
    n, m = plan.n, plan.m
    if n > ISOMORPHISM_MAX_N:
        raise ValueError(f"Rigidity sweeps run for n <= {ISOMORPHISM_MAX_N}, got n={n}.")
    threshold(n, m)
    check = "rigidity_full_shift" if full_shift else "rigidity"
    for kind in (ExtremalKind.A_M_PLUS_1, ExtremalKind.A1):
        p = ExtremalParams(n, m, extremal_index(kind, m))
        target = closed_form_rho_extremal(p)
        size = construct_extremal(p).edge_count
        flt = GraphFilter(min_rho=target - SPECTRAL_MARGIN, max_rho=target + SPECTRAL_MARGIN)
        params = _base_params(plan, kind.value, check, "exhaustive")
        stats: Counter = Counter()
        for cand in fixed_size_scan(n, size, flt, plan.budget):
            stats["candidates"] += 1
            result = evaluate_rigidity(
                cand.graph, params.model_copy(update={"index": [cand.index]}), plan.emit_all
            )
            stats[result.status] += 1
            if result.certificate is not None:
                yield result.certificate
        yield _summary("PROP", params, stats, {"target": target, "edges": size})


# ---------------------------------------------------------------------------
# structural properties used along the way


@functools.lru_cache(maxsize=4096)
def _single_rho(g: Graph) -> float:
    return float(spectral_radii(adjacency_matrix(g))[0])


def evaluate_csikvari(g: Graph, pair: tuple[int, int], params: CertificateParams, emit_all: bool = False) -> Evaluation:
    x, y = pair
    image = shift_xy(g, x, y)
    before, after = _single_rho(g), _single_rho(image)
    ok = after >= before - params.margin
    if ok and not emit_all:
        return SILENT_PASS
    measured = {
        "pair": [x, y],
        "rho": [_rho_entry(g, params.tol), _rho_entry(image, params.tol)],
        "delta": after - before,
    }
    witness = None if ok else {"reason": "shift_decreased_rho"}
    return Evaluation(
        "pass" if ok else "counterexample",
        _certificate("PROP", params, [g, image], measured, not ok, witness),
    )


def evaluate_shift_strictness(
    g: Graph, pair: tuple[int, int], params: CertificateParams, emit_all: bool = False
) -> Evaluation:
    x, y = pair
    image = shift_xy(g, x, y)
    if graphs_equal(g, image):
        return SKIPPED
    before, after = _single_rho(g), _single_rho(image)
    ok = after > before + params.margin or are_isomorphic(g, image)
    if ok and not emit_all:
        return SILENT_PASS
    measured = {
        "pair": [x, y],
        "rho": [_rho_entry(g, params.tol), _rho_entry(image, params.tol)],
        "delta": after - before,
    }
    witness = None if ok else {"reason": "no_strict_increase_and_not_isomorphic"}
    return Evaluation(
        "pass" if ok else "counterexample",
        _certificate("PROP", params, [g, image], measured, not ok, witness),
    )


def evaluate_shift_order(g: Graph, params: CertificateParams, emit_all: bool = False) -> Evaluation:
    """Lexicographic and reverse full shifts should agree up to isomorphism; disagreement is reported, not failed."""
    lex = fully_shift(g, "lex").result
    rev = fully_shift(g, "reverse").result
    same = graphs_equal(lex, rev) or are_isomorphic(lex, rev)
    if same and not emit_all:
        return SILENT_PASS
    measured = {"rho": [_rho_entry(lex, params.tol), _rho_entry(rev, params.tol)]}
    witness = None if same else {"order_dependent": True}
    return Evaluation(
        "pass" if same else "notable",
        _certificate("PROP", params, [g, lex, rev], measured, False, witness),
    )


def _swap_is_automorphism(g: Graph, u: int, v: int) -> bool:
    perm = list(range(1, g.n + 1))
    perm[u - 1], perm[v - 1] = v, u
    return graphs_equal(g, relabel(g, perm))


def evaluate_rewire(
    g: Graph, pair: tuple[int, int], params: CertificateParams, emit_all: bool = False
) -> Evaluation:
    """Moving N(v) - N[u] over to u raises rho whenever x_u >= x_v.

    Exact ties are recognized structurally: swapping u and v fixes the graph. Any
    other pair has to clear ``margin``.
    """
    u, v = pair
    if not is_connected(g) or not rewire_set(g, u, v):
        return SKIPPED
    base = spectral_radius(g, params.tol)
    tie = _swap_is_automorphism(g, u, v)
    if not tie and base.vector[u - 1] < base.vector[v - 1] + params.margin:
        return SKIPPED
    rewired = rewire_neighbors(g, u, v)
    after = spectral_radius(rewired, params.tol)
    ok = after.rho > base.rho + params.margin
    if ok and not emit_all:
        return SILENT_PASS
    measured = {
        "pair": [u, v],
        "rho": [_rho_entry(g, params.tol), _rho_entry(rewired, params.tol)],
        "perron": [base.vector[u - 1], base.vector[v - 1]],
        "tie": tie,
    }
    witness = None if ok else {"reason": "rewiring_did_not_raise_rho"}
    return Evaluation(
        "pass" if ok else "counterexample",
        _certificate("PROP", params, [g, rewired], measured, not ok, witness),
    )


def evaluate_rainbow_preservation(
    members: Sequence[Graph], params: CertificateParams, emit_all: bool = False
) -> Evaluation:
    family = GraphFamily.of(members)
    fast = find_rainbow(family)
    slow = brute_force_rainbow(family)
    shifted = find_rainbow(fully_shift_family(family))
    problems = []
    if (fast is None) != (slow is None):
        problems.append("find_rainbow disagrees with tuple enumeration")
    if fast is not None and not fast.is_valid_for(family):
        problems.append("find_rainbow returned an invalid matching")
    if shifted is not None and fast is None:
        problems.append("shifted family has a rainbow matching but the family does not")
    if not problems and not emit_all:
        return SILENT_PASS
    measured = {
        "rainbow": fast is not None,
        "oracle": slow is not None,
        "shifted_rainbow": shifted is not None,
    }
    witness = {"problems": problems} if problems else None
    return Evaluation(
        "counterexample" if problems else "pass",
        _certificate("PROP", params, members, measured, bool(problems), witness),
    )


def evaluate_constructor(
    members: Sequence[Graph], params: CertificateParams, emit_all: bool = False
) -> Evaluation:
    family = GraphFamily.of(members)
    kind = ExtremalKind(params.regime)
    build = rainbow_from_split_family if kind is ExtremalKind.A_M_PLUS_1 else rainbow_from_clique_family
    rm = build(family, params.m)
    problems = rm.violations(family)
    if find_rainbow(family) is None:
        problems.append("find_rainbow found nothing")
    if not problems and not emit_all:
        return SILENT_PASS
    measured = {"picks": _picks_json(rm)}
    witness = {"problems": problems} if problems else None
    return Evaluation(
        "counterexample" if problems else "pass",
        _certificate("PROP", params, members, measured, bool(problems), witness),
    )


def _collect(
    params: CertificateParams,
    results: Iterable[Evaluation],
    measured: Optional[dict] = None,
) -> Iterator[Certificate]:
    stats: Counter = Counter()
    for result in results:
        stats[result.status] += 1
        if result.certificate is not None:
            yield result.certificate
    yield _summary("PROP", params, stats, measured)


def check_csikvari(plan: SweepPlan) -> Iterator[Certificate]:
    params = _base_params(plan, "-", "csikvari", "sampled")
    rng = random_generator(plan.seed)

    def results() -> Iterator[Evaluation]:
        for draw in range(plan.samples):
            size = int(rng.integers(2, plan.n + 1))
            g = random_graph(size, rng)
            instance = params.model_copy(update={"n": size, "index": [draw]})
            for x in range(1, size + 1):
                for y in range(1, size + 1):
                    if x != y:
                        yield evaluate_csikvari(g, (x, y), instance, plan.emit_all)

    return _collect(params, results())


def _graphs_for(plan: SweepPlan, n: int, rng: np.random.Generator) -> tuple[str, Iterator[tuple[int, Graph]]]:
    """All graphs on [n] when there are at most ``samples`` of them, else seeded draws."""
    if graph_count(n) <= plan.samples:
        return "exhaustive", ((c.index, c.graph) for c in exhaustive_scan(n, GraphFilter(), plan.budget))
    return "sampled", ((draw, random_graph(n, rng)) for draw in range(plan.samples))


def _exhaustive_sizes(plan: SweepPlan, up_to: int, cost: Callable[[int], int]) -> list[int]:
    """Sizes 2..up_to whose full scan fits the budget."""
    return [n for n in range(2, up_to + 1) if cost(n) <= plan.budget]


def _mode_of(modes: Sequence[str]) -> str:
    return "+".join(dict.fromkeys(modes))


def _pair_count(n: int) -> int:
    return graph_count(n) ** 2


def check_shift_strictness(plan: SweepPlan) -> Iterator[Certificate]:
    """Every connected graph on up to STRICTNESS_EXHAUSTIVE_MAX_N vertices, then plan.n by _graphs_for."""
    top = min(plan.n, ISOMORPHISM_MAX_N)
    rng = random_generator(plan.seed)
    sizes = [
        (n, "exhaustive", ((c.index, c.graph) for c in exhaustive_scan(n, GraphFilter(), plan.budget)))
        for n in _exhaustive_sizes(plan, min(top, STRICTNESS_EXHAUSTIVE_MAX_N), graph_count)
    ]
    if not sizes or sizes[-1][0] < top:
        sizes.append((top, *_graphs_for(plan, top, rng)))
    params = _base_params(plan, "-", "shift_strictness", _mode_of([mode for _, mode, _ in sizes]))
    params = params.model_copy(update={"n": top})

    def results() -> Iterator[Evaluation]:
        for n, mode, graphs in sizes:
            for index, g in graphs:
                if not is_connected(g):
                    yield SKIPPED
                    continue
                instance = params.model_copy(update={"n": n, "mode": mode, "index": [index]})
                for x in range(1, n + 1):
                    for y in range(1, n + 1):
                        if x != y:
                            yield evaluate_shift_strictness(g, (x, y), instance, plan.emit_all)

    return _collect(params, results(), {"sizes": [[n, mode] for n, mode, _ in sizes]})


def check_shift_order(plan: SweepPlan) -> Iterator[Certificate]:
    n = min(plan.n, ISOMORPHISM_MAX_N)
    rng = random_generator(plan.seed)
    mode, graphs = _graphs_for(plan, n, rng)
    params = _base_params(plan, "-", "shift_order", mode).model_copy(update={"n": n})
    return _collect(
        params,
        (evaluate_shift_order(g, params.model_copy(update={"index": [index]}), plan.emit_all) for index, g in graphs),
    )


def check_rewire(plan: SweepPlan) -> Iterator[Certificate]:
    params = _base_params(plan, "-", "rewire", "sampled")
    rng = random_generator(plan.seed)

    def results() -> Iterator[Evaluation]:
        for draw in range(plan.samples):
            size = int(rng.integers(3, max(plan.n, 3) + 1))
            g = random_graph(size, rng)
            if not is_connected(g):
                yield SKIPPED
                continue
            u, v = (int(w) + 1 for w in rng.choice(size, size=2, replace=False))
            instance = params.model_copy(update={"n": size, "index": [draw]})
            yield evaluate_rewire(g, (u, v), instance, plan.emit_all)

    return _collect(params, results())


def check_rainbow_preservation(plan: SweepPlan) -> Iterator[Certificate]:
    """Pairs of graphs (m = 1): every pair on up to PRESERVATION_EXHAUSTIVE_MAX_N vertices,
    then plan.n exhaustively when its pairs fit the budget, else by seeded draws."""
    rng = random_generator(plan.seed)
    exhaustive = _exhaustive_sizes(plan, min(plan.n, PRESERVATION_EXHAUSTIVE_MAX_N), _pair_count)
    if plan.n > PRESERVATION_EXHAUSTIVE_MAX_N and _pair_count(plan.n) <= plan.budget:
        exhaustive.append(plan.n)

    def all_pairs(n: int) -> Iterator[tuple[int, list[Graph]]]:
        everything = [c.graph for c in exhaustive_scan(n, GraphFilter(), plan.budget)]
        yield from ((pos, [a, b]) for pos, (a, b) in enumerate(itertools.product(everything, repeat=2)))

    sizes = [(n, "exhaustive", all_pairs(n)) for n in exhaustive]
    if plan.n not in exhaustive:
        draws = ((draw, [random_graph(plan.n, rng), random_graph(plan.n, rng)]) for draw in range(plan.samples))
        sizes.append((plan.n, "sampled", draws))
    params = _base_params(plan, "-", "rainbow_preservation", _mode_of([mode for _, mode, _ in sizes]))
    params = params.model_copy(update={"m": 1})
    return _collect(
        params,
        (
            evaluate_rainbow_preservation(
                members, params.model_copy(update={"n": n, "mode": mode, "index": [index]}), plan.emit_all
            )
            for n, mode, families in sizes
            for index, members in families
        ),
        {"sizes": [[n, mode] for n, mode, _ in sizes]},
    )


def check_constructors(plan: SweepPlan) -> Iterator[Certificate]:
    n, m = plan.n, plan.m
    threshold(n, m)
    rng = random_generator(plan.seed)
    for kind in (ExtremalKind.A_M_PLUS_1, ExtremalKind.A1):
        params = _base_params(plan, kind.value, "constructors", "sampled")

        def results(kind: ExtremalKind = kind, params: CertificateParams = params) -> Iterator[Evaluation]:
            for draw in range(plan.samples):
                members = [random_extremal_copy(n, m, kind, rng) for _ in range(m + 1)]
                witnesses = {recognize_extremal(g, n, m).witness for g in members}
                if len(witnesses) == 1:
                    yield SKIPPED
                    continue
                yield evaluate_constructor(members, params.model_copy(update={"index": [draw]}), plan.emit_all)

        yield from _collect(params, results())


def check_props(plan: SweepPlan) -> Iterator[Certificate]:
    yield from check_csikvari(plan)
    yield from check_shift_strictness(plan)
    yield from check_shift_order(plan)
    yield from check_rewire(plan)
    yield from check_rainbow_preservation(plan)
    if plan.n >= 2 * plan.m + 2:
        yield from check_constructors(plan)
    else:
        _LOGGER.warning("skipping constructor checks: n=%d < 2m+2 for m=%d", plan.n, plan.m)


# ---------------------------------------------------------------------------
# replay


def _pair_of(cert: Certificate) -> tuple[int, int]:
    pair = cert.measured.get("pair")
    if not pair or len(pair) != 2:
        raise ValueError("Certificate carries no vertex pair to replay.")
    return int(pair[0]), int(pair[1])


def _replayer(cert: Certificate) -> Callable[[list[Graph], CertificateParams], Evaluation]:
    check = cert.params.check
    if cert.kind == "T12":
        return lambda graphs, p: evaluate_t12(graphs[0], p, True)
    if cert.kind in ("T11", "T13"):
        return lambda graphs, p: evaluate_family(cert.kind, graphs, p, True)
    if check == "shifted_structure":
        return lambda graphs, p: evaluate_shifted_structure(graphs, p, True)
    if check in ("rigidity", "rigidity_full_shift"):
        return lambda graphs, p: evaluate_rigidity(graphs[0], p, True)
    if check == "csikvari":
        return lambda graphs, p: evaluate_csikvari(graphs[0], _pair_of(cert), p, True)
    if check == "shift_strictness":
        return lambda graphs, p: evaluate_shift_strictness(graphs[0], _pair_of(cert), p, True)
    if check == "shift_order":
        return lambda graphs, p: evaluate_shift_order(graphs[0], p, True)
    if check == "rewire":
        return lambda graphs, p: evaluate_rewire(graphs[0], _pair_of(cert), p, True)
    if check == "rainbow_preservation":
        return lambda graphs, p: evaluate_rainbow_preservation(graphs, p, True)
    if check == "constructors":
        return lambda graphs, p: evaluate_constructor(graphs, p, True)
    raise ValueError(f"Don't know how to replay a {cert.kind} certificate with check {check!r}.")


def replay(cert: Certificate) -> Certificate:
    """Re-run the single instance a certificate describes and rebuild its certificate."""
    if cert.is_summary:
        raise ValueError("Summary certificates describe a whole sweep and cannot be replayed.")
    if not cert.instance:
        raise ValueError("Certificate has no instance.")
    graphs = [decode_graph6(text) for text in cert.instance]
    result = _replayer(cert)(graphs, cert.params)
    if result.certificate is None:
        raise ValueError("Instance no longer satisfies the sweep's hypothesis.")
    return result.certificate


def replays_identically(cert: Certificate) -> bool:
    return replay(cert) == cert


def run_check(name: str, plan: SweepPlan, full_shift: bool = False) -> Iterator[Certificate]:
    checks: dict[str, Callable[[SweepPlan], Iterator[Certificate]]] = {
        "t11": check_T11,
        "t12": check_T12,
        "t13": check_T13,
        "props": check_props,
    }
    if name == "rigidity":
        return check_extremal_rigidity(plan, full_shift)
    if name not in checks:
        raise ValueError(f"Unknown check {name!r}.")
    return checks[name](plan)
