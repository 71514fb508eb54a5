"""
Perron root of the adjacency matrix and the closed-form extremal values.

``spectral_radius`` runs power iteration on A + I (the shift removes the
+rho/-rho oscillation of bipartite graphs) and declares convergence on the
eigen-residual ||A x - rho x||_inf, which gives an a-posteriori bound.
``spectral_radii`` is the batched dense path the sweeps use for filtering.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from math import isqrt
from typing import Optional

import numpy as np

from .config import ITERATION_CAP, default_tolerance
from .graph_core import ExtremalParams, Graph, add_edge


_LOGGER = logging.getLogger(__name__)


class NonConvergence(RuntimeError):
    pass


@dataclass(frozen=True)
class SpectralResult:
    rho: float
    vector: tuple[float, ...]
    residual: float
    iterations: int


@dataclass(frozen=True)
class MonotoneCheck:
    before: float
    after: float
    non_decreasing: bool
    strict: bool


def adjacency_matrix(g: Graph) -> np.ndarray:
    a = np.zeros((g.n, g.n), dtype=np.float64)
    for u, row in enumerate(g.rows):
        for v in range(g.n):
            if row >> v & 1:
                a[u, v] = 1.0
    return a


def spectral_radius(
    g: Graph, tol: Optional[float] = None, max_iterations: int = ITERATION_CAP
) -> SpectralResult:
    tol = default_tolerance() if tol is None else tol
    if not tol > 0:
        raise ValueError(f"Tolerance must be positive, got {tol}.")
    a = adjacency_matrix(g)
    x = np.ones(g.n, dtype=np.float64)
    for iteration in range(1, max_iterations + 1):
        ax = a @ x
        rho = float(x @ ax) / float(x @ x)
        residual = float(np.max(np.abs(ax - rho * x)))
        if residual <= tol * max(1.0, rho):
            rho = max(rho, 0.0)
            return SpectralResult(rho, tuple(float(c) for c in x), residual, iteration)
        y = ax + x
        x = y / np.max(y)
    _LOGGER.warning(
        "power iteration stalled after %d steps (residual %.3e)", max_iterations, residual
    )
    raise NonConvergence(
        f"No convergence to tol={tol} within {max_iterations} iterations "
        f"(last residual {residual:.3e})."
    )


def spectral_radii(adjacency: np.ndarray) -> np.ndarray:
    """Largest eigenvalue of each matrix in a (batch, n, n) symmetric stack."""
    if adjacency.ndim == 2:
        adjacency = adjacency[np.newaxis]
    if adjacency.shape[0] == 0:
        return np.zeros(0, dtype=np.float64)
    values = np.linalg.eigvalsh(adjacency.astype(np.float64, copy=False))[:, -1]
    return np.maximum(values, 0.0)


def _validate_nm(n: int, m: int) -> None:
    if m < 1 or n < 2 * m + 2:
        raise ValueError(f"Need m >= 1 and n >= 2m+2, got n={n}, m={m}.")


def split_graph_rho(n: int, m: int) -> float:
    """Perron root of K_m v (n-m)K_1; exact when the discriminant is a square."""
    disc = (m - 1) ** 2 + 4 * m * (n - m)
    root = isqrt(disc)
    if root * root == disc:
        return (m - 1 + root) / 2
    return (m - 1 + math.sqrt(disc)) / 2


def threshold(n: int, m: int) -> float:
    _validate_nm(n, m)
    return max(float(2 * m), split_graph_rho(n, m))


def quotient_matrix(p: ExtremalParams) -> np.ndarray:
    """Equitable-partition matrix of A^i_{n,m}: hub clique, clique part, independent part."""
    a, b, c = p.hub_size, p.clique_size, p.independent_size
    return np.array(
        [[a - 1, b, c], [a, b - 1, 0], [a, 0, 0]],
        dtype=np.float64,
    )


def closed_form_rho_extremal(p: ExtremalParams) -> float:
    if p.i == 1:
        return float(2 * p.m)
    if p.i == p.m + 1:
        return split_graph_rho(p.n, p.m)
    # roots of the 3x3 characteristic polynomial; all real for an equitable quotient
    roots = np.linalg.eigvals(quotient_matrix(p))
    return float(np.max(roots.real))


def sub_extremal_gap(n: int, m: int) -> float:
    """
    How far the intermediate graphs A^r_{n,m}, 2 <= r <= m, stay below the
    threshold (positive means strictly below). Infinite when m = 1.
    """
    bar = threshold(n, m)
    gaps = [
        bar - closed_form_rho_extremal(ExtremalParams(n, m, r)) for r in range(2, m + 1)
    ]
    return min(gaps) if gaps else math.inf


def add_edge_rho_monotone_check(
    g: Graph, u: int, v: int, tol: Optional[float] = None
) -> MonotoneCheck:
    if g.has_edge(u, v):
        raise ValueError(f"{u}{v} is already an edge.")
    tol = default_tolerance() if tol is None else tol
    before = spectral_radius(g, tol).rho
    after = spectral_radius(add_edge(g, u, v), tol).rho
    return MonotoneCheck(
        before=before,
        after=after,
        non_decreasing=after >= before - tol,
        strict=after > before + tol,
    )
