"""Undirected weighted graphs: construction, random generators, file ingestion.

All vertex ids are 0-based.  Randomized generators use numpy's PCG64
generator (``np.random.default_rng``) seeded explicitly, so equal
(parameters, seed) reproduce the same graph bit-for-bit on any platform.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    EmptyFileError,
    IsolatedVertexError,
    ParseError,
    SelfLoopError,
)


@dataclass(frozen=True, eq=False)
class Graph:
    """Undirected weighted graph.

    adjacency is a symmetric nonnegative matrix with zero diagonal;
    a positive entry a_ij is the weight of edge (i, j).  coordinates,
    when present, are per-vertex positions in the unit torus [0,1)^2.
    """

    adjacency: np.ndarray
    coordinates: np.ndarray | None = None

    def __post_init__(self):
        a = np.asarray(self.adjacency, dtype=float)
        if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
            raise ValueError("adjacency must be a square matrix with n >= 1")
        if not np.array_equal(a, a.T):
            raise ValueError("adjacency must be exactly symmetric")
        if np.any(np.diag(a) != 0.0):
            raise ValueError("adjacency diagonal must be zero")
        if np.any(a < 0.0):
            raise ValueError("adjacency entries must be nonnegative")
        object.__setattr__(self, "adjacency", a)
        if self.coordinates is not None:
            c = np.asarray(self.coordinates, dtype=float)
            if c.shape != (a.shape[0], 2):
                raise ValueError("coordinates must have shape (n, 2)")
            object.__setattr__(self, "coordinates", c)

    @property
    def n(self) -> int:
        return self.adjacency.shape[0]

    @property
    def degrees(self) -> np.ndarray:
        return self.adjacency.sum(axis=1)

    def edge_count(self) -> int:
        return int(np.count_nonzero(np.triu(self.adjacency)))


@dataclass(frozen=True, eq=False)
class Laplacian:
    """Graph Laplacian: degree matrix minus adjacency (or its normalized form)."""

    matrix: np.ndarray
    degree: np.ndarray = field(repr=False)


def build_laplacian(g: Graph) -> Laplacian:
    """Combinatorial Laplacian Diag(degrees) - adjacency (zero row sums)."""
    k = g.degrees
    lap = np.diag(k) - g.adjacency
    return Laplacian(matrix=lap, degree=k)


def build_normalized_laplacian(g: Graph) -> Laplacian:
    """Symmetric normalized Laplacian K^{-1/2} (K - A) K^{-1/2}.

    Raises IsolatedVertexError when a vertex has zero degree, since the
    normalization divides by sqrt(degree).
    """
    k = g.degrees
    if np.any(k <= 0.0):
        bad = int(np.argmin(k))
        raise IsolatedVertexError(f"vertex {bad} has zero degree")
    inv_sqrt = 1.0 / np.sqrt(k)
    lap = (np.diag(k) - g.adjacency) * inv_sqrt[:, None] * inv_sqrt[None, :]
    lap = 0.5 * (lap + lap.T)  # re-symmetrize rounding noise
    return Laplacian(matrix=lap, degree=k)


def toroidal_distances(coords: np.ndarray) -> np.ndarray:
    """Pairwise distances on the unit torus (per-axis wrap-around)."""
    delta = np.abs(coords[:, None, :] - coords[None, :, :])
    delta = np.minimum(delta, 1.0 - delta)
    return np.sqrt((delta**2).sum(axis=-1))


def generate_rgg_torus(n: int, r0: float, seed: int) -> Graph:
    """Random geometric graph on the unit torus.

    n points are placed i.i.d. uniformly on [0,1)^2; vertices closer than
    r0 in toroidal distance are joined with unit weight.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if r0 < 0:
        raise ValueError("r0 must be >= 0")
    rng = np.random.default_rng(seed)
    coords = rng.random((n, 2))
    dist = toroidal_distances(coords)
    adj = ((dist <= r0) & ~np.eye(n, dtype=bool)).astype(float)
    return Graph(adjacency=adj, coordinates=coords)


def generate_scale_free(n: int, m: int, seed: int) -> Graph:
    """Scale-free graph by preferential attachment.

    Starts from a clique on m+1 vertices; every further vertex attaches m
    edges to distinct existing vertices picked with probability
    proportional to their current degree.  Always connected.
    """
    if not (n > m >= 1):
        raise ValueError("need n > m >= 1")
    rng = np.random.default_rng(seed)
    adj = np.zeros((n, n))
    seed_size = m + 1
    adj[:seed_size, :seed_size] = 1.0 - np.eye(seed_size)
    degree = adj.sum(axis=1)
    for v in range(seed_size, n):
        chosen: list[int] = []
        weights = degree[:v].copy()
        for _ in range(m):
            p = weights / weights.sum()
            u = int(rng.choice(v, p=p))
            chosen.append(u)
            weights[u] = 0.0  # attachments to distinct vertices
        for u in chosen:
            adj[v, u] = adj[u, v] = 1.0
            degree[u] += 1.0
        degree[v] = m
    return Graph(adjacency=adj)


def load_edge_list(path) -> Graph:
    """Read a graph from a text edge list.

    Each non-comment line is ``i j [w]`` with 0-based vertex ids and an
    optional positive weight (default 1.0).  '#' starts a comment; blank
    lines are skipped; duplicate edges keep the last weight.
    """
    edges: list[tuple[int, int, float]] = []
    with open(path, "r", encoding="utf-8", newline=None) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) not in (2, 3):
                raise ParseError(f"{path}:{lineno}: expected 'i j [w]', got {raw!r}")
            try:
                i, j = int(parts[0]), int(parts[1])
                w = float(parts[2]) if len(parts) == 3 else 1.0
            except ValueError as exc:
                raise ParseError(f"{path}:{lineno}: {exc}") from exc
            if i < 0 or j < 0:
                raise ParseError(f"{path}:{lineno}: negative vertex id")
            if i == j:
                raise SelfLoopError(f"{path}:{lineno}: self-loop on vertex {i}")
            if w <= 0.0:
                raise ParseError(f"{path}:{lineno}: weight must be positive")
            edges.append((i, j, w))
    if not edges:
        raise EmptyFileError(f"{path}: no edges found")
    n = 1 + max(max(i, j) for i, j, _ in edges)
    adj = np.zeros((n, n))
    for i, j, w in edges:
        adj[i, j] = adj[j, i] = w
    return Graph(adjacency=adj)


def connected_components(g: Graph) -> list[list[int]]:
    """Connected components by breadth-first search (sorted vertex lists)."""
    n = g.n
    seen = np.zeros(n, dtype=bool)
    comps: list[list[int]] = []
    for start in range(n):
        if seen[start]:
            continue
        queue = [start]
        seen[start] = True
        comp = []
        while queue:
            v = queue.pop()
            comp.append(v)
            for u in np.flatnonzero(g.adjacency[v] > 0.0):
                if not seen[u]:
                    seen[u] = True
                    queue.append(int(u))
        comps.append(sorted(comp))
    return comps


def is_connected(g: Graph) -> bool:
    return len(connected_components(g)) == 1
