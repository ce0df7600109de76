"""Undirected interaction networks and their generators.

Agents sit on nodes and play only along edges. The wrap-around grid is the
reference topology (every node has exactly four neighbors); ring-rewiring
small-world and degree-preferential growth graphs are provided as
alternative structures. Random generators consume the caller's RNG so a
replicate's network is part of its reproducible stream.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Union

import numpy as np

from .errors import InvalidTopology


@dataclass(frozen=True)
class TorusSpec:
    width: int
    height: int

    @property
    def node_count(self) -> int:
        return self.width * self.height


@dataclass(frozen=True)
class SmallWorldSpec:
    n: int
    k: int = 4
    p_rewire: float = 0.1

    @property
    def node_count(self) -> int:
        return self.n


@dataclass(frozen=True)
class PreferentialAttachmentSpec:
    n: int
    m: int = 2

    @property
    def node_count(self) -> int:
        return self.n


NetworkSpec = Union[TorusSpec, SmallWorldSpec, PreferentialAttachmentSpec]


class Network:
    """Adjacency in CSR form: ``neighbors[offsets[i]:offsets[i+1]]``."""

    def __init__(self, node_count: int, neighbors: np.ndarray, offsets: np.ndarray):
        self.node_count = node_count
        self.neighbors = neighbors
        self.offsets = offsets

    @property
    def degrees(self) -> np.ndarray:
        return np.diff(self.offsets)

    @property
    def edge_count(self) -> int:
        return int(self.offsets[-1]) // 2

    def adjacency(self, i: int) -> np.ndarray:
        return self.neighbors[self.offsets[i] : self.offsets[i + 1]]

    @classmethod
    def from_edges(cls, node_count: int, edges: Iterable[tuple[int, int]]) -> "Network":
        """Build from undirected edge pairs, validating the invariants."""
        adj: list[set[int]] = [set() for _ in range(node_count)]
        for u, v in edges:
            if u == v:
                raise InvalidTopology(f"self-loop at node {u}")
            if not (0 <= u < node_count and 0 <= v < node_count):
                raise InvalidTopology(f"edge ({u}, {v}) out of range")
            if v in adj[u]:
                raise InvalidTopology(f"duplicate edge ({u}, {v})")
            adj[u].add(v)
            adj[v].add(u)
        offsets = np.zeros(node_count + 1, dtype=np.int64)
        for i, nb in enumerate(adj):
            offsets[i + 1] = offsets[i] + len(nb)
        neighbors = np.empty(offsets[-1], dtype=np.int32)
        for i, nb in enumerate(adj):
            neighbors[offsets[i] : offsets[i + 1]] = sorted(nb)
        return cls(node_count, neighbors, offsets)

    def validate(self) -> None:
        """Check undirectedness, no self-loops, no duplicates."""
        for i in range(self.node_count):
            nbrs = self.adjacency(i)
            if len(set(nbrs.tolist())) != len(nbrs):
                raise InvalidTopology(f"duplicate neighbor at node {i}")
            for j in nbrs:
                if j == i:
                    raise InvalidTopology(f"self-loop at node {i}")
                if i not in self.adjacency(int(j)):
                    raise InvalidTopology(f"edge ({i}, {j}) not symmetric")

    def is_connected(self) -> bool:
        if self.node_count == 0:
            return True
        seen = np.zeros(self.node_count, dtype=bool)
        stack = [0]
        seen[0] = True
        while stack:
            i = stack.pop()
            for j in self.adjacency(i):
                if not seen[j]:
                    seen[j] = True
                    stack.append(int(j))
        return bool(seen.all())


def torus(width: int, height: int) -> Network:
    """Wrap-around grid; every node has exactly 4 distinct neighbors."""
    if width < 3 or height < 3:
        raise InvalidTopology(f"torus needs width, height >= 3, got {width}x{height}")
    n = width * height
    idx = np.arange(n)
    col = idx % width
    row = idx // width
    left = row * width + (col - 1) % width
    right = row * width + (col + 1) % width
    up = ((row - 1) % height) * width + col
    down = ((row + 1) % height) * width + col
    neighbors = np.stack([left, right, up, down], axis=1).ravel().astype(np.int32)
    offsets = np.arange(0, 4 * n + 1, 4, dtype=np.int64)
    return Network(n, neighbors, offsets)


def small_world(n: int, k: int, p_rewire: float, rng: np.random.Generator) -> Network:
    """Ring lattice with k nearest neighbors, each edge rewired with
    probability p_rewire to a uniform random target (no self-loops or
    duplicates; rewiring keeps the edge count at n*k/2)."""
    if k % 2 != 0:
        raise InvalidTopology(f"small_world needs even k, got {k}")
    if not (0 < k < n):
        raise InvalidTopology(f"small_world needs 0 < k < n, got k={k}, n={n}")
    if not 0.0 <= p_rewire <= 1.0:
        raise InvalidTopology(f"p_rewire must be in [0, 1], got {p_rewire}")
    adj: list[set[int]] = [set() for _ in range(n)]
    for i in range(n):
        for j in range(1, k // 2 + 1):
            adj[i].add((i + j) % n)
            adj[(i + j) % n].add(i)
    for i in range(n):
        for j in range(1, k // 2 + 1):
            v = (i + j) % n
            if v not in adj[i]:
                continue  # already rewired away
            if rng.random() < p_rewire:
                # full neighborhoods would leave no legal target
                if len(adj[i]) >= n - 1:
                    continue
                w = int(rng.integers(0, n))
                while w == i or w in adj[i]:
                    w = int(rng.integers(0, n))
                adj[i].discard(v)
                adj[v].discard(i)
                adj[i].add(w)
                adj[w].add(i)
    edges = [(i, j) for i in range(n) for j in adj[i] if i < j]
    return Network.from_edges(n, edges)


def preferential_attachment(n: int, m: int, rng: np.random.Generator) -> Network:
    """Growth from a (m+1)-clique; each new node attaches to m distinct
    existing nodes chosen proportionally to degree. Always connected, with
    C(m+1, 2) + m * (n - m - 1) edges."""
    if m < 1:
        raise InvalidTopology(f"preferential_attachment needs m >= 1, got {m}")
    if n <= m + 1:
        raise InvalidTopology(f"preferential_attachment needs n > m + 1, got n={n}, m={m}")
    edges: list[tuple[int, int]] = []
    # degree-weighted urn: one entry per edge endpoint
    urn: list[int] = []
    seed = m + 1
    for u in range(seed):
        for v in range(u + 1, seed):
            edges.append((u, v))
            urn.append(u)
            urn.append(v)
    for new in range(seed, n):
        targets: set[int] = set()
        while len(targets) < m:
            targets.add(urn[int(rng.integers(0, len(urn)))])
        for t in sorted(targets):
            edges.append((new, t))
            urn.append(new)
            urn.append(t)
    return Network.from_edges(n, edges)


def build_network(spec: NetworkSpec, rng: Optional[np.random.Generator] = None) -> Network:
    """Instantiate a network from its spec.

    Random topologies draw from ``rng``; the torus ignores it.
    """
    if isinstance(spec, TorusSpec):
        return torus(spec.width, spec.height)
    if rng is None:
        raise InvalidTopology(f"{type(spec).__name__} requires an RNG")
    if isinstance(spec, SmallWorldSpec):
        return small_world(spec.n, spec.k, spec.p_rewire, rng)
    if isinstance(spec, PreferentialAttachmentSpec):
        return preferential_attachment(spec.n, spec.m, rng)
    raise InvalidTopology(f"unknown network spec {spec!r}")
