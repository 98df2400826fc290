"""Greedy constrained coloring and an exact chromatic-number oracle."""

from __future__ import annotations

from collections import OrderedDict
from dataclasses import dataclass

import numpy as np

from .errors import GraphTooLarge
from .graph import ConflictGraph

__all__ = [
    "Coloring",
    "gcc1",
    "gcc2",
    "gcc",
    "exact_chromatic",
    "validate_coloring",
]


@dataclass(frozen=True)
class Coloring:
    """A partition of the vertex indices into independent color classes."""

    classes: tuple[tuple[int, ...], ...]
    algorithm: str

    @property
    def num_colors(self) -> int:
        return len(self.classes)


def gcc1(graph: ConflictGraph, rng: np.random.Generator | None = None) -> Coloring:
    """Greedy coloring constrained to equal requester-or-cacher user labels.

    Processes vertices in canonical order (or a seeded shuffle when ``rng``
    is given): the first unprocessed vertex roots a class, which absorbs
    every remaining vertex that shares its user label and conflicts with no
    class member.

    Vertices sharing a label conflict exactly when their requesters
    coincide, so each class takes at most one vertex per requester; the
    quadratic inner scan of the verbatim algorithm is organized as
    per-label requester buckets without changing its output.
    """
    order = list(range(len(graph)))
    if rng is not None:
        rng.shuffle(order)

    # label -> requester -> vertices in processing order
    groups: "OrderedDict[frozenset, OrderedDict[int, list[int]]]" = OrderedDict()
    for i in order:
        v = graph.vertices[i]
        buckets = groups.setdefault(v.label, OrderedDict())
        buckets.setdefault(v.mu, []).append(i)

    classes = []
    for buckets in groups.values():
        depth = max(len(b) for b in buckets.values())
        for r in range(depth):
            cls = tuple(b[r] for b in buckets.values() if r < len(b))
            classes.append(cls)
    return Coloring(classes=tuple(classes), algorithm="gcc1")


def gcc2(graph: ConflictGraph) -> Coloring:
    """Naive multicasting: one class per distinct demanded packet."""
    by_packet: "OrderedDict[tuple[int, int], list[int]]" = OrderedDict()
    for i, v in enumerate(graph.vertices):
        by_packet.setdefault(v.rho, []).append(i)
    classes = tuple(tuple(members) for members in by_packet.values())
    return Coloring(classes=classes, algorithm="gcc2")


def gcc(graph: ConflictGraph) -> Coloring:
    """The better of gcc1 and gcc2; ties go to gcc1."""
    c1 = gcc1(graph)
    c2 = gcc2(graph)
    chosen = c1 if c1.num_colors <= c2.num_colors else c2
    return Coloring(classes=chosen.classes, algorithm="gcc")


def exact_chromatic(graph: ConflictGraph, vertex_limit: int = 64) -> Coloring:
    """Minimum proper coloring by branch and bound.

    DSATUR ordering with a greedy-clique lower bound; the gcc result primes
    the upper bound. Intended for test-oracle use on tiny graphs.
    """
    nv = len(graph)
    if nv > vertex_limit:
        raise GraphTooLarge(f"{nv} vertices exceeds limit {vertex_limit}")
    if nv == 0:
        return Coloring(classes=(), algorithm="exact")

    adj = [set(nbrs) for nbrs in graph.adjacency()]
    primer = gcc(graph)
    best_assign = [0] * nv
    for color, members in enumerate(primer.classes):
        for i in members:
            best_assign[i] = color
    best_count = primer.num_colors

    # greedy clique on highest-degree vertices: lower bound
    by_degree = sorted(range(nv), key=lambda i: -len(adj[i]))
    clique = []
    for i in by_degree:
        if all(j in adj[i] for j in clique):
            clique.append(i)
    lower = len(clique)

    assign = [-1] * nv
    found = list(best_assign)

    def choose_next():
        # DSATUR: most distinctly-colored neighbors, degree breaks ties
        best_i, best_key = -1, (-1, -1)
        for i in range(nv):
            if assign[i] >= 0:
                continue
            sat = len({assign[j] for j in adj[i] if assign[j] >= 0})
            key = (sat, len(adj[i]))
            if key > best_key:
                best_i, best_key = i, key
        return best_i

    def search(colored: int, used: int):
        nonlocal best_count, found
        if used >= best_count:
            return
        if colored == nv:
            best_count = used
            found = list(assign)
            return
        i = choose_next()
        forbidden = {assign[j] for j in adj[i] if assign[j] >= 0}
        for c in range(min(used + 1, best_count)):
            if c in forbidden:
                continue
            assign[i] = c
            search(colored + 1, max(used, c + 1))
            assign[i] = -1
            if best_count == lower:
                return

    # seed the clique with distinct colors to prune symmetric branches
    for c, i in enumerate(clique):
        assign[i] = c
    search(len(clique), len(clique))

    classes = [[] for _ in range(max(found) + 1)]
    for i, c in enumerate(found):
        classes[c].append(i)
    return Coloring(
        classes=tuple(tuple(sorted(c)) for c in classes if c), algorithm="exact"
    )


def validate_coloring(graph: ConflictGraph, coloring: Coloring) -> None:
    """Error unless the classes partition the vertices into independent sets."""
    seen = set()
    for members in coloring.classes:
        for i in members:
            if i in seen:
                raise ValueError(f"vertex {i} appears in more than one class")
            seen.add(i)
        for a_pos, i in enumerate(members):
            for j in members[a_pos + 1 :]:
                if graph.has_edge(i, j):
                    raise ValueError(f"class holds conflicting vertices {i}, {j}")
    if len(seen) != len(graph):
        missing = set(range(len(graph))) - seen
        raise ValueError(f"classes do not cover vertices {sorted(missing)[:5]}...")
