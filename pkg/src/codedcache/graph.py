"""Packet-level demands and the index-coding conflict graph."""

from __future__ import annotations

from dataclasses import dataclass, field

from .demand import DemandVector
from .placement import CacheConfiguration, SystemParams

__all__ = ["PacketDemand", "Vertex", "ConflictGraph", "packet_demand", "build_conflict_graph"]


@dataclass(frozen=True)
class PacketDemand:
    """Per-user sets of demanded (file, packet) pairs.

    ``per_user[u-1]`` lists the (f, b) pairs user u must receive: the
    packets of its requested file that it does not cache.
    """

    per_user: tuple[tuple[tuple[int, int], ...], ...]

    @property
    def n(self) -> int:
        return len(self.per_user)

    def demanded(self, user: int) -> tuple[tuple[int, int], ...]:
        return self.per_user[user - 1]


@dataclass(frozen=True)
class Vertex:
    """One (demanded packet, requester) pair of the conflict graph.

    rho: packet identity (file, packet index); mu: requesting user;
    eta: all users caching the packet. The requester never caches its own
    demanded packet, so mu is not in eta.
    """

    rho: tuple[int, int]
    mu: int
    eta: frozenset[int]

    @property
    def label(self) -> frozenset[int]:
        """The unordered requester-or-cacher user set used by GCC1."""
        return self.eta | {self.mu}


def conflict(v1: Vertex, v2: Vertex) -> bool:
    """Edge rule: distinct packets that cannot share a coded transmission."""
    if v1.rho == v2.rho:
        return False
    return v1.mu not in v2.eta or v2.mu not in v1.eta


@dataclass(frozen=True)
class ConflictGraph:
    """Vertices in canonical (file, packet, requester) order; edges lazy.

    Adjacency is computed on demand: ``has_edge`` for point queries,
    ``adjacency`` materializes sorted neighbor lists (meant for the small
    graphs fed to the exact coloring oracle).
    """

    vertices: tuple[Vertex, ...]
    _adjacency: list = field(default=None, compare=False, repr=False)

    def __len__(self) -> int:
        return len(self.vertices)

    def has_edge(self, i: int, j: int) -> bool:
        if i == j:
            return False
        return conflict(self.vertices[i], self.vertices[j])

    def adjacency(self) -> list[list[int]]:
        """Sorted neighbor lists, materialized once and cached."""
        if self._adjacency is None:
            nv = len(self.vertices)
            adj = [[] for _ in range(nv)]
            for i in range(nv):
                vi = self.vertices[i]
                for j in range(i + 1, nv):
                    if conflict(vi, self.vertices[j]):
                        adj[i].append(j)
                        adj[j].append(i)
            object.__setattr__(self, "_adjacency", adj)
        return self._adjacency

    def edge_list_dump(self) -> str:
        """Debug dump: vertex-label header then one ``v1 v2`` line per edge."""
        lines = ["# vertex: index file packet requester cachers"]
        for i, v in enumerate(self.vertices):
            eta = ",".join(str(u) for u in sorted(v.eta))
            lines.append(f"# {i} {v.rho[0]} {v.rho[1]} {v.mu} {eta}")
        for i, nbrs in enumerate(self.adjacency()):
            for j in nbrs:
                if i < j:
                    lines.append(f"{i} {j}")
        return "\n".join(lines) + "\n"


def packet_demand(
    C: CacheConfiguration, f: DemandVector, params: SystemParams
) -> PacketDemand:
    """Per-user demanded packets: the complement of the cached set of the
    requested file."""
    if f.n != params.n or C.n != params.n or C.m != params.m or C.B != params.B:
        raise ValueError("cache configuration, demand vector and params disagree")
    per_user = []
    for u, fu in enumerate(f.entries, 1):
        have = set(C.cached(u, fu))
        per_user.append(tuple((fu, b) for b in range(1, params.B + 1) if b not in have))
    return PacketDemand(per_user=tuple(per_user))


def build_conflict_graph(C: CacheConfiguration, Q: PacketDemand) -> ConflictGraph:
    """One vertex per (demanded packet, requester); eta shared per packet."""
    # cacher sets per file, derived in bulk from the membership matrix
    eta_by_file: dict[int, list[frozenset[int]]] = {}

    def eta_of(packet: tuple[int, int]) -> frozenset[int]:
        f, b = packet
        per_packet = eta_by_file.get(f)
        if per_packet is None:
            mat = C.cache_matrix(f)
            per_packet = [
                frozenset(int(u) + 1 for u in mat[:, b0].nonzero()[0])
                for b0 in range(C.B)
            ]
            eta_by_file[f] = per_packet
        return per_packet[b - 1]

    raw = []
    for u in range(1, Q.n + 1):
        for packet in Q.demanded(u):
            raw.append(Vertex(rho=packet, mu=u, eta=eta_of(packet)))
    raw.sort(key=lambda v: (v.rho[0], v.rho[1], v.mu))
    return ConflictGraph(vertices=tuple(raw))
