import numpy as np
import pytest

from codedcache.demand import DemandVector
from codedcache.graph import (
    ConflictGraph,
    Vertex,
    build_conflict_graph,
    conflict,
    packet_demand,
)
from codedcache.harness import example1_fixture
from codedcache.placement import (
    CachingDistribution,
    SystemParams,
    sample_cache_configuration,
)


def random_instance(seed, n=4, m=3, B=4, M=1.0):
    rng = np.random.default_rng(seed)
    params = SystemParams(n=n, m=m, M=M, B=B)
    raw = rng.dirichlet(np.ones(m))
    p = CachingDistribution(p=tuple(raw / raw.sum()))
    C = sample_cache_configuration(p, params, rng)
    f = DemandVector(entries=tuple(int(x) + 1 for x in rng.integers(0, m, n)))
    Q = packet_demand(C, f, params)
    return params, C, f, Q


class TestEdgeRule:
    def test_same_packet_never_conflicts(self):
        a = Vertex(rho=(1, 1), mu=1, eta=frozenset())
        b = Vertex(rho=(1, 1), mu=2, eta=frozenset({3}))
        assert not conflict(a, b)

    def test_mutual_side_information_no_conflict(self):
        a = Vertex(rho=(1, 1), mu=1, eta=frozenset({2}))
        b = Vertex(rho=(2, 1), mu=2, eta=frozenset({1}))
        assert not conflict(a, b)

    def test_one_sided_side_information_conflicts(self):
        a = Vertex(rho=(1, 1), mu=1, eta=frozenset({2}))
        b = Vertex(rho=(2, 1), mu=2, eta=frozenset())
        assert conflict(a, b)

    def test_symmetric(self):
        for seed in range(20):
            _, C, _, Q = random_instance(seed)
            g = build_conflict_graph(C, Q)
            for i in range(len(g)):
                for j in range(len(g)):
                    assert g.has_edge(i, j) == g.has_edge(j, i)
                assert not g.has_edge(i, i)


class TestPacketDemand:
    def test_complement_of_cache(self):
        params, C, f, Q = random_instance(5)
        for u in range(1, params.n + 1):
            fu = f.entries[u - 1]
            wanted = set(Q.demanded(u))
            cached = set(C.cached(u, fu))
            assert wanted == {(fu, b) for b in range(1, params.B + 1) if b not in cached}

    def test_dimension_mismatch_rejected(self):
        params, C, f, _ = random_instance(1)
        bad = SystemParams(n=params.n + 1, m=params.m, M=params.M, B=params.B)
        with pytest.raises(ValueError):
            packet_demand(C, f, bad)


class TestExample1:
    def test_vertex_set(self):
        params, C, f, _p = example1_fixture()
        Q = packet_demand(C, f, params)
        g = build_conflict_graph(C, Q)
        got = {(v.rho, v.mu) for v in g.vertices}
        assert got == {
            ((1, 3), 1),
            ((2, 1), 2),
            ((2, 3), 2),
            ((3, 1), 3),
            ((3, 2), 3),
            ((3, 3), 3),
        }
        assert len(g) == 6

    def test_cacher_sets(self):
        params, C, f, _p = example1_fixture()
        g = build_conflict_graph(C, packet_demand(C, f, params))
        eta = {(v.rho, v.mu): v.eta for v in g.vertices}
        assert eta[((1, 3), 1)] == frozenset({2})
        assert eta[((2, 1), 2)] == frozenset({1})
        assert eta[((2, 3), 2)] == frozenset({3})
        assert eta[((3, 1), 3)] == frozenset()
        assert eta[((3, 2), 3)] == frozenset()
        assert eta[((3, 3), 3)] == frozenset()

    def test_mergeable_pair_has_no_edge(self):
        # user 1's demanded packet of file 1 and user 2's packet 1 of file 2
        # cover each other's side information
        params, C, f, _p = example1_fixture()
        g = build_conflict_graph(C, packet_demand(C, f, params))
        idx = {(v.rho, v.mu): i for i, v in enumerate(g.vertices)}
        assert not g.has_edge(idx[((1, 3), 1)], idx[((2, 1), 2)])
        assert g.has_edge(idx[((1, 3), 1)], idx[((2, 3), 2)])


class TestConflictGraph:
    def test_requester_never_caches_demanded_packet(self):
        for seed in range(10):
            _, C, _, Q = random_instance(seed, n=5, B=6)
            g = build_conflict_graph(C, Q)
            for v in g.vertices:
                assert v.mu not in v.eta
                assert v.rho[1] not in C.cached(v.mu, v.rho[0])

    def test_label_contains_requester(self):
        _, C, _, Q = random_instance(3)
        g = build_conflict_graph(C, Q)
        for v in g.vertices:
            assert v.mu in v.label
            assert v.label == v.eta | {v.mu}

    def test_canonical_vertex_order(self):
        _, C, _, Q = random_instance(9, n=6, B=5)
        g = build_conflict_graph(C, Q)
        keys = [(v.rho[0], v.rho[1], v.mu) for v in g.vertices]
        assert keys == sorted(keys)

    def test_adjacency_matches_has_edge(self):
        _, C, _, Q = random_instance(4)
        g = build_conflict_graph(C, Q)
        adj = g.adjacency()
        for i in range(len(g)):
            assert adj[i] == sorted(j for j in range(len(g)) if g.has_edge(i, j))

    def test_edge_list_dump_format(self):
        params, C, f, _p = example1_fixture()
        g = build_conflict_graph(C, packet_demand(C, f, params))
        dump = g.edge_list_dump()
        lines = dump.strip().split("\n")
        header = [ln for ln in lines if ln.startswith("#")]
        edges = [ln for ln in lines if not ln.startswith("#")]
        assert len(header) == len(g) + 1
        for ln in edges:
            i, j = map(int, ln.split())
            assert i < j
            assert g.has_edge(i, j)
        # every edge appears exactly once
        n_edges = sum(
            g.has_edge(i, j) for i in range(len(g)) for j in range(i + 1, len(g))
        )
        assert len(edges) == n_edges

    def test_empty_graph(self):
        g = ConflictGraph(vertices=())
        assert len(g) == 0
        assert g.adjacency() == []
