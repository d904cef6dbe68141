"""Network model: construction, incidence, flows, cuts, residuals, IO."""

import random
from fractions import Fraction

import pytest

from conftest import make_random_network
from flowkit.network import (
    DuplicateArc,
    FlowAssignment,
    InvalidFlow,
    ParseError,
    SourceSinkViolation,
    all_cuts,
    build_network,
    cut_capacity,
    flow_across_cut,
    incidence_matrix,
    make_cut,
    net_flow,
    read_dimacs,
    read_flow,
    residual_graph,
    validate,
    write_dimacs,
    write_flow,
    zero_flow,
)
from flowkit.solvers import edmonds_karp
from oracles import brute_min_cut, incidence_by_definition, random_network_spec

TABLE_4X5 = [
    [1, 1, 0, 0, 0],
    [-1, 0, 1, 0, 1],
    [0, -1, 0, 1, -1],
    [0, 0, -1, -1, 0],
]


def test_minimal_network():
    net = build_network(2, 1, 2, [(1, 2, 5)])
    assert net.m == 1 and net.capacity(1, 2) == 5


def test_arc_into_source_rejected():
    with pytest.raises(SourceSinkViolation):
        build_network(2, 1, 2, [(2, 1, 5)])


def test_arc_out_of_sink_rejected():
    with pytest.raises(SourceSinkViolation):
        build_network(3, 1, 3, [(3, 2, 1)])


def test_duplicate_arc_rejected():
    with pytest.raises(DuplicateArc):
        build_network(3, 1, 3, [(1, 2, 1), (1, 2, 2)])


def test_antiparallel_rejected_in_simple_mode():
    with pytest.raises(DuplicateArc):
        build_network(4, 1, 4, [(2, 3, 1), (3, 2, 1)])


def test_antiparallel_subdivided():
    net = build_network(4, 1, 4, [(1, 2, 3), (2, 3, 1), (3, 2, 2), (3, 4, 3)],
                        allow_antiparallel=True)
    assert net.n == 6
    assert net.gadget_vertices == {5, 6}
    assert net.gadget_origin(5) == (2, 3) and net.gadget_origin(6) == (3, 2)
    assert (2, 5) in net.arcs and (5, 3) in net.arcs
    assert net.capacity(2, 5) == net.capacity(5, 3) == 1
    assert net.capacity(3, 6) == net.capacity(6, 2) == 2


def test_gadget_preserves_maxflow():
    # multigraph-style instances with antiparallel pairs; the subdivided
    # network must keep the brute-force minimum cut value
    rng = random.Random(31)
    for _ in range(25):
        n = rng.randint(3, 5)
        s, t = 1, n
        triples = []
        for u in range(1, n + 1):
            for v in range(1, n + 1):
                if u == v or v == s or u == t:
                    continue
                if rng.random() < 0.6:
                    triples.append((u, v, Fraction(rng.randint(0, 6))))
        net = build_network(n, s, t, triples, allow_antiparallel=True)
        assert edmonds_karp(net).value == brute_min_cut(n, s, t, triples)


def test_incidence_matrix_fixture(g1):
    assert incidence_matrix(g1) == TABLE_4X5


def test_incidence_single_arc(single_arc):
    assert incidence_matrix(single_arc) == [[1], [-1]]


def test_incidence_against_definition_and_zero_columns(rng):
    for _ in range(20):
        n, s, t, arcs = random_network_spec(rng, max_n=7)
        net = build_network(n, s, t, arcs)
        matrix = incidence_matrix(net)
        assert matrix == incidence_by_definition(n, s, t, arcs, net.vertex_order())
        for j in range(net.m):
            assert sum(matrix[i][j] for i in range(net.n)) == 0


def test_zero_flow_is_valid(g1):
    assert validate(g1, zero_flow(), "flow") == []


def test_initial_preflow_is_valid(g1):
    saturated = FlowAssignment({(1, v): g1.capacity(1, v) for v in g1.out_neighbors(1)},
                               role="preflow")
    assert validate(g1, saturated, "preflow") == []
    # but it is not a flow: conservation fails downstream of the source
    assert any(v.kind == "conservation" for v in validate(g1, saturated, "flow"))


def test_capacity_violation_reported_once(g1):
    flow = edmonds_karp(g1).flow
    values = dict(flow.raw)
    values[(2, 4)] = g1.capacity(2, 4) + 1
    bad = validate(g1, FlowAssignment(values), "flow")
    assert sum(1 for v in bad if v.kind == "capacity") == 1
    assert any(v.kind == "capacity" and v.where == (2, 4) for v in bad)


def test_antisymmetry_violation_detected(g1):
    f = FlowAssignment({(1, 2): Fraction(1), (2, 1): Fraction(1)}, role="pseudoflow")
    bad = validate(g1, f, "pseudoflow")
    assert any(v.kind == "antisymmetry" for v in bad)


def test_net_flow_trivia(single_arc):
    assert net_flow(single_arc, zero_flow()) == 0
    full = FlowAssignment({(1, 2): Fraction(5)})
    assert net_flow(single_arc, full) == 5


def test_net_flow_requires_valid_flow(g1):
    with pytest.raises(InvalidFlow):
        net_flow(g1, FlowAssignment({(1, 2): g1.capacity(1, 2) + 1}))


def test_flow_across_every_cut_equals_net_flow(rng):
    for _ in range(15):
        net, _ = make_random_network(rng, max_n=7)
        flow = edmonds_karp(net).flow
        value = net_flow(net, flow)
        for cut in all_cuts(net):
            assert flow_across_cut(net, flow, cut) == value
            assert flow_across_cut(net, zero_flow(), cut) == 0


def test_cut_capacity_dominates_flow(rng):
    for _ in range(15):
        net, arcs = make_random_network(rng, max_n=7)
        value = edmonds_karp(net).value
        caps = [cut_capacity(net, cut) for cut in all_cuts(net)]
        assert min(caps) >= value
        assert min(caps) == brute_min_cut(net.n, net.source, net.sink, arcs)


def test_cut_of_source_alone(single_arc):
    cut = make_cut(single_arc, {1})
    assert cut_capacity(single_arc, cut) == 5
    full = FlowAssignment({(1, 2): Fraction(5)})
    assert flow_across_cut(single_arc, full, cut) == 5


def test_residual_of_zero_flow(g1):
    res = residual_graph(g1, zero_flow())
    assert set(res.arcs) == set(g1.arcs)
    assert all(res.capacity(u, v) == g1.capacity(u, v) for (u, v) in g1.arcs)


def test_residual_of_saturated_arc(single_arc):
    res = residual_graph(single_arc, FlowAssignment({(1, 2): Fraction(5)}))
    assert dict(res.arcs) == {(2, 1): Fraction(5)}


def test_residual_pair_identity(rng):
    # c_f(u,v) + c_f(v,u) == cbar(u,v) + cbar(v,u) on every touched pair
    for _ in range(10):
        net, _ = make_random_network(rng, max_n=7)
        flow = edmonds_karp(net).flow
        res = residual_graph(net, flow)
        for (u, v) in net.arcs:
            total = res.capacity(u, v) + res.capacity(v, u)
            assert total == net.cbar(u, v) + net.cbar(v, u)
            assert res.capacity(u, v) >= 0 and res.capacity(v, u) >= 0


def test_dimacs_round_trip(g1, rng):
    nets = [g1]
    for _ in range(5):
        nets.append(make_random_network(rng)[0])
    for net in nets:
        assert read_dimacs(write_dimacs(net)) == net


def test_dimacs_rational_capacities():
    net = read_dimacs("p max 2 1\nn 1 s\nn 2 t\na 1 2 7/3\n")
    assert net.capacity(1, 2) == Fraction(7, 3)


@pytest.mark.parametrize("text,line", [
    ("p max x y\n", 1),
    ("a 1 2 3\n", 1),
    ("p max 2 1\nn 1 s\nn 2 t\na 1 2 -4\n", 4),
    ("p max 2 1\nn 1 s\nn 2 t\nq 1 2\n", 4),
])
def test_dimacs_errors_carry_line_numbers(text, line):
    with pytest.raises(ParseError) as err:
        read_dimacs(text)
    assert err.value.line_no == line


def test_dimacs_count_mismatch():
    with pytest.raises(ParseError):
        read_dimacs("p max 2 2\nn 1 s\nn 2 t\na 1 2 1\n")


def test_flow_format_round_trip(g1):
    flow = edmonds_karp(g1).flow
    text = write_flow(g1, flow)
    assert text.strip().splitlines()[-1] == "s 5"
    assert read_flow(g1, text) == flow


def test_flow_format_rejects_wrong_total(g1):
    flow = edmonds_karp(g1).flow
    text = write_flow(g1, flow).replace("s 5", "s 4")
    with pytest.raises(ParseError):
        read_flow(g1, text)


def test_unbounded_capacity_in_cuts_and_validation():
    from flowkit.values import UNBOUNDED, is_unbounded
    from flowkit.network import NetworkError
    from flowkit.solvers import push_relabel

    net = build_network(3, 1, 3, [(1, 2, UNBOUNDED), (2, 3, 4)])
    assert is_unbounded(cut_capacity(net, make_cut(net, {1})))
    assert cut_capacity(net, make_cut(net, {1, 2})) == 4
    flow = FlowAssignment({(1, 2): Fraction(4), (2, 3): Fraction(4)})
    assert validate(net, flow, "flow") == []
    with pytest.raises(NetworkError):
        push_relabel(net)


def test_float_capacities_refused():
    with pytest.raises(TypeError):
        build_network(2, 1, 2, [(1, 2, 0.1)])
