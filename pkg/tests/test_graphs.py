"""Graph predicate evaluators, witness clause shapes, and oracle agreement.

The frozen clauses below were hand-derived from the witness rules and
cross-checked by exhaustive enumeration; each test also re-checks its clause
through the independent oracle.
"""

import pytest

from monosmt import oracle
from monosmt.build import build_instance, dimacs_lit, run_solve, solve_doc
from monosmt.generators import Xorshift64Star
from monosmt.gnf import EdgeDecl, GnfDocument, GraphDecl, PredDecl
from monosmt.graphs import (GraphTheory, SymbolicGraph, edmonds_karp,
                            span_scan, tree_path_eids)
from monosmt.sat import mk_lit

from instances import rand_graph, rand_pred, GRAPH_KINDS, DIRECTED_KINDS


def graph_doc(directed, n, edges, preds, clauses):
    """edges are (u, v, w) with vars 1..m; pred atom vars follow the edges."""
    g = GraphDecl(1, directed, n)
    for i, (u, v, w) in enumerate(edges):
        g.edges.append(EdgeDecl(1, u, v, i + 1, w))
    doc = GnfDocument(nvars=len(edges) + len(preds))
    doc.graphs[1] = g
    for j, (kind, args) in enumerate(preds):
        doc.preds.append(PredDecl(kind, 1, args, len(edges) + 1 + j))
    doc.clauses = [list(c) for c in clauses]
    return doc


def solved_with_log(doc):
    status, values, inst = solve_doc(doc, log_clauses=True,
                                     validate_reasons=True)
    clauses = [frozenset(dimacs_lit(l) for l in c)
               for c in inst.solver.theory_clause_log]
    return status, clauses


def assert_theory_clause(doc, want_status, want_clause):
    status, clauses = solved_with_log(doc)
    assert status == want_status
    want = frozenset(want_clause)
    assert want in clauses, "expected %s in %s" % (sorted(want),
                                                   [sorted(c) for c in
                                                    clauses])
    assert oracle.check_clause_valid(doc, list(want)) is None


# -- reach -----------------------------------------------------------------

def test_reach_positive_path_witness():
    doc = graph_doc(True, 3, [(0, 1, 1), (1, 2, 1)],
                    [("reach", (0, 2))], [[1], [2], [-3]])
    assert_theory_clause(doc, "UNSAT", (-1, -2, 3))


def test_reach_reflexive_unit_witness():
    doc = graph_doc(True, 2, [(0, 1, 1)],
                    [("reach", (1, 1))], [[-2]])
    assert_theory_clause(doc, "UNSAT", (2,))


def test_reach_negative_single_edge_cut():
    doc = graph_doc(True, 2, [(0, 1, 1)],
                    [("reach", (0, 1))], [[-1], [2]])
    assert_theory_clause(doc, "UNSAT", (1, -2))


def test_reach_isolated_target_empty_cut():
    doc = graph_doc(True, 2, [], [("reach", (0, 1))], [[1]])
    assert_theory_clause(doc, "UNSAT", (-1,))


# -- distance_leq ------------------------------------------------------------

def test_distance_positive_shortest_path_witness():
    # Triangle 0->1->2 of weight 2 beats the direct weight-3 edge.
    doc = graph_doc(True, 3, [(0, 1, 1), (1, 2, 1), (0, 2, 3)],
                    [("distance_leq", (0, 2, 2))], [[1], [2], [3], [-4]])
    assert_theory_clause(doc, "UNSAT", (-1, -2, 4))


def test_distance_negative_incident_cut():
    # Only the weight-3 edge enabled: every assignment keeping e01 and e12
    # disabled leaves the distance above 2.
    doc = graph_doc(True, 3, [(0, 1, 1), (1, 2, 1), (0, 2, 3)],
                    [("distance_leq", (0, 2, 2))], [[-1], [-2], [3], [4]])
    assert_theory_clause(doc, "UNSAT", (1, 2, -4))


def test_distance_zero_bound_reflexive():
    doc = graph_doc(True, 2, [(0, 1, 1)],
                    [("distance_leq", (0, 0, 0))], [[-2]])
    assert_theory_clause(doc, "UNSAT", (2,))


# -- components_leq ---------------------------------------------------------

def test_components_positive_spanning_forest():
    doc = graph_doc(False, 3, [(0, 1, 1), (1, 2, 1)],
                    [("components_leq", (1,))], [[1], [2], [-3]])
    assert_theory_clause(doc, "UNSAT", (-1, -2, 3))


def test_components_negative_cross_edges():
    doc = graph_doc(False, 3, [(0, 1, 1), (1, 2, 1)],
                    [("components_leq", (2,))], [[-1], [-2], [3]])
    assert_theory_clause(doc, "UNSAT", (1, 2, -3))


def test_components_count_isolated_vertices():
    g = SymbolicGraph(1, False, 3)
    g.add_edge(0, 0, 0, 1)  # self-loop joins nothing
    th = GraphTheory(g)
    assert th.eval_concrete("components_leq", (3,), bytearray([1]))
    assert not th.eval_concrete("components_leq", (2,), bytearray([1]))


# -- maxflow_geq -------------------------------------------------------------

def test_maxflow_zero_demand_unit_witness():
    doc = graph_doc(True, 2, [(0, 1, 1)],
                    [("maxflow_geq", (0, 1, 0))], [[-2]])
    assert_theory_clause(doc, "UNSAT", (2,))


def test_maxflow_negative_single_cut_edge():
    doc = graph_doc(True, 2, [(0, 1, 3)],
                    [("maxflow_geq", (0, 1, 1))], [[-1], [2]])
    assert_theory_clause(doc, "UNSAT", (1, -2))


def test_maxflow_positive_two_path_support():
    doc = graph_doc(True, 4, [(0, 1, 1), (1, 3, 1), (0, 2, 1), (2, 3, 1)],
                    [("maxflow_geq", (0, 3, 2))],
                    [[1], [2], [3], [4], [-5]])
    assert_theory_clause(doc, "UNSAT", (-1, -2, -3, -4, 5))


def test_maxflow_early_stop_keeps_residual_cut_unset():
    g = SymbolicGraph(1, True, 2)
    g.add_edge(0, 1, 0, 5)
    th = GraphTheory(g)
    res = edmonds_karp(th._flow_adj, th._weights, 2, bytearray([1]), 0, 1,
                       target=3)
    assert res.value >= 3 and res.cut_side is None
    full = edmonds_karp(th._flow_adj, th._weights, 2, bytearray([1]), 0, 1)
    assert full.value == 5 and full.cut_side[0] and not full.cut_side[1]


# -- mst_weight_leq ----------------------------------------------------------

def test_mst_weight_positive_forest_witness():
    doc = graph_doc(False, 3, [(0, 1, 1), (1, 2, 2), (0, 2, 3)],
                    [("mst_weight_leq", (3,))], [[1], [2], [3], [-4]])
    assert_theory_clause(doc, "UNSAT", (-1, -2, 4))


def test_mst_weight_disconnected_cut_witness():
    doc = graph_doc(False, 2, [(0, 1, 1)],
                    [("mst_weight_leq", (None,))], [[-1], [2]])
    assert_theory_clause(doc, "UNSAT", (1, -2))


def test_mst_weight_improving_edge_witness():
    # Connected but too heavy; the disabled lighter parallel edge is the
    # only thing that could bring the tree under the bound.
    doc = graph_doc(False, 2, [(0, 1, 5), (0, 1, 1)],
                    [("mst_weight_leq", (3,))], [[1], [-2], [3]])
    assert_theory_clause(doc, "UNSAT", (2, -3))


# -- mst_edge ----------------------------------------------------------------

def test_mst_edge_disabled_case_witness():
    doc = graph_doc(False, 2, [(0, 1, 1)],
                    [("mst_edge", (1,))], [[-1], [-2]])
    assert_theory_clause(doc, "UNSAT", (1, 2))


def test_mst_edge_negative_cycle_witness():
    # The heaviest triangle edge is enabled yet outside the tree; the clause
    # names the tree path, the edge itself, and the atom.
    doc = graph_doc(False, 3, [(0, 1, 1), (1, 2, 2), (0, 2, 3)],
                    [("mst_edge", (3,))], [[1], [2], [3], [4]])
    assert_theory_clause(doc, "UNSAT", (-1, -2, -3, -4))


def test_mst_edge_positive_lighter_cut_witness():
    doc = graph_doc(False, 2, [(0, 1, 5), (0, 1, 3)],
                    [("mst_edge", (1,))], [[1], [-2], [-3]])
    assert_theory_clause(doc, "UNSAT", (2, 3))


def test_mst_edge_positive_cut_spans_components():
    # The displacing cycle needs two currently disabled edges at once, so
    # the witness must contain every lighter cut edge, not just edges whose
    # insertion closes a cycle in the current forest.
    doc = graph_doc(False, 3, [(0, 1, 5), (0, 2, 1), (1, 2, 1)],
                    [("mst_edge", (1,))], [[1], [-2], [-3], [-4]])
    assert_theory_clause(doc, "UNSAT", (2, 4))


def test_mst_edge_self_loop_never_in_tree():
    g = SymbolicGraph(1, False, 2)
    eid = g.add_edge(0, 0, 0, 1)
    th = GraphTheory(g)
    assert not th.eval_concrete("mst_edge", (eid,), bytearray([1]))
    assert th.eval_concrete("mst_edge", (eid,), bytearray([0]))


# -- decision hint ------------------------------------------------------------

def test_decide_hint_picks_first_open_path_edge():
    doc = graph_doc(True, 3, [(0, 1, 1), (1, 2, 1)],
                    [("reach", (0, 2))], [[3]])
    inst = build_instance(doc)
    th = inst.graph_theories[1]
    assert th.decide_hint() == mk_lit(0)


def test_decide_hint_silent_when_satisfied():
    doc = graph_doc(True, 3, [(0, 1, 1), (1, 2, 1)],
                    [("reach", (0, 2))], [[1], [2], [3]])
    inst = build_instance(doc)
    assert inst.graph_theories[1].decide_hint() is None


# -- registration and validation ----------------------------------------------

def test_directedness_rules_enforced():
    directed = SymbolicGraph(1, True, 3)
    directed.add_edge(0, 1, 0, 1)
    th = GraphTheory(directed)
    with pytest.raises(ValueError):
        th.add_components_leq(1, 5)
    with pytest.raises(ValueError):
        th.add_mst_weight_leq(None, 5)
    with pytest.raises(ValueError):
        th.add_mst_edge(0, 5)

    undirected = SymbolicGraph(1, False, 3)
    undirected.add_edge(0, 1, 0, 1)
    th = GraphTheory(undirected)
    with pytest.raises(ValueError):
        th.add_reach(0, 1, 5)
    with pytest.raises(ValueError):
        th.add_distance_leq(0, 1, 2, 5)
    with pytest.raises(ValueError):
        th.add_maxflow_geq(0, 1, 2, 5)


def test_argument_validation():
    g = SymbolicGraph(1, True, 2)
    g.add_edge(0, 1, 0, 1)
    th = GraphTheory(g)
    with pytest.raises(ValueError):
        th.add_reach(0, 2, 5)
    with pytest.raises(ValueError):
        th.add_distance_leq(0, 1, -1, 5)
    with pytest.raises(ValueError):
        th.add_maxflow_geq(0, 0, 1, 5)
    bad = SymbolicGraph(2, True, 2)
    bad.add_edge(0, 1, 0, 1)
    bad.add_edge(1, 0, 0, 1)  # same var twice
    with pytest.raises(ValueError):
        GraphTheory(bad)
    neg = SymbolicGraph(3, True, 2)
    neg.add_edge(0, 1, 0, -2)
    with pytest.raises(ValueError):
        GraphTheory(neg)


# -- pure helpers ---------------------------------------------------------------

def test_span_scan_tie_break_by_edge_id():
    g = SymbolicGraph(1, False, 3)
    for u, v in ((0, 1), (1, 2), (0, 2)):
        g.add_edge(u, v, len(g.edges), 1)
    span = span_scan(3, g.edges, [0, 1, 2], bytearray([1, 1, 1]))
    assert sorted(span.forest) == [0, 1]
    assert span.components == 1 and span.weight == 2
    assert tree_path_eids(span, g.edges, 3, 0, 2) == [0, 1]


def test_span_scan_counts_isolated_nodes():
    g = SymbolicGraph(1, False, 4)
    g.add_edge(0, 1, 0, 2)
    span = span_scan(4, g.edges, [0], bytearray([1]))
    assert span.components == 3
    assert span.weight == 2 and list(span.forest) == [0]


# -- randomized dual-route checks ----------------------------------------------

def oracle_truth(g, kind, args, enabled):
    edges = [(e.u, e.v, e.weight) for e in g.edges]
    n = g.n
    if kind == "reach":
        return oracle.reach_dfs(n, g.directed, edges, enabled, *args)
    if kind == "distance_leq":
        u, v, bound = args
        return oracle.dist_bellman_ford(n, g.directed, edges, enabled,
                                        u)[v] <= bound
    if kind == "maxflow_geq":
        s, t, bound = args
        return bound <= 0 or oracle.maxflow_dfs(n, edges, enabled,
                                                s, t) >= bound
    if kind == "components_leq":
        return oracle.components_count_dfs(n, edges, enabled) <= args[0]
    if kind == "mst_weight_leq":
        comps, total, _ = oracle.mst_prim(n, edges, enabled)
        if comps > 1:
            return False
        return True if args[0] is None else total <= args[0]
    assert kind == "mst_edge"
    eid = next(i for i, e in enumerate(g.edges) if e.var == args[0])
    return not enabled[eid] or eid in oracle.mst_prim(n, edges, enabled)[2]


def theory_for(g):
    sg = SymbolicGraph(g.gid, g.directed, g.n)
    for e in g.edges:
        sg.add_edge(e.u, e.v, e.var - 1, e.weight)
    return GraphTheory(sg)


def pred_payload(kind, args, g):
    if kind == "mst_edge":
        eid = next(i for i, e in enumerate(g.edges) if e.var == args[0])
        return (eid,)
    return args


def test_evaluators_agree_with_oracle_family():
    for i in range(250):
        rng = Xorshift64Star(i + 1)
        kind = GRAPH_KINDS[i % len(GRAPH_KINDS)]
        g = rand_graph(rng, kind in DIRECTED_KINDS)
        pred = rand_pred(rng, kind, g, len(g.edges) + 1)
        th = theory_for(g)
        payload = pred_payload(kind, pred.args, g)
        for _ in range(8):
            enabled = bytearray(rng.randint(0, 1)
                                for _ in range(len(g.edges)))
            got = th.eval_concrete(kind, payload, enabled)
            want = oracle_truth(g, kind, pred.args, enabled)
            assert got == want, (kind, i, list(enabled))


def test_monotone_bracketing_on_nested_masks():
    # Growing the enabled set can only help a positive predicate and only
    # hurt the negative-monotone mst_edge.
    for i in range(150):
        rng = Xorshift64Star(i + 500)
        kind = GRAPH_KINDS[i % len(GRAPH_KINDS)]
        g = rand_graph(rng, kind in DIRECTED_KINDS)
        pred = rand_pred(rng, kind, g, len(g.edges) + 1)
        th = theory_for(g)
        payload = pred_payload(kind, pred.args, g)
        m = len(g.edges)
        small = bytearray(rng.randint(0, 2) == 0 for _ in range(m))
        grown = bytearray(b or rng.randint(0, 1) for b in small)
        lo = th.eval_concrete(kind, payload, small)
        hi = th.eval_concrete(kind, payload, grown)
        if kind == "mst_edge":
            assert not (hi and not lo), (kind, i)
        else:
            assert not (lo and not hi), (kind, i)


def test_witness_lines_payloads():
    doc = graph_doc(True, 3, [(0, 1, 1), (1, 2, 1)],
                    [("reach", (0, 2))], [[1], [2], [3]])
    code, lines = run_solve(doc, witness=True)
    assert code == 10
    assert lines[0] == "s SATISFIABLE"
    assert lines[1] == "v 1 2 3 0"
    assert lines[2] == "w reach 1 0 2 : 0 1 2"

    doc = graph_doc(False, 3, [(0, 1, 2), (1, 2, 4), (0, 2, 9)],
                    [("mst_weight_leq", (6,))], [[1], [2], [-3], [4]])
    code, lines = run_solve(doc, witness=True)
    assert code == 10
    assert lines[2] == "w mst_weight_leq 1 6 : 1 2"

    doc = graph_doc(True, 2, [(0, 1, 3)],
                    [("maxflow_geq", (0, 1, 2))], [[1], [2]])
    code, lines = run_solve(doc, witness=True)
    assert lines[2] == "w maxflow_geq 1 0 1 2 : 0 1 3"
