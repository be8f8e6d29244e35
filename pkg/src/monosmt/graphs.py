"""Symbolic graphs: edge-variable graphs with monotonic predicate solvers.

Each edge of a symbolic graph is guarded by a solver variable; a predicate
atom then constrains a property of whichever subgraph the true edge variables
select. Evaluation on the minimal completion uses only edges assigned true,
on the maximal completion all edges not assigned false.

Determinism rules used throughout: breadth-first and shortest-path traversal
visit neighbors in (node id, edge id) order, spanning trees are built in
(weight, edge id) order, which also makes the minimum spanning tree unique.
"""
from __future__ import annotations

import heapq
from dataclasses import dataclass, field

from .sat import TRUE, FALSE, mk_lit
from .theory import MonotonicTheory, POSITIVE, NEGATIVE

INF = float("inf")


@dataclass(frozen=True)
class EdgeSpec:
    eid: int
    u: int
    v: int
    var: int
    weight: int = 1


@dataclass
class SymbolicGraph:
    gid: int
    directed: bool
    n: int
    edges: list = field(default_factory=list)

    def add_edge(self, u: int, v: int, var: int, weight: int = 1) -> int:
        eid = len(self.edges)
        self.edges.append(EdgeSpec(eid, u, v, var, weight))
        return eid


# ----------------------------------------------------------------------
# pure algorithms over an enabled-edge mask

def bfs_tree(adj, n, enabled, src):
    """Breadth-first tree from src. Returns (visited, parent_edge)."""
    visited = bytearray(n)
    parent = [-1] * n
    visited[src] = 1
    queue = [src]
    for u in queue:
        for eid, w in adj[u]:
            if enabled[eid] and not visited[w]:
                visited[w] = 1
                parent[w] = eid
                queue.append(w)
    return visited, parent


def dijkstra_tree(adj, weights, n, enabled, src):
    """Shortest-path distances and parent edges from src."""
    dist = [INF] * n
    parent = [-1] * n
    dist[src] = 0
    heap = [(0, src)]
    while heap:
        d, u = heapq.heappop(heap)
        if d > dist[u]:
            continue
        for eid, w in adj[u]:
            if not enabled[eid]:
                continue
            nd = d + weights[eid]
            if nd < dist[w]:
                dist[w] = nd
                parent[w] = eid
                heapq.heappush(heap, (nd, w))
    return dist, parent


class SpanResult:
    """Kruskal scan output: spanning forest in (weight, eid) order."""

    __slots__ = ("components", "forest", "forest_set", "weight", "comp",
                 "_rooted")

    def __init__(self, components, forest, weight, comp):
        self.components = components
        self.forest = forest
        self.forest_set = set(forest)
        self.weight = weight
        self.comp = comp  # node -> component root
        self._rooted = None


def span_scan(n, edges, order, enabled) -> SpanResult:
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    forest = []
    weight = 0
    components = n
    for eid in order:
        if not enabled[eid]:
            continue
        e = edges[eid]
        ru, rv = find(e.u), find(e.v)
        if ru != rv:
            parent[max(ru, rv)] = min(ru, rv)
            forest.append(eid)
            weight += e.weight
            components -= 1
    comp = [find(v) for v in range(n)]
    return SpanResult(components, forest, weight, comp)


def _root_forest(span: SpanResult, edges, n):
    """Rooted parent arrays for the spanning forest (lazy, cached)."""
    if span._rooted is not None:
        return span._rooted
    tree_adj = [[] for _ in range(n)]
    for eid in span.forest:
        e = edges[eid]
        tree_adj[e.u].append((eid, e.v))
        tree_adj[e.v].append((eid, e.u))
    parent_node = [-1] * n
    parent_eid = [-1] * n
    depth = [0] * n
    seen = bytearray(n)
    for root in range(n):
        if seen[root]:
            continue
        seen[root] = 1
        stack = [root]
        while stack:
            u = stack.pop()
            for eid, w in tree_adj[u]:
                if not seen[w]:
                    seen[w] = 1
                    parent_node[w] = u
                    parent_eid[w] = eid
                    depth[w] = depth[u] + 1
                    stack.append(w)
    span._rooted = (parent_node, parent_eid, depth)
    return span._rooted


def tree_path_eids(span: SpanResult, edges, n, a, b):
    """Edge ids on the forest path between a and b, or None if disconnected."""
    if span.comp[a] != span.comp[b]:
        return None
    parent_node, parent_eid, depth = _root_forest(span, edges, n)
    path = []
    x, y = a, b
    while depth[x] > depth[y]:
        path.append(parent_eid[x])
        x = parent_node[x]
    tail = []
    while depth[y] > depth[x]:
        tail.append(parent_eid[y])
        y = parent_node[y]
    while x != y:
        path.append(parent_eid[x])
        x = parent_node[x]
        tail.append(parent_eid[y])
        y = parent_node[y]
    path.extend(reversed(tail))
    return path


class FlowResult:
    __slots__ = ("value", "flow", "cut_side")

    def __init__(self, value, flow, cut_side):
        self.value = value
        self.flow = flow
        self.cut_side = cut_side  # residual-reachable nodes, None on early stop


def edmonds_karp(flow_adj, caps, n, enabled, s, t, target=None) -> FlowResult:
    """Max flow by shortest augmenting paths; stops once target is reached."""
    flow = [0] * len(caps)
    value = 0
    while True:
        parent = [None] * n
        visited = bytearray(n)
        visited[s] = 1
        queue = [s]
        found = False
        for u in queue:
            if found:
                break
            for eid, head, fwd in flow_adj[u]:
                if not enabled[eid] or visited[head]:
                    continue
                residual = caps[eid] - flow[eid] if fwd else flow[eid]
                if residual <= 0:
                    continue
                visited[head] = 1
                parent[head] = (eid, fwd, u)
                if head == t:
                    found = True
                    break
                queue.append(head)
        if not found:
            return FlowResult(value, flow, visited)
        bottleneck = None
        node = t
        while node != s:
            eid, fwd, prev = parent[node]
            residual = caps[eid] - flow[eid] if fwd else flow[eid]
            if bottleneck is None or residual < bottleneck:
                bottleneck = residual
            node = prev
        node = t
        while node != s:
            eid, fwd, prev = parent[node]
            flow[eid] += bottleneck if fwd else -bottleneck
            node = prev
        value += bottleneck
        if target is not None and value >= target:
            return FlowResult(value, flow, None)


# ----------------------------------------------------------------------

_DIRECTED_KINDS = {"reach", "distance_leq", "maxflow_geq"}
_UNDIRECTED_KINDS = {"components_leq", "mst_weight_leq", "mst_edge"}


class GraphTheory(MonotonicTheory):
    """Theory solver for the predicates of one symbolic graph."""

    def __init__(self, graph: SymbolicGraph):
        super().__init__()
        self.graph = graph
        seen_vars = set()
        for e in graph.edges:
            if not (0 <= e.u < graph.n and 0 <= e.v < graph.n):
                raise ValueError("edge %d endpoint out of range" % e.eid)
            if e.weight < 0:
                raise ValueError("edge %d has negative weight" % e.eid)
            if e.var in seen_vars:
                raise ValueError("edge var %d used twice in graph %d"
                                 % (e.var, graph.gid))
            seen_vars.add(e.var)
            self.add_s_var(e.var)
        m = len(graph.edges)
        self._weights = [e.weight for e in graph.edges]
        self._adj = [[] for _ in range(graph.n)]
        self._flow_adj = [[] for _ in range(graph.n)]
        for e in graph.edges:
            self._adj[e.u].append((e.eid, e.v))
            if not graph.directed:
                self._adj[e.v].append((e.eid, e.u))
            self._flow_adj[e.u].append((e.eid, e.v, True))
            self._flow_adj[e.v].append((e.eid, e.u, False))
        for lst in self._adj:
            lst.sort(key=lambda p: (p[1], p[0]))
        for lst in self._flow_adj:
            lst.sort(key=lambda p: (p[1], p[0], not p[2]))
        self._order = sorted(range(m),
                             key=lambda i: (self._weights[i], i))
        self._var_to_eid = {e.var: e.eid for e in graph.edges}
        self._analysis = {}

    # -- predicate registration ------------------------------------------

    def _add(self, kind, pvar, payload):
        if self.graph.directed:
            if kind in _UNDIRECTED_KINDS:
                raise ValueError("%s requires an undirected graph" % kind)
        elif kind in _DIRECTED_KINDS:
            raise ValueError("%s requires a directed graph" % kind)
        polarity = NEGATIVE if kind == "mst_edge" else POSITIVE
        return self.register_predicate(pvar, polarity, kind, payload)

    def _check_node(self, x):
        if not 0 <= x < self.graph.n:
            raise ValueError("node %d out of range" % x)

    def add_reach(self, u, v, pvar):
        self._check_node(u)
        self._check_node(v)
        return self._add("reach", pvar, (u, v))

    def add_distance_leq(self, u, v, bound, pvar):
        self._check_node(u)
        self._check_node(v)
        if bound < 0:
            raise ValueError("distance bound must be non-negative")
        return self._add("distance_leq", pvar, (u, v, bound))

    def add_maxflow_geq(self, s, t, bound, pvar):
        self._check_node(s)
        self._check_node(t)
        if s == t:
            raise ValueError("max-flow source and sink must differ")
        if bound < 0:
            raise ValueError("flow bound must be non-negative")
        return self._add("maxflow_geq", pvar, (s, t, bound))

    def add_components_leq(self, bound, pvar):
        return self._add("components_leq", pvar, (bound,))

    def add_mst_weight_leq(self, bound, pvar):
        """bound None means unbounded: the atom then just asserts
        connectivity (a spanning tree of some finite weight exists)."""
        return self._add("mst_weight_leq", pvar, (bound,))

    def add_mst_edge(self, edge_var, pvar):
        eid = self._var_to_eid.get(edge_var)
        if eid is None:
            raise ValueError("var %d is not an edge of graph %d"
                             % (edge_var, self.graph.gid))
        return self._add("mst_edge", pvar, (eid,))

    # -- completions -------------------------------------------------------

    def _enabled_now(self, maximal):
        gen = self._max_gen if maximal else self._min_gen
        key = ("enabled", maximal)
        hit = self._analysis.get(key)
        if hit is not None and hit[0] == gen:
            return hit[1]
        value = self.solver.var_value
        if maximal:
            enabled = bytearray(0 if value(e.var) == FALSE else 1
                                for e in self.graph.edges)
        else:
            enabled = bytearray(1 if value(e.var) == TRUE else 0
                                for e in self.graph.edges)
        self._analysis[key] = (gen, enabled)
        return enabled

    def _enabled_prefix(self, maximal, prefix):
        solver = self.solver
        fill = 1 if maximal else 0
        out = bytearray(len(self.graph.edges))
        for e in self.graph.edges:
            p = solver.pos[e.var]
            if 0 <= p < prefix:
                out[e.eid] = 1 if solver.var_value(e.var) == TRUE else 0
            else:
                out[e.eid] = fill
        return out

    def _disabled_prefix(self, prefix):
        """Edge ids whose var is assigned false before the prefix."""
        solver = self.solver
        return [e.eid for e in self.graph.edges
                if 0 <= solver.pos[e.var] < prefix
                and solver.var_value(e.var) == FALSE]

    def _shared(self, key, maximal, compute):
        gen = self._max_gen if maximal else self._min_gen
        hit = self._analysis.get(key)
        if hit is not None and hit[0] == gen:
            return hit[1]
        value = compute()
        self._analysis[key] = (gen, value)
        return value

    def _bfs(self, maximal, src):
        return self._shared(("bfs", maximal, src), maximal,
                            lambda: bfs_tree(self._adj, self.graph.n,
                                             self._enabled_now(maximal), src))

    def _dij(self, maximal, src):
        return self._shared(("dij", maximal, src), maximal,
                            lambda: dijkstra_tree(self._adj, self._weights,
                                                  self.graph.n,
                                                  self._enabled_now(maximal),
                                                  src))

    def _span(self, maximal):
        return self._shared(("span", maximal), maximal,
                            lambda: span_scan(self.graph.n, self.graph.edges,
                                              self._order,
                                              self._enabled_now(maximal)))

    def _flow(self, maximal, s, t):
        return self._shared(("flow", maximal, s, t), maximal,
                            lambda: edmonds_karp(self._flow_adj, self._weights,
                                                 self.graph.n,
                                                 self._enabled_now(maximal),
                                                 s, t))

    # -- evaluation ---------------------------------------------------------

    def eval_completion(self, pred, maximal):
        return self._eval(pred.kind, pred.payload,
                          enabled=None, maximal=maximal)

    def eval_concrete(self, kind, payload, enabled):
        """Evaluate a predicate on an explicit enabled mask (no solver)."""
        return self._eval(kind, payload, enabled=enabled, maximal=None)

    def _eval(self, kind, payload, enabled, maximal):
        cached = enabled is None
        if kind == "reach":
            u, v = payload
            if cached:
                return bool(self._bfs(maximal, u)[0][v])
            return bool(bfs_tree(self._adj, self.graph.n, enabled, u)[0][v])
        if kind == "distance_leq":
            u, v, bound = payload
            if cached:
                dist = self._dij(maximal, u)[0]
            else:
                dist = dijkstra_tree(self._adj, self._weights, self.graph.n,
                                     enabled, u)[0]
            return dist[v] <= bound
        if kind == "maxflow_geq":
            s, t, bound = payload
            if bound <= 0:
                return True
            if cached:
                return self._flow(maximal, s, t).value >= bound
            return edmonds_karp(self._flow_adj, self._weights, self.graph.n,
                                enabled, s, t, target=bound).value >= bound
        span = (self._span(maximal) if cached else
                span_scan(self.graph.n, self.graph.edges, self._order,
                          enabled))
        if kind == "components_leq":
            return span.components <= payload[0]
        if kind == "mst_weight_leq":
            if span.components > 1:
                return False
            bound = payload[0]
            return True if bound is None else span.weight <= bound
        if kind == "mst_edge":
            eid = payload[0]
            mask = self._enabled_now(maximal) if cached else enabled
            return not mask[eid] or eid in span.forest_set
        raise AssertionError(kind)

    # -- witnesses ------------------------------------------------------------

    def witness_lits(self, pred, positive, prefix):
        kind = pred.kind
        if kind == "reach":
            if positive:
                return self._path_lits(pred.payload[0], pred.payload[1],
                                       prefix, shortest=False)
            return self._cut_lits(pred.payload[0], prefix)
        if kind == "distance_leq":
            if positive:
                return self._path_lits(pred.payload[0], pred.payload[1],
                                       prefix, shortest=True)
            return self._cut_lits(pred.payload[0], prefix)
        if kind == "maxflow_geq":
            return self._flow_lits(pred, positive, prefix)
        if kind == "components_leq":
            if positive:
                return self._forest_lits(prefix)
            return self._cross_component_lits(prefix)
        if kind == "mst_weight_leq":
            if positive:
                return self._forest_lits(prefix)
            return self._mst_weight_neg_lits(pred, prefix)
        if kind == "mst_edge":
            return self._mst_edge_lits(pred, positive, prefix)
        raise AssertionError(kind)

    def _edge_lit(self, eid, negated):
        return mk_lit(self.graph.edges[eid].var, negated)

    def _path_lits(self, u, v, prefix, shortest):
        """Negated vars of a u-v path in the minimal completion."""
        enabled = self._enabled_prefix(False, prefix)
        if shortest:
            _, parent = dijkstra_tree(self._adj, self._weights, self.graph.n,
                                      enabled, u)
        else:
            _, parent = bfs_tree(self._adj, self.graph.n, enabled, u)
        lits = []
        node = v
        while node != u:
            eid = parent[node]
            assert eid >= 0, "witness path missing"
            lits.append(self._edge_lit(eid, True))
            e = self.graph.edges[eid]
            node = e.u if e.v == node else e.v
        return lits

    def _cut_lits(self, u, prefix):
        """Disabled edges incident to the set reachable in the maximal
        completion; keeping them disabled keeps the target unreachable."""
        visited, _ = bfs_tree(self._adj, self.graph.n,
                              self._enabled_prefix(True, prefix), u)
        out = []
        for eid in self._disabled_prefix(prefix):
            e = self.graph.edges[eid]
            if visited[e.u] or visited[e.v]:
                out.append(self._edge_lit(eid, False))
        return out

    def _flow_lits(self, pred, positive, prefix):
        s, t, bound = pred.payload
        if positive:
            enabled = self._enabled_prefix(False, prefix)
            res = edmonds_karp(self._flow_adj, self._weights, self.graph.n,
                               enabled, s, t, target=bound)
            return [self._edge_lit(eid, True)
                    for eid in range(len(self.graph.edges))
                    if res.flow[eid] > 0]
        enabled = self._enabled_prefix(True, prefix)
        res = edmonds_karp(self._flow_adj, self._weights, self.graph.n,
                           enabled, s, t)
        side = res.cut_side
        return [self._edge_lit(eid, False)
                for eid in self._disabled_prefix(prefix)
                if side[self.graph.edges[eid].u]
                and not side[self.graph.edges[eid].v]]

    def _forest_lits(self, prefix):
        span = span_scan(self.graph.n, self.graph.edges, self._order,
                         self._enabled_prefix(False, prefix))
        return [self._edge_lit(eid, True) for eid in span.forest]

    def _cross_component_lits(self, prefix):
        span = span_scan(self.graph.n, self.graph.edges, self._order,
                         self._enabled_prefix(True, prefix))
        return [self._edge_lit(eid, False)
                for eid in self._disabled_prefix(prefix)
                if span.comp[self.graph.edges[eid].u]
                != span.comp[self.graph.edges[eid].v]]

    def _mst_weight_neg_lits(self, pred, prefix):
        edges = self.graph.edges
        span = span_scan(self.graph.n, edges, self._order,
                         self._enabled_prefix(True, prefix))
        disabled = self._disabled_prefix(prefix)
        if span.components > 1:
            # Disconnected: a cut of disabled edges isolating one component.
            cuts = {}
            for eid in disabled:
                e = edges[eid]
                cu, cv = span.comp[e.u], span.comp[e.v]
                if cu != cv:
                    cuts.setdefault(cu, []).append(eid)
                    cuts.setdefault(cv, []).append(eid)
            best = min(set(span.comp),
                       key=lambda r: (len(cuts.get(r, ())), r))
            return [self._edge_lit(eid, False)
                    for eid in sorted(cuts.get(best, ()))]
        # Connected but too heavy: disabled edges that could lighten the tree.
        out = []
        for eid in disabled:
            e = edges[eid]
            if e.u == e.v:
                continue
            path = tree_path_eids(span, edges, self.graph.n, e.u, e.v)
            if path and max(edges[p].weight for p in path) > e.weight:
                out.append(self._edge_lit(eid, False))
        return out

    def _mst_edge_lits(self, pred, positive, prefix):
        eid = pred.payload[0]
        edges = self.graph.edges
        e = edges[eid]
        solver = self.solver
        if positive:
            p = solver.pos[e.var]
            if 0 <= p < prefix and solver.var_value(e.var) == FALSE:
                return [self._edge_lit(eid, False)]
            # Edge is in the tree of the maximal completion, which means no
            # path of strictly lighter edges joins its endpoints there. It
            # stays in every tree unless such a path opens up, and any such
            # path must cross out of the lighter-reachable region through a
            # currently disabled lighter edge: those edges are the witness.
            key = (e.weight, eid)
            enabled = self._enabled_prefix(True, prefix)
            visited = bytearray(self.graph.n)
            visited[e.u] = 1
            stack = [e.u]
            while stack:
                x = stack.pop()
                for fid, y in self._adj[x]:
                    if (enabled[fid] and not visited[y]
                            and (edges[fid].weight, fid) < key):
                        visited[y] = 1
                        stack.append(y)
            assert not visited[e.v], "edge not in the completion tree"
            out = []
            for fid in self._disabled_prefix(prefix):
                f = edges[fid]
                if (f.weight, fid) < key and visited[f.u] != visited[f.v]:
                    out.append(self._edge_lit(fid, False))
            return out
        # Negative: the edge is enabled yet outside the minimal-completion
        # tree, so the tree path between its endpoints plus the edge itself
        # pins it out of every extension's tree.
        span = span_scan(self.graph.n, edges, self._order,
                         self._enabled_prefix(False, prefix))
        path = tree_path_eids(span, edges, self.graph.n, e.u, e.v)
        assert path is not None
        lits = [self._edge_lit(p, True) for p in path]
        lits.append(self._edge_lit(eid, True))
        return lits

    # -- model witnesses ---------------------------------------------------------

    def model_witness(self, pred, enabled):
        """Integer payload shown for a true atom under a full model: a node
        path for reach and distance, (u, v, flow) triples for flow, the
        component count, tree edge vars for spanning-tree atoms."""
        kind = pred.kind
        n = self.graph.n
        edges = self.graph.edges
        if kind in ("reach", "distance_leq"):
            u, v = pred.payload[0], pred.payload[1]
            if kind == "reach":
                _, parent = bfs_tree(self._adj, n, enabled, u)
            else:
                _, parent = dijkstra_tree(self._adj, self._weights, n,
                                          enabled, u)
            nodes = [v]
            node = v
            while node != u:
                e = edges[parent[node]]
                node = e.u if e.v == node else e.v
                nodes.append(node)
            nodes.reverse()
            return nodes
        if kind == "maxflow_geq":
            s, t, _ = pred.payload
            res = edmonds_karp(self._flow_adj, self._weights, n, enabled,
                               s, t)
            out = []
            for eid, f in enumerate(res.flow):
                if f > 0:
                    out.extend((edges[eid].u, edges[eid].v, f))
            return out
        span = span_scan(n, edges, self._order, enabled)
        if kind == "components_leq":
            return [span.components]
        if kind == "mst_weight_leq":
            return [edges[eid].var for eid in span.forest]
        if kind == "mst_edge":
            eid = pred.payload[0]
            return ["tree" if enabled[eid] else "disabled"]
        raise AssertionError(kind)

    # -- decision hint ---------------------------------------------------------

    def decide_hint(self):
        """Suggest enabling the first unassigned edge on a maximal-completion
        path for the first true reach atom not yet satisfied minimally."""
        solver = self.solver
        for pred in self._preds:
            if pred.kind != "reach":
                continue
            if solver.var_value(pred.pvar) != TRUE:
                continue
            u, v = pred.payload
            if self._bfs(False, u)[0][v]:
                continue
            visited, parent = self._bfs(True, u)
            if not visited[v]:
                continue
            path = []
            node = v
            while node != u:
                eid = parent[node]
                path.append(eid)
                e = self.graph.edges[eid]
                node = e.u if e.v == node else e.v
            for eid in reversed(path):
                var = self.graph.edges[eid].var
                if solver.var_value(var) == 0:
                    return mk_lit(var)
        return None
