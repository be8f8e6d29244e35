"""GNF reader and writer.

GNF extends DIMACS CNF with typed declarations that bind solver variables to
graph edges, scheduling tasks, and predicate atoms. The format is line
oriented; `c` lines are comments anywhere, except that `c meta ...` lines
carry generator metadata that survives a round trip.

    p gnf <nVars> <nClauses>
    <lit> ... 0                      clause, DIMACS signed vars
    digraph <n> <m> <gid>            directed graph declaration
    ugraph <n> <m> <gid>             undirected graph declaration
    edge <gid> <u> <v> <var> [<w>]   weight defaults to 1
    reach <gid> <u> <v> <var>
    distance_leq <gid> <u> <v> <C> <var>
    maxflow_geq <gid> <s> <t> <C> <var>
    components_leq <gid> <C> <var>
    mst_weight_leq <gid> <C|inf> <var>
    mst_edge <gid> <edgeVar> <var>
    processor <pid>
    task <pid> <A> <L> <D> <var>
    schedulable <pid> <var>

Graphs and processors must be declared before their members; mst_edge must
follow the edge it names. Atom vars are globally unique and distinct from
every edge and task var. Edge vars may repeat across graphs but not within
one; the same holds for task vars across processors.
"""
from __future__ import annotations

from dataclasses import dataclass, field

DIRECTED_PREDS = ("reach", "distance_leq", "maxflow_geq")
UNDIRECTED_PREDS = ("components_leq", "mst_weight_leq", "mst_edge")


class GnfError(Exception):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = "line %d: %s" % (line, message)
        super().__init__(message)


@dataclass
class EdgeDecl:
    gid: int
    u: int
    v: int
    var: int
    weight: int = 1


@dataclass
class GraphDecl:
    gid: int
    directed: bool
    n: int
    edges: list = field(default_factory=list)


@dataclass
class TaskDecl:
    pid: int
    arrival: int
    duration: int
    deadline: int
    var: int


@dataclass
class ProcDecl:
    pid: int
    tasks: list = field(default_factory=list)


@dataclass
class PredDecl:
    kind: str
    owner: int  # gid or pid
    args: tuple
    var: int


@dataclass
class GnfDocument:
    nvars: int = 0
    clauses: list = field(default_factory=list)
    graphs: dict = field(default_factory=dict)
    procs: dict = field(default_factory=dict)
    preds: list = field(default_factory=list)
    meta: dict = field(default_factory=dict)

    def s_vars(self):
        out = set()
        for g in self.graphs.values():
            out.update(e.var for e in g.edges)
        for p in self.procs.values():
            out.update(t.var for t in p.tasks)
        return out


def _ints(tokens, ln, what):
    try:
        return [int(t) for t in tokens]
    except ValueError:
        raise GnfError("%s expects integers, got %r" % (what, tokens), ln)


def parse(text: str) -> GnfDocument:
    doc = GnfDocument()
    declared_clauses = None
    declared_edges = {}
    svar_lines = {}  # var -> first declaring line
    pvar_lines = {}

    def check_var(v, ln):
        if not 1 <= v <= doc.nvars:
            raise GnfError("var %d out of range 1..%d" % (v, doc.nvars), ln)

    def new_svar(v, ln):
        check_var(v, ln)
        if v in pvar_lines:
            raise GnfError("var %d is already a predicate atom (line %d)"
                           % (v, pvar_lines[v]), ln)
        svar_lines.setdefault(v, ln)

    def new_pvar(v, ln):
        check_var(v, ln)
        if v in svar_lines:
            raise GnfError("var %d is already an edge or task var (line %d)"
                           % (v, svar_lines[v]), ln)
        if v in pvar_lines:
            raise GnfError("var %d is already a predicate atom (line %d)"
                           % (v, pvar_lines[v]), ln)
        pvar_lines[v] = ln

    def get_graph(gid, ln, directed=None):
        g = doc.graphs.get(gid)
        if g is None:
            raise GnfError("graph %d not declared" % gid, ln)
        if directed is True and not g.directed:
            raise GnfError("graph %d is undirected" % gid, ln)
        if directed is False and g.directed:
            raise GnfError("graph %d is directed" % gid, ln)
        return g

    for ln, raw in enumerate(text.splitlines(), start=1):
        tokens = raw.split()
        if not tokens:
            continue
        head = tokens[0]
        if head == "c":
            if len(tokens) >= 3 and tokens[1] == "meta":
                doc.meta[tokens[2]] = tokens[3:]
            continue
        if head == "p":
            if declared_clauses is not None:
                raise GnfError("duplicate header", ln)
            if len(tokens) != 4 or tokens[1] != "gnf":
                raise GnfError("header must be 'p gnf <vars> <clauses>'", ln)
            nvars, nclauses = _ints(tokens[2:], ln, "header")
            if nvars < 0 or nclauses < 0:
                raise GnfError("negative counts in header", ln)
            doc.nvars = nvars
            declared_clauses = nclauses
            continue
        if declared_clauses is None:
            raise GnfError("content before 'p gnf' header", ln)
        if head.lstrip("-").isdigit():
            lits = _ints(tokens, ln, "clause")
            if lits[-1] != 0:
                raise GnfError("clause not terminated by 0", ln)
            if 0 in lits[:-1]:
                raise GnfError("0 inside clause", ln)
            for lit in lits[:-1]:
                check_var(abs(lit), ln)
            doc.clauses.append(lits[:-1])
            continue
        args = tokens[1:]
        if head in ("digraph", "ugraph"):
            if len(args) != 3:
                raise GnfError("%s expects <n> <m> <gid>" % head, ln)
            n, m, gid = _ints(args, ln, head)
            if gid in doc.graphs:
                raise GnfError("duplicate graph id %d" % gid, ln)
            if n < 0 or m < 0:
                raise GnfError("negative graph size", ln)
            doc.graphs[gid] = GraphDecl(gid, head == "digraph", n)
            declared_edges[gid] = m
        elif head == "edge":
            if len(args) not in (4, 5):
                raise GnfError("edge expects <gid> <u> <v> <var> [<w>]", ln)
            vals = _ints(args, ln, "edge")
            gid, u, v, var = vals[:4]
            weight = vals[4] if len(vals) == 5 else 1
            g = get_graph(gid, ln)
            if len(g.edges) >= declared_edges[gid]:
                raise GnfError("graph %d declared %d edges"
                               % (gid, declared_edges[gid]), ln)
            if not (0 <= u < g.n and 0 <= v < g.n):
                raise GnfError("edge endpoint out of range", ln)
            if weight < 0:
                raise GnfError("negative edge weight", ln)
            if any(e.var == var for e in g.edges):
                raise GnfError("var %d already an edge of graph %d"
                               % (var, gid), ln)
            new_svar(var, ln)
            g.edges.append(EdgeDecl(gid, u, v, var, weight))
        elif head in DIRECTED_PREDS:
            want = 4 if head == "reach" else 5
            if len(args) != want:
                raise GnfError("%s expects %d arguments" % (head, want), ln)
            vals = _ints(args, ln, head)
            gid, var = vals[0], vals[-1]
            g = get_graph(gid, ln, directed=True)
            nodes = vals[1:3]
            for x in nodes:
                if not 0 <= x < g.n:
                    raise GnfError("node %d out of range" % x, ln)
            if want == 5 and vals[3] < 0:
                raise GnfError("negative bound", ln)
            if head == "maxflow_geq" and nodes[0] == nodes[1]:
                raise GnfError("flow source equals sink", ln)
            new_pvar(var, ln)
            doc.preds.append(PredDecl(head, gid, tuple(vals[1:-1]), var))
        elif head == "components_leq":
            if len(args) != 3:
                raise GnfError("components_leq expects <gid> <C> <var>", ln)
            gid, bound, var = _ints(args, ln, head)
            get_graph(gid, ln, directed=False)
            if bound < 0:
                raise GnfError("negative bound", ln)
            new_pvar(var, ln)
            doc.preds.append(PredDecl(head, gid, (bound,), var))
        elif head == "mst_weight_leq":
            if len(args) != 3:
                raise GnfError("mst_weight_leq expects <gid> <C|inf> <var>",
                               ln)
            gid, var = _ints([args[0], args[2]], ln, head)
            bound = None
            if args[1] != "inf":
                bound = _ints([args[1]], ln, head)[0]
                if bound < 0:
                    raise GnfError("negative bound", ln)
            get_graph(gid, ln, directed=False)
            new_pvar(var, ln)
            doc.preds.append(PredDecl(head, gid, (bound,), var))
        elif head == "mst_edge":
            if len(args) != 3:
                raise GnfError("mst_edge expects <gid> <edgeVar> <var>", ln)
            gid, evar, var = _ints(args, ln, head)
            g = get_graph(gid, ln, directed=False)
            if not any(e.var == evar for e in g.edges):
                raise GnfError("var %d is not an edge of graph %d"
                               % (evar, gid), ln)
            new_pvar(var, ln)
            doc.preds.append(PredDecl(head, gid, (evar,), var))
        elif head == "processor":
            if len(args) != 1:
                raise GnfError("processor expects <pid>", ln)
            pid = _ints(args, ln, head)[0]
            if pid in doc.procs:
                raise GnfError("duplicate processor id %d" % pid, ln)
            doc.procs[pid] = ProcDecl(pid)
        elif head == "task":
            if len(args) != 5:
                raise GnfError("task expects <pid> <A> <L> <D> <var>", ln)
            pid, a, dur, dl, var = _ints(args, ln, head)
            proc = doc.procs.get(pid)
            if proc is None:
                raise GnfError("processor %d not declared" % pid, ln)
            if a < 0 or dur < 1:
                raise GnfError("task needs A >= 0 and L >= 1", ln)
            if any(t.var == var for t in proc.tasks):
                raise GnfError("var %d already a task on processor %d"
                               % (var, pid), ln)
            new_svar(var, ln)
            proc.tasks.append(TaskDecl(pid, a, dur, dl, var))
        elif head == "schedulable":
            if len(args) != 2:
                raise GnfError("schedulable expects <pid> <var>", ln)
            pid, var = _ints(args, ln, head)
            if pid not in doc.procs:
                raise GnfError("processor %d not declared" % pid, ln)
            new_pvar(var, ln)
            doc.preds.append(PredDecl(head, pid, (), var))
        else:
            raise GnfError("unknown declaration %r" % head, ln)

    if declared_clauses is None:
        raise GnfError("missing 'p gnf' header")
    if len(doc.clauses) != declared_clauses:
        raise GnfError("header declared %d clauses, found %d"
                       % (declared_clauses, len(doc.clauses)))
    for gid, m in declared_edges.items():
        have = len(doc.graphs[gid].edges)
        if have != m:
            raise GnfError("graph %d declared %d edges, found %d"
                           % (gid, m, have))
    return doc


def serialize(doc: GnfDocument) -> str:
    out = ["p gnf %d %d" % (doc.nvars, len(doc.clauses))]
    for key in sorted(doc.meta):
        out.append("c meta %s %s" % (key, " ".join(doc.meta[key])))
    for gid in sorted(doc.graphs):
        g = doc.graphs[gid]
        out.append("%s %d %d %d" % ("digraph" if g.directed else "ugraph",
                                    g.n, len(g.edges), gid))
        for e in g.edges:
            out.append("edge %d %d %d %d %d" % (gid, e.u, e.v, e.var,
                                                e.weight))
    for pid in sorted(doc.procs):
        out.append("processor %d" % pid)
        for t in doc.procs[pid].tasks:
            out.append("task %d %d %d %d %d" % (pid, t.arrival, t.duration,
                                                t.deadline, t.var))
    for p in doc.preds:
        args = tuple("inf" if a is None else str(a) for a in p.args)
        out.append(" ".join((p.kind, str(p.owner)) + args + (str(p.var),)))
    for clause in doc.clauses:
        out.append(" ".join(str(lit) for lit in clause) + " 0")
    return "\n".join(out) + "\n"


def parse_model(text: str, nvars: int):
    """Read `v` lines from solver output into a var -> bool list (1-based)."""
    values = [None] * (nvars + 1)
    for raw in text.splitlines():
        tokens = raw.split()
        if not tokens or tokens[0] != "v":
            continue
        for tok in tokens[1:]:
            lit = int(tok)
            if lit == 0:
                continue
            var = abs(lit)
            if var <= nvars:
                values[var] = lit > 0
    if any(v is None for v in values[1:]):
        missing = next(i for i in range(1, nvars + 1) if values[i] is None)
        raise GnfError("model line missing var %d" % missing)
    return values
