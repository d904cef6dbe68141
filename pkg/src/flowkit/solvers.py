"""Three exact maximum-flow algorithms.

* :func:`edmonds_karp` — augmenting paths, always choosing a breadth-first
  shortest path in the residual graph.
* :func:`push_relabel` — FIFO preflow-push with distance labels.
* :func:`hochbaum_maxflow` — pseudoflow iteration on a normalized tree,
  solving the maximum blocking cut problem first and recovering a flow.

All solvers work in exact rational arithmetic and return identical optimal
values.  Instrumented mode re-checks the per-step invariants (valid
preflow/labeling, normalized-tree conditions) and is meant for tests.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction

from .network import (
    FlowAssignment,
    NetworkError,
    build_network,
    validate,
)
from .values import exact, is_unbounded

ROOT = 0  # parent sentinel: branch hangs directly off the contracted root


@dataclass
class MaxflowResult:
    flow: FlowAssignment
    value: Fraction
    stats: dict
    debug: dict | None = None


def _require_finite(net):
    if any(is_unbounded(c) for c in net.capacities()):
        raise NetworkError("solver requires finite capacities")


def _push(f, u, v, delta):
    f[(u, v)] = f.get((u, v), Fraction(0)) + delta
    f[(v, u)] = f.get((v, u), Fraction(0)) - delta


def _residual(net, f, u, v):
    return net.cbar(u, v) - f.get((u, v), Fraction(0))


def _residual_neighbors(net, v):
    return sorted(set(net.out_neighbors(v)) | set(net.in_neighbors(v)))


def _as_flow(net, f, role="flow"):
    values = {}
    for (u, v) in net.arcs:
        x = f.get((u, v), Fraction(0))
        if x != 0:
            values[(u, v)] = x
    return FlowAssignment(values, role)


# -- shortest augmenting paths -------------------------------------------


def edmonds_karp(net, instrumented=False):
    """Maximum flow by shortest augmenting paths; terminates on rational input."""
    _require_finite(net)
    s, t = net.source, net.sink
    f = {}
    value = Fraction(0)
    augmentations = 0
    while True:
        parent = {s: None}
        queue = deque([s])
        while queue and t not in parent:
            u = queue.popleft()
            for v in _residual_neighbors(net, u):
                if v not in parent and _residual(net, f, u, v) > 0:
                    parent[v] = u
                    queue.append(v)
        if t not in parent:
            break
        path = [t]
        while parent[path[-1]] is not None:
            path.append(parent[path[-1]])
        path.reverse()
        bottleneck = min(_residual(net, f, path[i], path[i + 1]) for i in range(len(path) - 1))
        for i in range(len(path) - 1):
            _push(f, path[i], path[i + 1], bottleneck)
        value += bottleneck
        augmentations += 1
        if instrumented:
            bad = validate(net, _as_flow(net, f), "flow")
            assert not bad, f"invalid intermediate flow: {bad}"
    flow = _as_flow(net, f)
    return MaxflowResult(flow, value, {"augmentations": augmentations, "value": value})


# -- FIFO preflow-push ----------------------------------------------------


@dataclass(frozen=True)
class LabelFunction:
    """Distance labels d(v); valid when d(s)=n, d(t)=0 and every residual
    arc (u, v) satisfies d(u) <= d(v) + 1."""

    labels: dict


def labeling_violations(net, f, lab):
    labels = lab.labels if isinstance(lab, LabelFunction) else lab
    bad = []
    if labels.get(net.source) != net.n:
        bad.append(("source_label", net.source))
    if labels.get(net.sink) != 0:
        bad.append(("sink_label", net.sink))
    for v in net.vertices():
        d = labels.get(v, math.inf)
        if d != math.inf and (d < 0 or d != int(d)):
            bad.append(("label_range", v))
    fa = f if isinstance(f, FlowAssignment) else FlowAssignment(f, "preflow")
    for u in net.vertices():
        for v in _residual_neighbors(net, u):
            if net.cbar(u, v) - fa.value(u, v) > 0:
                if labels.get(u, math.inf) > labels.get(v, math.inf) + 1:
                    bad.append(("residual_edge", (u, v)))
    return bad


def push_relabel(net, instrumented=False):
    """Maximum flow by FIFO push-relabel.

    Starts from the preflow saturating every source arc with labels
    d(s)=n, 0 elsewhere.  A vertex is active when it has strictly positive
    excess and is neither the source nor the sink; active vertices are
    discharged in FIFO order.
    """
    _require_finite(net)
    n, s, t = net.n, net.source, net.sink
    f = {}
    excess = {v: Fraction(0) for v in net.vertices()}
    d = {v: 0 for v in net.vertices()}
    d[s] = n
    for v in net.out_neighbors(s):
        c = net.capacity(s, v)
        if c > 0:
            _push(f, s, v, c)
            excess[v] += c
            excess[s] -= c
    queue = deque(v for v in sorted(net.vertices())
                  if v not in (s, t) and excess[v] > 0)
    queued = set(queue)
    pushes = relabels = 0

    def checkpoint():
        bad = validate(net, _as_flow(net, f, "preflow"), "preflow")
        bad += labeling_violations(net, _as_flow(net, f, "preflow"), d)
        assert not bad, f"push-relabel invariant broken: {bad}"

    while queue:
        v = queue.popleft()
        queued.discard(v)
        while excess[v] > 0:
            pushed = False
            for w in _residual_neighbors(net, v):
                if excess[v] == 0:
                    break
                r = _residual(net, f, v, w)
                if r > 0 and d[v] == d[w] + 1:
                    delta = min(excess[v], r)
                    _push(f, v, w, delta)
                    excess[v] -= delta
                    excess[w] += delta
                    pushes += 1
                    pushed = True
                    if instrumented:
                        checkpoint()
                    if w not in (s, t) and w not in queued and excess[w] > 0:
                        queue.append(w)
                        queued.add(w)
            if excess[v] == 0:
                break
            if not pushed:
                d[v] = min(d[w] + 1 for w in _residual_neighbors(net, v)
                           if _residual(net, f, v, w) > 0)
                relabels += 1
                if instrumented:
                    checkpoint()

    flow = _as_flow(net, f)
    value = excess[t]
    result = MaxflowResult(flow, value, {"pushes": pushes, "relabels": relabels,
                                         "value": value})
    if instrumented:
        result.debug = {"labels": LabelFunction(dict(d))}
    return result


# -- pseudoflow on a normalized tree --------------------------------------


class WeightedGraph:
    """Simple directed graph with signed vertex weights and arc capacities;
    the input of the maximum blocking cut problem."""

    __slots__ = ("n", "weights", "arcs")

    def __init__(self, n, weights, arcs):
        self.n = n
        self.weights = {v: exact(weights.get(v, 0)) for v in range(1, n + 1)}
        self.arcs = {}
        for (u, v), c in dict(arcs).items():
            if not (1 <= u <= n) or not (1 <= v <= n) or u == v:
                raise NetworkError(f"bad arc ({u}, {v})")
            if (v, u) in arcs:
                raise NetworkError(f"antiparallel pair ({u},{v})/({v},{u}) not supported")
            c = exact(c)
            if c < 0:
                raise NetworkError(f"negative capacity on ({u}, {v})")
            self.arcs[(u, v)] = c

    def surplus(self, subset):
        """Total weight inside the subset minus the capacity leaving it."""
        inside = sum((self.weights[v] for v in subset), Fraction(0))
        boundary = sum((c for (a, b), c in self.arcs.items()
                        if a in subset and b not in subset), Fraction(0))
        return inside - boundary


def build_gst(g):
    """Network with fresh s, t: c(s,v)=w_v for positive weights,
    c(v,t)=-w_v for negative weights; graph arcs unchanged.

    {s} union S is a minimum-cut source side exactly when S is a maximum
    blocking cut of the weighted graph.
    """
    s, t = g.n + 1, g.n + 2
    triples = [(u, v, c) for (u, v), c in sorted(g.arcs.items())]
    for v in range(1, g.n + 1):
        w = g.weights[v]
        if w > 0:
            triples.append((s, v, w))
        elif w < 0:
            triples.append((v, t, -w))
    return build_network(g.n + 2, s, t, triples)


@dataclass(frozen=True)
class NormalizedTree:
    """Rooted spanning tree of the extended graph (source and sink merged
    into `root`), with excess carried only by branch roots."""

    root: int
    parent: dict = field(default_factory=dict)   # internal vertex -> parent (ROOT = child of root)
    excess: dict = field(default_factory=dict)

    def branch_root(self, v):
        while self.parent[v] != ROOT:
            v = self.parent[v]
        return v

    def branch_roots(self):
        return sorted(v for v, p in self.parent.items() if p == ROOT)

    def is_strong(self, v):
        return self.excess[self.branch_root(v)] > 0

    def strong_vertices(self):
        return sorted(v for v in self.parent if self.is_strong(v))

    def weak_vertices(self):
        return sorted(v for v in self.parent if not self.is_strong(v))


def normalized_tree_violations(net, f, tree):
    """Check the four normalized-tree conditions for a pseudoflow on `net`."""
    s, t = net.source, net.sink
    fa = f if isinstance(f, FlowAssignment) else FlowAssignment(f, "pseudoflow")
    bad = []
    bad.extend(("pseudoflow",) + (v.kind, v.where) for v in validate(net, fa, "pseudoflow"))
    for v in net.out_neighbors(s):
        if fa.value(s, v) != net.capacity(s, v):
            bad.append(("source_arc_not_saturated", (s, v)))
    for v in net.in_neighbors(t):
        if fa.value(v, t) != net.capacity(v, t):
            bad.append(("sink_arc_not_saturated", (v, t)))
    tree_edges = {(v, p) for v, p in tree.parent.items() if p != ROOT}
    tree_edges |= {(p, v) for (v, p) in tree_edges}
    for (u, v) in net.arcs:
        if u in (s, t) or v in (s, t) or (u, v) in tree_edges:
            continue
        x = fa.value(u, v)
        if x != 0 and x != net.capacity(u, v):
            bad.append(("nontree_arc_partial", (u, v)))
    for v, p in tree.parent.items():
        if p == ROOT:
            continue
        if net.cbar(p, v) - fa.value(p, v) <= 0:
            bad.append(("downward_residual", (p, v)))
    for v in tree.parent:
        if tree.parent[v] != ROOT and fa.excess(v) != 0:
            bad.append(("interior_excess", v))
        if tree.parent[v] == ROOT and fa.excess(v) != tree.excess[v]:
            bad.append(("root_excess_mismatch", v))
    return bad


def _pseudoflow_core(net, instrumented=False):
    """Iterate merger arcs until no residual arc runs from a strong to a
    weak vertex; returns the optimal tree, the pseudoflow and the
    iteration count."""
    s, t = net.source, net.sink
    internal = sorted(v for v in net.vertices() if v not in (s, t))
    f = {}
    for v in net.out_neighbors(s):
        _push(f, s, v, net.capacity(s, v))
    for v in net.in_neighbors(t):
        if v != s:  # a direct (s, t) arc is already saturated
            _push(f, v, t, net.capacity(v, t))
    parent = {v: ROOT for v in internal}
    children = {v: set() for v in internal}
    excess = {v: net.cbar(s, v) - net.cbar(v, t) for v in internal}
    iterations = 0
    initial_tree = NormalizedTree(ROOT, dict(parent), dict(excess))

    def branch_root(v):
        while parent[v] != ROOT:
            v = parent[v]
        return v

    def subtree(v):
        out = [v]
        stack = [v]
        while stack:
            u = stack.pop()
            for w in children[u]:
                out.append(w)
                stack.append(w)
        return out

    def snapshot():
        return NormalizedTree(ROOT, dict(parent), dict(excess))

    def find_merger():
        strong_roots = sorted(v for v in internal if parent[v] == ROOT and excess[v] > 0)
        if not strong_roots:
            return None
        strong = set()
        for r in strong_roots:
            strong.update(subtree(r))
        for r in strong_roots:
            for a in sorted(subtree(r)):
                for b in _residual_neighbors(net, a):
                    if b in (s, t) or b in strong:
                        continue
                    if _residual(net, f, a, b) > 0:
                        return (a, b)
        return None

    while True:
        merger = find_merger()
        if merger is None:
            break
        iterations += 1
        a, b = merger
        r_s = branch_root(a)
        # re-root the strong branch at the merger tail, then hang it under b
        chain = [a]
        while parent[chain[-1]] != ROOT:
            chain.append(parent[chain[-1]])
        for i in range(len(chain) - 1):
            u, pu = chain[i], chain[i + 1]
            children[pu].discard(u)
            parent[pu] = u
            children[u].add(pu)
        parent[a] = b
        children[b].add(a)

        # the excess travels along the unique tree path from the old strong
        # root to the weak branch root; the within-branch order is fixed by
        # that path, the only freedom the narrative leaves open
        delta = excess[r_s]
        excess[r_s] = Fraction(0)
        path = [r_s]
        while parent[path[-1]] != ROOT:
            path.append(parent[path[-1]])
        i = 0
        while i < len(path) - 1 and delta > 0:
            u, u2 = path[i], path[i + 1]
            r = _residual(net, f, u, u2)
            if delta > r:
                # split: the tail keeps the excess that could not cross
                children[u2].discard(u)
                parent[u] = ROOT
                excess[u] = delta - r
                if r > 0:
                    _push(f, u, u2, r)
                delta = r
            else:
                _push(f, u, u2, delta)
            i += 1
        if delta > 0:
            excess[path[-1]] += delta
        if instrumented:
            bad = normalized_tree_violations(net, _as_flow(net, f, "pseudoflow"), snapshot())
            assert not bad, f"normalized tree broken after iteration {iterations}: {bad}"

    return snapshot(), _as_flow(net, f, "pseudoflow"), iterations, initial_tree


@dataclass
class BlockingCutResult:
    subset: frozenset
    surplus: Fraction
    tree: NormalizedTree
    pseudoflow: FlowAssignment


def max_blocking_cut(g):
    """Maximum surplus set of a weighted graph via the pseudoflow iteration."""
    gst = build_gst(g)
    tree, pf, iterations, _ = _pseudoflow_core(gst)
    subset = frozenset(tree.strong_vertices())
    return BlockingCutResult(subset, g.surplus(subset), tree, pf)


def _reverse_network(net):
    arcs = [(v, u, c) for (u, v), c in zip(net.arcs, net.capacities())]
    return build_network(net.n, net.sink, net.source, arcs)


def hochbaum_maxflow(net, instrumented=False):
    """Maximum flow via the pseudoflow algorithm.

    Runs on the reversed network when the total sink-arc capacity is the
    smaller side, so the iteration count is governed by min(M+, M-).
    """
    from .decompose import recover_flow

    _require_finite(net)
    m_plus = sum((net.capacity(net.source, v) for v in net.out_neighbors(net.source)),
                 Fraction(0))
    m_minus = sum((net.capacity(v, net.sink) for v in net.in_neighbors(net.sink)),
                  Fraction(0))
    reverse = m_minus < m_plus
    work = _reverse_network(net) if reverse else net
    tree, pf, iterations, initial_tree = _pseudoflow_core(work, instrumented=instrumented)
    flow = recover_flow(work, pf, tree)
    if reverse:
        flow = FlowAssignment({(v, u): x for (u, v), x in flow.raw.items()}, "flow")
    from .network import net_flow

    value = net_flow(net, flow)
    result = MaxflowResult(flow, value, {"iterations": iterations, "value": value})
    if instrumented:
        result.debug = {"initial_tree": initial_tree, "final_tree": tree,
                        "reversed": reverse, "pseudoflow": pf}
    return result


ALGORITHMS = {
    "ek": edmonds_karp,
    "pr": push_relabel,
    "hoch": hochbaum_maxflow,
}
