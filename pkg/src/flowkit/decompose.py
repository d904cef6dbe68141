"""Flow decomposition, min-cut extraction and pseudoflow-to-flow recovery.

A valid flow splits into at most m source-to-sink path-flows and
cycle-flows; every extraction step zeroes the flow on at least one arc.
A maximal flow yields a minimum cut as the set of vertices reachable from
the source in the residual graph.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction

from .network import (
    Cut,
    FlowAssignment,
    InvalidFlow,
    NetworkError,
    residual_graph,
    validate,
)
from .solvers import _push, _residual


class NotMaximal(NetworkError):
    """Raised when an operation needs a maximal flow; carries an augmenting
    path as witness."""

    def __init__(self, path):
        self.path = list(path)
        super().__init__(f"flow is not maximal; augmenting path {self.path}")


class NotOptimal(NetworkError):
    """Raised when flow recovery is attempted on a non-optimal tree."""


@dataclass(frozen=True)
class FlowComponent:
    """A path-flow (s..t vertex sequence) or cycle-flow (closed sequence)."""

    kind: str                 # "path" | "cycle"
    vertices: tuple
    amount: Fraction

    def arcs(self):
        return [(self.vertices[i], self.vertices[i + 1])
                for i in range(len(self.vertices) - 1)]


def decompose(net, f):
    """Split a valid flow into path-flows and cycle-flows summing to it.

    Paths are extracted first (breadth-first, lowest-index tie-break),
    then the remaining circulation is peeled into cycles.  Components
    reproduce the flow arc-by-arc and number at most m.
    """
    bad = validate(net, f, "flow")
    if bad:
        raise InvalidFlow(bad)
    s, t = net.source, net.sink
    g = {}
    for (u, v) in net.arcs:
        x = f.value(u, v)
        if x > 0:
            g[(u, v)] = x
    out = {v: set() for v in net.vertices()}
    for (u, v) in g:
        out[u].add(v)

    def drop(u, v, amount):
        g[(u, v)] -= amount
        if g[(u, v)] == 0:
            del g[(u, v)]
            out[u].discard(v)

    components = []
    # source-to-sink paths while the source still emits flow
    while any(g.get((s, v), 0) > 0 for v in list(out[s])):
        parent = {s: None}
        queue = deque([s])
        while queue and t not in parent:
            u = queue.popleft()
            for v in sorted(out[u]):
                if v not in parent:
                    parent[v] = u
                    queue.append(v)
        if t not in parent:
            raise AssertionError("positive outflow with no path to the sink")
        path = [t]
        while parent[path[-1]] is not None:
            path.append(parent[path[-1]])
        path.reverse()
        amount = min(g[(path[i], path[i + 1])] for i in range(len(path) - 1))
        for i in range(len(path) - 1):
            drop(path[i], path[i + 1], amount)
        components.append(FlowComponent("path", tuple(path), amount))

    # what is left is a circulation: peel cycles
    while g:
        start = min(u for (u, _) in g)
        walk = [start]
        seen = {start: 0}
        while True:
            u = walk[-1]
            v = min(out[u])
            if v in seen:
                cycle = walk[seen[v]:] + [v]
                break
            seen[v] = len(walk)
            walk.append(v)
        amount = min(g[(cycle[i], cycle[i + 1])] for i in range(len(cycle) - 1))
        for i in range(len(cycle) - 1):
            drop(cycle[i], cycle[i + 1], amount)
        components.append(FlowComponent("cycle", tuple(cycle), amount))

    return components


def min_cut_from_flow(net, f):
    """Minimum cut from a maximal flow: residual reachability from the source.

    Raises :class:`NotMaximal` with an augmenting path when the flow still
    admits one.
    """
    bad = validate(net, f, "flow")
    if bad:
        raise InvalidFlow(bad)
    res = residual_graph(net, f)
    s, t = net.source, net.sink
    parent = {s: None}
    queue = deque([s])
    while queue:
        u = queue.popleft()
        for v in res.out_neighbors(u):
            if v not in parent:
                parent[v] = u
                queue.append(v)
    if t in parent:
        path = [t]
        while parent[path[-1]] is not None:
            path.append(parent[path[-1]])
        raise NotMaximal(reversed(path))
    return Cut(frozenset(parent))


def _residual_path(net, f, origin, targets):
    """Breadth-first residual path from origin to the nearest target set member."""
    parent = {origin: None}
    queue = deque([origin])
    while queue:
        u = queue.popleft()
        if u in targets:
            path = [u]
            while parent[path[-1]] is not None:
                path.append(parent[path[-1]])
            path.reverse()
            return path
        for v in sorted(set(net.out_neighbors(u)) | set(net.in_neighbors(u))):
            if v not in parent and _residual(net, f, u, v) > 0:
                parent[v] = u
                queue.append(v)
    return None


def recover_flow(gst, pseudoflow, tree):
    """Turn the pseudoflow of an optimal normalized tree into a maximal flow.

    Excesses at strong branch roots drain back to the source along residual
    paths through strong vertices; deficits at strictly weak roots are
    served from the sink through weak vertices.  Arcs crossing from the
    strong side to the weak side stay saturated, so the recovered value
    equals the capacity of the strong/weak cut.
    """
    s, t = gst.source, gst.sink
    strong = set(tree.strong_vertices())
    weak = set(tree.weak_vertices())
    f = {}
    for (u, v) in pseudoflow.support_pairs():
        x = pseudoflow.value(u, v)
        if x != 0:
            f[(u, v)] = x
            f[(v, u)] = -x

    for a in sorted(strong):
        for b in sorted(weak):
            if _residual(gst, f, a, b) > 0:
                raise NotOptimal(f"residual arc ({a}, {b}) runs from strong to weak")

    excess = {v: tree.excess[v] for v in tree.branch_roots()}
    for v in sorted(r for r in excess if excess[r] > 0):
        while excess[v] > 0:
            path = _residual_path(gst, f, v, {s})
            if path is None:
                raise AssertionError(f"no residual path from strong root {v} to the source")
            amount = min(excess[v],
                         min(_residual(gst, f, path[i], path[i + 1])
                             for i in range(len(path) - 1)))
            for i in range(len(path) - 1):
                _push(f, path[i], path[i + 1], amount)
            excess[v] -= amount
    for v in sorted(r for r in excess if excess[r] < 0):
        while excess[v] < 0:
            path = _residual_path(gst, f, t, {v})
            if path is None:
                raise AssertionError(f"no residual path from the sink to weak root {v}")
            amount = min(-excess[v],
                         min(_residual(gst, f, path[i], path[i + 1])
                             for i in range(len(path) - 1)))
            for i in range(len(path) - 1):
                _push(f, path[i], path[i + 1], amount)
            excess[v] += amount

    values = {}
    for (u, v) in gst.arcs:
        x = f.get((u, v), Fraction(0))
        if x != 0:
            values[(u, v)] = x
    flow = FlowAssignment(values, "flow")
    bad = validate(gst, flow, "flow")
    if bad:
        raise AssertionError(f"recovery produced an invalid flow: {bad}")
    return flow


# -- component serialization ----------------------------------------------


def write_components(components):
    """`path <amount> v1 .. vk` / `cycle <amount> v1 .. vk v1`, one per line."""
    from .values import format_value

    lines = []
    for comp in components:
        verts = " ".join(str(v) for v in comp.vertices)
        lines.append(f"{comp.kind} {format_value(comp.amount)} {verts}")
    return "\n".join(lines) + ("\n" if lines else "")


def read_components(text):
    from .network import ParseError
    from .values import parse_value

    components = []
    for line_no, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.strip()
        if not line or line.startswith("c "):
            continue
        fields = line.split()
        if fields[0] not in ("path", "cycle") or len(fields) < 3:
            raise ParseError("expected `path|cycle <amount> <vertices...>`", line_no)
        try:
            amount = parse_value(fields[1])
            vertices = tuple(int(x) for x in fields[2:])
        except ValueError as exc:
            raise ParseError(str(exc), line_no)
        components.append(FlowComponent(fields[0], vertices, amount))
    return components
