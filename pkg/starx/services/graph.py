from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass, field
from typing import Iterator, Literal

from starx.schemas import GraphSummary, TraceRecord
from starx.services.congruence import canonicalize
from starx.services.reduction import DEFAULT_OPTIONS, RuleOptions, TraceStep, star_redexes, star_step
from starx.services.simplification import simplify
from starx.services.xcalc import x_redexes, x_step
from starx.syntax import format_term
from starx.terms import Term

LOGGER = logging.getLogger(__name__)

Calculus = Literal["star", "x"]


@dataclass(frozen=True)
class Edge:
    src: int
    rule: str
    dst: int


@dataclass
class ReductionGraph:
    nodes: list[Term] = field(default_factory=list)
    index: dict[Term, int] = field(default_factory=dict)
    edges: list[Edge] = field(default_factory=list)
    expanded: set[int] = field(default_factory=set)
    truncated_by_fuel: bool = False
    truncated_by_nodes: bool = False

    def add(self, term: Term) -> tuple[int, bool]:
        if term in self.index:
            return self.index[term], False
        self.index[term] = len(self.nodes)
        self.nodes.append(term)
        return self.index[term], True

    def successors(self, i: int) -> list[Edge]:
        return [e for e in self.edges if e.src == i]

    def normal_forms(self) -> list[Term]:
        sources = {e.src for e in self.edges}
        return [t for i, t in enumerate(self.nodes) if i in self.expanded and i not in sources]

    def find_cycle(self) -> list[int] | None:
        """Node indices of some cycle, first node repeated at the end."""
        succ: dict[int, list[int]] = {}
        for e in self.edges:
            succ.setdefault(e.src, []).append(e.dst)
        state: dict[int, int] = {}
        stack: list[int] = []

        def visit(i: int) -> list[int] | None:
            state[i] = 1
            stack.append(i)
            for j in succ.get(i, []):
                if state.get(j) == 1:
                    return stack[stack.index(j) :] + [j]
                if j not in state:
                    found = visit(j)
                    if found:
                        return found
            stack.pop()
            state[i] = 2
            return None

        for i in range(len(self.nodes)):
            if i not in state:
                found = visit(i)
                if found:
                    return found
        return None

    def is_acyclic(self) -> bool:
        return self.find_cycle() is None

    def shortest_cycle_through(self, i: int) -> list[Edge] | None:
        """Edges of a shortest path from node ``i`` back to itself."""
        prev: dict[int, Edge] = {}
        queue = deque([i])
        seen = {i}
        while queue:
            node = queue.popleft()
            for e in self.successors(node):
                if e.dst == i:
                    path = [e]
                    while path[0].src != i:
                        path.insert(0, prev[path[0].src])
                    return path
                if e.dst not in seen:
                    seen.add(e.dst)
                    prev[e.dst] = e
                    queue.append(e.dst)
        return None

    def summary(self, label_width: int = 120) -> GraphSummary:
        cycle = self.find_cycle()
        return GraphSummary(
            nodes=len(self.nodes),
            edges=len(self.edges),
            normal_forms=[format_term(t) for t in self.normal_forms()],
            acyclic=cycle is None,
            cycle=[_label(format_term(self.nodes[i]), label_width) for i in cycle] if cycle else None,
            truncated_by_fuel=self.truncated_by_fuel,
            truncated_by_nodes=self.truncated_by_nodes,
        )

    def to_dot(self, label_width: int = 120) -> str:
        return "".join(graphviz(self, label_width))


def _gvquote(s: str) -> str:
    return '"{}"'.format(s.replace("\\", "\\\\").replace('"', r"\""))


def _label(text: str, width: int) -> str:
    return text if len(text) <= width else text[: width - 3] + "..."


def graphviz(graph: ReductionGraph, label_width: int = 120) -> Iterator[str]:
    normal = {graph.index[t] for t in graph.normal_forms()}
    yield "digraph reductions {\n"
    yield "  node [shape=box];\n"
    for i, term in enumerate(graph.nodes):
        shape = "doubleoctagon" if i == 0 else ("box, peripheries=2" if i in normal else "box")
        yield "  n{} [label={} shape={}];\n".format(i, _gvquote(_label(format_term(term), label_width)), shape)
    for e in graph.edges:
        yield "  n{} -> n{} [label={}];\n".format(e.src, e.dst, _gvquote(e.rule))
    yield "}\n"


def explore_graph(
    t: Term,
    max_nodes: int,
    fuel: int,
    *,
    calculus: Calculus = "star",
    options: RuleOptions = DEFAULT_OPTIONS,
) -> ReductionGraph:
    """Breadth-first reduction graph over canonical terms, at most ``fuel`` steps deep.

    Under *X every node is simplified before it is canonicalized.
    """
    if calculus == "star":
        key = lambda s: canonicalize(simplify(s))  # noqa: E731
        redexes, step = star_redexes, star_step
    else:
        key = canonicalize
        redexes, step = x_redexes, x_step

    graph = ReductionGraph()
    root, _ = graph.add(key(t))
    queue = deque([(root, 0)])
    while queue:
        i, depth = queue.popleft()
        term = graph.nodes[i]
        found = redexes(term, options)
        if found and depth >= fuel:
            graph.truncated_by_fuel = True
            continue
        graph.expanded.add(i)
        for redex in found:
            nxt = key(step(term, redex.position, redex.rule, options))
            if nxt not in graph.index and len(graph.nodes) >= max_nodes:
                graph.truncated_by_nodes = True
                graph.expanded.discard(i)
                continue
            j, new = graph.add(nxt)
            graph.edges.append(Edge(i, redex.rule, j))
            if new:
                queue.append((j, depth + 1))
    if graph.truncated_by_fuel or graph.truncated_by_nodes:
        LOGGER.info(
            "graph truncated at %d nodes (fuel=%s, nodes=%s)",
            len(graph.nodes),
            graph.truncated_by_fuel,
            graph.truncated_by_nodes,
        )
    return graph


def trace_records(trace: list[TraceStep]) -> list[TraceRecord]:
    return [
        TraceRecord(step=s.step, rule=s.rule, position=list(s.position), term=format_term(s.term))
        for s in trace
    ]


def trace_jsonl(trace: list[TraceStep]) -> str:
    return "".join(record.model_dump_json() + "\n" for record in trace_records(trace))
