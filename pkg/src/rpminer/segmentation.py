"""Control-flow graph construction, back-edge detection and log segmentation."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Mapping, Sequence

from . import graphs
from .log_model import ActionKey, NormalizedEvent, UiEvent, key_label

__all__ = [
    "ENTRY",
    "ControlFlowGraph",
    "EmptyLog",
    "LoopAnalysis",
    "Scc",
    "Segment",
    "analyse_loops",
    "build_cfg",
    "cfg_to_dot",
    "compute_dominator_tree",
    "detect_back_edges",
    "dominator_tree_to_dot",
    "find_nontrivial_sccs",
    "segment_log",
]

log = logging.getLogger(__name__)

# Action keys are JSON arrays, so they never collide with this sentinel.
ENTRY = "^entry"

EXACT_PATH_LIMIT = 20
PATH_SEARCH_BUDGET = 200_000


class EmptyLog(ValueError):
    pass


@dataclass(frozen=True)
class ControlFlowGraph:
    vertices: frozenset
    edges: frozenset
    first: ActionKey
    entry_vertex: str = ENTRY

    @property
    def entry_edge(self) -> tuple:
        return (self.entry_vertex, self.first)

    def successors(self, with_entry: bool = True) -> dict:
        succ: dict = {v: set() for v in self.vertices}
        for a, b in self.edges:
            succ[a].add(b)
        if with_entry:
            succ[self.entry_vertex] = {self.first}
        return succ


@dataclass(frozen=True)
class Scc:
    vertices: frozenset
    edges: frozenset

    @property
    def nontrivial(self) -> bool:
        return len(self.vertices) > 1


@dataclass(frozen=True)
class LoopAnalysis:
    """Outcome of back-edge detection.

    ``back_edges`` delimit segments.  ``loop_edges`` were cut out of
    irreducible components to break them up and are kept for inspection only.
    """

    back_edges: frozenset
    loop_edges: tuple = ()
    headers: tuple = ()


@dataclass(frozen=True)
class Segment:
    events: tuple[UiEvent, ...]
    indices: tuple[int, ...]
    keys: tuple[ActionKey, ...]

    @property
    def start_key(self) -> ActionKey:
        return self.keys[0]

    @property
    def end_key(self) -> ActionKey:
        return self.keys[-1]

    def __len__(self) -> int:
        return len(self.events)


def build_cfg(norm: Sequence[NormalizedEvent]) -> ControlFlowGraph:
    if not norm:
        raise EmptyLog("cannot build a control-flow graph from an empty log")
    keys = [e.key for e in norm]
    edges = frozenset(zip(keys, keys[1:]))
    return ControlFlowGraph(frozenset(keys), edges, keys[0])


def compute_dominator_tree(cfg: ControlFlowGraph) -> dict:
    """Map each vertex to its immediate dominator; the entry vertex has none."""
    idom = graphs.immediate_dominators(cfg.successors(), cfg.entry_vertex)
    return {v: d for v, d in idom.items() if v != cfg.entry_vertex}


def find_nontrivial_sccs(graph) -> list[Scc]:
    """Components with at least two vertices, with their induced edges.

    Accepts a :class:`ControlFlowGraph` or an adjacency mapping.
    """
    if isinstance(graph, ControlFlowGraph):
        graph = graph.successors(with_entry=False)
    out = []
    for comp in graphs.nontrivial_sccs(graph):
        edges = frozenset((a, b) for a in comp for b in graph.get(a, ()) if b in comp)
        out.append(Scc(comp, edges))
    return out


def _adjacency(vertices, edges) -> dict:
    succ: dict = {v: set() for v in vertices}
    for a, b in edges:
        succ[a].add(b)
    return succ


def _choose_loop_edge(vertices, edges, root) -> tuple:
    succ = _adjacency(vertices, edges)
    candidates, depth = graphs.retreating_edges(succ, root)
    if len(vertices) <= EXACT_PATH_LIMIT:
        try:
            scored = []
            for src, dst in candidates:
                length = graphs.longest_simple_path(succ, dst, src, budget=PATH_SEARCH_BUDGET)
                scored.append((-(length or 0), (src, dst)))
            return min(scored)[1]
        except graphs.SearchBudgetExceeded:
            log.warning("longest-path search over %d vertices gave up; using DFS depth", len(vertices))
    return min(candidates, key=lambda e: (-depth[e[1]], e))


def analyse_loops(cfg: ControlFlowGraph, idom: Mapping | None = None) -> LoopAnalysis:
    """Collect back-edges by recursively analysing strongly connected components.

    A component with a header (a vertex dominating all the others) yields its
    in-component edges into the header as back-edges.  A component without
    one is irreducible: the retreating edge closing the longest simple cycle is
    cut without being recorded, then the remaining components are analysed.
    """
    if idom is None:
        idom = graphs.immediate_dominators(cfg.successors(), cfg.entry_vertex)
    full = cfg.successors()
    preorder = {v: i for i, v in enumerate(graphs.dfs_preorder(full, cfg.entry_vertex))}
    preds = graphs.predecessors(full)

    back_edges: set = set()
    loop_edges: list = []
    headers: list = []
    work = [(s.vertices, set(s.edges)) for s in find_nontrivial_sccs(cfg)]
    work.reverse()
    while work:
        verts, edges = work.pop()
        header = next(
            (h for h in sorted(verts) if all(graphs.dominates(idom, h, v) for v in verts)),
            None,
        )
        if header is not None:
            incoming = {(a, b) for a, b in edges if b == header}
            headers.append(header)
            back_edges |= incoming
            edges -= incoming
        else:
            entries = [v for v in verts if any(p not in verts for p in preds[v])]
            root = min(entries or verts, key=lambda v: (preorder.get(v, len(preorder)), v))
            cut = _choose_loop_edge(verts, edges, root)
            loop_edges.append(cut)
            edges.discard(cut)
        nested = find_nontrivial_sccs(_adjacency(verts, edges))
        work.extend((s.vertices, set(s.edges)) for s in reversed(nested))
    return LoopAnalysis(frozenset(back_edges), tuple(loop_edges), tuple(headers))


def detect_back_edges(cfg: ControlFlowGraph) -> frozenset:
    return analyse_loops(cfg).back_edges


def segment_log(
    filtered: Sequence[UiEvent],
    norm: Sequence[NormalizedEvent],
    back_edges,
) -> list[Segment]:
    """Scan the log and cut it into segments delimited by back-edges.

    A segment opens at a back-edge target when no segment is open and closes
    at an event ``u`` such that ``(u, start)`` is a back-edge.  Events outside
    any segment are discarded, as is a segment still open at the end.
    """
    back_edges = frozenset(back_edges)
    targets = {b for _, b in back_edges}
    sources = {a for a, _ in back_edges}
    segments = []
    current: list[int] = []
    start = None
    for pos, event in enumerate(norm):
        key = event.key
        if key in targets:
            if start is None:
                current = [pos]
                start = key
            else:
                current.append(pos)
        elif start is not None:
            current.append(pos)
            if key in sources and (key, start) in back_edges:
                segments.append(_make_segment(filtered, norm, current))
                start = None
    return segments


def _make_segment(filtered, norm, positions) -> Segment:
    return Segment(
        events=tuple(filtered[norm[p].origin_index] for p in positions),
        indices=tuple(norm[p].origin_index for p in positions),
        keys=tuple(norm[p].key for p in positions),
    )


def _dot_id(v, ids: dict) -> str:
    if v not in ids:
        ids[v] = f"n{len(ids)}"
    return ids[v]


def _dot_label(v) -> str:
    text = "entry" if v == ENTRY else key_label(v)
    return text.replace('"', r"\"")


def cfg_to_dot(cfg: ControlFlowGraph, back_edges=frozenset()) -> str:
    ids: dict = {}
    lines = ["digraph cfg {"]
    for v in [cfg.entry_vertex, *sorted(cfg.vertices)]:
        lines.append(f'  {_dot_id(v, ids)} [label="{_dot_label(v)}"];')
    for a, b in [cfg.entry_edge, *sorted(cfg.edges)]:
        style = " [color=red]" if (a, b) in back_edges else ""
        lines.append(f"  {_dot_id(a, ids)} -> {_dot_id(b, ids)}{style};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def dominator_tree_to_dot(cfg: ControlFlowGraph, idom: Mapping | None = None) -> str:
    idom = compute_dominator_tree(cfg) if idom is None else idom
    ids: dict = {}
    lines = ["digraph domtree {"]
    for v in [cfg.entry_vertex, *sorted(idom)]:
        lines.append(f'  {_dot_id(v, ids)} [label="{_dot_label(v)}"];')
    for v in sorted(idom):
        lines.append(f"  {_dot_id(idom[v], ids)} -> {_dot_id(v, ids)};")
    lines.append("}")
    return "\n".join(lines) + "\n"
