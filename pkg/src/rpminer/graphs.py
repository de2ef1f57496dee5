"""Small directed-graph toolkit: dominators, SCCs, DFS orders, simple paths.

Graphs are plain adjacency mappings ``{vertex: iterable of successors}``.
Vertices must be hashable and mutually comparable; successors are always
visited in sorted order so every result is deterministic.
"""

from __future__ import annotations

from typing import Hashable, Iterable, Mapping, TypeVar

V = TypeVar("V", bound=Hashable)
Graph = Mapping[V, Iterable[V]]


class SearchBudgetExceeded(RuntimeError):
    """Raised when an exhaustive path search exceeds its step budget."""


def _sorted_succ(graph: Graph, v) -> list:
    return sorted(graph.get(v, ()))


def vertices_of(graph: Graph) -> set:
    found = set(graph)
    for succs in graph.values():
        found.update(succs)
    return found


def predecessors(graph: Graph) -> dict:
    preds: dict = {v: set() for v in vertices_of(graph)}
    for v, succs in graph.items():
        for w in succs:
            preds[w].add(v)
    return preds


def dfs_preorder(graph: Graph, root) -> list:
    order = [root]
    seen = {root}
    stack = [(root, iter(_sorted_succ(graph, root)))]
    while stack:
        v, it = stack[-1]
        for w in it:
            if w not in seen:
                seen.add(w)
                order.append(w)
                stack.append((w, iter(_sorted_succ(graph, w))))
                break
        else:
            stack.pop()
    return order


def reverse_postorder(graph: Graph, root) -> list:
    post = []
    seen = {root}
    stack = [(root, iter(_sorted_succ(graph, root)))]
    while stack:
        v, it = stack[-1]
        for w in it:
            if w not in seen:
                seen.add(w)
                stack.append((w, iter(_sorted_succ(graph, w))))
                break
        else:
            stack.pop()
            post.append(v)
    post.reverse()
    return post


def immediate_dominators(graph: Graph, root) -> dict:
    """Immediate dominator of every vertex reachable from ``root``.

    Iterative data-flow formulation (Cooper, Harvey and Kennedy).  The root
    maps to itself.
    """
    order = reverse_postorder(graph, root)
    index = {v: i for i, v in enumerate(order)}
    preds: dict = {v: [] for v in order}
    for v in order:
        for w in graph.get(v, ()):
            preds[w].append(v)

    idom = {root: root}

    def intersect(a, b):
        while a != b:
            while index[a] > index[b]:
                a = idom[a]
            while index[b] > index[a]:
                b = idom[b]
        return a

    changed = True
    while changed:
        changed = False
        for v in order[1:]:
            new = None
            for p in preds[v]:
                if p in idom:
                    new = p if new is None else intersect(p, new)
            if idom.get(v) != new:
                idom[v] = new
                changed = True
    return idom


def dominates(idom: Mapping, a, b) -> bool:
    """True if ``a`` dominates ``b`` (reflexive)."""
    if b not in idom:
        return False
    while True:
        if b == a:
            return True
        parent = idom[b]
        if parent == b:
            return False
        b = parent


def strongly_connected_components(graph: Graph) -> list[frozenset]:
    """All SCCs (Kosaraju), sorted by their smallest vertex."""
    verts = sorted(vertices_of(graph))
    finish = []
    seen = set()
    for start in verts:
        if start in seen:
            continue
        seen.add(start)
        stack = [(start, iter(_sorted_succ(graph, start)))]
        while stack:
            v, it = stack[-1]
            for w in it:
                if w not in seen:
                    seen.add(w)
                    stack.append((w, iter(_sorted_succ(graph, w))))
                    break
            else:
                stack.pop()
                finish.append(v)
    rev = predecessors(graph)
    assigned = set()
    comps = []
    for start in reversed(finish):
        if start in assigned:
            continue
        comp = {start}
        assigned.add(start)
        todo = [start]
        while todo:
            v = todo.pop()
            for w in rev[v]:
                if w not in assigned:
                    assigned.add(w)
                    comp.add(w)
                    todo.append(w)
        comps.append(frozenset(comp))
    comps.sort(key=min)
    return comps


def nontrivial_sccs(graph: Graph) -> list[frozenset]:
    return [c for c in strongly_connected_components(graph) if len(c) > 1]


def retreating_edges(graph: Graph, root) -> tuple[list, dict]:
    """DFS from ``root``; returns edges whose target is on the DFS stack when
    explored, plus the DFS depth of every visited vertex."""
    depth = {root: 0}
    on_stack = {root}
    found = []
    stack = [(root, iter(_sorted_succ(graph, root)))]
    while stack:
        v, it = stack[-1]
        for w in it:
            if w in on_stack:
                found.append((v, w))
            elif w not in depth:
                depth[w] = depth[v] + 1
                on_stack.add(w)
                stack.append((w, iter(_sorted_succ(graph, w))))
                break
        else:
            stack.pop()
            on_stack.discard(v)
    return found, depth


def longest_simple_path(graph: Graph, source, target, budget: int | None = None) -> int | None:
    """Number of edges on the longest simple path ``source -> target``.

    Exhaustive; ``budget`` caps the number of DFS expansions and raises
    :class:`SearchBudgetExceeded` when hit.  Returns ``None`` if ``target``
    is unreachable.
    """
    if source == target:
        return 0
    best = None
    steps = 0
    visited = {source}
    stack = [iter(_sorted_succ(graph, source))]
    path_len = 0
    path = [source]
    while stack:
        for w in stack[-1]:
            steps += 1
            if budget is not None and steps > budget:
                raise SearchBudgetExceeded(f"more than {budget} expansions")
            if w == target:
                if best is None or path_len + 1 > best:
                    best = path_len + 1
            elif w not in visited:
                visited.add(w)
                path.append(w)
                path_len += 1
                stack.append(iter(_sorted_succ(graph, w)))
                break
        else:
            stack.pop()
            visited.discard(path.pop())
            path_len -= 1
    return best
