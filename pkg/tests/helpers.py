"""Shared builders and brute-force oracles for the test suite.

The oracles deliberately avoid the package's own graph and mining code: they
enumerate instead of being clever, so agreement is meaningful.
"""

from __future__ import annotations

import csv
import io
import itertools
import math
from datetime import datetime, timedelta
from pathlib import Path

from rpminer.log_model import UiEvent, UiType, parse_log

DATA = Path(__file__).parent / "data"
URL = "https://unimelb.edu.au"

# Dependency-table rows: full name, date, phone, country, student status.
STUDENT_ROWS = [
    ("Albert Rauf", "11-04-1986", "043-512-4834", "Germany", "International"),
    ("John Doe", "11-03-1986", "024-706-5621", "Australia", "Domestic"),
    ("Steven Richards", "18-06-1986", "088-266-0827", "Australia", "Domestic"),
    ("Hilda Diggle", "31-07-1993", "073-672-5593", "New Zealand", "International"),
    ("Luca Bianchi", "19-10-1998", "029-211-4904", "Italy", "International"),
    ("Igor", "13-08-1993", "040-656-3417", "Ukraine", "International"),
    ("Ben Stanley", "03-12-1991", "244-557-2104", "Australia", "Domestic"),
    ("Olga Mykolenchuk", "11-04-2000", "956-045-0703", "Ukraine", "International"),
    ("Daniel Brown", "06-04-1994", "032-660-0403", "New Zealand", "International"),
]


def ev(ui_type: UiType, second: float = 0.0, **params) -> UiEvent:
    return UiEvent(datetime(2020, 1, 1) + timedelta(seconds=second), ui_type, params)


def events(*specs) -> list[UiEvent]:
    """``events((type, params), ...)`` with one-second spacing."""
    return [ev(t, i, **p) for i, (t, p) in enumerate(specs)]


def raw_date(date: str) -> str:
    return date.replace("-", "/")


def raw_phone(phone: str) -> str:
    return "+61 " + phone.replace("-", " ")


def _instance_rows(row: int, record, overwrite: bool) -> list[list[str]]:
    name, date, phone, country, status = record
    cell = lambda col, value: ["StudentRecords", "Sheet1", col, str(row), value]
    field = lambda label, ident: [URL, label, ident]
    rows = [["Click button (Web)", *field("New Record", "newRecord"), "button"]]
    for col, value, label, ident, final in (
        ("A", name, "Full Name", "name", name),
        ("B", raw_date(date), "Date", "date", date),
        ("C", raw_phone(phone), "Phone", "phone", phone),
        ("D", country, "Country of residence", "country", country),
    ):
        rows += [
            ["Select cell (Excel)", *cell(col, value)],
            ["Copy cell (Excel)", *cell(col, value), value],
            ["Select field (Web)", *field(label, ident)],
            ["Paste (Web)", *field(label, ident), "", value],
            ["Edit field (Web)", *field(label, ident), "text", final],
        ]
    if overwrite:
        other = "Domestic" if status == "International" else "International"
        rows.append(["Edit field (Web)", *field("Student status", "status"), "select", other])
    rows.append(["Edit field (Web)", *field("Student status", "status"), "select", status])
    rows.append(["Click button (Web)", *field("Submit", "submit"), "submit"])
    return rows


def student_csv(records=STUDENT_ROWS, overwrite_first: bool = True) -> str:
    """A log of one student-registration instance per record.

    Source values are stored raw in the spreadsheet (dates with slashes,
    phones with the country prefix) and reformatted in the form.
    """
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["timestamp", "type", "p1", "p2", "p3", "p4", "p5", "p6"])
    stamp = datetime(2019, 3, 3, 19, 2, 18)
    for k, record in enumerate(records):
        for row in _instance_rows(k + 2, record, overwrite_first and k == 0):
            writer.writerow([stamp.isoformat(), *row])
            stamp += timedelta(seconds=2)
    return buf.getvalue()


def student_log(records=STUDENT_ROWS, overwrite_first: bool = True):
    return parse_log(student_csv(records, overwrite_first))


# ---------------------------------------------------------------- graph oracles

def reachable(succ: dict, root, removed=None) -> set:
    if root == removed:
        return set()
    seen = {root}
    stack = [root]
    while stack:
        v = stack.pop()
        for w in succ.get(v, ()):
            if w != removed and w not in seen:
                seen.add(w)
                stack.append(w)
    return seen


def brute_idom(succ: dict, root) -> dict:
    """Immediate dominators by deleting each vertex and re-testing reachability."""
    live = reachable(succ, root)
    dom = {v: {v} for v in live}
    for d in live:
        cut = reachable(succ, root, removed=d)
        for v in live - cut:
            dom[v].add(d)
    idom = {}
    for v in live:
        if v == root:
            continue
        strict = dom[v] - {v}
        # the immediate dominator is the strict dominator dominated by all others
        idom[v] = next(d for d in strict if strict <= dom[d])
    return idom


def brute_sccs(succ: dict) -> set:
    verts = set(succ) | {w for ws in succ.values() for w in ws}
    reach = {v: reachable(succ, v) for v in verts}
    comps = set()
    for v in verts:
        comp = frozenset(w for w in verts if w in reach[v] and v in reach[w])
        if len(comp) > 1:
            comps.add(comp)
    return comps


def all_simple_path_lengths(succ: dict, source, target) -> list[int]:
    """Edge counts of every simple path from ``source`` to ``target``."""
    out = []

    def walk(v, seen, length):
        if v == target:
            out.append(length)
            return
        for w in succ.get(v, ()):
            if w not in seen:
                walk(w, seen | {w}, length + 1)

    walk(source, {source}, 0)
    return out


def _preorder(succ: dict, root) -> list:
    order, seen = [], set()

    def visit(v):
        seen.add(v)
        order.append(v)
        for w in sorted(succ.get(v, ())):
            if w not in seen:
                visit(w)

    visit(root)
    return order


def _retreating(succ: dict, root) -> tuple[list, dict]:
    """Edges closing a cycle in a DFS (sorted successors) and DFS depths."""
    on_stack, seen, depth, out = set(), set(), {}, []

    def visit(v, d):
        seen.add(v)
        on_stack.add(v)
        depth[v] = d
        for w in sorted(succ.get(v, ())):
            if w in on_stack:
                out.append((v, w))
            elif w not in seen:
                visit(w, d + 1)
        on_stack.discard(v)

    visit(root, 0)
    return out, depth


def brute_loops(succ: dict, root) -> tuple[frozenset, frozenset]:
    """Back-edges and cut loop-edges by repeated decomposition.

    Dominance comes from :func:`brute_idom` and components from
    :func:`brute_sccs`.  An irreducible component loses the retreating edge
    whose endpoints are joined by the longest simple path, found by
    enumerating every path.
    """
    idom = brute_idom(succ, root)

    def dominates(a, b):
        while b is not None:
            if a == b:
                return True
            b = idom.get(b)
        return False

    preds = {}
    for a, ws in succ.items():
        for w in ws:
            preds.setdefault(w, set()).add(a)
    order = {v: i for i, v in enumerate(_preorder(succ, root))}
    body = {v: set(ws) for v, ws in succ.items() if v != root}
    back, cut = set(), set()
    work = [(c, {(a, b) for a in c for b in body.get(a, ()) if b in c}) for c in brute_sccs(body)]
    while work:
        verts, edges = work.pop()
        headers = sorted(h for h in verts if all(dominates(h, v) for v in verts))
        if headers:
            incoming = {(a, b) for a, b in edges if b == headers[0]}
            back |= incoming
            edges = edges - incoming
        else:
            adj = {v: {b for a, b in edges if a == v} for v in verts}
            entries = [v for v in verts if preds.get(v, set()) - verts]
            start = min(entries or verts, key=lambda v: (order.get(v, len(order)), v))
            candidates, _ = _retreating(adj, start)
            best = min(
                candidates,
                key=lambda e: (-max(all_simple_path_lengths(adj, e[1], e[0]), default=0), e),
            )
            cut.add(best)
            edges = edges - {best}
        adj = {v: {b for a, b in edges if a == v} for v in verts}
        work.extend((c, {(a, b) for a, b in edges if a in c and b in c}) for c in brute_sccs(adj))
    return frozenset(back), frozenset(cut)


# ---------------------------------------------------------------- mining oracle

def is_subseq(p, s) -> bool:
    it = iter(s)
    return all(x in it for x in p)


def brute_closed_patterns(segments, min_support: float) -> set:
    """``{(symbols, count)}`` of every closed frequent gapped subsequence."""
    n = len(segments)
    if not n:
        return set()
    min_count = max(1, math.ceil(min_support * n - 1e-9))
    universe = set()
    for seg in segments:
        for r in range(1, len(seg) + 1):
            universe.update(itertools.combinations(seg, r))
    count = {p: sum(is_subseq(p, s) for s in segments) for p in universe}
    frequent = {p for p, c in count.items() if c >= min_count}
    closed = set()
    for p in frequent:
        longer = (q for q in frequent if len(q) == len(p) + 1 and count[q] == count[p])
        if not any(is_subseq(p, q) for q in longer):
            closed.add((p, count[p]))
    return closed


# ------------------------------------------------------------ dependency oracle

def brute_fds(columns, target, max_size=None) -> set:
    """Minimal determinants (as index tuples) under the admissibility rules.

    A determinant qualifies when it functionally determines ``target``, is
    not a key of the table (some two rows share its values) and either takes
    at least two distinct values or is empty with a constant target.
    """
    n_rows = len(target)
    if n_rows < 2:
        return set()
    n_cols = len(columns)
    max_size = n_cols if max_size is None else max_size
    found = []
    for size in range(0, max_size + 1):
        for det in itertools.combinations(range(n_cols), size):
            if any(set(f) <= set(det) for f in found):
                continue
            groups = {}
            for r in range(n_rows):
                groups.setdefault(tuple(columns[j][r] for j in det), set()).add(target[r])
            if any(len(outs) > 1 for outs in groups.values()):
                continue
            distinct = len(groups)
            if distinct >= n_rows:
                continue
            if size and distinct < 2:
                continue
            found.append(det)
    return set(found)
