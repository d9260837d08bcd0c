"""Rooted, labeled KPI taxonomy graphs.

A taxonomy is a rooted acyclic graph whose edges carry a relation word,
loaded from a small YAML document::

    kpi: asset health
    edges:
      - {parent: asset health, relation: analyzed, child: component quality}

Node identity is case-insensitive and whitespace-normalized; the
first-seen spelling is kept for display.  Shared subtrees (several
parents for one child) are allowed, cycles are not.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import yaml

from .errors import (
    CycleDetectedError,
    DanglingReferenceError,
    EmptyDocumentError,
    MultipleRootsError,
    TaxonomyError,
    UnknownNodeError,
)

__all__ = [
    "TaxonNode",
    "TaxonEdge",
    "Taxonomy",
    "normalize_name",
    "parse_taxonomy",
    "serialize_taxonomy",
    "render_statements",
    "traverse_top_down",
    "descendant_mentions",
]

# Relation stems that mark a leaf child as a measurement rather than a factor.
_MEASUREMENT_STEMS = ("measur", "record", "sampl", "source")


def normalize_name(name: str) -> str:
    """Canonical node identity: collapse whitespace, case-fold."""
    return " ".join(name.split()).casefold()


@dataclass(frozen=True)
class TaxonNode:
    id: str
    label: str
    kind: str  # kpi-root | factor | measurement


@dataclass(frozen=True)
class TaxonEdge:
    parent: str  # node id
    relation: str
    child: str  # node id


@dataclass(frozen=True)
class Taxonomy:
    root: str
    nodes: dict[str, TaxonNode]
    edges: tuple[TaxonEdge, ...]
    _children: dict[str, tuple[str, ...]] = field(default_factory=dict, repr=False)

    @property
    def root_label(self) -> str:
        return self.nodes[self.root].label

    def node_id(self, name: str) -> str:
        nid = normalize_name(name)
        if nid not in self.nodes:
            raise UnknownNodeError(f"unknown node: {name!r}")
        return nid

    def label(self, name: str) -> str:
        return self.nodes[self.node_id(name)].label

    def kind(self, name: str) -> str:
        return self.nodes[self.node_id(name)].kind

    def children(self, name: str) -> tuple[str, ...]:
        """Child node ids in edge-declaration order, duplicates removed."""
        return self._children.get(self.node_id(name), ())


def _require_field(record: dict, key: str, position: int) -> str:
    value = record.get(key)
    text = " ".join(str(value).split()) if value is not None else ""
    if not text:
        raise DanglingReferenceError(f"edge {position} has no {key}")
    return text


def parse_taxonomy(text: str) -> Taxonomy:
    """Parse and validate a taxonomy document.

    Raises EmptyDocumentError for blank or root-less documents,
    CycleDetectedError naming one cycle, MultipleRootsError when more
    than one node lacks an incoming edge, and DanglingReferenceError for
    incomplete edge records or unreachable nodes.
    """
    if not text or not text.strip():
        raise EmptyDocumentError("taxonomy document is empty")
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise TaxonomyError(f"unreadable taxonomy document: {exc}") from exc
    if not isinstance(doc, dict):
        raise EmptyDocumentError("taxonomy document has no mapping content")
    root_raw = doc.get("kpi")
    root_label = " ".join(str(root_raw).split()) if root_raw is not None else ""
    if not root_label:
        raise EmptyDocumentError("taxonomy document declares no kpi root")

    labels: dict[str, str] = {}  # id -> first-seen display label

    def intern(label: str) -> str:
        nid = normalize_name(label)
        labels.setdefault(nid, label)
        return nid

    root = intern(root_label)

    raw_edges = doc.get("edges") or []
    if not isinstance(raw_edges, list):
        raise TaxonomyError("edges must be a list of {parent, relation, child} records")
    edges: list[TaxonEdge] = []
    for i, record in enumerate(raw_edges, 1):
        if not isinstance(record, dict):
            raise DanglingReferenceError(f"edge {i} is not a {{parent, relation, child}} record")
        parent = intern(_require_field(record, "parent", i))
        relation = _require_field(record, "relation", i)
        child = intern(_require_field(record, "child", i))
        edges.append(TaxonEdge(parent, relation, child))

    children: dict[str, list[str]] = {nid: [] for nid in labels}
    parents: dict[str, list[str]] = {nid: [] for nid in labels}
    for e in edges:
        if e.child not in children[e.parent]:
            children[e.parent].append(e.child)
        if e.parent not in parents[e.child]:
            parents[e.child].append(e.parent)

    _reject_cycles(labels, children, parents)

    orphaned = [nid for nid in labels if not parents[nid]]
    if orphaned != [root]:
        extra = [labels[nid] for nid in orphaned if nid != root]
        if extra:
            raise MultipleRootsError([root_label] + extra)

    reachable = {root}
    stack = [root]
    while stack:
        for c in children[stack.pop()]:
            if c not in reachable:
                reachable.add(c)
                stack.append(c)
    unreachable = [labels[nid] for nid in labels if nid not in reachable]
    if unreachable:
        raise DanglingReferenceError(
            "nodes not reachable from the root: " + ", ".join(sorted(unreachable))
        )

    nodes = {
        nid: TaxonNode(nid, label, _node_kind(nid, root, edges, children))
        for nid, label in labels.items()
    }
    frozen_children = {nid: tuple(kids) for nid, kids in children.items()}
    return Taxonomy(root=root, nodes=nodes, edges=tuple(edges), _children=frozen_children)


def _node_kind(nid: str, root: str, edges: list[TaxonEdge], children: dict[str, list[str]]) -> str:
    if nid == root:
        return "kpi-root"
    if not children[nid]:
        relations = (e.relation.casefold() for e in edges if e.child == nid)
        if any(stem in rel for rel in relations for stem in _MEASUREMENT_STEMS):
            return "measurement"
    return "factor"


def _reject_cycles(labels, children, parents) -> None:
    in_deg = {nid: len(parents[nid]) for nid in labels}
    queue = [nid for nid, d in in_deg.items() if d == 0]
    removed = 0
    while queue:
        nid = queue.pop()
        removed += 1
        for c in children[nid]:
            in_deg[c] -= 1
            if in_deg[c] == 0:
                queue.append(c)
    if removed == len(labels):
        return
    # Walk parents inside the residual graph until a node repeats.
    residual = {nid for nid, d in in_deg.items() if d > 0}
    node = next(iter(sorted(residual)))
    seen: list[str] = []
    while node not in seen:
        seen.append(node)
        node = next(p for p in parents[node] if p in residual)
    cycle = seen[seen.index(node):] + [node]
    cycle.reverse()  # report in parent -> child direction
    raise CycleDetectedError([labels[nid] for nid in cycle])


def serialize_taxonomy(tax: Taxonomy) -> str:
    """Inverse of parse_taxonomy; edge order is preserved."""
    doc = {
        "kpi": tax.root_label,
        "edges": [
            {
                "parent": tax.nodes[e.parent].label,
                "relation": e.relation,
                "child": tax.nodes[e.child].label,
            }
            for e in tax.edges
        ],
    }
    return yaml.safe_dump(doc, sort_keys=False, allow_unicode=True)


def render_statements(tax: Taxonomy) -> list[str]:
    """One line per fact: the root line, then '<parent> is <relation> by <child>'."""
    lines = [f"{tax.root_label} is root node"]
    for e in tax.edges:
        lines.append(f"{tax.nodes[e.parent].label} is {e.relation} by {tax.nodes[e.child].label}")
    return lines


def traverse_top_down(tax: Taxonomy, start: str) -> list[str]:
    """Depth-first pre-order labels from start, children in edge order.

    Nodes shared between branches are visited exactly once.
    """
    start_id = tax.node_id(start)
    order: list[str] = []
    visited: set[str] = set()
    stack = [start_id]
    while stack:
        nid = stack.pop()
        if nid in visited:
            continue
        visited.add(nid)
        order.append(tax.nodes[nid].label)
        stack.extend(reversed(tax.children(nid)))
    return order


def descendant_mentions(tax: Taxonomy, start: str, keyword: str) -> bool:
    """True when any strict descendant label contains the keyword (case-insensitive)."""
    needle = keyword.casefold()
    return any(needle in label.casefold() for label in traverse_top_down(tax, start)[1:])
