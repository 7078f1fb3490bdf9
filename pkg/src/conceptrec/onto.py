"""Tree-shaped term ontologies and the metarules they induce.

An ontology is a forest given by a child -> parent map. Depth encodes
generality: the parent of a node is one level more general. Top-level roots are
treated as siblings of one another.
"""

from __future__ import annotations

import csv
import logging
from dataclasses import dataclass, field
from typing import Iterable, Mapping, TextIO

from .context import FormalContext
from .errors import ConfigurationError, InvalidInputError, OntologyError, ParameterError, ParseError
from .morpho import Metarule, passes_thresholds, score_metarule
from .rules import MiningParams

log = logging.getLogger(__name__)


def normalize_label(label: str) -> str:
    return " ".join(label.replace("_", " ").lower().split())


@dataclass(frozen=True)
class Ontology:
    nodes: tuple[str, ...]
    parent: Mapping[str, str] = field(default_factory=dict)
    binding: Mapping[str, str] | None = None

    def __post_init__(self):
        known = set(self.nodes)
        if len(known) != len(self.nodes):
            raise OntologyError("duplicate ontology node")
        for child, par in self.parent.items():
            if child not in known or par not in known:
                raise OntologyError(f"edge {child!r} -> {par!r} names an unknown node")
        for node in self.nodes:
            seen = {node}
            cur = node
            while cur in self.parent:
                cur = self.parent[cur]
                if cur in seen:
                    raise OntologyError(f"cycle through {node!r}")
                seen.add(cur)
        if self.binding is not None:
            for node in self.binding:
                if node not in known:
                    raise ConfigurationError(f"binding names unknown node {node!r}")
        children: dict[str | None, list[str]] = {}
        for node in self.nodes:
            children.setdefault(self.parent.get(node), []).append(node)
        object.__setattr__(self, "_children", children)

    @classmethod
    def from_edges(cls, edges: Iterable[tuple[str, str | None]], binding: Mapping[str, str] | None = None) -> "Ontology":
        """Build from ``(child, parent)`` pairs; ``parent`` None declares a root.

        Nodes that appear only as parents become roots.
        """
        nodes: dict[str, None] = {}
        parent: dict[str, str] = {}
        for child, par in edges:
            nodes.setdefault(child, None)
            if par:
                nodes.setdefault(par, None)
                if parent.get(child, par) != par:
                    raise OntologyError(f"node {child!r} has two parents")
                parent[child] = par
        return cls(tuple(nodes), parent, binding)

    def children(self, node: str | None) -> list[str]:
        return list(self._children.get(node, ()))

    def _require(self, node: str) -> None:
        if node not in self._children.get(self.parent.get(node), ()):
            raise OntologyError(f"unknown ontology node {node!r}")


def generalize(onto: Ontology, t: str, i: int = 1) -> str:
    """The ancestor exactly ``i`` levels above ``t``."""
    onto._require(t)
    if i < 1:
        raise ParameterError("generalization level must be positive")
    cur = t
    for step in range(i):
        if cur not in onto.parent:
            raise OntologyError(f"{t!r} has only {step} ancestor(s), {i} requested")
        cur = onto.parent[cur]
    return cur


def neighbors(onto: Ontology, t: str) -> list[str]:
    """Siblings of ``t`` (nodes with the same parent, roots included), in declaration order."""
    onto._require(t)
    return [n for n in onto.children(onto.parent.get(t)) if n != t]


def resolve_binding(onto: Ontology, ctx: FormalContext) -> dict[str, int]:
    """Map ontology nodes to attribute indices of ``ctx``.

    Without an explicit binding, nodes match attributes whose normalized
    labels coincide. Explicit bindings must name existing attributes.
    """
    if onto.binding is not None:
        out = {}
        for node, label in onto.binding.items():
            try:
                out[node] = ctx.attribute_index(label)
            except InvalidInputError:
                raise ConfigurationError(
                    f"node {node!r} bound to unknown attribute {label!r}"
                ) from None
        return out
    by_norm: dict[str, int] = {}
    for a, label in enumerate(ctx.attribute_labels):
        by_norm.setdefault(normalize_label(label), a)
    return {n: by_norm[normalize_label(n)] for n in onto.nodes if normalize_label(n) in by_norm}


def onto_metarules(
    ctx_ft: FormalContext,
    onto: Ontology,
    kind: str = "neighborhood",
    params: MiningParams | None = None,
    level: int = 1,
) -> list[Metarule]:
    """Generalization (``t -> g_level(t)``) or neighborhood (``t -> n(t)``) rules scored on ``ctx_ft``."""
    if kind not in ("generalization", "neighborhood"):
        raise ParameterError(f"unknown ontology rule kind {kind!r}")
    params = params or MiningParams(0, 0)
    threshold = params.absolute_min_supp(ctx_ft.n_objects)
    bound = resolve_binding(onto, ctx_ft)
    form = f"G{level}" if kind == "generalization" else "N"
    out = []
    for node in onto.nodes:
        if node not in bound:
            log.debug("skipping unbound node %r", node)
            continue
        if kind == "generalization":
            try:
                targets = [generalize(onto, node, level)]
            except OntologyError:
                continue
        else:
            targets = neighbors(onto, node)
        own = bound[node]
        consequent = {bound[x] for x in targets if x in bound} - {own}
        if not consequent:
            log.debug("skipping %r: no bound target", node)
            continue
        rule = score_metarule(ctx_ft, form, own, consequent, via=node)
        if passes_thresholds(rule.support, rule.confidence, threshold, params.min_conf):
            out.append(rule)
    out.sort(key=Metarule.sort_key)
    return out


def load_ontology(stream: TextIO, source: str | None = None, binding: Mapping[str, str] | None = None) -> Ontology:
    """Read a ``child,parent`` CSV; an empty parent declares a root."""
    reader = csv.reader(stream)
    header = next(reader, None)
    if header is None or [h.strip().lower() for h in header] != ["child", "parent"]:
        raise ParseError("expected header 'child,parent'", source, 1)
    edges = []
    for row in reader:
        if not row:
            continue
        if len(row) != 2:
            raise ParseError(f"expected 2 fields, got {len(row)}", source, reader.line_num)
        child, par = row[0].strip(), row[1].strip()
        if not child:
            raise ParseError("empty child label", source, reader.line_num)
        edges.append((child, par or None))
    try:
        return Ontology.from_edges(edges, binding)
    except OntologyError as exc:
        raise ParseError(str(exc), source) from None


def load_binding(stream: TextIO, source: str | None = None) -> dict[str, str]:
    """Read a ``node,attribute_label`` CSV."""
    reader = csv.reader(stream)
    header = next(reader, None)
    if header is None or [h.strip().lower() for h in header] != ["node", "attribute_label"]:
        raise ParseError("expected header 'node,attribute_label'", source, 1)
    out = {}
    for row in reader:
        if not row:
            continue
        if len(row) != 2 or not row[0].strip() or not row[1].strip():
            raise ParseError("expected a node and an attribute label", source, reader.line_num)
        out[row[0].strip()] = row[1].strip()
    return out
