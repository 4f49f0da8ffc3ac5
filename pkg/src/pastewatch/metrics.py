"""Fixed 78-dimensional metric vector for a fragment in its enclosing
context: keyword counts/densities, fragment and method size measures, and
coupling to the enclosing class.

The catalog order is frozen per version; vector index i always means
descriptor i of the active catalog.
"""

from __future__ import annotations

from dataclasses import dataclass

from .syntax import Fragment, line_count, node_lines
from .syntax.nodes import Node

CATALOG_VERSION = "v1"

COUNTED_KEYWORDS = (
    "if", "else", "for", "while", "do", "switch", "case", "break",
    "continue", "return", "try", "catch", "finally", "throw", "new", "this",
    "super", "static", "final", "void", "int", "long", "double", "float",
    "boolean", "char", "byte", "short", "instanceof", "synchronized",
    "assert",
)

FRAGMENT = "Fragment"
ENCLOSING = "EnclosingMethod"
COUPLING = "Coupling"


@dataclass(frozen=True)
class MetricDescriptor:
    id: str
    name: str
    category: str
    unit: str


def _build_descriptors():
    out = []
    for kw in COUNTED_KEYWORDS:
        out.append(MetricDescriptor(
            f"kw_{kw}_count", f"'{kw}' keyword count in fragment",
            FRAGMENT, "count"))
        out.append(MetricDescriptor(
            f"kw_{kw}_density", f"'{kw}' keywords per fragment line",
            FRAGMENT, "per-line"))
    out += [
        MetricDescriptor("total_lines", "fragment physical lines",
                         FRAGMENT, "lines"),
        MetricDescriptor("total_symbols", "fragment non-trivia characters",
                         FRAGMENT, "chars"),
        MetricDescriptor("symbols_per_line", "fragment characters per line",
                         FRAGMENT, "chars/line"),
        MetricDescriptor("area", "fragment nesting area (re-rooted depths)",
                         FRAGMENT, "line-levels"),
        MetricDescriptor("area_per_line", "fragment nesting area per line",
                         FRAGMENT, "levels/line"),
        MetricDescriptor("max_nesting_depth",
                         "max statement depth relative to the fragment",
                         FRAGMENT, "levels"),
        MetricDescriptor("method_lines", "enclosing method physical lines",
                         ENCLOSING, "lines"),
        MetricDescriptor("method_symbols",
                         "enclosing method non-trivia characters",
                         ENCLOSING, "chars"),
        MetricDescriptor("method_symbols_per_line",
                         "enclosing method characters per line",
                         ENCLOSING, "chars/line"),
        MetricDescriptor("method_area", "enclosing method nesting area",
                         ENCLOSING, "line-levels"),
        MetricDescriptor("field_ref_count",
                         "references to enclosing-class fields",
                         COUPLING, "count"),
        MetricDescriptor("field_ref_density", "field references per line",
                         COUPLING, "per-line"),
        MetricDescriptor("own_method_call_count",
                         "calls to enclosing-class methods",
                         COUPLING, "count"),
        MetricDescriptor("own_method_call_density",
                         "own-method calls per line", COUPLING, "per-line"),
        MetricDescriptor("external_ref_count",
                         "identifier references resolving outside the "
                         "fragment and class fields",
                         COUPLING, "count"),
        MetricDescriptor("external_ref_density",
                         "external references per line",
                         COUPLING, "per-line"),
    ]
    return tuple(out)


@dataclass(frozen=True)
class MetricCatalog:
    version: str
    descriptors: tuple

    def ids(self):
        return [d.id for d in self.descriptors]

    def index(self, metric_id: str) -> int:
        return self.ids().index(metric_id)

    def __len__(self):
        return len(self.descriptors)


CATALOG = MetricCatalog(version=CATALOG_VERSION,
                        descriptors=_build_descriptors())
assert len(CATALOG) == 78


@dataclass(frozen=True)
class MetricVector:
    values: tuple
    catalog_version: str = CATALOG_VERSION

    def __post_init__(self):
        if len(self.values) != 78:
            raise ValueError(f"expected 78 values, got {len(self.values)}")

    def __getitem__(self, metric_id: str) -> float:
        return self.values[CATALOG.index(metric_id)]


def area(statements, content: str, rebase: bool = False) -> int:
    """Nesting area of a statement list: sum over covered physical lines
    of (innermost covering statement depth + 1). Depths are relative to
    the method body unless rebase is set, which re-roots the shallowest
    statement in the list at depth 0."""
    stmts = []
    for top in statements:
        stmts.extend(top.statements())
    if not stmts:
        return 0
    base = min(s.depth for s in statements) if rebase else 0
    depth_by_line = {}
    for s in stmts:
        d = s.depth - base
        for ln in node_lines(s, content):
            depth_by_line[ln] = max(depth_by_line.get(ln, 0), d)
    return sum(d + 1 for d in depth_by_line.values())


def _fragment_lines(fragment: Fragment) -> int:
    first = node_lines(fragment.statements[0], fragment.file.content)
    last = node_lines(fragment.statements[-1], fragment.file.content)
    return last.stop - first.start


def _symbols(node_or_nodes) -> int:
    nodes = node_or_nodes if isinstance(node_or_nodes, list) else [node_or_nodes]
    return sum(len(t.text) for n in nodes for t in n.tokens())


def _collect_refs(statements, class_node):
    """(field_refs, own_calls, external_refs) over fragment expressions."""
    field_names = {name for f in class_node.attrs["fields"]
                   for name in f.attrs["names"]}
    method_names = {m.attrs["name"] for m in class_node.attrs["methods"]}
    declared = set()
    for top in statements:
        for n in top.walk():
            if n.kind in ("LocalVarDecl", "ForInitDecl"):
                declared.update(d[0] for d in n.attrs["decls"])
            elif n.kind == "CatchClause":
                declared.add(n.attrs["param"][0])
    field_refs = own_calls = external = 0
    callee_ids = set()
    for top in statements:
        for n in top.walk():
            if n.kind == "Call" and n.attrs["target"] is None:
                callee_ids.add(id(n.children[0]))
    for top in statements:
        for n in top.walk():
            if n.kind == "Name":
                name = n.attrs["name"]
                if name in ("this", "super") or id(n) in callee_ids:
                    continue
                if name in declared:
                    continue
                if name in field_names:
                    field_refs += 1
                else:
                    external += 1
            elif n.kind == "Call":
                target = n.attrs["target"]
                bare_or_this = target is None or (
                    target.kind == "Name" and target.attrs["name"] == "this")
                if bare_or_this and n.attrs["name"] in method_names:
                    own_calls += 1
                else:
                    external += 1
            elif n.kind == "FieldAccess":
                target = n.attrs["target"]
                on_this = (target.kind == "Name"
                           and target.attrs["name"] == "this")
                if on_this and n.attrs["name"] in field_names:
                    field_refs += 1
                else:
                    external += 1
    return field_refs, own_calls, external


def compute_metrics(fragment: Fragment, method: Node,
                    class_node: Node) -> MetricVector:
    content = fragment.file.content
    stmts = list(fragment.statements)
    all_tokens = [t for s in stmts for t in s.tokens()]
    total_lines = _fragment_lines(fragment)
    values = []
    for kw in COUNTED_KEYWORDS:
        count = sum(1 for t in all_tokens if t.text == kw and t.kind == "kw")
        values.append(float(count))
        values.append(count / total_lines)
    total_symbols = _symbols(stmts)
    frag_area = area(stmts, content, rebase=True)
    base = min(s.depth for s in stmts)
    max_depth = max(n.depth - base for s in stmts for n in s.statements())
    values += [
        float(total_lines), float(total_symbols), total_symbols / total_lines,
        float(frag_area), frag_area / total_lines, float(max_depth),
    ]
    m_lines = line_count(method, content)
    m_symbols = _symbols(method)
    m_area = area(method.attrs["body"].attrs["stmts"], content) \
        if method.attrs["body"].attrs["stmts"] else 0
    values += [float(m_lines), float(m_symbols), m_symbols / m_lines,
               float(m_area)]
    field_refs, own_calls, external = _collect_refs(stmts, class_node)
    values += [
        float(field_refs), field_refs / total_lines,
        float(own_calls), own_calls / total_lines,
        float(external), external / total_lines,
    ]
    return MetricVector(values=tuple(values))
