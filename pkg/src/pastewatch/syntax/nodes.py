"""Syntax tree model.

Trees are immutable after construction and safe to share between threads.
Every node records its byte span [start, end); leaves are Token objects.
"""

from __future__ import annotations

from .tokens import Token

STATEMENT_KINDS = frozenset({
    "If", "For", "While", "DoWhile", "Switch", "Try", "Return", "Throw",
    "Break", "Continue", "LocalVarDecl", "ExprStatement", "Assert",
    "Synchronized", "Block",
})

EXPRESSION_KINDS = frozenset({
    "Assign", "Ternary", "Binary", "Unary", "Postfix", "Call", "FieldAccess",
    "Index", "New", "NewArray", "Name", "Literal", "Paren", "Cast",
})


class Node:
    __slots__ = ("kind", "children", "start", "end", "depth", "attrs")

    def __init__(self, kind, children, **attrs):
        self.kind = kind
        self.children = tuple(children)
        first = _first_token(self)
        last = _last_token(self)
        self.start = first.start if first else 0
        self.end = last.end if last else 0
        self.depth = -1  # set for statements by the parser's depth pass
        self.attrs = attrs

    def __getattr__(self, name):
        try:
            return self.attrs[name]
        except KeyError:
            raise AttributeError(name) from None

    def __repr__(self):
        return f"Node({self.kind}, [{self.start},{self.end}))"

    @property
    def span(self):
        return (self.start, self.end)

    def tokens(self):
        """All leaf tokens in source order."""
        out = []
        _collect_tokens(self, out)
        return out

    def walk(self):
        """Yield this node and all descendant Nodes, preorder."""
        yield self
        for child in self.children:
            if isinstance(child, Node):
                yield from child.walk()

    def statements(self):
        """All statement nodes within this node (including itself), preorder."""
        return [n for n in self.walk() if n.kind in STATEMENT_KINDS]


def _collect_tokens(node, out):
    for child in node.children:
        if isinstance(child, Token):
            out.append(child)
        else:
            _collect_tokens(child, out)


def _first_token(node):
    for child in node.children:
        if isinstance(child, Token):
            return child
        t = _first_token(child)
        if t is not None:
            return t
    return None


def _last_token(node):
    for child in reversed(node.children):
        if isinstance(child, Token):
            return child
        t = _last_token(child)
        if t is not None:
            return t
    return None


def serialize_tokens(tokens, trailing=""):
    """Rebuild source text from tokens (leading trivia + text each)."""
    return "".join(t.leading + t.text for t in tokens) + trailing


def node_lines(node, content):
    """1-based physical line numbers covered by the node's span."""
    first = content.count("\n", 0, node.start) + 1
    last = content.count("\n", 0, max(node.start, node.end - 1)) + 1
    return range(first, last + 1)


def line_count(node, content):
    r = node_lines(node, content)
    return r.stop - r.start
