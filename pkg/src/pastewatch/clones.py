"""Bag-of-tokens clone detection within a single file.

Exact matches compare concrete token sequences; near-miss matches use
multiset overlap of abstracted tokens, which is insensitive to statement
reordering and identifier/literal renaming.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import EmptyBag
from .syntax import Fragment, SourceFile, TokenBag, token_bag

DEFAULT_THRESHOLD = 0.8

EXACT = "Exact"
NEAR_MISS = "NearMiss"


@dataclass(frozen=True)
class CloneMatch:
    method: object  # MethodDecl node containing the match
    statements: tuple  # matched sibling statement window
    similarity: float
    kind: str  # EXACT or NEAR_MISS

    @property
    def span(self):
        return (self.statements[0].start, self.statements[-1].end)


def similarity(a: TokenBag, b: TokenBag) -> float:
    """Multiset-overlap similarity: |a ∩ b| / max(|a|, |b|)."""
    if a.size == 0 or b.size == 0:
        raise EmptyBag("similarity undefined for empty token bags")
    return a.intersection_size(b) / max(a.size, b.size)


def _concrete_tokens(statements) -> tuple:
    out = []
    for s in statements:
        out.extend(t.text for t in s.tokens())
    return tuple(out)


def _statement_blocks(method):
    """Sibling statement lists at every block level of a method."""
    body = method.attrs["body"]
    blocks = [body.attrs["stmts"]]
    for node in body.walk():
        if node.kind in ("Body", "Block") and node is not body:
            blocks.append(node.attrs["stmts"])
        elif node.kind == "SwitchCase":
            blocks.append(node.attrs["stmts"])
    return blocks


def find_duplicates(fragment: Fragment, file: SourceFile,
                    threshold: float = DEFAULT_THRESHOLD) -> list[CloneMatch]:
    """All clone matches of a fragment against statement windows of every
    method in the file, the fragment's own location excluded, sorted by
    similarity descending (Exact before NearMiss at equal similarity)."""
    if not 0.0 < threshold <= 1.0:
        raise ValueError("threshold must be in (0, 1]")
    frag_concrete = _concrete_tokens(fragment.statements)
    frag_bag = token_bag(list(fragment.statements))
    frag_span = fragment.span
    width = len(fragment.statements)
    matches = []
    for _, method in file.methods():
        for stmts in _statement_blocks(method):
            for i in range(0, len(stmts) - width + 1):
                window = tuple(stmts[i:i + width])
                w_span = (window[0].start, window[-1].end)
                if not (w_span[1] <= frag_span[0] or w_span[0] >= frag_span[1]):
                    continue  # overlaps the fragment itself
                bag = token_bag(list(window))
                if bag.size == 0:
                    continue
                sim = similarity(frag_bag, bag)
                if _concrete_tokens(window) == frag_concrete:
                    matches.append(CloneMatch(method, window, 1.0, EXACT))
                elif sim >= threshold:
                    matches.append(CloneMatch(method, window, sim, NEAR_MISS))
    matches.sort(key=lambda m: (-m.similarity, m.kind != EXACT, m.span))
    return matches
