"""Extraction candidate enumeration, ranking, and negative sampling.

Candidates are contiguous sibling-statement windows, at every block
level, that pass the extractability check. Ranking combines three terms:
statement length balance, nesting-depth reduction, and nesting-area
reduction. Negatives are drawn from the pooled ranking after skipping
the top 5%.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

from .errors import InsufficientCandidates
from .metrics import area
from .refactor import analyze_dataflow, is_extractable
from .syntax import Fragment, SourceFile, method_statements, node_lines
from .syntax.nodes import Node

DEFAULT_WEIGHTS = (1.0, 1.0, 1.0)  # (length, depth, area)
DEFAULT_MIN_STATEMENTS = 2
SKIP_FRACTION = 0.05


@dataclass(frozen=True)
class Scores:
    length: float
    depth: float
    area: float
    total: float


@dataclass(frozen=True)
class ExtractionCandidate:
    fragment: Fragment
    scores: Scores


def _sibling_blocks(method: Node):
    body = method.attrs["body"]
    yield body.attrs["stmts"]
    for node in body.walk():
        if node.kind in ("Body", "Block") and node is not body:
            yield node.attrs["stmts"]
        elif node.kind == "SwitchCase":
            yield node.attrs["stmts"]


def enumerate_candidates(file: SourceFile, method: Node,
                         min_statements: int = DEFAULT_MIN_STATEMENTS
                         ) -> list[Fragment]:
    """All extractable contiguous sibling-statement windows of length >=
    min_statements, every block level, in source order."""
    if min_statements < 1:
        raise ValueError("min_statements must be >= 1")
    out = []
    for stmts in _sibling_blocks(method):
        for width in range(min_statements, len(stmts) + 1):
            for i in range(0, len(stmts) - width + 1):
                frag = Fragment(file, tuple(stmts[i:i + width]), method)
                if is_extractable(analyze_dataflow(frag, method)):
                    out.append(frag)
    return out


def _clamp01(x: float) -> float:
    return min(1.0, max(0.0, x))


def _flat_area(stmt_nodes, content, base=0):
    depth_by_line = {}
    for s in stmt_nodes:
        d = s.depth - base
        for ln in node_lines(s, content):
            depth_by_line[ln] = max(depth_by_line.get(ln, 0), d)
    return sum(d + 1 for d in depth_by_line.values())


def score(candidate: Fragment, method: Node,
          weights=DEFAULT_WEIGHTS) -> Scores:
    content = candidate.file.content
    all_stmts = method_statements(method)
    cand_stmts = [s for top in candidate.statements
                  for s in top.statements()]
    cand_ids = {id(s) for s in cand_stmts}
    rest_stmts = [s for s in all_stmts if id(s) not in cand_ids]

    l_c, l_r = len(cand_stmts), len(rest_stmts)
    length = 2 * min(l_c, l_r) / (l_c + l_r) if (l_c + l_r) else 0.0

    base = min(s.depth for s in candidate.statements)
    d_m = max((s.depth for s in all_stmts), default=0)
    d_c = max(s.depth - base for s in cand_stmts)
    d_r = max((s.depth for s in rest_stmts), default=0)
    depth = _clamp01((d_m - max(d_c, d_r)) / max(d_m, 1))

    a_m = _flat_area(all_stmts, content)
    a_c = _flat_area(cand_stmts, content, base=base)
    a_r = _flat_area(rest_stmts, content)
    area_score = _clamp01((a_m - max(a_c, a_r)) / max(a_m, 1))

    w_l, w_d, w_a = weights
    total = w_l * length + w_d * depth + w_a * area_score
    return Scores(length=length, depth=depth, area=area_score, total=total)


def scored_candidates(file: SourceFile, method: Node,
                      min_statements: int = DEFAULT_MIN_STATEMENTS,
                      weights=DEFAULT_WEIGHTS) -> list[ExtractionCandidate]:
    return [ExtractionCandidate(f, score(f, method, weights))
            for f in enumerate_candidates(file, method, min_statements)]


def rank_candidates(pool: list[ExtractionCandidate]
                    ) -> list[ExtractionCandidate]:
    """Total-score descending with a stable positional tie-break."""
    return sorted(pool, key=lambda c: (-c.scores.total, c.fragment.file.path,
                                       c.fragment.span))


def sample_negatives(files_methods, positives_count: int, seed: int, *,
                     min_statements: int = DEFAULT_MIN_STATEMENTS,
                     weights=DEFAULT_WEIGHTS,
                     exclude_spans=frozenset()) -> list[Fragment]:
    """Rank every candidate of every (file, method) pair, drop the top
    5%, and draw a seeded uniform sample from the bottom 95%.
    exclude_spans is a set of (path, start, end) byte spans (labeled
    positives) that must never be sampled."""
    if positives_count < 1:
        raise ValueError("positives_count must be >= 1")
    pool = []
    for file, method in files_methods:
        pool.extend(scored_candidates(file, method, min_statements, weights))
    pool = [c for c in pool
            if (c.fragment.file.path,) + c.fragment.span not in exclude_spans]
    if not pool:
        raise InsufficientCandidates("no candidates to sample from")
    ranked = rank_candidates(pool)
    skip = math.ceil(SKIP_FRACTION * len(ranked))
    remaining = ranked[skip:]
    if not remaining:
        raise InsufficientCandidates(
            f"all {len(ranked)} candidates fall in the skipped top 5%")
    k = min(positives_count, len(remaining))
    rng = random.Random(seed)
    return [c.fragment for c in rng.sample(remaining, k)]
