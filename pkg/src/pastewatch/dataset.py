"""Labeled dataset construction and interchange.

Positives come from a TSV manifest (path, startLine, endLine); negatives
are drawn from the pooled candidate ranking (top 5% skipped). A seeded
synthetic corpus generator provides desk-scale data: each method carries
one deep, coherent positive block whose surrounding windows are made
non-extractable, so sampled negatives stay flat filler code.
"""

from __future__ import annotations

import csv
import math
import random
from dataclasses import dataclass
from pathlib import Path

from .candidates import sample_negatives
from .errors import ManifestResolutionError, SchemaMismatch
from .metrics import CATALOG, MetricVector, compute_metrics
from .syntax import Fragment, SourceFile, node_lines

METHODS_PER_CLASS = 5
POSITIVE_WIDTH = 3  # two counter decls + the loop


@dataclass(frozen=True)
class Provenance:
    path: str
    start_line: int
    end_line: int
    source: str  # manifest | sampler | synthetic | csv


@dataclass(frozen=True)
class LabeledExample:
    vector: MetricVector
    label: int
    provenance: Provenance

    def __post_init__(self):
        if self.label not in (0, 1):
            raise ValueError("label must be 0 or 1")


@dataclass(frozen=True)
class Dataset:
    examples: tuple
    catalog_version: str
    seed: int

    def class_counts(self):
        pos = sum(e.label for e in self.examples)
        return {1: pos, 0: len(self.examples) - pos}


def load_corpus(corpus_dir) -> list[SourceFile]:
    corpus_dir = Path(corpus_dir)
    files = sorted(corpus_dir.rglob("*.java"))
    if not files:
        raise ManifestResolutionError(f"no .java files under {corpus_dir}")
    return [SourceFile.from_text(p.read_text(encoding="utf-8"),
                                 path=str(p.relative_to(corpus_dir)))
            for p in files]


def read_manifest(manifest_path) -> list[tuple]:
    rows = []
    with open(manifest_path, encoding="utf-8") as fh:
        reader = csv.reader(fh, delimiter="\t")
        header = next(reader, None)
        if header != ["path", "startLine", "endLine"]:
            raise SchemaMismatch(
                "manifest must start with 'path\\tstartLine\\tendLine'")
        for row in reader:
            if len(row) != 3:
                raise SchemaMismatch(f"bad manifest row: {row!r}")
            rows.append((row[0], int(row[1]), int(row[2])))
    return rows


def resolve_fragment(file: SourceFile, start_line: int,
                     end_line: int) -> tuple:
    """(fragment, method, class) for the sibling statement run covering
    exactly the given 1-based inclusive line range."""
    hits = []
    for cls, method in file.methods():
        for node in [method.attrs["body"]] + [
                n for n in method.attrs["body"].walk()
                if n.kind in ("Body", "Block", "SwitchCase")]:
            stmts = node.attrs.get("stmts")
            if not stmts:
                continue
            chosen = [s for s in stmts
                      if node_lines(s, file.content).start >= start_line
                      and node_lines(s, file.content).stop - 1 <= end_line]
            if not chosen:
                continue
            idx = [stmts.index(s) for s in chosen]
            if idx != list(range(idx[0], idx[0] + len(idx))):
                continue
            hits.append((cls, method, tuple(chosen)))
    if not hits:
        raise ManifestResolutionError(
            f"{file.path}:{start_line}-{end_line} resolves to no statement run")
    methods = {id(m) for _, m, _ in hits}
    if len(methods) > 1:
        raise ManifestResolutionError(
            f"{file.path}:{start_line}-{end_line} spans multiple methods")
    # prefer the largest covered run (outermost block)
    cls, method, stmts = max(hits, key=lambda h: len(h[2]))
    return Fragment(file, stmts, method), method, cls


def _example_for(fragment: Fragment, method, cls, label: int,
                 source: str) -> LabeledExample:
    start, end = fragment.lines()
    return LabeledExample(
        vector=compute_metrics(fragment, method, cls), label=label,
        provenance=Provenance(fragment.file.path, start, end, source))


def build_dataset(corpus_dir, manifest_path, seed: int) -> Dataset:
    files = load_corpus(corpus_dir)
    by_path = {f.path: f for f in files}
    positives = []
    exclude = set()
    for path, start, end in read_manifest(manifest_path):
        if path not in by_path:
            raise ManifestResolutionError(f"manifest references {path!r}")
        frag, method, cls = resolve_fragment(by_path[path], start, end)
        positives.append(_example_for(frag, method, cls, 1, "manifest"))
        exclude.add((path,) + frag.span)
    methods = [(f, m) for f in files for _, m in f.methods()]
    class_of = {id(m): c for f in files for c, m in f.methods()}
    negatives = []
    for frag in sample_negatives(methods, len(positives), seed,
                                 exclude_spans=exclude):
        method = frag.enclosing_method
        negatives.append(_example_for(frag, method, class_of[id(method)],
                                      0, "sampler"))
    return Dataset(examples=tuple(positives + negatives),
                   catalog_version=CATALOG.version, seed=seed)


# -- CSV interchange ------------------------------------------------------

def save_dataset(dataset: Dataset, out_path):
    with open(out_path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CATALOG.ids() + ["label"])
        for ex in dataset.examples:
            writer.writerow([f"{v:.9g}" for v in ex.vector.values]
                            + [str(ex.label)])


def load_dataset(path, seed: int = 0) -> Dataset:
    examples = []
    with open(path, encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != CATALOG.ids() + ["label"]:
            raise SchemaMismatch(
                f"header does not match metric catalog {CATALOG.version}")
        for row in reader:
            if len(row) != 79:
                raise SchemaMismatch(f"expected 79 columns, got {len(row)}")
            try:
                values = tuple(float(v) for v in row[:78])
                label = int(row[78])
            except ValueError as exc:
                raise SchemaMismatch(str(exc)) from exc
            if any(math.isnan(v) or math.isinf(v) for v in values):
                raise SchemaMismatch("non-finite metric value")
            if label not in (0, 1):
                raise SchemaMismatch(f"bad label {label}")
            examples.append(LabeledExample(
                vector=MetricVector(values=values), label=label,
                provenance=Provenance("", 0, 0, "csv")))
    return Dataset(examples=tuple(examples),
                   catalog_version=CATALOG.version, seed=seed)


# -- synthetic corpus -----------------------------------------------------

def _filler_statements(rng, prefix: str, count: int) -> list[str]:
    out = []
    for k in range(count):
        v = f"{prefix}v{k}"
        style = rng.randrange(3)
        if style == 0:
            out.append(f"int {v} = {rng.randrange(1, 50)};")
        elif style == 1:
            out.append(f"{prefix}log({rng.randrange(1, 9)}, "
                       f"{rng.randrange(9, 99)});")
        else:
            out.append(f"int {v} = {rng.randrange(1, 9)} * "
                       f"{rng.randrange(2, 7)};")
    return out


def _positive_block(rng, prefix: str) -> list[str]:
    bound = rng.randrange(5, 20)
    pivot = rng.randrange(1, 4)
    return [
        f"int {prefix}acc = 0;",
        f"int {prefix}cnt = 0;",
        (f"for (int {prefix}i = 0; {prefix}i < {bound}; {prefix}i++) {{\n"
         f"            if ({prefix}i > {pivot}) {{\n"
         f"                {prefix}acc += {prefix}i * {rng.randrange(2, 5)};\n"
         f"                {prefix}cnt += 1;\n"
         f"            }}\n"
         f"        }}"),
    ]


def _synth_method(rng, index: int) -> str:
    prefix = f"m{index}"
    pre = _filler_statements(rng, prefix, rng.randrange(4, 8))
    positive = _positive_block(rng, prefix)
    body = pre + positive + [f"return {prefix}acc + {prefix}cnt;"]
    lines = [f"    int work{index}() {{"]
    lines += ["        " + s for s in body]
    lines.append("    }")
    return "\n".join(lines)


def synth_corpus(n_methods: int, seed: int, out_dir=None):
    """Generate a parseable corpus plus its positives manifest. Returns
    (files, manifest) where files maps path -> content and manifest rows
    are (path, startLine, endLine). When out_dir is given, both are also
    written to disk (manifest as 'manifest.tsv')."""
    if n_methods < 2:
        raise ValueError("n_methods must be >= 2")
    rng = random.Random(seed)
    files = {}
    manifest = []
    for base in range(0, n_methods, METHODS_PER_CLASS):
        count = min(METHODS_PER_CLASS, n_methods - base)
        cls_index = base // METHODS_PER_CLASS
        methods = [_synth_method(rng, base + k) for k in range(count)]
        path = f"Synth{cls_index}.java"
        content = (f"class Synth{cls_index} {{\n"
                   + "\n\n".join(methods) + "\n}\n")
        files[path] = content
        sf = SourceFile.from_text(content, path=path)
        for _, method in sf.methods():
            stmts = method.attrs["body"].attrs["stmts"]
            block = stmts[-POSITIVE_WIDTH - 1:-1]  # decls + loop
            frag = Fragment(sf, tuple(block), method)
            start, end = frag.lines()
            manifest.append((path, start, end))
    if out_dir is not None:
        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        for path, content in files.items():
            (out_dir / path).write_text(content, encoding="utf-8")
        write_manifest(manifest, out_dir / "manifest.tsv")
    return files, manifest


def write_manifest(rows, path):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, delimiter="\t")
        writer.writerow(["path", "startLine", "endLine"])
        for row in rows:
            writer.writerow([row[0], str(row[1]), str(row[2])])


def dataset_arrays(dataset: Dataset):
    """(X, y) numpy arrays for the ML layer."""
    import numpy as np
    X = np.array([e.vector.values for e in dataset.examples], dtype=float)
    y = np.array([e.label for e in dataset.examples], dtype=int)
    return X, y
