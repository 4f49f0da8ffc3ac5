import pytest

from pastewatch.dataset import (Dataset, build_dataset, load_dataset,
                                read_manifest, resolve_fragment,
                                save_dataset, synth_corpus, write_manifest)
from pastewatch.errors import ManifestResolutionError, SchemaMismatch
from pastewatch.syntax import SourceFile, parse


@pytest.fixture()
def small_corpus(tmp_path):
    files, manifest = synth_corpus(20, seed=5, out_dir=tmp_path)
    return tmp_path


def test_synth_corpus_contract():
    files, manifest = synth_corpus(50, seed=7)
    assert len(manifest) >= 50
    methods = 0
    for content in files.values():
        tree = parse(content)
        for cls in tree.attrs["classes"]:
            methods += len(cls.attrs["methods"])
    assert methods == 50


def test_synth_corpus_deterministic():
    assert synth_corpus(12, seed=3) == synth_corpus(12, seed=3)


def test_manifest_rows_resolve(small_corpus):
    rows = read_manifest(small_corpus / "manifest.tsv")
    for path, start, end in rows:
        sf = SourceFile.from_text((small_corpus / path).read_text(),
                                  path=path)
        frag, method, cls = resolve_fragment(sf, start, end)
        assert frag.lines() == (start, end)
        kinds = [s.kind for s in frag.statements]
        assert kinds == ["LocalVarDecl", "LocalVarDecl", "For"]


def test_build_dataset_balanced(small_corpus):
    ds = build_dataset(small_corpus, small_corpus / "manifest.tsv", seed=1)
    counts = ds.class_counts()
    assert counts[0] == counts[1] == 20
    for ex in ds.examples:
        assert ex.provenance.path
        assert ex.provenance.start_line >= 1


def test_build_dataset_negatives_disjoint_from_positives(small_corpus):
    ds = build_dataset(small_corpus, small_corpus / "manifest.tsv", seed=1)
    pos = {(e.provenance.path, e.provenance.start_line,
            e.provenance.end_line) for e in ds.examples if e.label == 1}
    for e in ds.examples:
        if e.label == 0:
            key = (e.provenance.path, e.provenance.start_line,
                   e.provenance.end_line)
            assert key not in pos


def test_build_dataset_deterministic_bytes(small_corpus, tmp_path):
    out1, out2 = tmp_path / "a.csv", tmp_path / "b.csv"
    save_dataset(build_dataset(small_corpus, small_corpus / "manifest.tsv",
                               seed=9), out1)
    save_dataset(build_dataset(small_corpus, small_corpus / "manifest.tsv",
                               seed=9), out2)
    assert out1.read_bytes() == out2.read_bytes()


def test_manifest_row_spanning_two_methods(small_corpus):
    rows = read_manifest(small_corpus / "manifest.tsv")
    path = rows[0][0]
    sf = SourceFile.from_text((small_corpus / path).read_text(), path=path)
    with pytest.raises(ManifestResolutionError):
        # a range that covers parts of two different methods
        resolve_fragment(sf, rows[0][1], rows[1][2])


def test_save_load_round_trip(small_corpus, tmp_path):
    ds = build_dataset(small_corpus, small_corpus / "manifest.tsv", seed=2)
    out = tmp_path / "ds.csv"
    save_dataset(ds, out)
    loaded = load_dataset(out)
    assert len(loaded.examples) == len(ds.examples)
    for a, b in zip(ds.examples, loaded.examples):
        assert a.label == b.label
        for x, y in zip(a.vector.values, b.vector.values):
            assert y == pytest.approx(x, rel=1e-8)


def test_load_rejects_wrong_column_count(tmp_path):
    from pastewatch.metrics import CATALOG
    bad = tmp_path / "bad.csv"
    bad.write_text(",".join(CATALOG.ids()[:-1] + ["label"]) + "\n")
    with pytest.raises(SchemaMismatch):
        load_dataset(bad)


def test_load_rejects_non_finite(tmp_path):
    from pastewatch.metrics import CATALOG
    bad = tmp_path / "bad.csv"
    row = ["1"] * 77 + ["nan", "0"]
    bad.write_text(",".join(CATALOG.ids() + ["label"]) + "\n"
                   + ",".join(row) + "\n")
    with pytest.raises(SchemaMismatch):
        load_dataset(bad)


def test_manifest_round_trip(tmp_path):
    rows = [("A.java", 3, 7), ("B.java", 10, 12)]
    write_manifest(rows, tmp_path / "m.tsv")
    assert read_manifest(tmp_path / "m.tsv") == rows
