import pytest
from hypothesis import given, strategies as st

from pastewatch.clones import (EXACT, NEAR_MISS, find_duplicates, similarity)
from pastewatch.errors import EmptyBag
from pastewatch.syntax import (Fragment, SourceFile, TokenBag, parse_statements,
                               token_bag)


def bag_of(text):
    return token_bag(parse_statements(text))


def make_fragment(sf, method_name, start, count):
    method = {m.attrs["name"]: m for _, m in sf.methods()}[method_name]
    stmts = method.attrs["body"].attrs["stmts"]
    return Fragment(sf, tuple(stmts[start:start + count]), method)


FILE_WITH_COPY = """\
class A {
    void m() {
        int a = 1;
        int b = a + 2;
        use(a, b);
    }

    void n() {
        log();
        int a = 1;
        int b = a + 2;
        use(a, b);
    }
}
"""

FILE_WITH_RENAME = """\
class A {
    void m() {
        int a = 1;
        int b = a + 2;
        use(a, b);
    }

    void n() {
        int x = 1;
        int y = x + 2;
        use(x, y);
    }
}
"""


def test_similarity_identical():
    assert similarity(bag_of("a = b;"), bag_of("x = y;")) == 1.0


def test_similarity_hand_computed():
    a = TokenBag.from_counter({"ID": 2, "=": 1, ";": 1})
    b = TokenBag.from_counter({"ID": 2, "=": 1, ";": 1, "+": 1, "LIT": 1})
    assert similarity(a, b) == pytest.approx(4 / 6)


def test_similarity_disjoint():
    a = TokenBag.from_counter({"ID": 2})
    b = TokenBag.from_counter({"+": 1, ";": 1})
    assert similarity(a, b) == 0.0


def test_similarity_empty_bag():
    with pytest.raises(EmptyBag):
        similarity(TokenBag.from_counter({}), bag_of("a = b;"))


def test_exact_duplicate_detected():
    sf = SourceFile.from_text(FILE_WITH_COPY)
    frag = make_fragment(sf, "n", 1, 3)
    matches = find_duplicates(frag, sf)
    assert matches
    best = matches[0]
    assert best.kind == EXACT
    assert best.similarity == 1.0
    assert best.method.attrs["name"] == "m"


def test_renamed_duplicate_is_near_miss_at_one():
    sf = SourceFile.from_text(FILE_WITH_RENAME)
    frag = make_fragment(sf, "n", 0, 3)
    matches = find_duplicates(frag, sf)
    full = [m for m in matches if m.method.attrs["name"] == "m"
            and len(m.statements) == 3 and m.statements[0].kind ==
            "LocalVarDecl"]
    best = [m for m in full if m.similarity == 1.0]
    assert best and best[0].kind == NEAR_MISS


def test_unrelated_code_no_match():
    src = """class A {
        void m() { openFile(); writeHeader(); closeFile(); }
        void n() { int q = 9 * 9; while (q > 0) q--; }
    }"""
    sf = SourceFile.from_text(src)
    frag = make_fragment(sf, "n", 0, 2)
    assert find_duplicates(frag, sf) == []


def test_own_location_excluded():
    sf = SourceFile.from_text(FILE_WITH_COPY)
    frag = make_fragment(sf, "m", 0, 3)
    for m in find_duplicates(frag, sf):
        assert m.method.attrs["name"] == "n" or m.span != frag.span


def test_threshold_monotonicity():
    sf = SourceFile.from_text(FILE_WITH_RENAME)
    frag = make_fragment(sf, "n", 0, 3)
    low = {(m.span, m.kind) for m in find_duplicates(frag, sf, 0.3)}
    high = {(m.span, m.kind) for m in find_duplicates(frag, sf, 0.9)}
    assert high <= low


def test_reorder_robustness():
    a = bag_of("x = 1; y = 2;")
    b = bag_of("y = 2; x = 1;")
    assert similarity(a, b) == 1.0


bags = st.dictionaries(
    st.sampled_from(["ID", "LIT", "+", "=", ";", "if", "("]),
    st.integers(min_value=1, max_value=5), min_size=1, max_size=5,
).map(TokenBag.from_counter)


@given(bags, bags)
def test_similarity_symmetric_and_bounded(a, b):
    s = similarity(a, b)
    assert s == similarity(b, a)
    assert 0.0 <= s <= 1.0


@given(bags)
def test_self_similarity_is_one(a):
    assert similarity(a, a) == 1.0
