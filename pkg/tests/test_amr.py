import logging
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fixtures import ANWAR_AMR, QUOTED_AMRS, SHEW_VANILLA, random_graph, triple_set
from tstar.amr import (
    AmrGraph,
    Constant,
    Edge,
    Literal,
    TripleKind,
    Variable,
    canonical_penman,
    connect,
    delinearize,
    extract_triples,
    graph_from_record,
    graph_to_record,
    iter_penman_file,
    linearize_dfs,
    parse_penman,
    penman_to_tokens,
    repair_penman,
    serialize_penman,
    split_blocks,
    split_linearized,
    strip_sense,
    unreachable_variables,
    write_penman_file,
)
from tstar.amr.linearize import is_pointer
from tstar.errors import (
    AmrError,
    DuplicateVariableError,
    PenmanSyntaxError,
    UndefinedVariableError,
    UnrecoverableAmrError,
)


# parsing ---------------------------------------------------------------


def test_parse_simple():
    g = parse_penman("(e / eat-01 :ARG0 (d / dog) :ARG1 (c / crumb))")
    assert g.root == "e"
    assert dict(g.instances) == {"e": "eat-01", "d": "dog", "c": "crumb"}
    assert g.edges == (Edge("e", ":ARG0", Variable("d")), Edge("e", ":ARG1", Variable("c")))


def test_parse_compact_spacing():
    g = parse_penman(SHEW_VANILLA)
    assert g.concept("s") == "shew-01"
    assert Edge("e", ":ARG1", Variable("w")) in g.edges


def test_parse_constants_and_literals():
    g = parse_penman('(w / whisper-01 :polarity - :ARG0 (n / name :op1 "Maria") :quant 5)')
    assert Edge("w", ":polarity", Constant("-")) in g.edges
    assert Edge("n", ":op1", Literal("Maria")) in g.edges
    assert Edge("w", ":quant", Constant("5")) in g.edges


def test_parse_escaped_literal():
    g = parse_penman(r'(n / name :op1 "say \"hi\"")')
    assert g.edges[0].target == Literal('say "hi"')
    assert parse_penman(serialize_penman(g)) == g


def test_parse_comments_ignored():
    g = parse_penman("# ::snt a dog\n(d / dog)")
    assert g.concept("d") == "dog"


def test_parse_reentrancy():
    g = parse_penman(ANWAR_AMR)
    assert sum(1 for e in g.edges if e.target == Variable("p")) == 3
    assert len(g.instances) == 21


@pytest.mark.parametrize(
    "text, err",
    [
        ("(a / b :ARG0 (a / c))", DuplicateVariableError),
        ("(a / b :ARG0 (c / d)", PenmanSyntaxError),
        ("(a / b))", PenmanSyntaxError),
        ("(a / b :ARG0)", PenmanSyntaxError),
        ("(a / b :ARG0 x2)", UndefinedVariableError),
        ("(a / )", PenmanSyntaxError),
        ("", PenmanSyntaxError),
        ("(a / b) (c / d)", PenmanSyntaxError),
    ],
)
def test_parse_errors(text, err):
    with pytest.raises(err):
        parse_penman(text)


def test_syntax_error_reports_position():
    with pytest.raises(PenmanSyntaxError, match="line 2"):
        parse_penman("(a / b\n  :ARG0 (c / d)")


def test_unresolved_symbol_is_constant():
    g = parse_penman("(g / go-02 :mode imperative)")
    assert g.edges[0].target == Constant("imperative")


# graph invariants ------------------------------------------------------


def test_graph_rejects_bad_variable():
    with pytest.raises(AmrError):
        AmrGraph("A", {"A": "dog"})


def test_graph_rejects_dangling_edge():
    with pytest.raises(AmrError):
        AmrGraph("a", {"a": "dog"}, (Edge("a", ":mod", Variable("b")),))


def test_graph_immutable():
    g = parse_penman("(d / dog)")
    with pytest.raises(TypeError):
        g.instances["x"] = "cat"


def test_strip_sense():
    assert strip_sense("say-01") == "say"
    assert strip_sense("have-org-role-91") == "have-org-role"
    assert strip_sense("dog") == "dog"
    assert strip_sense("vice-prime") == "vice-prime"


def test_connect_attaches_islands():
    g = AmrGraph("a", {"a": "dog", "b": "cat"}, ())
    assert unreachable_variables(g) == ["b"]
    with pytest.warns(UserWarning):
        fixed = connect(g)
    assert unreachable_variables(fixed) == []
    assert Edge("a", ":mod", Variable("b")) in fixed.edges


def test_backward_only_edge_serialized_inverted():
    g = AmrGraph("a", {"a": "boy", "b": "want-01"}, (Edge("b", ":ARG0", Variable("a")),))
    text = serialize_penman(g, indent=None)
    assert text == "(a / boy :ARG0-of (b / want-01))"
    assert triple_set(parse_penman(text)) == triple_set(g)


# serialization ---------------------------------------------------------


def test_serialize_indented():
    g = parse_penman("(e / eat-01 :ARG0 (d / dog))")
    assert serialize_penman(g) == "(e / eat-01\n    :ARG0 (d / dog))"
    assert canonical_penman(g) == "(e / eat-01 :ARG0 (d / dog))"


@pytest.mark.parametrize("name", sorted(QUOTED_AMRS))
def test_quoted_amr_roundtrip(name):
    g = parse_penman(QUOTED_AMRS[name])
    assert triple_set(parse_penman(serialize_penman(g))) == triple_set(g)
    assert canonical_penman(parse_penman(canonical_penman(g))) == canonical_penman(g)


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 8))
def test_random_serialize_roundtrip(seed, n):
    g = random_graph(random.Random(seed), n)
    assert triple_set(parse_penman(serialize_penman(g))) == triple_set(g)


def test_records_roundtrip():
    g = parse_penman(ANWAR_AMR)
    assert graph_from_record(graph_to_record(g)) == g
    with pytest.raises(AmrError):
        graph_from_record({"root": "a"})


# block files -----------------------------------------------------------


def test_split_blocks():
    text = "# header\n(a / b)\n\n\n# ::id 2\n(c / d\n  :mod (e / f))\n\n# only a comment\n"
    assert split_blocks(text) == ["(a / b)", "(c / d\n  :mod (e / f))"]


def test_penman_file_roundtrip(tmp_path):
    graphs = [parse_penman(t) for t in QUOTED_AMRS.values()]
    path = tmp_path / "g.amr"
    write_penman_file(path, graphs)
    assert list(iter_penman_file(path)) == [parse_penman(serialize_penman(g)) for g in graphs]


# linearization ---------------------------------------------------------


def test_linearize_simple():
    g = parse_penman("(e / eat-01 :ARG0 (d / dog))")
    assert str(linearize_dfs(g)) == "( <p0> eat-01 :ARG0 ( <p1> dog ) )"


def test_linearize_one_reused_pointer():
    # w is the only re-entrant variable, so it is the only pointer that appears bare
    toks = list(linearize_dfs(parse_penman(SHEW_VANILLA)))
    defined = {toks[i] for i in range(len(toks) - 1) if toks[i - 1] == "(" and is_pointer(toks[i])}
    bare = {t for i, t in enumerate(toks) if is_pointer(t) and toks[i - 1] != "("}
    w_ptr = toks[toks.index("we") - 1]
    assert bare == {w_ptr}
    assert w_ptr in defined
    assert delinearize(toks).concept(delinearize(toks).root) == "and"


def test_linearize_literal_kept_whole():
    g = parse_penman('(n / name :op1 "Bob Smith")')
    lin = str(linearize_dfs(g))
    assert '"Bob Smith"' in lin
    assert split_linearized(lin).count('"Bob Smith"') == 1
    assert delinearize(lin).edges[0].target == Literal("Bob Smith")


@pytest.mark.parametrize("name", sorted(QUOTED_AMRS))
def test_quoted_amr_delinearize(name):
    g = parse_penman(QUOTED_AMRS[name])
    lin = linearize_dfs(g)
    back = delinearize(list(lin))
    assert linearize_dfs(back) == lin


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 8))
def test_random_delinearize_roundtrip(seed, n):
    g = random_graph(random.Random(seed), n)
    lin = linearize_dfs(g)
    assert linearize_dfs(delinearize(lin)) == lin


def test_delinearize_fresh_ids_from_concepts():
    g = delinearize("( <p0> eat-01 :ARG0 ( <p1> dog ) :ARG1 ( <p2> dish ) )")
    assert canonical_penman(g) == "(e / eat-01 :ARG0 (d / dog) :ARG1 (d2 / dish))"


# repairs ---------------------------------------------------------------


def _repair(text):
    notes = []
    return delinearize(text, notes), notes


def test_repair_unclosed():
    g, notes = _repair("( <p0> eat-01 :ARG0 ( <p1> dog")
    assert canonical_penman(g) == "(e / eat-01 :ARG0 (d / dog))"
    assert notes


def test_repair_surplus_close():
    g, notes = _repair("( <p0> dog ) ) )")
    assert canonical_penman(g) == "(d / dog)"
    assert notes


def test_repair_dangling_role():
    g, notes = _repair("( <p0> eat-01 :ARG0 )")
    assert canonical_penman(g) == "(e / eat-01)"
    assert notes


def test_repair_pointer_before_definition():
    g, notes = _repair("( <p0> eat-01 :ARG0 <p1> :ARG1 ( <p1> dog ) )")
    assert "amr-unknown" in g.instances.values()
    assert notes


def test_repair_missing_role():
    g, _ = _repair("( <p0> eat-01 ( <p1> dog ) )")
    assert extract_triples(g, include_top=False)[-1].role == ":mod"


def test_repair_multiple_roots():
    g, notes = _repair("( <p0> dog ) ( <p1> cat )")
    assert g.concept(g.root) == "multi-sentence"
    assert {e.role for e in g.edges} == {":snt1", ":snt2"}
    assert notes


def test_repair_logged(caplog):
    with caplog.at_level(logging.WARNING, logger="tstar"):
        delinearize("( <p0> dog")
    assert any("repair" in r.getMessage().lower() or "clos" in r.getMessage().lower() for r in caplog.records)


def test_unrecoverable():
    with pytest.raises(UnrecoverableAmrError):
        delinearize(") ) :ARG0")


def test_repair_penman_text():
    g = repair_penman("(e / eat-01 :ARG0 (d / dog)")
    assert canonical_penman(g) == "(e / eat-01 :ARG0 (d / dog))"
    assert penman_to_tokens("(e / eat-01 :ARG0 e)") == ["(", "<p0>", "eat-01", ":ARG0", "<p0>", ")"]


# triples ---------------------------------------------------------------


def test_triples_kinds():
    g = parse_penman('(w / whisper-01 :polarity - :ARG0 (p / person :name (n / name :op1 "Maria")))')
    kinds = [t.kind for t in extract_triples(g)]
    assert kinds.count(TripleKind.TOP) == 1
    assert kinds.count(TripleKind.INSTANCE) == 3
    assert kinds.count(TripleKind.ATTRIBUTE) == 2
    assert kinds.count(TripleKind.RELATION) == 2


def test_triples_normalize_inverse():
    a = extract_triples(parse_penman("(b / boy :ARG0-of (w / want-01))"), include_top=False)
    b = extract_triples(parse_penman("(w / want-01 :ARG0 (b / boy))"), include_top=False)
    assert set(a) == set(b)


def test_triples_keep_consist_of():
    ts = extract_triples(parse_penman("(a / army :consist-of (s / soldier))"), include_top=False)
    assert any(t.role == ":consist-of" for t in ts)
