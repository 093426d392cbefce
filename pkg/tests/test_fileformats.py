"""Text formats: canonical writers, parsers, round-trips, error reporting."""

import pytest

from amparse import fileformats as ff
from amparse.costs import gen_synthetic
from amparse.graphs import graphs_isomorphic
from amparse.lexicon import augment_closure
from amparse.trees import app, mod
from amparse.types import parse_type


def test_lexicon_round_trip(lex):
    text = ff.write_lexicon_text(lex)
    back = ff.parse_lexicon_text(text, name=lex.name)
    assert back.constants.keys() == lex.constants.keys()
    assert back.omega == lex.omega
    assert back.labels == lex.labels
    for name in lex.constants:
        assert graphs_isomorphic(back.constants[name], lex.constants[name])
    # canonical writer is a fixpoint
    assert ff.write_lexicon_text(back) == text


def test_augmented_lexicon_round_trip(closed_lex):
    back = ff.parse_lexicon_text(ff.write_lexicon_text(closed_lex))
    assert back.constants.keys() == closed_lex.constants.keys()
    assert back.omega == closed_lex.omega


def test_lexicon_app_labels_are_derived(lex):
    # the file format carries mod labels explicitly; app labels come from
    # the source names mentioned anywhere in constants or omega
    back = ff.parse_lexicon_text(ff.write_lexicon_text(lex))
    assert app("s") in back.labels
    assert app("o") in back.labels
    assert app("m") in back.labels
    assert mod("m") in back.labels
    assert mod("s") not in back.labels


def test_graph_round_trip(expected_graph):
    text = ff.write_graph_text(expected_graph, name="result")
    assert text.startswith("constant result\n")
    back = ff.parse_graph_text(text)
    assert graphs_isomorphic(back, expected_graph)


def test_cost_round_trip_exact(lex):
    sentences = [gen_synthetic(s, 3 + s % 3, lex, sid=f"s{s}") for s in range(4)]
    text = ff.write_cost_text(sentences)
    back = ff.parse_cost_text(text)
    assert len(back) == len(sentences)
    for a, b in zip(sentences, back):
        # repr round-trips floats exactly
        assert a.n == b.n and a.sid == b.sid and a.forms == b.forms
        assert a.tag_cost == b.tag_cost and a.edge_cost == b.edge_cost


def test_trees_round_trip_with_markers(gold):
    text = ff.write_trees_text([gold, "s7 NO-PARSE", gold])
    assert "# s7 NO-PARSE" in text
    back = ff.parse_trees_text(text)
    assert back == [gold, gold]


def test_lexicon_error_carries_line_number():
    bad = "constant x\nnode a lbl\nroot a\nfrobnicate y\nend\n"
    with pytest.raises(ff.FormatError) as exc:
        ff.parse_lexicon_text(bad)
    assert exc.value.line == 4


def test_lexicon_rejects_duplicate_constant():
    bad = (
        "constant x\nnode a lbl\nroot a\nend\n"
        "constant x\nnode a lbl\nroot a\nend\n"
    )
    with pytest.raises(ff.FormatError):
        ff.parse_lexicon_text(bad)


def test_lexicon_source_request_syntax():
    text = (
        "constant x\nnode a lbl\nnode b _\nroot a\n"
        "source b o request [s]\nedge a ARG1 b\nend\n"
        "omega [s]\n"
    )
    lx = ff.parse_lexicon_text(text)
    assert lx.type_of("x") == parse_type("[o[s]]")


def test_cost_rejects_duplicate_entries():
    bad = "sentence s0 2\ntag 1 writer 0.5\ntag 1 writer 0.7\nend\n"
    with pytest.raises(ff.FormatError):
        ff.parse_cost_text(bad)


def test_cost_rejects_out_of_range_token():
    bad = "sentence s0 2\ntag 3 writer 0.5\nend\n"
    with pytest.raises(ff.FormatError) as exc:
        ff.parse_cost_text(bad)
    assert exc.value.line == 2


def test_cost_comments_and_blank_lines_ignored(lex):
    c = gen_synthetic(0, 2, lex)
    text = "# header\n\n" + ff.write_cost_text([c]) + "\n# trailer\n"
    assert ff.parse_cost_text(text)[0].tag_cost == c.tag_cost


def test_tree_rejects_wrong_index_column():
    bad = "1\ta\twriter\t0\tROOT\n3\tb\tBOT\t0\tIGNORE\n"
    with pytest.raises(ff.FormatError) as exc:
        ff.parse_trees_text(bad)
    assert exc.value.line == 2


def test_tree_rejects_short_row():
    with pytest.raises(ff.FormatError):
        ff.parse_trees_text("1\ta\twriter\t0\n")


def test_graph_text_rejects_trailing_blocks(expected_graph):
    text = ff.write_graph_text(expected_graph)
    with pytest.raises(ff.FormatError):
        ff.parse_graph_text(text + "\n" + text)
