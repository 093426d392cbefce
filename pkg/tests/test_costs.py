"""Cost tables: validation, lookups, tree pricing, synthetic generation."""

import pytest

from amparse.costs import INF, CostParams, SentenceCosts, gen_synthetic, top_k_tags, tree_cost
from amparse.trees import BOTTOM, IGNORE, ROOT, app


def test_missing_decisions_price_infinite():
    sparse = SentenceCosts(2, ("a", "b"), {(1, "writer"): 0.5}, {})
    assert sparse.tag(1, "writer") == 0.5
    assert sparse.tag(2, "writer") == INF
    assert sparse.edge(1, 2, app("s")) == INF


def test_gold_tree_costs_zero(costs, gold):
    assert tree_cost(gold, costs) == 0.0


def test_perturbed_tree_costs_positive(costs, gold):
    from amparse.trees import AmDepTree, TreeEntry

    entries = list(gold.entries)
    entries[1] = TreeEntry(entries[1].form, entries[1].constant, 5, app("s"))
    assert tree_cost(AmDepTree(tuple(entries)), costs) > 0.0


def test_validation_rejects_bad_indices():
    with pytest.raises(ValueError):
        SentenceCosts(2, ("a", "b"), {(3, "writer"): 0.1}, {})
    with pytest.raises(ValueError):
        SentenceCosts(2, ("a", "b"), {}, {(1, 1, app("s")): 0.1})
    with pytest.raises(ValueError):
        SentenceCosts(2, ("a",), {}, {})


def test_validation_rejects_negative_costs():
    with pytest.raises(ValueError):
        SentenceCosts(1, ("a",), {(1, "writer"): -0.5}, {})


def test_top_k_tags_ordering(costs):
    pairs = top_k_tags(costs, 3, None)
    assert pairs[0] == ("want", 0.0)
    assert [c for _, c in pairs] == sorted(c for _, c in pairs)
    assert all(g != BOTTOM for g, _ in pairs)
    assert len(top_k_tags(costs, 3, 1)) == 1
    with pytest.raises(IndexError):
        top_k_tags(costs, 0, None)
    with pytest.raises(ValueError):
        top_k_tags(costs, 1, 0)


def test_gen_synthetic_is_deterministic(lex):
    a = gen_synthetic(42, 5, lex)
    b = gen_synthetic(42, 5, lex)
    assert a.tag_cost == b.tag_cost and a.edge_cost == b.edge_cost
    c = gen_synthetic(43, 5, lex)
    assert c.tag_cost != a.tag_cost


def test_gen_synthetic_prices_every_decision(lex):
    c = gen_synthetic(0, 4, lex, params=CostParams(lo=0.25, hi=0.75))
    for j in range(1, 5):
        assert (j, BOTTOM) in c.tag_cost
        for g in lex.constants:
            assert (j, g) in c.tag_cost
        assert (0, j, ROOT) in c.edge_cost
        assert (0, j, IGNORE) in c.edge_cost
    assert all(0.25 <= v <= 0.75 for v in c.tag_cost.values())
    # app/mod edges priced in both directions between distinct tokens
    assert (1, 2, app("s")) in c.edge_cost and (2, 1, app("s")) in c.edge_cost
