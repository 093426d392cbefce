"""Transition systems: legality, effects, determinism, dead-end freedom."""

import random

import pytest

from amparse.transitions import (
    Configuration,
    Transition,
    TransitionError,
    apply_transition,
    check_goal_config,
    config_to_tree,
    decode,
    initial_config,
    is_goal,
    legal_transitions,
    owed,
    parse_transition,
    poss_lex,
    random_walk,
    render_trace,
    total_owed,
)
from amparse.trees import check_well_typed
from amparse.types import parse_type


GOLD_LTF = [
    "Init(3)", "Choose([], want)", "Apply(s, 2)", "Choose([], writer)", "Pop",
    "Apply(o, 5)", "Choose([s], sleep)", "Modify(m, 6)", "Choose([m], soundly)",
    "Pop", "Pop", "Pop",
]
GOLD_LTL = [
    "Init(3)", "Apply(s, 2)", "Apply(o, 5)", "Finish(want)",
    "Finish(writer)", "Modify(m, 6)", "Finish(sleep)", "Finish(soundly)",
]


def drive(seq, lexicon, system, n=6):
    cfg = initial_config(n)
    for text in seq:
        tr = parse_transition(text)
        legal = legal_transitions(cfg, lexicon, system)
        assert tr in legal, f"{text} not legal; options: {[str(t) for t in legal]}"
        cfg = apply_transition(cfg, tr, lexicon, system)
    return cfg


def test_transition_text_round_trip():
    for text in ("Init(3)", "Apply(s, 2)", "Modify(m, 6)", "Pop",
                 "Choose([o[s], s], want)", "Finish(want)"):
        assert str(parse_transition(text)) == text
    with pytest.raises(ValueError):
        parse_transition("Jump(1)")


def test_initial_legal_moves_are_inits(closed_lex):
    cfg = initial_config(3)
    for system in ("ltf", "ltl"):
        legal = legal_transitions(cfg, closed_lex, system)
        assert [t.kind for t in legal] == ["init"] * 3
        assert [t.token for t in legal] == [1, 2, 3]


def test_gold_ltf_sequence_reaches_goal(closed_lex, gold):
    cfg = drive(GOLD_LTF, closed_lex, "ltf")
    assert is_goal(cfg) and check_goal_config(cfg, closed_lex)
    forms = tuple(e.form for e in gold.entries)
    assert config_to_tree(cfg, forms) == gold


def test_gold_ltl_sequence_reaches_goal(closed_lex, gold):
    cfg = drive(GOLD_LTL, closed_lex, "ltl")
    assert is_goal(cfg) and check_goal_config(cfg, closed_lex)
    forms = tuple(e.form for e in gold.entries)
    assert config_to_tree(cfg, forms) == gold


def test_illegal_transition_raises(closed_lex):
    cfg = initial_config(3)
    with pytest.raises(TransitionError):
        apply_transition(cfg, parse_transition("Pop"), closed_lex, "ltf")
    with pytest.raises(TransitionError):
        apply_transition(cfg, parse_transition("Apply(s, 2)"), closed_lex, "ltl")


def test_tie_break_order():
    ts = [
        parse_transition("Pop"),
        parse_transition("Choose([], want)"),
        parse_transition("Modify(m, 6)"),
        parse_transition("Apply(s, 2)"),
        parse_transition("Init(1)"),
    ]
    ordered = sorted(ts, key=lambda t: t.sort_key())
    assert [t.kind for t in ordered] == ["init", "apply", "modify", "choose", "pop"]


def test_poss_lex_budget(lex):
    omega = lex.omega
    t = parse_type("[s]")
    assert poss_lex(omega, t, frozenset(), 1) == {
        parse_type("[s]"), parse_type("[m, s]"), parse_type("[o[s], s]"),
    }
    assert poss_lex(omega, t, frozenset(), 0) == {parse_type("[s]")}
    # done slots must be inside the apply set
    assert poss_lex(omega, t, frozenset({"o"}), 5) == {parse_type("[o[s], s]")}
    assert poss_lex(omega, t, frozenset({"zz"}), 5) == set()


def test_owed_zero_when_unannotated(closed_lex):
    cfg = initial_config(4)
    assert owed(cfg, 1, closed_lex) == 0
    assert total_owed(cfg, closed_lex) == 0


def test_owed_counts_missing_sources(closed_lex):
    # after Init + Choose(want), the active token owes both s and o
    cfg = drive(["Init(3)", "Choose([], want)"], closed_lex, "ltf")
    assert owed(cfg, 3, closed_lex) == 2
    cfg = drive(["Init(3)", "Choose([], want)", "Apply(s, 2)"], closed_lex, "ltf")
    assert owed(cfg, 3, closed_lex) == 1


def test_ltf_never_allows_overcommitment(closed_lex):
    # W - O budget: once every token has a head, Modify must be illegal
    cfg = drive(
        ["Init(2)", "Choose([], want)", "Apply(s, 1)", "Choose([], writer)",
         "Pop", "Apply(o, 3)", "Choose([s], sleep)"],
        closed_lex, "ltf", n=3,
    )
    assert cfg.free_tokens() == 0
    kinds = {t.kind for t in legal_transitions(cfg, closed_lex, "ltf")}
    assert kinds == {"pop"}


def test_ablation_only_for_ltl(closed_lex):
    cfg = initial_config(2)
    with pytest.raises(TransitionError):
        legal_transitions(cfg, closed_lex, "ltf", type_checked=False)
    legal = legal_transitions(cfg, closed_lex, "ltl", type_checked=False)
    assert legal


def test_unknown_system_rejected(closed_lex):
    with pytest.raises(TransitionError):
        legal_transitions(initial_config(2), closed_lex, "arc-eager")


@pytest.mark.parametrize("system", ["ltf", "ltl"])
def test_random_walks_always_reach_goals(closed_lex, system):
    """Dead-end freedom: uniform random legal walks always end at a goal."""
    for seed in range(60):
        rng = random.Random(seed)
        n = rng.randint(1, 7)
        cfg, trace = random_walk(closed_lex, system, n, rng)
        assert is_goal(cfg), f"seed {seed} stuck"
        assert check_goal_config(cfg, closed_lex)
        tree = config_to_tree(cfg)
        assert check_well_typed(tree, closed_lex).ok, f"seed {seed} ill-typed"


def test_ltf_owed_never_exceeds_free_tokens(closed_lex):
    # invariant O <= W along every legal path
    for seed in range(40):
        rng = random.Random(seed)
        cfg = initial_config(rng.randint(2, 6))
        while True:
            assert total_owed(cfg, closed_lex) <= cfg.free_tokens()
            legal = legal_transitions(cfg, closed_lex, "ltf")
            if not legal:
                break
            cfg = apply_transition(cfg, rng.choice(legal), closed_lex, "ltf")


def test_ltl_applied_matches_app_edges(closed_lex):
    # alpha in A(i) exactly when an APP_alpha edge leaves i
    for seed in range(40):
        rng = random.Random(seed)
        cfg = initial_config(rng.randint(2, 6))
        while True:
            for i in range(1, cfg.n + 1):
                done = cfg.applied_set(i)
                if done is None:
                    continue
                from_edges = {
                    lbl.source for d, lbl in cfg.children(i) if lbl.kind == "app"
                }
                assert done == from_edges
            legal = legal_transitions(cfg, closed_lex, "ltl")
            if not legal:
                break
            cfg = apply_transition(cfg, rng.choice(legal), closed_lex, "ltl")


def test_decode_beam_never_worse_than_greedy(closed_lex):
    from amparse.costs import gen_synthetic

    for seed in range(10):
        c = gen_synthetic(seed, 5, closed_lex)
        for system in ("ltf", "ltl"):
            greedy = decode(c, closed_lex, system, beam=1)
            wide = decode(c, closed_lex, system, beam=8)
            assert wide.score <= greedy.score + 1e-9


def test_render_trace_shape(closed_lex):
    seq = [parse_transition(t) for t in GOLD_LTL]
    lines = render_trace(seq, closed_lex, "ltl", 6)
    assert lines[0].split()[:2] == ["step", "E"]
    assert len(lines) == len(seq) + 1
    assert lines[1].endswith("Init(3)")


def test_digest_is_stable_and_distinct(closed_lex):
    a = initial_config(4)
    b = apply_transition(
        a, parse_transition("Init(2)"), closed_lex, "ltl"
    )
    assert a.digest() == initial_config(4).digest()
    assert a.digest() != b.digest()
