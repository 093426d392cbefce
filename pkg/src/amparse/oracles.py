"""Static oracles, completion procedures, and random-walk fuzzing.

The oracle turns a well-typed tree into the transition sequence that
rebuilds it exactly; the completion procedure turns *any* reachable
configuration into a goal, which is what makes training with exploration
possible.  Both come per system.  Completion works in bundles: each call
inspects the active token and emits a short sequence that measurably
advances (ltf: stack shrinks by one per bundle; ltl: exactly one Finish
per bundle), so termination is a counting argument.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Optional

from .lexicon import Lexicon, constants_of_type
from .transitions import (
    Configuration,
    Transition,
    TransitionError,
    apply_transition,
    config_to_tree,
    initial_config,
    is_goal,
    legal_transitions,
    owed,
)
from .trees import AmDepTree, check_well_typed
from .types import EMPTY_TYPE, Type, apply_set, request, serialize_type


# --- oracles ----------------------------------------------------------------


def oracle_sequence(tree: AmDepTree, lexicon: Lexicon, system: str) -> list[Transition]:
    """The canonical transition sequence that reconstructs tree.

    Children are visited apply-edges first, then modify-edges, each in
    ascending token position; ltf recurses as it attaches (depth-first),
    ltl finishes a token before descending, matching its stack order.
    """
    report = check_well_typed(tree, lexicon)
    if not report.ok:
        raise TransitionError(f"tree is not well-typed: {report.failure}")
    root = tree.root_token()
    seq: list[Transition] = [Transition("init", token=root)]

    def split_children(i: int) -> tuple[list[tuple[int, str]], list[tuple[int, str]]]:
        apps, mods = [], []
        for j in tree.children(i):
            lbl = tree.token(j).label
            if lbl.kind == "app":
                apps.append((j, lbl.source))
            elif lbl.kind == "mod":
                mods.append((j, lbl.source))
        return apps, mods

    def visit_ltf(i: int) -> None:
        apps, mods = split_children(i)
        seq.append(
            Transition("choose", term_type=report.term_types[i],
                       constant=tree.token(i).constant)
        )
        for j, alpha in apps:
            seq.append(Transition("apply", token=j, source=alpha))
            visit_ltf(j)
        for j, beta in mods:
            seq.append(Transition("modify", token=j, source=beta))
            visit_ltf(j)
        seq.append(Transition("pop"))

    def visit_ltl(i: int) -> None:
        apps, mods = split_children(i)
        for j, alpha in apps:
            seq.append(Transition("apply", token=j, source=alpha))
        for j, beta in mods:
            seq.append(Transition("modify", token=j, source=beta))
        seq.append(Transition("finish", constant=tree.token(i).constant))
        for j, _ in apps + mods:
            visit_ltl(j)

    if system == "ltf":
        visit_ltf(root)
    elif system == "ltl":
        visit_ltl(root)
    else:
        raise TransitionError(f"unknown system {system!r}")
    return seq


def replay(
    tree_or_n, transitions, lexicon: Lexicon, system: str, check: bool = True
) -> Configuration:
    """Run a transition sequence from the initial configuration."""
    n = tree_or_n if isinstance(tree_or_n, int) else tree_or_n.n
    cfg = initial_config(n)
    for tr in transitions:
        cfg = apply_transition(cfg, tr, lexicon, system, check=check)
    return cfg


# --- completion -------------------------------------------------------------


def _cheapest_constant(lexicon: Lexicon, t: Type) -> str:
    names = constants_of_type(lexicon, t)
    if not names:
        raise TransitionError(
            f"no constant of type {serialize_type(t)}; lexicon is not closed"
        )
    return names[0]


def complete_step(cfg: Configuration, lexicon: Lexicon, system: str) -> list[Transition]:
    """One bundle of the completion procedure; empty exactly at a goal (or
    before any Init, where it returns the one-token bootstrap bundle)."""
    if system == "ltf":
        return _complete_step_ltf(cfg, lexicon)
    if system == "ltl":
        return _complete_step_ltl(cfg, lexicon)
    raise TransitionError(f"unknown system {system!r}")


def _realized_term(lexicon: Lexicon, terms) -> Type:
    for t in sorted(terms, key=serialize_type):
        if t in lexicon.omega and constants_of_type(lexicon, t):
            return t
    raise TransitionError("no realizable term type; lexicon is not closed")


def _complete_step_ltf(cfg: Configuration, lexicon: Lexicon) -> list[Transition]:
    if cfg.is_initial:
        g = _cheapest_constant(lexicon, EMPTY_TYPE)
        return [
            Transition("init", token=1),
            Transition("choose", term_type=EMPTY_TYPE, constant=g),
            Transition("pop"),
        ]
    if not cfg.stack:
        return []
    i = cfg.active
    if cfg.constant(i) is None:
        t = _realized_term(lexicon, cfg.term_set(i))
        return [
            Transition("choose", term_type=t, constant=_cheapest_constant(lexicon, t)),
            Transition("pop"),
        ]
    if owed(cfg, i, lexicon) == 0:
        return [Transition("pop")]
    lex_type = lexicon.type_of(cfg.constant(i))
    (term,) = cfg.term_set(i)
    missing = sorted(apply_set(lex_type, term) - cfg.applied_set(i))
    targets = [j for j in range(1, cfg.n + 1) if cfg.headless(j)][: len(missing)]
    if len(targets) < len(missing):
        raise TransitionError("owed slots exceed free tokens; configuration unreachable")
    out: list[Transition] = []
    for alpha, j in zip(missing, targets):
        rho = request(lex_type, alpha)
        out.append(Transition("apply", token=j, source=alpha))
        out.append(Transition("choose", term_type=rho,
                              constant=_cheapest_constant(lexicon, rho)))
        out.append(Transition("pop"))
    out.append(Transition("pop"))
    return out


def _complete_step_ltl(cfg: Configuration, lexicon: Lexicon) -> list[Transition]:
    if cfg.is_initial:
        return [
            Transition("init", token=1),
            Transition("finish", constant=_cheapest_constant(lexicon, EMPTY_TYPE)),
        ]
    if not cfg.stack:
        return []
    i = cfg.active
    done = cfg.applied_set(i)
    best: Optional[tuple[int, str, str, Type, Type]] = None
    for lam in lexicon.omega:
        for t in cfg.term_set(i):
            consumed = apply_set(lam, t)
            if consumed is None or not done <= consumed:
                continue
            key = (len(consumed - done), serialize_type(lam), serialize_type(t))
            if best is None or key < best[:3]:
                best = key + (lam, t)
    if best is None:
        raise TransitionError("active token owes the impossible; unreachable state")
    _, _, _, lam, t = best
    g = _cheapest_constant(lexicon, lam)
    missing = sorted(apply_set(lam, t) - done)
    targets = [j for j in range(1, cfg.n + 1) if cfg.headless(j)][: len(missing)]
    if len(targets) < len(missing):
        raise TransitionError("owed slots exceed free tokens; configuration unreachable")
    out = [
        Transition("apply", token=j, source=alpha)
        for alpha, j in zip(missing, targets)
    ]
    out.append(Transition("finish", constant=g))
    return out


def complete_config(
    cfg: Configuration, lexicon: Lexicon, system: str, check: bool = True
) -> tuple[list[Transition], Configuration]:
    """Drive cfg to a goal; returns the transitions taken and the goal."""
    taken: list[Transition] = []
    rounds = 0
    while True:
        bundle = complete_step(cfg, lexicon, system)
        if not bundle:
            break
        for tr in bundle:
            cfg = apply_transition(cfg, tr, lexicon, system, check=check)
            taken.append(tr)
        rounds += 1
        if rounds > 4 * cfg.n + 4:
            raise TransitionError("completion failed to converge; broken guards")
    if not is_goal(cfg):
        raise TransitionError("completion terminated off-goal")
    return taken, cfg


# --- fuzzing ----------------------------------------------------------------


@dataclass
class Episode:
    seed: int
    system: str
    n: int
    lexicon_name: str
    steps: tuple[tuple[str, str], ...]  # (config digest, transition)
    goal: bool
    tree: Optional[AmDepTree]


def fuzz_episode(
    seed: int,
    system: str,
    lexicon: Lexicon,
    n: int,
    steps: int,
    bias_apply: float = 1.0,
) -> Episode:
    """Seeded exploration: up to `steps` random legal transitions, then
    completion drives the rest of the way to a goal.  steps=0 is pure
    completion.  Deterministic per seed."""
    rng = random.Random(seed)
    cfg = initial_config(n)
    trace: list[tuple[str, Transition]] = []
    for _ in range(steps):
        legal = legal_transitions(cfg, lexicon, system)
        if not legal:
            break
        weights = [bias_apply if t.kind == "apply" else 1.0 for t in legal]
        tr = rng.choices(legal, weights=weights, k=1)[0]
        trace.append((cfg.digest(), tr))
        cfg = apply_transition(cfg, tr, lexicon, system, check=False)
    completion, final = complete_config(cfg, lexicon, system, check=False)
    for tr in completion:
        trace.append((cfg.digest(), tr))
        cfg = apply_transition(cfg, tr, lexicon, system, check=False)
    assert cfg == final
    reached = is_goal(final)
    return Episode(
        seed=seed,
        system=system,
        n=n,
        lexicon_name=lexicon.name,
        steps=tuple((digest, str(tr)) for digest, tr in trace),
        goal=reached,
        tree=config_to_tree(final) if reached else None,
    )
