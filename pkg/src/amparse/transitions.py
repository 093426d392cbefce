"""Two dead-end-free transition systems for building analyses token by token.

Both systems share the configuration shape: a partial edge set, a stack of
tokens being worked on, and three per-token annotations: T(i), the set of
term types token i's subtree may still evaluate to; A(i), the argument
slots already filled at i; and G(i), the constant finally assigned to i.
W, the number of tokens still headless, is the budget of attachable
material; O, the total number of argument slots everybody still owes,
must never exceed it or somebody will starve.  Every guard below exists to
preserve O <= W plus local consistency, and together they make both
systems dead-end free on a closed lexicon: any random walk ends in a goal.

The lexical-type-first system (ltf) commits to a constant when a token is
pushed (Choose) and then works top-down, so the stack is depth-first.  The
lexical-type-last system (ltl) draws all of a token's outgoing edges
first, names the constant only at Finish, and only then pushes the
children, so commitment to types is maximally delayed.
"""

from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass, field, replace
from typing import Callable, Iterable, Optional

from .costs import INF, SentenceCosts, tree_cost
from .lexicon import Lexicon
from .trees import BOTTOM, IGNORE, ROOT, AmDepTree, EdgeLabel, TreeEntry, app, mod
from .types import EMPTY_TYPE, Type, apply_set, request, serialize_type, type_combine

SYSTEMS = ("ltf", "ltl")


class TransitionError(ValueError):
    """An illegal transition was applied, or a malformed configuration."""


# --- configurations ---------------------------------------------------------


@dataclass(frozen=True)
class Configuration:
    """Immutable parser state; annotation maps are stored as sorted tuples
    so configurations hash and compare structurally."""

    n: int
    edges: tuple[tuple[int, int, EdgeLabel], ...] = ()
    stack: tuple[int, ...] = ()
    terms: tuple[tuple[int, tuple[Type, ...]], ...] = ()
    applied: tuple[tuple[int, tuple[str, ...]], ...] = ()
    graphs: tuple[tuple[int, str], ...] = ()

    def term_set(self, i: int) -> Optional[frozenset[Type]]:
        for j, ts in self.terms:
            if j == i:
                return frozenset(ts)
        return None

    def applied_set(self, i: int) -> Optional[frozenset[str]]:
        for j, names in self.applied:
            if j == i:
                return frozenset(names)
        return None

    def constant(self, i: int) -> Optional[str]:
        for j, g in self.graphs:
            if j == i:
                return g
        return None

    def head_of(self, j: int) -> Optional[tuple[int, EdgeLabel]]:
        for h, d, lbl in self.edges:
            if d == j:
                return h, lbl
        return None

    def headless(self, j: int) -> bool:
        return self.head_of(j) is None

    @property
    def active(self) -> Optional[int]:
        return self.stack[-1] if self.stack else None

    @property
    def is_initial(self) -> bool:
        return not self.edges and not self.terms and not self.stack

    def free_tokens(self) -> int:
        """W: how many tokens still lack an incoming edge."""
        return self.n - len(self.edges)

    def children(self, i: int) -> list[tuple[int, EdgeLabel]]:
        """Outgoing edges of i in creation order."""
        return [(d, lbl) for h, d, lbl in self.edges if h == i]

    def digest(self) -> str:
        text = repr((
            self.n,
            tuple((h, d, str(lbl)) for h, d, lbl in self.edges),
            self.stack,
            tuple((i, tuple(serialize_type(t) for t in ts)) for i, ts in self.terms),
            self.applied,
            self.graphs,
        ))
        return hashlib.sha256(text.encode()).hexdigest()[:12]


def initial_config(n: int) -> Configuration:
    if n < 1:
        raise TransitionError("need at least one token")
    return Configuration(n=n)


def _set_entry(entries: tuple, i: int, value: tuple) -> tuple:
    kept = tuple(e for e in entries if e[0] != i)
    return tuple(sorted(kept + ((i, value),)))


def _set_terms(cfg: Configuration, i: int, types: Iterable[Type]) -> tuple:
    ts = tuple(sorted(set(types), key=serialize_type))
    return _set_entry(cfg.terms, i, ts)


def _set_applied(cfg: Configuration, i: int, names: Iterable[str]) -> tuple:
    return _set_entry(cfg.applied, i, tuple(sorted(set(names))))


# --- transitions ------------------------------------------------------------

_KIND_ORDER = {"init": 0, "apply": 1, "modify": 2, "choose": 3, "finish": 3, "pop": 4}


@dataclass(frozen=True, order=False)
class Transition:
    kind: str
    token: int = 0
    source: str = ""
    term_type: Optional[Type] = None
    constant: str = ""

    def sort_key(self) -> tuple:
        tstr = serialize_type(self.term_type) if self.term_type is not None else ""
        return (_KIND_ORDER[self.kind], self.token, self.source, tstr, self.constant)

    def __str__(self) -> str:
        if self.kind == "init":
            return f"Init({self.token})"
        if self.kind == "choose":
            return f"Choose({serialize_type(self.term_type)}, {self.constant})"
        if self.kind == "apply":
            return f"Apply({self.source}, {self.token})"
        if self.kind == "modify":
            return f"Modify({self.source}, {self.token})"
        if self.kind == "finish":
            return f"Finish({self.constant})"
        return "Pop"


def parse_transition(text: str) -> Transition:
    """Inverse of str(); types inside Choose are re-parsed."""
    from .types import parse_type

    text = text.strip()
    if text == "Pop":
        return Transition("pop")
    name, _, body = text.partition("(")
    body = body.rstrip(")")
    if name == "Init":
        return Transition("init", token=int(body))
    if name == "Finish":
        return Transition("finish", constant=body)
    if name == "Choose":
        tstr, g = body.rsplit(",", 1)
        return Transition("choose", term_type=parse_type(tstr.strip()), constant=g.strip())
    if name in ("Apply", "Modify"):
        src, j = body.split(",")
        kind = "apply" if name == "Apply" else "modify"
        return Transition(kind, token=int(j), source=src.strip())
    raise TransitionError(f"cannot parse transition {text!r}")


# --- guard arithmetic -------------------------------------------------------


def owed(cfg: Configuration, i: int, lexicon: Lexicon) -> float:
    """Slots token i still has to fill, minimized over its open choices.

    Zero when T(i) or A(i) is undefined.  Candidate lexical types are the
    fixed constant's type when G(i) is set, all of omega otherwise; only
    candidates whose consumed-source set extends A(i) qualify.  Infinite
    when nothing qualifies, which poisons every budget guard downstream
    rather than crashing.
    """
    ts = cfg.term_set(i)
    done = cfg.applied_set(i)
    if ts is None or done is None:
        return 0.0
    g = cfg.constant(i)
    if g is not None:
        lam_candidates: Iterable[Type] = (lexicon.type_of(g),)
    else:
        lam_candidates = lexicon.omega
    best = INF
    for lam in lam_candidates:
        for t in ts:
            consumed = apply_set(lam, t)
            if consumed is not None and done <= consumed:
                best = min(best, float(len(consumed - done)))
    return best


def total_owed(cfg: Configuration, lexicon: Lexicon) -> float:
    return sum(owed(cfg, i, lexicon) for i in range(1, cfg.n + 1))


def poss_lex(
    omega: Iterable[Type], t: Type, done: frozenset[str], budget: float
) -> set[Type]:
    """Lexical types that can still reach term type t given the filled slots
    and at most budget more argument attachments."""
    out = set()
    for lam in omega:
        consumed = apply_set(lam, t)
        if consumed is not None and done <= consumed and len(consumed - done) <= budget:
            out.add(lam)
    return out


# --- legality ---------------------------------------------------------------


def legal_transitions(
    cfg: Configuration,
    lexicon: Lexicon,
    system: str,
    type_checked: bool = True,
) -> list[Transition]:
    """All transitions applicable in cfg, sorted by the canonical order
    (Init < Apply < Modify < Choose/Finish < Pop, then token, source, type,
    constant).  type_checked=False drops every type guard (ltl only)."""
    if system not in SYSTEMS:
        raise TransitionError(f"unknown system {system!r}")
    if not type_checked and system != "ltl":
        raise TransitionError("the unchecked ablation is defined for ltl only")
    if cfg.is_initial:
        return [Transition("init", token=i) for i in range(1, cfg.n + 1)]
    if not cfg.stack:
        return []
    out = (
        _legal_ltf(cfg, lexicon)
        if system == "ltf"
        else _legal_ltl(cfg, lexicon, type_checked)
    )
    return sorted(out, key=Transition.sort_key)


def _headless_tokens(cfg: Configuration) -> list[int]:
    headed = {d for _, d, _ in cfg.edges}
    return [j for j in range(1, cfg.n + 1) if j not in headed]


def _legal_ltf(cfg: Configuration, lexicon: Lexicon) -> list[Transition]:
    i = cfg.active
    out: list[Transition] = []
    if cfg.constant(i) is None:
        budget = cfg.free_tokens() - total_owed(cfg, lexicon)
        for t in sorted(cfg.term_set(i), key=serialize_type):
            allowed = poss_lex(lexicon.omega, t, frozenset(), budget)
            for g in sorted(lexicon.constants):
                if lexicon.type_of(g) in allowed:
                    out.append(Transition("choose", term_type=t, constant=g))
        return out

    lex_type = lexicon.type_of(cfg.constant(i))
    (term,) = cfg.term_set(i)
    consumed = apply_set(lex_type, term)
    done = cfg.applied_set(i)
    free = _headless_tokens(cfg)
    for alpha in sorted(consumed - done):
        if app(alpha) in lexicon.labels:
            out.extend(Transition("apply", token=j, source=alpha) for j in free)
    if cfg.free_tokens() - total_owed(cfg, lexicon) >= 1:
        for beta in sorted(lexicon.mod_sources()):
            if _mod_term_types(lexicon, beta, lex_type):
                out.extend(Transition("modify", token=j, source=beta) for j in free)
    if done == consumed:
        out.append(Transition("pop"))
    return out


def _legal_ltl(
    cfg: Configuration, lexicon: Lexicon, type_checked: bool
) -> list[Transition]:
    i = cfg.active
    out: list[Transition] = []
    done = cfg.applied_set(i)
    terms = cfg.term_set(i)
    free = _headless_tokens(cfg)
    w = cfg.free_tokens()
    for alpha in sorted(lexicon.app_sources()):
        if alpha in done:
            continue
        if type_checked and not any(
            poss_lex(lexicon.omega, t, done | {alpha}, w - 1) for t in terms
        ):
            continue
        out.extend(Transition("apply", token=j, source=alpha) for j in free)
    mods_ok = True
    if type_checked and w - total_owed(cfg, lexicon) < 1:
        mods_ok = False
    if mods_ok:
        for beta in sorted(lexicon.mod_sources()):
            out.extend(Transition("modify", token=j, source=beta) for j in free)
    for g in sorted(lexicon.constants):
        if type_checked and _finish_witness(lexicon.type_of(g), terms, done) is None:
            continue
        out.append(Transition("finish", constant=g))
    return out


def _finish_witness(
    lex_type: Type, terms: frozenset[Type], done: frozenset[str]
) -> Optional[Type]:
    """The term type t with apply_set(lex_type, t) == done, if terms has one.

    At most one exists: the consumed set pins down t's node set, and t must
    be an induced sub-dag of the lexical type.
    """
    for t in sorted(terms, key=serialize_type):
        if apply_set(lex_type, t) == done:
            return t
    return None


def _mod_term_types(lexicon: Lexicon, beta: str, head_type: Type) -> frozenset[Type]:
    """Term types a MOD_beta dependent of a head of type head_type may have."""
    return frozenset(
        t for t in lexicon.omega if type_combine(mod(beta), head_type, t) is not None
    )


# --- effects ----------------------------------------------------------------


def apply_transition(
    cfg: Configuration,
    tr: Transition,
    lexicon: Lexicon,
    system: str,
    check: bool = True,
    type_checked: bool = True,
) -> Configuration:
    """The successor configuration; raises TransitionError on illegal tr
    (membership in legal_transitions) unless check=False."""
    if check and tr not in legal_transitions(cfg, lexicon, system, type_checked):
        raise TransitionError(f"illegal transition {tr} in {cfg}")

    if tr.kind == "init":
        new = replace(
            cfg,
            edges=((0, tr.token, ROOT),),
            stack=(tr.token,),
            terms=_set_terms(cfg, tr.token, [EMPTY_TYPE]),
        )
        if system == "ltl":
            new = replace(new, applied=_set_applied(new, tr.token, []))
        return new

    i = cfg.active
    if tr.kind == "choose":
        return replace(
            cfg,
            terms=_set_terms(cfg, i, [tr.term_type]),
            applied=_set_applied(cfg, i, []),
            graphs=_set_entry(cfg.graphs, i, tr.constant),
        )
    if tr.kind == "apply":
        edges = cfg.edges + ((i, tr.token, app(tr.source)),)
        done = cfg.applied_set(i) or frozenset()
        new = replace(
            cfg,
            edges=edges,
            applied=_set_applied(cfg, i, done | {tr.source}),
        )
        if system == "ltf":
            lex_type = lexicon.type_of(cfg.constant(i))
            new = replace(
                new,
                terms=_set_terms(new, tr.token, [request(lex_type, tr.source)]),
                stack=cfg.stack + (tr.token,),
            )
        return new
    if tr.kind == "modify":
        edges = cfg.edges + ((i, tr.token, mod(tr.source)),)
        new = replace(cfg, edges=edges)
        if system == "ltf":
            lex_type = lexicon.type_of(cfg.constant(i))
            new = replace(
                new,
                terms=_set_terms(new, tr.token, _mod_term_types(lexicon, tr.source, lex_type)),
                stack=cfg.stack + (tr.token,),
            )
        return new
    if tr.kind == "pop":
        return replace(cfg, stack=cfg.stack[:-1])
    if tr.kind == "finish":
        lex_type = lexicon.type_of(tr.constant)
        witness = _finish_witness(lex_type, cfg.term_set(i), cfg.applied_set(i))
        new = replace(cfg, graphs=_set_entry(cfg.graphs, i, tr.constant))
        if witness is not None:
            new = replace(new, terms=_set_terms(new, i, [witness]))
        children = cfg.children(i)
        stack = cfg.stack[:-1] + tuple(j for j, _ in reversed(children))
        terms, applied = new.terms, new.applied
        for j, lbl in children:
            if lbl.kind == "app":
                if lbl.source in lex_type.nodes:
                    child_terms: Iterable[Type] = [request(lex_type, lbl.source)]
                else:
                    child_terms = []
            else:
                child_terms = _mod_term_types(lexicon, lbl.source, lex_type)
            terms = _set_entry(terms, j, tuple(sorted(child_terms, key=serialize_type)))
            applied = _set_entry(applied, j, ())
        return replace(new, stack=stack, terms=terms, applied=applied)
    raise TransitionError(f"unknown transition kind {tr.kind!r}")


def is_goal(cfg: Configuration) -> bool:
    """Stack empty with at least one constant assigned."""
    return not cfg.stack and not cfg.is_initial and bool(cfg.graphs)


def check_goal_config(cfg: Configuration, lexicon: Lexicon) -> bool:
    """Full goal definition, for cross-checking is_goal in tests: every
    token is either ignored (headless, unannotated) or fully finished."""
    if cfg.stack or not cfg.graphs:
        return False
    for i in range(1, cfg.n + 1):
        if cfg.headless(i):
            if cfg.term_set(i) is not None or cfg.constant(i) is not None:
                return False
            continue
        g = cfg.constant(i)
        ts = cfg.term_set(i)
        if g is None or ts is None or len(ts) != 1:
            return False
        (t,) = ts
        if apply_set(lexicon.type_of(g), t) != cfg.applied_set(i):
            return False
    return True


def config_to_tree(cfg: Configuration, forms: Optional[tuple[str, ...]] = None) -> AmDepTree:
    if forms is None:
        forms = tuple(f"w{i}" for i in range(1, cfg.n + 1))
    entries = []
    for i in range(1, cfg.n + 1):
        head = cfg.head_of(i)
        if head is None:
            entries.append(TreeEntry(forms[i - 1], BOTTOM, 0, IGNORE))
        else:
            h, lbl = head
            entries.append(TreeEntry(forms[i - 1], cfg.constant(i) or BOTTOM, h, lbl))
    return AmDepTree(tuple(entries))


# --- greedy and beam decoding ----------------------------------------------


@dataclass
class DecodeResult:
    tree: Optional[AmDepTree]
    cost: float
    transitions: list[Transition] = field(default_factory=list)
    score: float = 0.0

    @property
    def ok(self) -> bool:
        return self.tree is not None


def static_scorer(costs: SentenceCosts) -> Callable[[Configuration, Transition], float]:
    """Scores each transition by the cost-file entry of the decision it
    takes: root edge for Init, edge for Apply/Modify, supertag for
    Choose/Finish, nothing for Pop."""

    def score(cfg: Configuration, tr: Transition) -> float:
        if tr.kind == "init":
            return costs.edge(0, tr.token, ROOT)
        if tr.kind == "apply":
            return costs.edge(cfg.active, tr.token, app(tr.source))
        if tr.kind == "modify":
            return costs.edge(cfg.active, tr.token, mod(tr.source))
        if tr.kind in ("choose", "finish"):
            return costs.tag(cfg.active, tr.constant)
        return 0.0

    return score


def decode(
    costs: SentenceCosts,
    lexicon: Lexicon,
    system: str,
    beam: int = 1,
    type_checked: bool = True,
) -> DecodeResult:
    """Transition decoding with a static cost scorer.

    beam=1 is greedy: at each configuration take the cheapest legal
    transition, sort order breaking ties.  beam>1 keeps that many partial
    sequences by summed score; finished sequences stay in the beam and
    compete unchanged.  The returned cost is the tree cost of the result
    under the cost file, not the summed transition score.
    """
    if costs.n < 1:
        raise TransitionError("empty sentence")
    score = static_scorer(costs)
    # (summed score, insertion order, cfg, transitions)
    beams: list[tuple[float, int, Configuration, list[Transition]]] = [
        (0.0, 0, initial_config(costs.n), [])
    ]
    counter = 1
    while True:
        grown: list[tuple[float, int, Configuration, list[Transition]]] = []
        any_open = False
        for total, tie, cfg, trs in beams:
            legal = legal_transitions(cfg, lexicon, system, type_checked)
            if not legal:
                grown.append((total, tie, cfg, trs))
                continue
            any_open = True
            if beam == 1:
                legal = [min(legal, key=lambda t: (score(cfg, t), t.sort_key()))]
            for tr in legal:
                nxt = apply_transition(cfg, tr, lexicon, system, check=False)
                grown.append((total + score(cfg, tr), counter, nxt, trs + [tr]))
                counter += 1
        if not any_open:
            break
        grown.sort(key=lambda b: (b[0], b[1]))
        beams = grown[:beam]

    best_total, _, best_cfg, best_trs = min(beams, key=lambda b: (b[0], b[1]))
    if not is_goal(best_cfg):
        return DecodeResult(None, INF, best_trs, best_total)
    tree = config_to_tree(best_cfg, costs.forms)
    return DecodeResult(tree, tree_cost(tree, costs), best_trs, best_total)


# --- rendering --------------------------------------------------------------


def render_trace(
    transitions: Iterable[Transition],
    lexicon: Lexicon,
    system: str,
    n: int,
) -> list[str]:
    """Step table: per row the annotation deltas the transition caused,
    columns step | E | T | A | G | stack | transition."""
    cfg = initial_config(n)
    rows = []
    for step, tr in enumerate(transitions, start=1):
        nxt = apply_transition(cfg, tr, lexicon, system, check=False)
        e_delta = " ".join(
            f"({h},{d},{lbl})" for h, d, lbl in nxt.edges[len(cfg.edges):]
        )
        t_delta = " ".join(
            f"{i}:{{{','.join(serialize_type(t) for t in ts)}}}"
            for i, ts in nxt.terms
            if (i, ts) not in cfg.terms
        )
        a_delta = " ".join(
            f"{i}:{{{','.join(names)}}}"
            for i, names in nxt.applied
            if (i, names) not in cfg.applied
        )
        g_delta = " ".join(
            f"{i}:{g}" for i, g in nxt.graphs if (i, g) not in cfg.graphs
        )
        stack = "[" + " ".join(str(x) for x in nxt.stack) + "]"
        rows.append((str(step), e_delta, t_delta, a_delta, g_delta, stack, str(tr)))
        cfg = nxt
    header = ("step", "E", "T", "A", "G", "stack", "transition")
    widths = [
        max(len(header[c]), *(len(r[c]) for r in rows)) if rows else len(header[c])
        for c in range(len(header))
    ]
    lines = ["  ".join(h.ljust(w) for h, w in zip(header, widths)).rstrip()]
    for r in rows:
        lines.append("  ".join(v.ljust(w) for v, w in zip(r, widths)).rstrip())
    return lines


def random_walk(
    lexicon: Lexicon,
    system: str,
    n: int,
    rng: random.Random,
    bias_apply: float = 1.0,
) -> tuple[Configuration, list[tuple[str, Transition]]]:
    """Uniform (optionally Apply-biased) random legal walk to termination.

    Returns the final configuration and the (config digest, transition)
    trace.  On a closed lexicon the final configuration is always a goal;
    that is the dead-end-freeness property the fuzz tests hammer on.
    """
    cfg = initial_config(n)
    trace: list[tuple[str, Transition]] = []
    limit = 4 * n + 4
    while True:
        legal = legal_transitions(cfg, lexicon, system)
        if not legal:
            return cfg, trace
        if len(trace) >= limit:
            raise TransitionError(f"walk exceeded {limit} steps; broken guards")
        weights = [bias_apply if t.kind == "apply" else 1.0 for t in legal]
        tr = rng.choices(legal, weights=weights, k=1)[0]
        trace.append((cfg.digest(), tr))
        cfg = apply_transition(cfg, tr, lexicon, system, check=False)
