"""Dependency trees over tokens with graph-constant leaves.

A tree assigns every token 1..n a lexicon constant (or BOTTOM for tokens
left out of the analysis), a head in 0..n, and an edge label.  Exactly one
token hangs off the virtual root 0 with label ROOT; ignored tokens hang off
0 with label IGNORE; everything else is an app or mod edge between tokens.

Well-typedness folds types bottom-up: at each head, all mod children are
checked against the full lexical type first (mods never consume sources),
then app children are consumed in an order where each applied source has no
incoming request edges left.  Evaluation mirrors the same plan on graphs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .graphs import AsGraph, graph_apply, graph_modify, graph_type
from .types import EMPTY_TYPE, Type, request, type_combine

BOTTOM = "BOT"


class TreeError(ValueError):
    """Structurally invalid dependency tree."""


@dataclass(frozen=True)
class EdgeLabel:
    """app_<source> / mod_<source> / root / ignore, spelled APP_s etc. on disk."""

    kind: str
    source: Optional[str] = None

    def __post_init__(self) -> None:
        if self.kind in ("app", "mod"):
            if not self.source:
                raise ValueError(f"{self.kind} label needs a source name")
        elif self.kind in ("root", "ignore"):
            if self.source is not None:
                raise ValueError(f"{self.kind} label takes no source")
        else:
            raise ValueError(f"unknown label kind {self.kind!r}")

    def __str__(self) -> str:
        if self.kind == "app":
            return f"APP_{self.source}"
        if self.kind == "mod":
            return f"MOD_{self.source}"
        return self.kind.upper()

    def __repr__(self) -> str:
        return f"EdgeLabel({str(self)!r})"


ROOT = EdgeLabel("root")
IGNORE = EdgeLabel("ignore")


def app(source: str) -> EdgeLabel:
    return EdgeLabel("app", source)


def mod(source: str) -> EdgeLabel:
    return EdgeLabel("mod", source)


def parse_edge_label(text: str) -> EdgeLabel:
    if text == "ROOT":
        return ROOT
    if text == "IGNORE":
        return IGNORE
    if text.startswith("APP_"):
        return app(text[4:])
    if text.startswith("MOD_"):
        return mod(text[4:])
    raise ValueError(f"bad edge label {text!r}")


@dataclass(frozen=True)
class TreeEntry:
    form: str
    constant: str  # a lexicon constant name, or BOTTOM
    head: int
    label: EdgeLabel


@dataclass(frozen=True)
class AmDepTree:
    """Entries for tokens 1..n in order; validated on construction."""

    entries: tuple[TreeEntry, ...]

    def __post_init__(self) -> None:
        n = len(self.entries)
        roots = 0
        for i, e in enumerate(self.entries, start=1):
            if not 0 <= e.head <= n:
                raise TreeError(f"token {i}: head {e.head} out of range")
            if e.head == i:
                raise TreeError(f"token {i}: self-headed")
            if e.label == ROOT:
                roots += 1
                if e.head != 0:
                    raise TreeError(f"token {i}: ROOT label with head {e.head}")
                if e.constant == BOTTOM:
                    raise TreeError(f"token {i}: ROOT token cannot be {BOTTOM}")
            elif e.label == IGNORE:
                if e.head != 0:
                    raise TreeError(f"token {i}: IGNORE label with head {e.head}")
                if e.constant != BOTTOM:
                    raise TreeError(f"token {i}: IGNORE requires constant {BOTTOM}")
            else:
                if e.head == 0:
                    raise TreeError(f"token {i}: {e.label} edge cannot come from 0")
                if e.constant == BOTTOM:
                    raise TreeError(f"token {i}: attached token cannot be {BOTTOM}")
            if e.constant == BOTTOM and e.label != IGNORE:
                raise TreeError(f"token {i}: {BOTTOM} token must be ignored")
        if roots != 1:
            raise TreeError(f"expected exactly one ROOT edge, found {roots}")
        for i, e in enumerate(self.entries, start=1):
            if e.head != 0 and self.entries[e.head - 1].label == IGNORE:
                raise TreeError(f"token {i}: head {e.head} is an ignored token")
        # acyclicity: walking heads from any token must reach 0
        for i in range(1, n + 1):
            seen = set()
            j = i
            while j != 0:
                if j in seen:
                    raise TreeError(f"head cycle through token {i}")
                seen.add(j)
                j = self.entries[j - 1].head

    @property
    def n(self) -> int:
        return len(self.entries)

    def token(self, i: int) -> TreeEntry:
        return self.entries[i - 1]

    def root_token(self) -> int:
        for i, e in enumerate(self.entries, start=1):
            if e.label == ROOT:
                return i
        raise AssertionError("validated tree always has a root")

    def children(self, i: int) -> list[int]:
        return [j for j in range(1, self.n + 1) if self.entries[j - 1].head == i]

    def attached_tokens(self) -> list[int]:
        return [i for i, e in enumerate(self.entries, start=1) if e.label != IGNORE]

    def is_ignored(self, i: int) -> bool:
        return self.entries[i - 1].label == IGNORE


@dataclass
class TypingReport:
    ok: bool
    term_types: dict[int, Type] = field(default_factory=dict)
    failure: Optional[tuple[int, str]] = None


@dataclass
class _FoldPlan:
    """Per-token evaluation plan shared by the checker and the evaluator."""

    mod_children: list[int] = field(default_factory=list)  # ascending position
    app_children: list[int] = field(default_factory=list)  # legal apply order


def _analyze(t: AmDepTree, lexicon) -> tuple[TypingReport, dict[int, _FoldPlan]]:
    report = TypingReport(ok=True)
    plans: dict[int, _FoldPlan] = {}

    def fail(token: int, why: str) -> None:
        if report.ok:
            report.ok = False
            report.failure = (token, why)

    def walk(i: int) -> Optional[Type]:
        entry = t.token(i)
        lex_type = lexicon.type_of(entry.constant)
        tau = lex_type
        plan = _FoldPlan()
        plans[i] = plan
        kids = t.children(i)
        child_types: dict[int, Optional[Type]] = {c: walk(c) for c in kids}
        for c in kids:
            if t.token(c).label.kind == "mod":
                plan.mod_children.append(c)
        for c in plan.mod_children:
            ct = child_types[c]
            if ct is None:
                return None
            combined = type_combine(t.token(c).label, tau, ct)
            if combined is None:
                fail(c, f"mod edge {t.token(c).label} from {i}: {ct} does not modify {tau}")
                return None
            tau = combined
        pending = [c for c in kids if t.token(c).label.kind == "app"]
        while pending:
            progressed = False
            for c in sorted(pending, key=lambda c: t.token(c).label.source or ""):
                label = t.token(c).label
                src = label.source
                if src not in tau.nodes or tau.has_incoming(src):
                    continue
                ct = child_types[c]
                if ct is None:
                    return None
                combined = type_combine(label, tau, ct)
                if combined is None:
                    fail(c, f"app edge {label} from {i}: argument type {ct} != {request(tau, src) if src in tau.nodes else '?'}")
                    return None
                tau = combined
                plan.app_children.append(c)
                pending.remove(c)
                progressed = True
                break
            if not progressed:
                bad = t.token(pending[0]).label
                fail(pending[0], f"app edge {bad} from {i}: source not consumable in {tau}")
                return None
        report.term_types[i] = tau
        return tau

    root = t.root_token()
    root_type = walk(root)
    if report.ok and root_type is not None and not root_type.is_empty():
        fail(root, f"root term type {root_type} is not empty")
    return report, plans


def check_well_typed(t: AmDepTree, lexicon) -> TypingReport:
    """Fold types bottom-up; ok iff every step is defined and the root's term
    type is empty.  term_types carries whatever was successfully computed."""
    report, _ = _analyze(t, lexicon)
    return report


def evaluate_tree(t: AmDepTree, lexicon) -> AsGraph:
    """Evaluate a well-typed tree to its graph.  Raises TreeError otherwise."""
    report, plans = _analyze(t, lexicon)
    if not report.ok:
        token, why = report.failure
        raise TreeError(f"tree is not well-typed at token {token}: {why}")

    def build(i: int) -> AsGraph:
        g = lexicon.constants[t.token(i).constant]
        for c in plans[i].mod_children:
            g = graph_modify(g, t.token(c).label.source, build(c))
        for c in plans[i].app_children:
            g = graph_apply(g, t.token(c).label.source, build(c))
        return g

    result = build(t.root_token())
    assert graph_type(result) == EMPTY_TYPE
    return result
