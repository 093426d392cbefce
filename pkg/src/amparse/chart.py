"""Exhaustive projective chart decoder.

Items are spans of the sentence annotated with a head token and the term
type still open at that head.  Deduction rules: Init assigns a supertag to
a single token; Skip extends a span over an ignored token; Arc combines two
adjacent spans with an apply or modify edge between their heads.  A goal is
a full-span item of empty type plus a root edge.  The chart fills spans in
increasing length, keeping the cheapest item per (span, head, type)
signature, so the optimum over the whole derivation space is exact.

Optionally every valid rule instance is recorded as a hyperedge; a backward
min-plus pass over those then yields, for each signature, the cheapest cost
of any full parse that uses it (inside plus outside), which is what the
heuristic-admissibility tests compare against.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field
from typing import Optional

from .costs import SentenceCosts, top_k_tags
from .lexicon import Lexicon
from .trees import BOTTOM, IGNORE, ROOT, AmDepTree, EdgeLabel, TreeEntry
from .types import EMPTY_TYPE, Type, serialize_type, type_combine

INF = float("inf")

# (i, k, head, type): tokens i..k-1 (k exclusive), head in that range.
Sig = tuple[int, int, int, Type]

# ("goal",) is the virtual parent of all accepted full-span items.
GOAL_SIG = ("goal",)


@dataclass
class ParseItem:
    span: tuple[int, int]
    head: int
    typ: Type
    cost: float
    back: tuple

    @property
    def sig(self) -> Sig:
        return (self.span[0], self.span[1], self.head, self.typ)


@dataclass
class ChartStats:
    n_items: int = 0
    n_goal_candidates: int = 0
    arcs_checked: int = 0
    elapsed: float = 0.0


@dataclass
class ChartResult:
    tree: Optional[AmDepTree]
    cost: float
    stats: ChartStats
    best: dict[Sig, ParseItem] = field(default_factory=dict, repr=False)
    # (parent_sig, rule_cost, child_sigs); parent GOAL_SIG for accepted roots.
    # None unless record_hyperedges was requested.
    hyperedges: Optional[list[tuple]] = field(default=None, repr=False)

    @property
    def ok(self) -> bool:
        return self.tree is not None


def chart_parse(
    costs: SentenceCosts,
    lexicon: Lexicon,
    k_tags: Optional[int] = None,
    record_hyperedges: bool = False,
) -> ChartResult:
    """Minimum-cost projective analysis of one sentence, or no-parse.

    k_tags limits Init to the k cheapest priced supertags per token
    (None: all priced).  Ties keep the first item discovered under the
    fixed rule order (Init by token, then spans by increasing length;
    within a span Skip before Arc, split points left to right).
    """
    t0 = time.perf_counter()
    n = costs.n
    stats = ChartStats()
    best: dict[Sig, ParseItem] = {}
    by_span: dict[tuple[int, int], list[Sig]] = {}
    hyper: list[tuple] = []
    labels = sorted(
        (l for l in lexicon.labels if l.kind in ("app", "mod")), key=str
    )

    def offer(item: ParseItem, children: tuple[Sig, ...], delta: float) -> None:
        if item.cost == INF:
            return
        if record_hyperedges:
            hyper.append((item.sig, delta, children))
        cur = best.get(item.sig)
        if cur is None:
            best[item.sig] = item
            by_span.setdefault(item.span, []).append(item.sig)
        elif item.cost < cur.cost:
            best[item.sig] = item

    for j in range(1, n + 1):
        for g, tag_cost in top_k_tags(costs, j, k_tags):
            typ = lexicon.type_of(g)
            offer(ParseItem((j, j + 1), j, typ, tag_cost, ("init", g)), (), tag_cost)

    for length in range(2, n + 1):
        for i in range(1, n - length + 2):
            k = i + length
            skip_l_cost = costs.tag(i, BOTTOM) + costs.edge(0, i, IGNORE)
            for sig in by_span.get((i + 1, k), []):
                child = best[sig]
                offer(
                    ParseItem((i, k), child.head, child.typ,
                              child.cost + skip_l_cost, ("skip", sig)),
                    (sig,), skip_l_cost,
                )
            skip_r_cost = costs.tag(k - 1, BOTTOM) + costs.edge(0, k - 1, IGNORE)
            for sig in by_span.get((i, k - 1), []):
                child = best[sig]
                offer(
                    ParseItem((i, k), child.head, child.typ,
                              child.cost + skip_r_cost, ("skip", sig)),
                    (sig,), skip_r_cost,
                )
            for j in range(i + 1, k):
                pairs = itertools.product(
                    by_span.get((i, j), []), by_span.get((j, k), [])
                )
                for lsig, rsig in pairs:
                    left, right = best[lsig], best[rsig]
                    for lbl in labels:
                        stats.arcs_checked += 2
                        # head on the left: left absorbs right
                        typ = type_combine(lbl, left.typ, right.typ)
                        if typ is not None:
                            delta = costs.edge(left.head, right.head, lbl)
                            offer(
                                ParseItem((i, k), left.head, typ,
                                          left.cost + right.cost + delta,
                                          ("arc", lbl, lsig, rsig, "left")),
                                (lsig, rsig), delta,
                            )
                        # head on the right: right absorbs left
                        typ = type_combine(lbl, right.typ, left.typ)
                        if typ is not None:
                            delta = costs.edge(right.head, left.head, lbl)
                            offer(
                                ParseItem((i, k), right.head, typ,
                                          left.cost + right.cost + delta,
                                          ("arc", lbl, lsig, rsig, "right")),
                                (lsig, rsig), delta,
                            )

    goal_cost = INF
    goal_sig: Optional[Sig] = None
    for sig in by_span.get((1, n + 1), []):
        item = best[sig]
        if item.typ != EMPTY_TYPE:
            continue
        stats.n_goal_candidates += 1
        root_cost = costs.edge(0, item.head, ROOT)
        total = item.cost + root_cost
        if record_hyperedges and total < INF:
            hyper.append((GOAL_SIG, root_cost, (sig,)))
        if total < goal_cost:
            goal_cost = total
            goal_sig = sig

    stats.n_items = len(best)
    tree = None
    if goal_sig is not None:
        tree = _extract_tree(costs, best, goal_sig)
    stats.elapsed = time.perf_counter() - t0
    return ChartResult(
        tree, goal_cost if tree else INF, stats, best,
        hyper if record_hyperedges else None,
    )


def _extract_tree(
    costs: SentenceCosts, best: dict[Sig, ParseItem], goal_sig: Sig
) -> AmDepTree:
    n = costs.n
    constant = [BOTTOM] * (n + 1)
    head = [0] * (n + 1)
    label: list[EdgeLabel] = [IGNORE] * (n + 1)

    def walk(sig: Sig) -> None:
        item = best[sig]
        back = item.back
        if back[0] == "init":
            constant[item.head] = back[1]
        elif back[0] == "skip":
            walk(back[1])
        else:
            _, lbl, lsig, rsig, side = back
            dep = best[rsig].head if side == "left" else best[lsig].head
            head[dep] = item.head
            label[dep] = lbl
            walk(lsig)
            walk(rsig)

    walk(goal_sig)
    root = best[goal_sig].head
    head[root] = 0
    label[root] = ROOT
    entries = tuple(
        TreeEntry(costs.forms[i - 1], constant[i], head[i], label[i])
        for i in range(1, n + 1)
    )
    return AmDepTree(entries)


def outside_costs(result: ChartResult) -> dict[Sig, float]:
    """Cheapest completion cost of each signature into a full parse.

    Requires chart_parse(..., record_hyperedges=True).  Returns, per
    signature, min over full parses using it of (parse cost - inside cost);
    signatures no full parse uses map to infinity.  Computed by a backward
    min-plus sweep over the recorded hyperedges, longest parent spans first,
    which is a topological order of the derivation hypergraph.
    """
    if result.hyperedges is None:
        raise ValueError("outside_costs needs chart_parse(..., record_hyperedges=True)")
    outside: dict[tuple, float] = {GOAL_SIG: 0.0}

    def span_len(sig: tuple) -> int:
        if sig == GOAL_SIG:
            return 10**9
        return sig[1] - sig[0]

    for parent, delta, children in sorted(
        result.hyperedges, key=lambda h: span_len(h[0]), reverse=True
    ):
        out_p = outside.get(parent, INF)
        if out_p == INF:
            continue
        total_inside = sum(result.best[c].cost for c in children)
        for c in children:
            cand = out_p + delta + (total_inside - result.best[c].cost)
            if cand < outside.get(c, INF):
                outside[c] = cand
    return {sig: cost for sig, cost in outside.items() if sig != GOAL_SIG}


def signature_count(result: ChartResult) -> int:
    return len(result.best)


def serialize_sig(sig: Sig) -> str:
    i, k, head, typ = sig
    return f"({i},{k}) h={head} t={serialize_type(typ)}"
