"""Lexicons: named graph constants plus the type and label inventories.

Decoding needs a closed lexicon:

  1. every type in omega is realized by at least one constant,
  2. omega is closed under requests,
  3. [beta] is in omega for every mod_beta label,
  4. app_alpha is a label for every source alpha occurring in the constants.

validate_closure reports violations; augment_closure repairs them by closing
omega, adding labels, and synthesizing star-shaped constants for unrealized
types (root labeled _synth, one opK edge per source of the type).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .graphs import AsGraph, GraphNode, graph_type
from .trees import BOTTOM, EdgeLabel, IGNORE, ROOT, app, mod
from .types import EMPTY_TYPE, Type, request


@dataclass
class ClosureViolation:
    assumption: int  # 1..4 as in the module docstring
    witness: str

    def __str__(self) -> str:
        return f"assumption {self.assumption}: {self.witness}"


@dataclass
class ClosureReport:
    violations: list[ClosureViolation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


@dataclass
class Lexicon:
    constants: dict[str, AsGraph]
    omega: frozenset[Type]
    labels: frozenset[EdgeLabel]
    name: str = "lexicon"

    def __post_init__(self) -> None:
        if BOTTOM in self.constants:
            raise ValueError(f"{BOTTOM} is reserved and cannot name a constant")
        self._types = {name: graph_type(g) for name, g in self.constants.items()}
        # omega always covers the realized types
        self.omega = frozenset(self.omega) | frozenset(self._types.values())
        self.labels = frozenset(self.labels) | {ROOT, IGNORE}

    def type_of(self, constant: str) -> Type:
        return self._types[constant]

    def constant_names(self) -> list[str]:
        return sorted(self.constants)

    def sources(self) -> frozenset[str]:
        """All source names occurring in the constants (markings and their
        request annotations, i.e. the nodes of the realized types)."""
        out: set[str] = set()
        for t in self._types.values():
            out |= t.nodes
        return frozenset(out)

    def app_sources(self) -> list[str]:
        return sorted(l.source for l in self.labels if l.kind == "app")

    def mod_sources(self) -> list[str]:
        return sorted(l.source for l in self.labels if l.kind == "mod")


def constants_of_type(lexicon: Lexicon, t: Type) -> list[str]:
    """Sorted names of constants realizing t.  t must be a member of omega."""
    if t not in lexicon.omega:
        raise KeyError(f"{t} is not in the lexicon's type inventory")
    return sorted(name for name in lexicon.constants if lexicon.type_of(name) == t)


def validate_closure(lexicon: Lexicon) -> ClosureReport:
    report = ClosureReport()
    realized = {lexicon.type_of(name) for name in lexicon.constants}
    for t in sorted(lexicon.omega, key=str):
        if t not in realized:
            report.violations.append(
                ClosureViolation(1, f"type {t} has no realizing constant")
            )
    for t in sorted(lexicon.omega, key=str):
        for node in sorted(t.nodes):
            req = request(t, node)
            if req not in lexicon.omega:
                report.violations.append(
                    ClosureViolation(2, f"request {req} of {node} in {t} missing from omega")
                )
    for label in sorted(lexicon.labels, key=str):
        if label.kind == "mod":
            singleton = Type(frozenset({label.source}), frozenset())
            if singleton not in lexicon.omega:
                report.violations.append(
                    ClosureViolation(3, f"[{label.source}] missing from omega for {label}")
                )
    have_app = {l.source for l in lexicon.labels if l.kind == "app"}
    for source in sorted(lexicon.sources()):
        if source not in have_app:
            report.violations.append(
                ClosureViolation(4, f"no APP_{source} label for source {source}")
            )
    return report


def _close_omega(omega: frozenset[Type], mod_sources) -> frozenset[Type]:
    out = set(omega)
    out.add(EMPTY_TYPE)
    for beta in mod_sources:
        out.add(Type(frozenset({beta}), frozenset()))
    work = list(out)
    while work:
        t = work.pop()
        for node in t.nodes:
            req = request(t, node)
            if req not in out:
                out.add(req)
                work.append(req)
    return frozenset(out)


def _synthesize(t: Type, index: int) -> AsGraph:
    """A star graph realizing t: _synth root with one placeholder per source."""
    nodes = [GraphNode(f"r{index}", label="_synth")]
    edges = set()
    for k, name in enumerate(sorted(t.nodes), start=1):
        nodes.append(GraphNode(f"s{k}", source=name, request=request(t, name)))
        edges.add((f"r{index}", f"op{k}", f"s{k}"))
    return AsGraph(tuple(nodes), frozenset(edges), f"r{index}")


def augment_closure(lexicon: Lexicon) -> Lexicon:
    """The least closed lexicon extending the input.

    Closes omega under requests (plus the empty type and every mod label's
    singleton), synthesizes a constant named _synth_<k> for each unrealized
    type in canonical order, and adds the missing app labels.
    """
    omega = _close_omega(lexicon.omega, lexicon.mod_sources())
    constants = dict(lexicon.constants)
    realized = {graph_type(g) for g in constants.values()}
    for k, t in enumerate(sorted(omega - realized, key=str), start=1):
        name = f"_synth_{k}"
        while name in constants:
            name += "x"
        constants[name] = _synthesize(t, k)
    labels = set(lexicon.labels)
    for t in omega:
        for source in t.nodes:
            labels.add(app(source))
    return Lexicon(constants, omega, frozenset(labels), name=lexicon.name)
