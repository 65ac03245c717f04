"""Genealogical digraphs: parent-to-child arcs plus symmetric partner edges.

Graphs are assembled with the constructors below (single persons, joins,
edge additions, disjoint unions) and are immutable afterwards, so completed
graphs can be queried concurrently.  Parent arcs must stay acyclic: nobody is
their own ancestor.  Partner edges are stored as unordered pairs to reflect
the symmetry of the relationship.
"""

from __future__ import annotations

import shlex
from dataclasses import dataclass, field

from .errors import ObservementError

RELATIONS = (
    "is_child_of",
    "is_parent_of",
    "partnered",
    "is_related_to",
    "is_descendant_of",
    "is_predecessor_of",
)


class KinshipError(ObservementError):
    """Invariant violation or malformed kinship query/file."""


@dataclass(frozen=True)
class KinshipGraph:
    persons: frozenset
    parent_arcs: frozenset = frozenset()
    partner_edges: frozenset = frozenset()
    labels: dict = field(default_factory=dict)
    enforce_parent_limit: bool = field(default=True, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "persons", frozenset(self.persons))
        object.__setattr__(self, "parent_arcs", frozenset(tuple(a) for a in self.parent_arcs))
        object.__setattr__(
            self, "partner_edges", frozenset(frozenset(e) for e in self.partner_edges)
        )
        object.__setattr__(self, "labels", dict(self.labels))
        for parent, child in self.parent_arcs:
            if parent not in self.persons or child not in self.persons:
                raise KinshipError(f"arc ({parent},{child}) references an unknown person")
            if parent == child:
                raise KinshipError(f"{parent!r} cannot be their own parent")
        for edge in self.partner_edges:
            if len(edge) != 2:
                raise KinshipError(f"partner edge {set(edge)} must join two distinct persons")
            if not edge <= self.persons:
                raise KinshipError(f"partner edge {set(edge)} references an unknown person")
            pair = tuple(edge)
            if (pair[0], pair[1]) in self.parent_arcs or (pair[1], pair[0]) in self.parent_arcs:
                raise KinshipError(
                    f"{set(edge)} cannot be both partners and parent/child"
                )
        for person in self.labels:
            if person not in self.persons:
                raise KinshipError(f"label for unknown person {person!r}")
        if self.enforce_parent_limit:
            parent_count: dict = {}
            for _, child in self.parent_arcs:
                parent_count[child] = parent_count.get(child, 0) + 1
                if parent_count[child] > 2:
                    raise KinshipError(f"{child!r} has more than two parents")
        _assert_acyclic(self.parent_arcs)


def _assert_acyclic(arcs) -> None:
    children: dict = {}
    for parent, child in arcs:
        children.setdefault(parent, []).append(child)
    state: dict = {}

    def visit(v, trail):
        state[v] = 1
        for w in children.get(v, ()):
            if state.get(w) == 1:
                cycle = trail[trail.index(w):] + [w]
                raise KinshipError("parent arcs form a cycle: " + " -> ".join(cycle))
            if w not in state:
                visit(w, trail + [w])
        state[v] = 2

    for v in sorted(children):
        if v not in state:
            visit(v, [v])


# --- constructors -----------------------------------------------------------


def singleton(name: str, label: str | None = None) -> KinshipGraph:
    """A single person and no edges."""
    labels = {name: label} if label is not None else {}
    return KinshipGraph(frozenset({name}), labels=labels)


def disjoint_union(g1: KinshipGraph, g2: KinshipGraph) -> KinshipGraph:
    shared = g1.persons & g2.persons
    if shared:
        raise KinshipError(f"disjoint union requires distinct persons; shared: {sorted(shared)}")
    return KinshipGraph(
        g1.persons | g2.persons,
        g1.parent_arcs | g2.parent_arcs,
        g1.partner_edges | g2.partner_edges,
        {**g1.labels, **g2.labels},
        enforce_parent_limit=g1.enforce_parent_limit and g2.enforce_parent_limit,
    )


def add_parent_arc(g: KinshipGraph, parent: str, child: str) -> KinshipGraph:
    for person in (parent, child):
        if person not in g.persons:
            raise KinshipError(f"unknown person {person!r}")
    if (parent, child) in g.parent_arcs:
        raise KinshipError(f"duplicate arc ({parent},{child})")
    return KinshipGraph(
        g.persons, g.parent_arcs | {(parent, child)}, g.partner_edges, g.labels,
        enforce_parent_limit=g.enforce_parent_limit,
    )


def add_partnership(g: KinshipGraph, a: str, b: str) -> KinshipGraph:
    for person in (a, b):
        if person not in g.persons:
            raise KinshipError(f"unknown person {person!r}")
    if frozenset({a, b}) in g.partner_edges:
        raise KinshipError(f"duplicate partner edge {{{a},{b}}}")
    return KinshipGraph(
        g.persons, g.parent_arcs, g.partner_edges | {frozenset({a, b})}, g.labels,
        enforce_parent_limit=g.enforce_parent_limit,
    )


def join_with_parent_arc(g1: KinshipGraph, parent: str, g2: KinshipGraph,
                         child: str) -> KinshipGraph:
    """Connect two separate graphs by a parent-to-child arc."""
    if parent not in g1.persons:
        raise KinshipError(f"unknown person {parent!r} in first graph")
    if child not in g2.persons:
        raise KinshipError(f"unknown person {child!r} in second graph")
    return add_parent_arc(disjoint_union(g1, g2), parent, child)


def join_with_partnership(g1: KinshipGraph, a: str, g2: KinshipGraph, b: str) -> KinshipGraph:
    """Connect two separate graphs by a partner edge."""
    if a not in g1.persons:
        raise KinshipError(f"unknown person {a!r} in first graph")
    if b not in g2.persons:
        raise KinshipError(f"unknown person {b!r} in second graph")
    return add_partnership(disjoint_union(g1, g2), a, b)


def build(operations, enforce_parent_limit: bool = True) -> KinshipGraph:
    """Assemble a graph from a sequence of operations.

    Operations: ``("person", name)`` or ``("person", name, label)`` declares
    a person; ``("arc", parent, child)`` adds a parent arc between declared
    persons; ``("partner", a, b)`` adds a partner edge.  The result is the
    disjoint union of whatever components the operations leave behind.
    """
    persons: set = set()
    labels: dict = {}
    arcs: set = set()
    partners: set = set()
    for op in operations:
        kind = op[0]
        if kind == "person":
            name = op[1]
            if name in persons:
                raise KinshipError(f"person {name!r} declared twice")
            persons.add(name)
            if len(op) > 2 and op[2] is not None:
                labels[name] = op[2]
        elif kind in ("arc", "partner"):
            _, a, b = op
            for person in (a, b):
                if person not in persons:
                    raise KinshipError(f"unknown person {person!r} in {kind} operation")
            if kind == "arc":
                if (a, b) in arcs:
                    raise KinshipError(f"duplicate arc ({a},{b})")
                arcs.add((a, b))
            else:
                if frozenset({a, b}) in partners:
                    raise KinshipError(f"duplicate partner edge {{{a},{b}}}")
                partners.add(frozenset({a, b}))
        else:
            raise KinshipError(f"unknown operation {kind!r}")
    return KinshipGraph(frozenset(persons), frozenset(arcs), frozenset(partners), labels,
                        enforce_parent_limit=enforce_parent_limit)


# --- queries ----------------------------------------------------------------


def _check_person(g: KinshipGraph, person: str) -> None:
    if person not in g.persons:
        raise KinshipError(f"unknown person {person!r}")


def _children_map(g: KinshipGraph) -> dict:
    out: dict = {}
    for parent, child in g.parent_arcs:
        out.setdefault(parent, set()).add(child)
    return out


def _reachable(start: str, neighbours: dict) -> set:
    seen = {start}
    frontier = [start]
    while frontier:
        v = frontier.pop()
        for w in neighbours.get(v, ()):
            if w not in seen:
                seen.add(w)
                frontier.append(w)
    return seen


def descendants(g: KinshipGraph, person: str) -> set:
    """Everyone reachable from ``person`` along parent-to-child arcs, exclusive."""
    _check_person(g, person)
    return _reachable(person, _children_map(g)) - {person}


def ancestors(g: KinshipGraph, person: str) -> set:
    """Everyone from whom ``person`` is reachable along parent-to-child arcs, exclusive."""
    _check_person(g, person)
    parents: dict = {}
    for parent, child in g.parent_arcs:
        parents.setdefault(child, set()).add(parent)
    return _reachable(person, parents) - {person}


def query(g: KinshipGraph, relation: str, u: str, v: str) -> bool:
    """Evaluate one of the six kinship relations between two persons.

    is_descendant_of(u, v) holds when u can be reached from v along
    parent-to-child arcs; is_predecessor_of is its converse.  is_related_to
    is connectivity over both edge kinds, ignoring direction, and counts a
    person as related to themselves.
    """
    _check_person(g, u)
    _check_person(g, v)
    if relation == "is_child_of":
        return (v, u) in g.parent_arcs
    if relation == "is_parent_of":
        return (u, v) in g.parent_arcs
    if relation == "partnered":
        return frozenset({u, v}) in g.partner_edges
    if relation == "is_related_to":
        if u == v:
            return True
        neighbours: dict = {}
        for parent, child in g.parent_arcs:
            neighbours.setdefault(parent, set()).add(child)
            neighbours.setdefault(child, set()).add(parent)
        for edge in g.partner_edges:
            a, b = tuple(edge)
            neighbours.setdefault(a, set()).add(b)
            neighbours.setdefault(b, set()).add(a)
        return v in _reachable(u, neighbours)
    if relation == "is_descendant_of":
        return u != v and u in _reachable(v, _children_map(g))
    if relation == "is_predecessor_of":
        return query(g, "is_descendant_of", v, u)
    raise KinshipError(f"unknown relation {relation!r}; choose from {', '.join(RELATIONS)}")


def to_indented_text(g: KinshipGraph, root: str) -> str:
    """Plain-text dump of the subtree below ``root``, two spaces per generation."""
    _check_person(g, root)
    children = _children_map(g)
    lines: list[str] = []

    def walk(person, depth):
        label = g.labels.get(person)
        text = f"{person} ({label})" if label else person
        lines.append("  " * depth + text)
        for child in sorted(children.get(person, ())):
            walk(child, depth + 1)

    walk(root, 0)
    return "\n".join(lines) + "\n"


# --- file format --------------------------------------------------------------
#
#   person NAME ["Label text"]
#   PARENT -> CHILD
#   A <-> B
#
# '#' lines are comments.  Persons first mentioned on an edge line are
# declared implicitly.


def parse_kinship_file(text: str) -> KinshipGraph:
    operations: list = []
    declared: set = set()

    def ensure(name):
        if name not in declared:
            declared.add(name)
            operations.append(("person", name))

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            tokens = shlex.split(line)
        except ValueError as exc:
            raise KinshipError(f"line {lineno}: {exc}") from None
        if tokens[0] == "person":
            if len(tokens) not in (2, 3):
                raise KinshipError(f"line {lineno}: expected 'person NAME [\"label\"]'")
            name = tokens[1]
            if name in declared:
                raise KinshipError(f"line {lineno}: person {name!r} declared twice")
            declared.add(name)
            operations.append(("person", name, tokens[2] if len(tokens) == 3 else None))
        elif len(tokens) == 3 and tokens[1] == "->":
            ensure(tokens[0])
            ensure(tokens[2])
            operations.append(("arc", tokens[0], tokens[2]))
        elif len(tokens) == 3 and tokens[1] == "<->":
            ensure(tokens[0])
            ensure(tokens[2])
            operations.append(("partner", tokens[0], tokens[2]))
        else:
            raise KinshipError(f"line {lineno}: expected a person, '->', or '<->' line")
    try:
        return build(operations)
    except KinshipError as exc:
        raise KinshipError(f"kinship file invalid: {exc}") from exc


def format_kinship_file(g: KinshipGraph) -> str:
    lines = []
    for person in sorted(g.persons):
        label = g.labels.get(person)
        if label is not None:
            lines.append(f'person {person} "{label}"')
        else:
            lines.append(f"person {person}")
    for parent, child in sorted(g.parent_arcs):
        lines.append(f"{parent} -> {child}")
    for edge in sorted(map(sorted, g.partner_edges)):
        lines.append(f"{edge[0]} <-> {edge[1]}")
    return "\n".join(lines) + "\n"
