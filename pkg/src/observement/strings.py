"""Restricted BNF grammars over single-character alphabets.

Supports concatenation, alternation with ``|``, and one-or-more repetition
with a postfix ``+``.  That is enough for path languages, event-recording
languages, and body-plan templates, while keeping membership decidable by a
memoized top-down parse: alternatives may not be empty, so every item
consumes at least one symbol, and left recursion is rejected up front.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass

from .errors import CapExceeded, ObservementError

DEFAULT_GENERATE_CAP = 100_000


class GrammarError(ObservementError):
    """Grammar source is malformed or violates the restrictions."""


class SemanticsError(ObservementError):
    """Event semantics are not a bijection or an event key is unknown."""


@dataclass(frozen=True)
class Terminal:
    symbol: str


@dataclass(frozen=True)
class NonTerminal:
    name: str


@dataclass(frozen=True)
class OneOrMore:
    item: "Terminal | NonTerminal"


@dataclass(frozen=True)
class Grammar:
    terminals: frozenset
    nonterminals: frozenset
    rules: dict  # name -> tuple of alternatives, each a tuple of items
    start: str


@dataclass(frozen=True)
class EventSemantics:
    """Invertible assignment of alphabet symbols to event keys."""

    key_to_symbol: dict

    def __post_init__(self):
        object.__setattr__(self, "key_to_symbol", dict(self.key_to_symbol))
        symbols = list(self.key_to_symbol.values())
        if len(set(symbols)) != len(symbols):
            raise SemanticsError("event semantics must be a bijection; duplicate symbols found")


# --- grammar source ---------------------------------------------------------
#
#   <name>                        a solitary nonterminal line designates the start
#   <name> -> items | items ...   rule; repeated left-hand sides merge alternatives
#
# Items: <name> references a nonterminal; a bare or quoted character is a
# terminal; a postfix + makes the preceding item one-or-more.  Lines whose
# first character is '#' are comments.


def _tokenize_line(line: str, lineno: int) -> list[tuple[str, str, int]]:
    tokens = []
    i = 0
    while i < len(line):
        ch = line[i]
        col = i + 1
        if ch.isspace():
            i += 1
        elif ch == "<":
            end = line.find(">", i + 1)
            if end < 0:
                raise GrammarError(f"line {lineno}, col {col}: missing '>'")
            name = line[i + 1:end].strip()
            if not name:
                raise GrammarError(f"line {lineno}, col {col}: empty nonterminal name")
            tokens.append(("NAME", name, col))
            i = end + 1
        elif ch in "'\"":
            end = line.find(ch, i + 1)
            if end < 0:
                raise GrammarError(f"line {lineno}, col {col}: unterminated quote")
            sym = line[i + 1:end]
            if len(sym) != 1:
                raise GrammarError(
                    f"line {lineno}, col {col}: quoted terminal must be one character, got {sym!r}"
                )
            tokens.append(("SYM", sym, col))
            i = end + 1
        elif ch == "-" and line[i:i + 2] == "->":
            tokens.append(("ARROW", "->", col))
            i += 2
        elif ch == "|":
            tokens.append(("PIPE", ch, col))
            i += 1
        elif ch == "+":
            tokens.append(("PLUS", ch, col))
            i += 1
        else:
            tokens.append(("SYM", ch, col))
            i += 1
    return tokens


def _parse_alternatives(tokens, lineno: int):
    alternatives = []
    items: list = []
    for kind, value, col in tokens:
        if kind == "PIPE":
            if not items:
                raise GrammarError(f"line {lineno}, col {col}: empty alternative")
            alternatives.append(tuple(items))
            items = []
        elif kind == "NAME":
            items.append(NonTerminal(value))
        elif kind == "SYM":
            items.append(Terminal(value))
        elif kind == "PLUS":
            if not items:
                raise GrammarError(f"line {lineno}, col {col}: '+' needs a preceding item")
            if isinstance(items[-1], OneOrMore):
                raise GrammarError(f"line {lineno}, col {col}: repeated '+' on one item")
            items[-1] = OneOrMore(items[-1])
        else:  # pragma: no cover - tokenizer emits no other kinds
            raise GrammarError(f"line {lineno}, col {col}: unexpected token {value!r}")
    if not items:
        raise GrammarError(f"line {lineno}: empty alternative")
    alternatives.append(tuple(items))
    return alternatives


def parse_grammar(text: str) -> Grammar:
    rules: dict[str, list] = {}
    order: list[str] = []
    start = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = _tokenize_line(raw, lineno)
        if len(tokens) == 1 and tokens[0][0] == "NAME":
            if start is not None:
                raise GrammarError(f"line {lineno}: start symbol designated twice")
            start = tokens[0][1]
            continue
        if len(tokens) < 2 or tokens[0][0] != "NAME" or tokens[1][0] != "ARROW":
            raise GrammarError(f"line {lineno}: expected '<name> -> ...'")
        lhs = tokens[0][1]
        alternatives = _parse_alternatives(tokens[2:], lineno)
        rules.setdefault(lhs, [])
        if lhs not in order:
            order.append(lhs)
        for alt in alternatives:
            if alt not in rules[lhs]:
                rules[lhs].append(alt)
    if not rules:
        raise GrammarError("grammar has no rules")
    nonterminals = frozenset(rules)
    terminals = set()

    def walk(item):
        if isinstance(item, OneOrMore):
            walk(item.item)
        elif isinstance(item, Terminal):
            terminals.add(item.symbol)
        else:
            if item.name not in nonterminals:
                raise GrammarError(f"undefined nonterminal <{item.name}>")

    for alts in rules.values():
        for alt in alts:
            for item in alt:
                walk(item)
    clash = terminals & nonterminals
    if clash:
        raise GrammarError(
            f"names used as both terminal and nonterminal: {sorted(clash)}"
        )
    if start is None:
        start = order[0]
    elif start not in nonterminals:
        raise GrammarError(f"undefined nonterminal <{start}>")
    grammar = Grammar(
        terminals=frozenset(terminals),
        nonterminals=nonterminals,
        rules={name: tuple(alts) for name, alts in rules.items()},
        start=start,
    )
    _reject_left_recursion(grammar)
    return grammar


def _leftmost(item):
    return item.item if isinstance(item, OneOrMore) else item


def _reject_left_recursion(grammar: Grammar) -> None:
    # Leftmost-reachability graph over nonterminals; a cycle would make the
    # memoized parser recurse without consuming input.
    graph = {
        name: {
            _leftmost(alt[0]).name
            for alt in alts
            if isinstance(_leftmost(alt[0]), NonTerminal)
        }
        for name, alts in grammar.rules.items()
    }
    state: dict[str, int] = {}

    def visit(name, trail):
        state[name] = 1
        for nxt in sorted(graph[name]):
            if state.get(nxt) == 1:
                cycle = trail[trail.index(nxt):] + [nxt] if nxt in trail else [name, nxt]
                raise GrammarError(
                    "left recursion through " + " -> ".join(f"<{n}>" for n in cycle)
                )
            if nxt not in state:
                visit(nxt, trail + [nxt])
        state[name] = 2

    for name in sorted(graph):
        if name not in state:
            visit(name, [name])


# --- membership -------------------------------------------------------------


def membership(grammar: Grammar, s: str) -> bool:
    """True iff ``s`` is derivable from the start symbol.

    Strings using symbols outside the alphabet are simply not members.
    """
    if any(ch not in grammar.terminals for ch in s):
        return False
    memo: dict = {}
    return len(s) in _nonterminal_ends(grammar, s, grammar.start, 0, memo)


def _nonterminal_ends(grammar, s, name, pos, memo):
    key = (name, pos)
    if key not in memo:
        ends = set()
        for alt in grammar.rules[name]:
            ends |= _sequence_ends(grammar, s, alt, pos, memo)
        memo[key] = frozenset(ends)
    return memo[key]


def _sequence_ends(grammar, s, items, pos, memo):
    positions = {pos}
    for item in items:
        nxt = set()
        for q in positions:
            nxt |= _item_ends(grammar, s, item, q, memo)
        if not nxt:
            return frozenset()
        positions = nxt
    return frozenset(positions)


def _item_ends(grammar, s, item, pos, memo):
    if isinstance(item, Terminal):
        if pos < len(s) and s[pos] == item.symbol:
            return frozenset((pos + 1,))
        return frozenset()
    if isinstance(item, NonTerminal):
        return _nonterminal_ends(grammar, s, item.name, pos, memo)
    # One or more repetitions; every application consumes at least one symbol.
    ends: set = set()
    frontier = {pos}
    while frontier:
        reached = set()
        for q in frontier:
            reached |= _item_ends(grammar, s, item.item, q, memo)
        frontier = reached - ends
        ends |= frontier
    return frozenset(ends)


# --- generation -------------------------------------------------------------


def _min_lengths(grammar: Grammar) -> dict:
    lengths = {name: math.inf for name in grammar.nonterminals}

    def item_min(item):
        if isinstance(item, Terminal):
            return 1
        if isinstance(item, NonTerminal):
            return lengths[item.name]
        return item_min(item.item)

    changed = True
    while changed:
        changed = False
        for name, alts in grammar.rules.items():
            for alt in alts:
                total = sum(item_min(item) for item in alt)
                if total < lengths[name]:
                    lengths[name] = total
                    changed = True
    return lengths


def generate(grammar: Grammar, max_len: int, cap: int = DEFAULT_GENERATE_CAP) -> list:
    """All derivable strings of length at most ``max_len``, sorted by (length, text).

    Breadth-first expansion of sentential forms with duplicate pruning; forms
    whose minimum completion length exceeds ``max_len`` are dropped.  Raises
    CapExceeded when more than ``cap`` distinct strings would be produced.
    """
    if max_len < 0:
        raise ValueError("max_len must be >= 0")
    min_lengths = _min_lengths(grammar)

    def item_min(item):
        if isinstance(item, Terminal):
            return 1
        if isinstance(item, NonTerminal):
            return min_lengths[item.name]
        return item_min(item.item)

    def lower_bound(form):
        return sum(item_min(item) for item in form)

    results: set = set()
    start_form = (NonTerminal(grammar.start),)
    if lower_bound(start_form) > max_len:
        return []
    seen = {start_form}
    queue = deque([start_form])
    form_cap = max(cap * 10, 1_000_000)
    while queue:
        form = queue.popleft()
        index = next((i for i, item in enumerate(form) if not isinstance(item, Terminal)), None)
        if index is None:
            results.add("".join(item.symbol for item in form))
            if len(results) > cap:
                raise CapExceeded(f"generation produced more than {cap} strings")
            continue
        head, item, tail = form[:index], form[index], form[index + 1:]
        if isinstance(item, NonTerminal):
            successors = [head + alt + tail for alt in grammar.rules[item.name]]
        else:
            successors = [
                head + (item.item,) + tail,
                head + (item.item, item) + tail,
            ]
        for nxt in successors:
            if nxt not in seen and lower_bound(nxt) <= max_len:
                seen.add(nxt)
                if len(seen) > form_cap:
                    raise CapExceeded(f"generation explored more than {form_cap} forms")
                queue.append(nxt)
    return sorted(results, key=lambda t: (len(t), t))


# --- event recording --------------------------------------------------------


def record_behavior(events, semantics: EventSemantics) -> str:
    """Turn an ordered sequence of event keys into its symbol string.

    Position i of the output is the symbol for events[i], so recording
    commutes with concatenation of event sequences.
    """
    out = []
    for index, key in enumerate(events):
        try:
            out.append(semantics.key_to_symbol[key])
        except KeyError:
            raise SemanticsError(f"unknown event key {key!r} at index {index}") from None
    return "".join(out)


def relabel_terminals(grammar: Grammar, mapping: dict) -> Grammar:
    """Rewrite every terminal through a bijection; the language relabels with it."""
    if set(mapping) != set(grammar.terminals):
        raise GrammarError("relabeling must cover exactly the grammar's terminals")
    if len(set(mapping.values())) != len(mapping):
        raise GrammarError("relabeling must be a bijection")

    def rewrite(item):
        if isinstance(item, Terminal):
            return Terminal(mapping[item.symbol])
        if isinstance(item, OneOrMore):
            return OneOrMore(rewrite(item.item))
        return item

    return Grammar(
        terminals=frozenset(mapping.values()),
        nonterminals=grammar.nonterminals,
        rules={
            name: tuple(tuple(rewrite(i) for i in alt) for alt in alts)
            for name, alts in grammar.rules.items()
        },
        start=grammar.start,
    )
