"""String motif patterns and network motif censuses.

A string motif is a token sequence: literal symbols, fixed-width wildcards
written ``x(N)``, and classes written ``{A,B,C}`` that match any one of the
listed symbols.  A network motif census buckets every k-vertex induced
subgraph of a graph by its isomorphism class (canonical form found by brute
force over the k! local permutations) and can compare the counts against a
degree-preserving rewiring null model.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import combinations, permutations

from .errors import CapExceeded, ObservementError
from .graphs import Digraph, Graph, _pack_graph6, _triangle_pairs

CENSUS_CAPS = {3: 200, 4: 60}
REWIRE_ATTEMPTS_PER_EDGE = 10


class MotifError(ObservementError):
    """Malformed pattern text or invalid motif operation."""


@dataclass(frozen=True)
class Literal:
    symbol: str


@dataclass(frozen=True)
class AnyOf:
    symbols: frozenset

    def __post_init__(self):
        object.__setattr__(self, "symbols", frozenset(self.symbols))
        if not self.symbols:
            raise MotifError("empty symbol class")


@dataclass(frozen=True)
class Wildcard:
    length: int

    def __post_init__(self):
        if self.length < 1:
            raise MotifError(f"wildcard length must be >= 1, got {self.length}")


def _merge_wildcards(tokens):
    merged = []
    for token in tokens:
        if isinstance(token, Wildcard) and merged and isinstance(merged[-1], Wildcard):
            merged[-1] = Wildcard(merged[-1].length + token.length)
        else:
            merged.append(token)
    return tuple(merged)


@dataclass(frozen=True)
class MotifPattern:
    """Canonical token sequence; adjacent wildcards are always merged."""

    tokens: tuple = ()

    def __post_init__(self):
        tokens = tuple(self.tokens)
        for a, b in zip(tokens, tokens[1:]):
            if isinstance(a, Wildcard) and isinstance(b, Wildcard):
                raise MotifError("consecutive wildcards must be merged into one")
        object.__setattr__(self, "tokens", tokens)

    @classmethod
    def from_tokens(cls, tokens) -> "MotifPattern":
        return cls(_merge_wildcards(tokens))

    @property
    def width(self) -> int:
        """Symbols consumed by a match: 1 per literal or class, N per wildcard."""
        return sum(t.length if isinstance(t, Wildcard) else 1 for t in self.tokens)


def parse_motif(text: str) -> MotifPattern:
    """Parse pattern text: letters are literals, x(N) a wildcard, {A,B} a class."""
    tokens = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch == "x" and text[i + 1:i + 2] == "(":
            end = text.find(")", i + 2)
            if end < 0:
                raise MotifError(f"position {i}: unterminated wildcard count")
            count_text = text[i + 2:end].strip()
            if not count_text.isdigit():
                raise MotifError(f"position {i}: bad wildcard count {count_text!r}")
            tokens.append(Wildcard(int(count_text)))
            i = end + 1
        elif ch == "{":
            end = text.find("}", i + 1)
            if end < 0:
                raise MotifError(f"position {i}: unterminated symbol class")
            symbols = [part.strip() for part in text[i + 1:end].split(",")]
            if symbols == [""]:
                raise MotifError(f"position {i}: empty symbol class")
            for symbol in symbols:
                if len(symbol) != 1 or not symbol.isalpha():
                    raise MotifError(f"position {i}: bad class symbol {symbol!r}")
            tokens.append(AnyOf(frozenset(symbols)))
            i = end + 1
        elif ch.isalpha():
            tokens.append(Literal(ch))
            i += 1
        else:
            raise MotifError(f"position {i}: unknown character {ch!r}")
    return MotifPattern.from_tokens(tokens)


def format_motif(pattern: MotifPattern) -> str:
    parts = []
    for token in pattern.tokens:
        if isinstance(token, Literal):
            parts.append(token.symbol)
        elif isinstance(token, Wildcard):
            parts.append(f"x({token.length})")
        else:
            parts.append("{" + ",".join(sorted(token.symbols)) + "}")
    return " ".join(parts)


def _match_at(tokens, s: str, start: int):
    i = start
    for token in tokens:
        if isinstance(token, Wildcard):
            i += token.length
            if i > len(s):
                return None
        elif i >= len(s):
            return None
        elif isinstance(token, Literal):
            if s[i] != token.symbol:
                return None
            i += 1
        else:
            if s[i] not in token.symbols:
                return None
            i += 1
    return i


def match_motif(pattern: MotifPattern, s: str, *, anchored: bool = False) -> list:
    """Offsets where the pattern matches, consuming exactly ``pattern.width`` symbols.

    Anchored mode reports [0] or nothing; search mode reports every offset i
    at which an anchored match of the remaining suffix succeeds.
    """
    if anchored:
        return [0] if _match_at(pattern.tokens, s, 0) is not None else []
    return [
        i for i in range(len(s) - pattern.width + 1)
        if _match_at(pattern.tokens, s, i) is not None
    ]


def derive_motif(sequences, class_cap: int) -> MotifPattern:
    """The column-wise pattern shared by equal-length sequences.

    Per column: a literal when all sequences agree, a class when the distinct
    symbols number at most ``class_cap``, otherwise a width-1 wildcard.
    Every input matches the result in anchored mode.
    """
    sequences = list(sequences)
    if len(sequences) < 2:
        raise MotifError(f"need at least 2 sequences to derive a motif, got {len(sequences)}")
    length = len(sequences[0])
    for s in sequences:
        if len(s) != length:
            raise MotifError(f"sequences differ in length: {length} vs {len(s)}")
    tokens = []
    for column in range(length):
        symbols = {s[column] for s in sequences}
        if len(symbols) == 1:
            tokens.append(Literal(next(iter(symbols))))
        elif len(symbols) <= class_cap:
            tokens.append(AnyOf(frozenset(symbols)))
        else:
            tokens.append(Wildcard(1))
    return MotifPattern.from_tokens(tokens)


# --- network motifs -------------------------------------------------------------


@dataclass(frozen=True)
class MotifCensus:
    """Counts per canonical k-vertex subgraph, plus optional null-model means."""

    k: int
    counts: dict
    background: dict | None = None

    def __post_init__(self):
        object.__setattr__(self, "counts", dict(self.counts))
        if self.background is not None:
            object.__setattr__(self, "background", dict(self.background))


def _local_mask(g, vertices) -> int:
    # Bit layout: undirected uses triangle order over the k local vertices;
    # directed uses row-major k*k including the diagonal (self-loops).
    k = len(vertices)
    mask = 0
    if isinstance(g, Graph):
        for bit, (i, j) in enumerate(_triangle_pairs(k)):
            if (min(vertices[i], vertices[j]), max(vertices[i], vertices[j])) in g.edges:
                mask |= 1 << bit
    else:
        for i in range(k):
            for j in range(k):
                if (vertices[i], vertices[j]) in g.arcs:
                    mask |= 1 << (i * k + j)
    return mask


def _bit_permutations(k: int, directed: bool):
    tables = []
    if directed:
        positions = {(i, j): i * k + j for i in range(k) for j in range(k)}
        pairs = list(positions)
    else:
        positions = {pair: bit for bit, pair in enumerate(_triangle_pairs(k))}
        pairs = list(positions)
    for perm in permutations(range(k)):
        table = []
        for i, j in pairs:
            a, b = perm[i], perm[j]
            if not directed:
                a, b = min(a, b), max(a, b)
            table.append((positions[(i, j)], positions[(a, b)]))
        tables.append(table)
    return tables


def _canonical_mask(mask: int, tables) -> int:
    best = None
    for table in tables:
        out = 0
        for src, dst in table:
            if mask >> src & 1:
                out |= 1 << dst
        if best is None or out < best:
            best = out
    return best


def _mask_identifier(mask: int, k: int, directed: bool) -> str:
    if directed:
        bits = k * k
        return f"d{k}:" + format(mask, f"0{bits}b")
    bit_count = k * (k - 1) // 2
    bits = [(mask >> b) & 1 for b in range(bit_count)]
    return _pack_graph6(k, bits)


def count_network_motifs(g, k: int, caps: dict | None = None) -> MotifCensus:
    """Bucket all k-vertex induced subgraphs by canonical form.

    Counts sum to C(n, k) and are invariant under vertex relabeling.
    """
    caps = caps or CENSUS_CAPS
    if k not in caps:
        raise MotifError(f"motif size must be one of {sorted(caps)}, got {k}")
    if g.n > caps[k]:
        raise CapExceeded(f"census for k={k} capped at {caps[k]} vertices, got {g.n}")
    directed = isinstance(g, Digraph)
    tables = _bit_permutations(k, directed)
    canonical_cache: dict[int, int] = {}
    counts: dict[str, int] = {}
    for vertices in combinations(range(g.n), k):
        mask = _local_mask(g, vertices)
        canonical = canonical_cache.get(mask)
        if canonical is None:
            canonical = _canonical_mask(mask, tables)
            canonical_cache[mask] = canonical
        identifier = _mask_identifier(canonical, k, directed)
        counts[identifier] = counts.get(identifier, 0) + 1
    return MotifCensus(k, counts)


def _rewire_once(pairs: list, present: set, rng: random.Random, directed: bool) -> None:
    i, j = rng.randrange(len(pairs)), rng.randrange(len(pairs))
    if i == j:
        return
    a, b = pairs[i]
    c, d = pairs[j]
    if not directed and rng.random() < 0.5:
        c, d = d, c
    e1, e2 = (a, d), (c, b)
    if not directed:
        e1 = (min(e1), max(e1))
        e2 = (min(e2), max(e2))
    if a == d or c == b or e1 == e2 or e1 in present or e2 in present:
        return
    present.discard(pairs[i])
    present.discard(pairs[j])
    present.update((e1, e2))
    pairs[i], pairs[j] = e1, e2


def _rewired_copy(g, rng: random.Random):
    directed = isinstance(g, Digraph)
    pairs = sorted(g.arcs if directed else g.edges)
    present = set(pairs)
    for _ in range(REWIRE_ATTEMPTS_PER_EDGE * len(pairs)):
        _rewire_once(pairs, present, rng, directed)
    if directed:
        return Digraph(g.n, frozenset(present), allow_self_loops=g.allow_self_loops)
    return Graph(g.n, frozenset(present))


def motif_significance(g, k: int, rewires: int, seed) -> MotifCensus:
    """Census with a null-model background: mean counts over rewired samples.

    Each sample is a fresh degree-preserving rewiring of the input (repeated
    double edge swaps, 10 attempts per edge).  Zero requested samples, or a
    graph too small to rewire, leaves the background unavailable (None).
    """
    observed = count_network_motifs(g, k)
    edge_count = len(g.arcs if isinstance(g, Digraph) else g.edges)
    if edge_count < 1:
        raise MotifError("motif significance needs at least one edge")
    if rewires < 1 or edge_count < 2:
        return MotifCensus(k, observed.counts, None)
    rng = random.Random(seed)
    totals: dict[str, float] = {}
    for _ in range(rewires):
        sample = count_network_motifs(_rewired_copy(g, rng), k)
        for identifier, count in sample.counts.items():
            totals[identifier] = totals.get(identifier, 0.0) + count
    background = {identifier: total / rewires for identifier, total in sorted(totals.items())}
    return MotifCensus(k, observed.counts, background)
