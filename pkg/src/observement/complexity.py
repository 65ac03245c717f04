"""Descriptive complexity through a fixed representation frame.

A graph becomes a text string (its graph6 code, optionally minimized over
vertex permutations so isomorphic graphs agree), and the string's length is
the total complexity within that frame.  LZW compression then splits the
description into a patterned part (the dictionary entries it builds) and a
residual part (the code stream): dictionary mass is reported as primary
order, code count as secondary order.  No attempt is made to approximate a
minimal description; every number is relative to this frame.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations

from .errors import CapExceeded, ObservementError
from .graphs import Graph, _pack_graph6, _triangle_pairs, encode_graph6

CANONICAL_CAP = 8


class LzwError(ObservementError):
    """Symbol outside the alphabet, or a malformed code stream."""


@dataclass(frozen=True)
class LzwOutput:
    """New dictionary entries (in creation order) and the emitted code stream."""

    dictionary: tuple
    codes: tuple

    def __post_init__(self):
        object.__setattr__(self, "dictionary", tuple(self.dictionary))
        object.__setattr__(self, "codes", tuple(self.codes))


@dataclass(frozen=True)
class ComplexityReport:
    """Frame-relative complexity: total string length, pattern mass, residual code count."""

    total: int
    primary_order: int
    secondary_order: int


def _check_alphabet(alphabet) -> list:
    symbols = list(alphabet)
    if not symbols:
        raise LzwError("alphabet must be non-empty")
    if len(set(symbols)) != len(symbols):
        raise LzwError("alphabet contains duplicate symbols")
    for symbol in symbols:
        if not isinstance(symbol, str) or len(symbol) != 1:
            raise LzwError(f"alphabet symbols must be single characters, got {symbol!r}")
    return symbols


def lzw_compress(s: str, alphabet) -> LzwOutput:
    """Standard LZW with the dictionary seeded by the alphabet, in order.

    Longest known prefix is emitted each step and extended by the following
    symbol to form the next dictionary entry.  Fully deterministic.
    """
    symbols = _check_alphabet(alphabet)
    table = {symbol: code for code, symbol in enumerate(symbols)}
    for i, ch in enumerate(s):
        if ch not in table:
            raise LzwError(f"symbol {ch!r} at position {i} is outside the alphabet")
    codes = []
    new_entries = []
    current = ""
    for ch in s:
        candidate = current + ch
        if candidate in table:
            current = candidate
        else:
            codes.append(table[current])
            table[candidate] = len(table)
            new_entries.append(candidate)
            current = ch
    if current:
        codes.append(table[current])
    return LzwOutput(tuple(new_entries), tuple(codes))


def lzw_decompress(compressed, alphabet) -> str:
    """Exact inverse of lzw_compress; accepts an LzwOutput or a bare code sequence.

    Handles the self-referential case where a code names the entry being
    built (emitted string plus its own first symbol).
    """
    codes = compressed.codes if isinstance(compressed, LzwOutput) else tuple(compressed)
    entries = list(_check_alphabet(alphabet))
    out = []
    previous = None
    for code in codes:
        if 0 <= code < len(entries):
            entry = entries[code]
        elif code == len(entries) and previous is not None:
            entry = previous + previous[0]
        else:
            raise LzwError(f"code {code} out of range for dictionary of size {len(entries)}")
        out.append(entry)
        if previous is not None:
            entries.append(previous + entry[0])
        previous = entry
    return "".join(out)


def canonical_string(g: Graph, *, canonical: bool = True) -> str:
    """The graph's text description: graph6 in given vertex order, or the
    lexicographically smallest graph6 code over all vertex permutations.

    The canonical form is isomorphism-invariant and found by brute force, so
    it is capped at 8 vertices.
    """
    if not canonical:
        return encode_graph6(g)
    if g.n > CANONICAL_CAP:
        raise CapExceeded(f"canonical form capped at {CANONICAL_CAP} vertices, got {g.n}")
    bit_count = g.n * (g.n - 1) // 2
    # Earlier triangle positions get higher bit weights so that integer order
    # on masks is exactly lexicographic order on the packed graph6 strings.
    weight = {
        pair: bit_count - 1 - index for index, pair in enumerate(_triangle_pairs(g.n))
    }
    best = None
    for perm in permutations(range(g.n)):
        mask = 0
        for u, v in g.edges:
            a, b = perm[u], perm[v]
            mask |= 1 << weight[(a, b) if a < b else (b, a)]
        if best is None or mask < best:
            best = mask
    bits = [(best >> (bit_count - 1 - p)) & 1 for p in range(bit_count)] if bit_count else []
    return _pack_graph6(g.n, bits)


def relative_complexity(value, *, canonical: bool = False) -> ComplexityReport:
    """Complexity of a graph or symbol string within the graph6/LZW frame.

    Graphs are first serialized with canonical_string (mode per the flag);
    the string is then compressed over its own sorted symbol set.  Reported:
    total string length, summed length of new dictionary entries, and the
    number of emitted codes.
    """
    if isinstance(value, Graph):
        text = canonical_string(value, canonical=canonical)
    elif isinstance(value, str):
        text = value
    else:
        raise TypeError(f"expected a Graph or a string, got {type(value).__name__}")
    if not text:
        return ComplexityReport(0, 0, 0)
    output = lzw_compress(text, sorted(set(text)))
    return ComplexityReport(
        total=len(text),
        primary_order=sum(len(entry) for entry in output.dictionary),
        secondary_order=len(output.codes),
    )
