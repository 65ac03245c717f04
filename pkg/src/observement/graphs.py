"""Graphs and digraphs with interchangeable representations.

Vertices are integers 0..n-1.  Edge lists, adjacency lists, adjacency
matrices, and graph6 text all encode the same structure and convert
losslessly in every direction, which is exactly what makes the collection of
representations interchangeable.  Also here: brute-force isomorphism and
subgraph search (small sizes only, with explicit caps), the state-space
digraph of a finite automaton, and random-graph percolation sweeps.
"""

from __future__ import annotations

import functools
import math
import random
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import CapExceeded, ObservementError

ISO_CAP = 10
SUBGRAPH_CAP = 8
GRAPH6_MAX_N = 62


class GraphError(ObservementError):
    """Structural violation: bad endpoints, self-loops, size caps."""


class GraphFormatError(ObservementError):
    """A graph, matrix, adjacency-list, or graph6 text is malformed."""


def _normalise_edge(u: int, v: int) -> tuple:
    return (u, v) if u <= v else (v, u)


@dataclass(frozen=True)
class Graph:
    """Undirected simple graph on vertices 0..n-1."""

    n: int
    edges: frozenset = frozenset()
    labels: dict | None = None
    edge_labels: dict | None = None

    def __post_init__(self):
        if self.n < 0:
            raise GraphError("vertex count must be >= 0")
        edges = set()
        for e in self.edges:
            u, v = e
            if u == v:
                raise GraphError(f"self-loop ({u},{v}) not allowed in an undirected graph")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise GraphError(f"edge ({u},{v}) out of range for n={self.n}")
            edges.add(_normalise_edge(u, v))
        object.__setattr__(self, "edges", frozenset(edges))
        if self.labels is not None:
            bad = [v for v in self.labels if not (0 <= v < self.n)]
            if bad:
                raise GraphError(f"labels reference unknown vertices {bad}")
            object.__setattr__(self, "labels", dict(self.labels))
        if self.edge_labels is not None:
            norm = {}
            for e, text in self.edge_labels.items():
                e = _normalise_edge(*e)
                if e not in self.edges:
                    raise GraphError(f"edge label on missing edge {e}")
                norm[e] = text
            object.__setattr__(self, "edge_labels", norm)

    def degree(self, v: int) -> int:
        return sum(1 for e in self.edges if v in e)

    @functools.cached_property
    def _masks(self) -> tuple:
        # One adjacency bitmask per vertex; cached, the value is immutable.
        rows = [0] * self.n
        for u, v in self.edges:
            rows[u] |= 1 << v
            rows[v] |= 1 << u
        return (tuple(rows),)


@dataclass(frozen=True)
class Digraph:
    """Directed graph; self-loops only when explicitly allowed (automaton graphs need them)."""

    n: int
    arcs: frozenset = frozenset()
    allow_self_loops: bool = field(default=False, compare=False)
    labels: dict | None = None

    def __post_init__(self):
        arcs = set()
        if self.n < 0:
            raise GraphError("vertex count must be >= 0")
        for u, v in self.arcs:
            if u == v and not self.allow_self_loops:
                raise GraphError(f"self-loop ({u},{v}) not allowed without allow_self_loops")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise GraphError(f"arc ({u},{v}) out of range for n={self.n}")
            arcs.add((u, v))
        object.__setattr__(self, "arcs", frozenset(arcs))
        if self.labels is not None:
            bad = [v for v in self.labels if not (0 <= v < self.n)]
            if bad:
                raise GraphError(f"labels reference unknown vertices {bad}")
            object.__setattr__(self, "labels", dict(self.labels))

    def out_degree(self, v: int) -> int:
        return sum(1 for a in self.arcs if a[0] == v)

    def in_degree(self, v: int) -> int:
        return sum(1 for a in self.arcs if a[1] == v)

    @functools.cached_property
    def _masks(self) -> tuple:
        out = [0] * self.n
        into = [0] * self.n
        for u, v in self.arcs:
            out[u] |= 1 << v
            into[v] |= 1 << u
        return (tuple(out), tuple(into))


# --- representation conversions ----------------------------------------------


def to_edge_list(g) -> list:
    pairs = g.edges if isinstance(g, Graph) else g.arcs
    return sorted(pairs)


def to_adjacency_list(g) -> list:
    rows: list[list[int]] = [[] for _ in range(g.n)]
    if isinstance(g, Graph):
        for u, v in g.edges:
            rows[u].append(v)
            rows[v].append(u)
    else:
        for u, v in g.arcs:
            rows[u].append(v)
    return [sorted(r) for r in rows]


def to_adjacency_matrix(g) -> list:
    m = [[0] * g.n for _ in range(g.n)]
    if isinstance(g, Graph):
        for u, v in g.edges:
            m[u][v] = m[v][u] = 1
    else:
        for u, v in g.arcs:
            m[u][v] = 1
    return m


def from_edge_list(n: int, pairs: Iterable, directed: bool = False, **kwargs):
    if directed:
        return Digraph(n, frozenset(tuple(p) for p in pairs), **kwargs)
    return Graph(n, frozenset(tuple(p) for p in pairs), **kwargs)


def from_adjacency_list(rows: Sequence, directed: bool = False, **kwargs):
    n = len(rows)
    pairs = {(u, v) for u, neighbours in enumerate(rows) for v in neighbours}
    if not directed:
        asymmetric = [(u, v) for u, v in pairs if (v, u) not in pairs]
        if asymmetric:
            raise GraphFormatError(f"adjacency list is not symmetric at {asymmetric[0]}")
    return from_edge_list(n, pairs, directed, **kwargs)


def from_adjacency_matrix(matrix: Sequence, directed: bool = False, **kwargs):
    n = len(matrix)
    for row in matrix:
        if len(row) != n:
            raise GraphFormatError(f"matrix is not square: row of length {len(row)}, n={n}")
    if not directed:
        for i in range(n):
            if matrix[i][i]:
                raise GraphFormatError(f"nonzero diagonal at {i} in an undirected matrix")
            for j in range(i):
                if bool(matrix[i][j]) != bool(matrix[j][i]):
                    raise GraphFormatError(f"matrix is not symmetric at ({i},{j})")
    pairs = {(i, j) for i in range(n) for j in range(n) if matrix[i][j]}
    return from_edge_list(n, pairs, directed, **kwargs)


def convert(g, target: str):
    """Dispatch to a representation: 'edges', 'adjlist', 'matrix', or 'g6'."""
    if target == "edges":
        return to_edge_list(g)
    if target == "adjlist":
        return to_adjacency_list(g)
    if target == "matrix":
        return to_adjacency_matrix(g)
    if target == "g6":
        if not isinstance(g, Graph):
            raise GraphError("graph6 encodes undirected graphs only")
        return encode_graph6(g)
    raise GraphError(f"unknown representation {target!r}")


# --- graph6 -------------------------------------------------------------------
#
# Short form only: one size byte (n + 63, n <= 62), then the upper triangle of
# the adjacency matrix column by column, packed into 6-bit groups, each group
# offset by 63 into the printable range.


def _triangle_pairs(n: int):
    for j in range(1, n):
        for i in range(j):
            yield i, j


def _pack_graph6(n: int, bits: Sequence) -> str:
    chars = [chr(63 + n)]
    for group_start in range(0, len(bits), 6):
        group = bits[group_start:group_start + 6]
        value = 0
        for offset, bit in enumerate(group):
            value |= bit << (5 - offset)
        chars.append(chr(63 + value))
    return "".join(chars)


def encode_graph6(g: Graph) -> str:
    """Encode an undirected graph in graph6 text (short form, n <= 62)."""
    if g.n > GRAPH6_MAX_N:
        raise GraphError(f"graph6 short form supports at most {GRAPH6_MAX_N} vertices, got {g.n}")
    bits = [1 if (i, j) in g.edges else 0 for i, j in _triangle_pairs(g.n)]
    return _pack_graph6(g.n, bits)


def decode_graph6(text: str) -> Graph:
    """Inverse of encode_graph6, with strict validation of length and padding."""
    if not text:
        raise GraphFormatError("empty graph6 string")
    for i, ch in enumerate(text):
        if not (63 <= ord(ch) <= 126):
            raise GraphFormatError(f"byte {ord(ch)} at position {i} outside graph6 range")
    size = ord(text[0]) - 63
    if size > GRAPH6_MAX_N:
        raise GraphFormatError("long-form graph6 (more than 62 vertices) is not supported")
    bit_count = size * (size - 1) // 2
    expected_chars = 1 + (bit_count + 5) // 6
    if len(text) < expected_chars:
        raise GraphFormatError(
            f"graph6 string too short: {len(text)} bytes, need {expected_chars} for n={size}"
        )
    if len(text) > expected_chars:
        raise GraphFormatError(f"trailing garbage after {expected_chars} graph6 bytes")
    bits = []
    for ch in text[1:]:
        value = ord(ch) - 63
        bits.extend((value >> shift) & 1 for shift in range(5, -1, -1))
    if any(bits[bit_count:]):
        raise GraphFormatError("nonzero padding bits in graph6 string")
    edges = {
        (i, j)
        for bit, (i, j) in zip(bits, _triangle_pairs(size))
        if bit
    }
    return Graph(size, frozenset(edges))


# --- isomorphism and subgraph search ------------------------------------------


def _check_same_kind(g1, g2):
    if type(g1) is not type(g2):
        raise GraphError("cannot compare a Graph with a Digraph")


def _image_requirement(mask_row: int, below: int, mapping, offset: int = 0) -> int:
    # Images of the already-assigned vertices that mask_row marks as adjacent.
    req = mask_row & below
    need = 0
    while req:
        low = req & -req
        need |= 1 << (mapping[low.bit_length() - 1] + offset)
        req &= req - 1
    return need


def _flatten_masks(g):
    # Digraph rows become out | (in << n) so one integer carries both
    # directions; the requirement mask gets the same offset treatment.
    masks = g._masks
    if len(masks) == 1:
        return list(masks[0]), 0
    out, into = masks
    return [out[v] | into[v] << g.n for v in range(g.n)], g.n


def are_isomorphic(g1, g2, cap: int = ISO_CAP):
    """A vertex bijection sending edges exactly onto edges, or None.

    Brute-force backtracking with degree pruning; deterministic, returning
    the lexicographically first witness.  Sizes above ``cap`` raise.
    """
    _check_same_kind(g1, g2)
    if max(g1.n, g2.n) > cap:
        raise CapExceeded(f"isomorphism search capped at {cap} vertices")
    size1 = len(g1.edges if isinstance(g1, Graph) else g1.arcs)
    size2 = len(g2.edges if isinstance(g2, Graph) else g2.arcs)
    if g1.n != g2.n or size1 != size2:
        return None
    n = g1.n
    if n == 0:
        return {}
    rows1, offset = _flatten_masks(g1)
    rows2, _ = _flatten_masks(g2)
    directed = offset > 0
    deg1 = [r.bit_count() for r in rows1]
    deg2 = [r.bit_count() for r in rows2]
    if sorted(deg1) != sorted(deg2):
        return None
    candidates = [
        [
            w for w in range(n)
            if deg2[w] == deg1[v] and (rows1[v] >> v & 1) == (rows2[w] >> w & 1)
        ]
        for v in range(n)
    ]
    mapping = [-1] * n

    def extend(v, used_mask, image_mask):
        if v == n:
            return True
        below = (1 << v) - 1
        need = _image_requirement(rows1[v], below, mapping)
        if directed:
            need |= _image_requirement(rows1[v] >> offset, below, mapping, offset)
        row_filter = image_mask | image_mask << offset if directed else image_mask
        for w in candidates[v]:
            if used_mask >> w & 1:
                continue
            if rows2[w] & row_filter == need:
                mapping[v] = w
                if extend(v + 1, used_mask | 1 << w, image_mask | 1 << w):
                    return True
        return False

    if extend(0, 0, 0):
        return {v: mapping[v] for v in range(n)}
    return None


def is_subgraph(small, big, cap: int = SUBGRAPH_CAP):
    """An injective map sending every edge of ``small`` onto an edge of ``big``, or None.

    Non-induced: extra adjacencies among the images are fine.
    """
    _check_same_kind(small, big)
    if small.n > cap:
        raise CapExceeded(f"subgraph search capped at {cap} pattern vertices")
    if small.n > big.n:
        return None
    ns, nb = small.n, big.n
    if ns == 0:
        return {}
    masks_s = small._masks
    masks_b = big._masks
    directed = len(masks_s) > 1
    rows_s = list(masks_s[0])
    rows_b = list(masks_b[0])
    if directed:
        # Different offsets would be needed to share one flattened integer,
        # so keep the in-rows separate for the pattern and the host.
        in_s = masks_s[1]
        in_b = masks_b[1]
        deg_s = [(rows_s[v].bit_count(), in_s[v].bit_count()) for v in range(ns)]
        deg_b = [(rows_b[w].bit_count(), in_b[w].bit_count()) for w in range(nb)]
        candidates = [
            [
                w for w in range(nb)
                if deg_b[w][0] >= deg_s[v][0] and deg_b[w][1] >= deg_s[v][1]
                and (not rows_s[v] >> v & 1 or rows_b[w] >> w & 1)
            ]
            for v in range(ns)
        ]
    else:
        deg_s1 = [r.bit_count() for r in rows_s]
        deg_b1 = [r.bit_count() for r in rows_b]
        candidates = [
            [w for w in range(nb) if deg_b1[w] >= deg_s1[v]]
            for v in range(ns)
        ]
    mapping = [-1] * ns

    def extend(v, used_mask):
        if v == ns:
            return True
        below = (1 << v) - 1
        need_out = _image_requirement(rows_s[v], below, mapping)
        need_in = _image_requirement(in_s[v], below, mapping) if directed else 0
        for w in candidates[v]:
            if used_mask >> w & 1:
                continue
            if rows_b[w] & need_out != need_out:
                continue
            if directed and in_b[w] & need_in != need_in:
                continue
            mapping[v] = w
            if extend(v + 1, used_mask | 1 << w):
                return True
        return False

    if extend(0, 0):
        return {v: mapping[v] for v in range(ns)}
    return None


def relabel(g, permutation: Sequence):
    """Apply a vertex permutation: vertex v becomes permutation[v]."""
    if sorted(permutation) != list(range(g.n)):
        raise GraphError("relabeling must be a permutation of the vertex set")
    if isinstance(g, Graph):
        return Graph(g.n, frozenset((permutation[u], permutation[v]) for u, v in g.edges))
    return Digraph(
        g.n,
        frozenset((permutation[u], permutation[v]) for u, v in g.arcs),
        allow_self_loops=g.allow_self_loops,
    )


# --- automata -----------------------------------------------------------------


@dataclass(frozen=True)
class Automaton:
    """A finite state set with a total successor function."""

    states: frozenset
    successor: dict

    def __post_init__(self):
        object.__setattr__(self, "states", frozenset(self.states))
        object.__setattr__(self, "successor", dict(self.successor))
        missing = sorted(self.states - set(self.successor))
        if missing:
            raise GraphError(f"successor function is not total: missing {missing}")
        stray = sorted(set(self.successor) - self.states)
        if stray:
            raise GraphError(f"successor defined on unknown states {stray}")
        bad = sorted({v for v in self.successor.values() if v not in self.states})
        if bad:
            raise GraphError(f"successor maps outside the state set: {bad}")


def state_order(automaton: Automaton) -> list:
    """The vertex indexing used by state_space_graph: states sorted by name."""
    return sorted(automaton.states)


def state_space_graph(automaton: Automaton) -> Digraph:
    """One vertex per state and one arc per successor step; out-degree is always 1."""
    order = state_order(automaton)
    index = {s: i for i, s in enumerate(order)}
    arcs = frozenset((index[s], index[automaton.successor[s]]) for s in order)
    return Digraph(len(order), arcs, allow_self_loops=True)


# --- random graphs and percolation ---------------------------------------------


def er_random_graph(n: int, p: float, seed) -> Graph:
    """Each of the C(n,2) pairs becomes an edge independently with probability p.

    Uses geometric skipping between successful pairs, so sparse graphs cost
    time proportional to the edge count.  Identical seed, identical graph.
    """
    if not 0 <= p <= 1:
        raise GraphError(f"edge probability must be in [0,1], got {p}")
    if n < 0:
        raise GraphError("vertex count must be >= 0")
    rng = random.Random(seed)
    edges = set()
    if p >= 1:
        edges = {(i, j) for j in range(1, n) for i in range(j)}
    elif p > 0:
        log_q = math.log(1.0 - p)
        v, w = 1, -1
        while v < n:
            w += 1 + int(math.log(1.0 - rng.random()) / log_q)
            while w >= v and v < n:
                w -= v
                v += 1
            if v < n:
                edges.add((w, v))
    return Graph(n, frozenset(edges))


def connected_components(g: Graph) -> list:
    """Vertex sets of the connected components, by breadth-first traversal."""
    adjacency = to_adjacency_list(g)
    seen = [False] * g.n
    components = []
    for root in range(g.n):
        if seen[root]:
            continue
        queue = [root]
        seen[root] = True
        component = []
        while queue:
            v = queue.pop()
            component.append(v)
            for w in adjacency[v]:
                if not seen[w]:
                    seen[w] = True
                    queue.append(w)
        components.append(sorted(component))
    return components


def largest_component_fraction(g: Graph) -> float:
    if g.n == 0:
        return 0.0
    return max(len(c) for c in connected_components(g)) / g.n


def percolation_sweep(n: int, p_values: Iterable, trials: int, seed) -> list:
    """Mean largest-component fraction per edge probability.

    Trial t at every p uses the derived seed ``seed + t``, so runs are
    reproducible and trials may be computed independently.
    """
    if trials < 1:
        raise GraphError("trials must be >= 1")
    rows = []
    for p in p_values:
        total = 0.0
        for t in range(trials):
            total += largest_component_fraction(er_random_graph(n, p, seed + t))
        rows.append((p, total / trials))
    return rows


# --- text formats ---------------------------------------------------------------
#
#   graph N / digraph N     edge or arc lines "u v"
#   matrix N / dmatrix N    N rows of N characters, each 0 or 1
#   adjlist N / dadjlist N  N lines "v: neighbours..."
#
# graph6 text has no header; parse_graph_text falls back to it for a
# single-line input that matches no header keyword.


def format_graph_file(g) -> str:
    head = "graph" if isinstance(g, Graph) else "digraph"
    pairs = to_edge_list(g)
    return "\n".join([f"{head} {g.n}"] + [f"{u} {v}" for u, v in pairs]) + "\n"


def format_matrix_text(g) -> str:
    head = "matrix" if isinstance(g, Graph) else "dmatrix"
    rows = to_adjacency_matrix(g)
    return "\n".join([f"{head} {g.n}"] + ["".join(map(str, row)) for row in rows]) + "\n"


def format_adjacency_text(g) -> str:
    head = "adjlist" if isinstance(g, Graph) else "dadjlist"
    rows = to_adjacency_list(g)
    lines = [f"{head} {g.n}"]
    lines += [f"{v}: {' '.join(map(str, row))}".rstrip() for v, row in enumerate(rows)]
    return "\n".join(lines) + "\n"


def _significant_lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if line and not line.startswith("#"):
            yield lineno, line


def parse_graph_text(text: str):
    """Parse any of the text representations (including bare graph6) to a graph."""
    lines = list(_significant_lines(text))
    if not lines:
        raise GraphFormatError("empty graph text")
    head = lines[0][1].split()
    keyword = head[0]
    if keyword in ("graph", "digraph"):
        return _parse_edge_lines(lines, directed=keyword == "digraph")
    if keyword in ("matrix", "dmatrix"):
        return _parse_matrix_lines(lines, directed=keyword == "dmatrix")
    if keyword in ("adjlist", "dadjlist"):
        return _parse_adjacency_lines(lines, directed=keyword == "dadjlist")
    if len(lines) == 1 and len(head) == 1:
        return decode_graph6(head[0])
    raise GraphFormatError(f"line {lines[0][0]}: unknown header {keyword!r}")


def _parse_header_n(lines):
    lineno, line = lines[0]
    parts = line.split()
    if len(parts) != 2:
        raise GraphFormatError(f"line {lineno}: expected '<kind> <n>'")
    try:
        n = int(parts[1])
    except ValueError:
        raise GraphFormatError(f"line {lineno}: bad vertex count {parts[1]!r}") from None
    return n


def _parse_int(token: str, lineno: int) -> int:
    try:
        return int(token)
    except ValueError:
        raise GraphFormatError(f"line {lineno}: bad vertex {token!r}") from None


def _parse_edge_lines(lines, directed: bool):
    n = _parse_header_n(lines)
    pairs = set()
    has_loop = False
    for lineno, line in lines[1:]:
        parts = line.split()
        if len(parts) != 2:
            raise GraphFormatError(f"line {lineno}: expected 'u v'")
        u, v = (_parse_int(t, lineno) for t in parts)
        has_loop = has_loop or u == v
        pairs.add((u, v))
    try:
        if directed:
            return Digraph(n, frozenset(pairs), allow_self_loops=has_loop)
        return Graph(n, frozenset(pairs))
    except GraphError as exc:
        raise GraphFormatError(str(exc)) from exc


def _parse_matrix_lines(lines, directed: bool):
    n = _parse_header_n(lines)
    rows = []
    for lineno, line in lines[1:]:
        if len(line) != n or any(c not in "01" for c in line):
            raise GraphFormatError(f"line {lineno}: expected {n} characters of 0/1")
        rows.append([int(c) for c in line])
    if len(rows) != n:
        raise GraphFormatError(f"expected {n} matrix rows, got {len(rows)}")
    has_loop = any(rows[i][i] for i in range(n))
    try:
        return from_adjacency_matrix(rows, directed, **(
            {"allow_self_loops": True} if directed and has_loop else {}
        ))
    except GraphError as exc:
        raise GraphFormatError(str(exc)) from exc


def _parse_adjacency_lines(lines, directed: bool):
    n = _parse_header_n(lines)
    rows: list[list[int]] = [[] for _ in range(n)]
    filled = [False] * n
    for lineno, line in lines[1:]:
        head, sep, rest = line.partition(":")
        if not sep:
            raise GraphFormatError(f"line {lineno}: expected 'v: neighbours'")
        v = _parse_int(head.strip(), lineno)
        if not (0 <= v < n):
            raise GraphFormatError(f"line {lineno}: vertex {v} out of range")
        if filled[v]:
            raise GraphFormatError(f"line {lineno}: duplicate row for vertex {v}")
        filled[v] = True
        rows[v] = [_parse_int(t, lineno) for t in rest.split()]
    has_loop = any(v in row for v, row in enumerate(rows))
    try:
        return from_adjacency_list(rows, directed, **(
            {"allow_self_loops": True} if directed and has_loop else {}
        ))
    except GraphError as exc:
        raise GraphFormatError(str(exc)) from exc


def parse_automaton_file(text: str) -> Automaton:
    """Lines of 'state -> state'; every state must have exactly one successor."""
    successor = {}
    states = set()
    for lineno, line in _significant_lines(text):
        parts = line.split()
        if len(parts) != 3 or parts[1] != "->":
            raise GraphFormatError(f"line {lineno}: expected 'state -> state'")
        src, dst = parts[0], parts[2]
        if src in successor:
            raise GraphFormatError(f"line {lineno}: state {src!r} has two successors")
        successor[src] = dst
        states.update((src, dst))
    try:
        return Automaton(frozenset(states), successor)
    except GraphError as exc:
        raise GraphFormatError(str(exc)) from exc
