import random
from itertools import combinations

from observement.graphs import Digraph, Graph


def all_graphs(n):
    """Every labeled undirected graph on n vertices."""
    pairs = list(combinations(range(n), 2))
    return [
        Graph(n, frozenset(p for i, p in enumerate(pairs) if mask >> i & 1))
        for mask in range(1 << len(pairs))
    ]


def random_graph(rng: random.Random, n: int, p: float = 0.5) -> Graph:
    edges = {(i, j) for j in range(n) for i in range(j) if rng.random() < p}
    return Graph(n, frozenset(edges))


def random_digraph(rng: random.Random, n: int, p: float = 0.3) -> Digraph:
    arcs = {(i, j) for i in range(n) for j in range(n) if i != j and rng.random() < p}
    return Digraph(n, frozenset(arcs))
