"""Loop-free simple graphs, colored graphs, canonical labeling, graph6 and
edge-list I/O.

Vertices are dense integers 0..n-1.  All values are immutable after
construction, so everything here is safe to share between threads and to use
as dictionary keys.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Optional


class GraphFormatError(ValueError):
    """Raised for malformed graph6 or edge-list input."""


def _normalize_edges(n: int, edges: Iterable) -> frozenset:
    out = set()
    for e in edges:
        u, v = e
        if u == v:
            raise ValueError(f"loop at vertex {u} not allowed")
        if not (0 <= u < n and 0 <= v < n):
            raise ValueError(f"edge ({u},{v}) out of range for {n} vertices")
        out.add((u, v) if u < v else (v, u))
    return frozenset(out)


@dataclass(frozen=True)
class Graph:
    """A finite, undirected, simple graph without loops."""

    n: int
    edges: frozenset

    def __init__(self, n: int, edges: Iterable = ()):
        if n < 0:
            raise ValueError("vertex count must be nonnegative")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "edges", _normalize_edges(n, edges))

    def has_edge(self, u: int, v: int) -> bool:
        return (min(u, v), max(u, v)) in self.edges

    def degree(self, v: int) -> int:
        return len(adjacency(self)[v])

    def edge_count(self) -> int:
        return len(self.edges)

    def relabel(self, perm) -> "Graph":
        """Apply the vertex map v -> perm[v]."""
        return Graph(self.n, [(perm[u], perm[v]) for u, v in self.edges])

    def induced(self, vertices) -> "Graph":
        """Induced subgraph; vertices renumbered 0..k-1 in sorted order."""
        vs = sorted(vertices)
        idx = {v: i for i, v in enumerate(vs)}
        edges = [(idx[u], idx[v]) for u, v in self.edges if u in idx and v in idx]
        return Graph(len(vs), edges)

    def __repr__(self):
        return f"Graph({self.n}, {sorted(self.edges)})"


@dataclass(frozen=True)
class QuotientGraph:
    """A quotient of a simple graph: simple edges plus a set of looped
    vertices.  Parallel edges are always collapsed."""

    graph: Graph
    loop_vertices: frozenset

    def __init__(self, graph: Graph, loop_vertices: Iterable = ()):
        loops = frozenset(loop_vertices)
        if not all(0 <= v < graph.n for v in loops):
            raise ValueError("loop vertex out of range")
        object.__setattr__(self, "graph", graph)
        object.__setattr__(self, "loop_vertices", loops)

    @property
    def has_loops(self) -> bool:
        return bool(self.loop_vertices)


@dataclass(frozen=True)
class ColoredGraph:
    """A graph with one small-integer color per vertex.  The coloring need
    not be proper; color ids are significant and never canonicalized."""

    graph: Graph
    colors: tuple

    def __init__(self, graph: Graph, colors: Iterable):
        colors = tuple(colors)
        if len(colors) != graph.n:
            raise ValueError("need exactly one color per vertex")
        if any(c < 0 for c in colors):
            raise ValueError("colors must be nonnegative")
        object.__setattr__(self, "graph", graph)
        object.__setattr__(self, "colors", colors)

    @property
    def n(self) -> int:
        return self.graph.n

    def color_classes(self) -> dict:
        classes: dict = {}
        for v, c in enumerate(self.colors):
            classes.setdefault(c, []).append(v)
        return classes

    def color_ids(self) -> list:
        return sorted(set(self.colors))


@dataclass(frozen=True)
class CanonicalForm:
    """Canonical representative of an isomorphism class.

    Two graphs are isomorphic iff their canonical forms are equal.  The key
    is the graph6 string of the representative, so keys are compact and
    printable.
    """

    graph: Graph
    key: str

    def __hash__(self):
        return hash(self.key)

    def __eq__(self, other):
        return isinstance(other, CanonicalForm) and self.key == other.key

    def __repr__(self):
        return f"CanonicalForm({self.key!r})"


@lru_cache(maxsize=None)
def adjacency(g: Graph) -> tuple:
    """Neighbor sets, indexed by vertex."""
    adj = [set() for _ in range(g.n)]
    for u, v in g.edges:
        adj[u].add(v)
        adj[v].add(u)
    return tuple(frozenset(s) for s in adj)


def _upper_triangle_bits(g: Graph) -> tuple:
    """Adjacency bits in graph6 order: columns j=1..n-1, rows i=0..j-1."""
    bits = []
    for j in range(1, g.n):
        for i in range(j):
            bits.append(1 if (i, j) in g.edges else 0)
    return tuple(bits)


@lru_cache(maxsize=None)
def _canonical_perm(g: Graph) -> tuple:
    """Permutation position -> original vertex minimizing the bit string.

    Backtracking over partial labelings: canonical positions are filled one
    at a time, and a branch is abandoned as soon as its bit prefix exceeds
    the best complete string found so far.
    """
    n = g.n
    adj = adjacency(g)
    best_bits: Optional[tuple] = None
    best_perm: Optional[tuple] = None

    def extend(assigned, used, bits):
        nonlocal best_bits, best_perm
        k = len(assigned)
        if k == n:
            if best_bits is None or bits < best_bits:
                best_bits, best_perm = bits, tuple(assigned)
            return
        candidates = []
        for v in range(n):
            if v in used:
                continue
            col = tuple(1 if assigned[j] in adj[v] else 0 for j in range(k))
            candidates.append((col, v))
        candidates.sort()
        for col, v in candidates:
            new_bits = bits + col
            if best_bits is not None and new_bits > best_bits[: len(new_bits)]:
                continue
            assigned.append(v)
            used.add(v)
            extend(assigned, used, new_bits)
            assigned.pop()
            used.remove(v)

    extend([], set(), ())
    return best_perm if best_perm is not None else ()


@lru_cache(maxsize=None)
def canonical_form(g: Graph) -> CanonicalForm:
    """The lexicographically first graph isomorphic to g, with its graph6
    string as key."""
    perm = _canonical_perm(g)
    inverse = [0] * g.n
    for pos, v in enumerate(perm):
        inverse[v] = pos
    cg = g.relabel(inverse)
    return CanonicalForm(cg, encode_graph6(cg))


@lru_cache(maxsize=None)
def automorphism_count(g: Graph) -> int:
    """Number of vertex permutations preserving the edge set."""
    n = g.n
    adj = adjacency(g)
    degs = [len(adj[v]) for v in range(n)]
    count = 0

    def extend(mapping, used):
        nonlocal count
        k = len(mapping)
        if k == n:
            count += 1
            return
        for v in range(n):
            if v in used or degs[v] != degs[k]:
                continue
            ok = all((mapping[j] in adj[v]) == (j in adj[k]) for j in range(k))
            if ok:
                mapping.append(v)
                used.add(v)
                extend(mapping, used)
                mapping.pop()
                used.remove(v)

    extend([], set())
    return count


def tensor_product(g: Graph, x: Graph) -> Graph:
    """Categorical product: (v,w)(v',w') is an edge iff vv' and ww' are."""
    m = x.n
    edges = []
    for u, v in g.edges:
        for a, b in x.edges:
            edges.append((u * m + a, v * m + b))
            edges.append((u * m + b, v * m + a))
    return Graph(g.n * m, edges)


def quotient(h: Graph, rho) -> QuotientGraph:
    """Contract each block of the partition rho to a single vertex.

    A block that is not independent in h produces a loop; parallel edges
    between blocks are collapsed.
    """
    blocks = rho.blocks if hasattr(rho, "blocks") else [sorted(b) for b in rho]
    block_of = {}
    for i, b in enumerate(blocks):
        for v in b:
            block_of[v] = i
    if sorted(block_of) != list(range(h.n)):
        raise ValueError("partition does not cover the vertex set exactly")
    edges = set()
    loops = set()
    for u, v in h.edges:
        bu, bv = block_of[u], block_of[v]
        if bu == bv:
            loops.add(bu)
        else:
            edges.add((bu, bv))
    return QuotientGraph(Graph(len(blocks), edges), loops)


def disjoint_union(g: Graph, h: Graph) -> Graph:
    edges = list(g.edges) + [(u + g.n, v + g.n) for u, v in h.edges]
    return Graph(g.n + h.n, edges)


def connected_components(g: Graph) -> list:
    """Vertex sets of connected components, each sorted."""
    adj = adjacency(g)
    seen = set()
    comps = []
    for s in range(g.n):
        if s in seen:
            continue
        comp = [s]
        seen.add(s)
        stack = [s]
        while stack:
            u = stack.pop()
            for w in adj[u]:
                if w not in seen:
                    seen.add(w)
                    comp.append(w)
                    stack.append(w)
        comps.append(sorted(comp))
    return comps


def is_connected(g: Graph) -> bool:
    return g.n <= 1 or len(connected_components(g)) == 1


# ---------------------------------------------------------------------------
# colored isomorphism


def _colored_iso_maps(h: ColoredGraph, g: ColoredGraph, count_all: bool):
    """Backtracking search for color-preserving isomorphisms h -> g.

    Returns the number found (all of them when count_all, else stops at 1).
    """
    if h.n != g.n or sorted(h.colors) != sorted(g.colors):
        return 0
    if len(h.graph.edges) != len(g.graph.edges):
        return 0
    n = h.n
    adj_h = adjacency(h.graph)
    adj_g = adjacency(g.graph)
    found = 0

    def extend(mapping, used):
        nonlocal found
        k = len(mapping)
        if k == n:
            found += 1
            return not count_all
        for v in range(n):
            if v in used or g.colors[v] != h.colors[k]:
                continue
            if len(adj_g[v]) != len(adj_h[k]):
                continue
            if all((mapping[j] in adj_g[v]) == (j in adj_h[k]) for j in range(k)):
                mapping.append(v)
                used.add(v)
                if extend(mapping, used):
                    return True
                mapping.pop()
                used.remove(v)
        return False

    extend([], set())
    return found


def color_preserving_isomorphic(h: ColoredGraph, g: ColoredGraph) -> bool:
    return _colored_iso_maps(h, g, count_all=False) > 0


def colored_automorphism_count(h: ColoredGraph) -> int:
    return _colored_iso_maps(h, h, count_all=True)


def colored_canonical_key(h: ColoredGraph):
    """Hashable key equal for two colored graphs iff they are
    color-preserving isomorphic.  Minimizes (color sequence, edge bits) over
    all relabelings."""
    n = h.n
    adj = adjacency(h.graph)
    best = None

    def extend(assigned, used, cols, bits):
        nonlocal best
        k = len(assigned)
        if k == n:
            key = (cols, bits)
            if best is None or key < best:
                best = key
            return
        candidates = []
        for v in range(n):
            if v in used:
                continue
            col = tuple(1 if assigned[j] in adj[v] else 0 for j in range(k))
            candidates.append((h.colors[v], col, v))
        candidates.sort()
        for c, col, v in candidates:
            new_cols = cols + (c,)
            new_bits = bits + col
            if best is not None and (new_cols, new_bits) > (
                best[0][: len(new_cols)],
                best[1][: len(new_bits)],
            ):
                continue
            assigned.append(v)
            used.add(v)
            extend(assigned, used, new_cols, new_bits)
            assigned.pop()
            used.remove(v)

    extend([], set(), (), ())
    if best is None:
        return (n, (), ())
    return (n,) + best


# ---------------------------------------------------------------------------
# graph6


def _g6_size_prefix(n: int) -> str:
    if n <= 62:
        return chr(n + 63)
    if n <= 258047:
        return "~" + "".join(chr(((n >> s) & 63) + 63) for s in (12, 6, 0))
    raise ValueError("graph too large for supported graph6 sizes")


def encode_graph6(g: Graph) -> str:
    """Bit-exact graph6: size prefix, then upper-triangle bits column-major,
    packed big-endian into 6-bit characters offset by 63."""
    bits = _upper_triangle_bits(g)
    out = [_g6_size_prefix(g.n)]
    for i in range(0, len(bits), 6):
        chunk = bits[i : i + 6]
        val = 0
        for b in chunk:
            val = (val << 1) | b
        val <<= 6 - len(chunk)
        out.append(chr(val + 63))
    return "".join(out)


def parse_graph6(text: str) -> Graph:
    """Decode a graph6 string; errors name the offending byte offset."""
    if not text:
        raise GraphFormatError("empty graph6 string")
    for off, ch in enumerate(text):
        if not (63 <= ord(ch) <= 126):
            raise GraphFormatError(
                f"byte offset {off}: character {ch!r} outside graph6 range 63..126"
            )
    if text[0] == "~":
        if len(text) < 4:
            raise GraphFormatError("byte offset 0: truncated multi-byte size prefix")
        if text[1] == "~":
            raise GraphFormatError("byte offset 1: 36-bit sizes not supported")
        n = 0
        for ch in text[1:4]:
            n = (n << 6) | (ord(ch) - 63)
        body = text[4:]
        body_off = 4
    else:
        n = ord(text[0]) - 63
        body = text[1:]
        body_off = 1
    nbits = n * (n - 1) // 2
    need = (nbits + 5) // 6
    if len(body) != need:
        raise GraphFormatError(
            f"byte offset {body_off + min(len(body), need)}: expected {need} "
            f"data bytes for {n} vertices, got {len(body)}"
        )
    bits = []
    for ch in body:
        val = ord(ch) - 63
        bits.extend((val >> s) & 1 for s in (5, 4, 3, 2, 1, 0))
    for k in range(nbits, len(bits)):
        if bits[k]:
            raise GraphFormatError(
                f"byte offset {body_off + k // 6}: nonzero trailing padding bit"
            )
    edges = []
    k = 0
    for j in range(1, n):
        for i in range(j):
            if bits[k]:
                edges.append((i, j))
            k += 1
    return Graph(n, edges)


# ---------------------------------------------------------------------------
# edge-list text format


def parse_edge_list(text: str):
    """Parse the edge-list format: `n <count>`, `e <u> <v>`, optional
    `c <v> <color>` lines, `#` comments.  Returns a Graph, or a ColoredGraph
    when any color line is present."""
    n = None
    edges = []
    colors = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        try:
            if parts[0] == "n" and len(parts) == 2:
                n = int(parts[1])
            elif parts[0] == "e" and len(parts) == 3:
                edges.append((int(parts[1]), int(parts[2])))
            elif parts[0] == "c" and len(parts) == 3:
                colors[int(parts[1])] = int(parts[2])
            else:
                raise ValueError("unrecognized directive")
        except ValueError as exc:
            raise GraphFormatError(f"line {lineno}: {exc}") from exc
    if n is None:
        raise GraphFormatError("missing `n <count>` line")
    g = Graph(n, edges)
    if colors:
        return ColoredGraph(g, tuple(colors.get(v, 0) for v in range(n)))
    return g


def format_edge_list(g) -> str:
    lines = []
    base = g.graph if isinstance(g, ColoredGraph) else g
    lines.append(f"n {base.n}")
    for u, v in sorted(base.edges):
        lines.append(f"e {u} {v}")
    if isinstance(g, ColoredGraph):
        for v, c in enumerate(g.colors):
            lines.append(f"c {v} {c}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# the global order on canonical forms


def graph_order_key(cf: CanonicalForm):
    """Total order on isomorphism classes respecting total size
    |V| + |E|; ties broken by the graph6 string of the canonical form."""
    g = cf.graph
    return (g.n + len(g.edges), cf.key)
