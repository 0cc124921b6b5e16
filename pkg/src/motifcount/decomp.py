"""Tree decompositions for small pattern graphs.

Provides exact treewidth (elimination-order dynamic programming over vertex
subsets), conversion to nice form, the width-2 normal form used by the
matrix-multiplication homomorphism counter, and the connectivity massaging
that makes every separator the exact neighborhood of its component.
"""

from __future__ import annotations

import itertools
from typing import Optional

from .graphs import Graph, adjacency, connected_components, is_connected
from .partitions import CapacityError

TREEWIDTH_GUARD = 20


class DecompositionError(ValueError):
    pass


class TreeDecomposition:
    """A rooted tree decomposition.

    Nodes are integers 0..len(bags)-1; parent[root] is None.  The derived
    maps sigma/gamma/alpha follow the usual rooted conventions: sigma(t) is
    the bag intersection with the parent bag, gamma(t) the union of bags in
    the subtree, alpha(t) = gamma(t) minus sigma(t).
    """

    def __init__(self, parents: list, bags: list, root: int):
        self.parents = list(parents)
        self.bags = [frozenset(b) for b in bags]
        self.root = root
        if len(self.parents) != len(self.bags):
            raise DecompositionError("parent and bag lists differ in length")
        if self.parents[root] is not None:
            raise DecompositionError("root must have no parent")
        self.children: list = [[] for _ in self.bags]
        seen_root = 0
        for t, p in enumerate(self.parents):
            if p is None:
                seen_root += 1
                if t != root:
                    raise DecompositionError("multiple parentless nodes")
            else:
                self.children[p].append(t)
        if seen_root != 1:
            raise DecompositionError("exactly one root required")
        # reject cycles / disconnected node sets
        order = self.topological_order()
        if len(order) != len(self.bags):
            raise DecompositionError("parent map is not a tree")
        self._gamma: Optional[list] = None

    def node_count(self) -> int:
        return len(self.bags)

    def topological_order(self) -> list:
        """Nodes in preorder (parents before children)."""
        order = []
        stack = [self.root]
        while stack:
            t = stack.pop()
            order.append(t)
            stack.extend(reversed(self.children[t]))
        return order

    def sigma(self, t: int) -> frozenset:
        p = self.parents[t]
        if p is None:
            return frozenset()
        return self.bags[t] & self.bags[p]

    def gamma(self, t: int) -> frozenset:
        if self._gamma is None:
            gamma = [None] * len(self.bags)
            for t2 in reversed(self.topological_order()):
                acc = set(self.bags[t2])
                for c in self.children[t2]:
                    acc |= gamma[c]
                gamma[t2] = frozenset(acc)
            self._gamma = gamma
        return self._gamma[t]

    def alpha(self, t: int) -> frozenset:
        return self.gamma(t) - self.sigma(t)

    def width(self) -> int:
        return max((len(b) for b in self.bags), default=0) - 1

    def adhesion(self) -> int:
        return max(
            (len(self.sigma(t)) for t in range(len(self.bags)) if t != self.root),
            default=0,
        )

    def validate(self, g: Graph) -> None:
        """Raise DecompositionError unless this is a valid rooted tree
        decomposition of g (edge coverage, connected vertex traces, and the
        derived separator/cone/component conditions)."""
        covered = set()
        for b in self.bags:
            for v in b:
                if not (0 <= v < g.n):
                    raise DecompositionError(f"bag vertex {v} out of range")
            covered |= b
        if covered != set(range(g.n)):
            raise DecompositionError("some vertex appears in no bag")
        for u, v in g.edges:
            if not any(u in b and v in b for b in self.bags):
                raise DecompositionError(f"edge ({u},{v}) not inside any bag")
        # connected traces: the nodes containing v induce a subtree
        for v in range(g.n):
            nodes = [t for t, b in enumerate(self.bags) if v in b]
            tops = [t for t in nodes if self.parents[t] is None or v not in self.bags[self.parents[t]]]
            if len(tops) != 1:
                raise DecompositionError(f"trace of vertex {v} is disconnected")
        # neighborhood containment: N(alpha(t)) inside sigma(t)
        adj = adjacency(g)
        for t in range(len(self.bags)):
            alpha = self.alpha(t)
            if alpha & self.sigma(t):
                raise DecompositionError("alpha and sigma intersect")
            outside = set(range(g.n)) - alpha
            boundary = set()
            for v in alpha:
                boundary |= adj[v] & outside
            if not boundary <= self.sigma(t):
                raise DecompositionError(f"N(alpha({t})) escapes sigma({t})")
        if self.alpha(self.root) != frozenset(range(g.n)):
            raise DecompositionError("root component must be the whole vertex set")

    def dump(self) -> str:
        return dump_decomposition(self)


class NiceTreeDecomposition(TreeDecomposition):
    """Tree decomposition where every node is a leaf (empty bag), an
    introduce node, a forget node, or a join of two equal-bag children."""

    def __init__(self, parents, bags, root, kinds):
        super().__init__(parents, bags, root)
        self.kinds = list(kinds)
        for t, kind in enumerate(self.kinds):
            bag = self.bags[t]
            kids = self.children[t]
            if kind[0] == "leaf":
                if bag or kids:
                    raise DecompositionError("leaf must have empty bag, no children")
            elif kind[0] == "intro":
                (c,) = kids
                if bag != self.bags[c] | {kind[1]} or kind[1] in self.bags[c]:
                    raise DecompositionError("bad introduce node")
            elif kind[0] == "forget":
                (c,) = kids
                if bag != self.bags[c] - {kind[1]} or kind[1] not in self.bags[c]:
                    raise DecompositionError("bad forget node")
            elif kind[0] == "join":
                if len(kids) != 2 or any(self.bags[c] != bag for c in kids):
                    raise DecompositionError("bad join node")
            else:
                raise DecompositionError(f"unknown node kind {kind!r}")


class Width2Decomposition(TreeDecomposition):
    """Normal form for treewidth-2 counting: root bag of size 2 with a
    unique child, all other bags of size exactly 3, separators of size 2,
    and bag numbering consistent with the ancestor order."""

    def __init__(self, parents, bags, root):
        super().__init__(parents, bags, root)
        if len(self.bags[root]) != 2 or len(self.children[root]) != 1:
            raise DecompositionError("root must have a size-2 bag and one child")
        for t in range(len(self.bags)):
            if t == root:
                continue
            if len(self.bags[t]) != 3:
                raise DecompositionError("non-root bags must have size 3")
            if len(self.sigma(t)) != 2:
                raise DecompositionError("separators must have size 2")
            u1, u2, _ = sorted(self.bags[t])
            if self.sigma(t) != frozenset((u1, u2)):
                raise DecompositionError("separator must be the two smallest bag vertices")


# ---------------------------------------------------------------------------
# exact treewidth


def _reachable_neighbors(adj_masks: list, n: int, inside: int, v: int) -> int:
    """Bitmask of vertices outside `inside` + {v} reachable from v through
    `inside`; these all end up in v's bag when the `inside` set is
    eliminated before v."""
    seen = 1 << v
    stack = [v]
    out = 0
    while stack:
        u = stack.pop()
        for w_mask in _bits(adj_masks[u] & ~seen):
            w = w_mask.bit_length() - 1
            seen |= w_mask
            if (inside >> w) & 1:
                stack.append(w)
            else:
                out |= w_mask
    return out


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low
        mask ^= low


def exact_treewidth(g: Graph):
    """Minimum treewidth and an optimal rooted tree decomposition, by
    dynamic programming over elimination prefixes."""
    n = g.n
    if n > TREEWIDTH_GUARD:
        raise CapacityError(f"exact treewidth capped at {TREEWIDTH_GUARD} vertices")
    if n == 0:
        return -1, TreeDecomposition([None], [frozenset()], 0)
    adj_masks = [0] * n
    for u, v in g.edges:
        adj_masks[u] |= 1 << v
        adj_masks[v] |= 1 << u

    full = (1 << n) - 1
    cost = {0: -1}
    choice = {}
    # process subsets in order of popcount so predecessors exist
    subsets_by_size: list = [[] for _ in range(n + 1)]
    for s in range(1 << n):
        subsets_by_size[s.bit_count()].append(s)
    for size in range(1, n + 1):
        for s in subsets_by_size[size]:
            best = None
            best_v = None
            for vm in _bits(s):
                v = vm.bit_length() - 1
                prev = s ^ vm
                q = _reachable_neighbors(adj_masks, n, prev, v)
                val = max(cost[prev], q.bit_count())
                if best is None or val < best:
                    best, best_v = val, v
            cost[s] = best
            choice[s] = best_v
    width = cost[full]

    order = []
    s = full
    while s:
        v = choice[s]
        order.append(v)
        s ^= 1 << v
    order.reverse()
    return width, decomposition_from_elimination(g, order)


def decomposition_from_elimination(g: Graph, order: list) -> TreeDecomposition:
    """Build a tree decomposition from an elimination ordering: eliminating
    v yields the bag {v} + current neighbors, which then become a clique."""
    n = g.n
    adj = [set(a) for a in adjacency(g)]
    position = {v: i for i, v in enumerate(order)}
    bags = []
    later_neighbors = []
    for v in order:
        nb = set(adj[v])
        bags.append(frozenset({v} | nb))
        later_neighbors.append(nb)
        for a, b in itertools.combinations(nb, 2):
            adj[a].add(b)
            adj[b].add(a)
        for u in nb:
            adj[u].discard(v)
        adj[v] = set()
    root = n - 1
    parents: list = [None] * n
    for i in range(n):
        if i == root:
            continue
        if later_neighbors[i]:
            parents[i] = position[min(later_neighbors[i], key=lambda u: position[u])]
        else:
            parents[i] = root
    return TreeDecomposition(parents, bags, root)


def max_spasm_treewidth(h: Graph) -> int:
    from .partitions import spasm

    best = -1
    for cf in spasm(h):
        w, _ = exact_treewidth(cf.graph)
        best = max(best, w)
    return best


# ---------------------------------------------------------------------------
# nice form


def to_nice(d: TreeDecomposition, g: Optional[Graph] = None) -> NiceTreeDecomposition:
    """Standard nice form: leaves and the root have empty bags; in between,
    chains of introduce/forget nodes and binary joins."""
    if g is not None:
        d.validate(g)
    parents: list = []
    bags: list = []
    kinds: list = []

    def new_node(bag, kind) -> int:
        parents.append(None)
        bags.append(frozenset(bag))
        kinds.append(kind)
        return len(bags) - 1

    def chain_up(top_of: int, from_bag: frozenset, to_bag: frozenset) -> int:
        """Forget from_bag - to_bag one vertex at a time, then introduce
        to_bag - from_bag; returns the topmost node id."""
        node = top_of
        bag = set(from_bag)
        for v in sorted(from_bag - to_bag):
            bag.discard(v)
            nxt = new_node(bag, ("forget", v))
            parents[node] = nxt
            node = nxt
        for v in sorted(to_bag - from_bag):
            bag.add(v)
            nxt = new_node(bag, ("intro", v))
            parents[node] = nxt
            node = nxt
        return node

    def build(t: int) -> int:
        """Returns the id of a node whose bag equals d.bags[t]."""
        target = d.bags[t]
        kids = d.children[t]
        if not kids:
            leaf = new_node(frozenset(), ("leaf",))
            return chain_up(leaf, frozenset(), target)
        tops = [chain_up(build(c), d.bags[c], target) for c in kids]
        node = tops[0]
        for other in tops[1:]:
            j = new_node(target, ("join",))
            parents[node] = j
            parents[other] = j
            node = j
        return node

    top = build(d.root)
    root = chain_up(top, d.bags[d.root], frozenset())
    if root == top:
        # root bag already empty; nothing forgotten
        pass
    return NiceTreeDecomposition(parents, bags, root, kinds)


# ---------------------------------------------------------------------------
# width-2 normal form


def normalize_width2(d: TreeDecomposition, g: Graph):
    """Normal form for the matrix-multiplication counter.

    Returns (Width2Decomposition, perm) where perm maps new vertex labels to
    the original ones, and the decomposition is over the relabeled graph
    g.relabel(inverse perm).
    """
    if d.width() > 2:
        raise DecompositionError("decomposition width exceeds 2")
    if g.n < 3 or not is_connected(g):
        raise DecompositionError("width-2 normal form needs a connected graph on >= 3 vertices")
    d.validate(g)
    bags = {t: set(b) for t, b in enumerate(d.bags)}
    neighbors = {t: set() for t in bags}
    for t, p in enumerate(d.parents):
        if p is not None:
            neighbors[t].add(p)
            neighbors[p].add(t)

    def contract(t: int, into: int):
        for x in neighbors[t]:
            neighbors[x].discard(t)
            if x != into:
                neighbors[x].add(into)
                neighbors[into].add(x)
        del neighbors[t]
        del bags[t]

    changed = True
    while changed:
        changed = False
        # merge adjacent nested bags
        for t in list(bags):
            if t not in bags:
                continue
            for x in list(neighbors[t]):
                if bags[t] <= bags[x]:
                    contract(t, x)
                    changed = True
                    break
        # grow undersized bags by borrowing from a non-nested neighbor
        for t in list(bags):
            if len(bags[t]) >= 3:
                continue
            for x in sorted(neighbors[t], key=lambda x: sorted(bags[x] - bags[t])):
                extra = sorted(bags[x] - bags[t])
                if extra:
                    bags[t].add(extra[0])
                    changed = True
                    break
        if not changed and len(bags) == 1:
            t = next(iter(bags))
            if len(bags[t]) < 3:
                raise DecompositionError("graph too small for width-2 normal form")

    # insert intermediate bags between poorly overlapping neighbors
    next_id = max(bags) + 1
    for t in list(bags):
        for x in list(neighbors[t]):
            if x not in neighbors.get(t, ()):  # edge removed meanwhile
                continue
            shared = bags[t] & bags[x]
            if len(shared) == 2:
                continue
            a_side = sorted(bags[t] - shared)
            b_side = sorted(bags[x] - shared)
            if len(shared) == 1:
                c = next(iter(shared))
                mid = {a_side[-1], c, b_side[0]}
                mids = [mid]
            else:
                mids = [
                    {a_side[-2], a_side[-1], b_side[0]},
                    {a_side[-1], b_side[0], b_side[1]},
                ]
            neighbors[t].discard(x)
            neighbors[x].discard(t)
            prev = t
            for mbag in mids:
                m = next_id
                next_id += 1
                bags[m] = set(mbag)
                neighbors[m] = set()
                neighbors[prev].add(m)
                neighbors[m].add(prev)
                prev = m
            neighbors[prev].add(x)
            neighbors[x].add(prev)

    # root the tree at a fresh size-2 bag above an arbitrary node
    ids = sorted(bags)
    anchor = ids[0]
    root_bag = set(sorted(bags[anchor])[:2])
    root_id = next_id
    bags[root_id] = root_bag
    neighbors[root_id] = {anchor}
    neighbors[anchor].add(root_id)

    # orient away from the root
    parent_of = {root_id: None}
    order = [root_id]
    stack = [root_id]
    while stack:
        t = stack.pop()
        for x in neighbors[t]:
            if x not in parent_of:
                parent_of[x] = t
                order.append(x)
                stack.append(x)

    # relabel graph vertices by preorder of topmost bags so that the
    # separator of every node is its two smallest vertices
    new_label = {}
    counter = 0
    for t in order:
        p = parent_of[t]
        fresh = sorted(bags[t] - (bags[p] if p is not None else set()))
        for v in fresh:
            if v not in new_label:
                new_label[v] = counter
                counter += 1
    assert counter == g.n

    idx = {t: i for i, t in enumerate(order)}
    parents_list = [None if parent_of[t] is None else idx[parent_of[t]] for t in order]
    bags_list = [frozenset(new_label[v] for v in bags[t]) for t in order]
    w2 = Width2Decomposition(parents_list, bags_list, 0)
    relabeled = g.relabel(new_label)
    w2.validate(relabeled)
    perm = [0] * g.n
    for old, new in new_label.items():
        perm[new] = old
    return w2, perm


# ---------------------------------------------------------------------------
# connectivity massaging


def massage_connected(d: TreeDecomposition, g: Graph):
    """Refine a decomposition of a connected graph so that each node's
    component induces a connected subgraph and each separator is exactly the
    neighborhood of its component.  Returns (TreeDecomposition, f) where f
    maps new nodes to the old nodes their bags came from.

    The root node and its bag are preserved, bags only shrink (within the
    f-image), and the node count stays below node_count * |V(g)|.
    """
    if not is_connected(g):
        raise DecompositionError("massage_connected needs a connected graph")
    if not d.bags[d.root]:
        raise DecompositionError("massage_connected needs a nonempty root bag")
    d.validate(g)
    adj = adjacency(g)

    parents: list = []
    bags: list = []
    fmap: list = []

    def new_node(parent, bag, source) -> int:
        parents.append(parent)
        bags.append(frozenset(bag))
        fmap.append(source)
        return len(bags) - 1

    def recurse(nodes: list, node_bags: dict, node_children: dict, r: int,
                vertices: frozenset, parent_new: Optional[int]) -> int:
        """Process the sub-decomposition (restricted to `vertices`) rooted
        at r; attach the result under parent_new."""
        root_bag = node_bags[r] & vertices
        r2 = new_node(parent_new, root_bag, r)
        # components of G[vertices] - root bag
        rest = vertices - root_bag
        comp_seen = set()
        for s in sorted(rest):
            if s in comp_seen:
                continue
            comp = {s}
            stack = [s]
            while stack:
                u = stack.pop()
                for w in adj[u]:
                    if w in rest and w not in comp:
                        comp.add(w)
                        stack.append(w)
            comp_seen |= comp
            boundary = set()
            for v in comp:
                boundary |= adj[v] - comp
            boundary &= vertices
            region = frozenset(comp | boundary)
            # find the child of r whose subtree contains the component
            carrier = None
            for c in node_children[r]:
                sub_vertices = set()
                stack = [c]
                while stack:
                    t = stack.pop()
                    sub_vertices |= node_bags[t]
                    stack.extend(node_children[t])
                if comp & sub_vertices:
                    carrier = c
                    break
            if carrier is None:
                raise DecompositionError("component not found under any child")
            recurse(nodes, node_bags, node_children, carrier, region, r2)
        return r2

    node_bags = {t: d.bags[t] for t in range(d.node_count())}
    node_children = {t: list(d.children[t]) for t in range(d.node_count())}
    recurse(list(range(d.node_count())), node_bags, node_children, d.root,
            frozenset(range(g.n)), None)
    out = TreeDecomposition(parents, bags, 0)
    out.validate(g)
    return out, fmap


# ---------------------------------------------------------------------------
# dump format


def dump_decomposition(d: TreeDecomposition) -> str:
    lines = []
    kinds = getattr(d, "kinds", None)
    for t in range(d.node_count()):
        p = d.parents[t]
        bag = ",".join(str(v) for v in sorted(d.bags[t]))
        if kinds is None:
            kind = "plain"
        else:
            k = kinds[t]
            kind = k[0] if len(k) == 1 else f"{k[0]}:{k[1]}"
        lines.append(f"{t} parent={'-' if p is None else p} bag={{{bag}}} kind={kind}")
    return "\n".join(lines) + "\n"
