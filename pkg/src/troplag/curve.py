"""Tropical curve data model and combinatorics.

A curve is a graph mapped piecewise-linearly into Q^n.  Vertices carry
exact rational positions.  Edges carry a primitive integer direction
(oriented tail -> head, outward for rays), a positive integer weight and
an optional leaf label used to match constraint lines.

Conventions for graph nodes:

* valence >= 3 vertices are the combinatorial vertices and must balance;
* 1-valent vertices are boundary endpoints (where the curve meets the
  boundary of a polyhedral domain);
* 2-valent vertices are allowed only as collinear markings on a straight
  edge (opposite directions, equal weights); anything else 2-valent is
  rejected as degenerate.
* edges with head == None are unbounded rays.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import WorkbenchError
from .lattice import (content, gcd_primitive as _sign_normalized, is_zero,
                      primitive_raw, rank_exact, vec_add, vec_neg, vec_scale,
                      vec_sub)


@dataclass(frozen=True)
class Edge:
    tail: str
    head: str | None
    direction: tuple
    weight: int = 1
    leaf_label: int | None = None

    @property
    def bounded(self):
        return self.head is not None

    def dh(self):
        """Weighted displacement vector (the image of a unit tangent)."""
        return vec_scale(self.weight, self.direction)


@dataclass(frozen=True)
class End:
    """One end of the curve: an unbounded ray or a 1-valent endpoint."""
    edge_index: int
    kind: str                    # "ray" | "endpoint"
    attach: str                  # vertex the end hangs off
    outward: tuple               # primitive direction pointing out of the curve
    weight: int
    label: int | None
    endpoint: str | None = None  # 1-valent vertex id for endpoint ends

    def dh(self):
        return vec_scale(self.weight, self.outward)


class TropicalCurve:
    def __init__(self, dim, vertices, edges):
        self.dim = dim
        vertices = list(vertices)
        self.vertices = {vid: tuple(Fraction(c) for c in pos)
                         for vid, pos in vertices}
        if len(self.vertices) != len(vertices):
            raise WorkbenchError("INVALID_CURVE", "duplicate vertex ids")
        norm = []
        for e in edges:
            if isinstance(e, Edge):
                norm.append(Edge(e.tail, e.head, tuple(e.direction),
                                 int(e.weight), e.leaf_label))
            else:
                norm.append(Edge(e["tail"], e.get("head"),
                                 tuple(e["dir"]), int(e.get("weight", 1)),
                                 e.get("leaf_label")))
        self.edges = tuple(norm)

    def position(self, vid):
        return self.vertices[vid]

    def incident(self, vid):
        """List of (edge_index, outward_direction, weight) at a vertex."""
        out = []
        for i, e in enumerate(self.edges):
            if e.tail == vid:
                out.append((i, e.direction, e.weight))
            if e.head == vid:
                out.append((i, vec_neg(e.direction), e.weight))
        return out

    def valence(self, vid):
        return len(self.incident(vid))

    def bounded_indices(self):
        return [i for i, e in enumerate(self.edges) if e.bounded]

    def ray_indices(self):
        return [i for i, e in enumerate(self.edges) if not e.bounded]

    def trivalent_vertices(self):
        return [v for v in self.vertices if self.valence(v) >= 3]

    def marking_vertices(self):
        return [v for v in self.vertices if self.valence(v) == 2]

    def ends(self):
        """Ends in deterministic order (by label when fully labeled)."""
        ends = []
        for i, e in enumerate(self.edges):
            if not e.bounded:
                ends.append(End(i, "ray", e.tail, e.direction, e.weight,
                                e.leaf_label))
            else:
                if self.valence(e.head) == 1:
                    ends.append(End(i, "endpoint", e.tail, e.direction,
                                    e.weight, e.leaf_label, endpoint=e.head))
                if self.valence(e.tail) == 1:
                    ends.append(End(i, "endpoint", e.head,
                                    vec_neg(e.direction), e.weight,
                                    e.leaf_label, endpoint=e.tail))
        labels = [x.label for x in ends]
        if ends and all(l is not None for l in labels):
            if sorted(labels) != list(range(len(ends))):
                raise WorkbenchError(
                    "INVALID_CURVE",
                    f"end labels {sorted(labels)} are not 0..{len(ends) - 1}")
            ends.sort(key=lambda x: x.label)
        return ends

    def end_position(self, end):
        if end.kind == "endpoint":
            return self.position(end.endpoint)
        return None

    def b1(self):
        return len(self.bounded_indices()) - len(self.vertices) + 1

    def is_tree(self):
        return self.b1() == 0

    # -- geometric edges (2-valent markings smoothed away) ------------------

    def smoothed_edges(self):
        """Maximal straight chains through 2-valent markings.

        Each chain is a dict with endpoints first/second (vertex id, or
        None for an infinite ray end), the primitive direction oriented
        first -> second, the weight, member edge indices, and the sorted
        labels carried by the member edges.
        """
        markings = set(self.marking_vertices())
        seen = set()
        chains = []

        # chain terminals: a non-marking endpoint of an edge, or the
        # infinite end of a ray (encoded as None)
        terminals = []
        for i, e in enumerate(self.edges):
            if e.tail not in markings:
                terminals.append((i, e.tail))
            if e.bounded:
                if e.head not in markings:
                    terminals.append((i, e.head))
            else:
                terminals.append((i, None))

        for i, start in terminals:
            if i in seen:
                continue
            idxs = [i]
            e = self.edges[i]
            if start is None:
                cur = e.tail
            else:
                cur = e.head if e.tail == start else e.tail
            while cur is not None and cur in markings:
                nxt = next(j for j, _, _ in self.incident(cur)
                           if j not in idxs)
                idxs.append(nxt)
                e2 = self.edges[nxt]
                cur = e2.head if e2.tail == cur else e2.tail
            seen.update(idxs)

            first, second = start, cur
            e0 = self.edges[idxs[0]]
            if start is None:
                direction = vec_neg(e0.direction)
            elif e0.tail == start:
                direction = e0.direction
            else:
                direction = vec_neg(e0.direction)
            if first is None and second is not None:
                first, second = second, first
                direction = vec_neg(direction)
            if first is None and second is None:
                _, direction = _sign_normalized(direction)
            labels = tuple(sorted(self.edges[j].leaf_label for j in idxs
                                  if self.edges[j].leaf_label is not None))
            chains.append({
                "first": first, "second": second, "direction": direction,
                "weight": e0.weight, "edges": tuple(idxs), "labels": labels,
            })
        return chains


# ---------------------------------------------------------------------------
# validation


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    issues: tuple = ()

    def as_dict(self):
        return {"ok": self.ok, "issues": list(self.issues)}


def _positive_multiple(delta, direction):
    """The t > 0 with delta == t * direction, or None."""
    t = None
    for d, u in zip(delta, direction):
        if u == 0:
            if d != 0:
                return None
            continue
        s = Fraction(d, u)
        if t is None:
            t = s
        elif s != t:
            return None
    if t is None or t <= 0:
        return None
    return t


def validate_curve(c: TropicalCurve) -> ValidationReport:
    """Check every tropical-curve axiom; report all violations."""
    issues = []
    if c.dim < 2:
        issues.append("dimension must be at least 2")
    for vid, pos in c.vertices.items():
        if len(pos) != c.dim:
            issues.append(f"vertex {vid}: position has wrong dimension")
    for i, e in enumerate(c.edges):
        if e.tail not in c.vertices:
            issues.append(f"edge {i}: unknown tail {e.tail}")
            continue
        if e.head is not None and e.head not in c.vertices:
            issues.append(f"edge {i}: unknown head {e.head}")
            continue
        if len(e.direction) != c.dim:
            issues.append(f"edge {i}: direction has wrong dimension")
            continue
        if is_zero(e.direction):
            issues.append(f"edge {i}: zero direction")
            continue
        if content(e.direction) != 1:
            issues.append(f"edge {i}: direction {e.direction} not primitive")
        if not isinstance(e.weight, int) or e.weight < 1:
            issues.append(f"edge {i}: weight must be a positive integer")
        if e.bounded:
            if e.head == e.tail:
                issues.append(f"edge {i}: loop edge")
                continue
            delta = vec_sub(c.position(e.head), c.position(e.tail))
            if _positive_multiple(delta, e.direction) is None:
                issues.append(
                    f"edge {i}: head - tail is not a positive multiple "
                    f"of the direction")
    if not issues:
        # balancing and valence rules need consistent incidence data
        for vid in c.vertices:
            inc = c.incident(vid)
            if len(inc) == 0:
                issues.append(f"vertex {vid}: isolated")
            elif len(inc) == 2:
                (i1, d1, w1), (i2, d2, w2) = inc
                if w1 != w2 or vec_add(vec_scale(w1, d1),
                                       vec_scale(w2, d2)) != (0,) * c.dim:
                    issues.append(
                        f"vertex {vid}: degenerate 2-valent vertex")
            elif len(inc) >= 3:
                total = (0,) * c.dim
                for _, d, w in inc:
                    total = vec_add(total, vec_scale(w, d))
                if not is_zero(total):
                    issues.append(
                        f"vertex {vid}: balancing fails, outward sum {total}")
        # connectivity
        if c.vertices:
            seen = set()
            stack = [next(iter(c.vertices))]
            while stack:
                v = stack.pop()
                if v in seen:
                    continue
                seen.add(v)
                for i, _, _ in c.incident(v):
                    e = c.edges[i]
                    for w in (e.tail, e.head):
                        if w is not None and w not in seen:
                            stack.append(w)
            if seen != set(c.vertices):
                issues.append("curve is not connected")
        # end labels, if any are present, must be usable
        labels = [e.leaf_label for e in c.edges if e.leaf_label is not None]
        if len(labels) != len(set(labels)):
            issues.append("duplicate leaf labels")
    return ValidationReport(not issues, tuple(issues))


def require_valid(c):
    rep = validate_curve(c)
    if not rep.ok:
        raise WorkbenchError("INVALID_CURVE", "; ".join(rep.issues))
    return rep


# ---------------------------------------------------------------------------
# Betti numbers and toric degree


@dataclass(frozen=True)
class BettiDegree:
    b1: int
    kappa: int
    degree: tuple   # sorted multiset of weighted ray directions

    def as_dict(self):
        return {"b1": self.b1, "kappa": self.kappa,
                "degree": [list(d) for d in self.degree]}


def betti_and_degree(c: TropicalCurve) -> BettiDegree:
    """First Betti number, number of unbounded rays, and toric degree.

    kappa counts only genuine rays: edges clipped at a domain boundary are
    bounded and do not escape to infinity.
    """
    rays = [c.edges[i] for i in c.ray_indices()]
    degree = tuple(sorted(e.dh() for e in rays))
    return BettiDegree(c.b1(), len(rays), degree)


def toric_degree_of_ends(c: TropicalCurve):
    """Weighted outward vectors of all ends (rays and endpoints)."""
    return tuple(end.dh() for end in c.ends())


# ---------------------------------------------------------------------------
# regularity / deformation dimension


@dataclass(frozen=True)
class RegularityReport:
    def_dim: int
    expected_dim: int
    regular: bool
    rank: int

    def as_dict(self):
        return {"defDim": self.def_dim, "expectedDim": self.expected_dim,
                "regular": self.regular, "rank": self.rank}


def regularity_check(c: TropicalCurve) -> RegularityReport:
    """Rank of the cycle conditions on bounded-edge lengths.

    Every vertex must be 3-valent; the constraints say that around each
    independent cycle the weighted edge displacements sum to zero.
    """
    for vid in c.vertices:
        if c.valence(vid) != 3:
            raise WorkbenchError("NOT_TRIVALENT",
                                 f"vertex {vid} has valence {c.valence(vid)}")
    bounded = c.bounded_indices()
    pos_in_row = {ei: k for k, ei in enumerate(bounded)}
    b = len(bounded)
    n = c.dim
    b1 = c.b1()
    kappa = len(c.ray_indices())

    # spanning tree over bounded edges
    parent = {}
    tree_edge = {}
    order = []
    if c.vertices:
        root = next(iter(c.vertices))
        parent[root] = None
        stack = [root]
        in_tree = set()
        while stack:
            v = stack.pop()
            order.append(v)
            for ei, _, _ in c.incident(v):
                e = c.edges[ei]
                if not e.bounded or ei in in_tree:
                    continue
                w = e.head if e.tail == v else e.tail
                if w in parent:
                    continue
                parent[w] = v
                tree_edge[w] = ei
                in_tree.add(ei)
                stack.append(w)
        chords = [ei for ei in bounded if ei not in in_tree]
    else:
        chords = []

    rows = []
    for ei in chords:
        e = c.edges[ei]
        # cycle: chord tail -> head, then tree path head -> tail
        coeff = {ei: 1}
        # path from head up to common ancestor with tail, and down; since
        # the tree is rooted, walk both to the root and cancel
        def path_to_root(v):
            out = {}
            while parent[v] is not None:
                te = tree_edge[v]
                sign = 1 if c.edges[te].head == v else -1
                out[te] = out.get(te, 0) + sign
                v = parent[v]
            return out

        up_head = path_to_root(e.head)
        up_tail = path_to_root(e.tail)
        for k, s in up_head.items():
            coeff[k] = coeff.get(k, 0) - s
        for k, s in up_tail.items():
            coeff[k] = coeff.get(k, 0) + s
        for coord in range(n):
            row = [0] * b
            for k, s in coeff.items():
                row[pos_in_row[k]] = s * c.edges[k].dh()[coord]
            rows.append(row)

    rank = rank_exact(rows) if rows else 0
    def_dim = n + b - rank
    expected = kappa + (n - 3) * (1 - b1)
    return RegularityReport(def_dim, expected, rank == n * b1, rank)


# ---------------------------------------------------------------------------
# splitting a tree at an interior point of a bounded edge


@dataclass(frozen=True)
class SplitResult:
    h1: TropicalCurve
    r1_index: int
    h2: TropicalCurve
    r2_index: int
    point: tuple
    h1_edge_map: dict = field(default_factory=dict)  # old index -> new index
    h2_edge_map: dict = field(default_factory=dict)


def split_at_edge(c: TropicalCurve, edge_index: int, p) -> SplitResult:
    """Cut a tree at p inside a bounded edge; both halves get a new ray."""
    if c.b1() != 0:
        raise WorkbenchError("TREE_ONLY", "splitting needs a tree")
    e = c.edges[edge_index]
    if not e.bounded:
        raise WorkbenchError("SPLIT_UNBOUNDED",
                             "cannot split an unbounded edge")
    p = tuple(Fraction(x) for x in p)
    delta = vec_sub(p, c.position(e.tail))
    t = _positive_multiple(delta, e.direction)
    tot = _positive_multiple(vec_sub(c.position(e.head), c.position(e.tail)),
                             e.direction)
    if t is None or tot is None or not (0 < t < tot):
        raise WorkbenchError("SPLIT_POINT",
                             "split point must be strictly inside the edge")

    # vertices on the tail side of the edge
    side = {e.tail}
    stack = [e.tail]
    while stack:
        v = stack.pop()
        for ei, _, _ in c.incident(v):
            if ei == edge_index:
                continue
            e2 = c.edges[ei]
            for w in (e2.tail, e2.head):
                if w is not None and w not in side:
                    side.add(w)
                    stack.append(w)

    def part(vertex_set, ray_tail, ray_dir):
        verts = [(v, c.position(v)) for v in c.vertices if v in vertex_set]
        edges = []
        emap = {}
        for i in range(len(c.edges)):
            if i != edge_index and c.edges[i].tail in vertex_set:
                emap[i] = len(edges)
                edges.append(c.edges[i])
        edges.append(Edge(ray_tail, None, ray_dir, e.weight, None))
        cur = TropicalCurve(c.dim, verts, edges)
        return cur, len(edges) - 1, emap

    other = set(c.vertices) - side
    h1, r1, map1 = part(side, e.tail, e.direction)
    h2, r2, map2 = part(other, e.head, vec_neg(e.direction))
    return SplitResult(h1, r1, h2, r2, p, map1, map2)


# ---------------------------------------------------------------------------
# abstract 3-valent tree topologies (enumerator support)


@dataclass(frozen=True)
class TreeTopology:
    """Labeled 3-valent tree: leaves 0..kappa-1, internal nodes >= kappa."""
    kappa: int
    edges: tuple    # sorted (a, b) pairs with a < b

    def adjacency(self):
        adj = {}
        for a, b in self.edges:
            adj.setdefault(a, []).append(b)
            adj.setdefault(b, []).append(a)
        return adj

    def internal_edges(self):
        return [e for e in self.edges
                if e[0] >= self.kappa and e[1] >= self.kappa]

    def leaf_neighbor(self, j):
        for a, b in self.edges:
            if a == j:
                return b
            if b == j:
                return a
        raise KeyError(j)

    def side_leaves(self, a, b):
        """Leaves in the component of b after removing edge (a, b)."""
        adj = self.adjacency()
        seen = {a, b}
        stack = [b]
        out = []
        while stack:
            x = stack.pop()
            if x < self.kappa:
                out.append(x)
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        return sorted(set(out))


def trivalent_trees(kappa: int):
    """All (2k-5)!! labeled 3-valent trees, by leaf insertion in order."""
    if kappa < 3:
        raise WorkbenchError("KAPPA_TOO_SMALL",
                             "need at least three leaves")
    base = TreeTopology(kappa, ((0, kappa), (1, kappa), (2, kappa)))
    trees = [base]
    next_internal = kappa + 1
    for leaf in range(3, kappa):
        new_trees = []
        for t in trees:
            m = next_internal
            for e in t.edges:
                rest = [x for x in t.edges if x != e]
                rest += [tuple(sorted((e[0], m))), tuple(sorted((e[1], m))),
                         tuple(sorted((leaf, m)))]
                new_trees.append(TreeTopology(kappa, tuple(sorted(rest))))
        trees = new_trees
        next_internal += 1
    return trees


@dataclass(frozen=True)
class Skeleton:
    """A tree topology with direction data on every edge."""
    topology: TreeTopology
    dh: dict            # (a, b) oriented a -> b: weighted integer vector
    degenerate: tuple   # internal edges with zero direction vector

    @property
    def ok(self):
        return not self.degenerate

    def weight(self, a, b):
        return content(self.dh[(a, b)])

    def primitive(self, a, b):
        return primitive_raw(self.dh[(a, b)])


def internal_directions_from_leaves(topology: TreeTopology,
                                    degree) -> Skeleton:
    """Propagate leaf vectors to internal edges by balancing.

    The vector on an internal edge, oriented a -> b, is the sum of the
    leaf degree vectors on the b side.  A zero internal vector makes the
    topology DEGENERATE for this degree.
    """
    degree = [tuple(d) for d in degree]
    if len(degree) != topology.kappa:
        raise WorkbenchError("LABEL_MISMATCH",
                             f"{len(degree)} degree entries for "
                             f"{topology.kappa} leaves")
    dh = {}
    degenerate = []
    for a, b in topology.edges:
        if a < topology.kappa:
            v = vec_neg(degree[a])     # oriented leaf -> node
            dh[(a, b)] = v
            dh[(b, a)] = degree[a]
        else:
            s = topology.side_leaves(a, b)
            v = tuple(sum(degree[j][i] for j in s)
                      for i in range(len(degree[0])))
            dh[(a, b)] = v
            dh[(b, a)] = vec_neg(v)
            if is_zero(v):
                degenerate.append((a, b))
    return Skeleton(topology, dh, tuple(degenerate))


# ---------------------------------------------------------------------------
# combinatorial type


def _refine_colors(nodes, neighbors):
    base = {v: neighbors(v, lambda _: 0) for v in nodes}
    color = {v: (base[v], 0) for v in nodes}
    while True:
        fresh = {v: (color[v], neighbors(v, lambda w: color[w]))
                 for v in nodes}
        # canonicalize to small ints to keep tuples bounded
        ranks = {t: i for i, t in enumerate(sorted(set(fresh.values())))}
        new = {v: (base[v], ranks[fresh[v]]) for v in nodes}
        if len(set(new.values())) == len(set(color.values())):
            return new
        color = new


def combinatorial_type(c: TropicalCurve) -> str:
    """Canonical encoding of (graph, directions, weights, end labels).

    Stable under re-indexing of vertices; 2-valent markings are smoothed
    first so the encoding is a homeomorphism invariant.
    """
    chains = c.smoothed_edges()
    nodes = sorted(v for v in c.vertices if c.valence(v) != 2)

    # incident descriptors per node
    inc = {v: [] for v in nodes}
    for k, ch in enumerate(chains):
        lab = tuple(sorted(ch["labels"]))
        if ch["first"] is not None:
            inc[ch["first"]].append((k, ch["direction"], ch["weight"], lab))
        if ch["second"] is not None:
            inc[ch["second"]].append((k, vec_neg(ch["direction"]),
                                      ch["weight"], lab))

    def neighbors(v, f):
        out = []
        for k, d, w, lab in inc[v]:
            ch = chains[k]
            others = [x for x in (ch["first"], ch["second"]) if x != v]
            other = others[0] if others else None
            out.append((tuple(d), w, lab, other is None,
                        f(other) if other is not None else -1))
        return tuple(sorted(out))

    colors = _refine_colors(nodes, neighbors)
    classes = {}
    for v in nodes:
        classes.setdefault(colors[v], []).append(v)
    ordered_classes = [sorted(classes[k]) for k in sorted(classes)]

    total = 1
    for cl in ordered_classes:
        for i in range(2, len(cl) + 1):
            total *= i
    if total > 100000:
        raise WorkbenchError("TYPE_TOO_SYMMETRIC",
                             "too many candidate labelings")

    best = None
    for perm_parts in itertools.product(
            *[itertools.permutations(cl) for cl in ordered_classes]):
        index = {}
        for part in perm_parts:
            for v in part:
                index[v] = len(index)
        enc_edges = []
        for ch in chains:
            a, b = ch["first"], ch["second"]
            d = ch["direction"]
            lab = tuple(sorted(ch["labels"]))
            if a is None and b is None:
                enc_edges.append(("line", tuple(d), ch["weight"], lab))
                continue
            if a is None or (b is not None and index[b] < index[a]):
                a, b, d = b, a, vec_neg(d)
            if b is None:
                enc_edges.append(("ray", index[a], tuple(d),
                                  ch["weight"], lab))
            else:
                enc_edges.append(("seg", index[a], index[b], tuple(d),
                                  ch["weight"], lab))
        enc = tuple(sorted(enc_edges))
        if best is None or enc < best:
            best = enc
    return repr((c.dim, best))


# ---------------------------------------------------------------------------
# extension of a clipped curve to rays


def extend_curve(c: TropicalCurve) -> TropicalCurve:
    """Replace 1-valent endpoints by unbounded rays from their neighbors."""
    endpoints = {v for v in c.vertices if c.valence(v) == 1}
    if not endpoints:
        return c
    edges = []
    for e in c.edges:
        if e.bounded and e.head in endpoints and e.tail in endpoints:
            raise WorkbenchError(
                "NEEDS_MARKING",
                "a single edge with two endpoints needs an interior marking")
        if e.bounded and e.head in endpoints:
            edges.append(Edge(e.tail, None, e.direction, e.weight,
                              e.leaf_label))
        elif e.bounded and e.tail in endpoints:
            edges.append(Edge(e.head, None, vec_neg(e.direction), e.weight,
                              e.leaf_label))
        else:
            edges.append(e)
    verts = [(v, p) for v, p in c.vertices.items() if v not in endpoints]
    return TropicalCurve(c.dim, verts, edges)
