"""Tropical multiplicities of rational curves through line configurations.

Two independent routes to the same integer:

* the recursive mixed product of rotational momenta, propagated through
  the tree towards a root;
* the absolute determinant of the evaluation matrix (translations plus
  one column per bounded edge).

Momentum conventions: a leaf carries d x z for the outward degree vector
d; at a junction the two arriving momenta combine to (m1 x m2) x dh with
dh pointing towards the root.  The terminal pairing at a leaf root is
the coefficient of the cross product along the root edge; dividing by
the root edge weight keeps the value equal to the determinant for
arbitrary weights (boundary-even inputs all have weight 1).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .curve import (TropicalCurve, Edge, Skeleton,
                    internal_directions_from_leaves, split_at_edge,
                    trivalent_trees)
from .domain import LineConfiguration
from .errors import WorkbenchError
from .lattice import (content, cross, det_bareiss, dot, is_zero, mixed,
                      primitive_raw, solve_cross, solve_dot, solve_exact,
                      vec_add, vec_neg, vec_scale)


@dataclass(frozen=True)
class RotationalMomentum:
    vector: tuple
    n: int
    primitive: tuple

    @classmethod
    def from_vector(cls, v):
        v = tuple(v)
        g = content(v)
        p = tuple(x // g for x in v) if g else v
        for x in p:
            if x != 0:
                if x < 0:
                    p = tuple(-y for y in p)
                break
        return cls(v, g, p)

    @property
    def zero(self):
        return self.n == 0

    def as_dict(self):
        return {"vector": list(self.vector), "n": self.n,
                "primitivePart": list(self.primitive)}


def leaf_momentum(d, z) -> RotationalMomentum:
    """Rotational momentum of a leaf: the vector product d x z.

    A zero result (d parallel to z) is allowed and flagged via n == 0.
    """
    if is_zero(d):
        raise WorkbenchError("ZERO_DIRECTION", "leaf direction is zero")
    return RotationalMomentum.from_vector(cross(d, z))


def propagate(r1: RotationalMomentum, r2: RotationalMomentum,
              d_out) -> RotationalMomentum:
    """Momentum of the outgoing edge: (r1 x r2) x d_out."""
    if is_zero(d_out):
        raise WorkbenchError("ZERO_DIRECTION", "outgoing direction is zero")
    return RotationalMomentum.from_vector(
        cross(cross(r1.vector, r2.vector), d_out))


def pairing_coefficient(a: RotationalMomentum, b: RotationalMomentum,
                        d_root) -> int:
    """GCD of the coordinates of a x b, which must be parallel to d_root."""
    c = cross(a.vector, b.vector)
    if is_zero(c):
        return 0
    if not is_zero(cross(c, d_root)):
        raise WorkbenchError("INCONSISTENT_MOMENTA",
                             f"{c} is not parallel to {tuple(d_root)}")
    return content(c)


# ---------------------------------------------------------------------------
# shared rooted-tree form


class Problem:
    """A 3-valent tree with a constraint direction at every end.

    Ends are the markers ("end", i); junctions are vertex keys.  Chains
    carry the weighted displacement vector dh oriented a -> b.
    """

    def __init__(self, dim):
        self.dim = dim
        self.nodes = set()
        self.adj = {}      # key -> [(other, dh key->other, weight, chain)]
        self.end_z = {}

    @property
    def kappa(self):
        return len(self.end_z)

    def ends(self):
        return sorted(self.end_z, key=lambda m: m[1])

    def neighbors(self, key):
        return self.adj.get(key, [])

    def towards(self, a, b):
        for other, dh, w, cid in self.neighbors(a):
            if other == b:
                return dh, w, cid
        raise WorkbenchError("INTERNAL_INCONSISTENCY", f"no chain {a}->{b}")

    def add_chain(self, a, b, dh_ab, weight, chain_id):
        self.adj.setdefault(a, []).append((b, tuple(dh_ab), weight,
                                           chain_id))
        self.adj.setdefault(b, []).append((a, vec_neg(dh_ab), weight,
                                           chain_id))

    # -- momentum propagation ------------------------------------------------

    def outward(self, end):
        """Weighted outward degree vector at an end."""
        (other, dh, w, cid), = self.neighbors(end)
        return vec_neg(dh)

    def end_momentum(self, end) -> RotationalMomentum:
        return leaf_momentum(self.outward(end), self.end_z[end])

    def subtree_momentum(self, at, parent):
        """Momentum flowing from the subtree behind `at` towards `parent`."""
        dh_out, _, _ = self.towards(at, parent)
        if at in self.end_z:
            return cross(vec_neg(dh_out), self.end_z[at])
        arrived = [self.subtree_momentum(o, at)
                   for o, _, _, _ in self.neighbors(at) if o != parent]
        if len(arrived) != 2:
            raise WorkbenchError("NOT_TRIVALENT",
                                 f"junction {at} is not 3-valent")
        return cross(cross(arrived[0], arrived[1]), dh_out)

    def momentum_at_end(self, end):
        """Propagated momentum arriving at `end`, with root edge data."""
        (other, dh, w, cid), = self.neighbors(end)
        return self.subtree_momentum(other, end), w, cid


def build_problem(c_or_sk, zs) -> Problem:
    if isinstance(c_or_sk, Skeleton):
        return _problem_from_skeleton(c_or_sk, zs)
    return _problem_from_curve(c_or_sk, zs)


def _problem_from_curve(c: TropicalCurve, zs) -> Problem:
    ends = c.ends()
    if isinstance(zs, dict):
        z_list = []
        for e in ends:
            if e.edge_index not in zs:
                raise WorkbenchError("MISSING_Z",
                                     f"no constraint direction for edge "
                                     f"{e.edge_index}")
            z_list.append(tuple(zs[e.edge_index]))
    else:
        z_list = [tuple(z) for z in zs]
        if len(z_list) != len(ends):
            raise WorkbenchError("MISSING_Z",
                                 f"{len(z_list)} directions for "
                                 f"{len(ends)} ends")
    prob = Problem(c.dim)
    for i, z in enumerate(z_list):
        prob.end_z[("end", i)] = z
    trivalent = set(c.trivalent_vertices())
    prob.nodes.update(trivalent)

    # an end is recognized by the edge it sits on together with its side
    marker_by_edge_side = {}
    for i, e in enumerate(ends):
        side = e.endpoint if e.kind == "endpoint" else None
        marker_by_edge_side[(e.edge_index, side)] = ("end", i)

    def resolve(vertex, chain):
        if vertex is not None and vertex in trivalent:
            return vertex
        for idx in chain["edges"]:
            key = (idx, vertex)
            if key in marker_by_edge_side:
                return marker_by_edge_side[key]
        raise WorkbenchError("INTERNAL_INCONSISTENCY",
                             f"chain endpoint {vertex} is neither a "
                             f"junction nor an end")

    for cid, ch in enumerate(c.smoothed_edges()):
        a = resolve(ch["first"], ch)
        b = resolve(ch["second"], ch)
        prob.add_chain(a, b, vec_scale(ch["weight"], ch["direction"]),
                       ch["weight"], cid)
    return prob


def _problem_from_skeleton(sk: Skeleton, zs) -> Problem:
    topo = sk.topology
    prob = Problem(3)
    for j in range(topo.kappa):
        prob.end_z[("end", j)] = tuple(zs[j])
    for n, nb in topo.adjacency().items():
        if n >= topo.kappa:
            prob.nodes.add(n)
    for a, b in topo.edges:
        ka = ("end", a) if a < topo.kappa else a
        kb = ("end", b) if b < topo.kappa else b
        prob.add_chain(ka, kb, sk.dh[(a, b)], content(sk.dh[(a, b)]), (a, b))
    return prob


# ---------------------------------------------------------------------------
# the mixed h-product


def mixed_h_product(c_or_sk, zs, root=None) -> int:
    """|mixed product of rotational momenta| towards the chosen root.

    The magnitude does not depend on the root, which may be ("end", j),
    a 3-valent vertex id, or None for the first end.  With exactly two
    ends the value is |mixed(z1, z2, u)| for the primitive direction u
    of the single edge.
    """
    if isinstance(c_or_sk, TropicalCurve) and c_or_sk.b1() != 0:
        raise WorkbenchError("TREE_ONLY", "the mixed product needs a tree")
    prob = build_problem(c_or_sk, zs)
    ends = prob.ends()
    if len(ends) < 2:
        raise WorkbenchError("KAPPA_TOO_SMALL", "need at least two ends")
    if len(ends) == 2:
        e0, e1 = ends
        (other, dh, w, cid), = prob.neighbors(e0)
        if other != e1:
            raise WorkbenchError("NOT_TRIVALENT",
                                 "a two-end curve must be a single line")
        return abs(mixed(prob.end_z[e0], prob.end_z[e1], primitive_raw(dh)))
    if root is None:
        root = ends[0]
    if isinstance(root, tuple) and len(root) == 2 and root[0] == "end":
        if root not in prob.end_z:
            raise WorkbenchError("BAD_ROOT", f"no end {root}")
        rho_in, w_root, _ = prob.momentum_at_end(root)
        rho_root = prob.end_momentum(root)
        k = pairing_coefficient(RotationalMomentum.from_vector(rho_in),
                                rho_root, prob.outward(root))
        if k % w_root != 0:
            raise WorkbenchError("INTERNAL_INCONSISTENCY",
                                 "pairing not divisible by root weight")
        return k // w_root
    if root not in prob.nodes:
        raise WorkbenchError("BAD_ROOT", f"no 3-valent vertex {root!r}")
    arrived = [prob.subtree_momentum(o, root)
               for o, _, _, _ in prob.neighbors(root)]
    if len(arrived) != 3:
        raise WorkbenchError("NOT_TRIVALENT", f"vertex {root!r} is not 3-valent")
    return abs(mixed(*arrived))


def all_roots(c_or_sk, zs):
    """Every admissible root: all ends and all 3-valent vertices."""
    prob = build_problem(c_or_sk, zs)
    roots = list(prob.ends())
    if len(roots) > 2:
        roots += sorted(prob.nodes, key=repr)
    return roots


# ---------------------------------------------------------------------------
# the evaluation matrix


@dataclass(frozen=True)
class EvaluationMatrix:
    entries: tuple
    row_labels: tuple
    col_labels: tuple
    ref: object

    def determinant(self) -> int:
        return det_bareiss(self.entries)

    def as_dict(self):
        return {"entries": [list(r) for r in self.entries],
                "rows": list(self.row_labels),
                "cols": list(self.col_labels),
                "ref": repr(self.ref)}


@dataclass(frozen=True)
class MultiplicityValue:
    value: int
    method: str          # "RECURSIVE" | "DETERMINANT"
    note: str = ""

    def as_dict(self):
        return {"value": self.value, "method": self.method,
                "note": self.note}


def ev_matrix(c_or_sk, zs, ref=None) -> EvaluationMatrix:
    """Evaluation matrix: 3 translation columns + one per bounded edge.

    Row j carries the rotational momentum of end j in the translation
    block and mixed(d_j, z_j, dh(e)) in the column of each bounded edge
    on the path from the reference junction to end j.
    """
    if isinstance(c_or_sk, TropicalCurve) and c_or_sk.b1() != 0:
        raise WorkbenchError("TREE_ONLY",
                             "evaluation matrix needs a tree")
    prob = build_problem(c_or_sk, zs)
    ends = prob.ends()
    kappa = len(ends)
    if kappa < 3:
        raise WorkbenchError("KAPPA_TOO_SMALL",
                             "evaluation matrix needs at least three ends")
    if prob.dim != 3:
        raise WorkbenchError("DIMENSION_MISMATCH",
                             "evaluation matrix is a 3-space construction")
    internal = sorted(
        {cid for key in prob.nodes
         for other, dh, w, cid in prob.neighbors(key)
         if other in prob.nodes}, key=repr)
    if kappa != 3 + len(internal):
        raise WorkbenchError("NOT_TRIVALENT",
                             f"{kappa} ends vs {len(internal)} bounded edges")
    if ref is None:
        ref = prob.neighbors(ends[0])[0][0]
    if ref not in prob.nodes:
        raise WorkbenchError("BAD_ROOT", f"reference {ref!r} is not a junction")

    # paths from ref to each end through the junction tree
    def path_to(end):
        found = []

        def dfs(at, parent, acc):
            if at == end:
                found.append(list(acc))
                return True
            if at in prob.end_z:
                return False
            for other, dh, w, cid in prob.neighbors(at):
                if other == parent:
                    continue
                acc.append((cid, dh))
                if dfs(other, at, acc):
                    return True
                acc.pop()
            return False

        dfs(ref, None, [])
        return found[0]

    col_of = {cid: 3 + k for k, cid in enumerate(internal)}
    rows = []
    for e in ends:
        rho = cross(prob.outward(e), prob.end_z[e])
        row = list(rho) + [0] * len(internal)
        for cid, dh in path_to(e):
            if cid in col_of:
                row[col_of[cid]] = dot(rho, dh)
        rows.append(tuple(row))
    cols = ("t0", "t1", "t2") + tuple(f"e{cid}" for cid in internal)
    return EvaluationMatrix(tuple(rows), tuple(m[1] for m in ends), cols,
                            ref)


def multiplicity_det(m: EvaluationMatrix) -> MultiplicityValue:
    return MultiplicityValue(abs(m.determinant()), "DETERMINANT")


# ---------------------------------------------------------------------------
# the splitting identity


@dataclass(frozen=True)
class SplittingReport:
    lhs: int
    rhs: int
    holds: bool
    m1: int
    m2: int
    weight: int
    point: tuple
    z_a: tuple
    z_b: tuple

    def as_dict(self):
        return {"lhs": self.lhs, "rhs": self.rhs, "holds": self.holds,
                "m1": self.m1, "m2": self.m2, "w": self.weight,
                "point": [str(x) for x in self.point],
                "za": list(self.z_a), "zb": list(self.z_b)}


def splitting_check(c: TropicalCurve, edge_index: int,
                    zs) -> SplittingReport:
    """Check the edge-splitting factorization of the multiplicity.

    The curve is cut at the midpoint of the bounded edge; the two halves
    are completed by auxiliary lines through the cut point.  The line for
    the first half pairs to 1 against the primitive part of the arriving
    momentum; the line for the second half is the cross-solve of the edge
    direction against that primitive part.  Then

        m(c) == m(h1, l1 + l_a) * m(h2, l2 + l_b) / w(e).
    """
    e = c.edges[edge_index]
    if not e.bounded:
        raise WorkbenchError("SPLIT_UNBOUNDED", "edge must be bounded")
    mid = tuple(Fraction(a + b, 2) for a, b in
                zip(c.position(e.tail), c.position(e.head)))
    res = split_at_edge(c, edge_index, mid)

    # constraint directions keyed by edge index, transported to the parts
    ends = c.ends()
    if isinstance(zs, dict):
        z_of_edge = dict(zs)
    else:
        z_of_edge = {end.edge_index: tuple(z)
                     for end, z in zip(ends, list(zs))}

    def part_z(emap, ray_index, extra):
        out = {ray_index: extra}
        for old, new in emap.items():
            if old in z_of_edge:
                out[new] = z_of_edge[old]
        return out

    lhs = mixed_h_product(c, zs)
    # the momentum arriving at the new ray ignores the ray's own direction
    prob1 = build_problem(res.h1,
                          part_z(res.h1_edge_map, res.r1_index, (1, 1, 1)))
    # momentum arriving at the new ray of h1
    marker = None
    for i, end in enumerate(res.h1.ends()):
        if end.edge_index == res.r1_index:
            marker = ("end", i)
    rho_r1, _, _ = prob1.momentum_at_end(marker)
    if is_zero(rho_r1):
        raise WorkbenchError("SPLIT_DEGENERATE",
                             "propagated momentum at the cut vanishes")
    rho_prime = primitive_raw(rho_r1)
    u = e.direction
    z_a = solve_dot(rho_prime, 1)
    z_b = solve_cross(u, vec_neg(rho_prime))
    m1 = mixed_h_product(res.h1, part_z(res.h1_edge_map, res.r1_index, z_a))
    m2 = mixed_h_product(res.h2, part_z(res.h2_edge_map, res.r2_index, z_b))
    num = m1 * m2
    if num % e.weight != 0:
        raise WorkbenchError("INTERNAL_INCONSISTENCY",
                             "splitting product not divisible by the weight")
    rhs = num // e.weight
    return SplittingReport(lhs, rhs, lhs == rhs, m1, m2, e.weight, mid,
                           tuple(z_a), tuple(z_b))


# ---------------------------------------------------------------------------
# enumeration of rational curves through a boundary configuration


KAPPA_CAP = 8


@dataclass(frozen=True)
class TypeOutcome:
    topology: tuple          # tree edges
    status: str              # "accepted" | "rejected" | "degenerate"
    multiplicity: int
    curve: TropicalCurve | None

    def as_dict(self):
        return {"topology": [list(e) for e in self.topology],
                "status": self.status,
                "multiplicity": self.multiplicity,
                "curve": None if self.curve is None else "solved"}


@dataclass(frozen=True)
class EnumerationResult:
    total: int
    per_type: tuple

    def as_dict(self):
        return {"total": self.total,
                "perType": [t.as_dict() for t in self.per_type]}


def enumerate_count(degree, lines: LineConfiguration,
                    kappa_cap: int = KAPPA_CAP) -> EnumerationResult:
    """Count rational curves of the given degree through the lines.

    Enumerates all (2k-5)!! labeled 3-valent trees, solves the exact
    linear system per type, keeps the unique solution when all bounded
    edge lengths are positive, and sums |det| of the evaluation
    matrices.  Exactly-zero lengths, or a solvable singular system, mean
    the configuration is not generic.
    """
    degree = [tuple(d) for d in degree]
    kappa = len(degree)
    if kappa != len(lines):
        raise WorkbenchError("LABEL_MISMATCH",
                             f"{kappa} degree entries vs {len(lines)} lines")
    if kappa > kappa_cap:
        raise WorkbenchError("KAPPA_CAP",
                             f"kappa = {kappa} exceeds the cap {kappa_cap}")
    if kappa < 3:
        raise WorkbenchError("KAPPA_TOO_SMALL", "need at least three lines")
    if any(len(d) != 3 for d in degree):
        raise WorkbenchError("DIMENSION_MISMATCH", "degree must be 3-vectors")
    if not is_zero(tuple(sum(d[i] for d in degree) for i in range(3))):
        raise WorkbenchError("UNBALANCED_DEGREE", "degree does not sum to 0")

    zs = [l.direction for l in lines.lines]
    qs = [l.point for l in lines.lines]
    rhos = [cross(d, z) for d, z in zip(degree, zs)]

    outcomes = []
    total = 0
    for tree in trivalent_trees(kappa):
        sk = internal_directions_from_leaves(tree, degree)
        if not sk.ok:
            outcomes.append(TypeOutcome(tree.edges, "degenerate", 0, None))
            continue
        m = ev_matrix(sk, zs)
        det = m.determinant()
        internal = [cid for cid in tree.internal_edges()]
        internal.sort()
        ref = tree.leaf_neighbor(0)

        adj = tree.adjacency()

        def tree_path(target):
            out = []

            def dfs(at, parent):
                if at == target:
                    return True
                if at < tree.kappa:
                    return False
                for other in adj[at]:
                    if other == parent:
                        continue
                    key = tuple(sorted((at, other)))
                    out.append((key, sk.dh[(at, other)]))
                    if dfs(other, at):
                        return True
                    out.pop()
                return False

            dfs(ref, None)
            return out

        col_of = {cid: 3 + k for k, cid in enumerate(internal)}
        rows = []
        rhs = []
        paths = {}
        for j in range(kappa):
            row = list(rhos[j]) + [0] * len(internal)
            paths[j] = tree_path(j)
            for key, dh in paths[j]:
                if key in col_of:
                    row[col_of[key]] = dot(rhos[j], dh)
            rows.append(row)
            rhs.append(dot(rhos[j], qs[j]))
        sol = solve_exact(rows, rhs)
        if det == 0:
            # a structurally singular type carries no curves for generic
            # base points; a solvable singular system is a wall crossing
            if sol.status == "none":
                outcomes.append(TypeOutcome(tree.edges, "singular", 0, None))
                continue
            raise WorkbenchError(
                "NON_GENERIC_CONFIG",
                f"singular system for topology {tree.edges}")
        if not sol.unique:
            raise WorkbenchError("NON_GENERIC_CONFIG",
                                 f"singular system for topology {tree.edges}")
        tau = sol.solution[:3]
        lengths = {cid: sol.solution[col_of[cid]] for cid in internal}
        if any(l == 0 for l in lengths.values()):
            raise WorkbenchError("NON_GENERIC_CONFIG",
                                 f"zero edge length in topology {tree.edges}")
        if any(l < 0 for l in lengths.values()):
            outcomes.append(TypeOutcome(tree.edges, "rejected",
                                        abs(det), None))
            continue

        node_pos = {ref: tuple(tau)}

        def fill_positions(at, parent):
            for other in adj[at]:
                if other == parent or other < tree.kappa:
                    continue
                key = tuple(sorted((at, other)))
                node_pos[other] = vec_add(
                    node_pos[at], vec_scale(lengths[key], sk.dh[(at, other)]))
                fill_positions(other, at)

        fill_positions(ref, None)
        verts = [(f"n{k}", node_pos[k]) for k in sorted(node_pos)]
        edges = []
        for a, b in tree.edges:
            if a < tree.kappa:
                edges.append(Edge(f"n{b}", None, primitive_raw(degree[a]),
                                  content(degree[a]), a))
            elif b >= tree.kappa:
                edges.append(Edge(f"n{a}", f"n{b}",
                                  primitive_raw(sk.dh[(a, b)]),
                                  content(sk.dh[(a, b)]), None))
        curve = TropicalCurve(3, verts, edges)
        outcomes.append(TypeOutcome(tree.edges, "accepted", abs(det), curve))
        total += abs(det)
    return EnumerationResult(total, tuple(outcomes))
