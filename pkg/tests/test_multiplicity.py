import random
from fractions import Fraction

import pytest

from conftest import rand_primitive, random_tree_problem

from troplag.curve import Edge, TropicalCurve, validate_curve
from troplag.domain import LineConfiguration
from troplag.errors import WorkbenchError
from troplag.lattice import cross, dot, is_zero
from troplag.multiplicity import (RotationalMomentum, all_roots,
                                  enumerate_count, ev_matrix, leaf_momentum,
                                  mixed_h_product, multiplicity_det,
                                  pairing_coefficient, propagate,
                                  splitting_check)


def poincare_curve():
    return TropicalCurve(3, [("o", (0, 0, 0)), ("p1", (-1, 0, 0)),
                             ("p2", (0, -1, 0)), ("p3", (1, 1, 0))],
                         [Edge("o", "p1", (-1, 0, 0), 1, 0),
                          Edge("o", "p2", (0, -1, 0), 1, 1),
                          Edge("o", "p3", (1, 1, 0), 1, 2)])


POINCARE_Z = [(0, 1, 2), (1, 0, 3), (0, 1, 5)]


def simplex_tripod_curve():
    return TropicalCurve(3, [
        ("p", ("1/4", "1/4", "1/4")), ("a", ("1/4", 0, 0)),
        ("b", ("1/2", "1/2", 0)), ("c", (0, "1/4", "3/4"))], [
        Edge("p", "a", (0, -1, -1), 1, 0),
        Edge("p", "b", (1, 1, -1), 1, 1),
        Edge("p", "c", (-1, 0, 2), 1, 2)])


TRIPOD_Z = [(1, 0, 0), (1, -1, 0), (0, 1, -1)]


# ---------------------------------------------------------------------------
# momenta


def test_leaf_momenta_paper_values():
    assert leaf_momentum((-1, 0, 0), (0, 1, 2)).vector == (0, 2, -1)
    assert leaf_momentum((0, -1, 0), (1, 0, 3)).vector == (-3, 0, 1)
    assert leaf_momentum((1, 1, 0), (0, 1, 5)).vector == (5, -5, 1)
    zero = leaf_momentum((1, 0, 0), (1, 0, 0))
    assert zero.zero and zero.vector == (0, 0, 0)


def test_propagate_example():
    r1 = RotationalMomentum.from_vector((0, 2, -1))
    r2 = RotationalMomentum.from_vector((-3, 0, 1))
    out = propagate(r1, r2, (1, 1, 0))
    assert out.vector == (-6, 6, -1)
    swapped = propagate(r2, r1, (1, 1, 0))
    assert swapped.vector == (6, -6, 1)
    assert swapped.n == out.n and swapped.primitive == out.primitive


def test_propagate_orthogonal_and_parallel():
    rng = random.Random(51)
    for _ in range(100):
        r1 = RotationalMomentum.from_vector(
            tuple(rng.randint(-6, 6) for _ in range(3)))
        r2 = RotationalMomentum.from_vector(
            tuple(rng.randint(-6, 6) for _ in range(3)))
        d = rand_primitive(rng)
        out = propagate(r1, r2, d)
        assert dot(out.vector, d) == 0
    parallel = propagate(RotationalMomentum.from_vector((1, 2, 3)),
                         RotationalMomentum.from_vector((2, 4, 6)),
                         (1, 0, 0))
    assert parallel.zero


def test_pairing_coefficient_examples():
    a = RotationalMomentum.from_vector((-6, 6, -1))
    b = RotationalMomentum.from_vector((5, -5, 1))
    assert pairing_coefficient(a, b, (1, 1, 0)) == 1
    for p, q in [(2, 1), (5, 2), (7, 3)]:
        x = RotationalMomentum.from_vector((0, 1, 0))
        y = RotationalMomentum.from_vector((-p, -q, 0))
        assert pairing_coefficient(x, y, (0, 0, 1)) == p
    same = RotationalMomentum.from_vector((1, 1, 0))
    assert pairing_coefficient(same, same, (0, 0, 1)) == 0
    with pytest.raises(WorkbenchError) as err:
        pairing_coefficient(RotationalMomentum.from_vector((1, 0, 0)),
                            RotationalMomentum.from_vector((0, 1, 0)),
                            (1, 0, 0))
    assert err.value.code == "INCONSISTENT_MOMENTA"


# ---------------------------------------------------------------------------
# mixed h-product


def test_mixed_h_product_poincare_all_roots():
    for root in all_roots(poincare_curve(), POINCARE_Z):
        assert mixed_h_product(poincare_curve(), POINCARE_Z, root) == 1


def test_mixed_h_product_simplex_tripod():
    assert mixed_h_product(simplex_tripod_curve(), TRIPOD_Z) == 4


def test_mixed_h_product_single_edge():
    dis = TropicalCurve(3, [("m", (0, 0, 0)), ("b0", (-1, 1, 0)),
                            ("b1", (1, -1, 0))],
                        [Edge("m", "b0", (-1, 1, 0), 1, 0),
                         Edge("m", "b1", (1, -1, 0), 1, 1)])
    assert mixed_h_product(dis, [(1, 0, 0), (1, 0, 0)]) == 0
    lens = TropicalCurve(3, [("m", (0, 0, "1/2")), ("b0", (0, 0, 0)),
                             ("b1", (0, 0, 1))],
                         [Edge("m", "b0", (0, 0, -1), 1, 0),
                          Edge("m", "b1", (0, 0, 1), 1, 1)])
    for p, q in [(1, 0), (2, 1), (5, 2), (7, 3)]:
        assert mixed_h_product(lens, [(1, 0, 0), (-q, p, 0)]) == p


def test_mixed_h_product_rejects_high_valence():
    star = TropicalCurve(3, [("v", (0, 0, 0))],
                         [Edge("v", None, (1, 0, 0), 1, 0),
                          Edge("v", None, (0, 1, 0), 1, 1),
                          Edge("v", None, (0, 0, 1), 1, 2),
                          Edge("v", None, (-1, -1, -1), 1, 3)])
    with pytest.raises(WorkbenchError) as err:
        mixed_h_product(star, [(0, 1, 2)] * 4)
    assert err.value.code == "NOT_TRIVALENT"


# ---------------------------------------------------------------------------
# evaluation matrices


def test_ev_matrix_poincare():
    m = ev_matrix(poincare_curve(), POINCARE_Z)
    assert m.entries == ((0, 2, -1), (-3, 0, 1), (5, -5, 1))
    assert multiplicity_det(m).value == 1


def test_ev_matrix_simplex_tripod():
    assert multiplicity_det(ev_matrix(simplex_tripod_curve(), TRIPOD_Z)).value == 4


def test_ev_matrix_needs_tree():
    pad = (0,)
    verts = [("v0", (0, 0) + pad), ("v1", (1, 0) + pad),
             ("v2", (1, 1) + pad), ("v3", (0, 1) + pad)]
    edges = [
        Edge("v0", "v1", (1, 0) + pad), Edge("v1", "v2", (0, 1) + pad),
        Edge("v3", "v2", (1, 0) + pad), Edge("v0", "v3", (0, 1) + pad),
        Edge("v0", None, (-1, -1) + pad, 1, 0),
        Edge("v1", None, (1, -1) + pad, 1, 1),
        Edge("v2", None, (1, 1) + pad, 1, 2),
        Edge("v3", None, (-1, 1) + pad, 1, 3)]
    cyc = TropicalCurve(3, verts, edges)
    with pytest.raises(WorkbenchError) as err:
        ev_matrix(cyc, [(0, 1, 2)] * 4)
    assert err.value.code == "TREE_ONLY"


def test_ev_matrix_reference_independence():
    rng = random.Random(61)
    for _ in range(20):
        curve, zs = random_tree_problem(rng, rng.choice([4, 5, 6]))
        nodes = curve.trivalent_vertices()
        vals = {abs(ev_matrix(curve, zs, ref=n).determinant())
                for n in nodes}
        assert len(vals) == 1


# ---------------------------------------------------------------------------
# oracle equivalence and root independence on a random corpus


def test_oracle_equivalence_random_corpus():
    rng = random.Random(71)
    checked = 0
    while checked < 200:
        kappa = rng.choice([3, 4, 5, 6])
        curve, zs = random_tree_problem(rng, kappa)
        det = multiplicity_det(ev_matrix(curve, zs)).value
        rec = mixed_h_product(curve, zs)
        assert rec == det
        checked += 1


def test_root_independence_random_corpus():
    rng = random.Random(72)
    for _ in range(60):
        curve, zs = random_tree_problem(rng, rng.choice([3, 4, 5, 6]))
        values = {mixed_h_product(curve, zs, root)
                  for root in all_roots(curve, zs)}
        assert len(values) == 1


def test_sign_invariance_in_z():
    rng = random.Random(73)
    for _ in range(40):
        curve, zs = random_tree_problem(rng, rng.choice([3, 4, 5]))
        base = mixed_h_product(curve, zs)
        j = rng.randrange(len(zs))
        flipped = list(zs)
        flipped[j] = tuple(-x for x in flipped[j])
        assert mixed_h_product(curve, flipped) == base
        assert multiplicity_det(ev_matrix(curve, flipped)).value == base


# ---------------------------------------------------------------------------
# splitting identity


def test_splitting_identity_random_corpus():
    rng = random.Random(74)
    checked = 0
    for _ in range(60):
        curve, zs = random_tree_problem(rng, rng.choice([4, 5, 6]))
        for ei in curve.bounded_indices():
            try:
                rep = splitting_check(curve, ei, zs)
            except WorkbenchError as err:
                assert err.code == "SPLIT_DEGENERATE"
                continue
            assert rep.holds, (rep.lhs, rep.rhs)
            checked += 1
    assert checked >= 100


def _weighted_caterpillar():
    # internal sum d1 + d2 = (-2, -2, 0): a weight-2 bounded edge
    verts = [("u", (0, 0, 0)), ("v", (2, 2, 0)),
             ("a", (-1, 0, 0)), ("b", (-1, -2, 0)),
             ("c", (2, 3, -1)), ("d", (4, 3, 1))]
    edges = [Edge("u", "a", (-1, 0, 0), 1, 0),
             Edge("u", "b", (-1, -2, 0), 1, 1),
             Edge("u", "v", (1, 1, 0), 2, None),
             Edge("v", "c", (0, 1, -1), 1, 2),
             Edge("v", "d", (2, 1, 1), 1, 3)]
    return TropicalCurve(3, verts, edges)


def test_splitting_weighted_edge_division_exact():
    curve = _weighted_caterpillar()
    assert validate_curve(curve).ok
    zs = [(0, 1, 2), (1, 0, 3), (0, 1, 5), (1, 1, 1)]
    assert mixed_h_product(curve, zs) == \
        multiplicity_det(ev_matrix(curve, zs)).value
    rep = splitting_check(curve, 2, zs)
    assert rep.weight == 2
    assert (rep.m1 * rep.m2) % 2 == 0
    assert rep.holds, (rep.lhs, rep.rhs)


def test_splitting_degenerate_momentum():
    # both leaf momenta at the first vertex vanish: rho(r1) = 0
    curve = _weighted_caterpillar()
    zs = [(-1, 0, 0), (1, 2, 0), (0, 1, 5), (1, 1, 1)]
    rho1 = cross((-1, 0, 0), zs[0])
    rho2 = cross((-1, -2, 0), zs[1])
    assert is_zero(rho1) and is_zero(rho2)
    with pytest.raises(WorkbenchError) as err:
        splitting_check(curve, 2, zs)
    assert err.value.code == "SPLIT_DEGENERATE"


# ---------------------------------------------------------------------------
# enumeration


def poincare_lines():
    return LineConfiguration([
        {"point": (-1, 0, 0), "dir": (0, 1, 2)},
        {"point": (0, -1, 0), "dir": (1, 0, 3)},
        {"point": (1, 1, 0), "dir": (0, 1, 5)}])


def test_enumerate_poincare():
    degree = [(-1, 0, 0), (0, -1, 0), (1, 1, 0)]
    res = enumerate_count(degree, poincare_lines())
    assert res.total == 1
    accepted = [t for t in res.per_type if t.status == "accepted"]
    assert len(accepted) == 1
    curve = accepted[0].curve
    assert curve.position("n3") == (0, 0, 0)


def test_enumerate_tripod_hand_value():
    # the tripod of the order-4 example: total = |det(rho1, rho2, rho3)|
    degree = [(0, -1, -1), (1, 1, -1), (-1, 0, 2)]
    zs = TRIPOD_Z
    rhos = [cross(d, z) for d, z in zip(degree, zs)]
    hand = abs(dot(cross(rhos[0], rhos[1]), rhos[2]))
    assert hand == 4
    lines = LineConfiguration([
        {"point": (0, 0, 0), "dir": zs[0]},
        {"point": (1, 0, 0), "dir": zs[1]},
        {"point": (0, 0, 1), "dir": zs[2]}])
    res = enumerate_count(degree, lines)
    assert res.total == hand
    accepted = [t for t in res.per_type if t.status == "accepted"]
    assert accepted[0].curve.position("n3") == \
        (Fraction(1, 4), Fraction(1, 4), Fraction(1, 4))


def test_enumerate_four_leaves_two_configs_agree():
    # same degree and direction collection, two generic placements
    degree = [(1, 0, 0), (0, 1, 0), (-1, 0, 0), (0, -1, 0)]
    directions = [(4, -1, 0), (5, 3, -5), (2, -2, 5), (-5, -3, -4)]
    rng = random.Random(81)
    totals = []
    for _ in range(2):
        while True:
            lines = LineConfiguration([
                {"point": tuple(Fraction(rng.randint(-12, 12), 1)
                                for _ in range(3)),
                 "dir": d}
                for d in directions])
            try:
                res = enumerate_count(degree, lines)
            except WorkbenchError as err:
                if err.code == "NON_GENERIC_CONFIG":
                    continue
                raise
            totals.append(res.total)
            break
    assert totals[0] == totals[1] > 0
    # the pairing with cancelling internal sum is reported as degenerate
    statuses = [t.status for t in res.per_type]
    assert statuses.count("degenerate") == 1


def test_enumerate_kappa_cap():
    degree = [(1, 0, 0)] * 8 + [(-8, 0, 0)]
    lines = LineConfiguration([{"point": (0, 0, 0), "dir": (0, 1, 0)}] * 9)
    with pytest.raises(WorkbenchError) as err:
        enumerate_count(degree, lines)
    assert err.value.code == "KAPPA_CAP"


def test_enumerate_relabeling_invariance():
    degree = [(1, 0, 0), (1, 0, 0), (-1, 1, 0), (-1, -1, 0)]
    lines = [
        {"point": (0, 5, 2), "dir": (0, 1, 1)},
        {"point": (0, -5, 3), "dir": (0, 1, 2)},
        {"point": (7, 1, 1), "dir": (1, 0, 1)},
        {"point": (6, -2, 4), "dir": (1, 1, 1)}]
    res = enumerate_count(degree, LineConfiguration(lines))
    # pairing the two parallel leaves is structurally singular and empty
    assert any(t.status == "singular" for t in res.per_type)
    # swap the two identical degree vectors together with their lines
    degree2 = [degree[1], degree[0]] + degree[2:]
    lines2 = [lines[1], lines[0]] + lines[2:]
    res2 = enumerate_count(degree2, LineConfiguration(lines2))
    assert res.total == res2.total
