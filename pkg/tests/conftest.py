"""Shared fixtures: corpus paths and random balanced-tree generators."""

import json
from fractions import Fraction
from pathlib import Path

import pytest

from troplag.curve import (Edge, TreeTopology, TropicalCurve,
                           internal_directions_from_leaves)
from troplag.lattice import content, primitive_raw

FIXTURES = Path(__file__).resolve().parents[1] / "fixtures"

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def fixtures_dir():
    return FIXTURES


def fixture_path(name):
    return str(FIXTURES / name)


def load_fixture_json(name):
    with open(FIXTURES / name, "r", encoding="utf-8") as fh:
        return json.load(fh)


# ---------------------------------------------------------------------------
# random balanced 3-valent trees embedded in Q^3


def rand_nonzero(rng, lo=-5, hi=5, dim=3):
    while True:
        v = tuple(rng.randint(lo, hi) for _ in range(dim))
        if any(x != 0 for x in v):
            return v


def rand_primitive(rng, lo=-5, hi=5, dim=3):
    while True:
        v = rand_nonzero(rng, lo, hi, dim)
        if content(v) == 1:
            return v


def random_topology(rng, kappa):
    edges = [(0, kappa), (1, kappa), (2, kappa)]
    nxt = kappa + 1
    for leaf in range(3, kappa):
        e = rng.choice(edges)
        edges.remove(e)
        edges += [tuple(sorted((e[0], nxt))), tuple(sorted((e[1], nxt))),
                  tuple(sorted((leaf, nxt)))]
        nxt += 1
    return TreeTopology(kappa, tuple(sorted(edges)))


def random_balanced_skeleton(rng, kappa, primitive=False, lo=-5, hi=5):
    """Topology plus a degree whose internal sums are all nonzero."""
    topo = random_topology(rng, kappa)
    for _ in range(400):
        gen = rand_primitive if primitive else rand_nonzero
        degree = [gen(rng, lo, hi) for _ in range(kappa - 1)]
        last = tuple(-sum(d[i] for d in degree) for i in range(3))
        if all(x == 0 for x in last):
            continue
        if primitive and content(last) != 1:
            continue
        degree.append(last)
        sk = internal_directions_from_leaves(topo, degree)
        if not sk.ok:
            continue
        if primitive and any(content(sk.dh[e]) != 1
                             for e in topo.internal_edges()):
            continue
        return sk, degree
    raise RuntimeError("could not build a balanced skeleton")


def embed_skeleton(rng, sk):
    """Realize a skeleton as a curve with rays and rational positions."""
    topo = sk.topology
    adj = topo.adjacency()
    ref = topo.leaf_neighbor(0)
    pos = {ref: tuple(Fraction(rng.randint(-3, 3), rng.randint(1, 3))
                      for _ in range(3))}
    order = [ref]
    seen = {ref}
    while order:
        at = order.pop()
        for other in adj[at]:
            if other in seen or other < topo.kappa:
                continue
            seen.add(other)
            length = Fraction(rng.randint(1, 5), rng.randint(1, 4))
            pos[other] = tuple(p + length * d for p, d in
                               zip(pos[at], sk.dh[(at, other)]))
            order.append(other)
    vertices = [(f"n{k}", pos[k]) for k in sorted(pos)]
    edges = []
    for a, b in topo.edges:
        if a < topo.kappa:
            d = sk.dh[(b, a)]
            edges.append(Edge(f"n{b}", None, primitive_raw(d), content(d), a))
        else:
            d = sk.dh[(a, b)]
            edges.append(Edge(f"n{a}", f"n{b}", primitive_raw(d),
                              content(d), None))
    return TropicalCurve(3, vertices, edges)


def random_tree_problem(rng, kappa, primitive=False):
    """A random balanced tree curve with rays plus primitive directions."""
    sk, degree = random_balanced_skeleton(rng, kappa, primitive)
    curve = embed_skeleton(rng, sk)
    zs = [rand_primitive(rng) for _ in range(kappa)]
    return curve, zs
