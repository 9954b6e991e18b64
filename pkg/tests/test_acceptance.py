"""Acceptance-scale computations, skipped unless --hopf-run-slow is given."""
import itertools
import math

import pytest

from hopf_cohomology import cobar, oracle, ring
from hopf_cohomology.families import build_family, build_group_algebra, build_symmetric_coalgebra, catalog

pytestmark = pytest.mark.hopf_slow


@pytest.mark.hopf_budget(120)
@pytest.mark.parametrize(("group", "chi", "n_max"), [("Z/2", "-1", 5), ("Z/3", "zeta3", 4)])
def test_taft_rank_one_fingerprint(group, chi, n_max):
    spec = build_family("E", {"group": group, "e": "x", "chi": [chi]})
    found = cobar.compute_report(spec, "base", n_max=n_max)
    assert found.dims() == {n: 1 for n in range(n_max + 1)}
    assert found.support(1) == {spec.index("x"): 1}
    assert found.support(2) == {spec.identity: 1}


@pytest.mark.hopf_budget(60)
@pytest.mark.parametrize("d", [2, 3])
def test_exterior_algebra_dims(d):
    spec = build_symmetric_coalgebra(d, d)
    one = spec.identity
    for n in range(d + 1):
        degrees = [deg for deg in itertools.product((0, 1), repeat=d) if sum(deg) == n]
        total = sum(cobar.primitive_cohomology(spec, one, one, n, degree=deg, with_reps=False)[0] for deg in degrees)
        reduced = sum(cobar.reduced_cobar_cohomology(spec, one, n, degree=deg) for deg in degrees)
        assert total == reduced == math.comb(d, n)


@pytest.mark.hopf_budget(300)
def test_root_of_unity_table():
    spec = build_family("A", {"group": "Z/9", "e": "x", "chi": ["zeta3"], "z_max": 4})
    found = cobar.compute_report(spec, "base", n_max=2)
    assert found.support(1) == {spec.index("x"): 1, spec.index("x^3"): 1}
    assert found.support(2) == {spec.index("x^3"): 1, spec.index("x^4"): 1}


@pytest.mark.hopf_budget(600)
@pytest.mark.parametrize(
    ("family", "params", "e"),
    [
        ("C", {"group": "Z/4", "e": "x^2", "chi": ["-1"], "tau": ["1"], "z_max": 6}, "x^2"),
        ("F", {"group": "Z/2", "e": "x", "chi": ["-1"], "w_max": 3}, "x"),
    ],
    ids=["C-Z4", "F-Z2"],
)
def test_primitive_cohomological_dimension_one(family, params, e):
    spec = build_family(family, params)
    found = cobar.compute_report(spec, "base", n_max=4, deg_max=6)
    assert found.support(1) == {spec.index(e): 1}
    for n in (2, 3, 4):
        assert found.support(n) == {}


@pytest.mark.hopf_budget(600)
@pytest.mark.parametrize(
    ("build", "n_max", "deg_max"),
    [
        (lambda: build_symmetric_coalgebra(2, 4), 4, None),
        (lambda: build_symmetric_coalgebra(3, 3), 3, None),
        (lambda: build_group_algebra("Z/3"), 4, None),
        (lambda: build_group_algebra("Z/3xZ/3"), 2, None),
        (lambda: build_family("sweedler"), 4, None),
        (lambda: build_family("taft", {"group": "Z/3", "chi": ["zeta3"]}), 2, None),
        (lambda: build_family("F", {"group": "Z/2", "e": "x", "chi": ["-1"], "w_max": 2}), 3, 4),
    ],
    ids=["U2", "U3", "Z3", "Z3xZ3", "sweedler", "taft-3", "F-Z2"],
)
def test_oracle_equivalence(build, n_max, deg_max):
    result = oracle.compare_cotor_tor(build(), "all", n_max=n_max, deg_max=deg_max)
    assert result.ok, result.mismatches


def test_exterior_products_span_the_second_degree(hopf_seed):
    spec = build_symmetric_coalgebra(3, 2)
    table = ring.ring_structure(spec, n_max=2, seed=hopf_seed)
    degree_one = table.class_ids(n=1)
    assert len(degree_one) == 3
    pairs = [(i, j) for i in degree_one for j in degree_one]
    assert table.span_rank(pairs) == 3
    for i, j in pairs:
        assert {k: -v for k, v in table.product(i, j).items()} == table.product(j, i)
    assert table.stable


@pytest.mark.parametrize("name", ["sweedler", "taft-3", "A-Z9", "symmetric-2"])
def test_sampled_ring_laws(name, hopf_seed):
    spec = next(entry for entry in catalog() if entry.name == name).build()
    assert ring.leibniz_check(spec, samples=50, seed=hopf_seed)
    assert ring.associativity_check(spec, samples=50, seed=hopf_seed)
    assert ring.ad_chain_map_check(spec, samples=20, seed=hopf_seed)


@pytest.mark.hopf_budget(300)
def test_window_stabilization():
    def builder(radius):
        return build_family("A", {"group": f"Z[{radius}]", "e": "x", "chi": ["2"], "z_max": 3})

    first = cobar.window_stabilize(builder, [2, 4, 8], (1,), (0,), 1)
    assert first.dims == [1, 1, 1]
    assert first.stable
    second = cobar.window_stabilize(builder, [2, 4, 8], (1,), (0,), 2)
    assert second.dims == [0, 0, 0]
