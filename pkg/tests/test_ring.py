import pytest

from hopf_cohomology import oracle, ring
from hopf_cohomology.exceptions import SpecMismatch
from hopf_cohomology.families import build_family, build_group_algebra


@pytest.fixture(scope="module")
def sweedler():
    return build_family("sweedler")


def test_unit_is_neutral(sweedler):
    z, xz = sweedler.index("z"), sweedler.index("x z")
    x = ring.DCochain.of(sweedler, sweedler.index("x"), (xz, z))
    unit = ring.DCochain.unit(sweedler)
    assert ring.cochain_product(unit, x) == x
    assert ring.cochain_product(x, unit) == x


def test_product_through_a_grouplike(sweedler):
    xz, z, x = sweedler.index("x z"), sweedler.index("z"), sweedler.index("x")
    a = ring.DCochain.of(sweedler, x, (xz,))
    prod = ring.cochain_product(a, a)
    assert prod == ring.DCochain.of(sweedler, sweedler.identity, (xz, z))
    assert not prod.differential()


def test_adjoint_action_of_the_identity(sweedler):
    a = ring.DCochain.of(sweedler, sweedler.index("x"), (sweedler.index("z"),))
    assert ring.adjoint_action(sweedler.identity, a) == a


@pytest.mark.parametrize("check", [ring.leibniz_check, ring.associativity_check, ring.ad_chain_map_check])
def test_seeded_checks_pass(sweedler, hopf_seed, check):
    result = check(sweedler, samples=10, seed=hopf_seed)
    assert result.ok, result.witness


def test_sweedler_ring_table(sweedler):
    table = ring.ring_structure(sweedler, n_max=2, seed=3)
    one, x = sweedler.index("1"), sweedler.index("x")
    assert len(table.classes) == 3
    (c0,) = table.class_ids(n=0, g=one)
    (c1,) = table.class_ids(n=1, g=x)
    (c2,) = table.class_ids(n=2, g=one, degree=(2,))
    assert dict(table.classes[c2].rep) == {(sweedler.index("x z"), sweedler.index("z")): 1}
    assert table.product(c1, c1) == {c2: sweedler.field.one}
    assert table.product(c0, c1) == {c1: sweedler.field.one}
    assert table.span_rank([(c1, c1)]) == 1
    assert table.stable is True
    assert len(table.to_json()["classes"]) == 3


def test_kunneth_on_a_tensor_product(sweedler):
    group = build_group_algebra("Z/2")
    x = sweedler.index("x")
    result = ring.kunneth_check(sweedler, group, [((x, group.identity), (sweedler.identity, group.identity))], 3)
    assert result.ok


def test_ring_needs_an_algebra(sweedler):
    bare = oracle.dual_coalgebra(oracle.graded_dual(sweedler))
    with pytest.raises(SpecMismatch):
        ring.ring_structure(bare)
