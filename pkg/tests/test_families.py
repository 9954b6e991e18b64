import pytest

from hopf_cohomology import cobar
from hopf_cohomology.coalgebra import validate
from hopf_cohomology.exceptions import ConfigError, ParamViolation
from hopf_cohomology.families import (
    GroupSpec,
    bracket_coefficients,
    bracket_datum,
    build_braided_line,
    build_family,
    build_group_algebra,
    build_symmetric_coalgebra,
    catalog,
    check_normality,
    family_data,
    z_index,
)
from hopf_cohomology.field import FieldContext, q_binomial


def test_group_spec_parsing():
    group = GroupSpec.parse("Z/3xZ/3")
    assert group.moduli == (3, 3)
    assert group.parse_element("x^2 y") == (2, 1)
    assert group.label((2, 1)) == "x^2 y"
    assert group.order((1, 0)) == 3
    window = GroupSpec.parse("Z[2]")
    assert window.window == (-2, 2)
    assert GroupSpec.parse("Z[-1,3]").elements() == [(-1,), (0,), (1,), (2,), (3,)]
    with pytest.raises(ConfigError):
        GroupSpec.parse("Q8")
    with pytest.raises(ConfigError):
        group.parse_element("w")


@pytest.mark.parametrize(
    ("text", "elem", "order"), [("Z/4xZ/6", (1, 1), 12), ("Z/6xZ/4", (2, 1), 12), ("Z/6xZ/9", (1, 3), 6)]
)
def test_order_is_the_lcm_of_component_orders(text, elem, order):
    assert GroupSpec.parse(text).order(elem) == order


def test_group_algebra():
    spec = build_group_algebra("Z/4")
    assert spec.dim == 4
    assert len(spec.grouplikes) == 4
    assert spec.group_power(spec.index("x"), 4) == spec.identity
    assert validate(spec).ok


def test_windowed_group_algebra_is_a_truncation():
    spec = build_family("group", {"group": "Z[2]"})
    assert spec.dim == 5
    assert not spec.finite
    assert spec.degree_bound is None
    assert spec.truncation["window"] == [-2, 2]


def test_symmetric_coalgebra():
    spec = build_symmetric_coalgebra(2, 2)
    assert spec.dim == 6
    assert spec.grouplikes == [spec.index("1")]
    assert validate(spec).ok


@pytest.mark.parametrize(("ell", "size"), [(2, 2), (3, 3)])
def test_braided_line_closes_at_the_order(ell, size):
    q = FieldContext.cyclotomic(ell).zeta() if ell > 2 else FieldContext.rational()(-1)
    spec = build_braided_line(q, size)
    assert spec.finite
    assert validate(spec).ok


def test_sweedler_aliases():
    spec = build_family("sweedler")
    assert spec.dim == 4
    assert build_family("taft", {"group": "Z/2", "chi": ["-1"]}).labels == spec.labels


def test_taft_algebra_of_order_three():
    spec = build_family("taft", {"group": "Z/3", "chi": ["zeta3"]})
    assert spec.dim == 9
    assert spec.field.ell == 3
    assert validate(spec).ok
    assert z_index(spec, (2,), 1) == spec.index("x^2 z")


def test_trivial_character_is_rejected():
    with pytest.raises(ParamViolation) as excinfo:
        build_family("E", {"group": "Z/2", "e": "x", "chi": ["1"]})
    assert "ell" in excinfo.value.tag


def test_character_must_respect_the_group():
    with pytest.raises(ParamViolation):
        build_family("E", {"group": "Z/2", "e": "x", "chi": ["zeta3"]})


def test_unknown_family():
    with pytest.raises(ConfigError):
        build_family("Z")


def test_bracket_coefficients_at_minus_one():
    q = FieldContext.rational()(-1)
    assert [(i, c) for i, c in bracket_coefficients(2, q)] == [(1, 1)]


def test_windowed_family_is_truncated_in_degree():
    spec = build_family("A", {"group": "Z[-2,2]", "e": "x", "chi": ["2"], "z_max": 2})
    assert not spec.finite
    assert spec.degree_bound == 2
    assert spec.truncation["window"] == [-2, 2]
    assert validate(spec).ok


def test_family_data_exposes_the_extension_datum():
    data = family_data("E", {"group": "Z/2", "e": "x", "chi": ["-1"]})
    assert data.violations() == []
    assert data.q == -1


def test_catalog_names_are_unique():
    names = [entry.name for entry in catalog()]
    assert len(names) == len(set(names)) == 16


@pytest.mark.hopf_slow
@pytest.mark.parametrize("entry", catalog(), ids=lambda e: e.name)
def test_catalog_entries_validate(entry):
    spec = entry.build()
    report = validate(spec)
    assert report.ok, [str(v) for v in report.violations]


def test_power_relation_normality():
    data = family_data("A", {"group": "Z/16", "e": "x^2", "chi": ["zeta8"], "ell": 4})
    assert check_normality(data, data.ctx.zero)
    assert not check_normality(data, data.ctx.one)
    with pytest.raises(ParamViolation):
        build_family("E", {"group": "Z/16", "e": "x^2", "chi": ["zeta8"], "lam": 1})
    spec = build_family("E", {"group": "Z/8", "e": "x^2", "chi": ["zeta8"], "lam": 1})
    assert spec.dim == 32


BRACKET_CASES = [
    ("sweedler", {}),
    ("taft", {"group": "Z/3", "chi": ["zeta3"]}),
    ("taft", {"group": "Z/4", "chi": ["zeta4"]}),
    ("E", {"group": "Z/4", "e": "x", "chi": ["-1"], "lam": 1}),
    ("A", {"group": "Z/2", "e": "x", "chi": ["-1"], "z_max": 2}),
    ("A", {"group": "Z/3", "e": "x", "chi": ["zeta3"], "z_max": 2}),
    ("A", {"group": "Z/9", "e": "x", "chi": ["zeta3"], "z_max": 3}),
    ("F", {"group": "Z/2", "e": "x", "chi": ["-1"], "w_max": 1}),
]


@pytest.mark.parametrize(("name", "params"), BRACKET_CASES)
def test_bracket_is_a_cocycle(name, params):
    ell, q, e = bracket_datum(name, params)
    assert ell >= 2
    spec = build_family(name, params)
    assert cobar.bracket_check(spec, ell, q, e)


def test_bracket_datum_needs_a_root_of_unity():
    assert bracket_datum("A", {"group": "Z[-2,2]", "e": "x", "chi": ["2"]}) is None
    assert bracket_datum("Group", {"group": "Z/2"}) is None
    assert bracket_datum("C", {"group": "Z/4", "e": "x^2", "chi": ["-1"], "tau": ["1"]}) is None


@pytest.mark.parametrize(
    ("name", "params"),
    [
        ("A", {"group": "Z/2", "e": "x", "chi": ["-1"], "z_max": 4}),
        ("A", {"group": "Z/9", "e": "x", "chi": ["zeta3"], "z_max": 4}),
        ("A", {"group": "Z/4", "e": "x", "chi": ["zeta4"], "z_max": 5}),
        ("taft", {"group": "Z/4", "chi": ["zeta4"]}),
        ("E", {"group": "Z/4", "e": "x", "chi": ["-1"], "lam": 1}),
    ],
)
def test_coproduct_of_z_powers(name, params):
    data = family_data(name, params)
    spec = build_family(name, params)
    one = data.group.identity
    for n in range(data.z_degree_max + 1):
        expected = {}
        for i in range(n + 1):
            coef = q_binomial(n, i, data.q)
            if coef:
                left = z_index(spec, data.group.power(data.e, n - i), i)
                expected[(left, z_index(spec, one, n - i))] = coef
        got = {(a, b): s for a, b, s in spec.delta(z_index(spec, one, n))}
        assert got == expected, n


def test_cube_of_z_is_primitive_over_z3():
    spec = build_family("A", {"group": "Z/3", "e": "x", "chi": ["zeta3"], "z_max": 3})
    one = z_index(spec, (0,), 0)
    cube = z_index(spec, (0,), 3)
    assert {(a, b): s for a, b, s in spec.delta(cube)} == {(cube, one): 1, (one, cube): 1}


@pytest.mark.parametrize(
    "entry", [entry for entry in catalog() if entry.family not in ("Group", "U")], ids=lambda e: e.name
)
def test_sigma_scales_e_by_q(entry):
    data = family_data(entry.family, entry.params)
    assert dict(data.sigma(data.e)) == {data.e: data.q}
