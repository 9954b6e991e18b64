import pytest

from hopf_cohomology import cobar
from hopf_cohomology.exceptions import ConfigError, InfiniteSlice, NotGrouplike
from hopf_cohomology.families import build_braided_line, build_family, build_group_algebra, build_symmetric_coalgebra
from hopf_cohomology.field import FieldContext


@pytest.fixture(scope="module")
def sweedler():
    return build_family("sweedler")


def labels(spec, *names):
    return [spec.index(name) for name in names]


def test_degree_zero_differential(sweedler):
    one, x = labels(sweedler, "1", "x")
    matrix = cobar.differential_matrix(sweedler, x, one, 0, (0,))
    assert matrix.shape == (2, 1)
    assert matrix.entry((x,), ()) == 1
    assert matrix.entry((one,), ()) == -1
    assert cobar.differential_matrix(sweedler, x, x, 0, (0,)).is_zero()


def test_degree_one_differential_of_a_skew_primitive(sweedler):
    one, x, z = labels(sweedler, "1", "x", "z")
    assert cobar.cobar_image(sweedler, x, one, (z,)) == {}
    image = cobar.cobar_image(sweedler, one, one, (z,))
    assert image == {(one, z): 1, (x, z): -1}


@pytest.mark.parametrize("n_max", [1, 3])
def test_differential_squares_to_zero(sweedler, n_max):
    for g in sweedler.grouplikes:
        for h in sweedler.grouplikes:
            assert cobar.check_d_squared(sweedler, g, h, n_max)


@pytest.mark.parametrize(
    ("name", "params"),
    [
        ("taft", {"group": "Z/3", "chi": ["zeta3"]}),
        ("A", {"group": "Z/3", "e": "x", "chi": ["zeta3"], "z_max": 2}),
        ("C", {"group": "Z/4", "e": "x^2", "chi": ["-1"], "tau": ["1"], "z_max": 2}),
    ],
)
def test_differential_squares_to_zero_off_the_unit(name, params):
    spec = build_family(name, params)
    pairs = [(g, h) for g in spec.grouplikes for h in spec.grouplikes if h != spec.identity]
    assert pairs
    for g, h in pairs:
        result = cobar.check_d_squared(spec, g, h, 2)
        assert result, result.witness
        assert result.details["words"] > 0


def test_method_selection(sweedler):
    assert cobar.resolve_method(sweedler, "auto") == "path"
    assert cobar.resolve_method(sweedler, "cobar") == "cobar"
    with pytest.raises(ConfigError):
        cobar.resolve_method(sweedler, "simplicial")


def test_sweedler_cohomology_alternates(sweedler):
    one, x = labels(sweedler, "1", "x")
    for n in range(4):
        expected = (1, 0) if n % 2 == 0 else (0, 1)
        got = (
            cobar.primitive_cohomology(sweedler, one, one, n)[0],
            cobar.primitive_cohomology(sweedler, x, one, n)[0],
        )
        assert got == expected


def test_path_and_cobar_methods_agree(sweedler):
    for g in sweedler.grouplikes:
        for h in sweedler.grouplikes:
            for n in range(3):
                path = cobar.primitive_cohomology(sweedler, g, h, n, method="path", with_reps=False)[0]
                full = cobar.primitive_cohomology(sweedler, g, h, n, method="cobar", with_reps=False)[0]
                assert path == full


def test_representatives_are_normalised_cocycles(sweedler):
    one, x, z, xz = labels(sweedler, "1", "x", "z", "x z")
    dim, reps = cobar.primitive_cohomology(sweedler, one, one, 2, degree=(2,))
    assert dim == 1
    assert reps == [{(xz, z): 1}]
    assert not cobar.apply_differential(sweedler, one, one, reps[0])
    assert cobar.primitive_cohomology(sweedler, x, one, 1)[1] == [{(z,): 1}]


def test_group_algebra_is_cosemisimple():
    spec = build_group_algebra("Z/3")
    report = cobar.compute_report(spec, "all", n_max=2)
    assert report.dims() == {0: 3, 1: 0, 2: 0}
    assert cobar.pp0_check(spec)
    assert cobar.coradical_check(spec)


def test_symmetric_coalgebra_is_exterior():
    spec = build_symmetric_coalgebra(2, 3)
    one = spec.identity
    assert cobar.primitive_cohomology(spec, one, one, 1)[0] == 2
    assert cobar.primitive_cohomology(spec, one, one, 2)[0] == 1
    assert cobar.primitive_cohomology(spec, one, one, 3)[0] == 0
    assert cobar.primitive_cohomology(spec, one, one, 2, degree=(1, 1))[0] == 1


def test_truncated_slices(sweedler):
    spec = build_symmetric_coalgebra(1, 2)
    one = spec.identity
    with pytest.raises(InfiniteSlice):
        cobar.differential_matrix(spec, one, one, 1)
    with pytest.raises(InfiniteSlice):
        cobar.primitive_cohomology(spec, one, one, 1, degree=(3,))
    assert cobar.slice_degrees(spec, 2) == [(0,), (1,), (2,)]
    assert cobar.slice_degrees(spec, 2, method="path") == [(2,)]
    with pytest.raises(NotGrouplike):
        cobar.primitive_cohomology(sweedler, sweedler.index("z"), sweedler.identity, 1)


def test_report_merges_threaded_slices(sweedler):
    single = cobar.compute_report(sweedler, "base", n_max=3, threads=1)
    threaded = cobar.compute_report(sweedler, "base", n_max=3, threads=4)
    assert single.to_json() == threaded.to_json()
    assert single.pcdim_lb.value == 3
    assert single.dims(g=sweedler.index("x")) == {0: 0, 1: 1, 2: 0, 3: 1}
    assert single.support(2) == {sweedler.index("1"): 1}


def test_report_json_uses_labels(sweedler):
    data = cobar.compute_report(sweedler, "base", n_max=1).to_json()
    assert data["method"] == "path"
    assert {"g": "x", "h": "1", "n": 1, "degree": [1], "dim": 1} in [
        {k: e[k] for k in ("g", "h", "n", "degree", "dim")} for e in data["entries"]
    ]
    assert data["pcdim_lb"]["value"] == 1


def test_left_translation_shifts_cohomology(sweedler):
    one, x = labels(sweedler, "1", "x")
    for n in range(3):
        assert cobar.shift_check(sweedler, x, one, one, n)
        assert cobar.shift_check(sweedler, x, x, one, n)


def test_reduced_cobar_agrees(sweedler):
    one = sweedler.identity
    for n in range(3):
        full = cobar.primitive_cohomology(sweedler, one, one, n, with_reps=False)[0]
        assert cobar.reduced_cobar_cohomology(sweedler, one, n) == full


def test_rank_and_signature():
    sweedler = build_family("sweedler")
    found = cobar.rank_and_signature(sweedler)
    assert found.rank == 1
    assert str(found.signature.as_expr()) == "t"
    symmetric = cobar.rank_and_signature(build_symmetric_coalgebra(3, 2))
    assert symmetric.rank == 3
    assert symmetric.to_json()["signature_series"] == "3*t"


def test_coinvariants_carry_the_cohomology(sweedler):
    line = build_braided_line(FieldContext.rational()(-1), 2)
    assert cobar.coinvariant_identity_check(sweedler, line, 3)


def test_direct_sum_splits(sweedler):
    group = build_group_algebra("Z/2")
    x, one = sweedler.index("x"), sweedler.index("1")
    assert cobar.direct_sum_check([sweedler, group], (0, x), (0, one), 2)
    assert cobar.direct_sum_check([sweedler, group], (0, one), (1, group.identity), 2)


def test_window_stabilization():
    def builder(radius):
        return build_family("Group", {"group": f"Z[{radius}]"})

    result = cobar.window_stabilize(builder, [1, 2, 3], (0,), (0,), 0)
    assert result.dims == [1, 1, 1]
    assert result.stable
    assert result.stabilized_at == 1
    assert result.to_json()["verdict"] == "stabilized at 1"
    moved = cobar.window_stabilize(builder, [1, 2], (1,), (0,), 0)
    assert moved.dims == [0, 0]
