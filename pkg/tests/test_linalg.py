from hopf_cohomology.field import FieldContext
from hopf_cohomology.linalg import Eliminator, eliminate, kernel_basis, markowitz_order, rank, rref

Q = FieldContext.rational()
K3 = FieldContext.cyclotomic(3)


def vec(**entries):
    return {int(k[1:]): Q(v) for k, v in entries.items()}


def test_rank_of_dependent_rows():
    rows = [vec(c0=1, c1=2), vec(c0=2, c1=4), vec(c2=1)]
    assert rank(rows) == 2
    assert rank([]) == 0
    assert rank([{}, {}]) == 0


def test_markowitz_order_prefers_sparse_rows_and_columns():
    rows = [vec(c0=1, c1=1, c2=1), {}, vec(c1=1), vec(c0=1, c1=1)]
    order, cols = markowitz_order(rows)
    assert order == [2, 3, 0]
    assert cols == [2, 0, 1]


def test_tracked_elimination_reports_the_left_kernel():
    rows = [vec(c0=1), vec(c0=2), {}]
    result = eliminate(rows, track=True, ctx=Q)
    assert result.rank == 1
    assert len(result.kernel) == 2
    for combo in result.kernel:
        total = {}
        for i, coef in combo.items():
            for col, value in rows[i].items():
                total[col] = total.get(col, Q.zero) + coef * value
        assert not any(total.values())


def test_rref_is_canonical():
    assert rref([vec(c0=1, c1=1), vec(c1=1)], Q) == [vec(c0=1), vec(c1=1)]
    assert rref([vec(c1=2), vec(c0=3, c1=3)], Q) == [vec(c0=1), vec(c1=1)]
    assert rref([vec(c0=2, c1=4), vec(c0=1, c1=2)], Q) == [vec(c0=1, c1=2)]
    assert rref([], Q) == []


def test_kernel_basis_over_named_columns():
    images = [("a", vec(c0=1)), ("b", vec(c0=1)), ("c", vec(c1=1))]
    kernel, image_rank = kernel_basis(images, Q)
    assert image_rank == 2
    assert kernel == [{"a": Q.one, "b": -Q.one}]


def test_elimination_over_a_cyclotomic_field():
    zeta = K3.zeta()
    rows = [{0: K3.one, 1: zeta}, {0: zeta, 1: zeta * zeta}, {1: K3.one + zeta}]
    assert rank(rows) == 2
    assert rref([{0: zeta, 1: zeta * zeta}], K3) == [{0: K3.one, 1: zeta}]
    kernel, image_rank = kernel_basis([("u", {0: K3.one}), ("v", {0: -zeta * zeta})], K3)
    assert image_rank == 1
    # zeta^-2 = zeta, so u + zeta * v maps to 1 - zeta^3 = 0
    assert kernel == [{"u": K3.one, "v": zeta}]


def test_eliminator_tracks_tagged_rows():
    echelon = Eliminator(Q, track=True)
    assert echelon.add(vec(c0=1, c1=1))
    assert echelon.add(vec(c1=1), tag="r")
    assert not echelon.add(vec(c0=2, c1=2))
    remainder, combination = echelon.reduce(vec(c0=1, c1=2))
    assert remainder == {}
    assert combination == {"r": Q.one}
    assert echelon.contains(vec(c0=1))
    assert echelon.pivots == [0, 1]
