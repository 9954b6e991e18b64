"""Sparse exact elimination over :class:`~hopf_cohomology.field.Scalar`.

Vectors are plain dicts ``column -> Scalar`` without stored zeros; columns only need to be hashable
and mutually comparable (tensor words, integers). Ranks, echelon forms and kernels are computed on
sympy ``DomainMatrix`` objects in the field's domain by fraction-free Gauss-Jordan elimination.
"""
from collections import Counter
from dataclasses import dataclass, field

from sympy.polys.matrices import DomainMatrix


def axpy(target, coef, source):
    """target += coef * source, in place, dropping cancelled entries."""
    for col, value in source.items():
        updated = target.get(col)
        updated = coef * value if updated is None else updated + coef * value
        if updated:
            target[col] = updated
        else:
            target.pop(col, None)
    return target


def scaled(vector, coef):
    return {col: coef * value for col, value in vector.items()} if coef else {}


@dataclass
class EliminationResult:
    rank: int
    pivots: list = field(default_factory=list)
    kernel: list = field(default_factory=list)


def _context(rows, ctx=None):
    if ctx is not None:
        return ctx
    for row in rows:
        for value in row.values():
            return value.ctx
    return None


def markowitz_order(rows):
    """Row and column permutation applied before elimination.

    Nonempty rows sorted sparsest first; columns sorted by how few rows touch them, ties by lowest column.
    """
    counts = Counter(col for row in rows for col in row)
    cols = sorted(counts, key=lambda c: (counts[c], c))
    order = sorted((i for i, row in enumerate(rows) if row), key=lambda i: (len(rows[i]), i))
    return order, cols


def to_domain_matrix(rows, cols, ctx):
    index = {col: j for j, col in enumerate(cols)}
    entries = {}
    for i, row in enumerate(rows):
        if row:
            entries[i] = {index[col]: ctx.to_domain(value) for col, value in row.items()}
    return DomainMatrix(entries, (len(rows), len(cols)), ctx.domain)


def _rref_den(matrix):
    """Fraction-free reduced echelon form as ``(rows, den, pivots)``; ``rows[i]`` maps column -> entry."""
    reduced, den, pivots = matrix.rref_den()
    sparse = reduced.to_sdm()
    return [dict(sparse.get(i, {})) for i in range(len(pivots))], den, list(pivots)


def _null_vectors(rows, den, pivots, ncols):
    """Null space read off a fraction-free echelon form, one vector per free column, scaled by ``den``."""
    pivot_set = set(pivots)
    vectors = []
    for j in range(ncols):
        if j in pivot_set:
            continue
        vector = {j: den}
        for i, pivot in enumerate(pivots):
            value = rows[i].get(j)
            if value:
                vector[pivot] = -value
        vectors.append(vector)
    return vectors


def eliminate(rows, track=False, ctx=None):
    """Eliminate ``rows`` after a Markowitz permutation.

    With ``track`` set the result also carries a basis of the left null space: combinations
    ``{row index: coefficient}`` of the input rows that sum to zero.
    """
    ctx = _context(rows, ctx)
    order, cols = markowitz_order(rows)
    kernel = [{i: ctx.one} for i, row in enumerate(rows) if not row] if track and ctx is not None else []
    if not order:
        return EliminationResult(rank=0, kernel=kernel)
    matrix = to_domain_matrix([rows[i] for i in order], cols, ctx)
    _, _, pivots = _rref_den(matrix)
    if track:
        left, den, left_pivots = _rref_den(matrix.transpose())
        for vector in _null_vectors(left, den, left_pivots, len(order)):
            kernel.append({order[j]: ctx.from_domain(value) for j, value in vector.items()})
    return EliminationResult(rank=len(pivots), pivots=[cols[j] for j in pivots], kernel=kernel)


def rank(rows):
    return eliminate(rows).rank


def rref(vectors, ctx):
    """Reduced row echelon form of ``vectors`` with pivots on the lowest available columns."""
    cols = sorted({col for vec in vectors for col in vec})
    if not cols:
        return []
    rows, den, pivots = _rref_den(to_domain_matrix(vectors, cols, ctx))
    exquo = ctx.domain.exquo
    return [{cols[j]: ctx.from_domain(exquo(value, den)) for j, value in row.items() if value} for row in rows]


class Eliminator:
    """Incremental semi-echelon basis.

    Every stored row is normalised on its lowest column, which no later row contains after
    reduction, so :meth:`reduce` is deterministic and terminates. Rows added with a ``tag`` are
    tracked: ``reduce`` then reports which tagged inputs make up the subtracted part.
    """

    def __init__(self, ctx, track=False):
        self.ctx = ctx
        self.track = track
        self.__rows = {}
        self.__combos = {}

    @property
    def rank(self):
        return len(self.__rows)

    @property
    def pivots(self):
        return sorted(self.__rows)

    def reduce(self, vector):
        """Return ``(remainder, combination)``.

        vector = remainder + sum(combination[tag] * input[tag]) modulo untagged rows.
        """
        remainder = dict(vector)
        combination = {}
        if not self.__rows:
            return remainder, combination
        while True:
            hits = [col for col in remainder if col in self.__rows]
            if not hits:
                return remainder, combination
            col = min(hits)
            coef = remainder[col]
            axpy(remainder, -coef, self.__rows[col])
            if self.track:
                axpy(combination, coef, self.__combos[col])

    def add(self, vector, tag=None):
        """Insert ``vector``; return True when it enlarged the span."""
        remainder, combination = self.reduce(vector)
        if not remainder:
            return False
        col = min(remainder)
        inv = remainder[col].inv()
        self.__rows[col] = scaled(remainder, inv)
        if self.track:
            combo = {tag: self.ctx.one} if tag is not None else {}
            axpy(combo, -self.ctx.one, combination)
            self.__combos[col] = scaled(combo, inv)
        return True

    def contains(self, vector):
        return not self.reduce(vector)[0]


def kernel_basis(images, ctx):
    """Canonical basis (reduced echelon, lowest columns first) of the kernel of the column map ``images``.

    ``images`` is a list of ``(domain_key, image_vector)``; kernel vectors are dicts over domain keys.
    """
    keys = [key for key, _ in images]
    result = eliminate([image for _, image in images], track=True, ctx=ctx)
    vectors = [{keys[i]: coef for i, coef in combo.items() if coef} for combo in result.kernel]
    return rref(vectors, ctx), result.rank
