"""Sparse structure-constant model of a multigraded pointed coalgebra.

Basis elements are dense integer indices, tensor words are tuples of indices and vectors are
:class:`SparseVector` dicts keyed by words. Everything downstream (cobar slices, dual algebras, ring
products) only ever reads a :class:`CoalgebraSpec`.
"""
import itertools
from collections import defaultdict, namedtuple
from dataclasses import dataclass, field

from hopf_cohomology.exceptions import InfiniteSlice, NotGrouplike, SpecMismatch
from hopf_cohomology.field import FieldContext
from hopf_cohomology.linalg import axpy, kernel_basis

BasisId = namedtuple("BasisId", ["index", "label"])

EMPTY_WORD = ()


class SparseVector(dict):
    """Linear combination of tensor words (all of one length) with nonzero exact coefficients."""

    @classmethod
    def of(cls, word, coef):
        return cls({tuple(word): coef}) if coef else cls()

    @property
    def length(self):
        for word in self:
            return len(word)
        return None

    def terms(self):
        return sorted(self.items())

    def __add__(self, other):
        return SparseVector(axpy(dict(self), 1, other))

    def __sub__(self, other):
        return SparseVector(axpy(dict(self), -1, other))

    def __neg__(self):
        return SparseVector({word: -coef for word, coef in self.items()})

    def scale(self, coef):
        if not coef:
            return SparseVector()
        return SparseVector({word: coef * value for word, value in self.items()})

    def to_json(self, spec):
        return [[[spec.label(i) for i in word], coef.to_json()] for word, coef in self.terms()]

    @classmethod
    def from_json(cls, spec, data):
        vec = cls()
        for labels, coef in data:
            axpy(vec, 1, {tuple(spec.index(label) for label in labels): spec.field.from_json(coef)})
        return vec

    def describe(self, spec):
        """Human readable form, e.g. ``z (x) z - 2 ez (x) z``."""
        if not self:
            return "0"
        parts = []
        for word, coef in self.terms():
            text = " (x) ".join(spec.label(i) for i in word) if word else "[]"
            parts.append(text if coef == 1 else f"({coef}) {text}")
        return " + ".join(parts)


class TableAlgebra:
    """Multiplication of basis elements from an explicit table ``(i, j) -> {k: Scalar}``.

    A missing pair is a product that leaves the (truncated) basis.
    """

    def __init__(self, table):
        self.__table = dict(table)

    def multiply(self, i, j):
        return self.__table.get((i, j))

    def items(self):
        return sorted(self.__table.items())


@dataclass
class Violation:
    axiom: str
    label: str
    detail: str = ""

    def __str__(self):
        return f"{self.axiom} at {self.label}" + (f": {self.detail}" if self.detail else "")


@dataclass
class ValidationReport:
    spec_name: str
    violations: list = field(default_factory=list)
    skipped: list = field(default_factory=list)

    @property
    def ok(self):
        return not self.violations

    def __len__(self):
        return len(self.violations)

    def axioms(self):
        return sorted({v.axiom for v in self.violations})


class CoalgebraSpec:
    """Finite (possibly truncated) coalgebra given by sparse Δ and ε tables.

    ``grouplikes`` maps basis indices to their element of the grouplike group (a tuple of exponents
    read modulo ``group``, a modulus of 0 standing for Z), or to ``None`` when no group law is known.
    """

    def __init__(
        self,
        field_ctx,
        labels,
        delta,
        counit,
        grouplikes,
        grading=None,
        *,
        name="coalgebra",
        grading_names=None,
        z_axis=None,
        group=None,
        truncation=None,
        dropped=0,
        boundary=(),
        coinvariants=None,
        coradically_graded=None,
        algebra=None,
        keys=None,
    ):
        self.field = field_ctx
        self.__labels = tuple(labels)
        self.__index = {label: i for i, label in enumerate(self.__labels)}
        if len(self.__index) != len(self.__labels):
            raise SpecMismatch(f"duplicate basis labels in {name}")
        self.__delta = tuple(tuple(triples) for triples in delta)
        self.__counit = tuple(counit)
        self.__grouplikes = dict(sorted(grouplikes.items()))
        if grading is None:
            grading = [(0,)] * len(self.__labels)
        self.__grading = tuple(tuple(int(d) for d in deg) for deg in grading)
        self.name = name
        rank = len(self.__grading[0]) if self.__grading else 1
        self.grading_names = tuple(grading_names or [f"d{i}" for i in range(rank)])
        self.z_axis = z_axis
        self.group = tuple(group) if group is not None else None
        self.truncation = dict(truncation or {})
        self.dropped = dropped
        self.boundary = frozenset(boundary)
        self.coinvariants = tuple(coinvariants) if coinvariants is not None else None
        self.coradically_graded = coradically_graded
        self.algebra = algebra
        self.keys = tuple(keys) if keys is not None else self.__labels
        self.__key_index = {key: i for i, key in enumerate(self.keys)}
        self.__by_element = {elem: i for i, elem in self.__grouplikes.items() if elem is not None}
        self.__path = False

    # basis access -------------------------------------------------------------------------------
    @property
    def dim(self):
        return len(self.__labels)

    @property
    def basis(self):
        return [BasisId(i, label) for i, label in enumerate(self.__labels)]

    @property
    def labels(self):
        return self.__labels

    def label(self, i):
        return self.__labels[i]

    def index(self, label):
        try:
            return self.__index[label]
        except KeyError:
            raise SpecMismatch(f"{label!r} is not a basis label of {self.name}") from None

    def index_of_key(self, key):
        return self.__key_index.get(key)

    def delta(self, i):
        return self.__delta[i]

    def counit(self, i):
        return self.__counit[i]

    def grading(self, i):
        return self.__grading[i]

    @property
    def grading_rank(self):
        return len(self.grading_names)

    @property
    def zero_degree(self):
        return (0,) * self.grading_rank

    def total_degree(self, i):
        return sum(self.__grading[i])

    def z_degree(self, i):
        if self.z_axis is None:
            return self.total_degree(i)
        return self.__grading[i][self.z_axis]

    @property
    def finite(self):
        """False when the spec is a truncation of an infinite-dimensional coalgebra."""
        return not self.truncation

    @property
    def degree_bound(self):
        """Largest total degree whose slices are complete, ``None`` when every slice is."""
        return self.truncation.get("degree_bound")

    def complete(self, degree):
        bound = self.degree_bound
        return bound is None or sum(degree) <= bound

    # grouplikes -------------------------------------------------------------------------------
    @property
    def grouplikes(self):
        return list(self.__grouplikes)

    def is_grouplike(self, i):
        return i in self.__grouplikes

    def group_element(self, i):
        self.require_grouplike(i)
        return self.__grouplikes[i]

    def require_grouplike(self, *indices):
        for i in indices:
            if i not in self.__grouplikes:
                label = self.__labels[i] if isinstance(i, int) and 0 <= i < self.dim else i
                raise NotGrouplike(f"{label} is not a grouplike of {self.name}")

    @property
    def has_group_law(self):
        return self.group is not None and all(e is not None for e in self.__grouplikes.values())

    def _require_group_law(self):
        if not self.has_group_law:
            raise SpecMismatch(f"{self.name} carries no grouplike multiplication")

    def _normal(self, elem):
        return tuple(e % m if m else e for e, m in zip(elem, self.group))

    def grouplike_of(self, elem):
        """Index of the grouplike with group element ``elem``, ``None`` when outside the basis."""
        self._require_group_law()
        return self.__by_element.get(self._normal(elem))

    @property
    def identity(self):
        if self.group is None:
            ones = [i for i in self.__grouplikes if self.__labels[i] == "1"]
            if len(ones) == 1:
                return ones[0]
            raise SpecMismatch(f"{self.name} has no distinguished grouplike 1")
        return self.grouplike_of((0,) * len(self.group))

    def group_multiply(self, g, h):
        self.require_grouplike(g, h)
        self._require_group_law()
        elem = tuple(a + b for a, b in zip(self.__grouplikes[g], self.__grouplikes[h]))
        return self.grouplike_of(elem)

    def group_inverse(self, g):
        self.require_grouplike(g)
        self._require_group_law()
        return self.grouplike_of(tuple(-a for a in self.__grouplikes[g]))

    def group_power(self, g, k):
        self.require_grouplike(g)
        self._require_group_law()
        return self.grouplike_of(tuple(k * a for a in self.__grouplikes[g]))

    # algebra ----------------------------------------------------------------------------------
    def multiply(self, i, j):
        if self.algebra is None:
            raise SpecMismatch(f"{self.name} carries no algebra table")
        product = self.algebra.multiply(i, j)
        if product is None:
            raise SpecMismatch(f"{self.label(i)} * {self.label(j)} leaves the basis of {self.name}")
        return product

    def translate(self, g, i):
        """Index of g*b_i for a grouplike g when that product is again a basis element."""
        if self.algebra is None and g == self._unit_or_none():
            return i
        product = self.multiply(g, i)
        if len(product) != 1 or next(iter(product.values())) != 1:
            raise SpecMismatch(f"{self.label(g)} * {self.label(i)} is not a basis element")
        return next(iter(product))

    def _unit_or_none(self):
        try:
            return self.identity
        except SpecMismatch:
            return None

    # derived tables ---------------------------------------------------------------------------
    def delta_vector(self, i):
        vec = {}
        for a, b, s in self.__delta[i]:
            axpy(vec, s, {(a, b): self.field.one})
        return vec

    def path_data(self):
        """``{index: (source, target)}`` for the non-grouplike basis, or ``None``.

        Every non-grouplike b must satisfy Δ(b) = s⊗b + b⊗t + (terms whose legs are both
        non-grouplike) with s, t grouplike.
        """
        if self.__path is not False:
            return self.__path
        data = {}
        for i in range(self.dim):
            if i in self.__grouplikes:
                continue
            left = [(a, b, s) for a, b, s in self.__delta[i] if a in self.__grouplikes]
            right = [(a, b, s) for a, b, s in self.__delta[i] if b in self.__grouplikes]
            if len(left) != 1 or len(right) != 1:
                data = None
                break
            (src, lb, ls), (ra, tgt, rs) = left[0], right[0]
            if lb != i or ra != i or ls != 1 or rs != 1 or self.counit(i):
                data = None
                break
            data[i] = (src, tgt)
        self.__path = data
        return data

    def reduced_delta(self, i):
        """Terms of Δ(b_i) with both legs non-grouplike."""
        return [(a, b, s) for a, b, s in self.__delta[i] if a not in self.__grouplikes and b not in self.__grouplikes]

    def __repr__(self):
        return f"CoalgebraSpec({self.name!r}, dim={self.dim}, grouplikes={len(self.__grouplikes)})"

    # serialisation ----------------------------------------------------------------------------
    def to_json(self, with_product=True):
        data = {
            "name": self.name,
            "field": self.field.to_json(),
            "basis": list(self.__labels),
            "delta": {
                self.__labels[i]: [[self.__labels[a], self.__labels[b], s.to_json()] for a, b, s in self.__delta[i]]
                for i in range(self.dim)
            },
            "counit": {self.__labels[i]: self.__counit[i].to_json() for i in range(self.dim)},
            "grouplikes": [
                {"label": self.__labels[i], "group_element": list(e) if e is not None else None}
                for i, e in self.__grouplikes.items()
            ],
            "grading": {self.__labels[i]: list(self.__grading[i]) for i in range(self.dim)},
            "grading_names": list(self.grading_names),
            "z_axis": self.z_axis,
            "group": list(self.group) if self.group is not None else None,
            "truncation": dict(sorted(self.truncation.items())),
            "dropped": self.dropped,
            "boundary": sorted(self.__labels[i] for i in self.boundary),
            "coinvariants": [self.__labels[i] for i in self.coinvariants] if self.coinvariants is not None else None,
            "coradically_graded": self.coradically_graded,
        }
        if with_product and self.algebra is not None:
            data["product"] = [
                [self.__labels[i], self.__labels[j], [[self.__labels[k], s.to_json()] for k, s in sorted(prod.items())]]
                for (i, j), prod in _materialize(self)
            ]
        return data

    @classmethod
    def from_json(cls, data):
        ctx = FieldContext.from_description(data.get("field", {}))
        labels = list(data["basis"])
        index = {label: i for i, label in enumerate(labels)}
        delta = [
            [(index[a], index[b], ctx.from_json(s)) for a, b, s in data["delta"].get(label, [])] for label in labels
        ]
        counit = [ctx.from_json(data["counit"][label]) if label in data["counit"] else ctx.zero for label in labels]
        grouplikes = {}
        for item in data.get("grouplikes", []):
            elem = item.get("group_element")
            grouplikes[index[item["label"]]] = tuple(elem) if elem is not None else None
        grading = None
        if data.get("grading"):
            grading = [tuple(data["grading"][label]) for label in labels]
        algebra = None
        if "product" in data:
            table = {}
            for a, b, terms in data["product"]:
                table[(index[a], index[b])] = {index[k]: ctx.from_json(s) for k, s in terms}
            algebra = TableAlgebra(table)
        coinvariants = data.get("coinvariants")
        return cls(
            ctx,
            labels,
            delta,
            counit,
            grouplikes,
            grading,
            name=data.get("name", "coalgebra"),
            grading_names=data.get("grading_names"),
            z_axis=data.get("z_axis"),
            group=data.get("group"),
            truncation=data.get("truncation"),
            dropped=data.get("dropped", 0),
            boundary=[index[label] for label in data.get("boundary", [])],
            coinvariants=[index[label] for label in coinvariants] if coinvariants is not None else None,
            coradically_graded=data.get("coradically_graded"),
            algebra=algebra,
        )


def _materialize(spec):
    if isinstance(spec.algebra, TableAlgebra):
        return spec.algebra.items()
    table = []
    for i, j in itertools.product(range(spec.dim), repeat=2):
        prod = spec.algebra.multiply(i, j)
        if prod is not None:
            table.append(((i, j), prod))
    return table


def validate(spec):
    """Check coassociativity, counit, grouplike and grading axioms on every basis element.

    Elements sitting on a truncation boundary (Δ triples were dropped) are skipped together with the
    elements whose coproduct touches them.
    """
    report = ValidationReport(spec.name)
    one = spec.field.one
    skip = set(spec.boundary)
    for i in range(spec.dim):
        if any(a in spec.boundary or b in spec.boundary for a, b, _ in spec.delta(i)):
            skip.add(i)
    report.skipped = sorted(spec.label(i) for i in skip)
    for i in range(spec.dim):
        label = spec.label(i)
        triples = spec.delta(i)
        for a, b, _ in triples:
            if tuple(x + y for x, y in zip(spec.grading(a), spec.grading(b))) != spec.grading(i):
                report.violations.append(
                    Violation("grading", label, f"{spec.label(a)} (x) {spec.label(b)} has the wrong degree")
                )
                break
        if spec.is_grouplike(i):
            if spec.delta_vector(i) != {(i, i): one}:
                report.violations.append(Violation("grouplike", label, "delta(g) != g (x) g"))
            if spec.counit(i) != 1:
                report.violations.append(Violation("grouplike", label, "counit(g) != 1"))
            if spec.z_degree(i) != 0:
                report.violations.append(Violation("grouplike", label, "nonzero z-degree"))
        if i in skip:
            continue
        left, right = {}, {}
        for a, b, s in triples:
            if spec.counit(a):
                axpy(left, s * spec.counit(a), {b: one})
            if spec.counit(b):
                axpy(right, s * spec.counit(b), {a: one})
        if left != {i: one} or right != {i: one}:
            report.violations.append(Violation("counit", label, _counit_detail(spec, left, right, i)))
        witness = _coassociativity_witness(spec, i)
        if witness is not None:
            report.violations.append(Violation("coassociativity", label, witness))
    return report


def _counit_detail(spec, left, right, i):
    one = spec.field.one
    side = "left" if left != {i: one} else "right"
    found = left if side == "left" else right
    return f"{side} counit gives " + (" + ".join(f"({c}) {spec.label(k)}" for k, c in sorted(found.items())) or "0")


def _coassociativity_witness(spec, i):
    lhs, rhs = {}, {}
    for a, b, s in spec.delta(i):
        for a1, a2, t in spec.delta(a):
            axpy(lhs, s * t, {(a1, a2, b): spec.field.one})
        for b1, b2, t in spec.delta(b):
            axpy(rhs, s * t, {(a, b1, b2): spec.field.one})
    if lhs == rhs:
        return None
    for word in sorted(set(lhs) | set(rhs)):
        if lhs.get(word) != rhs.get(word):
            labels = " (x) ".join(spec.label(k) for k in word)
            return f"{labels}: {lhs.get(word, 0)} vs {rhs.get(word, 0)}"
    return None


def _degree_add(u, v):
    return tuple(a + b for a, b in zip(u, v))


def _degree_sub(u, v):
    return tuple(a - b for a, b in zip(u, v))


def _by_degree(spec, indices):
    groups = defaultdict(list)
    for i in indices:
        groups[spec.grading(i)].append(i)
    return groups


def _reachable(groups, n):
    reach = [{tuple(0 for _ in next(iter(groups)))}]
    for _ in range(n):
        reach.append({_degree_add(d, e) for d in reach[-1] for e in groups})
    return reach


def tensor_basis(spec, n, degree=None):
    """All words of length ``n`` whose degrees sum to ``degree``, in lexicographic order."""
    if degree is None:
        if not spec.finite:
            raise InfiniteSlice(f"unconstrained slice of the truncated coalgebra {spec.name}")
        return [tuple(word) for word in itertools.product(range(spec.dim), repeat=n)]
    return _words(spec, range(spec.dim), n, tuple(degree))


def _words(spec, indices, n, degree, chain=None):
    groups = _by_degree(spec, indices)
    if n == 0:
        if chain is not None and chain[1] != chain[2]:
            return []
        return [EMPTY_WORD] if all(d == 0 for d in degree) else []
    if not groups:
        return []
    reach = _reachable(groups, n)
    ordered = sorted(indices)
    words = []

    def extend(prefix, remaining, left):
        if left == 0:
            if chain is None or chain[0][prefix[-1]][1] == chain[2]:
                words.append(tuple(prefix))
            return
        for i in ordered:
            if chain is not None:
                src = chain[0][i][0]
                if src != (chain[1] if not prefix else chain[0][prefix[-1]][1]):
                    continue
            rest = _degree_sub(remaining, spec.grading(i))
            if rest in reach[left - 1]:
                prefix.append(i)
                extend(prefix, rest, left - 1)
                prefix.pop()

    if degree in reach[n]:
        extend([], degree, n)
    return words


def words_over(spec, indices, n, degree):
    """Words of length ``n`` over the given basis indices with degrees summing to ``degree``."""
    return _words(spec, sorted(indices), n, tuple(degree))


def path_words(spec, g, h, n, degree):
    """Composable words b1..bn of non-grouplikes from g to h (source of b1 is g, target of bn is h)."""
    data = spec.path_data()
    if data is None:
        raise SpecMismatch(f"{spec.name} has no bi-homogeneous non-grouplike basis")
    return _words(spec, sorted(data), n, tuple(degree), chain=(data, g, h))


def word_degrees(spec, n, indices=None):
    """Every degree reached by words of length ``n``."""
    groups = _by_degree(spec, range(spec.dim) if indices is None else indices)
    if not groups:
        return [spec.zero_degree] if n == 0 else []
    return sorted(_reachable(groups, n)[n])


def skew_primitives(spec, g, h):
    """Basis of the (h, g)-primitives {c : Δ(c) = g⊗c + c⊗h} and dim PP¹_{g,h}."""
    spec.require_grouplike(g, h)
    one = spec.field.one
    images = []
    for i in range(spec.dim):
        image = {(g, i): one}
        axpy(image, -one, spec.delta_vector(i))
        axpy(image, one, {(i, h): one})
        images.append(((i,), image))
    kernel, _ = kernel_basis(images, spec.field)
    vectors = [SparseVector(vec) for vec in kernel]
    return vectors, len(vectors) - (1 if g != h else 0)


def direct_sum(specs, name=None):
    """Disjoint union of coalgebras; summand ``k`` labels are suffixed ``#k``."""
    if not specs:
        raise SpecMismatch("direct sum of nothing")
    ctx = specs[0].field
    if any(s.field != ctx for s in specs):
        raise SpecMismatch("summands over different fields")
    rank = sum(s.grading_rank for s in specs)
    labels, delta, counit, grading, grouplikes, boundary = [], [], [], [], {}, []
    offsets = []
    pad_before = 0
    for k, s in enumerate(specs):
        offset = len(labels)
        offsets.append(offset)
        for i in range(s.dim):
            labels.append(f"{s.label(i)}#{k}")
            delta.append([(a + offset, b + offset, c) for a, b, c in s.delta(i)])
            counit.append(s.counit(i))
            deg = [0] * rank
            deg[pad_before : pad_before + s.grading_rank] = s.grading(i)
            grading.append(tuple(deg))
            if s.is_grouplike(i):
                grouplikes[i + offset] = None
            if i in s.boundary:
                boundary.append(i + offset)
        pad_before += s.grading_rank
    bound = [s.degree_bound for s in specs if s.degree_bound is not None]
    truncation = {"degree_bound": min(bound)} if bound else None
    spec = CoalgebraSpec(
        ctx,
        labels,
        delta,
        counit,
        grouplikes,
        grading,
        name=name or " + ".join(s.name for s in specs),
        grading_names=[f"{n}#{k}" for k, s in enumerate(specs) for n in s.grading_names],
        truncation=truncation,
        dropped=sum(s.dropped for s in specs),
        boundary=boundary,
    )
    spec.summand_offsets = offsets
    return spec


def tensor_product(left, right, name=None):
    """Tensor product coalgebra with interleaved coproduct; labels read ``a|b``."""
    if left.field != right.field:
        raise SpecMismatch("tensor factors over different fields")
    ctx = left.field
    dim_r = right.dim

    def idx(a, b):
        return a * dim_r + b

    labels, delta, counit, grading = [], [], [], []
    for a, b in itertools.product(range(left.dim), range(dim_r)):
        labels.append(f"{left.label(a)}|{right.label(b)}")
        triples = {}
        for a1, a2, s in left.delta(a):
            for b1, b2, t in right.delta(b):
                axpy(triples, s * t, {(idx(a1, b1), idx(a2, b2)): ctx.one})
        delta.append([(x, y, c) for (x, y), c in sorted(triples.items())])
        counit.append(left.counit(a) * right.counit(b))
        grading.append(left.grading(a) + right.grading(b))
    grouplikes = {}
    for a in left.grouplikes:
        for b in right.grouplikes:
            ea, eb = left.group_element(a), right.group_element(b)
            grouplikes[idx(a, b)] = ea + eb if ea is not None and eb is not None else None
    group = left.group + right.group if left.group is not None and right.group is not None else None
    algebra = None
    if left.algebra is not None and right.algebra is not None:
        algebra = _ProductAlgebra(left, right)
    truncation = None
    if not (left.finite and right.finite):
        bounds = [s.degree_bound for s in (left, right) if s.degree_bound is not None]
        truncation = {"degree_bound": min(bounds)} if bounds else {"degree_bound": 0}
    coinvariants = None
    if left.coinvariants is not None and right.coinvariants is not None:
        coinvariants = [idx(a, b) for a in left.coinvariants for b in right.coinvariants]
    boundary = [idx(a, b) for a in range(left.dim) for b in range(dim_r) if a in left.boundary or b in right.boundary]
    graded = left.coradically_graded and right.coradically_graded
    return CoalgebraSpec(
        ctx,
        labels,
        delta,
        counit,
        grouplikes,
        grading,
        name=name or f"{left.name} (x) {right.name}",
        grading_names=[f"{n}.l" for n in left.grading_names] + [f"{n}.r" for n in right.grading_names],
        z_axis=left.z_axis,
        group=group,
        truncation=truncation,
        # lower bound on the lost product triples
        dropped=left.dropped * right.dim + right.dropped * left.dim,
        boundary=boundary,
        coinvariants=coinvariants,
        coradically_graded=graded,
        algebra=algebra,
    )


class _ProductAlgebra:
    def __init__(self, left, right):
        self.left = left
        self.right = right

    def multiply(self, i, j):
        dim_r = self.right.dim
        (a, b), (c, d) = divmod(i, dim_r), divmod(j, dim_r)
        pl = self.left.algebra.multiply(a, c)
        pr = self.right.algebra.multiply(b, d)
        if pl is None or pr is None:
            return None
        product = {}
        for x, s in pl.items():
            for y, t in pr.items():
                axpy(product, s * t, {x * dim_r + y: self.left.field.one})
        return product
