"""Cochain products on Ω_{1,G}(H) = ⊕_g T_{1,g}(H), the adjoint action of G and the cohomology ring table.

A cochain f ⊠ c lives in T_{1,D}(H)ⁿ = H^{⊗n} ⊠ D with D = kG. The product of f ⊠ c with f' ⊠ c' is
Σ f ⊗ (c_1⊗…⊗c_m)f' ⊠ c_{m+1}c', which for a grouplike c is f ⊗ (c⊗…⊗c)f' ⊠ cc'.
"""
import itertools
import random
from dataclasses import dataclass, field
from typing import Optional

from hopf_cohomology.cobar import (
    apply_differential,
    boundary_vectors,
    primitive_cohomology,
    resolve_method,
    slice_degrees,
)
from hopf_cohomology.coalgebra import EMPTY_WORD, SparseVector, tensor_basis, tensor_product
from hopf_cohomology.exceptions import SpecMismatch
from hopf_cohomology.linalg import Eliminator, axpy, rank
from hopf_cohomology.report import CheckResult


@dataclass(frozen=True)
class DCochain:
    spec: object
    n: int
    g: int
    vector: SparseVector

    def __post_init__(self):
        for word in self.vector:
            if len(word) != self.n:
                raise SpecMismatch(f"word of length {len(word)} in a degree {self.n} cochain")

    @classmethod
    def unit(cls, spec):
        return cls(spec, 0, spec.identity, SparseVector.of(EMPTY_WORD, spec.field.one))

    @classmethod
    def of(cls, spec, g, word, coef=None):
        word = tuple(word)
        return cls(spec, len(word), g, SparseVector.of(word, spec.field.one if coef is None else coef))

    def __bool__(self):
        return bool(self.vector)

    def __eq__(self, other):
        if not isinstance(other, DCochain):
            return NotImplemented
        if not self.vector and not other.vector:
            return self.n == other.n
        return (self.n, self.g) == (other.n, other.g) and dict(self.vector) == dict(other.vector)

    def __add__(self, other):
        _same_bidegree(self, other)
        return DCochain(self.spec, self.n, self.g, self.vector + other.vector)

    def __sub__(self, other):
        _same_bidegree(self, other)
        return DCochain(self.spec, self.n, self.g, self.vector - other.vector)

    def scale(self, coef):
        return DCochain(self.spec, self.n, self.g, self.vector.scale(coef))

    def differential(self):
        """∂_{1,g} on the g-component."""
        spec = self.spec
        return DCochain(spec, self.n + 1, self.g, apply_differential(spec, spec.identity, self.g, self.vector))

    def describe(self):
        return f"({self.vector.describe(self.spec)}) [] {self.spec.label(self.g)}"


def _same_bidegree(x, y):
    if x.spec is not y.spec:
        raise SpecMismatch("cochains over different specs")
    if (x.n, x.g) != (y.n, y.g) and x.vector and y.vector:
        raise SpecMismatch(f"bidegrees ({x.n}, {x.g}) and ({y.n}, {y.g}) differ")


def _legwise(spec, left, right):
    """(l_1⊗…⊗l_m)·(r_1⊗…⊗r_m) for words of equal length, as a dict of words."""
    out = {(): spec.field.one}
    for a, b in zip(left, right):
        product = spec.multiply(a, b)
        step = {}
        for word, coef in out.items():
            for k, s in product.items():
                axpy(step, coef * s, {word + (k,): spec.field.one})
        out = step
    return out


def iterated_coproduct(spec, c, legs):
    """Δ^{(legs-1)}(c) as a dict of ``legs``-tuples."""
    out = {(c,): spec.field.one}
    for _ in range(legs - 1):
        step = {}
        for word, coef in out.items():
            for a, b, s in spec.delta(word[-1]):
                axpy(step, coef * s, {word[:-1] + (a, b): spec.field.one})
        out = step
    return out


def _general_product(x, y):
    """Σ f ⊗ (c_1⊗…⊗c_m)f' ⊠ c_{m+1}c' with the D-components kept apart."""
    spec = x.spec
    components = {}
    for cs, coef in iterated_coproduct(spec, x.g, y.n + 1).items():
        head, last = cs[:-1], cs[-1]
        for target, s in spec.multiply(last, y.g).items():
            bucket = components.setdefault(target, {})
            for fw, fc in x.vector.items():
                for gw, gc in y.vector.items():
                    for word, t in _legwise(spec, head, gw).items():
                        axpy(bucket, coef * s * fc * gc * t, {fw + word: spec.field.one})
    return {c: vec for c, vec in components.items() if vec}


def _grouplike_product(x, y):
    spec = x.spec
    target = spec.group_multiply(x.g, y.g)
    if target is None:
        raise SpecMismatch(f"{spec.label(x.g)}{spec.label(y.g)} leaves the grouplikes of {spec.name}")
    vec = {}
    for fw, fc in x.vector.items():
        for gw, gc in y.vector.items():
            translated = tuple(spec.translate(x.g, b) for b in gw)
            axpy(vec, fc * gc, {fw + translated: spec.field.one})
    return target, vec


def cochain_product(x, y):
    """x ⊙ y; the general D-cobar product, checked against the grouplike shortcut."""
    if x.spec is not y.spec:
        raise SpecMismatch("cochains over different specs")
    spec = x.spec
    target, short = _grouplike_product(x, y)
    general = _general_product(x, y)
    expected = {target: short} if short else {}
    if general != expected:
        raise SpecMismatch(
            f"D-cobar product of {x.describe()} and {y.describe()} is not concentrated at {spec.label(target)}"
        )
    return DCochain(spec, x.n + y.n, target, SparseVector(short))


def adjoint_action(a, x):
    """ad(a)(f ⊠ c) = a f_1 a⁻¹ ⊗ … ⊗ a f_n a⁻¹ ⊠ a c a⁻¹ for a grouplike a."""
    spec = x.spec
    spec.require_grouplike(a)
    inverse = spec.group_inverse(a)
    if inverse is None:
        raise SpecMismatch(f"{spec.label(a)} has no inverse inside {spec.name}")
    vec = {}
    for word, coef in x.vector.items():
        conj = {(): coef}
        for b in word:
            left = spec.multiply(a, b)
            leg = {}
            for k, s in left.items():
                axpy(leg, s, spec.multiply(k, inverse))
            step = {}
            for prefix, c in conj.items():
                for k, s in leg.items():
                    axpy(step, c * s, {prefix + (k,): spec.field.one})
            conj = step
        axpy(vec, spec.field.one, conj)
    g = spec.group_multiply(spec.group_multiply(a, x.g), inverse)
    return DCochain(spec, x.n, g, SparseVector(vec))


def _require_ring_structure(spec):
    if spec.algebra is None or not spec.has_group_law:
        raise SpecMismatch(f"{spec.name} carries no algebra table with a grouplike group law")


def random_cochain(spec, rng, n, terms=2, coef_range=3):
    """A sparse cochain at a random grouplike and degree slice with small integer coefficients."""
    g = rng.choice(spec.grouplikes)
    degrees = slice_degrees(spec, n)
    if not degrees:
        return DCochain(spec, n, g, SparseVector())
    words = tensor_basis(spec, n, rng.choice(degrees))
    if not words:
        return DCochain(spec, n, g, SparseVector())
    vec = {}
    for word in rng.sample(words, min(terms, len(words))):
        coef = rng.randint(1, coef_range) * rng.choice((1, -1))
        axpy(vec, spec.field(coef), {word: spec.field.one})
    return DCochain(spec, n, g, SparseVector(vec))


def sample_cochains(spec, count, seed, n_max=3, arity=2):
    """``count`` tuples of ``arity`` seeded cochains; the first tuple contains the unit."""
    rng = random.Random(seed)
    unit = DCochain.unit(spec)
    samples = []
    for k in range(count):
        items = [random_cochain(spec, rng, rng.randint(0, n_max)) for _ in range(arity)]
        if k == 0:
            items[0] = unit
        samples.append(tuple(items))
    return samples


def leibniz_check(spec, samples=50, seed=7, n_max=3):
    """∂(x⊙y) = ∂x⊙y + (-1)ⁿ x⊙∂y on seeded cochain pairs."""
    _require_ring_structure(spec)
    for x, y in sample_cochains(spec, samples, seed, n_max):
        lhs = cochain_product(x, y).differential()
        rhs = cochain_product(x.differential(), y)
        second = cochain_product(x, y.differential())
        rhs = rhs + second if x.n % 2 == 0 else rhs - second
        if lhs != rhs:
            return CheckResult.failed("leibniz", f"x={x.describe()} y={y.describe()}")
    return CheckResult("leibniz", details={"samples": samples, "seed": seed})


def associativity_check(spec, samples=30, seed=7, n_max=2):
    _require_ring_structure(spec)
    for x, y, z in sample_cochains(spec, samples, seed, n_max, arity=3):
        if cochain_product(cochain_product(x, y), z) != cochain_product(x, cochain_product(y, z)):
            return CheckResult.failed("associativity", f"x={x.describe()} y={y.describe()} z={z.describe()}")
    return CheckResult("associativity", details={"samples": samples, "seed": seed})


def ad_chain_map_check(spec, samples=30, seed=7, n_max=2, actors=None):
    """ad(a) commutes with ∂, is an action of G and respects ⊙, on seeded samples."""
    _require_ring_structure(spec)
    actors = list(actors) if actors is not None else spec.grouplikes
    for x, y in sample_cochains(spec, samples, seed, n_max):
        for a in actors:
            if adjoint_action(a, x).differential() != adjoint_action(a, x.differential()):
                return CheckResult.failed("ad chain map", f"a={spec.label(a)} x={x.describe()}")
            if adjoint_action(a, cochain_product(x, y)) != cochain_product(adjoint_action(a, x), adjoint_action(a, y)):
                return CheckResult.failed("ad product", f"a={spec.label(a)} x={x.describe()} y={y.describe()}")
            for b in actors:
                ab = spec.group_multiply(a, b)
                if ab is None:
                    continue
                if adjoint_action(ab, x) != adjoint_action(a, adjoint_action(b, x)):
                    return CheckResult.failed("ad action", f"a={spec.label(a)} b={spec.label(b)} x={x.describe()}")
    return CheckResult("ad chain map", details={"samples": samples, "seed": seed})


@dataclass
class RingClass:
    n: int
    g: int
    degree: tuple
    rep: SparseVector


@dataclass
class RingTable:
    spec: object
    classes: list
    products: dict
    n_max: int
    deg_max: Optional[int] = None
    stable: Optional[bool] = None
    method: str = "cobar"

    def class_ids(self, n=None, g=None, degree=None):
        return [
            k
            for k, c in enumerate(self.classes)
            if (n is None or c.n == n) and (g is None or c.g == g) and (degree is None or c.degree == tuple(degree))
        ]

    def product(self, i, j):
        return self.products.get((i, j), {})

    def span_rank(self, pairs):
        """Rank of the span of the products of the given class pairs."""
        return rank([self.product(i, j) for i, j in pairs])

    def to_json(self):
        spec = self.spec
        return {
            "spec": spec.name,
            "classes": [
                {"n": c.n, "g": spec.label(c.g), "degree": list(c.degree), "rep": c.rep.to_json(spec)}
                for c in self.classes
            ],
            "products": [
                {"left": i, "right": j, "result": [[k, v.to_json()] for k, v in sorted(result.items())]}
                for (i, j), result in sorted(self.products.items())
            ],
            "stable": self.stable,
        }


def _structure_constants(spec, classes, reps, n_max, deg_max, method):
    one = spec.identity
    slices = {}
    for k, c in enumerate(classes):
        slices.setdefault((c.n, c.g, c.degree), []).append(k)
    products = {}
    solvers = {}
    for i, j in itertools.product(range(len(classes)), repeat=2):
        a, b = classes[i], classes[j]
        n = a.n + b.n
        g = spec.group_multiply(a.g, b.g)
        if n > n_max or g is None:
            continue
        degree = tuple(x + y for x, y in zip(a.degree, b.degree))
        if not spec.complete(degree) or (deg_max is not None and sum(degree) > deg_max):
            continue
        key = (n, g, degree)
        if key not in solvers:
            echelon = Eliminator(spec.field, track=True)
            for vec in boundary_vectors(spec, one, g, n, degree, method):
                echelon.add(vec)
            for k in slices.get(key, []):
                echelon.add(reps[k], tag=k)
            solvers[key] = echelon
        x = DCochain(spec, a.n, a.g, reps[i])
        y = DCochain(spec, b.n, b.g, reps[j])
        prod = cochain_product(x, y)
        remainder, combination = solvers[key].reduce(prod.vector)
        if remainder:
            raise SpecMismatch(f"product of classes {i} and {j} is not a cocycle of {spec.name}")
        products[(i, j)] = {k: v for k, v in combination.items() if v}
    return products


def ring_structure(spec, n_max=2, deg_max=None, seed=None, method="auto"):
    """Classes of ⊕ PPⁿ_{1,g} with n <= n_max and their ⊙ structure constants.

    With a ``seed`` the constants are recomputed from representatives perturbed by random boundaries
    and ``stable`` records whether both runs agree.
    """
    _require_ring_structure(spec)
    method = resolve_method(spec, method)
    one = spec.identity
    classes = []
    for n in range(n_max + 1):
        for g in spec.grouplikes:
            for degree in slice_degrees(spec, n, deg_max, method):
                _, reps = primitive_cohomology(spec, one, g, n, degree, method)
                classes.extend(RingClass(n, g, tuple(degree), rep) for rep in reps)
    reps = [c.rep for c in classes]
    products = _structure_constants(spec, classes, reps, n_max, deg_max, method)
    table = RingTable(spec, classes, products, n_max, deg_max, method=method)
    if seed is not None:
        rng = random.Random(seed)
        perturbed = []
        for c in classes:
            vec = dict(c.rep)
            for boundary in boundary_vectors(spec, one, c.g, c.n, c.degree, method):
                axpy(vec, spec.field(rng.randint(-2, 2)), boundary)
            perturbed.append(SparseVector(vec))
        table.stable = _structure_constants(spec, classes, perturbed, n_max, deg_max, method) == products
    return table


def _total(spec, g, h, n, method, deg_max):
    return primitive_cohomology(spec, g, h, n, method=method, with_reps=False, deg_max=deg_max)[0]


def kunneth_check(spec1, spec2, pairs, n_max, deg_max=None, method="auto"):
    """dim PPⁿ over spec1 ⊗ spec2 against the convolution of the factors' dims.

    ``pairs`` lists ``((g1, g2), (h1, h2))`` of grouplike indices in the factors.
    """
    product = tensor_product(spec1, spec2)
    for (g1, g2), (h1, h2) in pairs:
        g, h = g1 * spec2.dim + g2, h1 * spec2.dim + h2
        left = [_total(spec1, g1, h1, s, method, deg_max) for s in range(n_max + 1)]
        right = [_total(spec2, g2, h2, s, method, deg_max) for s in range(n_max + 1)]
        for n in range(n_max + 1):
            got = _total(product, g, h, n, method, deg_max)
            expected = sum(left[s] * right[n - s] for s in range(n + 1))
            if got != expected:
                label = f"({spec1.label(g1)}|{spec2.label(g2)}, {spec1.label(h1)}|{spec2.label(h2)})"
                return CheckResult.failed("kunneth", f"{label} n={n}: {got} vs {expected}")
    return CheckResult("kunneth")

