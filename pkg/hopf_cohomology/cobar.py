"""Degree-sliced twisted cobar complexes T_{g,h}(C) and primitive cohomology.

The differential on a word b1..bn is::

    g⊗b1..bn + sum_i (-1)^(i+1) b1..Δ(b_(i+1))..bn + (-1)^(n+1) b1..bn⊗h

Each (g, h, n, degree) slice is computed independently from an immutable spec, so slices can be handed to
a thread pool and merged afterwards in key order.
"""
import functools
import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import sympy

from hopf_cohomology.coalgebra import (
    SparseVector,
    direct_sum,
    path_words,
    skew_primitives,
    tensor_basis,
    word_degrees,
    words_over,
)
from hopf_cohomology.exceptions import BuildError, ConfigError, InfiniteSlice, NotPointed, SpecMismatch
from hopf_cohomology.families import bracket_element
from hopf_cohomology.linalg import Eliminator, kernel_basis, rank, scaled
from hopf_cohomology.report import CheckResult
from hopf_cohomology.sys_utils import worker_count

METHODS = ("auto", "cobar", "path")


def _add(target, word, coef):
    value = target.get(word)
    value = coef if value is None else value + coef
    if value:
        target[word] = value
    else:
        target.pop(word, None)


def resolve_method(spec, method):
    if method not in METHODS:
        raise ConfigError(f"unknown cohomology method {method!r} (expected one of {', '.join(METHODS)})")
    if method == "auto":
        return "path" if spec.path_data() is not None else "cobar"
    if method == "path" and spec.path_data() is None:
        raise SpecMismatch(f"{spec.name} has no bi-homogeneous non-grouplike basis")
    return method


def cobar_image(spec, g, h, word):
    """∂ⁿ_{g,h} of a single tensor word."""
    one = spec.field.one
    image = {}
    _add(image, (g,) + word, one)
    for i, b in enumerate(word):
        sign = one if i % 2 else -one
        prefix, suffix = word[:i], word[i + 1 :]
        for a, c, s in spec.delta(b):
            _add(image, prefix + (a, c) + suffix, sign * s)
    _add(image, word + (h,), one if len(word) % 2 else -one)
    return image


def path_image(spec, word):
    """∂ restricted to composable non-grouplike words: only the reduced coproducts survive."""
    one = spec.field.one
    image = {}
    for i, b in enumerate(word):
        sign = one if i % 2 else -one
        prefix, suffix = word[:i], word[i + 1 :]
        for a, c, s in spec.reduced_delta(b):
            _add(image, prefix + (a, c) + suffix, sign * s)
    return image


def apply_differential(spec, g, h, vector):
    """∂ of a linear combination of words."""
    image = {}
    for word, coef in vector.items():
        for target, value in cobar_image(spec, g, h, word).items():
            _add(image, target, coef * value)
    return SparseVector(image)


def _image(spec, g, h, word, method):
    return path_image(spec, word) if method == "path" else cobar_image(spec, g, h, word)


def word_degree(spec, word):
    degree = list(spec.zero_degree)
    for i in word:
        for k, d in enumerate(spec.grading(i)):
            degree[k] += d
    return tuple(degree)


def slice_degrees(spec, n, deg_max=None, method="cobar"):
    """Complete degrees carried by n-words, optionally capped in total degree."""
    indices = sorted(spec.path_data()) if method == "path" else None
    return [
        d for d in word_degrees(spec, n, indices) if spec.complete(d) and (deg_max is None or sum(d) <= deg_max)
    ]


def slice_words(spec, g, h, n, degree, method):
    if n < 0:
        return []
    if degree is None:
        if not spec.finite:
            raise InfiniteSlice(f"unconstrained slice of the truncated coalgebra {spec.name}")
        if method != "path":
            return tensor_basis(spec, n)
        return sorted(w for d in slice_degrees(spec, n, method=method) for w in path_words(spec, g, h, n, d))
    if method == "path":
        return path_words(spec, g, h, n, degree)
    return tensor_basis(spec, n, degree)


def _require_complete(spec, degree):
    if degree is not None and not spec.complete(degree):
        raise InfiniteSlice(f"degree {list(degree)} exceeds the truncation of {spec.name}")


@dataclass
class ComplexSlice:
    spec: object
    g: int
    h: int
    n: int
    degree: Optional[tuple]
    method: str
    domain_basis: list
    codomain_basis: list
    columns: list

    @property
    def shape(self):
        return len(self.codomain_basis), len(self.domain_basis)

    @property
    def nnz(self):
        return sum(len(col) for col in self.columns)

    def entries(self):
        """(row word, column word, value) triples in column order."""
        for word, column in zip(self.domain_basis, self.columns):
            for row in sorted(column):
                yield row, word, column[row]

    def entry(self, row, col):
        column = self.columns[self.domain_basis.index(col)]
        return column.get(row, self.spec.field.zero)

    def is_zero(self):
        return not any(self.columns)

    def rank(self):
        return rank(self.columns)


def differential_matrix(spec, g, h, n, degree=None, method="cobar"):
    """Sparse matrix of ∂ⁿ_{g,h} on one degree slice; rows are the codomain words that occur."""
    spec.require_grouplike(g, h)
    method = resolve_method(spec, method)
    _require_complete(spec, degree)
    domain = slice_words(spec, g, h, n, degree, method)
    columns = [_image(spec, g, h, word, method) for word in domain]
    codomain = sorted({row for column in columns for row in column})
    return ComplexSlice(spec, g, h, n, tuple(degree) if degree is not None else None, method, domain, codomain, columns)


def check_d_squared(spec, g, h, n_max, deg_max=None):
    """∂^{n+1}∂ⁿ = 0 exactly on every complete slice with n < n_max."""
    spec.require_grouplike(g, h)
    cache = {}

    def image(word):
        if word not in cache:
            cache[word] = cobar_image(spec, g, h, word)
        return cache[word]

    checked = 0
    for n in range(n_max):
        for degree in slice_degrees(spec, n, deg_max):
            for word in tensor_basis(spec, n, degree):
                twice = {}
                for middle, coef in image(word).items():
                    for target, value in image(middle).items():
                        _add(twice, target, coef * value)
                checked += 1
                if twice:
                    target = min(twice)
                    witness = (
                        f"n={n} word=[{', '.join(spec.label(i) for i in word)}] -> "
                        f"[{', '.join(spec.label(i) for i in target)}] coefficient {twice[target]}"
                    )
                    return CheckResult.failed("d_squared", witness, n=n, degree=list(degree))
    return CheckResult("d_squared", details={"words": checked})


@functools.lru_cache(maxsize=512)
def boundary_vectors(spec, g, h, n, degree, method):
    """Images of the (n-1)-words of a slice, i.e. a spanning set of Bⁿ."""
    if n == 0:
        return ()
    return tuple(_image(spec, g, h, word, method) for word in slice_words(spec, g, h, n - 1, degree, method))


def _normalised(vector):
    return SparseVector(scaled(vector, vector[min(vector)].inv()))


def cohomology_slice(spec, g, h, n, degree, method="cobar", with_reps=True):
    """(dim, representatives) of PPⁿ_{g,h} on one degree slice."""
    domain = slice_words(spec, g, h, n, degree, method)
    if not domain:
        return 0, []
    boundaries = boundary_vectors(spec, g, h, n, tuple(degree) if degree is not None else None, method)
    images = [(word, _image(spec, g, h, word, method)) for word in domain]
    if not with_reps:
        nullity = len(domain) - rank([image for _, image in images])
        return nullity - rank(list(boundaries)), []
    kernel, _ = kernel_basis(images, spec.field)
    echelon = Eliminator(spec.field)
    for vec in boundaries:
        echelon.add(vec)
    boundary_rank = echelon.rank
    reps = []
    for vec in kernel:
        remainder, _ = echelon.reduce(vec)
        if remainder:
            echelon.add(remainder)
            reps.append(_normalised(remainder))
    dim = len(kernel) - boundary_rank
    return dim, reps


def primitive_cohomology(spec, g, h, n, degree=None, method="auto", with_reps=True, deg_max=None):
    """dim PPⁿ_{g,h} and representative cocycles, on one slice or summed over all complete slices."""
    spec.require_grouplike(g, h)
    method = resolve_method(spec, method)
    if degree is not None:
        _require_complete(spec, degree)
        return cohomology_slice(spec, g, h, n, tuple(degree), method, with_reps)
    total, reps = 0, []
    for d in slice_degrees(spec, n, deg_max, method):
        dim, found = cohomology_slice(spec, g, h, n, d, method, with_reps)
        total += dim
        reps.extend(found)
    return total, reps


def independent_mod_boundaries(spec, g, h, n, vectors, method="cobar"):
    """True when ``vectors`` (cocycles of T_{g,h}) are linearly independent modulo Bⁿ."""
    by_degree = {}
    for vec in vectors:
        if not vec:
            return False
        by_degree.setdefault(word_degree(spec, next(iter(vec))), []).append(vec)
    for degree, group in by_degree.items():
        echelon = Eliminator(spec.field)
        for vec in boundary_vectors(spec, g, h, n, degree, method):
            echelon.add(vec)
        if not all(echelon.add(vec) for vec in group):
            return False
    return True


def grouplike_pairs(spec, mode="all"):
    """``all`` pairs (g, h), or ``base`` pairs (g, 1)."""
    grouplikes = spec.grouplikes
    if mode == "all":
        return [(g, h) for g in grouplikes for h in grouplikes]
    if mode == "base":
        return [(g, spec.identity) for g in grouplikes]
    raise ConfigError(f"unknown pair selection {mode!r}")


def shift_is_reduced(spec):
    return spec.has_group_law and all(m != 0 for m in spec.group) and spec.algebra is not None


@dataclass(frozen=True)
class PCDimBound:
    value: int
    n_max: int
    deg_max: Optional[int]

    def to_json(self):
        return {"value": self.value, "n_max": self.n_max, "deg_max": self.deg_max}

    def __str__(self):
        cap = "all complete degrees" if self.deg_max is None else f"degree <= {self.deg_max}"
        return f"PCdim >= {self.value} (n <= {self.n_max}, {cap})"


def pcdim_lower_bound(spec, n_max, deg_max=None, method="auto"):
    """Largest n <= n_max with a nonzero PPⁿ_{g,h}; only a lower bound on truncated data."""
    pairs = grouplike_pairs(spec, "base") if shift_is_reduced(spec) else grouplike_pairs(spec)
    for n in range(n_max, 0, -1):
        for g, h in pairs:
            if primitive_cohomology(spec, g, h, n, method=method, with_reps=False, deg_max=deg_max)[0]:
                return PCDimBound(n, n_max, deg_max)
    return PCDimBound(0, n_max, deg_max)


def translate_vector(spec, g, vector):
    """(g⊗…⊗g)·f, leg by leg."""
    return SparseVector({tuple(spec.translate(g, b) for b in word): coef for word, coef in vector.items()})


def shift_check(spec, g, h1, h2, n, degree=None, deg_max=None, method="auto"):
    """Left translation by g carries PPⁿ_{h1,h2} isomorphically onto PPⁿ_{gh1,gh2}."""
    spec.require_grouplike(g, h1, h2)
    method = resolve_method(spec, method)
    k1, k2 = spec.group_multiply(g, h1), spec.group_multiply(g, h2)
    if k1 is None or k2 is None:
        raise SpecMismatch(f"translating ({spec.label(h1)}, {spec.label(h2)}) leaves the grouplikes of {spec.name}")
    name = f"shift {spec.label(g)}: ({spec.label(h1)},{spec.label(h2)}) -> ({spec.label(k1)},{spec.label(k2)})"
    degrees = [tuple(degree)] if degree is not None else slice_degrees(spec, n, deg_max, method)
    for d in degrees:
        source_dim, reps = primitive_cohomology(spec, h1, h2, n, d, method)
        target_dim, _ = primitive_cohomology(spec, k1, k2, n, d, method, with_reps=False)
        if source_dim != target_dim:
            return CheckResult.failed(name, f"degree {list(d)}: dim {source_dim} vs {target_dim}")
        shifted = [translate_vector(spec, g, rep) for rep in reps]
        for rep in shifted:
            if apply_differential(spec, k1, k2, rep):
                return CheckResult.failed(name, f"degree {list(d)}: image of {rep.describe(spec)} is no cocycle")
        if not independent_mod_boundaries(spec, k1, k2, n, shifted, method):
            return CheckResult.failed(name, f"degree {list(d)}: translated classes become dependent")
    return CheckResult(name)


def reduced_delta_table(spec, g):
    """Δ̄(c_b) for c_b = b - ε(b)g, b != g, in the c-basis: the terms of Δ(b) avoiding g on both legs."""
    return {i: [(a, b, s) for a, b, s in spec.delta(i) if a != g and b != g] for i in range(spec.dim) if i != g}


def reduced_cobar_cohomology(spec, g, n, degree=None, deg_max=None):
    """Cohomology of the cobar construction ΩC on ker ε, split at the grouplike g."""
    spec.require_grouplike(g)
    _require_complete(spec, degree)
    table = reduced_delta_table(spec, g)
    letters = sorted(table)
    one = spec.field.one

    def image(word):
        out = {}
        for i, b in enumerate(word):
            sign = one if i % 2 else -one
            for a, c, s in table[b]:
                _add(out, word[:i] + (a, c) + word[i + 1 :], sign * s)
        return out

    total = 0
    degrees = [tuple(degree)] if degree is not None else slice_degrees(spec, n, deg_max)
    for d in degrees:
        domain = words_over(spec, letters, n, d)
        if not domain:
            continue
        nullity = len(domain) - rank([image(w) for w in domain])
        below = words_over(spec, letters, n - 1, d) if n else []
        total += nullity - rank([image(w) for w in below])
    return total


@dataclass
class WindowResult:
    radius: object
    dim: int
    included: Optional[bool] = None
    reps: list = field(default_factory=list)

    def to_json(self):
        data = {"window": self.radius, "dim": self.dim, "reps": self.reps}
        if self.included is not None:
            data["included"] = self.included
        return data


@dataclass
class StabilizationReport:
    g: tuple
    h: tuple
    n: int
    windows: list
    stabilized_at: object = None

    @property
    def stable(self):
        return self.stabilized_at is not None

    @property
    def dims(self):
        return [w.dim for w in self.windows]

    def to_json(self):
        return {
            "g": list(self.g),
            "h": list(self.h),
            "n": self.n,
            "windows": [w.to_json() for w in self.windows],
            "verdict": f"stabilized at {self.stabilized_at}" if self.stable else "not stabilized",
        }


def _relabel(source, target, vector):
    try:
        return SparseVector({tuple(target.index(source.label(i)) for i in word): c for word, c in vector.items()})
    except SpecMismatch:
        return None


def window_stabilize(builder, schedule, g, h, n, degree=None, deg_max=None, method="auto"):
    """PPⁿ_{g,h} over growing windows; ``g`` and ``h`` are group elements, ``builder(radius)`` a spec."""
    windows = []
    previous = None
    for radius in schedule:
        spec = builder(radius)
        gi, hi = spec.grouplike_of(tuple(g)), spec.grouplike_of(tuple(h))
        if gi is None or hi is None:
            raise SpecMismatch(f"window {radius} of {spec.name} misses the grouplikes {g}, {h}")
        used = resolve_method(spec, method)
        dim, reps = primitive_cohomology(spec, gi, hi, n, degree, used, deg_max=deg_max)
        result = WindowResult(radius, dim, reps=[rep.to_json(spec) for rep in reps])
        if previous is not None:
            prev_spec, prev_reps = previous
            moved = [_relabel(prev_spec, spec, rep) for rep in prev_reps]
            result.included = all(v is not None and not apply_differential(spec, gi, hi, v) for v in moved) and (
                independent_mod_boundaries(spec, gi, hi, n, moved, used)
            )
        windows.append(result)
        previous = (spec, reps)
    report = StabilizationReport(tuple(g), tuple(h), n, windows)
    for i in range(len(windows) - 1):
        tail = windows[i:]
        if all(w.dim == tail[0].dim for w in tail) and all(w.included for w in tail[1:]):
            report.stabilized_at = windows[i].radius
            break
    return report


def _effective_deg_max(spec, deg_max):
    bound = spec.degree_bound
    if bound is None:
        return deg_max
    return bound if deg_max is None else min(bound, deg_max)


def direct_sum_check(specs, g, h, n_max, deg_max=None, method="auto"):
    """PPⁿ of a disjoint union: the summand's value inside one summand, zero across summands.

    ``g`` and ``h`` are ``(summand, index)`` pairs.
    """
    total = direct_sum(specs)
    (i, gi), (j, hj) = g, h
    g_all, h_all = total.summand_offsets[i] + gi, total.summand_offsets[j] + hj
    cap = _effective_deg_max(total, deg_max)
    name = f"direct sum ({specs[i].label(gi)}#{i}, {specs[j].label(hj)}#{j})"
    for n in range(n_max + 1):
        got, _ = primitive_cohomology(total, g_all, h_all, n, method=method, with_reps=False, deg_max=cap)
        if i == j:
            expected, _ = primitive_cohomology(specs[i], gi, hj, n, method=method, with_reps=False, deg_max=cap)
        else:
            expected = 0
        if got != expected:
            return CheckResult.failed(name, f"n={n}: {got} in the sum vs {expected}")
    return CheckResult(name)


@dataclass
class RankSignature:
    rank: int
    signature: Optional[sympy.Poly]
    generators: dict = field(default_factory=dict)

    def to_json(self):
        return {
            "rank": self.rank,
            "signature_series": str(self.signature.as_expr()) if self.signature is not None else None,
        }


T = sympy.Symbol("t")


def rank_and_signature(spec):
    """Rank Σ_g dim PP¹_{1,g}, plus the generator series of the coinvariants for coradically graded specs."""
    if not spec.grouplikes:
        raise NotPointed(f"{spec.name} has no grouplike elements")
    try:
        one = spec.identity
    except SpecMismatch as exc:
        raise NotPointed(str(exc)) from exc
    total = sum(skew_primitives(spec, one, g)[1] for g in spec.grouplikes)
    if not spec.coradically_graded or spec.coinvariants is None or spec.algebra is None:
        return RankSignature(total, None)
    generators = _generator_degrees(spec)
    series = sympy.Poly(sum((c * T**d for d, c in generators.items()), sympy.Integer(0)), T)
    return RankSignature(total, series, generators)


def _generator_degrees(spec):
    by_degree = {}
    for i in spec.coinvariants:
        by_degree.setdefault(spec.total_degree(i), []).append(i)
    top = spec.degree_bound if spec.degree_bound is not None else max(by_degree, default=0)
    generators = {}
    for d in range(1, top + 1):
        here = by_degree.get(d, [])
        if not here:
            continue
        products = []
        for a in range(1, d):
            for x, y in itertools.product(by_degree.get(a, []), by_degree.get(d - a, [])):
                product = spec.algebra.multiply(x, y)
                if product:
                    products.append(product)
        count = len(here) - rank(products) if products else len(here)
        if count:
            generators[d] = count
    return generators


def coinvariant_identity_check(spec, line, n_max, deg_max=None, method="auto"):
    """Σ_g dim PPⁿ_{g,1}(H) against dim PPⁿ_{1,1}(R) for n <= n_max."""
    one, base = spec.identity, line.identity
    cap = _effective_deg_max(spec, _effective_deg_max(line, deg_max))
    for n in range(n_max + 1):
        lhs = sum(
            primitive_cohomology(spec, g, one, n, method=method, with_reps=False, deg_max=cap)[0]
            for g in spec.grouplikes
        )
        rhs = primitive_cohomology(line, base, base, n, method=method, with_reps=False, deg_max=cap)[0]
        if lhs != rhs:
            return CheckResult.failed("coinvariant identity", f"n={n}: {lhs} over H vs {rhs} over R")
    return CheckResult("coinvariant identity")


def pp0_check(spec):
    """PP⁰_{g,h} is 1-dimensional exactly when g = h."""
    for g, h in grouplike_pairs(spec):
        dim, _ = primitive_cohomology(spec, g, h, 0, spec.zero_degree, "cobar", with_reps=False)
        if dim != (1 if g == h else 0):
            return CheckResult.failed("pp0", f"PP^0_({spec.label(g)},{spec.label(h)}) has dim {dim}")
    return CheckResult("pp0")


def coradical_check(spec):
    """A spec without skew primitives (PP¹ = 0 everywhere) must be spanned by grouplikes."""
    nonzero = any(skew_primitives(spec, g, h)[1] for g, h in grouplike_pairs(spec))
    if nonzero or len(spec.grouplikes) == spec.dim:
        return CheckResult("coradical")
    stray = next(spec.label(i) for i in range(spec.dim) if not spec.is_grouplike(i))
    return CheckResult.failed("coradical", f"PP^1 vanishes but {stray} is not grouplike")


def bracket_check(spec, ell, q, e):
    """[z]^ell is a cocycle of the cobar complex twisted by (e^ell, 1)."""
    g = spec.grouplike_of(tuple(ell * a for a in e))
    if g is None:
        raise BuildError(f"e^{ell} leaves the basis of {spec.name}")
    image = apply_differential(spec, g, spec.identity, bracket_element(spec, ell, q, e))
    if image:
        return CheckResult.failed("bracket", f"d[z]^{ell} has {len(image)} nonzero terms")
    return CheckResult("bracket")


def _degree_text(degree):
    return list(degree) if degree is not None else None


@dataclass
class CohomologyEntry:
    g: int
    h: int
    n: int
    degree: tuple
    dim: int
    reps: list = field(default_factory=list)

    @property
    def key(self):
        return self.g, self.h, self.n, self.degree


@dataclass
class CohomologyReport:
    spec: object
    entries: list
    n_max: int
    deg_max: Optional[int]
    method: str

    @property
    def pcdim_lb(self):
        value = max((e.n for e in self.entries if e.dim and e.n > 0), default=0)
        return PCDimBound(value, self.n_max, self.deg_max)

    def dims(self, g=None, h=None):
        """Total dims per n, optionally restricted to one side of the grouplike pair."""
        totals = {n: 0 for n in range(self.n_max + 1)}
        for e in self.entries:
            if (g is None or e.g == g) and (h is None or e.h == h):
                totals[e.n] += e.dim
        return totals

    def support(self, n, h=None):
        """Grouplikes g with a nonzero PPⁿ_{g,h} (summed over degrees)."""
        found = {}
        for e in self.entries:
            if e.n == n and e.dim and (h is None or e.h == h):
                found[e.g] = found.get(e.g, 0) + e.dim
        return found

    def to_json(self):
        spec = self.spec
        window = spec.truncation.get("window")
        entries = []
        for e in self.entries:
            entry = {
                "g": spec.label(e.g),
                "h": spec.label(e.h),
                "n": e.n,
                "degree": _degree_text(e.degree),
                "dim": e.dim,
                "reps": [rep.to_json(spec) for rep in e.reps],
            }
            entries.append(entry)
        data = {
            "spec": spec.name,
            "method": self.method,
            "entries": entries,
            "pcdim_lb": self.pcdim_lb.to_json(),
            "truncation": {k: spec.truncation[k] for k in sorted(spec.truncation) if k != "window"},
        }
        if window is not None:
            data["window"] = list(window)
        return data


def compute_report(spec, pairs="all", n_max=2, deg_max=None, method="auto", with_reps=True, threads=None):
    """Every (g, h, n, degree) slice as an independent job; output is sorted by key."""
    method = resolve_method(spec, method)
    if isinstance(pairs, str):
        pairs = grouplike_pairs(spec, pairs)
    for g, h in pairs:
        spec.require_grouplike(g, h)
    jobs = [
        (g, h, n, d)
        for g, h in pairs
        for n in range(n_max + 1)
        for d in slice_degrees(spec, n, deg_max, method)
    ]

    def run(job):
        g, h, n, d = job
        dim, reps = cohomology_slice(spec, g, h, n, d, method, with_reps)
        return CohomologyEntry(g, h, n, d, dim, reps)

    workers = worker_count(threads)
    if workers == 1 or len(jobs) < 2:
        results = [run(job) for job in jobs]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run, jobs))
    results.sort(key=lambda e: e.key)
    return CohomologyReport(spec, results, n_max, deg_max, method)

