"""Builders for group algebras, symmetric coalgebras and the Hopf Ore extension families.

Hopf Ore extensions are handled symbolically: a basis key of ``K[z; sigma, delta]`` is ``(k, p)`` for the
PBW monomial ``k z^p``, products are normalised with ``z k = sigma(k) z + delta(k)`` and the coproduct of
``k z^p`` is ``Δ(k) Δ(z)^p`` computed in ``H (x) H``. Only the final table is truncated to a basis.
"""
import itertools
import math
import re
import warnings
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Optional

from hopf_cohomology.coalgebra import CoalgebraSpec, SparseVector, TableAlgebra
from hopf_cohomology.exceptions import BuildError, ConfigError, ParamViolation, TruncationOverflow
from hopf_cohomology.field import FieldContext, Scalar, lcm, multiplicative_order, q_binomial, q_factorial
from hopf_cohomology.linalg import rank

GENERATOR_NAMES = ("x", "y", "u", "v")

FAMILY_NAMES = ("A", "C", "E", "F", "L", "N", "O", "P", "Q", "U", "Group")
ALIASES = {"taft": "E", "sweedler": "E", "symmetric": "U", "group": "Group"}


def _acc(target, key, value):
    updated = target.get(key)
    updated = value if updated is None else updated + value
    if updated:
        target[key] = updated
    else:
        target.pop(key, None)


# groups --------------------------------------------------------------------------------------------
@dataclass(frozen=True)
class GroupSpec:
    """A finite abelian group Z/n1 x ... x Z/nr, or a window [A1, A2] of exponents of Z."""

    kind: str
    invariant_factors: tuple = ()
    window: Optional[tuple] = None

    def __post_init__(self):
        if self.kind == "finite_abelian":
            if not self.invariant_factors or any(n < 1 for n in self.invariant_factors):
                raise ConfigError(f"invalid invariant factors {self.invariant_factors}")
            if len(self.invariant_factors) > len(GENERATOR_NAMES):
                raise ConfigError(f"at most {len(GENERATOR_NAMES)} cyclic factors are supported")
        elif self.kind == "integers_windowed":
            low, high = self.window
            if not low <= 0 <= high:
                raise ConfigError(f"window [{low}, {high}] must contain 0")
        else:
            raise ConfigError(f"unknown group kind {self.kind!r}")

    @classmethod
    def cyclic(cls, n):
        return cls("finite_abelian", (n,))

    @classmethod
    def windowed(cls, low, high=None):
        """Window [low, high] of Z, or [-low, low] when only a radius is given."""
        if high is None:
            low, high = -low, low
        return cls("integers_windowed", (), (low, high))

    @classmethod
    def parse(cls, text):
        """Read ``Z/2``, ``Z/3xZ/3``, ``Z[-2,2]`` or ``Z[4]`` (a radius)."""
        if isinstance(text, GroupSpec):
            return text
        source = str(text).replace(" ", "")
        match = re.fullmatch(r"Z\[(-?[0-9]+)(?:,(-?[0-9]+))?\]", source)
        if match:
            low, high = match.groups()
            return cls.windowed(int(low), int(high)) if high is not None else cls.windowed(int(low))
        factors = source.split("x")
        if not all(re.fullmatch(r"Z/[0-9]+", f) for f in factors):
            raise ConfigError(f"cannot parse group {text!r}")
        return cls("finite_abelian", tuple(int(f[2:]) for f in factors))

    @property
    def finite(self):
        return self.kind == "finite_abelian"

    @property
    def moduli(self):
        return self.invariant_factors if self.finite else (0,)

    @property
    def rank(self):
        return len(self.moduli)

    @property
    def identity(self):
        return (0,) * self.rank

    def normal(self, elem):
        return tuple(a % m if m else a for a, m in zip(elem, self.moduli))

    def mul(self, a, b):
        return self.normal(tuple(x + y for x, y in zip(a, b)))

    def power(self, a, k):
        return self.normal(tuple(k * x for x in a))

    def order(self, elem):
        elem = self.normal(elem)
        if not self.finite:
            return 1 if elem == self.identity else math.inf
        result = 1
        for a, n in zip(elem, self.moduli):
            result = lcm(result, n // math.gcd(a, n))
        return result

    def elements(self):
        if self.finite:
            return list(itertools.product(*(range(n) for n in self.moduli)))
        low, high = self.window
        return [(a,) for a in range(low, high + 1)]

    def in_window(self, elem, shift=0):
        """True when elem and elem + shift (a path of exponents) both lie in the window."""
        if self.finite:
            return True
        low, high = self.window
        return low <= elem[0] <= high and low <= elem[0] + shift <= high

    def label(self, elem):
        parts = []
        for name, a in zip(GENERATOR_NAMES, self.normal(elem)):
            if a == 1:
                parts.append(name)
            elif a:
                parts.append(f"{name}^{a}")
        return " ".join(parts) or "1"

    def parse_element(self, value):
        """Group element from a label (``"x^2 y"``, ``"x^-1"``, ``"1"``) or an exponent list."""
        if isinstance(value, (list, tuple)):
            if len(value) != self.rank:
                raise ConfigError(f"group element {value} has the wrong rank")
            return self.normal(tuple(int(a) for a in value))
        exps = [0] * self.rank
        text = str(value).strip()
        if text in ("", "1"):
            return self.identity
        for token in text.split():
            match = re.fullmatch(r"([a-z])(?:\^(-?[0-9]+))?", token)
            if match is None or match.group(1) not in GENERATOR_NAMES[: self.rank]:
                raise ConfigError(f"cannot parse group element {value!r}")
            exps[GENERATOR_NAMES.index(match.group(1))] += int(match.group(2) or 1)
        return self.normal(tuple(exps))

    def describe(self):
        if self.finite:
            return "x".join(f"Z/{n}" for n in self.moduli)
        return f"Z[{self.window[0]},{self.window[1]}]"


@dataclass(frozen=True)
class CharacterData:
    """A character chi of G together with a map tau (or eta) twisted by ``twist``.

    ``tau(gh) = tau(g) + twist(g) tau(h)``; ``flavor`` is ``multiplicative`` when no map is carried.
    """

    chi: tuple
    tau_or_eta: tuple = ()
    twist: tuple = ()
    flavor: str = "multiplicative"

    def value(self, elem):
        result = None
        for c, a in zip(self.chi, elem):
            term = c**a
            result = term if result is None else result * term
        return result

    def twist_value(self, elem):
        result = None
        for c, a in zip(self.twist, elem):
            term = c**a
            result = term if result is None else result * term
        return result

    def power(self, ell):
        return CharacterData(tuple(c**ell for c in self.chi))

    def trivial(self, group):
        return all(c == 1 for c in self.chi)

    def additive(self, elem):
        """Value of the twisted map on ``elem`` via the cocycle rule on the generator decomposition."""
        ctx = self.chi[0].ctx
        total = ctx.zero
        prefix = ctx.one
        for k, a in enumerate(elem):
            x_twist, x_val = self.twist[k], self.tau_or_eta[k]
            if a >= 0:
                part = sum((x_twist**i for i in range(a)), ctx.zero) * x_val
            else:
                part = -(x_twist**a) * sum((x_twist**i for i in range(-a)), ctx.zero) * x_val
            total = total + prefix * part
            prefix = prefix * x_twist**a
        return total

    def character_violations(self, group):
        found = []
        for k, n in enumerate(group.moduli):
            if n and self.chi[k] ** n != 1:
                found.append(f"chi({GENERATOR_NAMES[k]})^{n} != 1")
        return found

    def cocycle_violations(self, group):
        found = []
        if not self.tau_or_eta:
            return found
        ctx = self.chi[0].ctx
        for k, n in enumerate(group.moduli):
            if n and sum((self.twist[k] ** i for i in range(n)), ctx.zero) * self.tau_or_eta[k]:
                found.append(f"map does not vanish on {GENERATOR_NAMES[k]}^{n}")
        for i, j in itertools.combinations(range(group.rank), 2):
            lhs = (1 - self.twist[j]) * self.tau_or_eta[i]
            rhs = (1 - self.twist[i]) * self.tau_or_eta[j]
            if lhs != rhs:
                found.append(f"map is not symmetric on ({GENERATOR_NAMES[i]}, {GENERATOR_NAMES[j]})")
        return found


# symbolic algebras ---------------------------------------------------------------------------------
class GroupAlgebra:
    """kG on exponent-tuple keys."""

    def __init__(self, group, ctx):
        self.group = group
        self.ctx = ctx
        self.unit = group.identity

    def multiply(self, a, b):
        return {self.group.mul(a, b): self.ctx.one}

    def coproduct(self, g):
        return {(g, g): self.ctx.one}

    def counit(self, g):
        return self.ctx.one

    def degree(self, g):
        return 0

    def group_part(self, g):
        return g

    def is_group(self, g):
        return True

    def element(self, g):
        return {g: self.ctx.one}


def mul_elements(alg, left, right):
    out = {}
    for a, s in left.items():
        for b, t in right.items():
            for c, u in alg.multiply(a, b).items():
                _acc(out, c, s * t * u)
    return out


class OreExtension:
    """``H = K[var; sigma, delta]`` on PBW keys ``(k, p)``.

    ``var_coproduct`` is Δ(var) on H (x) H keys, ``power`` an optional relation ``var^ell = r`` with r in K.
    """

    def __init__(self, base, sigma, derivation, var_coproduct, weight=1, power=None, var="z"):
        self.base = base
        self.ctx = base.ctx
        self.sigma = sigma
        self.derivation = derivation
        self.var_coproduct = dict(var_coproduct)
        self.weight = weight
        self.power = power
        self.var = var
        self.unit = (base.unit, 0)
        self.generator = (base.unit, 1)
        self.__products = {}
        self.__powers = {0: {(self.unit, self.unit): self.ctx.one}}

    def multiply(self, a, b):
        cached = self.__products.get((a, b))
        if cached is not None:
            return cached
        (k1, p1), (k2, p2) = a, b
        moved = {(k2, 0): self.ctx.one}
        for _ in range(p1):
            moved = self._var_times(moved)
        out = {}
        for (m, j), c in moved.items():
            for m2, s in self.base.multiply(k1, m).items():
                _acc(out, (m2, j + p2), c * s)
        out = self._reduce_power(out)
        self.__products[(a, b)] = out
        return out

    def _var_times(self, vec):
        out = {}
        for (m, j), c in vec.items():
            for k, s in self.sigma(m).items():
                _acc(out, (k, j + 1), c * s)
            for k, s in self.derivation(m).items():
                _acc(out, (k, j), c * s)
        return out

    def _reduce_power(self, vec):
        if self.power is None:
            return vec
        ell, relation = self.power
        out = {}
        pending = vec
        while pending:
            carry = {}
            for (m, j), c in pending.items():
                if j < ell:
                    _acc(out, (m, j), c)
                    continue
                for r, s in relation.items():
                    for m2, t in self.base.multiply(m, r).items():
                        _acc(carry, (m2, j - ell), c * s * t)
            pending = carry
        return out

    def tensor_multiply(self, left, right):
        out = {}
        for (a1, a2), s in left.items():
            for (b1, b2), t in right.items():
                first = self.multiply(a1, b1)
                second = self.multiply(a2, b2)
                for x, u in first.items():
                    for y, v in second.items():
                        _acc(out, (x, y), s * t * u * v)
        return out

    def var_power_coproduct(self, p):
        if p not in self.__powers:
            self.__powers[p] = self.tensor_multiply(self.var_power_coproduct(p - 1), self.var_coproduct)
        return self.__powers[p]

    def coproduct(self, key):
        k, p = key
        lifted = {((a, 0), (b, 0)): s for (a, b), s in self.base.coproduct(k).items()}
        return self.tensor_multiply(lifted, self.var_power_coproduct(p))

    def counit(self, key):
        k, p = key
        return self.base.counit(k) if p == 0 else self.ctx.zero

    def degree(self, key):
        k, p = key
        return self.base.degree(k) + p * self.weight

    def group_part(self, key):
        return self.base.group_part(key[0])

    def is_group(self, key):
        return key[1] == 0 and self.base.is_group(key[0])

    def element(self, key):
        return {key: self.ctx.one}


# Hopf Ore extension data ---------------------------------------------------------------------------
@dataclass
class HOEData:
    """Everything needed to build ``K[var; sigma, delta]`` with Δ(var) = var⊗1 + e⊗var + z0."""

    name: str
    algebra: object
    base_keys: list
    sigma: Callable
    delta_map: Callable
    e: object
    q: Scalar
    z0: dict = field(default_factory=dict)
    relation_params: dict = field(default_factory=dict)
    z_degree_max: int = 3
    weight: int = 1
    power: Optional[tuple] = None
    var: str = "z"
    in_basis: Callable = None
    labeler: Callable = None
    group: GroupSpec = None
    coradically_graded: bool = None
    degree_bound: Optional[int] = None

    @property
    def ctx(self):
        return self.algebra.ctx

    def extension(self):
        cached = getattr(self, "_extension", None)
        if cached is not None:
            return cached
        one = self.ctx.one
        unit = self.algebra.unit
        coproduct = {((unit, 1), (unit, 0)): one}
        _acc(coproduct, ((self.e, 0), (unit, 1)), one)
        for (a, b), s in self.z0.items():
            _acc(coproduct, ((a, 0), (b, 0)), s)
        self._extension = OreExtension(
            self.algebra, self.sigma, self.delta_map, coproduct, self.weight, self.power, self.var
        )
        return self._extension

    def apply(self, linear_map, vec):
        out = {}
        for k, c in vec.items():
            for m, s in linear_map(k).items():
                _acc(out, m, c * s)
        return out

    @property
    def sigma_matrix(self):
        return {k: dict(self.sigma(k)) for k in self.base_keys}

    @property
    def delta_matrix(self):
        return {k: dict(self.delta_map(k)) for k in self.base_keys}

    def violations(self):
        """Failed invariants of the extension datum, as readable strings (empty when valid)."""
        found = []
        alg = self.algebra
        keys = list(self.base_keys)
        for a, b in itertools.product(keys, repeat=2):
            product = alg.multiply(a, b)
            lhs = self.apply(self.sigma, product)
            rhs = mul_elements(alg, self.sigma(a), self.sigma(b))
            if lhs != rhs:
                found.append(f"sigma is not multiplicative on ({a}, {b})")
                break
        for a, b in itertools.product(keys, repeat=2):
            lhs = self.apply(self.delta_map, alg.multiply(a, b))
            rhs = mul_elements(alg, self.delta_map(a), alg.element(b))
            for k, s in mul_elements(alg, self.sigma(a), self.delta_map(b)).items():
                _acc(rhs, k, s)
            if lhs != rhs:
                found.append(f"delta violates the twisted Leibniz rule on ({a}, {b})")
                break
        key_set = set(keys)
        images = [self.sigma(k) for k in keys]
        if all(set(img) <= key_set for img in images) and rank(images) != len(keys):
            found.append("sigma is not invertible")
        expected = {self.e: self.q}
        if dict(self.sigma(self.e)) != expected:
            found.append("sigma(e) != q e")
        if self.z0 and not _is_cocycle(alg, self.e, self.z0):
            found.append("z0 is not a 2-cocycle based on (e, 1)")
        return found


def _is_cocycle(alg, e, z0):
    unit = alg.unit
    total = {}
    for (a, b), s in z0.items():
        _acc(total, (e, a, b), s)
        for (a1, a2), t in alg.coproduct(a).items():
            _acc(total, (a1, a2, b), -s * t)
        for (b1, b2), t in alg.coproduct(b).items():
            _acc(total, (a, b1, b2), s * t)
        _acc(total, (a, b, unit), -s)
    return not total


def normalize_pbw(h, word):
    """Normal form of a product of K-basis keys and the adjoined variable (written ``h.var``)."""
    ext = h.extension()
    result = {ext.unit: h.ctx.one}
    for item in word:
        factor = ext.generator if item == h.var else (item, 0)
        out = {}
        for key, c in result.items():
            for k, s in ext.multiply(key, factor).items():
                _acc(out, k, c * s)
        result = out
        if h.power is None and any(p > h.z_degree_max for _, p in result):
            raise TruncationOverflow(f"{h.var}-degree above {h.z_degree_max} while normalising {word}")
    return SparseVector(result)


class _KeyAlgebra:
    def __init__(self, ext, keys, index):
        self.ext = ext
        self.keys = keys
        self.index = index

    def multiply(self, i, j):
        out = {}
        for key, s in self.ext.multiply(self.keys[i], self.keys[j]).items():
            k = self.index.get(key)
            if k is None:
                return None
            out[k] = s
        return out


def build_ore_hopf(h):
    """Coalgebra of ``K[var; sigma, delta]`` on the PBW basis {k var^p} within the truncation."""
    problems = h.violations()
    if problems:
        raise ParamViolation("Hopf Ore extension datum", "; ".join(problems))
    ext = h.extension()
    top = h.power[0] - 1 if h.power is not None else h.z_degree_max
    keys = [(k, p) for p in range(top + 1) for k in h.base_keys if h.in_basis is None or h.in_basis(k, p)]
    index = {key: i for i, key in enumerate(keys)}
    delta, boundary = [], []
    dropped = 0
    for i, key in enumerate(keys):
        triples = []
        for (a, b), s in ext.coproduct(key).items():
            ia, ib = index.get(a), index.get(b)
            if ia is None or ib is None:
                dropped += 1
                if i not in boundary:
                    boundary.append(i)
                continue
            triples.append((ia, ib, s))
        delta.append(sorted(triples, key=lambda t: (t[0], t[1])))
    degrees = [ext.degree(key) for key in keys]
    graded = all(degrees[a] + degrees[b] == degrees[i] for i, triples in enumerate(delta) for a, b, _ in triples)
    grading = [(d,) for d in degrees] if graded else None
    if dropped:
        warnings.warn(f"{dropped} coproduct terms crossing the truncation of {h.name} were dropped")
    identity = h.group.identity
    grouplikes = {i: ext.group_part(key) for i, key in enumerate(keys) if ext.is_group(key)}
    coinvariants = [i for i, key in enumerate(keys) if ext.group_part(key) == identity]
    truncation = {}
    if h.power is None or not h.group.finite:
        bound = h.degree_bound if h.degree_bound is not None else top * h.weight
        truncation["degree_bound"] = bound if graded else 0
        truncation[f"{h.var}_degree_max"] = top
        if not h.group.finite:
            truncation["window"] = list(h.group.window)
    return CoalgebraSpec(
        h.ctx,
        [h.labeler(key) for key in keys],
        delta,
        [ext.counit(key) for key in keys],
        grouplikes,
        grading,
        name=h.name,
        grading_names=["deg"],
        z_axis=0,
        group=h.group.moduli,
        truncation=truncation,
        dropped=dropped,
        boundary=boundary,
        coinvariants=coinvariants,
        coradically_graded=h.coradically_graded if graded else False,
        algebra=_KeyAlgebra(ext, keys, index),
        keys=keys,
    )


def _monomial_label(group, g, powers):
    parts = [] if g == group.identity else [group.label(g)]
    for var, p in powers:
        if p == 1:
            parts.append(var)
        elif p > 1:
            parts.append(f"{var}^{p}")
    return " ".join(parts) or "1"


# simple families -----------------------------------------------------------------------------------
def build_group_algebra(group, ctx=None):
    group = GroupSpec.parse(group)
    ctx = ctx or FieldContext.rational()
    elements = group.elements()
    index = {g: i for i, g in enumerate(elements)}
    table = {}
    for a, b in itertools.product(elements, repeat=2):
        c = index.get(group.mul(a, b))
        if c is not None:
            table[(index[a], index[b])] = {c: ctx.one}
    return CoalgebraSpec(
        ctx,
        [group.label(g) for g in elements],
        [[(i, i, ctx.one)] for i in range(len(elements))],
        [ctx.one] * len(elements),
        {i: g for i, g in enumerate(elements)},
        None,
        name=f"k[{group.describe()}]",
        grading_names=["deg"],
        z_axis=0,
        group=group.moduli,
        truncation=None if group.finite else {"window": list(group.window)},
        coinvariants=[index[group.identity]],
        coradically_graded=True,
        algebra=TableAlgebra(table),
        keys=elements,
    )


def build_symmetric_coalgebra(d, N, ctx=None):
    """Monomials of total degree <= N in t1..td with the binomial coproduct."""
    ctx = ctx or FieldContext.rational()
    monomials = []
    for total in range(N + 1):
        layer = (m for m in itertools.product(range(total + 1), repeat=d) if sum(m) == total)
        monomials.extend(sorted(layer, reverse=True))
    index = {m: i for i, m in enumerate(monomials)}

    def label(m):
        parts = [f"t{k + 1}" if a == 1 else f"t{k + 1}^{a}" for k, a in enumerate(m) if a]
        return " ".join(parts) or "1"

    delta = []
    for m in monomials:
        triples = []
        for b in itertools.product(*(range(a + 1) for a in m)):
            coef = math.prod(math.comb(a, c) for a, c in zip(m, b))
            rest = tuple(a - c for a, c in zip(m, b))
            triples.append((index[b], index[rest], ctx(coef)))
        delta.append(sorted(triples, key=lambda t: (t[0], t[1])))
    table = {}
    for a, b in itertools.product(monomials, repeat=2):
        c = index.get(tuple(x + y for x, y in zip(a, b)))
        if c is not None:
            table[(index[a], index[b])] = {c: ctx.one}
    unit = index[(0,) * d]
    return CoalgebraSpec(
        ctx,
        [label(m) for m in monomials],
        delta,
        [ctx.one if i == unit else ctx.zero for i in range(len(monomials))],
        {unit: ()},
        monomials if d else [(0,)],
        name=f"S(k^{d})<={N}",
        grading_names=[f"t{k + 1}" for k in range(d)] or ["deg"],
        group=(),
        truncation={"degree_bound": N},
        coinvariants=list(range(len(monomials))),
        coradically_graded=True,
        algebra=TableAlgebra(table),
        keys=monomials,
    )


def build_braided_line(q, size):
    """Span of 1, z, ..., z^(size-1) with Δ(z^n) = sum binom(n, i)_q z^i ⊗ z^(n-i)."""
    ctx = q.ctx
    delta = [[(i, n - i, q_binomial(n, i, q)) for i in range(n + 1)] for n in range(size)]
    delta = [[t for t in triples if t[2]] for triples in delta]
    table = {(i, j): {i + j: ctx.one} for i in range(size) for j in range(size) if i + j < size}
    closed = multiplicative_order(q) == size
    return CoalgebraSpec(
        ctx,
        ["1"] + ["z" if n == 1 else f"z^{n}" for n in range(1, size)],
        delta,
        [ctx.one] + [ctx.zero] * (size - 1),
        {0: (0,)},
        [(n,) for n in range(size)],
        name=f"R(q={q}, {size})",
        grading_names=["z"],
        z_axis=0,
        group=(1,),
        truncation=None if closed else {"degree_bound": size - 1},
        coinvariants=list(range(size)),
        coradically_graded=True,
        algebra=TableAlgebra(table),
    )


# parameters ----------------------------------------------------------------------------------------
@dataclass
class FamilyParams:
    group: GroupSpec
    ctx: FieldContext
    e: tuple
    chi: CharacterData
    ell: Optional[int] = None
    lam: Scalar = None
    xi: Scalar = None
    z_max: int = 3
    w_max: int = 2

    @property
    def q(self):
        return self.chi.value(self.e)


def _scalar_texts(params):
    texts = []
    for key in ("chi", "tau", "eta", "lam", "xi"):
        value = params.get(key)
        if value is None:
            continue
        texts.extend(str(v) for v in (value if isinstance(value, (list, tuple)) else [value]))
    return texts


def _listify(value, rank):
    if value is None:
        return None
    if not isinstance(value, (list, tuple)):
        value = [value]
    if len(value) != rank:
        raise ConfigError(f"expected {rank} generator values, got {value}")
    return value


def resolve_params(params):
    group = GroupSpec.parse(params.get("group", "Z/2"))
    ctx = params.get("field")
    if isinstance(ctx, dict):
        ctx = FieldContext.from_description(ctx)
    ctx = ctx or FieldContext.for_texts(*_scalar_texts(params))
    chi = tuple(ctx(str(v)) for v in _listify(params.get("chi", [1] * group.rank), group.rank))
    e = group.parse_element(params.get("e", "x"))
    lam = ctx(str(params.get("lam", 0)))
    xi = ctx(str(params.get("xi", 0)))
    return FamilyParams(
        group=group,
        ctx=ctx,
        e=e,
        chi=CharacterData(chi),
        ell=params.get("ell"),
        lam=lam,
        xi=xi,
        z_max=int(params.get("z_max", 3)),
        w_max=int(params.get("w_max", 2)),
    )


def _twisted(fp, params, key, twist):
    values = _listify(params.get(key), fp.group.rank)
    if values is None:
        values = [0] * fp.group.rank
    return CharacterData(
        fp.chi.chi, tuple(fp.ctx(str(v)) for v in values), tuple(twist), flavor="twisted_additive"
    )


def _require(condition, tag, message=""):
    if not condition:
        raise ParamViolation(tag, message)


def _check_character(fp):
    problems = fp.chi.character_violations(fp.group)
    _require(not problems, "chi is a character of G", "; ".join(problems))


def _order_of_q(fp):
    order = multiplicative_order(fp.q)
    ell = fp.ell if fp.ell is not None else order
    _require(order != math.inf and order == ell and ell >= 2, "order(chi(e)) == ell >= 2", f"q={fp.q}, ell={ell}")
    return ell


# Ore data per family -------------------------------------------------------------------------------
def _group_sigma(fp, character):
    def sigma(g):
        return {g: character.value(g)}

    return sigma


def _no_derivation(_key):
    return {}


def _first_level(fp, name, derivation=None, power=None, graded=True, z_max=None):
    alg = GroupAlgebra(fp.group, fp.ctx)
    group = fp.group
    shift = 0 if group.finite else fp.e[0]

    def in_basis(g, p):
        return group.in_window(g, shift * p)

    top = (power[0] - 1) if power is not None else (z_max if z_max is not None else fp.z_max)
    return HOEData(
        name=name,
        algebra=alg,
        base_keys=group.elements(),
        sigma=_group_sigma(fp, fp.chi),
        delta_map=derivation or _no_derivation,
        e=fp.e,
        q=fp.q,
        relation_params={"lam": fp.lam} if power is not None else {},
        z_degree_max=top,
        power=power,
        var="z",
        in_basis=in_basis,
        labeler=lambda key: _monomial_label(group, key[0], [("z", key[1])]),
        group=group,
        coradically_graded=graded,
    )


def a_family_data(fp, z_max=None):
    order = multiplicative_order(fp.q)
    graded = order == 1 or order == math.inf
    _check_character(fp)
    name = f"A_{fp.group.describe()}(e={fp.group.label(fp.e)}, chi={_chi_text(fp)})"
    return _first_level(fp, name, graded=graded, z_max=z_max)


def c_family_data(fp, params):
    _check_character(fp)
    _require(fp.q == 1, "chi(e) == 1", f"chi(e) = {fp.q}")
    tau = _twisted(fp, params, "tau", fp.chi.chi)
    problems = tau.cocycle_violations(fp.group)
    _require(not problems, "tau(gh) == tau(g) + chi(g) tau(h)", "; ".join(problems))

    def derivation(g):
        t = tau.additive(g)
        if not t:
            return {}
        out = {}
        _acc(out, fp.group.mul(g, fp.e), t)
        _acc(out, g, -t)
        return out

    name = f"C_{fp.group.describe()}(e={fp.group.label(fp.e)}, chi={_chi_text(fp)}, tau={_values_text(tau.tau_or_eta)})"
    return _first_level(fp, name, derivation=derivation, graded=fp.group.finite)


def _power_relation(fp, ell):
    """z^ell = lam (e^ell - 1) as a K-element."""
    rel = {}
    if fp.lam:
        _acc(rel, fp.group.power(fp.e, ell), fp.lam)
        _acc(rel, fp.group.identity, -fp.lam)
    return rel


def normality_criterion(fp, ell):
    e_ell = fp.group.power(fp.e, ell)
    return not fp.lam or e_ell == fp.group.identity or fp.chi.power(ell).trivial(fp.group)


def check_normality(h, lam):
    """Whether w = z^ell - lam (e^ell - 1) is normal in A_G(e, chi), by direct computation.

    ``h`` is the A-level datum (no power relation) with ``relation_params["ell"]`` set.
    """
    ell = h.relation_params["ell"]
    ext = OreExtension(h.algebra, h.sigma, h.delta_map, {((h.algebra.unit, 0), (h.algebra.unit, 0)): h.ctx.one})
    unit = h.algebra.unit
    w = {(unit, ell): h.ctx.one}
    if lam:
        _acc(w, (h.group.power(h.e, ell), 0), -lam)
        _acc(w, (unit, 0), lam)
    chi_ell = h.sigma
    generators = [tuple(1 if k == i else 0 for k in range(h.group.rank)) for i in range(h.group.rank)]
    for g in generators:
        scale = chi_ell(g)[g] ** ell
        lhs = mul_elements(ext, w, {(g, 0): h.ctx.one})
        rhs = mul_elements(ext, {(g, 0): scale}, w)
        for key, s in rhs.items():
            _acc(lhs, key, -s)
        if lhs:
            return False
    lhs = mul_elements(ext, w, {(unit, 1): h.ctx.one})
    for key, s in mul_elements(ext, {(unit, 1): h.ctx.one}, w).items():
        _acc(lhs, key, -s)
    return not lhs


def e_family_data(fp):
    _check_character(fp)
    ell = _order_of_q(fp)
    fp.ell = ell
    _require(normality_criterion(fp, ell), "w_lambda is normal", "lambda (e^ell - 1) != 0 and chi^ell nontrivial")
    power = (ell, _power_relation(fp, ell))
    name = f"E_{fp.group.describe()}(e={fp.group.label(fp.e)}, chi={_chi_text(fp)}, ell={ell}, lambda={fp.lam})"
    data = _first_level(fp, name, power=power, graded=not fp.lam)
    return data


def bracket_coefficients(ell, q):
    """Coefficients [ell-1]_q! / ([i]_q! [ell-i]_q!) of e^(ell-i) z^i ⊗ z^(ell-i), i = 1..ell-1."""
    top = q_factorial(ell - 1, q)
    return [(i, top / (q_factorial(i, q) * q_factorial(ell - i, q))) for i in range(1, ell)]


def _second_level(fp, name, params, eta=None, delta_z=None, graded=False):
    """Adjoin w to the E-coalgebra K with theta(g) = chi^ell(g) g, theta(z) = z."""
    ell = fp.ell
    k_data = _first_level(fp, name, power=(ell, _power_relation(fp, ell)), graded=not fp.lam)
    k_ext = k_data.extension()
    group = fp.group
    ctx = fp.ctx
    e_ell = group.power(fp.e, ell)
    chi_ell = fp.chi.power(ell)
    unit = k_ext.unit
    z = k_ext.generator

    def theta(key):
        g, _ = key
        return {key: chi_ell.value(g)}

    @lru_cache(maxsize=None)
    def delta_var_power(i):
        if i == 0 or delta_z is None:
            return ()
        first = mul_elements(k_ext, delta_z, {(group.identity, i - 1): ctx.one})
        rest = mul_elements(k_ext, {z: ctx.one}, dict(delta_var_power(i - 1)))
        for key, s in rest.items():
            _acc(first, key, s)
        return tuple(first.items())

    @lru_cache(maxsize=None)
    def derivation_cached(key):
        g, i = key
        out = {}
        if eta is not None:
            value = eta.additive(g)
            if value:
                dg = {}
                _acc(dg, (group.mul(g, e_ell), 0), value)
                _acc(dg, (g, 0), -value)
                out = mul_elements(k_ext, dg, {(group.identity, i): ctx.one})
        tail = dict(delta_var_power(i))
        if tail:
            for k, s in mul_elements(k_ext, {(g, 0): chi_ell.value(g)}, tail).items():
                _acc(out, k, s)
        return tuple(out.items())

    def derivation(key):
        return dict(derivation_cached(key))

    z0 = {}
    for i, coef in bracket_coefficients(ell, fp.q):
        _acc(z0, ((group.power(fp.e, ell - i), i), (group.identity, ell - i)), coef)
    base_keys = [(g, i) for i in range(ell) for g in group.elements() if k_data.in_basis(g, i)]
    shift = 0 if group.finite else fp.e[0]
    w_max = fp.w_max

    def in_basis(key, j):
        g, i = key
        return group.in_window(g, shift * (i + ell * j))

    return HOEData(
        name=name,
        algebra=k_ext,
        base_keys=base_keys,
        sigma=theta,
        delta_map=derivation,
        e=(e_ell, 0),
        q=chi_ell.value(e_ell),
        z0=z0,
        relation_params=dict(params),
        z_degree_max=w_max,
        weight=ell,
        var="w",
        in_basis=in_basis,
        labeler=lambda key: _monomial_label(group, key[0][0], [("z", key[0][1]), ("w", key[1])]),
        group=group,
        coradically_graded=graded,
        degree_bound=ell * (w_max + 1) - 1,
    )


def _e_setup(fp, lam_required=None):
    _check_character(fp)
    ell = _order_of_q(fp)
    fp.ell = ell
    if lam_required is not None:
        _require(fp.lam == lam_required, f"lambda == {lam_required}", f"lambda = {fp.lam}")
    _require(normality_criterion(fp, ell), "w_lambda is normal")
    return ell


def _chi_ell_trivial(fp, ell):
    _require(fp.chi.power(ell).trivial(fp.group), "chi^ell trivial")


def _alias_params(name, params):
    params = dict(params)
    if str(name).lower() in ("taft", "sweedler"):
        params.setdefault("group", "Z/2" if str(name).lower() == "sweedler" else f"Z/{params.get('ell', 2)}")
        n = GroupSpec.parse(params["group"]).moduli[0]
        params.setdefault("e", "x")
        params.setdefault("chi", "-1" if n == 2 else f"zeta{n}")
        params.setdefault("lam", 0)
    return params


def family_data(name, params):
    """The extension datum behind a family instance (for A, C, E the z-level, else the w-level)."""
    fam = ALIASES.get(str(name).lower(), name)
    params = _alias_params(name, params)
    fp = resolve_params(params)
    if fam == "A":
        data = a_family_data(fp)
        if fp.ell is not None:
            data.relation_params["ell"] = fp.ell
        return data
    if fam == "C":
        return c_family_data(fp, params)
    if fam == "E":
        return e_family_data(fp)
    group = fp.group
    if fam == "F":
        _e_setup(fp, lam_required=0)
        return _second_level(fp, _w_name("F", fp), params, graded=True)
    if fam == "L":
        ell = _e_setup(fp, lam_required=0)
        eta = _twisted(fp, params, "eta", fp.chi.power(ell).chi)
        _require(any(eta.tau_or_eta), "eta != 0")
        _require(not eta.cocycle_violations(group), "eta(gh) == eta(g) + chi^ell(g) eta(h)")
        _require(not eta.additive(fp.e), "eta(e) == 0")
        return _second_level(fp, _w_name("L", fp), params, eta=eta)
    if fam == "N":
        ell = _e_setup(fp, lam_required=0)
        _require(group.power(fp.e, ell) == group.identity, "e^ell == 1")
        _chi_ell_trivial(fp, ell)
        delta_z = {(group.identity, 1): fp.xi} if fp.xi else {}
        return _second_level(fp, _w_name("N", fp), params, delta_z=delta_z or None)
    one = fp.ctx.one
    if fam in ("O", "P", "Q"):
        lam_required = 0 if fam == "P" else 1
        ell = _e_setup(fp, lam_required=lam_required)
        e_ell = group.power(fp.e, ell)
        _require(e_ell != group.identity, "e^ell != 1")
        _chi_ell_trivial(fp, ell)
        eta = _twisted(fp, params, "eta", [one] * group.rank)
        _require(not eta.cocycle_violations(group), "eta additive")
        eta_e = eta.additive(fp.e)
        q = fp.q
        if fam == "O":
            _require(eta_e == q - 1, "eta(e) == q - 1", f"eta(e) = {eta_e}")
            delta_z = {(e_ell, 1): q - 1}
        elif fam == "P":
            delta_z = {(group.identity, 1): -eta_e} if eta_e else {}
        else:
            _require(group.power(fp.e, 2 * ell) == group.identity, "e^(2 ell) == 1")
            _require(not eta_e, "eta(e) == 0")
            delta_z = {}
            _acc(delta_z, (group.identity, 1), q - 1)
            _acc(delta_z, (e_ell, 1), q - 1)
        return _second_level(fp, _w_name(fam, fp), params, eta=eta, delta_z=delta_z or None)
    raise ConfigError(f"family {name!r} has no Ore extension datum")


def _w_name(fam, fp):
    return f"{fam}_{fp.group.describe()}(e={fp.group.label(fp.e)}, chi={_chi_text(fp)}, ell={fp.ell}, w<={fp.w_max})"


def _chi_text(fp):
    return _values_text(fp.chi.chi)


def _values_text(values):
    return ",".join(str(v) for v in values)


def build_family(name, params=None):
    """Build a family instance; ``name`` is one of :data:`FAMILY_NAMES` or an alias."""
    params = dict(params or {})
    fam = ALIASES.get(str(name).lower(), name)
    if fam not in FAMILY_NAMES:
        raise ConfigError(f"unknown family {name!r}")
    if fam == "Group":
        group = GroupSpec.parse(params.get("group", "Z/2"))
        ctx = _field_param(params)
        return build_group_algebra(group, ctx)
    if fam == "U":
        ctx = _field_param(params)
        return build_symmetric_coalgebra(int(params.get("d", 2)), int(params.get("N", 2)), ctx)
    try:
        return build_ore_hopf(family_data(name, params))
    except BuildError:
        raise
    except (ValueError, ArithmeticError) as exc:
        raise BuildError(f"cannot build {name}: {exc}") from exc


def _field_param(params):
    ctx = params.get("field")
    if isinstance(ctx, dict):
        return FieldContext.from_description(ctx)
    return ctx or FieldContext.rational()


def bracket_element(spec, ell, q, e):
    """[z]^ell as a 2-tensor of ``spec`` (keys ``(g, i)`` or ``((g, i), 0)``)."""
    vec = SparseVector()
    group_mod = spec.group

    def power(k):
        return tuple((a * k) % m if m else a * k for a, m in zip(e, group_mod))

    identity = tuple(0 for _ in e)
    for i, coef in bracket_coefficients(ell, q):
        left = _find(spec, (power(ell - i), i))
        right = _find(spec, (identity, ell - i))
        if left is None or right is None:
            raise BuildError(f"[z]^{ell} leaves the basis of {spec.name}")
        vec[(left, right)] = coef
    return vec


def bracket_datum(name, params):
    """``(ell, q, e)`` for an A, E or F instance whose q = chi(e) has finite order ell >= 2, else ``None``."""
    if ALIASES.get(str(name).lower(), name) not in ("A", "E", "F"):
        return None
    fp = resolve_params(_alias_params(name, params))
    ell = multiplicative_order(fp.q)
    if ell == math.inf or ell < 2:
        return None
    return ell, fp.q, fp.e


def _find(spec, key):
    i = spec.index_of_key(key)
    return i if i is not None else spec.index_of_key((key, 0))


def z_index(spec, group_elem, i):
    """Index of the basis element g z^i of a family spec (``None`` when absent)."""
    return _find(spec, (tuple(group_elem), i))


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    family: str
    params: dict

    def build(self):
        return build_family(self.family, self.params)


def catalog():
    """Named smoke instances of every family."""
    return [
        CatalogEntry("group-Z2", "Group", {"group": "Z/2"}),
        CatalogEntry("group-Z3xZ3", "Group", {"group": "Z/3xZ/3"}),
        CatalogEntry("group-Zwin2", "Group", {"group": "Z[-2,2]"}),
        CatalogEntry("symmetric-2", "U", {"d": 2, "N": 2}),
        CatalogEntry("sweedler", "E", {"group": "Z/2", "e": "x", "chi": ["-1"]}),
        CatalogEntry("taft-3", "E", {"group": "Z/3", "e": "x", "chi": ["zeta3"]}),
        CatalogEntry("E-Z4-lambda", "E", {"group": "Z/4", "e": "x", "chi": ["-1"], "lam": 1}),
        CatalogEntry("A-Z9", "A", {"group": "Z/9", "e": "x", "chi": ["zeta3"], "z_max": 3}),
        CatalogEntry("A-Zwin", "A", {"group": "Z[-2,2]", "e": "x", "chi": ["2"], "z_max": 2}),
        CatalogEntry("C-Z4", "C", {"group": "Z/4", "e": "x^2", "chi": ["-1"], "tau": ["1"], "z_max": 3}),
        CatalogEntry("F-Z2", "F", {"group": "Z/2", "e": "x", "chi": ["-1"], "w_max": 2}),
        CatalogEntry("L-Z8", "L", {"group": "Z/8", "e": "x^2", "chi": ["zeta4"], "eta": ["1"], "w_max": 1}),
        CatalogEntry("N-Z2", "N", {"group": "Z/2", "e": "x", "chi": ["-1"], "xi": "1", "w_max": 1}),
        CatalogEntry("O-Zwin", "O", {"group": "Z[-3,3]", "e": "x", "chi": ["-1"], "eta": ["-2"], "lam": 1, "w_max": 1}),
        CatalogEntry("P-Zwin", "P", {"group": "Z[-3,3]", "e": "x", "chi": ["-1"], "eta": ["1"], "w_max": 1}),
        CatalogEntry("Q-Z4", "Q", {"group": "Z/4", "e": "x", "chi": ["-1"], "lam": 1, "w_max": 1}),
    ]
