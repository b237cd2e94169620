"""Finite abelian groups at desk scale.

Groups are kept in invariant-factor form ``Z/d1 x ... x Z/dk`` with
``d1 | d2 | ... | dk``; elements are coordinate tuples in that presentation
and subgroups are stored as explicit sorted element sets.

>>> G = canonicalize([4, 6])
>>> str(G)
'Z/2 x Z/12'
>>> len(subgroups(canonicalize([2, 2])))
5
"""

from __future__ import annotations

import itertools
import math
import os
import re
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterable, Sequence

from sympy import factorint, isprime

from .errors import (
    AmbientMismatchError,
    CapacityError,
    InvalidElementError,
    InvalidInputError,
    NotContainedError,
    NotPrimeError,
)

DEFAULT_MAX_ORDER = 2048

Element = tuple


def max_order() -> int:
    """Enumeration bound; ``TTG_MAX_ORDER`` overrides the default."""
    raw = os.environ.get("TTG_MAX_ORDER")
    if raw is None:
        return DEFAULT_MAX_ORDER
    try:
        value = int(raw)
    except ValueError:
        raise InvalidInputError(f"TTG_MAX_ORDER must be an integer, got {raw!r}")
    if value < 1:
        raise InvalidInputError(f"TTG_MAX_ORDER must be positive, got {value}")
    return value


def check_prime(p: int) -> int:
    if not isinstance(p, int) or isinstance(p, bool) or not isprime(p):
        raise NotPrimeError(f"{p!r} is not a prime")
    return p


def _valuation(n: int, p: int) -> int:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def _exact_log(n: int, p: int) -> int:
    v = _valuation(n, p)
    if p**v != n:
        raise ValueError(f"{n} is not a power of {p}")
    return v


@dataclass(frozen=True)
class FiniteAbelianGroup:
    """A finite abelian group in invariant-factor form.

    Build instances with :func:`canonicalize`; the constructor only accepts
    factor tuples that already form a divisibility chain.
    """

    invariant_factors: tuple[int, ...]

    def __post_init__(self):
        factors = tuple(self.invariant_factors)
        object.__setattr__(self, "invariant_factors", factors)
        for d in factors:
            if not isinstance(d, int) or d < 2:
                raise InvalidInputError(f"invariant factors must be integers >= 2, got {d!r}")
        for a, b in zip(factors, factors[1:]):
            if b % a:
                raise InvalidInputError(f"{a} does not divide {b}; use canonicalize()")

    @property
    def order(self) -> int:
        return math.prod(self.invariant_factors)

    @property
    def rank(self) -> int:
        return len(self.invariant_factors)

    @property
    def exponent(self) -> int:
        return self.invariant_factors[-1] if self.invariant_factors else 1

    @property
    def zero(self) -> Element:
        return (0,) * self.rank

    def elements(self) -> list[Element]:
        return list(itertools.product(*(range(d) for d in self.invariant_factors)))

    def primes(self) -> list[int]:
        return sorted(factorint(self.order)) if self.order > 1 else []

    def check_element(self, x) -> Element:
        x = tuple(x)
        if len(x) != self.rank:
            raise InvalidElementError(f"element {x} has {len(x)} coordinates, {self} needs {self.rank}")
        for a, d in zip(x, self.invariant_factors):
            if not isinstance(a, int) or not 0 <= a < d:
                raise InvalidElementError(f"coordinate {a!r} of {x} out of range for {self}")
        return x

    def add(self, x: Element, y: Element) -> Element:
        return tuple((a + b) % d for a, b, d in zip(x, y, self.invariant_factors))

    def neg(self, x: Element) -> Element:
        return tuple(-a % d for a, d in zip(x, self.invariant_factors))

    def scale(self, k: int, x: Element) -> Element:
        return tuple(k * a % d for a, d in zip(x, self.invariant_factors))

    def element_order(self, x: Element) -> int:
        return math.lcm(1, *(d // math.gcd(a, d) for a, d in zip(x, self.invariant_factors)))

    def render(self) -> str:
        if not self.invariant_factors:
            return "1"
        return " x ".join(f"Z/{d}" for d in self.invariant_factors)

    __str__ = render

    def full(self) -> "Subgroup":
        return Subgroup(self, self.elements(), check=False)

    def trivial(self) -> "Subgroup":
        return Subgroup(self, [self.zero], check=False)


def canonicalize(factors: Iterable[int]) -> FiniteAbelianGroup:
    """Invariant-factor form of the product of cyclic groups ``Z/f``.

    >>> canonicalize([2, 3]).invariant_factors
    (6,)
    >>> canonicalize([4, 6]).invariant_factors
    (2, 12)
    """
    factors = list(factors)
    prime_powers: dict[int, list[int]] = {}
    for f in factors:
        if not isinstance(f, int) or isinstance(f, bool) or f < 1:
            raise InvalidInputError(f"cyclic factor orders must be integers >= 1, got {f!r}")
        for p, e in factorint(f).items():
            prime_powers.setdefault(p, []).append(e)
    k = max((len(v) for v in prime_powers.values()), default=0)
    slots = [1] * k
    for p, exps in prime_powers.items():
        for i, e in enumerate(sorted(exps, reverse=True)):
            slots[k - 1 - i] *= p**e
    return FiniteAbelianGroup(tuple(slots))


def p_rank(G: FiniteAbelianGroup, p: int) -> int:
    """Number of invariant factors divisible by ``p``, i.e. dim of G/pG."""
    check_prime(p)
    return sum(1 for d in G.invariant_factors if d % p == 0)


def is_p_group(G: FiniteAbelianGroup, p: int) -> bool:
    check_prime(p)
    n = G.order
    while n % p == 0:
        n //= p
    return n == 1


def _assemble(order: int, torsion_count) -> FiniteAbelianGroup:
    # torsion_count(q) = number of elements killed by the prime power q
    pieces = []
    for p, a in factorint(order).items():
        levels = [0]
        j = 0
        while levels[-1] < a:
            j += 1
            levels.append(_exact_log(torsion_count(p**j), p))
        at_least = [levels[i] - levels[i - 1] for i in range(1, len(levels))]
        at_least.append(0)
        for e in range(1, len(at_least)):
            pieces.extend([p**e] * (at_least[e - 1] - at_least[e]))
    return canonicalize(pieces)


class Subgroup:
    """A subgroup of ``ambient`` given by its full element set.

    Elements are kept sorted, so equal subgroups compare and hash equal.
    """

    __slots__ = ("ambient", "elements", "_set", "_hash", "__dict__")

    def __init__(self, ambient: FiniteAbelianGroup, elements: Iterable[Element], *, check: bool = True):
        self.ambient = ambient
        if check:
            elements = [ambient.check_element(x) for x in elements]
        self.elements = tuple(sorted(set(elements)))
        self._set = frozenset(self.elements)
        self._hash = hash((ambient, self.elements))
        if check:
            self._validate()

    def _validate(self):
        G = self.ambient
        if G.zero not in self._set:
            raise InvalidInputError("subgroup must contain the identity")
        for x in self.elements:
            if G.neg(x) not in self._set:
                raise InvalidInputError(f"element set not closed under negation at {x}")
            for y in self.elements:
                if G.add(x, y) not in self._set:
                    raise InvalidInputError(f"element set not closed under addition at {x} + {y}")

    def __eq__(self, other):
        if not isinstance(other, Subgroup):
            return NotImplemented
        return self._hash == other._hash and self.ambient == other.ambient and self.elements == other.elements

    def __hash__(self):
        return self._hash

    def __len__(self):
        return len(self.elements)

    def __contains__(self, x):
        return tuple(x) in self._set

    def __iter__(self):
        return iter(self.elements)

    def __repr__(self):
        return f"Subgroup({self.ambient.render()!r}, gens={self.generators})"

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def element_set(self) -> frozenset:
        return self._set

    @cached_property
    def iso_type(self) -> FiniteAbelianGroup:
        G = self.ambient
        return _assemble(self.order, lambda q: sum(1 for x in self.elements if G.scale(q, x) == G.zero))

    @cached_property
    def generators(self) -> tuple[Element, ...]:
        """A deterministic generating set, picked greedily by descending order."""
        G = self.ambient
        ordered = sorted(self.elements, key=lambda x: (-G.element_order(x), x))
        span = {G.zero}
        gens = []
        for x in ordered:
            if len(span) == self.order:
                break
            if x not in span:
                gens.append(x)
                span = set(_close(G, span | {x}))
        return tuple(gens)

    def render(self) -> str:
        return self.iso_type.render()

    def is_trivial(self) -> bool:
        return self.order == 1

    def is_full(self) -> bool:
        return self.order == self.ambient.order


def _close(G: FiniteAbelianGroup, seed: Iterable[Element]) -> set:
    """Closure of ``seed`` under addition (finite, so also under negation)."""
    span = {G.zero}
    frontier = list(set(seed) - span)
    gens = list(frontier)
    span.update(frontier)
    while frontier:
        new = []
        for x in frontier:
            for g in gens:
                y = G.add(x, g)
                if y not in span:
                    span.add(y)
                    new.append(y)
        frontier = new
    return span


def subgroup_from_generators(G: FiniteAbelianGroup, gens: Sequence) -> Subgroup:
    """Smallest subgroup of ``G`` containing ``gens``."""
    gens = [G.check_element(g) for g in gens]
    return Subgroup(G, _close(G, gens), check=False)


def _check_same_ambient(H: Subgroup, K: Subgroup):
    if H.ambient != K.ambient:
        raise AmbientMismatchError(f"subgroups live in different groups: {H.ambient} vs {K.ambient}")


def contains(H: Subgroup, K: Subgroup) -> bool:
    """True iff ``K`` is a subgroup of ``H``."""
    _check_same_ambient(H, K)
    return K.element_set <= H.element_set


@lru_cache(maxsize=1 << 16)
def quotient_type(H: Subgroup, K: Subgroup) -> FiniteAbelianGroup:
    """Isomorphism type of ``H/K``, from counting cosets killed by each prime power."""
    if not contains(H, K):
        raise NotContainedError(f"{K!r} is not contained in {H!r}")
    G = H.ambient
    k_set = K.element_set

    def killed(q):
        return sum(1 for x in H.elements if G.scale(q, x) in k_set) // K.order

    return _assemble(H.order // K.order, killed)


def primary_component(G: FiniteAbelianGroup, p: int) -> Subgroup:
    """The p-primary part of ``G`` as a subgroup."""
    check_prime(p)
    m = G.order // p ** _valuation(G.order, p)
    return Subgroup(G, {G.scale(m, x) for x in G.elements()}, check=False)


def _sumset(G, S, T) -> frozenset:
    return frozenset(G.add(s, t) for s in S for t in T)


def _primary_subgroups(G: FiniteAbelianGroup, P: Subgroup) -> set:
    zero = frozenset([G.zero])
    cyclics = {frozenset(_close(G, [x])) for x in P.elements if x != G.zero}
    found = {zero}
    frontier = [zero]
    while frontier:
        new = []
        for S in frontier:
            for C in cyclics:
                if C <= S:
                    continue
                J = _sumset(G, S, C)
                if J not in found:
                    found.add(J)
                    new.append(J)
        frontier = new
    return found


def _sort_key(H: Subgroup):
    return (H.order, H.elements)


@lru_cache(maxsize=256)
def _subgroups_cached(G: FiniteAbelianGroup) -> tuple[Subgroup, ...]:
    per_prime = [_primary_subgroups(G, primary_component(G, p)) for p in G.primes()]
    result = []
    for combo in itertools.product(*per_prime):
        acc = frozenset([G.zero])
        for part in combo:
            acc = _sumset(G, acc, part)
        result.append(Subgroup(G, acc, check=False))
    result.sort(key=_sort_key)
    return tuple(result)


def subgroups(G: FiniteAbelianGroup) -> list[Subgroup]:
    """Every subgroup of ``G`` once, ordered by size then by sorted element list."""
    bound = max_order()
    if G.order > bound:
        raise CapacityError(f"|G| = {G.order} exceeds the enumeration bound {bound} (TTG_MAX_ORDER)")
    return list(_subgroups_cached(G))


@lru_cache(maxsize=256)
def _index_map(G: FiniteAbelianGroup) -> dict:
    return {H: i for i, H in enumerate(_subgroups_cached(G))}


def subgroup_index(H: Subgroup) -> int:
    """Position of ``H`` in :func:`subgroups` of its ambient group."""
    subgroups(H.ambient)
    return _index_map(H.ambient)[H]


def _pgroup_basis(G: FiniteAbelianGroup, elems: list, p: int, exps: list[int]) -> list:
    # backtracking search for independent elements of orders p^e, e in exps (descending)
    by_order: dict[int, list] = {}
    for x in elems:
        by_order.setdefault(G.element_order(x), []).append(x)

    def extend(chosen, span):
        i = len(chosen)
        if i == len(exps):
            return chosen
        target = len(span) * p ** exps[i]
        for x in by_order.get(p ** exps[i], []):
            if x in span:
                continue
            new_span = _sumset(G, span, _close(G, [x]))
            if len(new_span) == target:
                found = extend(chosen + [x], new_span)
                if found is not None:
                    return found
        return None

    basis = extend([], frozenset([G.zero]))
    assert basis is not None
    return basis


@lru_cache(maxsize=1024)
def canonical_model(H: Subgroup) -> tuple[FiniteAbelianGroup, tuple[Element, ...]]:
    """An explicit isomorphism ``iso_type(H) -> H``.

    Returns ``(T, images)`` where ``images[i]`` is the image in ``H`` of the
    i-th standard generator of ``T``.
    """
    G = H.ambient
    T = H.iso_type
    k = T.rank
    images = [G.zero] * k
    for p in T.primes():
        exps = sorted((_valuation(d, p) for d in T.invariant_factors if d % p == 0), reverse=True)
        part = [x for x in H.elements if p ** _valuation(G.element_order(x), p) == G.element_order(x)]
        for i, g in enumerate(_pgroup_basis(G, part, p, exps)):
            images[k - 1 - i] = G.add(images[k - 1 - i], g)
    return T, tuple(images)


def model_map(H: Subgroup) -> dict:
    """Element-level bijection from ``iso_type(H)`` onto ``H``."""
    T, images = canonical_model(H)
    G = H.ambient
    out = {}
    for coords in T.elements():
        y = G.zero
        for a, g in zip(coords, images):
            y = G.add(y, G.scale(a, g))
        out[coords] = y
    return out


def relative_subgroup(H: Subgroup, K: Subgroup) -> Subgroup:
    """``K ⊆ H`` re-expressed as a subgroup of the abstract group ``iso_type(H)``."""
    if not contains(H, K):
        raise NotContainedError(f"{K!r} is not contained in {H!r}")
    phi = model_map(H)
    T = H.iso_type
    return Subgroup(T, [a for a, y in phi.items() if y in K.element_set], check=False)


# --- text grammar -----------------------------------------------------------

_TOKEN = re.compile(r"^(?:Z/)?(\d+)$")


def parse_group(text: str) -> FiniteAbelianGroup:
    """Parse ``Z/4xZ/2``, ``4x2``, ``4,2`` (or ``1`` for the trivial group)."""
    raw = text.replace(" ", "")
    if raw in ("", "1", "Z/1"):
        return canonicalize([])
    tokens = raw.split(",") if "," in raw else raw.split("x")
    factors = []
    for tok in tokens:
        m = _TOKEN.match(tok)
        if not m:
            raise GrammarError(f"cannot parse group token {tok!r} in {text!r}")
        factors.append(int(m.group(1)))
    return canonicalize(factors)


def parse_element(text: str) -> Element:
    """Parse ``(2,1)``; a bare integer is accepted for cyclic groups."""
    raw = text.replace(" ", "")
    m = re.fullmatch(r"\(([-\d,]*)\)|(-?\d+)", raw)
    if not m:
        raise GrammarError(f"cannot parse element {text!r}")
    if m.group(2) is not None:
        return (int(m.group(2)),)
    inner = m.group(1)
    if inner == "":
        return ()
    try:
        return tuple(int(t) for t in inner.split(","))
    except ValueError:
        raise GrammarError(f"cannot parse element {text!r}")


def render_element(x: Element) -> str:
    return "(" + ",".join(str(a) for a in x) + ")"


def parse_elements(text: str) -> list[Element]:
    """Parse a comma-separated list of elements, e.g. ``(2,1),(0,1)``."""
    raw = text.replace(" ", "")
    if raw == "":
        return []
    chunks = re.findall(r"\([^()]*\)|[^,()]+", raw)
    leftover = re.sub(r"\([^()]*\)|[^,()]+", "", raw).replace(",", "")
    if leftover:
        raise GrammarError(f"cannot parse element list {text!r}")
    return [parse_element(c) for c in chunks]


class GrammarError(InvalidInputError):
    code = "E_USAGE"


def _partitions(n: int, largest: int | None = None):
    largest = n if largest is None else largest
    if n == 0:
        yield ()
        return
    for k in range(min(n, largest), 0, -1):
        for rest in _partitions(n - k, k):
            yield (k,) + rest


def abelian_groups_of_order(n: int) -> list[FiniteAbelianGroup]:
    """All abelian groups of order ``n`` up to isomorphism, in a fixed order.

    >>> [str(G) for G in abelian_groups_of_order(8)]
    ['Z/8', 'Z/2 x Z/4', 'Z/2 x Z/2 x Z/2']
    """
    if n < 1:
        raise InvalidInputError(f"order must be >= 1, got {n}")
    per_prime = [
        [[p**k for k in lam] for lam in _partitions(e)] for p, e in sorted(factorint(n).items())
    ]
    return [canonicalize(list(itertools.chain(*combo))) for combo in itertools.product(*per_prime)]
