"""Type functions on the subgroup set and the thick ⊗-ideals they classify.

A type function assigns to every subgroup ``A'`` of ``A`` a value in
``0, 1, ..., inf`` (think: the type of the ``A'``-geometric fixed points of
some finite A-spectrum).  It is realized by an actual object exactly when

    f(A') <= f(A'') + rk_p(A''/A')   for all A' ⊆ A'' with A''/A' a p-group,

and no object is ever built here; the criterion is the whole test.  The
support ``Z_f`` of an admissible ``f`` is a closed subset of the spectrum;
thick ⊗-ideals correspond to such supports, with ideal inclusion reversed
pointwise on ``f``.
"""

from __future__ import annotations

import itertools
import json
from functools import lru_cache
from typing import Mapping, Sequence

from .abelian import FiniteAbelianGroup, Subgroup, check_prime, subgroup_index, subgroups
from .errors import AmbientMismatchError, InadmissibleError, InvalidInputError, PrimeMismatchError
from .height import Height, height_range
from .spectrum import SCHEMA_VERSION, SpectrumPoint, inclusion_gap


class TypeFunction:
    """A total map from the subgroups of ``ambient`` to heights.

    ``values`` may be a sequence aligned with :func:`subgroups` or a mapping
    keyed by :class:`Subgroup`.
    """

    __slots__ = ("ambient", "prime", "values")

    def __init__(self, ambient: FiniteAbelianGroup, prime: int, values):
        check_prime(prime)
        subs = subgroups(ambient)
        if isinstance(values, Mapping):
            missing = [H for H in subs if H not in values]
            if missing:
                raise InvalidInputError(f"type function is missing {len(missing)} subgroup(s), e.g. {missing[0]!r}")
            if len(values) != len(subs):
                raise InvalidInputError("type function has keys that are not subgroups of the ambient group")
            values = [values[H] for H in subs]
        values = tuple(Height.coerce(v) for v in values)
        if len(values) != len(subs):
            raise InvalidInputError(f"need {len(subs)} values, got {len(values)}")
        self.ambient = ambient
        self.prime = prime
        self.values = values

    @classmethod
    def constant(cls, ambient, prime, value) -> "TypeFunction":
        return cls(ambient, prime, [value] * len(subgroups(ambient)))

    def __getitem__(self, H: Subgroup) -> Height:
        if H.ambient != self.ambient:
            raise AmbientMismatchError(f"{H!r} is not a subgroup of {self.ambient}")
        return self.values[subgroup_index(H)]

    def __eq__(self, other):
        if not isinstance(other, TypeFunction):
            return NotImplemented
        return (self.ambient, self.prime, self.values) == (other.ambient, other.prime, other.values)

    def __hash__(self):
        return hash((self.ambient, self.prime, self.values))

    def __le__(self, other: "TypeFunction") -> bool:
        _check_compatible(self, other)
        return all(a <= b for a, b in zip(self.values, other.values))

    def __ge__(self, other: "TypeFunction") -> bool:
        return other <= self

    def __repr__(self):
        body = ", ".join(f"#{i}:{v}" for i, v in enumerate(self.values))
        return f"TypeFunction({self.ambient.render()!r}, p={self.prime}, {{{body}}})"

    def items(self) -> list[tuple[Subgroup, Height]]:
        return list(zip(subgroups(self.ambient), self.values))

    def to_dict(self) -> dict:
        from .selectors import subgroup_key

        return {subgroup_key(H): v.to_json() for H, v in self.items()}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def typefn_from_json(A: FiniteAbelianGroup, p: int, text) -> TypeFunction:
    """Read ``{"1": 1, "Z/2": 0}``-style maps; keys are subgroup selectors."""
    from .selectors import parse_subgroup

    data = json.loads(text) if isinstance(text, str) else text
    if not isinstance(data, dict):
        raise InvalidInputError("type function JSON must be an object")
    mapping: dict[Subgroup, Height] = {}
    for key, val in data.items():
        H = parse_subgroup(A, key)
        if H in mapping:
            raise InvalidInputError(f"subgroup {key!r} given twice")
        mapping[H] = Height.coerce(val)
    return TypeFunction(A, p, mapping)


@lru_cache(maxsize=512)
def constraint_pairs(A: FiniteAbelianGroup, p: int) -> tuple[tuple[int, int, int], ...]:
    """``(i, j, r)`` for subgroup indices ``i ⊆ j`` with p-group quotient of rank ``r``.

    The diagonal ``(i, i, 0)`` is included.
    """
    subs = subgroups(A)
    out = []
    for i, lo in enumerate(subs):
        for j, hi in enumerate(subs):
            r = inclusion_gap(lo, hi, p)
            if r is not None:
                out.append((i, j, r))
    return tuple(out)


def _check_compatible(f: TypeFunction, g: TypeFunction):
    if f.ambient != g.ambient:
        raise AmbientMismatchError(f"type functions over {f.ambient} and {g.ambient}")
    if f.prime != g.prime:
        raise PrimeMismatchError(f"type functions at primes {f.prime} and {g.prime}")


def is_admissible(f: TypeFunction) -> bool:
    v = f.values
    return all(v[i] <= v[j] + r for i, j, r in constraint_pairs(f.ambient, f.prime))


def lower_completion(f: TypeFunction) -> TypeFunction:
    """Pointwise-greatest admissible function below ``f``.

    One pass suffices: ``rk_p`` is subadditive along towers of p-group
    quotients, so the minimum over overgroups is already admissible.
    """
    v = f.values
    best = list(v)
    for i, j, r in constraint_pairs(f.ambient, f.prime):
        cand = v[j] + r
        if cand < best[i]:
            best[i] = cand
    return TypeFunction(f.ambient, f.prime, best)


def upper_completion(f: TypeFunction) -> TypeFunction:
    """Pointwise-least admissible function above ``f`` (truncated subtraction, ``inf`` propagates up)."""
    v = f.values
    best = list(v)
    for i, j, r in constraint_pairs(f.ambient, f.prime):
        cand = v[i].monus(r)
        if cand > best[j]:
            best[j] = cand
    return TypeFunction(f.ambient, f.prime, best)


def support(f: TypeFunction, cap: int) -> frozenset[SpectrumPoint]:
    """Points ``P(A', n)`` with ``n`` in ``1..cap`` or ``inf`` and ``n > f(A')``."""
    hs = height_range(cap)
    return frozenset(
        SpectrumPoint(H, f.prime, n) for H, v in f.items() for n in hs if n > v
    )


def in_ideal_generated_by(fX: TypeFunction, fY: TypeFunction) -> bool:
    """Whether X lies in the thick ⊗-ideal generated by Y, i.e. ``fY <= fX``."""
    _check_compatible(fX, fY)
    return fY <= fX


def _require_admissible(*fs: TypeFunction):
    for f in fs:
        if not is_admissible(f):
            raise InadmissibleError(f"{f!r} is not admissible")


def ideal_join(f: TypeFunction, g: TypeFunction) -> TypeFunction:
    """Ideal generated by both: pointwise minimum (union of supports)."""
    _check_compatible(f, g)
    _require_admissible(f, g)
    return TypeFunction(f.ambient, f.prime, [min(a, b) for a, b in zip(f.values, g.values)])


def ideal_meet(f: TypeFunction, g: TypeFunction) -> TypeFunction:
    """Intersection of ideals: pointwise maximum (intersection of supports)."""
    _check_compatible(f, g)
    _require_admissible(f, g)
    return TypeFunction(f.ambient, f.prime, [max(a, b) for a, b in zip(f.values, g.values)])


def support_to_dict(f: TypeFunction, cap: int) -> dict:
    from .spectrum import point_to_dict

    pts = sorted(support(f, cap), key=SpectrumPoint.sort_key)
    return {
        "schema": SCHEMA_VERSION,
        "kind": "support",
        "group": f.ambient.render(),
        "prime": f.prime,
        "cap": cap,
        "points": [point_to_dict(pt) for pt in pts],
    }


def all_type_functions(A: FiniteAbelianGroup, p: int, values: Sequence) -> list[TypeFunction]:
    """Every type function with values drawn from ``values`` (exponential; keep it small)."""
    n = len(subgroups(A))
    vals = [Height.coerce(v) for v in values]
    return [TypeFunction(A, p, combo) for combo in itertools.product(vals, repeat=n)]
