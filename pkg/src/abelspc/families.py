"""Families of subgroups, p-corank, and chromatic height drops of fixed points.

For a finite abelian p-group ``A`` and a family ``F`` of subgroups, the
``F``-geometric fixed points of the Borel-complete Lubin--Tate theory of
height ``n`` vanish iff ``cork_p(F) >= n + 1``; otherwise their height is
``n - cork_p(F)``.  :func:`tate_height` returns that combinatorial answer.
"""

from __future__ import annotations

import enum
import json
import re
from typing import Iterable, Iterator

from .abelian import (
    FiniteAbelianGroup,
    GrammarError,
    Subgroup,
    check_prime,
    contains,
    is_p_group,
    p_rank,
    parse_elements,
    render_element,
    subgroup_from_generators,
    subgroup_index,
    subgroups,
)
from .errors import (
    AmbientMismatchError,
    GuardExceededError,
    InvalidInputError,
    NotAFamilyError,
    NotPGroupError,
    NotProperFamilyError,
)
from .height import Height
from .spectrum import SCHEMA_VERSION


class Family:
    """A set of subgroups of ``ambient`` closed under passing to subgroups."""

    __slots__ = ("ambient", "members", "_hash")

    def __init__(self, ambient: FiniteAbelianGroup, members: Iterable[Subgroup], *, check: bool = True):
        members = frozenset(members)
        for H in members if check else ():
            if H.ambient != ambient:
                raise AmbientMismatchError(f"{H!r} is not a subgroup of {ambient}")
        for H in members if check else ():
            for K in subgroups(ambient):
                if K not in members and contains(H, K):
                    raise NotAFamilyError(f"{K!r} ⊆ {H!r} is missing; families are closed under subgroups")
        self.ambient = ambient
        self.members = members
        self._hash = hash((ambient, members))

    def __eq__(self, other):
        if not isinstance(other, Family):
            return NotImplemented
        return self.ambient == other.ambient and self.members == other.members

    def __hash__(self):
        return self._hash

    def __contains__(self, H: Subgroup) -> bool:
        return H in self.members

    def __len__(self):
        return len(self.members)

    def __le__(self, other: "Family") -> bool:
        return self.members <= other.members

    def __repr__(self):
        mx = ", ".join(f"#{subgroup_index(H)}" for H in self.maximal_members)
        return f"Family({self.ambient.render()!r}, max=[{mx}])"

    def sorted_members(self) -> list[Subgroup]:
        return [H for H in subgroups(self.ambient) if H in self.members]

    @property
    def maximal_members(self) -> tuple[Subgroup, ...]:
        mem = self.sorted_members()
        return tuple(H for H in mem if not any(L != H and contains(L, H) for L in mem))

    def is_proper(self) -> bool:
        return len(self.members) < len(subgroups(self.ambient))

    def union(self, other: "Family") -> "Family":
        _same_ambient(self, other)
        return Family(self.ambient, self.members | other.members)

    def intersection(self, other: "Family") -> "Family":
        _same_ambient(self, other)
        return Family(self.ambient, self.members & other.members)

    def literal(self) -> str:
        parts = []
        for H in self.maximal_members:
            gens = H.generators or (H.ambient.zero,)
            parts.append(",".join(render_element(g) for g in gens))
        return "{" + ";".join(parts) + "}"

    def to_dict(self) -> dict:
        from .selectors import subgroup_key

        return {
            "schema": SCHEMA_VERSION,
            "kind": "family",
            "group": self.ambient.render(),
            "literal": self.literal(),
            "size": len(self.members),
            "maximal": [
                {"index": subgroup_index(H), "key": subgroup_key(H), "iso_type": H.render()}
                for H in self.maximal_members
            ],
            "members": [subgroup_index(H) for H in self.sorted_members()],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"


def _same_ambient(a: Family, b: Family):
    if a.ambient != b.ambient:
        raise AmbientMismatchError(f"families over {a.ambient} and {b.ambient}")


def family_closure(seed: Iterable[Subgroup], ambient: FiniteAbelianGroup | None = None) -> Family:
    """Smallest family containing every subgroup in ``seed``."""
    seed = list(seed)
    if ambient is None:
        if not seed:
            raise InvalidInputError("an empty seed needs an explicit ambient group")
        ambient = seed[0].ambient
    for H in seed:
        if H.ambient != ambient:
            raise AmbientMismatchError(f"{H!r} is not a subgroup of {ambient}")
    members = {K for K in subgroups(ambient) if any(contains(H, K) for H in seed)}
    return Family(ambient, members)


def below(H: Subgroup) -> Family:
    """The family ``[<= H]`` of all subgroups of ``H``."""
    return family_closure([H])


def proper_family(A: FiniteAbelianGroup) -> Family:
    return Family(A, [H for H in subgroups(A) if not H.is_full()])


def rank_at_most(A: FiniteAbelianGroup, p: int, m: int) -> Family:
    return Family(A, [H for H in subgroups(A) if p_rank(H.iso_type, p) <= m])


def cork(F: Family, p: int) -> int:
    """p-corank: least ``rk_p`` of a subgroup outside the proper family ``F``."""
    check_prime(p)
    outside = [H for H in subgroups(F.ambient) if H not in F]
    if not outside:
        raise NotProperFamilyError("p-corank is only defined for proper families")
    return min(p_rank(H.iso_type, p) for H in outside)


class TateResult(enum.Enum):
    VANISHES = "vanishes"

    def __repr__(self):
        return "Vanishes"


VANISHES = TateResult.VANISHES


def tate_height(F: Family, n: int, p: int):
    """Chromatic height of the ``F``-geometric fixed points of height-``n`` Lubin--Tate theory.

    Returns :data:`VANISHES` when those fixed points are zero, which is a
    different outcome from height 0.
    """
    check_prime(p)
    if isinstance(n, Height):
        if not n.is_finite:
            raise InvalidInputError("Lubin--Tate height must be finite")
        n = n.value
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise InvalidInputError(f"height n must be an integer >= 1, got {n!r}")
    if not is_p_group(F.ambient, p):
        raise NotPGroupError(f"{F.ambient} is not a {p}-group")
    c = cork(F, p)
    if c >= n + 1:
        return VANISHES
    return Height(n - c)


def kuhn_threshold(A: FiniteAbelianGroup, p: int, n: int) -> int:
    """Type threshold ``max(n - rk_p(A), 0)`` for acyclics of ``Φ^A(L_{n-1}^f S^0)``.

    Finite p-local spectra of type at least this value are exactly the
    ones annihilated; a threshold of 0 means every finite p-local spectrum.
    """
    check_prime(p)
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise InvalidInputError(f"n must be an integer >= 1, got {n!r}")
    if not is_p_group(A, p):
        raise NotPGroupError(f"{A} is not a {p}-group")
    return max(n - p_rank(A, p), 0)


def iter_families(A: FiniteAbelianGroup, limit: int | None = None) -> Iterator[Family]:
    """Every family of subgroups of ``A`` (including empty and full), deterministically.

    Raises :class:`GuardExceededError` once more than ``limit`` have been produced.
    """
    subs = subgroups(A)
    n = len(subs)
    # maximal proper subgroups suffice to check downward closure
    lower = []
    for i, H in enumerate(subs):
        below_i = [j for j in range(i) if contains(H, subs[j]) and subs[j] != H]
        maximal = [j for j in below_i if not any(k != j and contains(subs[k], subs[j]) for k in below_i)]
        lower.append(maximal)
    count = 0

    def rec(i, chosen):
        nonlocal count
        if i == n:
            count += 1
            if limit is not None and count > limit:
                raise GuardExceededError(f"{A} has more than {limit} families")
            yield Family(A, [subs[j] for j in chosen], check=False)
            return
        yield from rec(i + 1, chosen)
        if all(j in chosen for j in lower[i]):
            chosen.add(i)
            yield from rec(i + 1, chosen)
            chosen.discard(i)

    yield from rec(0, set())


_RANK = re.compile(r"^rank<=(\d+)$")


def parse_family(A: FiniteAbelianGroup, text: str, p: int | None = None) -> Family:
    """Parse ``below:H``, ``proper``, ``rank<=m`` (needs ``p``) or ``{gens;gens;...}``."""
    from .selectors import parse_subgroup

    raw = text.strip()
    if raw == "proper":
        return proper_family(A)
    if raw.startswith("below:"):
        return below(parse_subgroup(A, raw[len("below:"):]))
    m = _RANK.match(raw.replace(" ", ""))
    if m:
        if p is None:
            raise InvalidInputError("rank<=m families need a prime")
        return rank_at_most(A, p, int(m.group(1)))
    if raw.startswith("{") and raw.endswith("}"):
        inner = raw[1:-1].strip()
        seeds = []
        if inner:
            for chunk in inner.split(";"):
                chunk = chunk.strip()
                if chunk.startswith("#"):
                    seeds.append(parse_subgroup(A, chunk))
                else:
                    seeds.append(subgroup_from_generators(A, parse_elements(chunk)))
        return family_closure(seeds, A)
    raise GrammarError(f"cannot parse family {text!r}")
