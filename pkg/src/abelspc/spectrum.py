"""Points and specialization order of the p-local Balmer spectrum of compact A-spectra.

For a finite abelian group ``A`` and a prime ``p`` the points are the prime
ideals ``P(A', n)`` (objects whose ``A'``-geometric fixed points have type
at least ``n``), one for each subgroup ``A'`` and each height
``1 <= n <= inf``.  ``P(A', n) ⊆ P(A'', m)`` holds exactly when
``A' ⊆ A''`` with ``A''/A'`` a p-group and ``n >= m + rk_p(A''/A')``.

Morava K-theories, the categories ``C_p^n`` and the fixed point functors
themselves never appear; only this combinatorial shadow is computed.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .abelian import (
    FiniteAbelianGroup,
    Subgroup,
    check_prime,
    contains,
    is_p_group,
    p_rank,
    quotient_type,
    subgroup_index,
    subgroups,
)
from .errors import (
    AmbientMismatchError,
    InvalidInputError,
    NotContainedError,
    NotPGroupQuotientError,
    PrimeMismatchError,
)
from .height import Height, height_range

SCHEMA_VERSION = 1


@dataclass(frozen=True)
class SpectrumPoint:
    subgroup: Subgroup
    prime: int
    height: Height

    def __post_init__(self):
        object.__setattr__(self, "height", Height.coerce(self.height))
        check_prime(self.prime)
        if self.height < 1:
            raise InvalidInputError(f"spectrum points have height >= 1, got {self.height}")

    @property
    def ambient(self) -> FiniteAbelianGroup:
        return self.subgroup.ambient

    @property
    def index(self) -> int:
        return subgroup_index(self.subgroup)

    def node_id(self) -> str:
        return f"s{self.index}_h{self.height}"

    def label(self) -> str:
        return f"P({self.subgroup.render()}, {self.height})"

    def sort_key(self):
        return (self.index, self.height.sort_key())

    def __repr__(self):
        return f"SpectrumPoint(#{self.index} {self.subgroup.render()}, p={self.prime}, {self.height})"


@lru_cache(maxsize=1 << 18)
def inclusion_gap(lower: Subgroup, upper: Subgroup, p: int):
    """``rk_p(upper/lower)`` if ``lower ⊆ upper`` with p-group quotient, else ``None``."""
    if not contains(upper, lower):
        return None
    Q = quotient_type(upper, lower)
    if not is_p_group(Q, p):
        return None
    return p_rank(Q, p)


def _check_compatible(a: SpectrumPoint, b: SpectrumPoint):
    if a.ambient != b.ambient:
        raise AmbientMismatchError(f"points over different groups: {a.ambient} vs {b.ambient}")
    if a.prime != b.prime:
        raise PrimeMismatchError(f"points at different primes: {a.prime} vs {b.prime}")


def includes(src: SpectrumPoint, dst: SpectrumPoint) -> bool:
    """Decide ``P(src) ⊆ P(dst)``."""
    _check_compatible(src, dst)
    gap = inclusion_gap(src.subgroup, dst.subgroup, src.prime)
    return gap is not None and src.height >= dst.height + gap


def points(A: FiniteAbelianGroup, p: int, cap: int) -> list[SpectrumPoint]:
    """All points with height in ``1..cap`` or ``inf``, by subgroup index then height."""
    check_prime(p)
    hs = height_range(cap)
    return [SpectrumPoint(H, p, h) for H in subgroups(A) for h in hs]


def closure(pt: SpectrumPoint, cap: int) -> frozenset[SpectrumPoint]:
    """Points of the truncated spectrum lying in the closure of ``pt``.

    ``q`` is in the closure of ``pt`` iff ``P(q) ⊆ P(pt)``.
    """
    return frozenset(q for q in points(pt.ambient, pt.prime, cap) if includes(q, pt))


def blueshift(A: FiniteAbelianGroup, H: Subgroup, K: Subgroup, p: int) -> int:
    """Blue-shift number for ``K ⊆ H``: the least ``i`` with ``P(K, n+i) ⊆ P(H, n)``.

    For abelian groups this is ``rk_p(H/K)``, whatever finite ``n`` is used,
    so no height parameter is taken.  When ``A`` itself is not a p-group the
    value still follows from the inclusion criterion; see
    :func:`is_criterion_derived`.
    """
    check_prime(p)
    if H.ambient != A or K.ambient != A:
        raise AmbientMismatchError(f"subgroups must live in {A}")
    if not contains(H, K):
        raise NotContainedError(f"{K!r} is not contained in {H!r}")
    Q = quotient_type(H, K)
    if not is_p_group(Q, p):
        raise NotPGroupQuotientError(f"H/K = {Q} is not a {p}-group; blue-shift undefined")
    return p_rank(Q, p)


def is_criterion_derived(A: FiniteAbelianGroup, p: int) -> bool:
    """True when blue-shift numbers for ``A`` go beyond the p-group setting."""
    return not is_p_group(A, p)


@dataclass(frozen=True)
class HasseDiagram:
    group: FiniteAbelianGroup
    prime: int
    cap: int
    nodes: tuple[SpectrumPoint, ...]
    edges: tuple[tuple[int, int], ...]  # (i, j): P(nodes[i]) ⊆ P(nodes[j]) is a cover

    def edge_ids(self) -> list[tuple[str, str]]:
        return [(self.nodes[i].node_id(), self.nodes[j].node_id()) for i, j in self.edges]

    def to_dot(self) -> str:
        lines = [
            "digraph spectrum {",
            f'  label="Spc at p={self.prime}, A={self.group.render()}, heights 1..{self.cap} and inf";',
            "  node [shape=plaintext];",
        ]
        for pt in self.nodes:
            lines.append(f'  {pt.node_id()} [label="{pt.label()}"];')
        for a, b in self.edge_ids():
            lines.append(f"  {a} -> {b};")
        lines.append("}")
        return "\n".join(lines) + "\n"

    def to_dict(self) -> dict:
        return {
            "schema": SCHEMA_VERSION,
            "kind": "spectrum",
            "group": self.group.render(),
            "prime": self.prime,
            "cap": self.cap,
            "nodes": [point_to_dict(pt) for pt in self.nodes],
            "edges": [list(e) for e in self.edge_ids()],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"


def point_to_dict(pt: SpectrumPoint) -> dict:
    return {
        "id": pt.node_id(),
        "subgroup_index": pt.index,
        "subgroup": pt.subgroup.render(),
        "height": pt.height.to_json(),
        "selector": f"#{pt.index}@{pt.height}",
        "label": pt.label(),
    }


def inclusion_matrix(pts: list[SpectrumPoint]) -> np.ndarray:
    """Boolean matrix ``M[i, j] = includes(pts[i], pts[j])``."""
    n = len(pts)
    M = np.zeros((n, n), dtype=bool)
    for i, a in enumerate(pts):
        for j, b in enumerate(pts):
            M[i, j] = includes(a, b)
    return M


def hasse(A: FiniteAbelianGroup, p: int, cap: int) -> HasseDiagram:
    """Cover relations of the inclusion order on the truncated spectrum."""
    nodes = points(A, p, cap)
    strict = inclusion_matrix(nodes)
    np.fill_diagonal(strict, False)
    through = (strict.astype(np.int64) @ strict.astype(np.int64)) > 0
    cover = strict & ~through
    edges = tuple((int(i), int(j)) for i, j in zip(*np.nonzero(cover)))
    return HasseDiagram(A, p, cap, tuple(nodes), edges)
