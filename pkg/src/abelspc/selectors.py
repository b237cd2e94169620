"""Textual selectors for subgroups and spectrum points.

Subgroup selectors: ``#3`` (index into :func:`subgroups`), ``gen:(2,1),(0,1)``,
``full``, ``trivial``, or an isomorphism type such as ``Z/2`` when exactly one
subgroup has it.  Point selectors append a height: ``#3@2``, ``full@inf``.
"""

from __future__ import annotations

from .abelian import (
    FiniteAbelianGroup,
    GrammarError,
    Subgroup,
    parse_elements,
    parse_group,
    render_element,
    subgroup_from_generators,
    subgroup_index,
    subgroups,
)
from .errors import InvalidInputError
from .height import Height


def parse_subgroup(G: FiniteAbelianGroup, text: str) -> Subgroup:
    raw = text.strip()
    if raw == "full":
        return G.full()
    if raw == "trivial":
        return G.trivial()
    if raw.startswith("#"):
        try:
            i = int(raw[1:])
        except ValueError:
            raise GrammarError(f"bad subgroup index {text!r}")
        subs = subgroups(G)
        if not 0 <= i < len(subs):
            raise InvalidInputError(f"subgroup index {i} out of range 0..{len(subs) - 1}")
        return subs[i]
    if raw.startswith("gen:"):
        return subgroup_from_generators(G, parse_elements(raw[4:]))
    try:
        iso = parse_group(raw)
    except GrammarError:
        raise GrammarError(f"cannot parse subgroup selector {text!r}")
    matches = [H for H in subgroups(G) if H.iso_type == iso]
    if len(matches) != 1:
        raise InvalidInputError(
            f"selector {text!r} matches {len(matches)} subgroups of {G}; use #index or gen:"
        )
    return matches[0]


def subgroup_key(H: Subgroup) -> str:
    """Shortest stable key: the isomorphism type if unique, else ``#index``."""
    subs = subgroups(H.ambient)
    if sum(1 for S in subs if S.iso_type == H.iso_type) == 1:
        return H.render()
    return f"#{subgroup_index(H)}"


def generator_selector(H: Subgroup) -> str:
    return "gen:" + ",".join(render_element(g) for g in H.generators)


def parse_point(G: FiniteAbelianGroup, p: int, text: str):
    from .spectrum import SpectrumPoint

    if "@" not in text:
        raise GrammarError(f"point selector {text!r} needs '@height'")
    sub, _, h = text.rpartition("@")
    return SpectrumPoint(parse_subgroup(G, sub), p, Height.coerce(h))
