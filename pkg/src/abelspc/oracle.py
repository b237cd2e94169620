"""Brute-force cross-checks for the fast routines.

Nothing here reuses the closure, quotient, or height-comparison code of the
modules it checks: groups are re-encoded as integer addition tables, quotient
ranks come from ``|H| / |K + pH|`` instead of torsion counting, and heights
are compared as plain integers with infinity mapped above every reachable
finite value.  Everything is exponential and guarded.
"""

from __future__ import annotations

import itertools
import json
import math
import random
from dataclasses import dataclass, field

import numpy as np

from .abelian import FiniteAbelianGroup
from .errors import (
    GuardExceededError,
    NotContainedError,
    NotPGroupQuotientError,
)
from .height import INF, Height

SUBGROUP_ORACLE_MAX_ORDER = 64
COMPLETION_GUARD = 2 * 10**7
POSET_GUARD = 10**4


# --- groups as addition tables ----------------------------------------------

class _Table:
    def __init__(self, factors):
        self.factors = tuple(factors)
        self.elems = list(itertools.product(*(range(d) for d in self.factors)))
        self.index = {x: i for i, x in enumerate(self.elems)}
        n = len(self.elems)
        self.add = [[0] * n for _ in range(n)]
        for i, x in enumerate(self.elems):
            for j, y in enumerate(self.elems):
                self.add[i][j] = self.index[tuple((a + b) % d for a, b, d in zip(x, y, self.factors))]

    def times(self, k, i):
        acc = 0
        for _ in range(k):
            acc = self.add[acc][i]
        return acc

    def extend(self, S: frozenset, x: int) -> frozenset:
        # <S, x> = union over k of S + kx
        out = set(S)
        shift = x
        while shift not in S:
            out.update(self.add[s][shift] for s in S)
            shift = self.add[shift][x]
        return frozenset(out)


def exhaustive_subgroup_count(G: FiniteAbelianGroup) -> int:
    """Count subgroups by adjoining generators one at a time from the trivial group."""
    if G.order > SUBGROUP_ORACLE_MAX_ORDER:
        raise GuardExceededError(f"oracle limited to |G| <= {SUBGROUP_ORACLE_MAX_ORDER}")
    T = _Table(G.invariant_factors)
    start = frozenset([0])
    seen = {start}
    stack = [start]
    while stack:
        S = stack.pop()
        for x in range(len(T.elems)):
            if x in S:
                continue
            J = T.extend(S, x)
            if J not in seen:
                seen.add(J)
                stack.append(J)
    return len(seen)


def gaussian_binomial(n: int, k: int, q: int) -> int:
    """Number of k-dimensional subspaces of F_q^n."""
    if k < 0 or k > n:
        return 0
    num = den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def elementary_subgroup_count(n: int, p: int) -> int:
    return sum(gaussian_binomial(n, k, p) for k in range(n + 1))


def divisor_count(n: int) -> int:
    return sum(1 for d in range(1, n + 1) if n % d == 0)


# --- independent quotient data ----------------------------------------------

def _as_sets(subs):
    return [frozenset(H.elements) for H in subs]


def _relations(subs, factors, p):
    """``{(i, j): rank}`` for lo ⊆ hi with p-power index, rank = log_p |hi / (lo + p hi)|."""
    sets = _as_sets(subs)
    rel = {}
    for j, hi in enumerate(sets):
        p_hi = {tuple(p * a % d for a, d in zip(x, factors)) for x in hi}
        for i, lo in enumerate(sets):
            if not lo <= hi:
                continue
            idx = len(hi) // len(lo)
            while idx % p == 0:
                idx //= p
            if idx != 1:
                continue
            span = {tuple((a + b) % d for a, b, d in zip(x, y, factors)) for x in lo for y in p_hi}
            quo, r = len(hi) // len(span), 0
            while quo > 1:
                quo //= p
                r += 1
            rel[(i, j)] = r
    return rel


def quotient_rank(H, K, p: int) -> int:
    """``log_p |H / (K + pH)|`` from element sets, for ``K ⊆ H`` with p-power index."""
    factors = H.ambient.invariant_factors
    hi, lo = set(H.elements), set(K.elements)
    if not lo <= hi:
        raise NotContainedError("K is not contained in H")
    idx = len(hi) // len(lo)
    while idx % p == 0:
        idx //= p
    if idx != 1:
        raise NotPGroupQuotientError("H/K is not a p-group")
    p_hi = {tuple(p * a % d for a, d in zip(x, factors)) for x in hi}
    span = {tuple((a + b) % d for a, b, d in zip(x, y, factors)) for x in lo for y in p_hi}
    quo, r = len(hi) // len(span), 0
    while quo > 1:
        quo //= p
        r += 1
    return r


def _encode(values, big):
    return [v.value if v.is_finite else big for v in values]


def _decode(row, big):
    return [INF if int(v) >= big else Height(int(v)) for v in row]


CHUNK = 1 << 18


def _candidate_chunks(options):
    """Yield the full candidate grid as integer arrays of at most ``CHUNK`` rows."""
    total = math.prod(len(o) for o in options)
    if total > COMPLETION_GUARD:
        raise GuardExceededError(f"{total} candidates exceed the guard {COMPLETION_GUARD}")
    split = len(options)
    while split > 0 and math.prod(len(o) for o in options[split - 1:]) <= CHUNK:
        split -= 1
    tail = [np.asarray(o, dtype=np.int64) for o in options[split:]]
    grids = np.meshgrid(*tail, indexing="ij") if tail else []
    tail_rows = np.stack([g.ravel() for g in grids], axis=1) if tail else np.zeros((1, 0), dtype=np.int64)
    for head in itertools.product(*options[:split]):
        prefix = np.broadcast_to(np.asarray(head, dtype=np.int64), (len(tail_rows), split))
        yield np.concatenate([prefix, tail_rows], axis=1)


def _admissible_mask(cands, rel):
    mask = np.ones(len(cands), dtype=bool)
    for (i, j), r in rel.items():
        if i != j:
            mask &= cands[:, i] <= cands[:, j] + r
    return mask


def _prepare(f, value_cap):
    from .abelian import subgroups

    if any(v.is_finite and v.value > value_cap for v in f.values):
        raise ValueError(f"finite values of f must be <= value_cap={value_cap}")
    subs = subgroups(f.ambient)
    rel = _relations(subs, f.ambient.invariant_factors, f.prime)
    # an admissible g <= f can take finite values up to value_cap + max rank
    # where f is infinite.  Infinity is encoded above top + max rank so that
    # no finite candidate plus a rank can reach it.
    r = max(rel.values(), default=0)
    top = value_cap + r
    big = top + r + 1
    return rel, top, big, _encode(f.values, big)


def _extreme(f, options, rel, big, reduce):
    from .typefn import TypeFunction

    best = None
    for cands in _candidate_chunks(options):
        ok = cands[_admissible_mask(cands, rel)]
        if len(ok):
            row = reduce(ok, axis=0)
            best = row if best is None else reduce(np.stack([best, row]), axis=0)
    return TypeFunction(f.ambient, f.prime, _decode(best, big))


def exhaustive_completion(f, value_cap: int):
    """Pointwise max over all admissible ``g <= f``.

    Finite values of ``f`` must be at most ``value_cap``; the search covers
    every value such a ``g`` can take.
    """
    rel, top, big, enc = _prepare(f, value_cap)
    options = [list(range(0, top + 1)) + [big] if v == big else list(range(0, v + 1)) for v in enc]
    return _extreme(f, options, rel, big, np.max)


def exhaustive_upper_completion(f, value_cap: int):
    """Pointwise min over all admissible ``h >= f`` (dual of :func:`exhaustive_completion`)."""
    rel, top, big, enc = _prepare(f, value_cap)
    # capping the finite values of an admissible h >= f at value_cap keeps it
    # admissible and above f, so larger finite values never realize the minimum
    options = [[big] if v == big else list(range(v, value_cap + 1)) + [big] for v in enc]
    return _extreme(f, options, rel, big, np.min)


# --- poset checks -------------------------------------------------------------

@dataclass
class CheckResult:
    check: str
    instance: str
    passed: bool
    detail: str = ""

    def to_dict(self):
        return {"check": self.check, "instance": self.instance, "pass": self.passed, "detail": self.detail}


@dataclass
class Report:
    results: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def failures(self):
        return [r for r in self.results if not r.passed]

    def to_json(self) -> str:
        return json.dumps({"schema": 1, "kind": "verify", "results": [r.to_dict() for r in self.results]}, indent=2) + "\n"


def poset_axioms(A: FiniteAbelianGroup, p: int, cap: int, samples: int = 25, seed: int = 0) -> Report:
    """Check that inclusion is a partial order on the truncated spectrum and
    that supports of admissible type functions are closed under it."""
    from .spectrum import inclusion_matrix, points
    from .typefn import TypeFunction, lower_completion, support

    pts = points(A, p, cap)
    if len(pts) > POSET_GUARD:
        raise GuardExceededError(f"{len(pts)} points exceed the guard {POSET_GUARD}")
    inst = f"A={A.render()}, p={p}, cap={cap}"
    M = inclusion_matrix(pts)
    Mi = M.astype(np.int64)
    report = Report()
    refl = bool(M.diagonal().all())
    report.results.append(CheckResult("reflexive", inst, refl))
    both = M & M.T
    np.fill_diagonal(both, False)
    report.results.append(CheckResult("antisymmetric", inst, not both.any(), f"{int(both.sum())} violating pairs"))
    comp = (Mi @ Mi) > 0
    bad = comp & ~M
    report.results.append(CheckResult("transitive", inst, not bad.any(), f"{int(bad.sum())} violating pairs"))

    rng = random.Random(seed)
    where = {pt: k for k, pt in enumerate(pts)}
    n_sub = len(pts) // (cap + 1)
    choices = [Height(v) for v in range(cap + 1)] + [INF]
    closed_all = True
    for _ in range(samples):
        f = lower_completion(TypeFunction(A, p, [rng.choice(choices) for _ in range(n_sub)]))
        Z = np.zeros(len(pts), dtype=bool)
        for pt in support(f, cap):
            Z[where[pt]] = True
        # any q below a support point must be in the support
        below_support = M[:, Z].any(axis=1)
        if (below_support & ~Z).any():
            closed_all = False
    report.results.append(CheckResult("support_closed", inst, closed_all, f"{samples} sampled admissible f"))
    return report


def exhaustive_blueshift(A, H, K, p: int, n: int) -> int:
    """Scan ``i = 0, 1, ...`` for the first ``P(K, n+i) ⊆ P(H, n)``."""
    from .spectrum import SpectrumPoint, includes

    if not set(K.elements) <= set(H.elements):
        raise NotContainedError("K is not contained in H")
    idx = len(H.elements) // len(K.elements)
    s = 0
    while idx % p == 0:
        idx //= p
        s += 1
    if idx != 1:
        raise NotPGroupQuotientError("H/K is not a p-group")
    for i in range(s + 1):
        if includes(SpectrumPoint(K, p, Height(n + i)), SpectrumPoint(H, p, Height(n))):
            return i
    raise AssertionError(f"no i <= log_p|H/K| = {s} found")
