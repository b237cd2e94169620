"""Acceptance suite: one recorded PASS/FAIL line per criterion.

Run with ``pytest tests/test_acceptance.py`` (the lines appear in the
"acceptance criteria" summary section) or directly as a script.
"""

import itertools
import random
import sys
import time

import pytest

from abelspc.abelian import (
    abelian_groups_of_order,
    canonicalize,
    contains,
    p_rank,
    quotient_type,
    relative_subgroup,
    subgroups,
)
from abelspc.errors import GuardExceededError
from abelspc.families import (
    VANISHES,
    Family,
    cork,
    iter_families,
    kuhn_threshold,
    proper_family,
    rank_at_most,
)
from abelspc.families import tate_height
from abelspc.height import INF, Height
from abelspc.oracle import (
    divisor_count,
    elementary_subgroup_count,
    exhaustive_blueshift,
    exhaustive_completion,
    exhaustive_upper_completion,
    poset_axioms,
    quotient_rank,
)
from abelspc.spectrum import SpectrumPoint, blueshift, includes, points
from abelspc.typefn import (
    TypeFunction,
    all_type_functions,
    is_admissible,
    lower_completion,
    support,
    upper_completion,
)

from conftest import grp, two_groups


def test_criterion_1_blueshift_is_rank(acceptance_line):
    t0 = time.perf_counter()
    bad, pairs = [], 0
    for A in two_groups(32):
        subs = subgroups(A)
        for H, K in itertools.product(subs, repeat=2):
            if not contains(H, K):
                continue
            pairs += 1
            b = blueshift(A, H, K, 2)
            if b != quotient_rank(H, K, 2):
                bad.append((A, H, K, "rank"))
            for n in range(1, 5):
                if exhaustive_blueshift(A, H, K, 2, n) != b:
                    bad.append((A, H, K, n))
    Z4 = grp(4)
    cyclic = blueshift(Z4, Z4.full(), Z4.trivial(), 2)
    elapsed = time.perf_counter() - t0
    passed = not bad and cyclic == 1 and elapsed < 10
    acceptance_line(1, passed, f"{pairs} pairs K⊆H over 2-groups of order <= 32, {len(bad)} mismatches; "
                               f"blueshift(Z/4) = {cyclic} (log_2 4 = 2); {elapsed:.1f}s < 10s")
    assert not bad, bad[:5]
    assert cyclic == 1
    assert elapsed < 10


GRID = [[2], [4], [8], [2, 2], [4, 2], [2, 2, 2], [6], [12]]


def test_criterion_2_poset_axioms(acceptance_line):
    t0 = time.perf_counter()
    failures = []
    for factors, p in itertools.product(GRID, [2, 3]):
        A = canonicalize(factors)
        assert len(points(A, p, 5)) ** 2 <= 10**4
        failures += poset_axioms(A, p, 5).failures()
    elapsed = time.perf_counter() - t0
    passed = not failures and elapsed < 30
    acceptance_line(2, passed, f"{len(GRID) * 2} instances at cap 5, {len(failures)} failed checks; {elapsed:.1f}s < 30s")
    assert not failures, failures
    assert elapsed < 30


def _closed(Z, pts):
    return all(q in Z for pt in Z for q in pts if includes(q, pt))


def test_criterion_3_realizability(acceptance_line):
    t0 = time.perf_counter()
    total, exceptions = 0, []
    for factors in [[2], [4], [2, 2], [6]]:
        A = canonicalize(factors)
        for p in A.primes():
            pts = points(A, p, 5)
            for f in all_type_functions(A, p, [0, 1, 2, 3, INF]):
                total += 1
                if is_admissible(f) != _closed(support(f, 5), pts):
                    exceptions.append(f)
    elapsed = time.perf_counter() - t0
    passed = not exceptions and elapsed < 60
    acceptance_line(3, passed, f"{total} type functions, {len(exceptions)} exceptions; {elapsed:.1f}s < 60s")
    assert not exceptions, exceptions[:5]
    assert elapsed < 60


def test_criterion_4_completions(acceptance_line):
    A = grp(4, 2)
    rng = random.Random(20240401)
    choices = [Height(v) for v in range(5)] + [INF]
    bad = 0
    for _ in range(1000):
        f = TypeFunction(A, 2, [rng.choice(choices) for _ in subgroups(A)])
        lo, hi = lower_completion(f), upper_completion(f)
        ok = (
            lo == exhaustive_completion(f, 4)
            and hi == exhaustive_upper_completion(f, 4)
            and lower_completion(lo) == lo
            and upper_completion(hi) == hi
            and lo <= f <= hi
        )
        bad += not ok
    acceptance_line(4, bad == 0, f"1000 seeded f over Z/2 x Z/4, value cap 4, {bad} mismatches (exact)")
    assert bad == 0


_TWO_RANK = {}


def _two_rank_by_counting(K):
    # log_2 |K[2]|, from element sets
    if K not in _TWO_RANK:
        factors = K.ambient.invariant_factors
        count = sum(1 for x in K.elements if all(2 * a % d == 0 for a, d in zip(x, factors)))
        _TWO_RANK[K] = count.bit_length() - 1
    return _TWO_RANK[K]


def _cork_by_counting(F):
    return min(_two_rank_by_counting(K) for K in subgroups(F.ambient) if K not in F)


def _expected(c, n):
    return VANISHES if c >= n + 1 else Height(n - c)


def _check_families(fams):
    bad = 0
    for F in fams:
        if not F.is_proper():
            continue
        c = cork(F, 2)
        bad += c != _cork_by_counting(F)
        for n in range(1, 6):
            bad += tate_height(F, n, 2) != _expected(c, n)
    return bad


def _sampled_families(A, rng, random_count):
    """Families given by at most three generators, plus seeded random down-sets."""
    subs = subgroups(A)
    down = [sum(1 << j for j, K in enumerate(subs) if contains(H, K)) for H in subs]
    masks = {0}
    for k in (1, 2, 3):
        for combo in itertools.combinations(range(len(subs)), k):
            m = 0
            for i in combo:
                m |= down[i]
            masks.add(m)
    for _ in range(random_count):
        m = 0
        for i in rng.sample(range(len(subs)), rng.randint(1, 12)):
            m |= down[i]
        masks.add(m)
    for m in sorted(masks):
        yield Family(A, [subs[j] for j in range(len(subs)) if m >> j & 1], check=False)


ELEMENTARY_16 = (2, 2, 2, 2)


def test_criterion_5_height_drop(acceptance_line):
    exhaustive, bad, checked = [], 0, 0
    for A in two_groups(16):
        if A.invariant_factors == ELEMENTARY_16:
            continue
        fams = list(iter_families(A))
        checked += len(fams)
        bad += _check_families(fams)
        exhaustive.append(A)
    A16 = canonicalize(list(ELEMENTARY_16))
    sampled = list(_sampled_families(A16, random.Random(7), 20000))
    checked += len(sampled)
    bad += _check_families(sampled)
    drops = []
    for A in two_groups(16):
        if A.order == 1:
            continue
        r = p_rank(A, 2)
        drops += [tate_height(proper_family(A), n, 2) == Height(n - r) for n in range(r, 6)]
        drops += [tate_height(proper_family(A), n, 2) is VANISHES for n in range(1, r)]
        drops += [cork(rank_at_most(A, 2, m), 2) == m + 1 for m in range(r)]
    passed = bad == 0 and all(drops)
    acceptance_line(5, passed, f"exhaustive on {len(exhaustive)} of 12 groups; NOT exhaustive on (Z/2)^4 (~4.4e10 families), "
                               f"only {len(sampled)} structured+sampled ones there; {checked} families, {bad} mismatches; "
                               f"literal (Z/2)^4 enumeration is a strict xfail")
    assert bad == 0
    assert all(drops)


@pytest.mark.xfail(raises=GuardExceededError, strict=True,
                   reason="(Z/2)^4 has about 4.4e10 families; literal enumeration is out of reach")
def test_criterion_5_literal_enumeration_of_elementary_16():
    A = canonicalize(list(ELEMENTARY_16))
    assert _check_families(iter_families(A, limit=10000)) == 0


def test_criterion_6_kuhn_threshold(acceptance_line):
    bad, cases = 0, 0
    for A in two_groups(16):
        if A.order == 1:
            continue
        c = cork(proper_family(A), 2)
        for n in range(1, 7):
            cases += 1
            bad += kuhn_threshold(A, 2, n) != max(n - c, 0)
    acceptance_line(6, bad == 0, f"{cases} cases over nontrivial 2-groups of order <= 16, {bad} mismatches (exact)")
    assert bad == 0


def test_criterion_7_subgroup_counts(acceptance_line):
    t0 = time.perf_counter()
    bad = [n for n in range(1, 101) if len(subgroups(canonicalize([n] if n > 1 else []))) != divisor_count(n)]
    for p, n in itertools.product([2, 3], [1, 2, 3]):
        if len(subgroups(canonicalize([p] * n))) != elementary_subgroup_count(n, p):
            bad.append((p, n))
    v8 = len(subgroups(grp(2, 2, 2)))
    elapsed = time.perf_counter() - t0
    passed = not bad and v8 == 16 and elapsed < 5
    acceptance_line(7, passed, f"Z/n for n <= 100 and (Z/p)^n for p in {{2,3}}, n <= 3; "
                               f"(Z/2)^3 has {v8}; {len(bad)} mismatches; {elapsed:.2f}s < 5s")
    assert not bad and v8 == 16
    assert elapsed < 5


HEIGHTS = [1, 2, 3, INF]


def test_criterion_8_consistency(acceptance_line):
    triples, bad = 0, 0
    for order in range(1, 25):
        for G in abelian_groups_of_order(order):
            subs = subgroups(G)
            for p in (2, 3, 5):
                for top in subs:
                    inner = [S for S in subs if contains(top, S)]
                    rel = {S: relative_subgroup(top, S) for S in inner}
                    for B, C in itertools.product(inner, repeat=2):
                        triples += 1
                        for n, m in itertools.product(HEIGHTS, repeat=2):
                            a = includes(SpectrumPoint(B, p, n), SpectrumPoint(C, p, m))
                            bad += a != includes(SpectrumPoint(rel[B], p, n), SpectrumPoint(rel[C], p, m))
                            if contains(C, B):
                                Q = quotient_type(C, B)
                                bad += a != includes(SpectrumPoint(Q.trivial(), p, n), SpectrumPoint(Q.full(), p, m))
    acceptance_line(8, bad == 0, f"{triples} triples (A'', A', B) over all groups of order <= 24, "
                                 f"p in {{2,3,5}}, heights {{1,2,3,inf}}; {bad} mismatches (exact)")
    assert bad == 0


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
