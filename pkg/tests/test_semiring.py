"""Semiring permutation problems: evaluators, families, linear extensions."""

from fractions import Fraction
from itertools import permutations
from math import factorial, inf

import pytest

from chainfold.constructions import core_prefix_system, powerset
from chainfold.cover import CoverFamily, greedy_prune, make_unique, random_cover
from chainfold.rng import SplitMix64
from chainfold.semiring import (
    COUNTING,
    MAX_TIMES,
    MIN_PLUS,
    PermutationProblem,
    Poset,
    _dp_over_masks,
    count_linear_extensions,
    count_linear_extensions_brute,
    dump_poset,
    evaluate_brute,
    evaluate_dp,
    evaluate_restricted,
    evaluate_unique,
    linear_extension_problem,
    load_poset,
    tsp_path_problem,
)
from chainfold.solver import random_instance
from chainfold.systems import FormatError


# --- semiring axioms ----------------------------------------------------------

def _samples(descriptor, gen, count):
    if descriptor is MIN_PLUS:
        pool = [inf, 0] + [gen.randbelow(200) - 100 for _ in range(count)]
    elif descriptor is COUNTING:
        pool = [0, 1] + [gen.randbelow(10**6) for _ in range(count)]
    else:
        pool = [Fraction(0), Fraction(1)] + [
            Fraction(gen.randbelow(99), gen.randbelow(99) + 1) for _ in range(count)
        ]
    return pool


@pytest.mark.parametrize("descriptor", [MIN_PLUS, COUNTING, MAX_TIMES])
def test_semiring_axioms(descriptor):
    gen = SplitMix64(13)
    pool = _samples(descriptor, gen, 30)
    add, mul, zero, one = descriptor.add, descriptor.mul, descriptor.zero, descriptor.one
    for _ in range(1000):
        a = pool[gen.randbelow(len(pool))]
        b = pool[gen.randbelow(len(pool))]
        c = pool[gen.randbelow(len(pool))]
        assert add(add(a, b), c) == add(a, add(b, c))
        assert add(a, b) == add(b, a)
        assert mul(mul(a, b), c) == mul(a, mul(b, c))
        assert mul(a, add(b, c)) == add(mul(a, b), mul(a, c))
        assert add(a, zero) == a
        assert mul(a, one) == a == mul(one, a)
        if descriptor.idempotent:
            assert add(a, a) == a


# --- brute and DP evaluation -----------------------------------------------------

def test_all_one_count_is_factorial():
    for n in (1, 3, 5):
        p = PermutationProblem(n, 0, lambda mask, tail: 1, COUNTING)
        assert evaluate_brute(p) == factorial(n)
        assert evaluate_dp(p) == factorial(n)


def test_all_identity_min_plus_is_zero():
    p = PermutationProblem(4, 0, lambda mask, tail: 0, MIN_PLUS)
    assert evaluate_brute(p) == 0
    assert evaluate_dp(p) == 0


def test_tsp_problem_is_min_hamiltonian_path():
    inst = random_instance(6, 17)
    problem = tsp_path_problem(inst)
    best = min(
        sum(inst.dist[a][b] for a, b in zip(p, p[1:]))
        for p in permutations(range(1, 7))
    )
    assert evaluate_brute(problem) == best
    assert evaluate_dp(problem) == best


def test_cyclic_tour_via_split_city_reduction():
    # the classic reduction: duplicate the anchor city as a forced endpoint,
    # so the cyclic optimum becomes a pure minimum-path permutation problem
    from chainfold.solver import held_karp

    inst = random_instance(6, 31)
    n = inst.n
    end = n + 1  # copy of city 1, must come last
    big = 10**9

    def dist(x, y):
        if x == end:
            return big
        return inst.dist[x][1] if y == end else inst.dist[x][y]

    def cost(mask, tail):
        if len(tail) == 1:
            return 0 if tail[0] == 1 else big
        x, y = tail
        w = dist(x, y)
        if bin(mask).count("1") == end and y != end:
            w += big
        return w

    p = PermutationProblem(end, 2, cost, MIN_PLUS)
    assert evaluate_dp(p) == held_karp(inst).value


def _random_problem(gen, n, degree, descriptor):
    table = {}

    def cost(mask, tail):
        key = (mask, tail)
        if key not in table:
            if descriptor is MIN_PLUS:
                table[key] = gen.randbelow(30)
            elif descriptor is COUNTING:
                table[key] = gen.randbelow(5)
            else:
                table[key] = Fraction(gen.randbelow(5), gen.randbelow(4) + 1)
        return table[key]

    return PermutationProblem(n, degree, cost, descriptor)


@pytest.mark.parametrize("descriptor", [MIN_PLUS, COUNTING, MAX_TIMES])
@pytest.mark.parametrize("degree", [0, 1, 2])
def test_dp_matches_brute_random_problems(descriptor, degree):
    gen = SplitMix64(degree * 101 + 7)
    for trial in range(4):
        n = 3 + gen.randbelow(4)
        p = _random_problem(gen, n, degree, descriptor)
        assert evaluate_dp(p) == evaluate_brute(p)


@pytest.mark.parametrize("descriptor", [MIN_PLUS, COUNTING, MAX_TIMES])
def test_dp_matches_brute_at_cap_size(descriptor):
    gen = SplitMix64(42)
    p = _random_problem(gen, 8, 2, descriptor)
    assert evaluate_dp(p) == evaluate_brute(p)


def test_degree_zero_prefix_size_closed_form():
    n = 5
    weights = [0, 2, 3, 1, 4, 2]  # weight by prefix size 1..n

    def cost(mask, tail):
        return weights[bin(mask).count("1")]

    p = PermutationProblem(n, 0, cost, COUNTING)
    product = 1
    for w in weights[1:]:
        product *= w
    assert evaluate_dp(p) == factorial(n) * product


def test_single_element_problem():
    p = PermutationProblem(1, 2, lambda mask, tail: 7 if tail == (1,) else 0, COUNTING)
    assert evaluate_brute(p) == 7
    assert evaluate_dp(p) == 7


def test_degree_cap():
    with pytest.raises(ValueError):
        PermutationProblem(4, 4, lambda mask, tail: 1, COUNTING)


# --- restricted and unique evaluation ------------------------------------------------

def test_restricted_tsp_with_cover_matches_dp():
    inst = random_instance(5, 23)
    problem = tsp_path_problem(inst)
    fam = greedy_prune(random_cover(core_prefix_system(5, 0.8, 0.4), seed=2, max_tries=500))
    assert evaluate_restricted(problem, fam) == evaluate_dp(problem)


def test_restricted_with_powerset_member_trivial():
    inst = random_instance(4, 3)
    problem = tsp_path_problem(inst)
    fam = CoverFamily(powerset(4), ((1, 2, 3, 4),))
    assert evaluate_restricted(problem, fam) == evaluate_dp(problem)


def test_restricted_absorbs_supportless_member():
    inst = random_instance(4, 5)
    problem = tsp_path_problem(inst)
    # second member supports nothing after losing the empty set
    fam = CoverFamily(
        powerset(4),
        ((1, 2, 3, 4), (1, 2, 3, 4)),
        unique_mode=True,
        removed=((), (0,)),
    )
    assert evaluate_unique(problem, fam) == evaluate_dp(problem)


def test_restricted_refuses_non_idempotent():
    fam = CoverFamily(powerset(3), ((1, 2, 3),))
    p = PermutationProblem(3, 0, lambda mask, tail: 1, COUNTING)
    with pytest.raises(ValueError):
        evaluate_restricted(p, fam)


def test_overlap_hazard_is_real():
    # two identical powerset members: every permutation is counted twice
    fam = CoverFamily(powerset(3), ((1, 2, 3), (1, 2, 3)))
    p = PermutationProblem(3, 0, lambda mask, tail: 1, COUNTING)
    member_sum = sum(_dp_over_masks(p, g.mask_set()) for g in fam.systems())
    assert member_sum == 12 > evaluate_dp(p) == 6


def test_unique_counting_gives_factorial():
    base = core_prefix_system(5, 0.8, 0.4)
    fam = make_unique(greedy_prune(random_cover(base, seed=3, max_tries=500)))
    p = PermutationProblem(5, 0, lambda mask, tail: 1, COUNTING)
    assert evaluate_unique(p, fam) == factorial(5)


def test_unique_powerset_family_matches_dp():
    fam = CoverFamily(powerset(4), ((1, 2, 3, 4),), unique_mode=True, removed=((),))
    gen = SplitMix64(8)
    p = _random_problem(gen, 4, 2, COUNTING)
    assert evaluate_unique(p, fam) == evaluate_dp(p)


def test_unique_requires_unique_mode():
    fam = CoverFamily(powerset(4), ((1, 2, 3, 4),))
    p = PermutationProblem(4, 0, lambda mask, tail: 1, COUNTING)
    with pytest.raises(ValueError):
        evaluate_unique(p, fam)


def test_le_on_random_poset_with_unique_family():
    base = core_prefix_system(6, 2 / 3, 1 / 3)
    fam = make_unique(greedy_prune(random_cover(base, seed=11, max_tries=2000)))
    poset = Poset.from_relations(6, [(1, 4), (2, 4), (4, 6), (3, 5)])
    problem = linear_extension_problem(poset)
    assert evaluate_unique(problem, fam) == evaluate_brute(problem)
    assert evaluate_brute(problem) == count_linear_extensions_brute(poset)


# --- linear extensions -----------------------------------------------------------------

def test_antichain_and_total_order():
    assert count_linear_extensions(Poset.from_relations(3, [])) == 6
    chain = Poset.from_relations(6, [(i, i + 1) for i in range(1, 6)])
    assert count_linear_extensions(chain) == 1


def test_random_posets_match_brute():
    gen = SplitMix64(21)
    checked = 0
    while checked < 30:
        n = 3 + gen.randbelow(5)
        rels = [
            (a + 1, b + 1)
            for a in range(n)
            for b in range(n)
            if a != b and gen.randbelow(4) == 0
        ]
        try:
            poset = Poset.from_relations(n, rels)
        except ValueError:
            continue
        checked += 1
        assert count_linear_extensions(poset) == count_linear_extensions_brute(poset)


def test_transitive_closure_and_cycle_rejection():
    poset = Poset.from_relations(4, [(1, 2), (2, 3)])
    assert poset.precedes(1, 3)
    with pytest.raises(ValueError):
        Poset.from_relations(3, [(1, 2), (2, 3), (3, 1)])


def test_poset_file_roundtrip(tmp_path):
    poset = Poset.from_relations(5, [(1, 3), (2, 3), (3, 5)])
    path = tmp_path / "p.po"
    dump_poset(poset, path)
    assert load_poset(path) == poset


def test_poset_file_rejects(tmp_path):
    path = tmp_path / "bad.po"
    path.write_text("n 3\n1 precedes 2\n")
    with pytest.raises(FormatError):
        load_poset(path)
    path.write_text("n 3\n1 < 2\n2 < 1\n")
    with pytest.raises(FormatError):
        load_poset(path)
