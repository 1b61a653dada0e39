import itertools
import random
from fractions import Fraction

import pytest

from corematch import matching, model, oracle
from corematch.matching import (
    MatchingResult,
    NoPerfectMatchingError,
    b_matching_value,
    build_gadget,
    max_weight_b_matching,
    max_weight_matching,
    min_weight_perfect_matching,
    nu,
)
from corematch.model import random_instance


def enumerate_matchings(n, edges):
    """Every matching as a set of edge indices (independent check)."""
    out = [set()]
    for size in range(1, n // 2 + 1):
        for combo in itertools.combinations(range(len(edges)), size):
            used = set()
            ok = True
            for i in combo:
                u, v = edges[i]
                if u in used or v in used:
                    ok = False
                    break
                used |= {u, v}
            if ok:
                out.append(set(combo))
    return out


def best_matching_weight(n, edges, weights):
    return max(
        sum((Fraction(weights[i]) for i in m), Fraction(0))
        for m in enumerate_matchings(n, edges)
    )


def test_single_edge():
    r = max_weight_matching([0, 1], [(0, 1)], [Fraction(5)])
    assert r == MatchingResult(edges=(0,), weight=Fraction(5))


def test_path_prefers_outer_edges():
    # a-b-c-d weights 3,5,3: the two outer edges beat the middle one (6 > 5)
    r = max_weight_matching(range(4), [(0, 1), (1, 2), (2, 3)], [3, 5, 3])
    assert r.edges == (0, 2) and r.weight == 6


def test_triangle():
    r = max_weight_matching(range(3), [(0, 1), (1, 2), (0, 2)], [5, 4, 3])
    assert r.weight == 5 and r.edges == (0,)


def test_negative_edges_never_selected():
    r = max_weight_matching(range(4), [(0, 1), (2, 3)], [Fraction(3), Fraction(-2)])
    assert r.edges == (0,)


def test_lexicographic_tie_break():
    # two disjoint equal-weight choices: lexicographically smaller index wins
    r = max_weight_matching(range(4), [(0, 1), (2, 3), (0, 2)], [2, 1, 3])
    assert r.weight == 3
    assert r.edges == (0, 1)  # 2+1 ties with 3; {0,1} < {2}


def test_zero_weight_edge_prefers_shorter_set():
    # {0} and {0,1} both weigh 5; the prefix {0} is lexicographically smaller
    r = max_weight_matching(range(4), [(0, 1), (2, 3)], [Fraction(5), Fraction(0)])
    assert r.edges == (0,)


def test_matching_matches_enumeration_random():
    rng = random.Random(42)
    for _ in range(40):
        n = rng.randint(2, 7)
        pairs = list(itertools.combinations(range(n), 2))
        edges = [e for e in pairs if rng.random() < 0.6]
        weights = [Fraction(rng.randint(-3, 9)) for _ in edges]
        got = max_weight_matching(range(n), edges, weights)
        assert got.weight == best_matching_weight(n, edges, weights)
        used = set()
        for i in got.edges:
            u, v = edges[i]
            assert u not in used and v not in used
            used |= {u, v}
        assert got.weight == sum((weights[i] for i in got.edges), Fraction(0))


def test_min_perfect_single_edge():
    r = min_weight_perfect_matching([0, 1], [(0, 1)], [Fraction(4)])
    assert r.edges == (0,) and r.weight == 4


def test_min_perfect_k4_uniform():
    edges = list(itertools.combinations(range(4), 2))
    r = min_weight_perfect_matching(range(4), edges, [1] * 6)
    assert r.weight == 2 and len(r.edges) == 2


def test_min_perfect_k4_structured():
    edges = [(0, 1), (2, 3), (0, 2), (0, 3), (1, 2), (1, 3)]
    weights = [1, 1, 10, 10, 10, 10]
    r = min_weight_perfect_matching(range(4), edges, weights)
    assert r.edges == (0, 1) and r.weight == 2


def test_min_perfect_requires_perfect():
    with pytest.raises(NoPerfectMatchingError):
        min_weight_perfect_matching(range(3), [(0, 1)], [1])
    with pytest.raises(NoPerfectMatchingError):
        min_weight_perfect_matching(range(4), [(0, 1)], [1])


def test_min_perfect_matches_enumeration_random():
    rng = random.Random(7)
    checked = 0
    while checked < 25:
        n = rng.choice([2, 4, 6])
        pairs = list(itertools.combinations(range(n), 2))
        edges = [e for e in pairs if rng.random() < 0.7]
        weights = [Fraction(rng.randint(-5, 9)) for _ in edges]
        perfect = [
            m
            for m in enumerate_matchings(n, edges)
            if len(m) == n // 2
        ]
        if not perfect:
            with pytest.raises(NoPerfectMatchingError):
                min_weight_perfect_matching(range(n), edges, weights)
            continue
        want = min(
            sum((weights[i] for i in m), Fraction(0)) for m in perfect
        )
        got = min_weight_perfect_matching(range(n), edges, weights)
        assert got.weight == want
        assert len(got.edges) == n // 2
        checked += 1


def test_b_matching_counterexample_instance():
    inst = model.parse_instance(
        "game 5 4\nvertex 0 1\nvertex 1 1\nvertex 2 2\nvertex 3 2\nvertex 4 1\n"
        "edge 0 2 1\nedge 1 2 1\nedge 2 3 10\nedge 3 4 1\n"
    )
    r = max_weight_b_matching(inst)
    assert r.weight == 12
    # tie with {1,2,3} broken toward the lexicographically smaller index set
    assert r.edges == (0, 2, 3)


def test_b_matching_four_cycle_all_edges():
    inst = model.parse_instance(
        "game 4 4\nvertex 0 2\nvertex 1 2\nvertex 2 2\nvertex 3 2\n"
        "edge 0 1 1\nedge 1 2 1\nedge 2 3 1\nedge 3 0 1\n"
    )
    r = max_weight_b_matching(inst)
    assert r.edges == (0, 1, 2, 3) and r.weight == 4


def test_b_matching_single_vertex():
    inst = model.parse_instance("game 1 0\nvertex 0 2\n")
    assert max_weight_b_matching(inst) == MatchingResult(edges=(), weight=Fraction(0))


def test_nu_examples():
    inst = model.parse_instance(
        "game 5 4\nvertex 0 1\nvertex 1 1\nvertex 2 2\nvertex 3 2\nvertex 4 1\n"
        "edge 0 2 1\nedge 1 2 1\nedge 2 3 10\nedge 3 4 1\n"
    )
    assert nu(inst, range(5)) == 12
    assert nu(inst, [2, 3, 4]) == 11
    for v in range(5):
        assert nu(inst, [v]) == 0


def test_nu_rejects_unknown_vertices():
    inst = model.parse_instance("game 1 0\nvertex 0 1\n")
    with pytest.raises(ValueError):
        nu(inst, [0, 5])


def test_gadget_identity_property():
    rng = random.Random(11)
    for _ in range(30):
        inst = random_instance(rng.randint(0, 10**6), rng.randint(1, 6), Fraction(1, 2), 10)
        vertices, edges, weights = build_gadget(inst)
        gstar = max_weight_matching(vertices, edges, weights)
        assert gstar.weight == inst.total_weight() + b_matching_value(inst)


def test_nu_equals_bruteforce_all_coalitions():
    rng = random.Random(5)
    sizes = [rng.randint(1, 6) for _ in range(12)] + [7, 7, 7]
    for n in sizes:
        inst = random_instance(rng.randint(0, 10**6), n, Fraction(1, 2), 10)
        for size in range(1, inst.n + 1):
            for S in itertools.combinations(range(inst.n), size):
                assert nu(inst, S) == oracle.nu_bruteforce(inst, S)


def test_nu_monotone():
    rng = random.Random(13)
    for _ in range(15):
        inst = random_instance(rng.randint(0, 10**6), rng.randint(2, 7), Fraction(1, 2), 10)
        S = [v for v in range(inst.n) if rng.random() < 0.5]
        T = sorted(set(S) | {rng.randrange(inst.n)})
        if not S:
            continue
        assert nu(inst, S) <= nu(inst, T)


def lex_min_optimal(candidates, weights, sense):
    """Ground truth for the tie-break: among optimal-weight candidate sets,
    the lexicographically smallest sorted index tuple."""
    scored = [
        (sum((Fraction(weights[i]) for i in c), Fraction(0)), tuple(sorted(c)))
        for c in candidates
    ]
    best = max(s for s, _ in scored) if sense == "max" else min(s for s, _ in scored)
    return min(t for s, t in scored if s == best)


def test_max_matching_tie_break_is_lex_min():
    rng = random.Random(271)
    for _ in range(60):
        n = rng.randint(2, 6)
        pairs = list(itertools.combinations(range(n), 2))
        edges = [e for e in pairs if rng.random() < 0.7]
        if not edges:
            continue
        # tiny weight range forces many ties
        weights = [Fraction(rng.randint(0, 2)) for _ in edges]
        got = max_weight_matching(range(n), edges, weights)
        want = lex_min_optimal(enumerate_matchings(n, edges), weights, "max")
        assert got.edges == want


def test_min_perfect_tie_break_is_lex_min():
    rng = random.Random(272)
    checked = 0
    while checked < 30:
        n = rng.choice([2, 4, 6])
        pairs = list(itertools.combinations(range(n), 2))
        edges = [e for e in pairs if rng.random() < 0.8]
        weights = [Fraction(rng.randint(0, 2)) for _ in edges]
        perfect = [m for m in enumerate_matchings(n, edges) if len(m) == n // 2]
        if not perfect:
            continue
        got = min_weight_perfect_matching(range(n), edges, weights)
        want = lex_min_optimal(perfect, weights, "min")
        assert got.edges == want
        checked += 1


def test_b_matching_tie_break_is_lex_min():
    rng = random.Random(273)
    for _ in range(40):
        inst = random_instance(rng.randint(0, 10**6), rng.randint(1, 5), Fraction(3, 5), 2)
        if inst.m > 12:
            continue
        feasible = []
        for mask in range(1 << inst.m):
            deg = [0] * inst.n
            ok = True
            for i in range(inst.m):
                if mask >> i & 1:
                    deg[inst.edges[i].u] += 1
                    deg[inst.edges[i].v] += 1
            ok = all(deg[v] <= inst.b[v] for v in range(inst.n))
            if ok:
                feasible.append({i for i in range(inst.m) if mask >> i & 1})
        got = max_weight_b_matching(inst)
        want = lex_min_optimal(feasible, [e.w for e in inst.edges], "max")
        assert got.edges == want


def test_b_matching_decomposes_into_paths_and_cycles():
    rng = random.Random(17)
    for _ in range(15):
        inst = random_instance(rng.randint(0, 10**6), rng.randint(1, 7), Fraction(1, 2), 10)
        r = max_weight_b_matching(inst)
        deg = [0] * inst.n
        for i in r.edges:
            deg[inst.edges[i].u] += 1
            deg[inst.edges[i].v] += 1
        for v in range(inst.n):
            assert deg[v] <= inst.b[v] <= 2
