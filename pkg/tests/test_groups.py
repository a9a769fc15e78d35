import random
from fractions import Fraction

import pytest

from threedom.groups import (
    FreeProductData,
    OrderBoundExceeded,
    free_cover_rank,
    free_product_euler_characteristic,
    free_reduce,
    nielsen_schreier_rank,
    reidemeister_schreier_rank_oracle,
    stallings_fold,
    subgroup_index,
)


# ---------------------------------------------------------------------------
# Free-product Euler characteristics and kernel ranks
# ---------------------------------------------------------------------------

def test_euler_characteristic_values():
    assert free_product_euler_characteristic(FreeProductData(1)) == 0
    assert free_product_euler_characteristic(FreeProductData(0, (2,))) \
        == Fraction(1, 2)
    assert free_product_euler_characteristic(FreeProductData(0, (2, 2))) == 0


def test_free_cover_rank_anchored_cases():
    # RP^3 is double-covered by S^3
    assert free_cover_rank(FreeProductData(0, (2,))) == (0, 2)
    # RP^3 # RP^3 is 4-fold covered by S^2 x S^1
    assert free_cover_rank(FreeProductData(0, (2, 2))) == (1, 4)
    assert free_cover_rank(FreeProductData(1, (2,))) == (2, 2)
    # The Poincare sphere is covered by S^3
    assert free_cover_rank(FreeProductData(0, (120,))) == (0, 120)


def test_free_cover_rank_pure_free():
    for l in range(6):
        assert free_cover_rank(FreeProductData(l)) == (l, 1)


def test_nielsen_schreier():
    for n in range(2, 11):
        assert nielsen_schreier_rank(2, n - 1) == n
    assert nielsen_schreier_rank(1, 5) == 1
    assert nielsen_schreier_rank(3, 2) == 5


def test_nielsen_schreier_index_two_of_f3_by_folding():
    # Independent oracle for rank 5: an explicit index-2 subgroup of F(a,b,c),
    # generated by the Schreier generators of the mod-2 a-count homomorphism.
    graph = stallings_fold(["aa", "b", "c", "abA", "acA"], alphabet="abc")
    assert subgroup_index(graph) == 2
    assert graph.rank() == 5 == nielsen_schreier_rank(3, 2)


# ---------------------------------------------------------------------------
# Words and folding
# ---------------------------------------------------------------------------

def test_free_reduce():
    assert free_reduce("aA") == ""
    assert free_reduce("abBA") == ""
    assert free_reduce("abAB") == "abAB"
    with pytest.raises(ValueError):
        free_reduce("a b")


def test_fold_whole_group():
    g = stallings_fold(["a", "b"])
    assert g.vertex_count() == 1
    assert g.edge_count() == 2
    assert subgroup_index(g) == 1


def test_fold_index_two_subgroup():
    g = stallings_fold(["aa", "b", "abA"])
    assert g.vertex_count() == 2
    assert subgroup_index(g) == 2
    assert g.rank() == nielsen_schreier_rank(2, 2) == 3


def test_fold_commutator_infinite_index():
    g = stallings_fold(["abAB"], alphabet="ab")
    assert subgroup_index(g) is None


def test_fold_membership_reading():
    g = stallings_fold(["aa", "b", "abA"])
    assert g.reads("aa")
    assert g.reads("babAB")   # even a-count, so in the subgroup
    assert not g.reads("a")


def test_fold_empty_alphabet_rejected():
    with pytest.raises(ValueError, match="empty generator alphabet"):
        stallings_fold([])


def test_folding_confluence_randomized():
    rng = random.Random(20240819)
    letters = "abc"
    for _ in range(100):
        r = rng.randint(1, 3)
        alphabet = letters[:r]
        words = []
        for _ in range(rng.randint(1, 5)):
            w = "".join(
                rng.choice(alphabet + alphabet.upper())
                for _ in range(rng.randint(1, 8)))
            words.append(w)
        reference = stallings_fold(words, alphabet=alphabet)
        for seed in (1, 2):
            shuffled = stallings_fold(words, alphabet=alphabet,
                                      _rng=random.Random(seed))
            assert shuffled == reference


def _random_transitive_action(rng, rank, size):
    """Random transitive action of F_rank on `size` points, as permutations."""
    while True:
        perms = [list(rng.sample(range(size), size)) for _ in range(rank)]
        seen = {0}
        frontier = [0]
        while frontier:
            v = frontier.pop()
            for p in perms:
                for w in (p[v], p.index(v)):
                    if w not in seen:
                        seen.add(w)
                        frontier.append(w)
        if len(seen) == size:
            return perms


def _schreier_generators(perms, rank, size):
    """Generators of the stabilizer of 0, via a breadth-first Schreier tree."""
    letters = "abcdefghij"[:rank]
    coset_word = {0: ""}
    frontier = [0]
    while frontier:
        v = frontier.pop(0)
        for i, p in enumerate(perms):
            w = p[v]
            if w not in coset_word:
                coset_word[w] = coset_word[v] + letters[i]
                frontier.append(w)
    words = []
    for v in range(size):
        for i, p in enumerate(perms):
            w = p[v]
            words.append(coset_word[v] + letters[i]
                         + coset_word[w][::-1].swapcase())
    return words, letters


def test_nielsen_schreier_via_folding_randomized():
    rng = random.Random(20240820)
    for _ in range(100):
        rank = rng.randint(1, 3)
        size = rng.randint(1, 6)
        perms = _random_transitive_action(rng, rank, size)
        words, letters = _schreier_generators(perms, rank, size)
        graph = stallings_fold(words, alphabet=letters)
        assert subgroup_index(graph) == size
        assert graph.rank() == nielsen_schreier_rank(rank, size)


# ---------------------------------------------------------------------------
# Brute-force rank oracle
# ---------------------------------------------------------------------------

def test_oracle_anchored_cases():
    assert reidemeister_schreier_rank_oracle(FreeProductData(0, (2,))) == 0
    assert reidemeister_schreier_rank_oracle(FreeProductData(0, (2, 2))) == 1
    assert reidemeister_schreier_rank_oracle(FreeProductData(2)) == 2


def test_oracle_matches_formula():
    def order_multisets(bound, smallest=2):
        yield ()
        q = smallest
        while q <= bound:
            for rest in order_multisets(bound // q, q):
                yield (q,) + rest
            q += 1

    for l in range(4):
        for orders in order_multisets(200):
            d = FreeProductData(l, orders)
            assert reidemeister_schreier_rank_oracle(d) \
                == free_cover_rank(d).rank


def test_oracle_bound():
    with pytest.raises(OrderBoundExceeded):
        reidemeister_schreier_rank_oracle(FreeProductData(0, (101, 101)),
                                          max_order=10_000)
