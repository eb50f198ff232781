import itertools

from cirquent.corpus import (
    RANDOM_SPEC, CorpusSpec, exhaustive, random_corpus, within_limits,
)
from cirquent.syntax import children, cluster_kinds, free_vars, parse, to_text


def height(c):
    return 1 + max((height(kid) for _, kid in children(c)), default=0)


def test_height_one_corpus_is_the_literals():
    got = {to_text(c) for c in exhaustive(CorpusSpec(max_height=1))}
    assert got == {"T", "F", "q", "~q", "p(0)", "~p(0)", "p(1)", "~p(1)"}


def test_height_two_count():
    # 8 literals; 8*8 pairs under four binary operators; quantified bodies
    # range over the 10 literals with x (8 + p(x), ~p(x)) under two quantifiers
    assert sum(1 for _ in exhaustive(CorpusSpec(max_height=2))) == 8 + 4 * 64 + 2 * 10


def test_exhaustive_corpus_size():
    # 284 closed height-2 instances, 430 with x free: 8 + 4 * 284**2 + 2 * 430
    assert sum(1 for _ in exhaustive(CorpusSpec())) == 323_492


def test_exhaustive_instances_are_closed_and_small():
    for c in itertools.islice(exhaustive(CorpusSpec()), 0, None, 997):
        assert not free_vars(c)
        assert height(c) <= 3
        assert len(cluster_kinds(c)) <= 4
        assert within_limits(c)


def test_exhaustive_order_is_fixed():
    first = list(itertools.islice(exhaustive(CorpusSpec()), 50))
    assert list(itertools.islice(exhaustive(CorpusSpec()), 50)) == first


def test_random_corpus_is_seeded():
    a = random_corpus(count=50, seed=3)
    assert random_corpus(count=50, seed=3) == a
    assert random_corpus(count=50, seed=4) != a


def test_random_corpus_respects_limits():
    for c in random_corpus(count=200, seed=0):
        assert not free_vars(c)
        assert within_limits(c)
        assert parse(to_text(c)) == c


def test_spec_serializes():
    d = RANDOM_SPEC.to_dict()
    assert d["max_height"] == 5 and d["clusters"]["chand"] == ["a", "e"]
