import pytest
from hypothesis import given
from hypothesis import strategies as st

from expertnet.core import (
    ModelConfig,
    Query,
    candidate_set,
    dominates,
    expertise_distance,
    is_local_contact,
    l1_norm,
)
from expertnet.models import build_diversified, build_unified


def test_l1_norm():
    assert l1_norm([0, 0]) == 0
    assert l1_norm([3, 1]) == 4
    assert l1_norm([2, 2, 2]) == 6


def test_expertise_distance():
    assert expertise_distance([0, 0], [3, 1]) == 4
    assert expertise_distance([3, 1], [0, 0]) == 0
    assert expertise_distance([2, 3], [4, 1]) == 2
    assert expertise_distance([5, 7], [5, 7]) == 0


def test_expertise_distance_length_mismatch():
    with pytest.raises(ValueError):
        expertise_distance([1, 2], [1, 2, 3])


def test_is_local_contact():
    assert is_local_contact([3, 56], [4, 55], 2)
    assert not is_local_contact([1, 1], [2, 2], 1)
    assert is_local_contact([7, 7], [7, 7], 1)


vectors = st.lists(st.integers(min_value=0, max_value=20), min_size=1, max_size=5)
vector_pairs = st.integers(min_value=1, max_value=5).flatmap(
    lambda m: st.tuples(
        st.lists(st.integers(0, 20), min_size=m, max_size=m),
        st.lists(st.integers(0, 20), min_size=m, max_size=m),
    )
)


@given(vector_pairs)
def test_distance_decomposes_l1(pair):
    u, w = pair
    l1_diff = sum(abs(a - b) for a, b in zip(u, w))
    assert expertise_distance(u, w) + expertise_distance(w, u) == l1_diff


@given(vector_pairs)
def test_distance_zero_iff_dominated(pair):
    u, w = pair
    assert (expertise_distance(u, w) == 0) == dominates(u, w)


@given(vector_pairs, st.integers(min_value=0, max_value=10))
def test_is_local_contact_symmetric(pair, delta):
    u, w = pair
    assert is_local_contact(u, w, delta) == is_local_contact(w, u, delta)


def test_candidate_set_diversified_top_and_bottom():
    net = build_diversified(2, 2, no_long_range=True)
    # ids: [1,1]=0, [2,1]=1, [1,2]=2, [2,2]=3
    assert candidate_set(3, net) == set()
    assert candidate_set(0, net) == {1, 2, 3}


def test_candidate_set_unified_matches_bruteforce():
    net = build_unified(8, 2, no_long_range=True)
    for u in range(net.n):
        expected = {
            w
            for w in range(net.n)
            if w != u and expertise_distance(net.experts[u], net.experts[w]) >= 1
        }
        assert candidate_set(u, net) == expected
    # column 0 (vector [0,3]) sees everyone in columns 1..3
    assert candidate_set(0, net) == {1, 2, 3, 5, 6, 7}


def test_candidate_iff_distance_at_least_one():
    net = build_diversified(3, 3, no_long_range=True)
    for u in range(net.n):
        cand = candidate_set(u, net)
        for w in range(net.n):
            if w == u:
                continue
            d = expertise_distance(net.experts[u], net.experts[w])
            assert (w in cand) == (d >= 1)


def test_model_config_validation():
    with pytest.raises(ValueError, match="divisible"):
        ModelConfig.unified(241, 4)
    with pytest.raises(ValueError, match="n/h"):
        ModelConfig.unified(4, 4)
    with pytest.raises(ValueError):
        ModelConfig.diversified(2, 1)
    with pytest.raises(ValueError):
        ModelConfig.unified(240, 4, k=0)
    with pytest.raises(ValueError):
        ModelConfig.unified(240, 4, r=-0.5)


def test_query_validation():
    with pytest.raises(ValueError):
        Query(0, 1)
    with pytest.raises(ValueError):
        Query(1, 0)


@pytest.mark.parametrize(
    "net",
    [build_unified(24, 2, no_long_range=True), build_diversified(2, 4, no_long_range=True)],
    ids=["unified", "diversified"],
)
def test_substrate_guarantees_progress(net):
    # whenever an expert is below the area maximum, some local contact is
    # strictly better in that area (termination premise of greedy search)
    skills = net.skill_matrix()
    for area in range(skills.shape[1]):
        area_max = skills[:, area].max()
        for u in range(net.n):
            if skills[u, area] < area_max:
                assert any(skills[w, area] > skills[u, area] for w in net.local_contacts[u])


def test_local_contacts_symmetric_and_within_delta():
    for net in (build_unified(24, 3, no_long_range=True), build_diversified(3, 3, no_long_range=True)):
        delta = net.config.delta
        for u in range(net.n):
            for w in net.local_contacts[u]:
                assert w != u
                assert u in net.local_contacts[w]
                assert is_local_contact(net.experts[u], net.experts[w], delta)
