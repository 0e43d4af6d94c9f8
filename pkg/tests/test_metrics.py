import numpy as np
import pytest
from hypothesis import given, strategies as st

from sks_homography.errors import EmptyInput
from sks_homography.geometry import Homography3, SquareConfig, apply_many
from sks_homography.metrics import ace_ao, ace_po, angular_offsets_of, evaluate, quartile_summary
from sks_homography.similarity import SimilarityParams, lift_similarity
from sks_homography.sks import compose_sks

from conftest import params8, random_params8
from oracles import geometric_angular_offsets


def test_identical_is_zero(rng, cfg128):
    for _ in range(20):
        h = compose_sks(random_params8(rng), cfg128)
        r = evaluate(h, h, cfg128)
        assert r.ace_po == 0.0 and r.ace_ao == 0.0


def test_translation_distance(cfg128):
    t = Homography3.translation(3, 4)
    assert ace_po(t, Homography3.identity(), cfg128) == pytest.approx(5.0, abs=1e-12)


@given(params8(), params8())
def test_ace_po_matches_corner_oracle(p, q):
    cfg = SquareConfig.for_image(128)
    a, b = compose_sks(p, cfg), compose_sks(q, cfg)
    c = cfg.corner_array()
    expected = np.mean(np.linalg.norm(apply_many(a, c) - apply_many(b, c), axis=1))
    assert ace_po(a, b, cfg) == pytest.approx(expected, rel=1e-12, abs=1e-12)


@given(params8())
def test_angular_offsets_match_geometry(p):
    cfg = SquareConfig.for_image(128)
    np.testing.assert_allclose(angular_offsets_of(compose_sks(p, cfg), cfg), geometric_angular_offsets(p.ker), atol=1e-9)


@given(params8(), params8())
def test_ace_ao_ignores_outer_similarity(p, q):
    cfg = SquareConfig.for_image(128)
    s = lift_similarity(SimilarityParams(0.2, -0.1, 5, 7), cfg)
    a, b = compose_sks(p, cfg), compose_sks(q, cfg)
    sa = Homography3(s.m @ a.m)
    assert ace_ao(sa, b, cfg) == pytest.approx(ace_ao(a, b, cfg), abs=1e-9)


def test_quartile_examples():
    assert tuple(quartile_summary([1, 2, 3, 4, 5])) == (1, 2, 3, 4, 5)
    assert tuple(quartile_summary([7.0])) == (7.0,) * 5
    assert quartile_summary([1, 2, 3, 4]).median == 2.5
    assert quartile_summary([1, 2]).to_json() == {"min": 1, "q1": 1.25, "median": 1.5, "q3": 1.75, "max": 2}


@given(st.lists(st.floats(-1e6, 1e6), min_size=1, max_size=50), st.randoms())
def test_quartiles_permutation_invariant(values, rnd):
    shuffled = list(values)
    rnd.shuffle(shuffled)
    assert quartile_summary(values) == quartile_summary(shuffled)
    q = quartile_summary(values)
    assert q.min <= q.q1 <= q.median <= q.q3 <= q.max


def test_quartiles_empty():
    with pytest.raises(EmptyInput):
        quartile_summary([])
