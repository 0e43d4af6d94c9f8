import json

import numpy as np
import pytest
from scipy import stats

from sks_homography.affine import TransformClass, classify
from sks_homography.datagen import (
    PerturbationSpec,
    Regime,
    Sample,
    gen_affine,
    gen_projective,
    gen_similarity,
    generate,
    generate_one,
    read_dataset,
    write_dataset,
)
from sks_homography.errors import SchemaError
from sks_homography.geometry import Homography3, projective_distance


def test_tiny_offsets_give_identity():
    s = generate_one(PerturbationSpec(max_offset=1e-9), 0)
    assert projective_distance(s.gt_homography, Homography3.identity()) < 1e-8


@pytest.mark.parametrize("regime", list(Regime))
def test_deterministic_and_subset_reproducible(regime):
    spec = PerturbationSpec(regime=regime, count=20, seed=42)
    a, b = generate(spec), generate(spec)
    assert [s.to_json() for s in a] == [s.to_json() for s in b]
    assert generate_one(spec, 13).to_json() == a[13].to_json()
    other = generate(PerturbationSpec(regime=regime, count=20, seed=43))
    assert other[0].to_json() != a[0].to_json()


def test_projective_offsets_uniform():
    n = 2000
    samples = generate(PerturbationSpec(count=n, seed=1))
    offs = np.array([s.correspondences.dst - s.correspondences.src for s in samples]).reshape(n, 8)
    crit = stats.kstwo.ppf(0.99, n)
    for col in offs.T:
        assert stats.kstest(col, stats.uniform(-32, 64).cdf).statistic < crit
    assert np.abs(offs).max() <= 32


def test_similarity_regime():
    for s in gen_similarity(PerturbationSpec(regime="similarity", count=50, seed=3)):
        assert s.gt_params.ker.as_array().tolist() == [0.0] * 4
        assert classify(s.gt_params.ker) is TransformClass.SIMILARITY
        off = s.correspondences.dst - s.correspondences.src
        assert np.abs(off[:2]).max() <= 32


def test_affine_regime():
    for s in gen_affine(PerturbationSpec(regime="affine", count=50, seed=4)):
        assert classify(s.gt_params.ker, 1e-6, 1e-6) is not TransformClass.PROJECTIVE
        d = s.correspondences.dst
        # parallelogram: diagonals M-N and P-Q share a midpoint
        np.testing.assert_allclose(d[0] + d[1], d[2] + d[3], atol=1e-9)


def test_projective_targets_consistent():
    for s in gen_projective(PerturbationSpec(count=30, seed=5)):
        s.check()


def test_regime_mismatch():
    with pytest.raises(SchemaError):
        gen_affine(PerturbationSpec(count=1))


def test_spec_validation():
    with pytest.raises(SchemaError):
        PerturbationSpec(max_offset=0)
    with pytest.raises(SchemaError):
        PerturbationSpec(max_offset=64)
    with pytest.raises(SchemaError):
        PerturbationSpec(count=0)
    with pytest.raises(ValueError):
        PerturbationSpec(regime="shear")


def test_write_read_roundtrip(tmp_path):
    samples = generate(PerturbationSpec(count=100, seed=9))
    path = tmp_path / "d.jsonl"
    write_dataset(samples, path)
    back = read_dataset(path)
    assert [s.to_json() for s in back] == [s.to_json() for s in samples]
    assert all(isinstance(s, Sample) for s in back)


def test_read_errors(tmp_path):
    path = tmp_path / "d.jsonl"
    good = json.dumps(generate_one(PerturbationSpec(), 0).to_json())
    path.write_text(good + "\n{not json\n")
    with pytest.raises(SchemaError, match=":2:"):
        read_dataset(path)
    path.write_text(good + '\n{"cfg": 1}\n')
    with pytest.raises(SchemaError, match=":2"):
        read_dataset(path)
    path.write_text("")
    assert read_dataset(path) == []
