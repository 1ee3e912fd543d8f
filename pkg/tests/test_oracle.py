from fractions import Fraction as F

import numpy as np
import pytest
from scipy import stats

from qcohom.errors import ConfigurationError, StructuralError
from qcohom.oracle import (
    MAX_SAMPLES,
    Histogram,
    SampleConfig,
    compare_density,
    is_monotone_decreasing,
    ring_profile,
    sample_marginals,
    sample_points,
    sample_slice,
    slice_walls,
)
from qcohom.action import build_weight_matrix
from qcohom.residues import dh_density
from qcohom.walls import enumerate_walls


class EmpiricalDensity:
    """Piecewise-constant density read back from a histogram."""

    def __init__(self, h):
        self.r, self.h, self.is_normalized = h.r, h, True
        self.dens = h.density()

    def __call__(self, point):
        idx = tuple(min(int((float(x) + 1) * self.h.bins / 2), self.h.bins - 1) for x in point)
        return self.dens[idx]


class TestSampler:
    def test_one_qubit_is_uniform(self):
        pts = sample_points(SampleConfig(1, 50_000, seed=7))[:, 0]
        assert stats.kstest(pts, "uniform", args=(-1, 2)).pvalue > 1e-3

    def test_points_lie_in_the_cube(self):
        pts = sample_points(SampleConfig(3, 20_000))
        assert np.all(np.abs(pts) <= 1)

    @pytest.mark.parametrize("r", [2, 3])
    def test_means_vanish(self, r):
        pts = sample_points(SampleConfig(r, 100_000, seed=3))
        se = pts.std(axis=0) / np.sqrt(len(pts))
        assert np.all(np.abs(pts.mean(axis=0)) < 4 * se)

    def test_reflection_symmetry(self):
        pts = sample_points(SampleConfig(2, 40_000, seed=11))
        a, b = pts[:20_000, 0], -pts[20_000:, 0]
        assert stats.ks_2samp(a, b).pvalue > 1e-3

    def test_thread_count_does_not_change_counts(self):
        base = sample_marginals(SampleConfig(2, 200_000, threads=1))
        for t in (2, 5):
            assert np.array_equal(sample_marginals(SampleConfig(2, 200_000, threads=t)).counts, base.counts)

    def test_seed_changes_counts(self):
        a = sample_marginals(SampleConfig(2, 50_000, seed=1))
        b = sample_marginals(SampleConfig(2, 50_000, seed=2))
        assert not np.array_equal(a.counts, b.counts)

    def test_counts_sum_to_samples(self):
        h = sample_marginals(SampleConfig(3, 70_001, bins=10))
        assert h.counts.sum() == 70_001 and h.counts.shape == (10, 10, 10)

    def test_marginal_means_near_zero(self):
        h = sample_marginals(SampleConfig(2, 100_000))
        assert np.all(np.abs(h.means()) < 0.01)


class TestConfig:
    def test_sample_cap(self):
        with pytest.raises(ConfigurationError):
            SampleConfig(2, MAX_SAMPLES + 1)

    @pytest.mark.parametrize("kw", [{"r": 0}, {"r": 7}, {"samples": 0}, {"bins": 2}, {"threads": 0}, {"seed": -1}])
    def test_invalid(self, kw):
        args = {"r": 2, "samples": 1000}
        args.update(kw)
        with pytest.raises(ConfigurationError):
            SampleConfig(**args)

    def test_default_band_is_one_bin(self):
        assert SampleConfig(2, 1000, bins=25).wall_band == F(1, 25)

    def test_slice_needs_two_axes(self):
        with pytest.raises(ConfigurationError):
            sample_slice(SampleConfig(1, 1000))


class TestComparison:
    def test_self_comparison_has_zero_residuals(self):
        h = sample_marginals(SampleConfig(2, 50_000))
        rep = compare_density(h, EmpiricalDensity(h))
        assert rep.linf == 0 and rep.l2 == 0 and rep.passed

    def test_axis_mismatch(self):
        h = sample_marginals(SampleConfig(2, 20_000))
        with pytest.raises(StructuralError):
            compare_density(h, dh_density(3, normalize=True))

    def test_unnormalized_density_rejected(self):
        h = sample_marginals(SampleConfig(2, 20_000))
        with pytest.raises(StructuralError):
            compare_density(h, dh_density(2))

    def test_too_few_samples(self):
        h = sample_marginals(SampleConfig(2, 5_000))
        with pytest.raises(ConfigurationError):
            compare_density(h, dh_density(2, normalize=True))

    def test_unknown_metric(self):
        h = sample_marginals(SampleConfig(2, 20_000))
        with pytest.raises(ConfigurationError):
            compare_density(h, dh_density(2, normalize=True), metric="l1")

    def test_walls_are_masked(self):
        h = sample_marginals(SampleConfig(2, 20_000))
        rep = compare_density(h, dh_density(2, normalize=True))
        # the two diagonals and the edges remove a band of cells
        assert 0 < rep.cells < h.bins ** 2
        assert not rep.mask[0, 0] and not rep.mask[5, 5]

    def test_wider_band_compares_fewer_cells(self):
        h = sample_marginals(SampleConfig(2, 20_000))
        dens = dh_density(2, normalize=True)
        assert compare_density(h, dens, band=0.2).cells < compare_density(h, dens).cells

    def test_report_json(self):
        h = sample_marginals(SampleConfig(2, 20_000))
        data = compare_density(h, dh_density(2, normalize=True)).to_json(with_cells=True)
        assert set(data) >= {"linf", "l2", "cells_compared", "pass", "residuals"}


class TestSlice:
    def test_slice_walls_drop_the_sliced_axis(self):
        walls = slice_walls(enumerate_walls(build_weight_matrix(3)), 1)
        normals = {w.normal for w in walls}
        assert (1, 1) in normals and (1, -1) in normals
        assert all(len(n) == 2 for n in normals)

    def test_profile_of_a_peaked_histogram(self):
        c = np.zeros((8, 8), dtype=np.int64)
        c[3:5, 3:5] = 1000
        c[2:6, 2:6] += 100
        c[1:7, 1:7] += 10
        c += 1
        h = Histogram(2, 8, c, int(c.sum()))
        means, errs = ring_profile(h)
        assert len(means) == 4 and np.all(np.diff(means) < 0)
        assert is_monotone_decreasing(h)
        hollow = c.max() - c
        assert not is_monotone_decreasing(Histogram(2, 8, hollow, int(hollow.sum())))

    def test_slice_keeps_only_the_slab(self):
        cfg = SampleConfig(3, 100_000, bins=20)
        h = sample_slice(cfg, 1)
        pts = sample_points(cfg)
        assert h.samples == int((np.abs(pts[:, 0]) < 1 / 20).sum())
