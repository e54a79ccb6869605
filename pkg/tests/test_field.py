import numpy as np
import pytest

from gmclab import (
    AtomicMeasure,
    DiskKernel,
    build_covariance,
    field_matrix,
    replica_generator,
    sample_field,
)
from gmclab.field import FIELD_SUBSTREAM, ROOT_SUBSTREAM

SEED = 2024
N_BIG = 100000


def test_sample_field_deterministic(model8):
    a = sample_field(model8, SEED, 17)
    b = sample_field(model8, SEED, 17)
    assert np.array_equal(a.values, b.values)
    assert a.values.shape == (model8.n,)


def test_sample_field_changes_with_replica(model8):
    a = sample_field(model8, SEED, 0)
    b = sample_field(model8, SEED, 1)
    assert not np.array_equal(a.values, b.values)


def test_single_atom_variance(single_model):
    values = field_matrix(single_model, SEED, np.arange(N_BIG))[0]
    v = single_model.diag_variance[0]
    assert abs(values.var(ddof=1) - v) <= 0.05 * v
    assert abs(values.mean()) <= 3.0 * np.sqrt(v / N_BIG)


def test_two_atom_covariance(two_model):
    values = field_matrix(two_model, SEED, np.arange(N_BIG))
    emp = np.cov(values)
    true = two_model.matrix
    for i in range(2):
        for j in range(2):
            # SE of a Gaussian covariance estimate
            se = np.sqrt((true[i, i] * true[j, j] + true[i, j] ** 2) / N_BIG)
            assert abs(emp[i, j] - true[i, j]) <= 3.0 * se


def test_field_matrix_matches_single_samples(model4):
    # batched product may differ from the one-column product at the last ulp
    values = field_matrix(model4, SEED, np.arange(40))
    for k in (0, 7, 39):
        single = sample_field(model4, SEED, k).values
        assert np.allclose(values[:, k], single, rtol=0, atol=1e-13)


def test_field_matrix_thread_independent(model4):
    # 3000 replicas span several fixed-size blocks
    idx = np.arange(3000)
    a = field_matrix(model4, SEED, idx, threads=1)
    b = field_matrix(model4, SEED, idx, threads=4)
    assert np.array_equal(a, b)


def test_stream_pairwise_correlation():
    za = replica_generator(SEED, 0).standard_normal(N_BIG)
    zb = replica_generator(SEED, 1).standard_normal(N_BIG)
    corr = np.corrcoef(za, zb)[0, 1]
    assert abs(corr) < 3.0 / np.sqrt(N_BIG)


def test_root_and_field_substreams_distinct():
    za = replica_generator(SEED, 5, ROOT_SUBSTREAM).standard_normal(N_BIG)
    zb = replica_generator(SEED, 5, FIELD_SUBSTREAM).standard_normal(N_BIG)
    assert abs(np.corrcoef(za, zb)[0, 1]) < 3.0 / np.sqrt(N_BIG)


class _ScaledKernel:
    """Kernel multiplied by c**2; scales field values by c for the same draws."""

    def __init__(self, c2):
        self.base = DiskKernel(1.0)
        self.c2 = c2

    def inside(self, z):
        return self.base.inside(z)

    def __call__(self, x, y):
        return self.c2 * self.base(x, y)

    def smooth_part(self, x, y):
        return self.c2 * self.base.smooth_part(x, y)

    def entry_matrix(self, positions, epsilon):
        return self.c2 * self.base.entry_matrix(positions, epsilon)


def test_field_linearity_under_kernel_scaling(two_atom):
    base = build_covariance(two_atom, 0.1, DiskKernel(1.0))
    scaled = build_covariance(two_atom, 0.1, _ScaledKernel(4.0))
    a = field_matrix(base, SEED, np.arange(50))
    b = field_matrix(scaled, SEED, np.arange(50))
    assert np.allclose(b, 2.0 * a, rtol=1e-12, atol=1e-12)
