import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pfa.binning import discretize, discretize_all
from pfa.dataset import Dataset
from pfa.synth import SynthSpec, generate


def bin_sizes(feature):
    return np.bincount(feature.bin_of_point, minlength=feature.n_bins).tolist()


class TestDiscretize:
    def test_constant_values_flagged(self):
        feature = discretize([4.2] * 10, nu=3)
        assert feature.is_constant
        assert feature.n_bins == 1
        assert not feature.testable

    def test_distinct_run_of_ten(self):
        # hand trace: three bins of 3, remainder {10} merged into the last
        feature = discretize(list(range(1, 11)), nu=3)
        assert feature.n_bins == 3
        assert bin_sizes(feature) == [3, 3, 4]
        assert list(feature.bin_of_point) == [0, 0, 0, 1, 1, 1, 2, 2, 2, 2]

    def test_tie_extension_then_trailing_merge(self):
        # hand trace: {1,1,1} by tie extension, then {2,2} takes trailing {3}
        feature = discretize([1, 1, 1, 2, 2, 3], nu=2)
        assert feature.n_bins == 2
        assert bin_sizes(feature) == [3, 3]
        assert list(feature.bin_of_point) == [0, 0, 0, 1, 1, 1]

    def test_single_point_is_constant(self):
        assert discretize([7.0], nu=1).is_constant

    def test_too_few_points_for_one_bin(self):
        # two distinct values but fewer than nu points: one catch-all bin,
        # not constant, but excluded from testing
        feature = discretize([1.0, 2.0, 3.0], nu=10)
        assert not feature.is_constant
        assert feature.n_bins == 1
        assert not feature.testable

    def test_empty_input_rejected(self):
        with pytest.raises(ValueError):
            discretize([], nu=1)

    def test_bad_nu_rejected(self):
        with pytest.raises(ValueError):
            discretize([1.0, 2.0], nu=0)


values_lists = st.lists(
    st.floats(
        min_value=-1e6, max_value=1e6, allow_nan=False, allow_infinity=False
    ),
    min_size=2,
    max_size=200,
)


class TestProperties:
    @given(values=values_lists, nu=st.integers(1, 20))
    @settings(max_examples=200, deadline=None)
    def test_structure_invariants(self, values, nu):
        feature = discretize(values, nu)
        sizes = bin_sizes(feature)
        assert all(size > 0 for size in sizes)
        assert feature.bin_of_point.max() == feature.n_bins - 1
        # monotone: smaller value never lands in a later bin
        order = np.argsort(values, kind="stable")
        assert (np.diff(feature.bin_of_point[order]) >= 0).all()
        # occupancy: once enough points exist, every bin reaches nu
        if len(values) >= nu and feature.n_bins > 1:
            assert min(sizes) >= nu

    @given(values=values_lists, nu=st.integers(1, 20), seed=st.integers(0, 99))
    @settings(max_examples=100, deadline=None)
    def test_permutation_equivariance(self, values, nu, seed):
        rng = np.random.default_rng(seed)
        perm = rng.permutation(len(values))
        base = discretize(values, nu)
        shuffled = discretize(np.asarray(values)[perm], nu)
        assert shuffled.n_bins == base.n_bins
        assert np.array_equal(shuffled.bin_of_point, base.bin_of_point[perm])

    @given(values=values_lists, nu=st.integers(1, 15))
    @settings(max_examples=100, deadline=None)
    def test_coarsening_monotonicity(self, values, nu):
        finer = discretize(values, nu)
        coarser = discretize(values, nu + 1)
        assert coarser.n_bins <= finer.n_bins


class TestDiscretizeAll:
    def test_two_constant_rows(self):
        ds = Dataset(np.ones((2, 5)), n_outputs=0)
        features = discretize_all(ds, nu=2)
        assert all(f.is_constant for f in features)

    def test_example1_bins_meet_occupancy(self):
        ds = generate(SynthSpec("example1", 5000, seed=42))
        features = discretize_all(ds, nu=100)
        assert len(features) == 5
        for feature in features:
            assert not feature.is_constant
            assert min(bin_sizes(feature)) >= 100

    def test_error_carries_row_index(self):
        ds = Dataset(np.ones((3, 4)), n_outputs=0)
        with pytest.raises(ValueError, match="row 1"):
            discretize_all(ds, nu=0)
