"""Tests for dataset ingestion, imputation and flattening."""

import tempfile

import numpy as np
import pytest

from mimiclearn.data import (
    DatasetFormatError,
    VarKind,
    flatten,
    impute_missing,
    load_dataset,
    synth_generate,
    temporal_view,
    write_dataset,
)
from mimiclearn.models import FeatureView, SynthConfig, Task

from ..helpers import make_dataset, write_csv

HEADER = "patient_id,label_mor,label_vfd,s_A,s_B,s_C,t_X_d0,t_X_d1"

IMPUTE_ROWS = [
    HEADER,
    "p1,0,1,1,1.0,1,0.5,1.5",
    "p2,1,0,1,2.0,0,2.5,",
    "p3,1,1,0,,,1.0,3.0",
    "p4,0,0,,,,,2.0",
]


class TestLoadDataset:
    """Test CSV ingestion."""

    def test_empty_cell_sets_mask(self):
        """Test that exactly the empty cell is flagged missing."""
        lines = [
            "patient_id,label_mor,label_vfd,s_A,t_X_d0",
            "a,0,0,1.5,2.0",
            "b,1,0,,3.0",
            "c,1,1,0.5,1.0",
        ]
        with tempfile.TemporaryDirectory() as tmpdir:
            ds = load_dataset(write_csv(tmpdir, lines))

        assert ds.static_mask.tolist() == [[False], [True], [False]]
        assert not ds.temporal_mask.any()
        assert np.isnan(ds.static[1, 0])
        assert ds.patient_ids == ["a", "b", "c"]

    def test_labels_are_read(self):
        """Test that the label column becomes the MOR channel."""
        lines = [
            "patient_id,label_mor,label_vfd,s_A,t_X_d0",
            "a,0,1,1,2",
            "b,1,1,0,3",
            "c,1,0,1,1",
        ]
        with tempfile.TemporaryDirectory() as tmpdir:
            ds = load_dataset(write_csv(tmpdir, lines))

        assert ds.labels[Task.MOR].tolist() == [0, 1, 1]
        assert ds.labels[Task.VFD].tolist() == [1, 1, 0]

    def test_binary_tagging(self):
        """Test that {0,1} observed values are binary and anything else continuous."""
        lines = [
            "patient_id,label_mor,label_vfd,s_A,s_B,t_X_d0",
            "a,0,1,0,0.2,2",
            "b,1,1,1,1.0,3",
            "c,1,0,1,,1",
        ]
        with tempfile.TemporaryDirectory() as tmpdir:
            ds = load_dataset(write_csv(tmpdir, lines))

        assert ds.static_kinds == [VarKind.BINARY, VarKind.CONTINUOUS]

    def test_missing_label_column(self):
        """Test that a header without label_vfd is rejected."""
        lines = ["patient_id,label_mor,s_A,t_X_d0", "a,0,1,2"]
        with tempfile.TemporaryDirectory() as tmpdir:
            with pytest.raises(DatasetFormatError, match="label_vfd"):
                load_dataset(write_csv(tmpdir, lines))

    def test_non_numeric_cell(self):
        """Test that a non-numeric cell names its column."""
        lines = [
            "patient_id,label_mor,label_vfd,s_A,t_X_d0",
            "a,0,1,abc,2",
        ]
        with tempfile.TemporaryDirectory() as tmpdir:
            with pytest.raises(DatasetFormatError, match="s_A"):
                load_dataset(write_csv(tmpdir, lines))

    def test_non_binary_label(self):
        """Test that a label outside {0,1} is rejected."""
        lines = [
            "patient_id,label_mor,label_vfd,s_A,t_X_d0",
            "a,2,1,1,2",
        ]
        with tempfile.TemporaryDirectory() as tmpdir:
            with pytest.raises(DatasetFormatError, match="label_mor"):
                load_dataset(write_csv(tmpdir, lines))

    def test_missing_day_column(self):
        """Test that temporal variables must cover the same days."""
        lines = [
            "patient_id,label_mor,label_vfd,t_X_d0,t_X_d1,t_Y_d0",
            "a,0,1,1,2,3",
        ]
        with tempfile.TemporaryDirectory() as tmpdir:
            with pytest.raises(DatasetFormatError, match="t_Y|'Y'"):
                load_dataset(write_csv(tmpdir, lines))

    def test_file_not_found(self):
        """Test that a missing file raises FileNotFoundError."""
        with pytest.raises(FileNotFoundError):
            load_dataset("/nonexistent/data.csv")

    def test_write_then_load_keeps_observed_values(self):
        """Test that written files reload with identical values and masks."""
        ds = synth_generate(SynthConfig(n_samples=30, seed=3))
        with tempfile.TemporaryDirectory() as tmpdir:
            path = write_dataset(ds, f"{tmpdir}/synth.csv")
            loaded = load_dataset(path)

        assert np.array_equal(loaded.static, ds.static, equal_nan=True)
        assert np.array_equal(loaded.temporal, ds.temporal, equal_nan=True)
        assert np.array_equal(loaded.temporal_mask, ds.temporal_mask)
        assert loaded.static_names == ds.static_names
        assert loaded.temporal_names == ds.temporal_names
        assert loaded.labels[Task.VFD].tolist() == ds.labels[Task.VFD].tolist()


class TestImputeMissing:
    """Test majority/mean imputation."""

    def _imputed(self):
        with tempfile.TemporaryDirectory() as tmpdir:
            ds = load_dataset(write_csv(tmpdir, IMPUTE_ROWS))
        return ds, impute_missing(ds)

    def test_binary_majority(self):
        """Test that a binary column observed [1,1,0] imputes 1."""
        _, imputed = self._imputed()
        assert imputed.static[3, 0] == 1.0

    def test_continuous_mean(self):
        """Test that a continuous column observed [1.0, 2.0] imputes 1.5."""
        _, imputed = self._imputed()
        assert imputed.static[2, 1] == 1.5
        assert imputed.static[3, 1] == 1.5

    def test_binary_tie_resolves_to_zero(self):
        """Test that a binary column observed [1,0] imputes 0."""
        _, imputed = self._imputed()
        assert imputed.static[2, 2] == 0.0
        assert imputed.static[3, 2] == 0.0

    def test_temporal_mean_pools_days(self):
        """Test that temporal means pool every sample and day."""
        _, imputed = self._imputed()
        expected = np.mean([0.5, 2.5, 1.0, 1.5, 3.0, 2.0])
        assert imputed.temporal[3, 0, 0] == pytest.approx(expected)
        assert imputed.temporal[1, 1, 0] == pytest.approx(expected)

    def test_masks_are_kept(self):
        """Test that imputation leaves the masks untouched."""
        ds, imputed = self._imputed()
        assert imputed.is_imputed
        assert np.array_equal(imputed.static_mask, ds.static_mask)
        assert np.array_equal(imputed.temporal_mask, ds.temporal_mask)

    def test_idempotent(self):
        """Test that imputing twice equals imputing once."""
        _, imputed = self._imputed()
        twice = impute_missing(imputed)
        assert np.array_equal(twice.static, imputed.static)
        assert np.array_equal(twice.temporal, imputed.temporal)

    def test_variable_without_observations(self):
        """Test that a fully missing variable is rejected."""
        ds = make_dataset(
            static=[[np.nan], [np.nan]],
            temporal=[[[1.0]], [[2.0]]],
            mor=[0, 1],
        )
        with pytest.raises(DatasetFormatError, match="S0"):
            impute_missing(ds)


class TestFlatten:
    """Test design-matrix construction per view."""

    def test_default_layout_has_109_columns(self):
        """Test 27 + 21x4 - 2 constant day-0 columns for view all."""
        ds = impute_missing(synth_generate(SynthConfig()))
        design = flatten(ds, FeatureView.ALL)

        assert design.d == 109
        assert design.n_samples == 400
        assert len(design.dropped_columns) == 2
        assert all(name.endswith("_d0") for name in design.dropped_names)

    def test_temporal_only_has_82_columns(self):
        """Test 21x4 - 2 for the temporal-only view."""
        ds = impute_missing(synth_generate(SynthConfig()))
        assert flatten(ds, FeatureView.TEMPORAL_ONLY).d == 82

    def test_static_plus_day0_without_constants(self):
        """Test Q + P columns when nothing is constant."""
        ds = impute_missing(synth_generate(SynthConfig(n_zero_day0=0)))
        design = flatten(ds, FeatureView.STATIC_PLUS_DAY0)

        assert design.d == 27 + 21
        assert design.dropped_columns == []

    def test_column_order(self):
        """Test static columns first, then temporal variable-major, day-minor."""
        ds = make_dataset(
            static=[[1.0], [2.0], [3.0]],
            temporal=[
                [[1.0, 5.0], [2.0, 6.0]],
                [[3.0, 7.0], [4.0, 8.0]],
                [[0.0, 1.0], [2.0, 0.0]],
            ],
            mor=[0, 1, 0],
            static_names=["Age"],
            temporal_names=["MAP", "PH"],
        )
        design = flatten(ds, FeatureView.ALL)

        assert design.column_names == ["s_Age", "t_MAP_d0", "t_MAP_d1", "t_PH_d0", "t_PH_d1"]
        assert design.values[0].tolist() == [1.0, 1.0, 2.0, 5.0, 6.0]

    def test_columns_reconstruct_source_values(self):
        """Test that every kept column equals its recorded source."""
        ds = impute_missing(synth_generate(SynthConfig(n_samples=50, seed=4)))
        design = flatten(ds, FeatureView.ALL)

        for j, (kind, index, day) in enumerate(design.column_sources):
            if kind == "static":
                expected = ds.static[:, index]
            else:
                expected = ds.temporal[:, day, index]
            assert np.array_equal(design.values[:, j], expected)

    def test_requires_imputed_dataset(self):
        """Test that NaN entries are refused."""
        ds = make_dataset(static=[[np.nan], [1.0]], temporal=[[[1.0]], [[2.0]]], mor=[0, 1])
        with pytest.raises(ValueError, match="imputed"):
            flatten(ds)

    def test_temporal_view_day0(self):
        """Test that static_plus_day0 exposes only the first day to sequence models."""
        ds = impute_missing(synth_generate(SynthConfig(n_samples=20)))
        assert temporal_view(ds, FeatureView.ALL).shape == (20, 4, 21)
        assert temporal_view(ds, FeatureView.STATIC_PLUS_DAY0).shape == (20, 1, 21)


class TestSynthGenerate:
    """Test the synthetic generator."""

    def test_deterministic(self):
        """Test that the same seed gives bit-identical datasets."""
        a = synth_generate(SynthConfig(seed=7, n_samples=60))
        b = synth_generate(SynthConfig(seed=7, n_samples=60))

        assert np.array_equal(a.static, b.static, equal_nan=True)
        assert np.array_equal(a.temporal, b.temporal, equal_nan=True)
        assert a.labels[Task.MOR].tolist() == b.labels[Task.MOR].tolist()

    def test_no_missing_values(self):
        """Test that missing_rate=0 plants nothing."""
        ds = synth_generate(SynthConfig(missing_rate=0.0, n_samples=50))
        assert not ds.static_mask.any()
        assert not ds.temporal_mask.any()

    def test_default_missing_rate(self):
        """Test that the default cohort is about 13.43% missing."""
        ds = synth_generate(SynthConfig())
        assert abs(ds.missing_fraction() - 0.1343) < 0.01

    def test_both_label_channels(self):
        """Test that both tasks carry both classes."""
        ds = synth_generate(SynthConfig())
        for task in Task:
            assert set(ds.labels[task].tolist()) == {0, 1}

    def test_invalid_config(self):
        """Test that inconsistent counts are rejected."""
        with pytest.raises(ValueError, match="n_informative_temporal"):
            SynthConfig(p_temporal=2, n_informative_temporal=3, n_zero_day0=0)
