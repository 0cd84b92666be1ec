import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dbtopo.datasets import (
    BoundaryDescriptor,
    CircleComponent,
    LabeledPointCloud,
    LabelOracle,
    default_two_circles_geometry,
    generate_annulus_cloud,
    generate_two_circles,
    load_descriptor_json,
    load_point_csv,
    save_descriptor_json,
    save_point_csv,
    signed_distance_to_circles,
)
from dbtopo.errors import InvalidGeometryError, InvalidParameterError, ParseError


class TestLabeledPointCloud:
    def test_labels_length_mismatch_rejected(self):
        with pytest.raises(InvalidParameterError):
            LabeledPointCloud(points=np.zeros((3, 2)), labels=np.array([0, 1]))

    def test_nonbinary_labels_rejected(self):
        with pytest.raises(InvalidParameterError):
            LabeledPointCloud(points=np.zeros((2, 2)), labels=np.array([0, 2]))

    def test_arrays_write_protected(self):
        cloud = LabeledPointCloud(points=np.zeros((2, 2)), labels=np.array([0, 1]))
        with pytest.raises(ValueError):
            cloud.points[0, 0] = 1.0


class TestBoundaryDescriptor:
    def test_default_geometry_betti(self):
        geom = default_two_circles_geometry()
        assert geom.true_betti_1 == 2
        assert len(geom.components) == 2

    def test_overlapping_circles_rejected(self):
        with pytest.raises(InvalidGeometryError):
            BoundaryDescriptor(
                components=(
                    CircleComponent(center=(0.0, 0.0), radius=1.0),
                    CircleComponent(center=(1.0, 0.0), radius=1.0),
                ),
                true_betti_0=2,
                true_betti_1=2,
            )

    def test_nonpositive_radius_rejected(self):
        with pytest.raises(InvalidGeometryError):
            CircleComponent(center=(0.0, 0.0), radius=0.0)


class TestGenerateTwoCircles:
    def test_empty_cloud(self):
        cloud = generate_two_circles(n=0, seed=1)
        assert len(cloud) == 0
        assert cloud.boundary is not None

    def test_full_scale_run(self):
        cloud = generate_two_circles(n=2000, seed=7)
        assert len(cloud) == 2000
        assert set(np.unique(cloud.labels)) == {0, 1}
        assert cloud.boundary.true_betti_1 == 2

    def test_deterministic(self):
        a = generate_two_circles(n=50, seed=3)
        b = generate_two_circles(n=50, seed=3)
        assert np.array_equal(a.points, b.points)
        assert np.array_equal(a.labels, b.labels)

    def test_seed_changes_points(self):
        a = generate_two_circles(n=50, seed=3)
        b = generate_two_circles(n=50, seed=4)
        assert not np.array_equal(a.points, b.points)

    def test_noise_zero_labels_match_indicator(self):
        cloud = generate_two_circles(n=300, seed=11)
        sd = signed_distance_to_circles(cloud.points, cloud.boundary)
        assert np.array_equal(cloud.labels, (sd < 0).astype(np.int64))

    def test_points_inside_inflated_bbox(self):
        cloud = generate_two_circles(n=500, seed=2)
        assert cloud.points[:, 0].min() >= -4.0 and cloud.points[:, 0].max() <= 4.0
        assert cloud.points[:, 1].min() >= -2.0 and cloud.points[:, 1].max() <= 2.0


class TestGenerateAnnulus:
    def test_origin_is_class1_corner_class0(self):
        # deterministic labels outside the overlap tube
        cloud = generate_annulus_cloud(n=4000, seed=5, tau=1.0, w=0.0)
        r = np.linalg.norm(cloud.points, axis=1)
        assert np.array_equal(cloud.labels, (r < 1.0).astype(np.int64))

    def test_label1_fraction_matches_area_ratio(self):
        tau = 0.7
        cloud = generate_annulus_cloud(n=10000, seed=1, tau=tau, w=1e-10)
        p = math.pi * tau**2 / 25.0
        se = math.sqrt(p * (1 - p) / 10000)
        assert abs(cloud.labels.mean() - p) <= 3 * se

    def test_geometry_must_fit_square(self):
        with pytest.raises(InvalidGeometryError):
            generate_annulus_cloud(n=10, seed=1, tau=2.6, w=0.0)

    def test_overlap_labels_deterministic_per_seed(self):
        a = generate_annulus_cloud(n=500, seed=9, tau=1.0, w=0.2)
        b = generate_annulus_cloud(n=500, seed=9, tau=1.0, w=0.2)
        assert np.array_equal(a.labels, b.labels)

    def test_labels_outside_tube_follow_disk(self):
        cloud = generate_annulus_cloud(n=1000, seed=2, tau=1.0, w=0.2)
        r = np.linalg.norm(cloud.points, axis=1)
        outside = (r < 0.8) | (r > 1.2)
        assert np.array_equal(
            cloud.labels[outside], (r[outside] < 1.0).astype(np.int64)
        )


class TestLabelOracle:
    def test_from_cloud_total_and_deterministic(self):
        cloud = generate_two_circles(n=30, seed=1)
        oracle = LabelOracle.from_cloud(cloud)
        first = [oracle(i) for i in range(30)]
        assert first == [oracle(i) for i in range(30)]
        assert first == list(cloud.labels)

    def test_from_file(self, tmp_path):
        path = tmp_path / "labels.csv"
        path.write_text("1\n0\n1\n")
        oracle = LabelOracle.from_file(path)
        assert [oracle(0), oracle(1), oracle(2)] == [1, 0, 1]


class TestPointCsv:
    def test_round_trip_lossless(self, tmp_path):
        cloud = generate_two_circles(n=40, seed=6)
        path = tmp_path / "points.csv"
        save_point_csv(cloud, path)
        again = load_point_csv(path)
        assert np.array_equal(cloud.points, again.points)
        assert np.array_equal(cloud.labels, again.labels)

    @given(
        st.lists(
            st.tuples(
                st.floats(allow_nan=False, allow_infinity=False, width=64),
                st.floats(allow_nan=False, allow_infinity=False, width=64),
                st.integers(0, 1),
            ),
            min_size=1,
            max_size=20,
        )
    )
    @settings(max_examples=50, deadline=None)
    def test_round_trip_random(self, rows):
        import tempfile

        pts = np.array([(x, y) for x, y, _ in rows], dtype=float)
        labels = np.array([b for _, _, b in rows], dtype=np.int64)
        cloud = LabeledPointCloud(points=pts, labels=labels)
        with tempfile.TemporaryDirectory() as tmp:
            path = f"{tmp}/p.csv"
            save_point_csv(cloud, path)
            again = load_point_csv(path)
        assert np.array_equal(cloud.points, again.points)

    def test_explicit_row(self, tmp_path):
        path = tmp_path / "p.csv"
        path.write_text("1.0,2.0,1\n")
        cloud = load_point_csv(path)
        assert np.array_equal(cloud.points, [[1.0, 2.0]])
        assert list(cloud.labels) == [1]

    def test_ragged_rows_name_offender(self, tmp_path):
        path = tmp_path / "p.csv"
        path.write_text("1.0,2.0,1\n1.0,2.0,3.0,0\n")
        with pytest.raises(ParseError, match="2"):
            load_point_csv(path)

    def test_bad_label_rejected(self, tmp_path):
        path = tmp_path / "p.csv"
        path.write_text("1.0,2.0,5\n")
        with pytest.raises(ParseError):
            load_point_csv(path, labeled=True)


class TestDescriptorJson:
    def test_round_trip(self, tmp_path):
        geom = default_two_circles_geometry()
        path = tmp_path / "d.json"
        save_descriptor_json(geom, path)
        again = load_descriptor_json(path)
        assert again.true_betti_1 == geom.true_betti_1
        assert [c.radius for c in again.components] == [c.radius for c in geom.components]
