"""Rasterization, risk rendering, bisection, regions, and export formats."""

import numpy as np
import pytest

from softknn import (
    LabelKind,
    MultipleCrossingsError,
    NoCrossingError,
    PALETTE,
    RasterGrid,
    boundary_bisect,
    class_csv_bytes,
    concentric_ellipses,
    confidence_csv_bytes,
    default_bounds,
    evaluate_points,
    k_sweep,
    make_prototype_set,
    n_from_two,
    pgm_bytes,
    polygon_pairs,
    ppm_bytes,
    rasterize,
    region_report,
    risk_render,
    star_pairs,
    three_from_two,
)

# Frame that puts both prototypes of three_from_two(3) exactly on cell
# centers: cell size 0.01, centers offset half a cell from the bounds.
HIT_BOUNDS = (-1.005, 3.995, -2.005, 1.995)


@pytest.fixture(scope="module")
def pair():
    return three_from_two(3.0)


@pytest.fixture(scope="module")
def pair_grid(pair):
    return rasterize(pair.set, 2, (-1, 4, -2, 2), 512, 512)


class TestDefaultBounds:
    def test_square_padding(self):
        pset = make_prototype_set(
            [(0.0, 0.0), (4.0, 2.0)], np.array([[1.0, 0.0], [0.0, 1.0]]), kind=LabelKind.HARD
        )
        np.testing.assert_allclose(default_bounds(pset), (-1.0, 5.0, -0.5, 2.5))

    def test_degenerate_axis_uses_dominant_span(self):
        pset = three_from_two(4.0).set
        xmin, xmax, ymin, ymax = default_bounds(pset)
        np.testing.assert_allclose((xmin, xmax), (-1.0, 5.0))
        np.testing.assert_allclose((ymin, ymax), (-0.5, 0.5))


class TestRasterize:
    def test_single_prototype_everything_one_class(self):
        pset = make_prototype_set([(0.5, 0.5)], np.array([[0.0, 1.0, 0.0]]), kind=LabelKind.HARD)
        grid = rasterize(pset, 1, (0, 1, 0, 1), 32, 32)
        assert np.all(grid.classes == 1)
        assert region_report(grid).distinct_classes == 1

    def test_three_classes_at_figure_framing(self, pair_grid):
        assert region_report(pair_grid).distinct_classes == 3

    def test_partitioning_is_bit_identical(self, pair):
        grids = [
            rasterize(pair.set, 2, (-1, 4, -2, 2), 256, 256, partitions=p) for p in (1, 8, 37)
        ]
        for other in grids[1:]:
            assert np.array_equal(grids[0].classes, other.classes)
            assert np.array_equal(grids[0].confidence, other.confidence)
            assert grids[0].exact_hits == other.exact_hits

    def test_invalid_bounds(self, pair):
        with pytest.raises(ValueError, match="well-ordered"):
            rasterize(pair.set, 2, (1, -1, 0, 2), 16, 16)

    def test_invalid_resolution(self, pair):
        with pytest.raises(ValueError, match="resolution"):
            rasterize(pair.set, 2, (-1, 4, -2, 2), 1, 16)

    def test_exact_hits_recorded_at_prototype_cells(self, pair):
        grid = rasterize(pair.set, 2, HIT_BOUNDS, 500, 400)
        assert grid.exact_hits == ((200, 100), (200, 400))
        assert np.isinf(grid.confidence[200, 100])
        assert grid.classes[200, 100] == 0
        assert grid.classes[200, 400] == 2

    def test_cell_centers(self):
        pset = three_from_two(3.0).set
        grid = rasterize(pset, 2, (0, 1, 0, 2), 4, 4)
        np.testing.assert_allclose(grid.cell_centers_x(), [0.125, 0.375, 0.625, 0.875])
        np.testing.assert_allclose(grid.cell_centers_y(), [0.25, 0.75, 1.25, 1.75])

    def test_resolution_doubling_never_loses_classes(self):
        from softknn import polygon_with_center

        for cons in (
            three_from_two(3.0),
            n_from_two(6),
            star_pairs(4),
            polygon_pairs(4),
            polygon_with_center(4),
        ):
            bounds = default_bounds(cons.set)
            counts = [
                region_report(rasterize(cons.set, cons.required_k, bounds, r, r)).distinct_classes
                for r in (128, 256, 512)
            ]
            assert counts[0] <= counts[1] <= counts[2]
            assert counts[2] == cons.claimed_classes


class TestRiskRender:
    def test_uniform_confidence_gives_uniform_intensity(self):
        grid = RasterGrid(
            bounds=(0, 1, 0, 1), width=4, height=4,
            classes=np.zeros((4, 4), dtype=np.int32),
            confidence=np.full((4, 4), 2.5), exact_hits=(),
        )
        for mode in ("clip", "log"):
            intensity = risk_render(grid, mode)
            assert np.all(intensity == intensity[0, 0])

    def test_exact_hits_render_at_zero_intensity(self, pair):
        grid = rasterize(pair.set, 2, HIT_BOUNDS, 500, 400)
        for mode in ("clip", "log"):
            intensity = risk_render(grid, mode)
            for row, col in grid.exact_hits:
                assert intensity[row, col] == 0.0

    def test_intensity_peaks_at_boundaries(self, pair, pair_grid):
        intensity = risk_render(pair_grid, "clip")
        row = int((0.0 - (-2.0)) / (4.0 / 512))
        xs = pair_grid.cell_centers_x()
        cell = 5.0 / 512
        for window, crossing in (((0.3, 1.5), 1.0), ((1.5, 2.7), 2.0)):
            mask = (xs > window[0]) & (xs < window[1])
            peak_x = xs[mask][np.argmax(intensity[row][mask])]
            assert abs(peak_x - crossing) <= cell

    def test_clip_and_log_order_consistently_below_ceiling(self, pair_grid):
        clip = risk_render(pair_grid, "clip", percentile=99.0)
        log = risk_render(pair_grid, "log")
        conf = pair_grid.confidence
        ceiling = np.percentile(conf[np.isfinite(conf)], 99.0)
        rng = np.random.default_rng(0)
        flat = rng.integers(0, conf.size, size=4000)
        a, b = flat[:2000], flat[2000:]
        keep = (conf.ravel()[a] < ceiling) & (conf.ravel()[b] < ceiling)
        d_clip = clip.ravel()[a[keep]] - clip.ravel()[b[keep]]
        d_log = log.ravel()[a[keep]] - log.ravel()[b[keep]]
        np.testing.assert_array_equal(np.sign(d_clip), np.sign(d_log))

    def test_percentile_validation(self, pair_grid):
        with pytest.raises(ValueError, match="percentile"):
            risk_render(pair_grid, "clip", percentile=40.0)
        with pytest.raises(ValueError, match="mode"):
            risk_render(pair_grid, "linear")


class TestBoundaryBisect:
    def test_pair_segment_crossings(self, pair):
        pos = pair.set.positions
        first = boundary_bisect(pair.set, 2, pos[0], (1.5, 0.0))
        second = boundary_bisect(pair.set, 2, (1.5, 0.0), pos[1])
        assert abs(first * 0.5 - 1 / 3) < 1e-6
        assert abs(0.5 + second * 0.5 - 2 / 3) < 1e-6

    def test_star_spoke_crossings(self):
        cons = star_pairs(4, radius=1.0)
        tip = cons.set.positions[1]
        inner = boundary_bisect(cons.set, 2, (0.0, 0.0), 0.35 * tip) * 0.35
        outer = 0.35 + boundary_bisect(cons.set, 2, 0.35 * tip, tip) * 0.65
        assert abs(inner - 5 / 23) < 1e-6
        assert abs(outer - 10 / 19) < 1e-6

    @pytest.mark.parametrize("m", [3, 5, 8, 12])
    def test_polygon_edge_crossings(self, m):
        cons = polygon_pairs(m)
        a, b = cons.set.positions[0], cons.set.positions[1]
        mid = a + 0.5 * (b - a)
        first = boundary_bisect(cons.set, 2, a, mid) * 0.5
        second = 0.5 + boundary_bisect(cons.set, 2, mid, b) * 0.5
        assert abs(first - 1 / 3) < 1e-6
        assert abs(second - 2 / 3) < 1e-6

    def test_no_crossing_raises(self, pair):
        with pytest.raises(NoCrossingError):
            boundary_bisect(pair.set, 2, (0.1, 0.0), (0.2, 0.0))

    def test_multiple_crossings_raises(self, pair):
        pos = pair.set.positions
        with pytest.raises(MultipleCrossingsError):
            boundary_bisect(pair.set, 2, pos[0], pos[1])

    def test_class_pair_check(self, pair):
        with pytest.raises(ValueError, match="expected endpoint classes"):
            boundary_bisect(pair.set, 2, (0.0, 0.0), (1.5, 0.0), class_pair=(2, 1))
        frac = boundary_bisect(pair.set, 2, (0.0, 0.0), (1.5, 0.0), class_pair=(0, 1))
        assert 0.0 < frac < 1.0


class TestRegionReport:
    def test_five_bands_single_components(self):
        cons = n_from_two(5)
        grid = rasterize(cons.set, 2, default_bounds(cons.set), 256, 256)
        report = region_report(grid)
        assert report.distinct_classes == 5
        assert report.components_per_class == {c: 1 for c in range(5)}
        assert sum(report.class_areas.values()) == 256 * 256

    def test_polygon_with_center_count(self):
        from softknn import polygon_with_center

        cons = polygon_with_center(4)
        grid = rasterize(cons.set, 4, default_bounds(cons.set), 512, 512)
        assert region_report(grid).distinct_classes == 10

    def test_json_shape(self):
        cons = n_from_two(2)
        grid = rasterize(cons.set, 2, default_bounds(cons.set), 64, 64)
        data = region_report(grid).to_json_dict()
        assert set(data) == {"distinct_classes", "components_per_class", "class_areas"}
        assert all(isinstance(k, str) for k in data["components_per_class"])


class TestKSweep:
    def test_k1_on_hard_labels_is_voronoi(self):
        rng = np.random.default_rng(5)
        positions = rng.uniform(0, 1, size=(5, 2))
        labels = np.zeros((5, 5))
        labels[np.arange(5), np.arange(5)] = 1.0
        pset = make_prototype_set(positions, labels, kind=LabelKind.HARD)
        ((_, grid, _),) = k_sweep(pset, [1], (0, 1, 0, 1), 64, 64)
        xs, ys = grid.cell_centers_x(), grid.cell_centers_y()
        for i in range(0, 64, 7):
            for j in range(0, 64, 7):
                dists = np.linalg.norm(positions - (xs[j], ys[i]), axis=1)
                assert grid.classes[i, j] == int(np.argmin(dists))

    def test_middle_class_needs_k2(self, pair):
        sweep = k_sweep(pair.set, [1, 2], (-1, 4, -2, 2), 128, 128)
        by_k = {k: report for k, _, report in sweep}
        assert by_k[1].distinct_classes == 2
        assert 1 not in by_k[1].class_areas
        assert by_k[2].distinct_classes == 3

    def test_sweep_can_produce_non_contiguous_classes(self):
        cons = concentric_ellipses(3)
        sweep = k_sweep(cons.set, [1, 2, 3], width=128, height=128)
        multi = [
            k for k, _, report in sweep if any(n >= 2 for n in report.components_per_class.values())
        ]
        assert multi, "expected some k to split a class into multiple components"


@pytest.fixture(scope="module")
def small_grid():
    cons = n_from_two(3)
    return rasterize(cons.set, 2, default_bounds(cons.set), 32, 16)


class TestExports:
    def test_ppm_header_and_size(self, small_grid):
        data = ppm_bytes(small_grid)
        assert data.startswith(b"P6\n32 16\n255\n")
        assert len(data) == len(b"P6\n32 16\n255\n") + 32 * 16 * 3

    def test_ppm_top_row_is_max_y(self, small_grid):
        data = ppm_bytes(small_grid)
        header = len(b"P6\n32 16\n255\n")
        top_left = tuple(data[header : header + 3])
        assert top_left == PALETTE[small_grid.classes[-1, 0] % len(PALETTE)]

    def test_pgm_header_and_range(self, small_grid):
        intensity = risk_render(small_grid, "log")
        data = pgm_bytes(intensity)
        assert data.startswith(b"P5\n32 16\n255\n")
        assert len(data) == len(b"P5\n32 16\n255\n") + 32 * 16

    def test_class_csv_round_trip(self, small_grid):
        rows = class_csv_bytes(small_grid).decode().strip().split("\n")
        parsed = np.array([[int(v) for v in row.split(",")] for row in rows])
        np.testing.assert_array_equal(parsed, small_grid.classes)

    def test_confidence_csv_round_trip(self, small_grid):
        rows = confidence_csv_bytes(small_grid).decode().strip().split("\n")
        parsed = np.array([[float(v) for v in row.split(",")] for row in rows])
        np.testing.assert_array_equal(parsed, small_grid.confidence)

    def test_palette_distinct(self):
        assert len(set(PALETTE)) == len(PALETTE)
        assert all(len(c) == 3 and all(0 <= v <= 255 for v in c) for c in PALETTE)


class TestConfidenceContinuity:
    def test_confidence_small_near_crossing_and_continuous(self, pair):
        # March a fine segment through the first crossing, away from prototypes.
        ts = np.linspace(0.0, 1.0, 10_001)
        pts = np.column_stack((0.5 + ts * 1.0, np.full_like(ts, 0.1)))
        _, _, conf, exact = evaluate_points(pair.set, 2, pts)
        assert not exact.any()
        steps = np.abs(np.diff(conf))
        assert steps.max() < 1e-2
        assert conf.min() < 1e-3
