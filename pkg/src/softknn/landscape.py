"""Decision-landscape rasterization and analysis.

The rasterizer samples the classifier at cell centers over a rectangle and
records the predicted class and confidence gap per cell. On top of that
this module provides risk rendering (confidence mapped to a normalized
intensity, clipped or log-scaled), boundary localization by bisection
along a segment, connected-region reporting, and sweeps over the neighbor
count k. Class maps export as binary PPM and CSV, risk maps as binary PGM
and CSV.

Rasterization is deterministic: the per-cell computation is independent of
how cells are partitioned into blocks, so any ``partitions`` value yields
bit-identical grids.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy import ndimage

from .classifier import classify, evaluate_points
from .core import PrototypeSet

# Fixed palette for class maps (class index cycles through these RGBs).
PALETTE: tuple[tuple[int, int, int], ...] = (
    (230, 25, 75), (60, 180, 75), (255, 225, 25), (0, 130, 200),
    (245, 130, 48), (145, 30, 180), (70, 240, 240), (240, 50, 230),
    (210, 245, 60), (250, 190, 212), (0, 128, 128), (220, 190, 255),
    (170, 110, 40), (255, 250, 200), (128, 0, 0), (170, 255, 195),
    (128, 128, 0), (255, 215, 180), (0, 0, 128), (128, 128, 128),
    (154, 99, 36), (255, 216, 177),
)


class BisectionError(ValueError):
    """Base for boundary-bisection failures."""


class NoCrossingError(BisectionError):
    pass


class MultipleCrossingsError(BisectionError):
    pass


@dataclass(frozen=True, eq=False)
class RasterGrid:
    """Classified grid over a rectangle.

    Row i, column j corresponds to the cell center at
    ``(xmin + (j + .5) * cell_w, ymin + (i + .5) * cell_h)``: row 0 is the
    bottom of the rectangle. ``classes`` holds predicted class indices,
    ``confidence`` the score gaps (+inf on exact prototype hits), and
    ``exact_hits`` the (row, col) cells whose centers hit a prototype.
    """

    bounds: tuple[float, float, float, float]
    width: int
    height: int
    classes: np.ndarray
    confidence: np.ndarray
    exact_hits: tuple[tuple[int, int], ...]

    def cell_centers_x(self) -> np.ndarray:
        xmin, xmax, _, _ = self.bounds
        return xmin + (np.arange(self.width) + 0.5) * (xmax - xmin) / self.width

    def cell_centers_y(self) -> np.ndarray:
        _, _, ymin, ymax = self.bounds
        return ymin + (np.arange(self.height) + 0.5) * (ymax - ymin) / self.height


@dataclass(frozen=True, eq=False)
class RegionReport:
    """Distinct classes, 4-connected components, and cell areas of a grid."""

    distinct_classes: int
    components_per_class: dict[int, int]
    class_areas: dict[int, int]

    def to_json_dict(self) -> dict:
        return {
            "distinct_classes": self.distinct_classes,
            "components_per_class": {str(c): n for c, n in sorted(self.components_per_class.items())},
            "class_areas": {str(c): a for c, a in sorted(self.class_areas.items())},
        }


def default_bounds(pset: PrototypeSet, pad_fraction: float = 0.25) -> tuple[float, float, float, float]:
    """Prototype bounding box padded per side by a quarter of its span.

    A degenerate axis (all prototypes share that coordinate) is padded by
    an eighth of the dominant span instead, which frames collinear
    configurations as a strip around their segment.
    """
    pos = pset.positions
    if pset.dim != 2:
        raise ValueError("default_bounds requires 2-dimensional prototypes")
    mins, maxs = pos.min(axis=0), pos.max(axis=0)
    spans = maxs - mins
    ref = float(spans.max()) if spans.max() > 0 else 1.0
    pads = [pad_fraction * float(s) if s > 0 else 0.5 * pad_fraction * ref for s in spans]
    return (
        float(mins[0] - pads[0]),
        float(maxs[0] + pads[0]),
        float(mins[1] - pads[1]),
        float(maxs[1] + pads[1]),
    )


def rasterize(
    pset: PrototypeSet,
    k: int,
    bounds: tuple[float, float, float, float] | None = None,
    width: int = 512,
    height: int = 512,
    partitions: int = 1,
) -> RasterGrid:
    """Classify every cell center of a width x height grid over ``bounds``.

    ``partitions`` splits the rows into that many blocks evaluated
    separately; the output is bit-identical for every value because each
    cell is classified independently.
    """
    if bounds is None:
        bounds = default_bounds(pset)
    xmin, xmax, ymin, ymax = (float(v) for v in bounds)
    if not (xmin < xmax and ymin < ymax):
        raise ValueError(f"bounds must be well-ordered, got {bounds}")
    if width < 2 or height < 2:
        raise ValueError(f"resolution must be at least 2x2, got {width}x{height}")
    if partitions < 1:
        raise ValueError(f"partitions must be >= 1, got {partitions}")

    xs = xmin + (np.arange(width) + 0.5) * (xmax - xmin) / width
    ys = ymin + (np.arange(height) + 0.5) * (ymax - ymin) / height
    classes = np.empty((height, width), dtype=np.int32)
    confidence = np.empty((height, width), dtype=float)
    hits: list[tuple[int, int]] = []

    for rows in np.array_split(np.arange(height), min(partitions, height)):
        if len(rows) == 0:
            continue
        gx, gy = np.meshgrid(xs, ys[rows])
        pts = np.column_stack((gx.ravel(), gy.ravel()))
        _, predicted, conf, exact = evaluate_points(pset, k, pts)
        classes[rows] = predicted.reshape(len(rows), width)
        confidence[rows] = conf.reshape(len(rows), width)
        for flat in np.nonzero(exact)[0]:
            hits.append((int(rows[0] + flat // width), int(flat % width)))

    classes.flags.writeable = False
    confidence.flags.writeable = False
    return RasterGrid(
        bounds=(xmin, xmax, ymin, ymax),
        width=width,
        height=height,
        classes=classes,
        confidence=confidence,
        exact_hits=tuple(sorted(hits)),
    )


def risk_render(grid: RasterGrid, mode: str = "clip", percentile: float = 99.0) -> np.ndarray:
    """Map confidence to a reclassification-risk intensity in [0, 1].

    Intensity 0 marks the highest-confidence (lowest-risk) cells and 1 the
    decision boundaries, so rendering intensity as gray directly gives the
    dark-equals-safe convention. Clip mode clamps confidence at the given
    percentile of the finite values before scaling, which preserves
    contrast inside classes; log mode applies log1p first, which spreads
    the boundary neighborhoods instead. Exact-hit cells sit at the ceiling
    in both modes and land on intensity 0.
    """
    conf = grid.confidence
    finite = conf[np.isfinite(conf)]
    if mode == "clip":
        if not 50.0 < percentile <= 100.0:
            raise ValueError(f"clip percentile must be in (50, 100], got {percentile}")
        ceiling = float(np.percentile(finite, percentile)) if finite.size else 0.0
        transformed = np.minimum(conf, ceiling)
        denom = ceiling
    elif mode == "log":
        ceiling = float(finite.max()) if finite.size else 0.0
        transformed = np.log1p(np.minimum(conf, ceiling))
        denom = float(np.log1p(ceiling))
    else:
        raise ValueError(f"mode must be 'clip' or 'log', got {mode!r}")
    if denom <= 0.0:
        return np.ones_like(conf)
    return np.clip(1.0 - transformed / denom, 0.0, 1.0)


def boundary_bisect(
    pset: PrototypeSet,
    k: int,
    a,
    b,
    class_pair: tuple[int, int] | None = None,
    scan: int = 1024,
    tol: float = 1e-9,
) -> float:
    """Locate the predicted-class change on the segment from ``a`` to ``b``.

    Returns the crossing as a fraction of the segment measured from ``a``,
    bisected until the bracket is narrower than ``tol``. The segment is
    pre-scanned at ``scan + 1`` points; zero class changes raise
    :class:`NoCrossingError` and more than one raise
    :class:`MultipleCrossingsError` (split the segment and retry). If
    ``class_pair`` is given, the endpoint classes must match it in order.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    ts = np.linspace(0.0, 1.0, scan + 1)
    pts = a[None, :] + ts[:, None] * (b - a)[None, :]
    _, predicted, _, _ = evaluate_points(pset, k, pts)
    cls_a, cls_b = int(predicted[0]), int(predicted[-1])
    if cls_a == cls_b:
        raise NoCrossingError(f"both endpoints classify as {cls_a}")
    if class_pair is not None and (cls_a, cls_b) != tuple(class_pair):
        raise ValueError(f"expected endpoint classes {class_pair}, found ({cls_a}, {cls_b})")
    changes = np.nonzero(predicted[:-1] != predicted[1:])[0]
    if len(changes) > 1:
        raise MultipleCrossingsError(
            f"{len(changes)} class changes in pre-scan; bisect a sub-segment per crossing"
        )
    lo, hi = float(ts[changes[0]]), float(ts[changes[0] + 1])
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if classify(pset, k, a + mid * (b - a)).predicted == cls_a:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def region_report(grid: RasterGrid) -> RegionReport:
    """Count distinct classes and their 4-connected components and areas."""
    present = np.unique(grid.classes)
    components: dict[int, int] = {}
    areas: dict[int, int] = {}
    for c in present:
        mask = grid.classes == c
        _, count = ndimage.label(mask)  # default structure is 4-connectivity
        components[int(c)] = int(count)
        areas[int(c)] = int(mask.sum())
    return RegionReport(
        distinct_classes=len(present),
        components_per_class=components,
        class_areas=areas,
    )


def k_sweep(
    pset: PrototypeSet,
    k_values,
    bounds: tuple[float, float, float, float] | None = None,
    width: int = 512,
    height: int = 512,
) -> list[tuple[int, RasterGrid, RegionReport]]:
    """Rasterize and report regions for each k in ``k_values``."""
    if bounds is None:
        bounds = default_bounds(pset)
    out = []
    for k in k_values:
        grid = rasterize(pset, k, bounds, width, height)
        out.append((int(k), grid, region_report(grid)))
    return out


# --- Export formats ----------------------------------------------------------
#
# Images follow the usual convention of row 0 at the top, so grids are
# flipped vertically on write (+y points up in the picture). CSV files keep
# the array orientation (row 0 = ymin) with one grid row per line.


def class_color(index: int) -> tuple[int, int, int]:
    return PALETTE[index % len(PALETTE)]


def ppm_bytes(grid: RasterGrid) -> bytes:
    """Binary PPM (P6) of the class map using the fixed palette."""
    palette = np.array(PALETTE, dtype=np.uint8)
    rgb = palette[grid.classes % len(PALETTE)]
    header = f"P6\n{grid.width} {grid.height}\n255\n".encode()
    return header + rgb[::-1].tobytes()


def pgm_bytes(intensity: np.ndarray) -> bytes:
    """Binary PGM (P5) of an intensity grid in [0, 1] (0 = black)."""
    vals = np.round(np.clip(intensity, 0.0, 1.0) * 255.0).astype(np.uint8)
    header = f"P5\n{vals.shape[1]} {vals.shape[0]}\n255\n".encode()
    return header + vals[::-1].tobytes()


def class_csv_bytes(grid: RasterGrid) -> bytes:
    lines = "\n".join(",".join(str(int(v)) for v in row) for row in grid.classes)
    return (lines + "\n").encode()


def confidence_csv_bytes(grid: RasterGrid) -> bytes:
    lines = "\n".join(",".join(repr(float(v)) for v in row) for row in grid.confidence)
    return (lines + "\n").encode()


def write_ppm(grid: RasterGrid, path: str | Path) -> None:
    Path(path).write_bytes(ppm_bytes(grid))


def write_pgm(intensity: np.ndarray, path: str | Path) -> None:
    Path(path).write_bytes(pgm_bytes(intensity))


def write_region_report(report: RegionReport, path: str | Path) -> None:
    Path(path).write_text(json.dumps(report.to_json_dict(), indent=2) + "\n")
