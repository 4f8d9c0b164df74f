"""Generators for prototype configurations that separate more classes than
they have prototypes.

Each generator returns a :class:`Construction`: a prototype set bundled
with the neighbor count ``required_k`` it is designed for, the number of
classes its decision landscape is claimed to contain, and, where known in
closed form, the boundary crossing positions used by the verification
harness.

Class index conventions (0-based), fixed per generator:

* ``three_from_two`` / ``n_from_two``: classes ordered along the segment
  from the first prototype to the second.
* ``star_pairs``: hub class 0, spoke-tip classes 1..M-1, then the classes
  induced between the hub and each tip as M..2M-2 (same spoke order).
* ``polygon_pairs``: vertex classes 0..M-1, then the class induced on the
  edge from vertex i to vertex i+1 (mod M) as M+i.
* ``polygon_with_center``: hub class 0, vertex classes 1..M-1, hub-vertex
  classes M..2M-2, then the class on the edge from vertex j to vertex j+1
  (mod M-1) as 2M-1+j.
* circle generators: points on the t-th circle (radius t*c) belong to
  class t-1.

Probabilistic labels are assembled from exact rationals and summed
symbolically before float conversion, so they satisfy the distribution
invariant by construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .core import LabelKind, PrototypeSet, SoftLabel, make_prototype_set
from . import classifier

# Segment boundaries: ((prototype index a, prototype index b), fractions of
# the segment from a at which the predicted class changes).
BoundarySpec = list[tuple[tuple[int, int], list[float]]]


@dataclass(frozen=True, eq=False)
class RadialSpec:
    """Boundary radii along a ray, for landscapes organized in nested bands.

    The ray starts at ``origin`` and points along ``angle`` (radians).
    Crossing j separates class j from class j+1 at distance ``radii[j]``.
    """

    origin: tuple[float, float]
    angle: float
    radii: tuple[float, ...]


@dataclass(frozen=True, eq=False)
class Construction:
    """A prototype set plus the claims the harness can check against it."""

    set: PrototypeSet
    required_k: int
    claimed_classes: int
    boundary_spec: BoundarySpec | None = None
    radial_spec: RadialSpec | None = None
    # (radius, class index) per circle, for separation checks on circle data.
    circle_spec: tuple[tuple[float, int], ...] | None = None
    fit_residual: float | None = None
    params: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.claimed_classes != self.set.num_classes:
            raise ValueError(
                f"claimed_classes={self.claimed_classes} != num_classes={self.set.num_classes}"
            )
        if not 1 <= self.required_k <= len(self.set):
            raise ValueError(f"required_k={self.required_k} out of range for {len(self.set)} prototypes")
        if self.boundary_spec is not None:
            for (a, b), fractions in self.boundary_spec:
                if not all(0.0 < f < 1.0 for f in fractions):
                    raise ValueError(f"boundary fractions for pair ({a},{b}) must lie in (0,1)")
                if any(f2 <= f1 for f1, f2 in zip(fractions, fractions[1:])):
                    raise ValueError(f"boundary fractions for pair ({a},{b}) must be strictly increasing")


def three_from_two(spacing: float = 3.0) -> Construction:
    """Two prototypes whose shared middle class splits their segment in three.

    The labels (3/5, 2/5, 0) and its reversal put the crossings at 1/3 and
    2/3 of the segment regardless of the spacing; the middle class also
    claims the far field, leaving each end class an oval around its
    prototype.
    """
    if not spacing > 0:
        raise ValueError(f"spacing must be positive, got {spacing}")
    left = SoftLabel.from_exact([Fraction(3, 5), Fraction(2, 5), Fraction(0)])
    right = SoftLabel.from_exact([Fraction(0), Fraction(2, 5), Fraction(3, 5)])
    pset = make_prototype_set(
        [(0.0, 0.0), (float(spacing), 0.0)],
        [left, right],
        name=f"three_from_two(spacing={spacing})",
    )
    return Construction(
        set=pset,
        required_k=2,
        claimed_classes=3,
        boundary_spec=[((0, 1), [1.0 / 3.0, 2.0 / 3.0])],
        params={"spacing": float(spacing)},
    )


def n_from_two_labels(n: int) -> list[Fraction]:
    """Exact label weights for the first prototype of :func:`n_from_two`."""
    if n < 1:
        raise ValueError(f"n must be at least 1, got {n}")
    if n == 1:
        return [Fraction(1)]
    denom = 2 * sum(j * j for j in range(1, n))
    return [Fraction(n * (n - 1) - i * (i - 1), denom) for i in range(1, n + 1)]


def n_from_two(n: int, spacing: float | None = None) -> Construction:
    """Two prototypes separating ``n`` classes along their segment.

    The first prototype's weight on class i (1-based) is
    ``(n(n-1) - i(i-1)) / (2 * sum(j^2 for j in 1..n-1))`` and the second
    prototype carries the reversed vector. Crossings land at the fractions
    i/n of the segment. The spacing defaults to ``n`` units but the labels,
    and therefore the crossing fractions, do not depend on it.
    """
    if n < 1:
        raise ValueError(f"n must be at least 1, got {n}")
    if spacing is None:
        spacing = float(n)
    if not spacing > 0:
        raise ValueError(f"spacing must be positive, got {spacing}")
    weights = n_from_two_labels(n)
    first = SoftLabel.from_exact(weights)
    second = SoftLabel.from_exact(weights[::-1])
    pset = make_prototype_set(
        [(0.0, 0.0), (float(spacing), 0.0)],
        [first, second],
        name=f"n_from_two(n={n}, spacing={spacing})",
    )
    fractions = [i / n for i in range(1, n)]
    return Construction(
        set=pset,
        required_k=2,
        claimed_classes=n,
        boundary_spec=[((0, 1), fractions)] if fractions else None,
        params={"n": n, "spacing": float(spacing)},
    )


def star_pairs(m: int, radius: float = 1.0) -> Construction:
    """A hub prototype plus M-1 tips, inducing 2M-1 classes.

    Every hub-tip pair shares one induced class. Tips keep the weights
    (3/5 own, 2/5 shared); the hub spreads 3/(2M+1) on its own class and
    2/(2M+1) on each shared class so its label stays a distribution. Along
    each spoke the predicted class changes at distances 5p/(4M+7) and
    10p/(2M+11) from the hub, so the hub-adjacent classes thin out as M
    grows.
    """
    if m < 2:
        raise ValueError(f"star_pairs needs m >= 2, got {m}")
    if not radius > 0:
        raise ValueError(f"radius must be positive, got {radius}")
    n_classes = 2 * m - 1
    tips = m - 1
    hub = [Fraction(0)] * n_classes
    hub[0] = Fraction(3, 2 * m + 1)
    for i in range(tips):
        hub[m + i] = Fraction(2, 2 * m + 1)
    labels = [SoftLabel.from_exact(hub)]
    positions = [(0.0, 0.0)]
    for i in range(tips):
        tip = [Fraction(0)] * n_classes
        tip[1 + i] = Fraction(3, 5)
        tip[m + i] = Fraction(2, 5)
        labels.append(SoftLabel.from_exact(tip))
        angle = 2.0 * math.pi * i / tips
        positions.append((radius * math.cos(angle), radius * math.sin(angle)))
    pset = make_prototype_set(positions, labels, name=f"star_pairs(m={m}, radius={radius})")
    inner = 5.0 / (4 * m + 7)
    outer = 10.0 / (2 * m + 11)
    spec: BoundarySpec = [((0, 1 + i), [inner, outer]) for i in range(tips)]
    return Construction(
        set=pset,
        required_k=2,
        claimed_classes=n_classes,
        boundary_spec=spec,
        params={"m": m, "radius": float(radius)},
    )


def polygon_pairs(m: int, circumradius: float = 1.0) -> Construction:
    """Regular M-gon whose adjacent-vertex pairs induce 2M classes.

    Each vertex keeps weight 3/7 on its own class and 2/7 on the class it
    shares with each neighboring vertex. Solving the two crossing
    conditions on one edge puts the class changes at 1/3 and 2/3 of the
    edge, independent of M; symmetry extends this to every edge.
    """
    if m < 3:
        raise ValueError(f"polygon_pairs needs m >= 3, got {m}")
    if not circumradius > 0:
        raise ValueError(f"circumradius must be positive, got {circumradius}")
    n_classes = 2 * m
    labels = []
    positions = []
    for j in range(m):
        lab = [Fraction(0)] * n_classes
        lab[j] = Fraction(3, 7)
        lab[m + j] = Fraction(2, 7)  # edge to the next vertex
        lab[m + (j - 1) % m] = Fraction(2, 7)  # edge from the previous vertex
        labels.append(SoftLabel.from_exact(lab))
        angle = 2.0 * math.pi * j / m
        positions.append((circumradius * math.cos(angle), circumradius * math.sin(angle)))
    pset = make_prototype_set(positions, labels, name=f"polygon_pairs(m={m}, circumradius={circumradius})")
    spec: BoundarySpec = [((j, (j + 1) % m), [1.0 / 3.0, 2.0 / 3.0]) for j in range(m)]
    return Construction(
        set=pset,
        required_k=2,
        claimed_classes=n_classes,
        boundary_spec=spec,
        params={"m": m, "circumradius": float(circumradius)},
    )


def polygon_with_center_labels(vertices: int) -> tuple[list[Fraction], list[Fraction]]:
    """Hub and vertex weight templates for :func:`polygon_with_center`.

    Returns ``(hub weights, vertex weights)`` as
    ``([own, shared-per-vertex], [own, hub-share, edge-share])``. The vertex
    split 7/20, 1/20, 3/10 keeps each edge class alive (its pooled weight
    6/10 beats the 7/20 a single vertex keeps for itself) while the hub
    share is sized so a hub-vertex band survives on every spoke:
    ``(alpha - beta) * (gamma - delta) < beta * delta`` with the values
    below reduces to choosing beta between 6/(6V+7) and 1/(V+1), and the
    midpoint of that interval is used.
    """
    v = vertices
    beta = Fraction(12 * v + 13, 2 * (6 * v + 7) * (v + 1))
    alpha = 1 - v * beta
    gamma = Fraction(7, 20)
    delta = Fraction(1, 20)
    eps = Fraction(3, 10)
    return [alpha, beta], [gamma, delta, eps]


def polygon_with_center(m: int) -> Construction:
    """Vertices and center of an (M-1)-gon, separating 3M-2 classes at k=M.

    With all M prototypes contributing everywhere, the landscape contains
    the hub's own class, one class per vertex, one class per hub-vertex
    pair, and one class per polygon edge: 1 + 3(M-1) = 3M-2 in total. The
    closed-form crossing positions do not survive the extra terms, so no
    boundary spec is attached; the class count is verified on a grid.
    """
    if m < 4:
        raise ValueError(f"polygon_with_center needs m >= 4, got {m}")
    v = m - 1
    n_classes = 3 * m - 2
    (alpha, beta), (gamma, delta, eps) = polygon_with_center_labels(v)

    hub = [Fraction(0)] * n_classes
    hub[0] = alpha
    for j in range(v):
        hub[m + j] = beta
    labels = [SoftLabel.from_exact(hub)]
    positions = [(0.0, 0.0)]
    for j in range(v):
        lab = [Fraction(0)] * n_classes
        lab[1 + j] = gamma
        lab[m + j] = delta
        lab[2 * m - 1 + j] = eps  # edge to vertex j+1
        lab[2 * m - 1 + (j - 1) % v] = eps  # edge from vertex j-1
        labels.append(SoftLabel.from_exact(lab))
        angle = 2.0 * math.pi * j / v
        positions.append((math.cos(angle), math.sin(angle)))
    pset = make_prototype_set(positions, labels, name=f"polygon_with_center(m={m})")
    return Construction(
        set=pset,
        required_k=m,
        claimed_classes=n_classes,
        params={"m": m},
    )


# --- Radial label fitting ---------------------------------------------------


class RadialFitError(RuntimeError):
    """Raised when the fitter cannot push the residual below tolerance."""

    def __init__(self, residual: float, history: tuple[float, ...]):
        super().__init__(f"radial label fit did not converge; residual {residual:.3e}")
        self.residual = residual
        self.history = history


@dataclass(frozen=True, eq=False)
class RadialFit:
    """Fitted labels plus an audit trail of accepted descent steps."""

    labels: tuple[SoftLabel, ...]
    residual: float
    history: tuple[float, ...]
    targets: tuple[float, ...]
    realized: tuple[float, ...]


def _ray_scorer(positions: np.ndarray, k: int, origin, angle: float):
    """Return scores(weights, radii) evaluating the decision rule on a ray.

    Mirrors the classifier's scoring (stable distance order, inverse
    weights) but takes the label matrix as an argument so the fitter can
    probe candidate labels without rebuilding prototype sets. The ray must
    avoid prototype positions; callers keep radii clear of them.
    """
    pos = np.asarray(positions, dtype=float)
    o = np.asarray(origin, dtype=float)
    direction = np.array([math.cos(angle), math.sin(angle)])

    def scores(weights: np.ndarray, radii) -> np.ndarray:
        pts = o[None, :] + np.asarray(radii, dtype=float)[:, None] * direction
        diff = pts[:, None, :] - pos[None, :, :]
        dist = np.sqrt((diff * diff).sum(axis=2))
        order = np.argsort(dist, axis=1, kind="stable")[:, :k]
        dk = np.take_along_axis(dist, order, axis=1)
        return (weights[order] / dk[:, :, None]).sum(axis=1)

    return scores


def _measure_crossings(
    scorer,
    weights: np.ndarray,
    targets: np.ndarray,
    r_max: float,
) -> tuple[float, list[float]]:
    """Squared-error residual between realized score crossings and targets.

    For each adjacent class pair (j, j+1) the crossing is a sign change of
    the score difference along the ray; the change nearest the target is
    refined by bisection. A missing crossing costs r_max^2 so the descent
    is pushed back toward configurations where every boundary exists.
    """
    n_classes = weights.shape[1]
    samples = np.linspace(r_max * 1e-4, r_max, 1024)
    scores = scorer(weights, samples)
    residual = 0.0
    realized: list[float] = []
    for j in range(n_classes - 1):
        g = scores[:, j] - scores[:, j + 1]
        flips = np.nonzero(np.sign(g[:-1]) * np.sign(g[1:]) < 0)[0]
        if len(flips) == 0:
            residual += r_max * r_max
            realized.append(float("nan"))
            continue
        mids = 0.5 * (samples[flips] + samples[flips + 1])
        pick = flips[int(np.argmin(np.abs(mids - targets[j])))]
        lo, hi = float(samples[pick]), float(samples[pick + 1])
        g_lo = float(g[pick])
        for _ in range(60):
            mid = 0.5 * (lo + hi)
            row = scorer(weights, [mid])[0]
            g_mid = float(row[j] - row[j + 1])
            if (g_mid < 0) == (g_lo < 0):
                lo, g_lo = mid, g_mid
            else:
                hi = mid
            if hi - lo <= 1e-12 * max(1.0, hi):
                break
        r_hat = 0.5 * (lo + hi)
        realized.append(r_hat)
        residual += (r_hat - targets[j]) ** 2
    return residual, realized


def nested_band_labels(
    positions: np.ndarray, target_radii: Sequence[float], class_count: int, origin=(0.0, 0.0), angle: float = 0.0
) -> np.ndarray:
    """Closed-form label matrix whose bands cross a ray at the given radii.

    The prototype nearest ``origin`` acts as the band center; all other
    prototypes share one label. On the ray, the score difference of classes
    j and j+1 is (center_j - center_{j+1})/r - G(r) where G sums the other
    prototypes' inverse distances, so placing the difference at the target
    radius r_j just requires center_j - center_{j+1} = r_j * G(r_j). The
    outer weights count upward so each difference is exactly -1.
    """
    pos = np.asarray(positions, dtype=float)
    center_idx = int(np.argmin(np.linalg.norm(pos - np.asarray(origin, dtype=float), axis=1)))
    direction = np.array([math.cos(angle), math.sin(angle)])
    others = np.delete(np.arange(len(pos)), center_idx)

    def ray_g(r: float) -> float:
        p = np.asarray(origin, dtype=float) + r * direction
        return float(sum(1.0 / np.linalg.norm(p - pos[i]) for i in others))

    steps = [r * ray_g(r) for r in target_radii]
    center = np.zeros(class_count)
    for j in range(class_count - 2, -1, -1):
        center[j] = center[j + 1] + steps[j]
    outer = np.arange(class_count, dtype=float)
    weights = np.tile(outer, (len(pos), 1))
    weights[center_idx] = center
    return weights


def fit_radial_labels(
    positions,
    k: int,
    target_radii: Sequence[float],
    class_count: int,
    *,
    origin=(0.0, 0.0),
    angle: float = 0.0,
    initial: np.ndarray | None = None,
    seed: int = 0,
    restarts: int = 4,
    sweeps: int = 40,
    fail_tol: float = 1e-6,
    r_max: float | None = None,
) -> RadialFit:
    """Fit unrestricted labels so score crossings hit target radii on a ray.

    Parameters
    ----------
    positions : (M, 2) array of prototype positions.
    k : neighbor count the labels are fitted for.
    target_radii : strictly increasing crossing distances from ``origin``.
    class_count : number of classes the labels span.
    initial : optional starting label matrix; defaults to the closed-form
        nested-band solution, which normally lands inside tolerance at once.
    seed, restarts, sweeps : deterministic restart schedule for the
        coordinate descent polish.
    fail_tol : residual above this after all restarts raises RadialFitError.

    Returns a :class:`RadialFit` whose history records the initial residual
    followed by every accepted (strictly improving) descent step.
    """
    pos = np.asarray(positions, dtype=float)
    targets = np.asarray(target_radii, dtype=float)
    if targets.ndim != 1 or len(targets) != class_count - 1:
        raise ValueError(f"expected {class_count - 1} target radii, got {targets.shape}")
    if len(targets) and not np.all(np.diff(targets) > 0):
        raise ValueError("target radii must be strictly increasing")
    if r_max is None:
        r_max = 1.6 * float(targets[-1]) if len(targets) else 1.0

    if initial is None:
        weights = nested_band_labels(pos, targets, class_count, origin=origin, angle=angle)
    else:
        weights = np.array(initial, dtype=float)
        if weights.shape != (len(pos), class_count):
            raise ValueError(f"initial labels must have shape {(len(pos), class_count)}")

    if class_count < 2:
        labels = tuple(SoftLabel(row, LabelKind.UNRESTRICTED) for row in weights)
        return RadialFit(labels, 0.0, (0.0,), tuple(), tuple())

    rng = np.random.default_rng(seed)
    scale = max(1.0, float(np.abs(weights).max()))
    scorer = _ray_scorer(pos, k, origin, angle)

    def measure(w):
        return _measure_crossings(scorer, w, targets, r_max)

    best_w = weights.copy()
    best_res, best_real = measure(best_w)
    history = [best_res]

    converge_tol = 1e-12
    for restart in range(restarts + 1):
        if best_res <= converge_tol:
            break
        if restart == 0:
            w = best_w.copy()
        else:
            w = best_w + rng.normal(0.0, 0.05 * scale, size=best_w.shape)
        res, _ = measure(w)
        if res < best_res:
            best_w, best_res = w.copy(), res
            history.append(res)
        step = 0.25 * scale
        for _ in range(sweeps):
            improved = False
            for idx in np.ndindex(w.shape):
                base = w[idx]
                for cand in (base + step, base - step):
                    w[idx] = cand
                    trial, _ = measure(w)
                    if trial < res:
                        res = trial
                        base = cand
                        improved = True
                        if res < best_res:
                            best_res = res
                            best_w = w.copy()
                            history.append(res)
                    w[idx] = base
            if res <= converge_tol:
                break
            if not improved:
                step *= 0.5
                if step < 1e-9 * scale:
                    break

    best_res, best_real = measure(best_w)
    if best_res > fail_tol:
        raise RadialFitError(best_res, tuple(history))
    labels = tuple(SoftLabel(row, LabelKind.UNRESTRICTED) for row in best_w)
    return RadialFit(
        labels=labels,
        residual=float(best_res),
        history=tuple(history),
        targets=tuple(float(t) for t in targets),
        realized=tuple(float(r) for r in best_real),
    )


def concentric_ellipses(num_classes: int) -> Construction:
    """Three prototypes whose landscape is a stack of nested elliptical bands.

    One prototype sits at the origin; two more sit on the minor axis far
    enough out that their pooled pull elongates every band along the x
    axis. Labels come from :func:`fit_radial_labels` targeting boundary
    radii 1, 2, ..., num_classes-1 along the +x ray.
    """
    if num_classes < 2:
        raise ValueError(f"num_classes must be at least 2, got {num_classes}")
    targets = [float(i) for i in range(1, num_classes)]
    s = max(1.5 * targets[-1], 3.0)
    positions = np.array([(0.0, 0.0), (0.0, s), (0.0, -s)])
    fit = fit_radial_labels(positions, 3, targets, num_classes)
    pset = make_prototype_set(positions, fit.labels, name=f"concentric_ellipses(num_classes={num_classes})")
    return Construction(
        set=pset,
        required_k=3,
        claimed_classes=num_classes,
        radial_spec=RadialSpec(origin=(0.0, 0.0), angle=0.0, radii=tuple(targets)),
        fit_residual=fit.residual,
        params={"num_classes": num_classes},
    )


# --- Concentric-circle baselines --------------------------------------------


def circle_prototype_count(t: int) -> int:
    """Prototype budget for the t-th circle under the nearest-neighbor bound.

    A point on circle t (radius t*c) must sit closer to its own circle's
    prototypes than to the adjacent circles one radial gap c away. Equally
    spaced prototypes achieve that once the worst-case chord 2tc*sin(pi/m)
    drops to c, i.e. m >= pi / arccos(1 - 1/(2t^2)).
    """
    if t < 1:
        raise ValueError(f"circle index must be >= 1, got {t}")
    return math.ceil(math.pi / math.acos(1.0 - 1.0 / (2.0 * t * t)))


def _circle_points(radius: float, count: int, samples_or_offsets) -> np.ndarray:
    angles = np.asarray(samples_or_offsets, dtype=float)
    return np.column_stack((radius * np.cos(angles), radius * np.sin(angles)))


def _misclassified_on_circle(pset: PrototypeSet, k: int, radius: float, cls: int, samples: int) -> int:
    angles = 2.0 * math.pi * np.arange(samples) / samples
    pts = _circle_points(radius, samples, angles)
    _, predicted, _, _ = classifier.evaluate_points(pset, k, pts)
    return int(np.count_nonzero(predicted != cls))


def circle_hard_baseline(n: int, c: float = 1.0) -> Construction:
    """Hard-label prototypes on N concentric circles, separated by 1NN.

    Circle t (radius t*c) starts with :func:`circle_prototype_count`
    prototypes equally spaced around it, all labeled class t-1. Each
    circle's count is then checked by dense sampling and incremented until
    no sampled point on the circle is misclassified, which guards against
    edge cases in the bound without over-provisioning.
    """
    if n < 1:
        raise ValueError(f"n must be at least 1, got {n}")
    if not c > 0:
        raise ValueError(f"c must be positive, got {c}")
    counts = [circle_prototype_count(t) for t in range(1, n + 1)]

    def build(counts_now: list[int]) -> PrototypeSet:
        positions = []
        labels = []
        for t, count in enumerate(counts_now, start=1):
            radius = t * c
            angles = 2.0 * math.pi * np.arange(count) / count
            for a in angles:
                positions.append((radius * math.cos(a), radius * math.sin(a)))
                one_hot = np.zeros(n)
                one_hot[t - 1] = 1.0
                labels.append(SoftLabel(one_hot, LabelKind.HARD))
        return make_prototype_set(
            positions, labels, name=f"circle_hard_baseline(n={n}, c={c}, counts={counts_now})"
        )

    # Verification-driven increments; the analytic counts normally suffice.
    check_samples = 4096
    for _ in range(16):
        pset = build(counts)
        bad = [
            t
            for t in range(1, n + 1)
            if _misclassified_on_circle(pset, 1, t * c, t - 1, check_samples) > 0
        ]
        if not bad:
            break
        for t in bad:
            counts[t - 1] += 1
    else:
        raise RuntimeError("circle prototype counts failed to stabilize")

    circle_spec = tuple((t * c, t - 1) for t in range(1, n + 1))
    return Construction(
        set=pset,
        required_k=1,
        claimed_classes=n,
        circle_spec=circle_spec,
        params={"n": n, "c": float(c), "counts": list(counts)},
    )


def circle_soft_fit(n: int = 6, c: float = 1.0) -> Construction:
    """Five soft-label prototypes separating N concentric circles.

    One prototype at the center and four far outside the data (at distance
    4*N*c on the axes) are fitted so the score crossings fall halfway
    between adjacent circles. The distant quadruple keeps the bands nearly
    circular, so the midpoint margins hold at every angle.
    """
    if n < 1:
        raise ValueError(f"n must be at least 1, got {n}")
    if not c > 0:
        raise ValueError(f"c must be positive, got {c}")
    s = 4.0 * n * c
    positions = np.array([(0.0, 0.0), (s, 0.0), (-s, 0.0), (0.0, s), (0.0, -s)])
    targets = [(t + 0.5) * c for t in range(1, n)]
    circle_spec = tuple((t * c, t - 1) for t in range(1, n + 1))
    if n == 1:
        labels = [SoftLabel(np.array([1.0]), LabelKind.UNRESTRICTED)] * 5
        pset = make_prototype_set(positions, labels, name=f"circle_soft_fit(n=1, c={c})")
        return Construction(
            set=pset, required_k=5, claimed_classes=1, circle_spec=circle_spec, fit_residual=0.0,
            params={"n": n, "c": float(c)},
        )
    fit = fit_radial_labels(positions, 5, targets, n, r_max=0.8 * s)
    pset = make_prototype_set(positions, fit.labels, name=f"circle_soft_fit(n={n}, c={c})")
    return Construction(
        set=pset,
        required_k=5,
        claimed_classes=n,
        radial_spec=RadialSpec(origin=(0.0, 0.0), angle=0.0, radii=tuple(targets)),
        circle_spec=circle_spec,
        fit_residual=fit.residual,
        params={"n": n, "c": float(c)},
    )


# Name -> factory registry used by the CLI and the harness. Values are
# (factory, {parameter: default or REQUIRED}).
REQUIRED = object()
REGISTRY: dict[str, tuple[Callable[..., Construction], dict]] = {
    "three_from_two": (three_from_two, {"spacing": 3.0}),
    "n_from_two": (n_from_two, {"n": REQUIRED, "spacing": None}),
    "star_pairs": (star_pairs, {"m": REQUIRED, "radius": 1.0}),
    "polygon_pairs": (polygon_pairs, {"m": REQUIRED, "circumradius": 1.0}),
    "polygon_with_center": (polygon_with_center, {"m": REQUIRED}),
    "concentric_ellipses": (concentric_ellipses, {"num_classes": REQUIRED}),
    "circle_hard_baseline": (circle_hard_baseline, {"n": REQUIRED, "c": 1.0}),
    "circle_soft_fit": (circle_soft_fit, {"n": 6, "c": 1.0}),
}


def build_named(name: str, **params) -> Construction:
    """Instantiate a registered construction by name."""
    if name not in REGISTRY:
        raise ValueError(f"unknown construction {name!r}; known: {', '.join(sorted(REGISTRY))}")
    factory, defaults = REGISTRY[name]
    kwargs = {}
    for key, default in defaults.items():
        if key in params:
            kwargs[key] = params[key]
        elif default is REQUIRED:
            raise ValueError(f"construction {name!r} requires parameter {key!r}")
        elif default is not None:
            kwargs[key] = default
    unknown = set(params) - set(defaults)
    if unknown:
        raise ValueError(f"unknown parameters for {name!r}: {sorted(unknown)}")
    return factory(**kwargs)
