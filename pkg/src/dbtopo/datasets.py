"""Point-cloud containers, synthetic generators, label oracles and file I/O.

All randomness flows through numpy's Philox counter-based generator so that
identical (n, seed, parameters) inputs produce bit-identical clouds on every
platform.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidGeometryError, InvalidParameterError, ParseError

__all__ = [
    "CircleComponent",
    "BoundaryDescriptor",
    "LabeledPointCloud",
    "LabelOracle",
    "default_two_circles_geometry",
    "generate_two_circles",
    "generate_annulus_cloud",
    "load_point_csv",
    "save_point_csv",
    "load_descriptor_json",
    "save_descriptor_json",
]

ANNULUS_SQUARE_SIDE = 5.0


def _rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(seed))


@dataclass(frozen=True)
class CircleComponent:
    center: tuple[float, float]
    radius: float

    def __post_init__(self) -> None:
        if not self.radius > 0:
            raise InvalidGeometryError(f"circle radius must be positive, got {self.radius}")


@dataclass(frozen=True)
class BoundaryDescriptor:
    """Analytic description of a boundary made of disjoint circles."""

    components: tuple[CircleComponent, ...]
    true_betti_0: int
    true_betti_1: int

    def __post_init__(self) -> None:
        comps = tuple(self.components)
        object.__setattr__(self, "components", comps)
        for i in range(len(comps)):
            for j in range(i + 1, len(comps)):
                a, b = comps[i], comps[j]
                d = float(np.hypot(a.center[0] - b.center[0], a.center[1] - b.center[1]))
                if d <= a.radius + b.radius:
                    raise InvalidGeometryError(
                        f"circles {i} and {j} overlap (center distance {d:g} <= "
                        f"radius sum {a.radius + b.radius:g})"
                    )
        if self.true_betti_0 < 0 or self.true_betti_1 < 0:
            raise InvalidGeometryError("Betti numbers must be nonnegative")
        if comps and self.true_betti_1 != len(comps):
            raise InvalidGeometryError(
                f"circle boundary needs true_betti_1 == component count "
                f"({len(comps)}), got {self.true_betti_1}"
            )


@dataclass(frozen=True)
class LabeledPointCloud:
    """Points in R^d with optional binary labels and boundary descriptor."""

    points: np.ndarray
    labels: np.ndarray | None = None
    boundary: BoundaryDescriptor | None = None

    def __post_init__(self) -> None:
        pts = np.ascontiguousarray(np.asarray(self.points, dtype=float))
        if pts.ndim != 2:
            pts = pts.reshape(len(pts), -1) if len(pts) else pts.reshape(0, 2)
        if pts.shape[0] > 0 and pts.shape[1] < 1:
            raise InvalidParameterError("points must have dimension >= 1")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)
        if self.labels is not None:
            lab = np.asarray(self.labels, dtype=np.int64)
            if lab.shape != (pts.shape[0],):
                raise InvalidParameterError(
                    f"labels length {lab.shape} does not match {pts.shape[0]} points"
                )
            if lab.size and not np.isin(lab, (0, 1)).all():
                raise InvalidParameterError("labels must all be 0 or 1")
            lab.setflags(write=False)
            object.__setattr__(self, "labels", lab)

    def __len__(self) -> int:
        return self.points.shape[0]

    @property
    def dimension(self) -> int:
        return self.points.shape[1] if self.points.size else self.points.shape[1]

    def class_points(self, label: int) -> np.ndarray:
        if self.labels is None:
            raise InvalidParameterError("cloud has no labels")
        return self.points[self.labels == label]


@dataclass(frozen=True)
class LabelOracle:
    """Deterministic, total label source for a point cloud."""

    labels: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        lab = np.asarray(self.labels, dtype=np.int64)
        if lab.size and not np.isin(lab, (0, 1)).all():
            raise InvalidParameterError("oracle labels must all be 0 or 1")
        lab.setflags(write=False)
        object.__setattr__(self, "labels", lab)

    @classmethod
    def from_cloud(cls, cloud: LabeledPointCloud) -> "LabelOracle":
        if cloud.labels is None:
            raise InvalidParameterError("cloud carries no labels to build an oracle from")
        return cls(labels=cloud.labels)

    @classmethod
    def from_file(cls, path) -> "LabelOracle":
        """Label file: one integer label per line, keyed by line order."""
        values = []
        with open(path, "r", encoding="utf-8") as fh:
            for row, line in enumerate(fh, start=1):
                line = line.strip()
                if not line:
                    continue
                try:
                    v = int(line)
                except ValueError as exc:
                    raise ParseError(f"row {row}: non-integer label {line!r}") from exc
                if v not in (0, 1):
                    raise ParseError(f"row {row}: label {v} outside {{0, 1}}")
                values.append(v)
        return cls(labels=np.asarray(values, dtype=np.int64))

    def __len__(self) -> int:
        return int(self.labels.shape[0])

    def __call__(self, index: int) -> int:
        return int(self.labels[index])


def default_two_circles_geometry() -> BoundaryDescriptor:
    """Two unit circles centered at (-2, 0) and (2, 0)."""
    return BoundaryDescriptor(
        components=(
            CircleComponent(center=(-2.0, 0.0), radius=1.0),
            CircleComponent(center=(2.0, 0.0), radius=1.0),
        ),
        true_betti_0=2,
        true_betti_1=2,
    )


def _geometry_bbox(geometry: BoundaryDescriptor) -> tuple[float, float, float, float]:
    """Bounding box of the circles, inflated by the largest radius."""
    xs = [c.center[0] for c in geometry.components]
    ys = [c.center[1] for c in geometry.components]
    rs = [c.radius for c in geometry.components]
    pad = max(rs)
    lo_x = min(x - r for x, r in zip(xs, rs)) - pad
    hi_x = max(x + r for x, r in zip(xs, rs)) + pad
    lo_y = min(y - r for y, r in zip(ys, rs)) - pad
    hi_y = max(y + r for y, r in zip(ys, rs)) + pad
    return lo_x, hi_x, lo_y, hi_y


def signed_distance_to_circles(points: np.ndarray, geometry: BoundaryDescriptor) -> np.ndarray:
    """Signed distance to the union of disks: negative inside any disk."""
    pts = np.asarray(points, dtype=float)
    sd = np.full(pts.shape[0], np.inf)
    for comp in geometry.components:
        d = np.hypot(pts[:, 0] - comp.center[0], pts[:, 1] - comp.center[1]) - comp.radius
        sd = np.minimum(sd, d)
    return sd


def generate_two_circles(
    n: int,
    seed: int,
    geometry: BoundaryDescriptor | None = None,
    noise: float = 0.0,
) -> LabeledPointCloud:
    """Uniform points in the inflated bounding box of two disjoint circles.

    Label is 1 iff the point lies inside either circle; `noise` adds a
    Gaussian perturbation of that scale to the signed boundary distance
    before thresholding, so labels stay deterministic given the seed.
    """
    if n < 0:
        raise InvalidParameterError(f"n must be >= 0, got {n}")
    if noise < 0:
        raise InvalidParameterError(f"noise must be >= 0, got {noise}")
    if geometry is None:
        geometry = default_two_circles_geometry()
    if len(geometry.components) != 2:
        raise InvalidGeometryError(
            f"two-circles generator needs exactly 2 circles, got {len(geometry.components)}"
        )
    gen = _rng(seed)
    lo_x, hi_x, lo_y, hi_y = _geometry_bbox(geometry)
    pts = np.column_stack(
        (gen.uniform(lo_x, hi_x, size=n), gen.uniform(lo_y, hi_y, size=n))
    )
    sd = signed_distance_to_circles(pts, geometry)
    if noise > 0:
        sd = sd + noise * gen.standard_normal(n)
    labels = (sd < 0).astype(np.int64)
    return LabeledPointCloud(points=pts, labels=labels, boundary=geometry)


def generate_annulus_cloud(n: int, seed: int, tau: float, w: float) -> LabeledPointCloud:
    """Uniform points on the 5x5 square with a circular boundary of radius tau.

    Outside the width-w tube around the circle the label is the disk
    indicator; inside the tube the two classes overlap completely and the
    label is a fair coin (seed-deterministic).
    """
    if n < 0:
        raise InvalidParameterError(f"n must be >= 0, got {n}")
    if not tau > 0:
        raise InvalidParameterError(f"tau must be positive, got {tau}")
    if not 0 <= w < tau:
        raise InvalidParameterError(f"need 0 <= w < tau, got w={w}, tau={tau}")
    half = ANNULUS_SQUARE_SIDE / 2.0
    if tau + w > half:
        raise InvalidGeometryError(
            f"circle of radius tau+w={tau + w:g} does not fit inside the "
            f"{ANNULUS_SQUARE_SIDE:g}x{ANNULUS_SQUARE_SIDE:g} square"
        )
    gen = _rng(seed)
    pts = gen.uniform(-half, half, size=(n, 2))
    coins = gen.integers(0, 2, size=n)
    r = np.hypot(pts[:, 0], pts[:, 1])
    labels = (r < tau).astype(np.int64)
    if w > 0:
        tube = (r >= tau - w) & (r <= tau + w)
        labels[tube] = coins[tube]
    descriptor = BoundaryDescriptor(
        components=(CircleComponent(center=(0.0, 0.0), radius=tau),),
        true_betti_0=1,
        true_betti_1=1,
    )
    return LabeledPointCloud(points=pts, labels=labels, boundary=descriptor)


def save_point_csv(cloud: LabeledPointCloud, path) -> None:
    """Rows `x1,...,xd[,label]`, 17 significant digits per coordinate."""
    with open(path, "w", encoding="utf-8") as fh:
        for i in range(len(cloud)):
            cols = [format(x, ".17g") for x in cloud.points[i]]
            if cloud.labels is not None:
                cols.append(str(int(cloud.labels[i])))
            fh.write(",".join(cols) + "\n")


def load_point_csv(path, labeled: bool | None = None) -> LabeledPointCloud:
    """Inverse of save_point_csv.

    When `labeled` is None the trailing-integer-column heuristic decides:
    a final column that is exactly "0" or "1" on every row is the label.
    """
    rows: list[list[str]] = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            rows.append([lineno, line.split(",")])  # type: ignore[list-item]
    if not rows:
        return LabeledPointCloud(points=np.empty((0, 2)))
    width = len(rows[0][1])
    for lineno, cols in rows:
        if len(cols) != width:
            raise ParseError(
                f"row {lineno}: expected {width} columns, found {len(cols)}"
            )
    if labeled is None:
        labeled = width >= 2 and all(cols[-1].strip() in ("0", "1") for _, cols in rows)
    if labeled and width < 2:
        raise ParseError("labeled file needs at least one coordinate column plus label")
    points = np.empty((len(rows), width - 1 if labeled else width))
    labels = np.empty(len(rows), dtype=np.int64) if labeled else None
    for out_i, (lineno, cols) in enumerate(rows):
        coord_cols = cols[:-1] if labeled else cols
        try:
            points[out_i] = [float(c) for c in coord_cols]
        except ValueError as exc:
            raise ParseError(f"row {lineno}: non-numeric coordinate") from exc
        if labeled:
            tok = cols[-1].strip()
            if tok not in ("0", "1"):
                raise ParseError(f"row {lineno}: label {tok!r} outside {{0, 1}}")
            labels[out_i] = int(tok)
    return LabeledPointCloud(points=points, labels=labels)


def save_descriptor_json(descriptor: BoundaryDescriptor, path) -> None:
    payload = {
        "circles": [
            {"c": [comp.center[0], comp.center[1]], "r": comp.radius}
            for comp in descriptor.components
        ],
        "betti0": descriptor.true_betti_0,
        "betti1": descriptor.true_betti_1,
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh)
        fh.write("\n")


def load_descriptor_json(path) -> BoundaryDescriptor:
    with open(path, "r", encoding="utf-8") as fh:
        payload = json.load(fh)
    try:
        components = tuple(
            CircleComponent(center=(float(c["c"][0]), float(c["c"][1])), radius=float(c["r"]))
            for c in payload["circles"]
        )
        return BoundaryDescriptor(
            components=components,
            true_betti_0=int(payload["betti0"]),
            true_betti_1=int(payload["betti1"]),
        )
    except (KeyError, TypeError, IndexError) as exc:
        raise ParseError(f"malformed descriptor JSON: {exc}") from exc
