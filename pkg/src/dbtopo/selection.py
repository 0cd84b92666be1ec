"""Model selection from homological summaries of classifier boundaries."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .complexes import build_lslvr_filtration, local_scales
from .datasets import LabeledPointCloud
from .errors import InvalidParameterError, ParseError
from .persistence import PersistenceDiagram, compute_persistence

__all__ = [
    "ClassifierOutputs",
    "boundary_diagram",
    "validation_select",
    "ensemble_average",
    "ensemble_labels",
    "knn_predict",
    "save_prediction_csv",
    "load_prediction_csv",
]


@dataclass(frozen=True)
class ClassifierOutputs:
    """Inputs, predicted labels and optional class-1 probabilities."""

    inputs: np.ndarray
    predicted_labels: np.ndarray
    probabilities: np.ndarray | None = None

    def __post_init__(self) -> None:
        pts = np.asarray(self.inputs, dtype=float)
        lab = np.asarray(self.predicted_labels, dtype=np.int64)
        if lab.shape[0] != pts.shape[0]:
            raise InvalidParameterError("inputs and predicted_labels length mismatch")
        if lab.size and not np.isin(lab, (0, 1)).all():
            raise InvalidParameterError("predicted labels must all be 0 or 1")
        pts.setflags(write=False)
        lab.setflags(write=False)
        object.__setattr__(self, "inputs", pts)
        object.__setattr__(self, "predicted_labels", lab)
        if self.probabilities is not None:
            prob = np.asarray(self.probabilities, dtype=float)
            if prob.shape != lab.shape:
                raise InvalidParameterError("probabilities length mismatch")
            if prob.size and ((prob < 0) | (prob > 1)).any():
                raise InvalidParameterError("probabilities must lie in [0, 1]")
            # threshold-0.5 consistency, ties predicting 1
            if not np.array_equal((prob >= 0.5).astype(np.int64), lab):
                raise InvalidParameterError(
                    "probabilities inconsistent with labels at threshold 0.5"
                )
            prob.setflags(write=False)
            object.__setattr__(self, "probabilities", prob)

    def __len__(self) -> int:
        return int(self.predicted_labels.shape[0])


def boundary_diagram(
    outputs: ClassifierOutputs, k_opposite: int = 4, kappa_max: float = 1.3
) -> PersistenceDiagram:
    """Persistence diagram of the classifier's predicted decision boundary.

    Single-class predictions yield an empty diagram (no cross-class edges
    exist, hence no boundary structure to measure).
    """
    lab = outputs.predicted_labels
    if len(outputs) == 0 or (lab == 0).all() or (lab == 1).all():
        return PersistenceDiagram(pairs=())
    scales = local_scales(outputs.inputs, lab, k_opposite=k_opposite)
    filtration = build_lslvr_filtration(outputs.inputs, lab, scales, kappa_max=kappa_max)
    return compute_persistence(filtration)


def validation_select(bank: list[ClassifierOutputs], queried_labels) -> tuple[int, float]:
    """Bank index with the lowest misclassification rate on the queried points.

    Bank members must already be restricted to the queried indices, aligned
    with `queried_labels`. Ties break to the lowest index.
    """
    truth = np.asarray(queried_labels, dtype=np.int64)
    if truth.size == 0:
        raise InvalidParameterError("queried set must be nonempty")
    if not bank:
        raise InvalidParameterError("bank must be nonempty")
    best_idx, best_err = 0, float("inf")
    for idx, member in enumerate(bank):
        if len(member) != truth.size:
            raise InvalidParameterError(
                f"bank member {idx} has {len(member)} outputs, expected {truth.size}"
            )
        err = float(np.mean(member.predicted_labels != truth))
        if err < best_err:
            best_idx, best_err = idx, err
    return best_idx, best_err


def ensemble_average(p_a, p_b) -> np.ndarray:
    """Elementwise mean of two probability vectors (label 1 at mean >= 0.5)."""
    a = np.asarray(p_a, dtype=float)
    b = np.asarray(p_b, dtype=float)
    if a.shape != b.shape:
        raise InvalidParameterError(f"length mismatch: {a.shape} vs {b.shape}")
    for name, v in (("p_a", a), ("p_b", b)):
        if v.size and ((v < 0) | (v > 1)).any():
            raise InvalidParameterError(f"{name} entries must lie in [0, 1]")
    return (a + b) / 2.0


def ensemble_labels(mean_probabilities) -> np.ndarray:
    probs = np.asarray(mean_probabilities, dtype=float)
    return (probs >= 0.5).astype(np.int64)


def knn_predict(train: LabeledPointCloud, query_points, k: int) -> ClassifierOutputs:
    """Majority vote over the k nearest training points.

    Distance ties prefer the lower training index; vote ties predict 1.
    """
    if train.labels is None or len(train) == 0:
        raise InvalidParameterError("training cloud must be nonempty and labeled")
    if not 1 <= k <= len(train):
        raise InvalidParameterError(f"need 1 <= k <= {len(train)}, got {k}")
    queries = np.asarray(query_points, dtype=float)
    diff = queries[:, None, :] - train.points[None, :, :]
    dist = np.sqrt(np.einsum("ijk,ijk->ij", diff, diff))
    n_train = len(train)
    order = np.lexsort((np.broadcast_to(np.arange(n_train), dist.shape), dist), axis=1)
    votes = train.labels[order[:, :k]]
    prob = votes.mean(axis=1)
    labels = (prob >= 0.5).astype(np.int64)
    return ClassifierOutputs(inputs=queries, predicted_labels=labels, probabilities=prob)


def save_prediction_csv(outputs: ClassifierOutputs, path) -> None:
    """Rows `x1,...,xd,label[,prob1]`."""
    with open(path, "w", encoding="utf-8") as fh:
        for i in range(len(outputs)):
            cols = [format(x, ".17g") for x in outputs.inputs[i]]
            cols.append(str(int(outputs.predicted_labels[i])))
            if outputs.probabilities is not None:
                cols.append(format(outputs.probabilities[i], ".17g"))
            fh.write(",".join(cols) + "\n")


def load_prediction_csv(path, with_probabilities: bool) -> ClassifierOutputs:
    rows = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            rows.append((lineno, line.split(",")))
    if not rows:
        return ClassifierOutputs(
            inputs=np.empty((0, 2)), predicted_labels=np.empty(0, dtype=np.int64)
        )
    width = len(rows[0][1])
    tail = 2 if with_probabilities else 1
    if width < tail + 1:
        raise ParseError("prediction file needs coordinates plus label column(s)")
    inputs = np.empty((len(rows), width - tail))
    labels = np.empty(len(rows), dtype=np.int64)
    probs = np.empty(len(rows)) if with_probabilities else None
    for out_i, (lineno, cols) in enumerate(rows):
        if len(cols) != width:
            raise ParseError(f"row {lineno}: expected {width} columns, found {len(cols)}")
        try:
            inputs[out_i] = [float(c) for c in cols[: width - tail]]
            labels[out_i] = int(cols[width - tail])
            if probs is not None:
                probs[out_i] = float(cols[-1])
        except ValueError as exc:
            raise ParseError(f"row {lineno}: malformed field") from exc
    return ClassifierOutputs(inputs=inputs, predicted_labels=labels, probabilities=probs)
