"""Persistent homology over Z/2 in dimensions 0 and 1.

Columns of the boundary matrix are kept as Python integers (bit i set when
row i is present), so the reduction's column additions are single XORs.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .complexes import FiltrationComplex
from .errors import InvalidFiltrationError, InvalidParameterError, ParseError

__all__ = [
    "PersistencePair",
    "PersistenceDiagram",
    "compute_persistence",
    "betti_at",
    "betti0_unionfind",
    "diagram_to_json",
    "diagram_from_json",
    "save_diagram_json",
    "load_diagram_json",
]


@dataclass(frozen=True, order=True)
class PersistencePair:
    dim: int
    birth: float
    death: float  # math.inf for essential classes

    def __post_init__(self) -> None:
        if self.dim not in (0, 1):
            raise InvalidParameterError(f"pair dimension must be 0 or 1, got {self.dim}")
        if self.birth > self.death:
            raise InvalidParameterError(f"birth {self.birth} exceeds death {self.death}")

    @property
    def is_zero_persistence(self) -> bool:
        return self.birth == self.death


@dataclass(frozen=True)
class PersistenceDiagram:
    pairs: tuple[PersistencePair, ...] = field(default=())

    def __post_init__(self) -> None:
        object.__setattr__(self, "pairs", tuple(sorted(self.pairs)))

    def in_dim(self, dim: int, include_zero: bool = False) -> tuple[PersistencePair, ...]:
        return tuple(
            p
            for p in self.pairs
            if p.dim == dim and (include_zero or not p.is_zero_persistence)
        )


def compute_persistence(filtration: FiltrationComplex) -> PersistenceDiagram:
    """Standard Z/2 boundary-matrix column reduction in filtration order.

    Zero-persistence pairs are retained in the diagram (callers filter via
    in_dim); unpaired 0- and 1-cycles get death = +inf.
    """
    simplices = filtration.simplices  # already sorted and face-closed
    index = {s.vertices: i for i, s in enumerate(simplices)}
    n = len(simplices)
    columns: list[int] = []
    for s in simplices:
        col = 0
        if s.dimension > 0:
            for drop in range(len(s.vertices)):
                face = s.vertices[:drop] + s.vertices[drop + 1 :]
                if face not in index:
                    raise InvalidFiltrationError(f"missing face {face} of {s.vertices}")
                col ^= 1 << index[face]
        columns.append(col)

    low_to_col: dict[int, int] = {}
    pairs: list[PersistencePair] = []
    paired = [False] * n
    for j in range(n):
        col = columns[j]
        while col:
            low = col.bit_length() - 1
            k = low_to_col.get(low)
            if k is None:
                break
            col ^= columns[k]
        columns[j] = col
        if col:
            low = col.bit_length() - 1
            low_to_col[low] = j
            paired[low] = paired[j] = True
            birth_dim = simplices[low].dimension
            if birth_dim <= 1:
                pairs.append(
                    PersistencePair(
                        dim=birth_dim,
                        birth=simplices[low].filtration_value,
                        death=simplices[j].filtration_value,
                    )
                )
    for j in range(n):
        if not paired[j] and simplices[j].dimension <= 1:
            pairs.append(
                PersistencePair(
                    dim=simplices[j].dimension,
                    birth=simplices[j].filtration_value,
                    death=float("inf"),
                )
            )
    return PersistenceDiagram(pairs=tuple(pairs))


def betti_at(diagram: PersistenceDiagram, dim: int, t: float) -> int:
    """Count of dim-pairs alive at t under the [birth, death) convention."""
    return sum(1 for p in diagram.pairs if p.dim == dim and p.birth <= t < p.death)


def betti0_unionfind(filtration: FiltrationComplex, t: float) -> int:
    """Connected components of the 1-skeleton at scale t, via union-find."""
    vertices = [s.vertices[0] for s in filtration.simplices if s.dimension == 0 and s.filtration_value <= t]
    parent = {v: v for v in vertices}

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for s in filtration.simplices:
        if s.dimension == 1 and s.filtration_value <= t:
            ra, rb = find(s.vertices[0]), find(s.vertices[1])
            if ra != rb:
                parent[rb] = ra
    return len({find(v) for v in vertices})


def diagram_to_json(diagram: PersistenceDiagram, include_zero: bool = False) -> str:
    def encode(p: PersistencePair):
        return [p.birth, "inf" if p.death == float("inf") else p.death]

    payload = {
        "dim0": [encode(p) for p in diagram.in_dim(0, include_zero)],
        "dim1": [encode(p) for p in diagram.in_dim(1, include_zero)],
    }
    return json.dumps(payload)


def diagram_from_json(text: str) -> PersistenceDiagram:
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"malformed diagram JSON: {exc}") from exc
    pairs = []
    for dim_key, dim in (("dim0", 0), ("dim1", 1)):
        for entry in payload.get(dim_key, ()):
            try:
                birth = float(entry[0])
                death = float("inf") if entry[1] == "inf" else float(entry[1])
            except (IndexError, TypeError, ValueError) as exc:
                raise ParseError(f"malformed {dim_key} entry {entry!r}") from exc
            pairs.append(PersistencePair(dim=dim, birth=birth, death=death))
    return PersistenceDiagram(pairs=tuple(pairs))


def save_diagram_json(diagram: PersistenceDiagram, path, include_zero: bool = False) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(diagram_to_json(diagram, include_zero))
        fh.write("\n")


def load_diagram_json(path) -> PersistenceDiagram:
    with open(path, "r", encoding="utf-8") as fh:
        return diagram_from_json(fh.read())
