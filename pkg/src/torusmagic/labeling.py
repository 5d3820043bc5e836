"""Vertex labelings by group elements, the magic verifier and the file format."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable, Sequence

from .abelian import GroupElement, GroupError, GroupSpec, residue_converter
from .torus import Graph, GraphError, build_hypercube, build_torus

__all__ = [
    "LabelingError",
    "PartialLabelingError",
    "OrderMismatchError",
    "LabelingFormatError",
    "Labeling",
    "VerifyReport",
    "weight",
    "verify",
    "translate",
    "map_labels",
    "to_document",
    "from_document",
    "write_labeling",
    "read_labeling",
]


class LabelingError(ValueError):
    pass


class PartialLabelingError(LabelingError):
    pass


class OrderMismatchError(LabelingError):
    pass


class LabelingFormatError(LabelingError):
    pass


@dataclass(frozen=True)
class Labeling:
    """Assignment of group elements to the vertices of ``graph``.

    ``labels[v]`` is ``None`` for an unassigned vertex of a partial labeling.
    """

    graph: Graph
    group: GroupSpec
    labels: tuple[GroupElement | None, ...]

    def __post_init__(self) -> None:
        if len(self.labels) != self.graph.vertex_count:
            raise LabelingError(f"{len(self.labels)} labels for {self.graph.vertex_count} vertices")
        for a in self.labels:
            if a is not None and a.group != self.group:
                raise LabelingError(f"label {a} does not belong to {self.group.notation()}")

    @property
    def is_total(self) -> bool:
        return all(a is not None for a in self.labels)

    def __getitem__(self, v: int) -> GroupElement | None:
        return self.labels[v]


@dataclass(frozen=True)
class VerifyReport:
    is_bijection: bool
    is_magic: bool
    magic_constant: GroupElement | None = None
    # (vertex, expected weight, actual weight); expected is the first vertex's weight
    first_violation: tuple[int, GroupElement, GroupElement] | None = None
    duplicate: GroupElement | None = None

    def __bool__(self) -> bool:
        return self.is_magic


def weight(lab: Labeling, v: int) -> GroupElement:
    """Sum of the labels on the open neighbourhood of ``v``."""
    total = lab.group.identity
    for u in lab.graph.adjacency[v]:
        a = lab.labels[u]
        if a is None:
            raise PartialLabelingError(f"neighbour {u} of vertex {v} is unlabeled")
        total = total + a
    return total


def verify(lab: Labeling) -> VerifyReport:
    """Check bijectivity and constant neighbourhood sums, scanning vertices in index order."""
    if lab.graph.vertex_count != lab.group.order:
        raise OrderMismatchError(
            f"{lab.graph.describe()} has {lab.graph.vertex_count} vertices but |G| = {lab.group.order}"
        )
    if not lab.is_total:
        raise PartialLabelingError("verify needs a total labeling")
    seen = set()
    for a in lab.labels:
        if a in seen:
            return VerifyReport(False, False, duplicate=a)
        seen.add(a)
    mu = weight(lab, 0)
    for v in range(1, lab.graph.vertex_count):
        w = weight(lab, v)
        if w != mu:
            return VerifyReport(True, False, first_violation=(v, mu, w))
    return VerifyReport(True, True, magic_constant=mu)


def translate(lab: Labeling, g: GroupElement) -> Labeling:
    """Add ``g`` to every label; a magic constant ``mu`` becomes ``mu + deg * g``."""
    if lab.graph.degree is None:
        raise LabelingError("translation keeps magic labelings magic only on regular graphs")
    return Labeling(lab.graph, lab.group, tuple(None if a is None else a + g for a in lab.labels))


def map_labels(lab: Labeling, phi: Callable[[GroupElement], GroupElement], group: GroupSpec) -> Labeling:
    """Apply ``phi`` to every label (e.g. a group isomorphism onto ``group``)."""
    return Labeling(lab.graph, group, tuple(None if a is None else phi(a) for a in lab.labels))


def _graph_document(graph: Graph) -> dict[str, Any]:
    if graph.kind == "torus":
        return {"kind": "torus", "m": graph.params[0], "n": graph.params[1]}
    if graph.kind == "hypercube":
        return {"kind": "hypercube", "d": graph.params[0]}
    raise LabelingFormatError(f"graph kind {graph.kind!r} cannot be serialized")


def to_document(lab: Labeling) -> dict[str, Any]:
    doc: dict[str, Any] = {
        "graph": _graph_document(lab.graph),
        "group": {"moduli": list(lab.group.moduli)},
        "labels": [None if a is None else list(a.residues) for a in lab.labels],
    }
    if lab.is_total and lab.graph.vertex_count == lab.group.order:
        report = verify(lab)
        if report.is_magic:
            doc["magic_constant"] = list(report.magic_constant.residues)
    return doc


def _int_field(obj: dict, key: str, where: str) -> int:
    if key not in obj:
        raise LabelingFormatError(f"{where}: missing field {key!r}")
    val = obj[key]
    if not isinstance(val, int) or isinstance(val, bool):
        raise LabelingFormatError(f"{where}.{key}: expected an integer, got {val!r}")
    return val


def _residues(val: Any, where: str) -> list[int]:
    if not isinstance(val, list) or not all(isinstance(x, int) and not isinstance(x, bool) for x in val):
        raise LabelingFormatError(f"{where}: expected an array of integers, got {val!r}")
    return val


def from_document(doc: Any) -> Labeling:
    if not isinstance(doc, dict):
        raise LabelingFormatError("top level: expected an object")
    for key in ("graph", "group", "labels"):
        if key not in doc:
            raise LabelingFormatError(f"top level: missing field {key!r}")
    gdoc = doc["graph"]
    if not isinstance(gdoc, dict):
        raise LabelingFormatError("graph: expected an object")
    kind = gdoc.get("kind")
    try:
        if kind == "torus":
            graph = build_torus(_int_field(gdoc, "m", "graph"), _int_field(gdoc, "n", "graph"))
        elif kind == "hypercube":
            graph = build_hypercube(_int_field(gdoc, "d", "graph"))
        else:
            raise LabelingFormatError(f"graph.kind: unknown graph kind {kind!r}")
    except GraphError as exc:
        raise LabelingFormatError(f"graph: {exc}") from None

    grp = doc["group"]
    if not isinstance(grp, dict) or "moduli" not in grp:
        raise LabelingFormatError("group: expected an object with field 'moduli'")
    moduli = _residues(grp["moduli"], "group.moduli")
    try:
        group, convert = residue_converter(moduli)
    except GroupError as exc:
        raise LabelingFormatError(f"group.moduli: {exc}") from None

    raw = doc["labels"]
    if not isinstance(raw, list):
        raise LabelingFormatError("labels: expected an array")
    if len(raw) != graph.vertex_count:
        raise LabelingFormatError(f"labels: {len(raw)} entries for {graph.vertex_count} vertices")
    labels = []
    for v, entry in enumerate(raw):
        if entry is None:
            labels.append(None)
            continue
        try:
            labels.append(convert(_residues(entry, f"labels[{v}]")))
        except GroupError as exc:
            raise LabelingFormatError(f"labels[{v}]: {exc}") from None
    mc = doc.get("magic_constant")
    if mc is not None:
        try:
            convert(_residues(mc, "magic_constant"))
        except GroupError as exc:
            raise LabelingFormatError(f"magic_constant: {exc}") from None
    return Labeling(graph, group, tuple(labels))


def write_labeling(lab: Labeling, path: str | Path) -> None:
    doc = to_document(lab)
    # one residue array per line keeps diffs readable
    lines = ",\n    ".join(json.dumps(x) for x in doc["labels"])
    head = {k: v for k, v in doc.items() if k != "labels"}
    text = json.dumps(head, indent=2)[:-2] + f',\n  "labels": [\n    {lines}\n  ]\n}}\n'
    Path(path).write_text(text)


def read_labeling(path: str | Path) -> Labeling:
    text = Path(path).read_text()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise LabelingFormatError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    return from_document(doc)


def labels_from_residues(graph: Graph, group: GroupSpec, residues: Sequence[Sequence[int]]) -> Labeling:
    return Labeling(graph, group, tuple(group.element(r) for r in residues))
