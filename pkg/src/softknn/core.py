"""Data model for soft-label prototypes.

A prototype couples a position in Euclidean space with a soft label: a
vector holding one weight per class. Labels come in three kinds. Hard
labels are one-hot, probabilistic labels form a distribution over the
classes, and unrestricted labels may hold any finite real weights. This
module provides the label and prototype types, the conversions between
label kinds (softmax, argmax), structural validation, and the JSON
interchange format for prototype sets.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

# Absolute tolerance for the probabilistic "weights sum to 1" check.
PROB_SUM_TOL = 1e-9

# Positions closer than this are treated as coincident. Inverse-distance
# weighting has no meaning at distance zero, so duplicates are invalid and
# queries within this radius of a prototype are handled as exact hits.
COINCIDENT_TOL = 1e-12


class LabelKind(str, Enum):
    """How a label's weight vector is constrained."""

    HARD = "hard"
    PROBABILISTIC = "probabilistic"
    UNRESTRICTED = "unrestricted"


def _readonly(values, dtype=float) -> np.ndarray:
    arr = np.array(values, dtype=dtype)
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True, eq=False)
class SoftLabel:
    """A per-class weight vector tagged with its kind.

    ``values[i]`` is the weight this label assigns to class ``i``. The kind
    declares which structural invariant the values are supposed to satisfy;
    use :func:`label_violations` or :func:`validate` to check it.
    """

    values: np.ndarray
    kind: LabelKind = LabelKind.PROBABILISTIC

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", _readonly(np.atleast_1d(self.values)))
        object.__setattr__(self, "kind", LabelKind(self.kind))

    def __len__(self) -> int:
        return self.values.shape[0]

    @classmethod
    def from_exact(cls, weights: Sequence[Fraction], kind: LabelKind = LabelKind.PROBABILISTIC) -> "SoftLabel":
        """Build a label from exact rationals.

        For probabilistic labels the sum-to-one constraint is checked
        symbolically before any float conversion, so generated labels are
        valid by construction rather than by floating-point luck.
        """
        fracs = [Fraction(w) for w in weights]
        if kind == LabelKind.PROBABILISTIC:
            total = sum(fracs, Fraction(0))
            if total != 1:
                raise ValueError(f"exact weights sum to {total}, expected 1")
            if any(f < 0 for f in fracs):
                raise ValueError("exact probabilistic weights must be non-negative")
        return cls(np.array([float(f) for f in fracs]), kind)


def label_violations(label: SoftLabel) -> list[str]:
    """Return human-readable descriptions of every invariant the label breaks."""
    v = label.values
    out: list[str] = []
    if not np.all(np.isfinite(v)):
        out.append("non-finite element")
        return out
    if label.kind == LabelKind.HARD:
        ones = int(np.count_nonzero(v == 1.0))
        zeros = int(np.count_nonzero(v == 0.0))
        if ones != 1 or zeros != len(v) - 1:
            out.append("hard label is not a one-hot vector")
    elif label.kind == LabelKind.PROBABILISTIC:
        if np.any(v < 0):
            out.append("negative element")
        if abs(float(v.sum()) - 1.0) > PROB_SUM_TOL:
            out.append(f"elements sum to {float(v.sum())!r}, not 1")
    return out


@dataclass(frozen=True, eq=False)
class Prototype:
    """A position in d-dimensional space paired with a soft label."""

    position: np.ndarray
    label: SoftLabel

    def __post_init__(self) -> None:
        object.__setattr__(self, "position", _readonly(np.atleast_1d(self.position)))


@dataclass(frozen=True, eq=False)
class PrototypeSet:
    """An ordered collection of prototypes over a fixed class space.

    All prototypes are expected to share the dimension ``dim`` and label
    length ``num_classes``; :func:`validate` reports violations instead of
    raising, so malformed sets can still be constructed and diagnosed. The
    set is immutable and safe for unrestricted concurrent use.
    """

    prototypes: tuple[Prototype, ...]
    num_classes: int
    dim: int
    name: str = ""

    def __post_init__(self) -> None:
        object.__setattr__(self, "prototypes", tuple(self.prototypes))
        # Cache stacked arrays when shapes are consistent; validate() reports
        # the inconsistency otherwise.
        try:
            pos = np.stack([p.position for p in self.prototypes]).astype(float)
            labs = np.stack([p.label.values for p in self.prototypes]).astype(float)
            if pos.shape[1] != self.dim or labs.shape[1] != self.num_classes:
                raise ValueError
            pos.flags.writeable = False
            labs.flags.writeable = False
        except ValueError:
            pos = None
            labs = None
        object.__setattr__(self, "_positions", pos)
        object.__setattr__(self, "_labels", labs)

    def __len__(self) -> int:
        return len(self.prototypes)

    @property
    def positions(self) -> np.ndarray:
        """All positions as an (M, dim) array."""
        if self._positions is None:
            raise ValueError("prototype shapes are inconsistent; run validate() for details")
        return self._positions

    @property
    def labels(self) -> np.ndarray:
        """All label vectors as an (M, num_classes) array."""
        if self._labels is None:
            raise ValueError("prototype shapes are inconsistent; run validate() for details")
        return self._labels

    @property
    def common_label_kind(self) -> LabelKind:
        kinds = {p.label.kind for p in self.prototypes}
        if len(kinds) != 1:
            raise ValueError(f"prototypes carry mixed label kinds: {sorted(k.value for k in kinds)}")
        return next(iter(kinds))


def make_prototype_set(
    positions: Iterable[Sequence[float]],
    labels: Iterable[SoftLabel] | np.ndarray,
    kind: LabelKind | None = None,
    name: str = "",
) -> PrototypeSet:
    """Assemble a PrototypeSet from parallel position and label sequences.

    ``labels`` may be SoftLabel objects or a plain array, in which case
    ``kind`` applies to every row.
    """
    pos_list = [np.atleast_1d(np.asarray(p, dtype=float)) for p in positions]
    label_seq = labels if isinstance(labels, np.ndarray) else list(labels)
    if isinstance(label_seq, np.ndarray) or (len(label_seq) and not isinstance(label_seq[0], SoftLabel)):
        arr = np.atleast_2d(np.asarray(label_seq, dtype=float))
        label_objs = [SoftLabel(row, kind or LabelKind.PROBABILISTIC) for row in arr]
    else:
        label_objs = list(label_seq)
    if len(pos_list) != len(label_objs):
        raise ValueError(f"{len(pos_list)} positions but {len(label_objs)} labels")
    if not pos_list:
        raise ValueError("a prototype set needs at least one prototype")
    protos = tuple(Prototype(p, l) for p, l in zip(pos_list, label_objs))
    return PrototypeSet(
        prototypes=protos,
        num_classes=len(label_objs[0]),
        dim=pos_list[0].shape[0],
        name=name,
    )


def validate(pset: PrototypeSet) -> list[str]:
    """Check every structural invariant; return one message per violation.

    An empty list means the set is valid. This never raises: it is the
    diagnostic counterpart of the constructors.
    """
    errors: list[str] = []
    if not pset.prototypes:
        return ["set contains no prototypes"]
    if pset.num_classes < 1:
        errors.append(f"num_classes must be positive, got {pset.num_classes}")
    if pset.dim < 1:
        errors.append(f"dim must be positive, got {pset.dim}")
    for i, proto in enumerate(pset.prototypes):
        if proto.position.shape[0] != pset.dim:
            errors.append(f"prototype {i}: position has length {proto.position.shape[0]}, expected {pset.dim}")
        if not np.all(np.isfinite(proto.position)):
            errors.append(f"prototype {i}: non-finite position")
        if len(proto.label) != pset.num_classes:
            errors.append(f"prototype {i}: label has length {len(proto.label)}, expected {pset.num_classes}")
        for msg in label_violations(proto.label):
            errors.append(f"prototype {i}: {msg}")
    # Duplicate positions break inverse-distance weighting.
    consistent = all(
        p.position.shape[0] == pset.dim and np.all(np.isfinite(p.position)) for p in pset.prototypes
    )
    if consistent:
        pos = np.stack([p.position for p in pset.prototypes])
        for i in range(len(pos)):
            for j in range(i + 1, len(pos)):
                if np.linalg.norm(pos[i] - pos[j]) < COINCIDENT_TOL:
                    errors.append(f"prototypes {i} and {j}: duplicate position")
    return errors


def label_softmax(label: SoftLabel) -> SoftLabel:
    """Convert an unrestricted label to a probabilistic one via softmax.

    The maximum is subtracted before exponentiation so that widely spread
    weights (for example -10 next to 4.1) cannot overflow.
    """
    if label.kind != LabelKind.UNRESTRICTED:
        raise ValueError(f"softmax applies to unrestricted labels, got kind={label.kind.value}")
    v = label.values
    shifted = v - v.max()
    e = np.exp(shifted)
    return SoftLabel(e / e.sum(), LabelKind.PROBABILISTIC)


def label_argmax(label: SoftLabel) -> SoftLabel:
    """Collapse any label to a hard one-hot label at its largest element.

    Ties break to the lowest class index, so results are deterministic
    across platforms. Idempotent on hard labels.
    """
    idx = int(np.argmax(label.values))
    out = np.zeros(len(label))
    out[idx] = 1.0
    return SoftLabel(out, LabelKind.HARD)


def class_weight_sum(pset: PrototypeSet) -> np.ndarray:
    """Total label weight per class, summed over all prototypes."""
    return pset.labels.sum(axis=0)


# --- JSON interchange -------------------------------------------------------
#
# The on-disk schema is fixed:
#   {"dim": int, "num_classes": int, "label_kind": str,
#    "prototypes": [{"position": [...], "label": [...]}, ...], "name": str}
# Class indices are 0-based; positions and labels are plain decimal numbers.


def to_json_dict(pset: PrototypeSet) -> dict:
    kind = pset.common_label_kind
    return {
        "dim": pset.dim,
        "num_classes": pset.num_classes,
        "label_kind": kind.value,
        "prototypes": [
            {"position": [float(x) for x in p.position], "label": [float(x) for x in p.label.values]}
            for p in pset.prototypes
        ],
        "name": pset.name,
    }


def from_json_dict(data: dict) -> PrototypeSet:
    try:
        kind = LabelKind(data["label_kind"])
        protos = tuple(
            Prototype(np.asarray(entry["position"], dtype=float), SoftLabel(np.asarray(entry["label"], dtype=float), kind))
            for entry in data["prototypes"]
        )
        return PrototypeSet(
            prototypes=protos,
            num_classes=int(data["num_classes"]),
            dim=int(data["dim"]),
            name=str(data.get("name", "")),
        )
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed prototype-set JSON: {exc}") from exc


def save_json(pset: PrototypeSet, path: str | Path) -> None:
    Path(path).write_text(json.dumps(to_json_dict(pset), indent=2) + "\n")


def load_json(path: str | Path) -> PrototypeSet:
    return from_json_dict(json.loads(Path(path).read_text()))
