"""Entity tagset (22 kinds in three categories) and BIO labels."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional


class TagsetError(ValueError):
    """Raised for a label naming an entity kind outside the tagset."""


class Category(str, enum.Enum):
    ENAMEX = "ENAMEX"
    NUMEX = "NUMEX"
    TIMEX = "TIMEX"


@dataclass(frozen=True, order=False)
class EntityKind:
    name: str
    category: Category

    def __str__(self) -> str:
        return self.name


_KIND_TABLE = (
    (Category.ENAMEX, ("Person", "Organization", "Location", "Facility", "Locomotive",
                       "Artifact", "Entertainment", "Material", "Organism", "Plant",
                       "Disease")),
    (Category.NUMEX, ("Distance", "Money", "Quantity", "Count")),
    (Category.TIMEX, ("Time", "Year", "Month", "Day", "Date", "Period", "Special_Day")),
)

#: Canonical order of the 22 kinds.
KINDS: tuple[EntityKind, ...] = tuple(
    EntityKind(name, cat) for cat, names in _KIND_TABLE for name in names
)
KIND_BY_NAME: dict[str, EntityKind] = {k.name: k for k in KINDS}
KIND_ORDER: dict[str, int] = {k.name: i for i, k in enumerate(KINDS)}

#: Pseudo-kind used by the scorer for tokens labelled O.
OTHER = "OTHER"


def get_kind(name: str) -> EntityKind:
    try:
        return KIND_BY_NAME[name]
    except KeyError:
        raise TagsetError(f"unknown entity kind {name!r}") from None


def report_order(names):
    """Sort kind names by category, then alphabetically (the layout of the score tables)."""
    cat_rank = {c: i for i, c in enumerate(Category)}
    return sorted(names, key=lambda n: (cat_rank[KIND_BY_NAME[n].category], n))


@dataclass(frozen=True)
class Label:
    position: str  # "B", "I" or "O"
    kind: Optional[EntityKind] = None

    def __post_init__(self):
        if self.position not in ("B", "I", "O"):
            raise TagsetError(f"bad chunk position {self.position!r}")
        if (self.position == "O") != (self.kind is None):
            raise TagsetError("O labels carry no kind; B/I labels require one")

    @classmethod
    def parse(cls, text: str) -> "Label":
        if text == "O":
            return OUTSIDE
        prefix, sep, name = text.partition("-")
        if not sep or prefix not in ("B", "I"):
            raise TagsetError(f"malformed label {text!r}")
        return cls(prefix, get_kind(name))

    @property
    def kind_name(self) -> str:
        """Kind name, or OTHER for O."""
        return OTHER if self.kind is None else self.kind.name

    def sort_key(self) -> tuple[int, int]:
        if self.kind is None:
            return (-1, 0)
        return (KIND_ORDER[self.kind.name], 0 if self.position == "B" else 1)

    def __str__(self) -> str:
        return "O" if self.kind is None else f"{self.position}-{self.kind.name}"


OUTSIDE = Label("O")


def label_sort_key(text: str) -> tuple[int, int]:
    """Ordering for label strings: O first, then by kind, B before I."""
    return Label.parse(text).sort_key()
