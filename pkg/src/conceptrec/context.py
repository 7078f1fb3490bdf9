"""Formal contexts and the Galois derivation operators.

A context stores its incidence relation twice: one bitmask per object over the
attribute axis and one bitmask per attribute over the object axis. Python ints
serve as arbitrary-width bitsets, so intersections along either axis are a
single ``&`` per member.

Item sets and object sets cross the public API as ascending tuples of indices.
"""

from __future__ import annotations

from typing import Iterable, Iterator, Sequence

from .errors import InvalidInputError

ItemSet = tuple[int, ...]
ObjectSet = tuple[int, ...]


def mask_of(indices: Iterable[int]) -> int:
    mask = 0
    for i in indices:
        mask |= 1 << i
    return mask


def indices_of(mask: int) -> tuple[int, ...]:
    """Ascending positions of the set bits of ``mask``."""
    if not mask:
        return ()
    bits = bin(mask)[:1:-1]
    return tuple(i for i, c in enumerate(bits) if c == "1")


def iter_bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def popcount(mask: int) -> int:
    return mask.bit_count()


class FormalContext:
    """Immutable object x attribute incidence relation with labelled axes."""

    __slots__ = (
        "object_labels",
        "attribute_labels",
        "rows",
        "cols",
        "_row_bits",
        "_col_bits",
        "_object_index",
        "_attribute_index",
    )

    def __init__(
        self,
        object_labels: Sequence[str],
        attribute_labels: Sequence[str],
        incidence: Iterable[tuple[int, int]] = (),
    ):
        object_labels = tuple(str(x) for x in object_labels)
        attribute_labels = tuple(str(x) for x in attribute_labels)
        _check_unique(object_labels, "object")
        _check_unique(attribute_labels, "attribute")
        n, m = len(object_labels), len(attribute_labels)
        row_bits = [0] * n
        col_bits = [0] * m
        for g, a in incidence:
            if not (0 <= g < n and 0 <= a < m):
                raise InvalidInputError(f"incidence ({g}, {a}) outside a {n}x{m} context")
            row_bits[g] |= 1 << a
            col_bits[a] |= 1 << g
        self._init(object_labels, attribute_labels, row_bits, col_bits)

    def _init(self, object_labels, attribute_labels, row_bits, col_bits) -> None:
        set_ = object.__setattr__
        set_(self, "object_labels", object_labels)
        set_(self, "attribute_labels", attribute_labels)
        set_(self, "_row_bits", tuple(row_bits))
        set_(self, "_col_bits", tuple(col_bits))
        set_(self, "rows", tuple(indices_of(b) for b in row_bits))
        set_(self, "cols", tuple(indices_of(b) for b in col_bits))
        set_(self, "_object_index", {label: i for i, label in enumerate(object_labels)})
        set_(self, "_attribute_index", {label: i for i, label in enumerate(attribute_labels)})

    def __setattr__(self, name, value):
        raise AttributeError("FormalContext is immutable")

    @classmethod
    def from_rows(
        cls,
        object_labels: Sequence[str],
        attribute_labels: Sequence[str],
        rows: Sequence[Iterable[int]],
    ) -> "FormalContext":
        if len(rows) != len(object_labels):
            raise InvalidInputError(
                f"{len(rows)} rows given for {len(object_labels)} objects"
            )
        return cls(
            object_labels,
            attribute_labels,
            ((g, a) for g, row in enumerate(rows) for a in row),
        )

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[str, str]]) -> "FormalContext":
        """Build from labelled pairs; both axes follow first appearance."""
        objects: dict[str, int] = {}
        attributes: dict[str, int] = {}
        incidence = []
        for g, a in pairs:
            gi = objects.setdefault(g, len(objects))
            ai = attributes.setdefault(a, len(attributes))
            incidence.append((gi, ai))
        return cls(list(objects), list(attributes), incidence)

    @classmethod
    def _from_bits(cls, object_labels, attribute_labels, row_bits) -> "FormalContext":
        ctx = cls.__new__(cls)
        col_bits = [0] * len(attribute_labels)
        for g, row in enumerate(row_bits):
            for a in iter_bits(row):
                col_bits[a] |= 1 << g
        ctx._init(tuple(object_labels), tuple(attribute_labels), row_bits, col_bits)
        return ctx

    # -- shape -----------------------------------------------------------

    @property
    def n_objects(self) -> int:
        return len(self.object_labels)

    @property
    def n_attributes(self) -> int:
        return len(self.attribute_labels)

    @property
    def n_incidences(self) -> int:
        return sum(len(r) for r in self.rows)

    @property
    def row_bits(self) -> tuple[int, ...]:
        return self._row_bits

    @property
    def col_bits(self) -> tuple[int, ...]:
        return self._col_bits

    @property
    def all_objects(self) -> int:
        return (1 << self.n_objects) - 1

    @property
    def all_attributes(self) -> int:
        return (1 << self.n_attributes) - 1

    def pairs(self) -> Iterator[tuple[int, int]]:
        for g, row in enumerate(self.rows):
            for a in row:
                yield g, a

    def has(self, g: int, a: int) -> bool:
        return bool(self._row_bits[g] >> a & 1)

    # -- labels ----------------------------------------------------------

    def object_index(self, label: str) -> int:
        try:
            return self._object_index[label]
        except KeyError:
            raise InvalidInputError(f"unknown object {label!r}") from None

    def attribute_index(self, label: str) -> int:
        try:
            return self._attribute_index[label]
        except KeyError:
            raise InvalidInputError(f"unknown attribute {label!r}") from None

    def itemset(self, labels: Iterable[str]) -> ItemSet:
        return tuple(sorted({self.attribute_index(x) for x in labels}))

    def objectset(self, labels: Iterable[str]) -> ObjectSet:
        return tuple(sorted({self.object_index(x) for x in labels}))

    def item_labels(self, items: Iterable[int]) -> list[str]:
        return [self.attribute_labels[i] for i in items]

    def object_names(self, objects: Iterable[int]) -> list[str]:
        return [self.object_labels[g] for g in objects]

    # -- bit-level derivations -------------------------------------------

    def extent_mask(self, item_mask: int) -> int:
        """Objects having every attribute of ``item_mask``."""
        ext = self.all_objects
        cols = self._col_bits
        for a in iter_bits(item_mask):
            ext &= cols[a]
            if not ext:
                break
        return ext

    def intent_mask(self, object_mask: int) -> int:
        """Attributes shared by every object of ``object_mask``."""
        intent = self.all_attributes
        rows = self._row_bits
        for g in iter_bits(object_mask):
            intent &= rows[g]
            if not intent:
                break
        return intent

    def items_mask(self, items: Iterable[int]) -> int:
        return mask_of(_checked(items, self.n_attributes, "attribute"))

    def objects_mask(self, objects: Iterable[int]) -> int:
        return mask_of(_checked(objects, self.n_objects, "object"))

    # -- value semantics -------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FormalContext):
            return NotImplemented
        return (
            self.object_labels == other.object_labels
            and self.attribute_labels == other.attribute_labels
            and self._row_bits == other._row_bits
        )

    def __hash__(self) -> int:
        return hash((self.object_labels, self.attribute_labels, self._row_bits))

    def labelled_pairs(self) -> frozenset[tuple[str, str]]:
        return frozenset(
            (self.object_labels[g], self.attribute_labels[a]) for g, a in self.pairs()
        )

    def same_relation(self, other: "FormalContext") -> bool:
        """Equality up to the order of labels on either axis."""
        return (
            set(self.object_labels) == set(other.object_labels)
            and set(self.attribute_labels) == set(other.attribute_labels)
            and self.labelled_pairs() == other.labelled_pairs()
        )

    def __reduce__(self):
        return (_rebuild, (self.object_labels, self.attribute_labels, self._row_bits))

    def __repr__(self) -> str:
        return (
            f"FormalContext({self.n_objects} objects, {self.n_attributes} attributes, "
            f"{self.n_incidences} incidences)"
        )


def _rebuild(object_labels, attribute_labels, row_bits) -> FormalContext:
    return FormalContext._from_bits(object_labels, attribute_labels, list(row_bits))


def _check_unique(labels: tuple[str, ...], axis: str) -> None:
    if len(set(labels)) != len(labels):
        seen = set()
        for label in labels:
            if label in seen:
                raise InvalidInputError(f"duplicate {axis} label {label!r}")
            seen.add(label)


def _checked(indices: Iterable[int], bound: int, axis: str) -> Iterator[int]:
    for i in indices:
        if not isinstance(i, int) or isinstance(i, bool) or not 0 <= i < bound:
            raise InvalidInputError(f"{axis} index {i!r} out of range 0..{bound - 1}")
        yield i


def derive_extent(ctx: FormalContext, items: Iterable[int]) -> ObjectSet:
    """Objects incident to every item (``B'``). The empty itemset yields all objects."""
    return indices_of(ctx.extent_mask(ctx.items_mask(items)))


def derive_intent(ctx: FormalContext, objects: Iterable[int]) -> ItemSet:
    """Attributes shared by every object (``A'``). The empty object set yields all attributes."""
    return indices_of(ctx.intent_mask(ctx.objects_mask(objects)))


def closure_items(ctx: FormalContext, items: Iterable[int]) -> ItemSet:
    return indices_of(ctx.intent_mask(ctx.extent_mask(ctx.items_mask(items))))


def closure_objects(ctx: FormalContext, objects: Iterable[int]) -> ObjectSet:
    return indices_of(ctx.extent_mask(ctx.intent_mask(ctx.objects_mask(objects))))


def support(ctx: FormalContext, items: Iterable[int]) -> int:
    return popcount(ctx.extent_mask(ctx.items_mask(items)))


def subcontext(ctx: FormalContext, objects: Iterable[int]) -> FormalContext:
    """Restrict to ``objects`` (kept in ascending order); the attribute axis is unchanged."""
    keep = indices_of(ctx.objects_mask(objects))
    return FormalContext._from_bits(
        [ctx.object_labels[g] for g in keep],
        ctx.attribute_labels,
        [ctx.row_bits[g] for g in keep],
    )
