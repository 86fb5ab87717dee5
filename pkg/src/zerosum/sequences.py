"""Sequences over a finite group, stored as normal-form multisets.

Whether a sequence has a product-1 subsequence is invariant under reordering
(the property quantifies over all orderings), so sequences carry no order:
the normal form is the sorted tuple of element indices, and two sequences are
equal exactly when their normal forms are.

Text format: comma-separated element words in brackets, e.g. ``[y, y, x*y^2]``.
Whitespace is ignored; ``[]`` is the empty sequence.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from itertools import product
from typing import Iterable, Iterator

from .groups import Group


class SequenceError(ValueError):
    """Malformed sequence text or an invalid sequence operation."""


@dataclass(frozen=True, order=True)
class GSequence:
    """A finite multiset of group elements in normal form."""

    group_key: str
    items: tuple[int, ...]

    @staticmethod
    def from_indices(group: Group, indices: Iterable[int]) -> "GSequence":
        items = tuple(sorted(indices))
        for a in items:
            if not 0 <= a < group.order:
                raise SequenceError(f"element index {a} out of range for {group.key}")
        return GSequence(group.key, items)

    @staticmethod
    def from_text(group: Group, text: str) -> "GSequence":
        body = text.strip()
        if not (body.startswith("[") and body.endswith("]")):
            raise SequenceError(f"sequence {text!r} must be bracketed like [y, x*y^2]")
        body = body[1:-1].strip()
        if not body:
            return GSequence(group.key, ())
        return GSequence.from_indices(
            group, (group.element_from_word(w) for w in body.split(",")))

    # -- basic views ----------------------------------------------------

    @property
    def length(self) -> int:
        return len(self.items)

    def counts(self) -> Counter:
        return Counter(self.items)

    def format(self, group: Group) -> str:
        self._check_group(group)
        return "[" + ", ".join(group.names[a] for a in self.items) + "]"

    def _check_group(self, group: Group):
        if group.key != self.group_key:
            raise SequenceError(
                f"sequence over {self.group_key} used with group {group.key}")

    # -- the sequence calculus -------------------------------------------

    def concat(self, other: "GSequence") -> "GSequence":
        if other.group_key != self.group_key:
            raise SequenceError(
                f"cannot concatenate sequences over {self.group_key} and {other.group_key}")
        return GSequence(self.group_key, tuple(sorted(self.items + other.items)))

    def remove(self, other: "GSequence") -> "GSequence":
        """Multiset difference; ``other`` must be contained in ``self``."""
        if other.group_key != self.group_key:
            raise SequenceError(
                f"cannot remove a sequence over {other.group_key} from one over {self.group_key}")
        left = Counter(self.items)
        left.subtract(other.items)
        if any(c < 0 for c in left.values()):
            raise SequenceError("sequence to remove is not contained in the original")
        return GSequence(self.group_key,
                         tuple(sorted(left.elements())))

    def power(self, k: int) -> "GSequence":
        if k < 0:
            raise SequenceError(f"sequence power requires k >= 0, got {k}")
        return GSequence(self.group_key, tuple(sorted(self.items * k)))

    def h_part(self, group: Group) -> "GSequence":
        self._check_group(group)
        return GSequence(self.group_key,
                         tuple(a for a in self.items if group.coset_split(a) == "H"))

    def n_part(self, group: Group) -> "GSequence":
        self._check_group(group)
        return GSequence(self.group_key,
                         tuple(a for a in self.items if group.coset_split(a) == "N"))

    def inverted(self, group: Group) -> "GSequence":
        """Pointwise inverse of every element (again in normal form)."""
        self._check_group(group)
        return GSequence.from_indices(group, (group.inverse(a) for a in self.items))

    def sub_multisets(self) -> Iterator["GSequence"]:
        """Every distinct nonempty sub-multiset, each exactly once."""
        cnt = self.counts()
        elems = sorted(cnt)
        for picks in product(*(range(cnt[e] + 1) for e in elems)):
            if not any(picks):
                continue
            items = []
            for e, k in zip(elems, picks):
                items.extend([e] * k)
            yield GSequence(self.group_key, tuple(items))

    def __len__(self) -> int:
        return len(self.items)

    def __iter__(self):
        return iter(self.items)
