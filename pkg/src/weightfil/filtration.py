"""Exhaustive separated filtrations of Q^n indexed by exact rationals.

Indices are Fractions; integer indexing is the normal case, fractional
indices only occur for slope-derived filtrations with non-integral slopes.
Semantics of the sparse `steps` map:

  decreasing F: F(i) is the value at the smallest listed index >= i,
  and the zero space above the largest listed index.  The value at the
  smallest listed index must be the full space (prepended if missing),
  so F is exhaustive below and separated above.

  increasing M: M(i) is the value at the largest listed index <= i,
  and the zero space below the smallest listed index.  The value at the
  largest listed index must be the full space (appended if missing).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import FiltrationError
from .exact_linalg import Subspace, rat, rat_str

DECREASING = "decreasing"
INCREASING = "increasing"


@dataclass(frozen=True)
class IndexedFiltration:
    ambient_dim: int
    orientation: str
    steps: tuple  # sorted tuple of (Fraction index, Subspace)

    @staticmethod
    def make(ambient_dim: int, orientation: str, steps) -> "IndexedFiltration":
        if orientation not in (DECREASING, INCREASING):
            raise FiltrationError(f"unknown orientation {orientation!r}")
        items = sorted(((rat(i), s) for i, s in dict(steps).items()),
                       key=lambda kv: kv[0])
        for _, s in items:
            if s.ambient_dim != ambient_dim:
                raise FiltrationError("step ambient dimension mismatch")
        full = Subspace.full(ambient_dim)
        if orientation == DECREASING:
            if not items:
                items = [(Fraction(0), full)]
            if items[0][1] != full:
                items.insert(0, (items[0][0] - 1, full))
        else:
            if not items:
                items = [(Fraction(0), full)]
            if items[-1][1] != full:
                items.append((items[-1][0] + 1, full))
        fl = IndexedFiltration(ambient_dim, orientation, tuple(items))
        fl.validate()
        return fl

    def validate(self) -> "IndexedFiltration":
        prev = None
        for _, s in self.steps:
            if prev is not None:
                big, small = (prev, s) if self.orientation == DECREASING else (s, prev)
                if not big.contains(small):
                    raise FiltrationError("filtration is not monotone")
            prev = s
        return self

    def at(self, i) -> Subspace:
        i = rat(i)
        if self.orientation == DECREASING:
            for k, s in self.steps:
                if k >= i:
                    return s
            return Subspace.zero(self.ambient_dim)
        out = None
        for k, s in self.steps:
            if k <= i:
                out = s
            else:
                break
        return out if out is not None else Subspace.zero(self.ambient_dim)

    def keys(self) -> list:
        return [k for k, _ in self.steps]

    def graded_dims(self) -> dict:
        """Nonzero graded dimensions keyed by jump index.

        For a decreasing filtration the piece at a listed index k is
        F(k)/F(next listed index); for an increasing one it is
        M(k)/M(previous listed index).
        """
        out = {}
        ks = self.keys()
        for idx, k in enumerate(ks):
            here = self.steps[idx][1].dim
            if self.orientation == DECREASING:
                other = self.steps[idx + 1][1].dim if idx + 1 < len(ks) else 0
                g = here - other
            else:
                other = self.steps[idx - 1][1].dim if idx > 0 else 0
                g = here - other
            if g:
                out[k] = g
        return out

    def normalized(self) -> "IndexedFiltration":
        """Minimal step map with the same semantics."""
        keep = []
        n = len(self.steps)
        for idx, (k, s) in enumerate(self.steps):
            if self.orientation == DECREASING:
                nxt = self.steps[idx + 1][1] if idx + 1 < n \
                    else Subspace.zero(self.ambient_dim)
                if s != nxt:
                    keep.append((k, s))
            else:
                prv = self.steps[idx - 1][1] if idx > 0 \
                    else Subspace.zero(self.ambient_dim)
                if s != prv:
                    keep.append((k, s))
        return IndexedFiltration(self.ambient_dim, self.orientation, tuple(keep))

    def same_filtration(self, other: "IndexedFiltration") -> bool:
        if (self.ambient_dim, self.orientation) != (other.ambient_dim, other.orientation):
            return False
        keys = sorted(set(self.keys()) | set(other.keys()))
        return all(self.at(k) == other.at(k) for k in keys)

    def step_diff(self, other: "IndexedFiltration") -> list:
        """[(index, self dim, other dim)] at indices where the two differ."""
        keys = sorted(set(self.keys()) | set(other.keys()))
        out = []
        for k in keys:
            a, b = self.at(k), other.at(k)
            if a != b:
                out.append((k, a.dim, b.dim))
        return out

    def map_subspaces(self, fn) -> "IndexedFiltration":
        """Apply a subspace transform stepwise (e.g. a quotient image)."""
        stepped = [(k, fn(s)) for k, s in self.steps]
        amb = stepped[0][1].ambient_dim if stepped else 0
        return IndexedFiltration.make(amb, self.orientation, dict(stepped))

    def to_json(self) -> dict:
        return {rat_str(k): s.to_strings() for k, s in self.normalized().steps}


def graded_dims_to_json(g: dict) -> dict:
    return {rat_str(rat(k)): v for k, v in sorted(g.items(), key=lambda kv: rat(kv[0]))}
