"""Spectral sequences of bounded filtered cochain complexes over Q.

Pages are computed from scratch per index r through the exact subquotient
formulas

    Z_r^{p,q} = F^p C^n  /\\  d^{-1}(F^{p+r} C^{n+1})          (n = p+q)
    E_r^{p,q} = Z_r^{p,q} / (Z_{r-1}^{p+1,q-1} + d Z_{r-1}^{p-r+1,q+r-2})

with d_r induced by d.  Filtrations are decreasing, exhaustive and bounded,
and must satisfy d(F^p) <= F^p.
"""

from __future__ import annotations

from dataclasses import dataclass
from .errors import FiltrationError, PreconditionError
from .exact_linalg import (QMatrix, QuotientMap, Subspace, image, image_of_subspace,
                           kernel, preimage, subspace_intersect, subspace_sum)
from .filtration import DECREASING, IndexedFiltration


@dataclass(frozen=True)
class GradedComplex:
    """Cochain complex: spaces[n] = dim C^n, differentials[n]: C^n -> C^(n+1)."""

    spaces: dict
    differentials: dict

    def validate(self) -> "GradedComplex":
        for n, m in self.differentials.items():
            if m.cols != self.spaces.get(n, 0) or m.rows != self.spaces.get(n + 1, 0):
                raise PreconditionError(f"differential at degree {n} has wrong shape")
            nxt = self.differentials.get(n + 1)
            if nxt is not None and not (nxt @ m).is_zero():
                raise PreconditionError(f"d o d != 0 at degree {n}")
        return self

    def degrees(self) -> list:
        return sorted(k for k, v in self.spaces.items() if v)

    def dim(self, n: int) -> int:
        return self.spaces.get(n, 0)

    def diff(self, n: int) -> QMatrix:
        m = self.differentials.get(n)
        if m is None:
            return QMatrix.zero(self.dim(n + 1), self.dim(n))
        return m

    def cohomology_dim(self, n: int) -> int:
        z = kernel(self.diff(n))
        b = image(self.diff(n - 1))
        return z.dim - b.dim


@dataclass(frozen=True)
class FilteredComplex:
    """GradedComplex plus per-degree decreasing filtration subspaces.

    filtration[n][p] = F^p C^n at the listed levels; below the smallest
    listed level the filtration is the full space, above the largest it is
    zero.  `blocks` and `labels` optionally record a bigraded summand
    decomposition (p, q) -> slice of coordinates and the Frobenius weight
    label attached to each (p, q); builders that assemble complexes from
    double complexes fill these in.
    """

    complex: GradedComplex
    filtration: dict
    blocks: dict | None = None    # degree -> ordered list of (p, q, size)
    labels: dict | None = None    # (p, q) -> weight label

    def p_range(self) -> tuple:
        ps = [p for fl in self.filtration.values() for p in fl]
        if not ps:
            return (0, 0)
        return (min(ps), max(ps))

    def fil_at(self, n: int, p: int) -> Subspace:
        dim_n = self.complex.dim(n)
        levels = self.filtration.get(n, {})
        if not levels:
            return Subspace.full(dim_n) if p <= 0 else Subspace.zero(dim_n)
        keys = sorted(levels)
        if p <= keys[0]:
            return Subspace.full(dim_n) if p < keys[0] else levels[keys[0]]
        for k in keys:
            if k >= p:
                return levels[k]
        return Subspace.zero(dim_n)

    def validate(self) -> "FilteredComplex":
        self.complex.validate()
        lo, hi = self.p_range()
        for n in list(self.complex.spaces):
            dim_n = self.complex.dim(n)
            prev = None
            for p in range(lo, hi + 2):
                cur = self.fil_at(n, p)
                if cur.ambient_dim != dim_n:
                    raise FiltrationError(f"filtration ambient mismatch at degree {n}")
                if prev is not None and not prev.contains(cur):
                    raise FiltrationError(f"filtration not decreasing at degree {n}")
                prev = cur
            if not self.fil_at(n, lo).is_full():
                raise FiltrationError(f"filtration not exhaustive at degree {n}")
            if not self.fil_at(n, hi + 1).is_zero():
                raise FiltrationError(f"filtration not bounded at degree {n}")
            d = self.complex.diff(n)
            for p in range(lo, hi + 1):
                img = image_of_subspace(d, self.fil_at(n, p))
                if not self.fil_at(n + 1, p).contains(img):
                    raise FiltrationError(
                        f"differential does not respect filtration at degree {n}, level {p}")
        return self


@dataclass(frozen=True)
class Page:
    """Spectral sequence page: entry dims and d_r matrices keyed by (p, q)."""

    r: int
    entries: dict
    differentials: dict

    def entry(self, p: int, q: int) -> int:
        return self.entries.get((p, q), 0)

    def is_degenerate(self) -> bool:
        return all(m.is_zero() for m in self.differentials.values())

    def euler_characteristic(self) -> int:
        return sum((1 if (p + q) % 2 == 0 else -1) * d
                   for (p, q), d in self.entries.items())


def _z_subspace(fc: FilteredComplex, p: int, q: int, r: int) -> Subspace:
    n = p + q
    f_p = fc.fil_at(n, p)
    d = fc.complex.diff(n)
    return subspace_intersect(f_p, preimage(d, fc.fil_at(n + 1, p + r)))


def _entry_data(fc: FilteredComplex, p: int, q: int, r: int):
    """(QuotientMap for E_r^{p,q}, Z_r) with denominator built from Z_{r-1}."""
    n = p + q
    z_r = _z_subspace(fc, p, q, r)
    if r == 0:
        den = fc.fil_at(n, p + 1)
    else:
        z_above = _z_subspace(fc, p + 1, q - 1, r - 1)
        d_prev = fc.complex.diff(n - 1)
        z_back = _z_subspace(fc, p - r + 1, q + r - 2, r - 1)
        den = subspace_sum(z_above, image_of_subspace(d_prev, z_back))
    den = subspace_intersect(den, z_r)
    return QuotientMap(den, z_r)


def _interesting_pq(fc: FilteredComplex) -> list:
    lo, hi = fc.p_range()
    out = []
    for n in fc.complex.degrees():
        for p in range(lo, hi + 1):
            out.append((p, n - p))
    return out


def e_page(fc: FilteredComplex, r: int) -> Page:
    """Page E_r with its d_r: E_r^{p,q} -> E_r^{p+r, q-r+1}."""
    if r < 0:
        raise PreconditionError("page index must be >= 0")
    fc.validate()
    maps = {}
    entries = {}
    for (p, q) in _interesting_pq(fc):
        qm = _entry_data(fc, p, q, r)
        if qm.dim:
            maps[(p, q)] = qm
            entries[(p, q)] = qm.dim
    diffs = {}
    for (p, q), qm in maps.items():
        tgt = maps.get((p + r, q - r + 1))
        if tgt is None:
            continue
        d = fc.complex.diff(p + q)
        cols = [tgt.coords(d.apply(row)) for row in qm.comp_rows]
        mat = QMatrix.from_rows([[cols[j][i] for j in range(qm.dim)]
                                 for i in range(tgt.dim)])
        if not mat.is_zero():
            diffs[(p, q)] = mat
    page = Page(r, entries, diffs)
    for (p, q), m in diffs.items():
        nxt = diffs.get((p + r, q - r + 1))
        if nxt is not None and not (nxt @ m).is_zero():
            raise PreconditionError("d_r o d_r != 0; corrupted filtration data")
    return page


def stable_page_index(fc: FilteredComplex) -> int:
    """Index from which all pages coincide for boundedness reasons."""
    lo, hi = fc.p_range()
    return max(hi - lo + 1, 1)


def degeneration_page(fc: FilteredComplex, bound: int):
    """Smallest r <= bound with d_s = 0 for all r <= s <= bound, or None
    when differentials persist at the bound (bound-censored)."""
    if bound < 1:
        raise PreconditionError("bound must be >= 1")
    last_nonzero = 0
    for s in range(1, bound + 1):
        if not e_page(fc, s).is_degenerate():
            last_nonzero = s
    if last_nonzero == bound:
        return None
    return last_nonzero + 1


def total_cohomology_dims(fc: FilteredComplex) -> dict:
    out = {}
    for n in fc.complex.degrees():
        h = fc.complex.cohomology_dim(n)
        if h:
            out[n] = h
    return out


def abutment_quotient(fc: FilteredComplex, n: int) -> QuotientMap:
    """Coordinates on H^n(total) = ker d^n / im d^(n-1)."""
    z = kernel(fc.complex.diff(n))
    b = image(fc.complex.diff(n - 1))
    return QuotientMap(b, z)


def abutment_filtration(fc: FilteredComplex, n: int) -> IndexedFiltration:
    """Decreasing filtration induced on H^n(total); its graded dims equal
    the E_infinity dims on the diagonal p + q = n."""
    fc.validate()
    qm = abutment_quotient(fc, n)
    lo, hi = fc.p_range()
    z = qm.outer
    steps = {}
    for p in range(lo, hi + 2):
        zp = subspace_intersect(z, fc.fil_at(n, p))
        steps[p] = qm.subspace_image(zp)
    return IndexedFiltration.make(qm.dim, DECREASING, steps)


def equivariant_degeneration_check(fc: FilteredComplex, bound: int | None = None) -> bool:
    """True iff every d_r for r >= 2 vanishes, with the complex-level
    differential validated against the block weight labels first.

    A nonzero differential component between blocks carrying different
    labels is label-inconsistent input and raises; a nonzero d_r between
    equal labels returns False (degeneration is not forced).
    """
    if fc.blocks is None or fc.labels is None:
        raise PreconditionError("weight labels are required for the equivariant check")
    fc.validate()
    for n in fc.complex.degrees():
        d = fc.complex.diff(n)
        src = _block_slices(fc, n)
        tgt = _block_slices(fc, n + 1)
        for (pq_s, (s0, s1)) in src.items():
            for (pq_t, (t0, t1)) in tgt.items():
                if fc.labels[pq_s] == fc.labels[pq_t]:
                    continue
                if any(d.entry(i, j) != 0 for i in range(t0, t1) for j in range(s0, s1)):
                    raise PreconditionError(
                        f"label-inconsistent differential {pq_s} -> {pq_t}")
    if bound is None:
        bound = stable_page_index(fc) + 1
    for r in range(2, bound + 1):
        if not e_page(fc, r).is_degenerate():
            return False
    return True


def _block_slices(fc: FilteredComplex, n: int) -> dict:
    out = {}
    pos = 0
    for (p, q, size) in fc.blocks.get(n, []):
        out[(p, q)] = (pos, pos + size)
        pos += size
    return out


def abutment_labels(fc: FilteredComplex, n: int) -> dict:
    """Weight label carried by each graded piece of the abutment filtration,
    keyed by filtration level p (the label of the row q = n - p)."""
    if fc.labels is None:
        raise PreconditionError("complex carries no weight labels")
    fl = abutment_filtration(fc, n)
    out = {}
    for p, g in fl.graded_dims().items():
        out[int(p)] = {"dim": g, "label": fc.labels.get((int(p), n - int(p)))}
    return out
