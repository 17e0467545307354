"""Bounded cochain complexes, double complexes, filtered complexes.

All invariants (d squared zero, commuting squares, anticommutation,
filtration monotonicity and d-stability) are checked eagerly at
construction, so invalid objects cannot exist as values.
"""

from __future__ import annotations

from typing import Callable, Mapping, Sequence

from .exactla import (
    ExactMatrix,
    Subquotient,
    Subspace,
    image_basis,
    induced_map,
    kernel_basis,
    unit_vector,
)


class ComplexError(Exception):
    pass


class CochainComplex:
    """Complex C^lo -> ... -> C^hi with differentials d_k: C^k -> C^{k+1}."""

    __slots__ = ("lo", "hi", "_dims", "_diffs")

    def __init__(self, lo: int, hi: int, dims: Sequence[int], differentials: Sequence[ExactMatrix]):
        if hi < lo:
            raise ComplexError("empty degree range")
        if len(dims) != hi - lo + 1:
            raise ComplexError("dims length does not match degree range")
        if len(differentials) != hi - lo:
            raise ComplexError("differential count does not match degree range")
        dims = tuple(int(d) for d in dims)
        diffs = tuple(differentials)
        for i, d in enumerate(diffs):
            if d.cols != dims[i] or d.rows != dims[i + 1]:
                raise ComplexError(
                    f"differential at degree {lo + i} has shape {d.rows}x{d.cols}, "
                    f"expected {dims[i + 1]}x{dims[i]}"
                )
        for i in range(len(diffs) - 1):
            if not (diffs[i + 1] @ diffs[i]).is_zero():
                raise ComplexError(f"d.d != 0 at degree {lo + i}")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)
        object.__setattr__(self, "_dims", dims)
        object.__setattr__(self, "_diffs", diffs)

    def __setattr__(self, name, value):
        raise AttributeError("CochainComplex is immutable")

    def degrees(self) -> range:
        return range(self.lo, self.hi + 1)

    def dim(self, k: int) -> int:
        if self.lo <= k <= self.hi:
            return self._dims[k - self.lo]
        return 0

    def d(self, k: int) -> ExactMatrix:
        """Differential out of degree k (zero-shaped outside the range)."""
        if self.lo <= k < self.hi:
            return self._diffs[k - self.lo]
        return ExactMatrix.zeros(self.dim(k + 1), self.dim(k))

    def euler_characteristic(self) -> int:
        return sum((-self.dim(k) if k % 2 else self.dim(k)) for k in self.degrees())

    def __repr__(self):
        dims = ", ".join(f"{k}:{self.dim(k)}" for k in self.degrees())
        return f"CochainComplex([{dims}])"


def cohomology(c: CochainComplex) -> dict[int, Subquotient]:
    """H^k = ker d_k / im d_{k-1} for every degree of the complex."""
    out: dict[int, Subquotient] = {}
    for k in c.degrees():
        cycles = kernel_basis(c.d(k))
        boundaries = image_basis(c.d(k - 1))
        out[k] = Subquotient(cycles, boundaries)
    return out


def betti(c: CochainComplex) -> dict[int, int]:
    return {k: h.dim for k, h in cohomology(c).items()}


class ChainMap:
    """Degreewise map of complexes commuting with the differentials."""

    __slots__ = ("source", "target", "_maps")

    def __init__(self, source: CochainComplex, target: CochainComplex,
                 maps: Mapping[int, ExactMatrix]):
        lo = min(source.lo, target.lo)
        hi = max(source.hi, target.hi)
        comps: dict[int, ExactMatrix] = {}
        for k in range(lo, hi + 1):
            m = maps.get(k)
            if m is None:
                m = ExactMatrix.zeros(target.dim(k), source.dim(k))
            if m.rows != target.dim(k) or m.cols != source.dim(k):
                raise ComplexError(f"component at degree {k} has wrong shape")
            comps[k] = m
        for k in range(lo, hi + 1):
            lhs = comps.get(k + 1, ExactMatrix.zeros(target.dim(k + 1), source.dim(k + 1))) @ source.d(k)
            rhs = target.d(k) @ comps[k]
            if lhs != rhs:
                raise ComplexError(f"square at degree {k} does not commute")
        object.__setattr__(self, "source", source)
        object.__setattr__(self, "target", target)
        object.__setattr__(self, "_maps", comps)

    def __setattr__(self, name, value):
        raise AttributeError("ChainMap is immutable")

    def component(self, k: int) -> ExactMatrix:
        m = self._maps.get(k)
        if m is None:
            return ExactMatrix.zeros(self.target.dim(k), self.source.dim(k))
        return m

    def induced_on_cohomology(self) -> dict[int, ExactMatrix]:
        hs = cohomology(self.source)
        ht = cohomology(self.target)
        out = {}
        for k in set(hs) | set(ht):
            src = hs.get(k, Subquotient(Subspace.zero_space(self.source.dim(k)),
                                        Subspace.zero_space(self.source.dim(k))))
            dst = ht.get(k, Subquotient(Subspace.zero_space(self.target.dim(k)),
                                        Subspace.zero_space(self.target.dim(k))))
            out[k] = induced_map(self.component(k), src, dst)
        return out


def compose(g: ChainMap, f: ChainMap) -> ChainMap:
    if f.target is not g.source and f.target != g.source:
        raise ComplexError("chain maps not composable")
    lo = min(f.source.lo, g.target.lo)
    hi = max(f.source.hi, g.target.hi)
    return ChainMap(f.source, g.target,
                    {k: g.component(k) @ f.component(k) for k in range(lo, hi + 1)})


def is_quasi_isomorphism(f: ChainMap) -> bool:
    """True if the induced map on every cohomology group is invertible."""
    hs = {k: h.dim for k, h in cohomology(f.source).items()}
    ht = {k: h.dim for k, h in cohomology(f.target).items()}
    induced = f.induced_on_cohomology()
    for k in set(hs) | set(ht):
        m = induced.get(k)
        a, b = hs.get(k, 0), ht.get(k, 0)
        if a != b:
            return False
        if m is not None and image_basis(m).dim != a:
            return False
    return True


class DoubleComplex:
    """Anticommuting bounded double complex.

    Cells K^{p,q} over a rectangle, with d_h: (p,q) -> (p+1,q) and
    d_v: (p,q) -> (p,q+1) satisfying d_h^2 = d_v^2 = d_h d_v + d_v d_h = 0.
    Builders starting from commuting data must bake signs in; see
    `from_commuting`, which twists the vertical maps on column p by (-1)^p.
    """

    __slots__ = ("p_lo", "p_hi", "q_lo", "q_hi", "_dims", "_dh", "_dv")

    def __init__(self, p_lo: int, p_hi: int, q_lo: int, q_hi: int,
                 dims: Mapping[tuple[int, int], int],
                 horizontal: Mapping[tuple[int, int], ExactMatrix],
                 vertical: Mapping[tuple[int, int], ExactMatrix]):
        if p_hi < p_lo or q_hi < q_lo:
            raise ComplexError("empty rectangle")
        dimtab = {}
        for p in range(p_lo, p_hi + 1):
            for q in range(q_lo, q_hi + 1):
                dimtab[(p, q)] = int(dims.get((p, q), 0))
        object.__setattr__(self, "p_lo", p_lo)
        object.__setattr__(self, "p_hi", p_hi)
        object.__setattr__(self, "q_lo", q_lo)
        object.__setattr__(self, "q_hi", q_hi)
        object.__setattr__(self, "_dims", dimtab)
        dh = {}
        dv = {}
        for p in range(p_lo, p_hi + 1):
            for q in range(q_lo, q_hi + 1):
                h = horizontal.get((p, q))
                if h is None:
                    h = ExactMatrix.zeros(self.cell_dim(p + 1, q), self.cell_dim(p, q))
                if h.rows != self.cell_dim(p + 1, q) or h.cols != self.cell_dim(p, q):
                    raise ComplexError(f"horizontal map at {(p, q)} has wrong shape")
                v = vertical.get((p, q))
                if v is None:
                    v = ExactMatrix.zeros(self.cell_dim(p, q + 1), self.cell_dim(p, q))
                if v.rows != self.cell_dim(p, q + 1) or v.cols != self.cell_dim(p, q):
                    raise ComplexError(f"vertical map at {(p, q)} has wrong shape")
                dh[(p, q)] = h
                dv[(p, q)] = v
        object.__setattr__(self, "_dh", dh)
        object.__setattr__(self, "_dv", dv)
        for p in range(p_lo, p_hi + 1):
            for q in range(q_lo, q_hi + 1):
                if not (self.dh(p + 1, q) @ self.dh(p, q)).is_zero():
                    raise ComplexError(f"d_h.d_h != 0 at {(p, q)}")
                if not (self.dv(p, q + 1) @ self.dv(p, q)).is_zero():
                    raise ComplexError(f"d_v.d_v != 0 at {(p, q)}")
                anti = self.dv(p + 1, q) @ self.dh(p, q) + self.dh(p, q + 1) @ self.dv(p, q)
                if not anti.is_zero():
                    raise ComplexError(f"d_h and d_v do not anticommute at {(p, q)}")

    def __setattr__(self, name, value):
        raise AttributeError("DoubleComplex is immutable")

    @classmethod
    def from_commuting(cls, p_lo: int, p_hi: int, q_lo: int, q_hi: int,
                       dims: Mapping[tuple[int, int], int],
                       horizontal: Mapping[tuple[int, int], ExactMatrix],
                       vertical: Mapping[tuple[int, int], ExactMatrix]) -> "DoubleComplex":
        """Build from commuting squares: d_v on column p is twisted by (-1)^p."""
        twisted = {}
        for (p, q), m in vertical.items():
            twisted[(p, q)] = m if p % 2 == 0 else -m
        return cls(p_lo, p_hi, q_lo, q_hi, dims, horizontal, twisted)

    @classmethod
    def from_single_row(cls, c: CochainComplex, q: int = 0) -> "DoubleComplex":
        """Embed a complex as the row q of a double complex (d_v = 0)."""
        dims = {(k, q): c.dim(k) for k in c.degrees()}
        horiz = {(k, q): c.d(k) for k in c.degrees()}
        return cls(c.lo, c.hi, q, q, dims, horiz, {})

    def cell_dim(self, p: int, q: int) -> int:
        return self._dims.get((p, q), 0)

    def dh(self, p: int, q: int) -> ExactMatrix:
        m = self._dh.get((p, q))
        if m is None:
            return ExactMatrix.zeros(self.cell_dim(p + 1, q), self.cell_dim(p, q))
        return m

    def dv(self, p: int, q: int) -> ExactMatrix:
        m = self._dv.get((p, q))
        if m is None:
            return ExactMatrix.zeros(self.cell_dim(p, q + 1), self.cell_dim(p, q))
        return m

    def transpose(self) -> "DoubleComplex":
        dims = {(q, p): d for (p, q), d in self._dims.items()}
        horiz = {(q, p): m for (p, q), m in self._dv.items()}
        vert = {(q, p): m for (p, q), m in self._dh.items()}
        return DoubleComplex(self.q_lo, self.q_hi, self.p_lo, self.p_hi, dims, horiz, vert)

    def euler_characteristic(self) -> int:
        return sum((-d if (p + q) % 2 else d) for (p, q), d in self._dims.items())

    def __repr__(self):
        return (f"DoubleComplex(p in [{self.p_lo},{self.p_hi}], "
                f"q in [{self.q_lo},{self.q_hi}])")


def total_layout(d: DoubleComplex) -> dict[int, list[tuple[int, int, int]]]:
    """Cells of each total degree as (p, q, offset), ordered by ascending p."""
    layout: dict[int, list[tuple[int, int, int]]] = {}
    for n in range(d.p_lo + d.q_lo, d.p_hi + d.q_hi + 1):
        cells = []
        off = 0
        for p in range(d.p_lo, d.p_hi + 1):
            q = n - p
            if d.q_lo <= q <= d.q_hi:
                cells.append((p, q, off))
                off += d.cell_dim(p, q)
        layout[n] = cells
    return layout


def total(d: DoubleComplex) -> CochainComplex:
    """Total complex T^n = direct sum of K^{p,q} with p+q = n, d = d_h + d_v."""
    layout = total_layout(d)
    lo = d.p_lo + d.q_lo
    hi = d.p_hi + d.q_hi
    dims = [sum(d.cell_dim(p, q) for p, q, _ in layout[n]) for n in range(lo, hi + 1)]
    diffs = []
    for n in range(lo, hi):
        src = layout[n]
        dst = {(p, q): off for p, q, off in layout[n + 1]}
        rows = dims[n + 1 - lo]
        cols = dims[n - lo]
        flat = [[0] * cols for _ in range(rows)]
        for p, q, off in src:
            for mat, tgt in ((d.dh(p, q), (p + 1, q)), (d.dv(p, q), (p, q + 1))):
                if tgt in dst and mat.rows and mat.cols:
                    toff = dst[tgt]
                    for i in range(mat.rows):
                        row = flat[toff + i]
                        base = i * mat.cols
                        for j in range(mat.cols):
                            row[off + j] = mat.entries[base + j]
        diffs.append(ExactMatrix.from_rows(flat) if rows and cols else ExactMatrix.zeros(rows, cols))
    return CochainComplex(lo, hi, dims, diffs)


class FilteredComplex:
    """Decreasing, d-stable, bounded filtration of a cochain complex.

    Levels run over [p_lo, p_hi + 1]; F_{p_lo} is the whole space and
    F_{p_hi + 1} is zero in every degree.  `level(p, n)` clamps outside
    that range.
    """

    __slots__ = ("complex", "p_lo", "p_hi", "_levels")

    def __init__(self, cplx: CochainComplex, p_lo: int, p_hi: int,
                 levels: Mapping[tuple[int, int], Subspace]):
        if p_hi < p_lo:
            raise ComplexError("empty filtration range")
        table: dict[tuple[int, int], Subspace] = {}
        for p in range(p_lo, p_hi + 2):
            for n in cplx.degrees():
                s = levels.get((p, n))
                if s is None:
                    raise ComplexError(f"missing filtration subspace at level {p}, degree {n}")
                if s.ambient_dim != cplx.dim(n):
                    raise ComplexError(f"filtration subspace at ({p},{n}) has wrong ambient")
                table[(p, n)] = s
        for n in cplx.degrees():
            if table[(p_lo, n)].dim != cplx.dim(n):
                raise ComplexError(f"F_{p_lo} is not the whole space in degree {n}")
            if table[(p_hi + 1, n)].dim != 0:
                raise ComplexError(f"F_{p_hi + 1} is not zero in degree {n}")
            for p in range(p_lo, p_hi + 1):
                if not table[(p + 1, n)].is_subspace_of(table[(p, n)]):
                    raise ComplexError(f"filtration not decreasing at ({p},{n})")
        for n in cplx.degrees():
            if n + 1 > cplx.hi:
                continue
            dn = cplx.d(n)
            for p in range(p_lo, p_hi + 2):
                tgt = table[(p, n + 1)]
                for b in table[(p, n)].basis:
                    if not tgt.contains(dn.apply(b)):
                        raise ComplexError(f"differential leaves level {p} at degree {n}")
        object.__setattr__(self, "complex", cplx)
        object.__setattr__(self, "p_lo", p_lo)
        object.__setattr__(self, "p_hi", p_hi)
        object.__setattr__(self, "_levels", table)

    def __setattr__(self, name, value):
        raise AttributeError("FilteredComplex is immutable")

    @classmethod
    def trivial(cls, cplx: CochainComplex, level: int = 0) -> "FilteredComplex":
        levels = {}
        for n in cplx.degrees():
            levels[(level, n)] = Subspace.full_space(cplx.dim(n))
            levels[(level + 1, n)] = Subspace.zero_space(cplx.dim(n))
        return cls(cplx, level, level, levels)

    def level(self, p: int, n: int) -> Subspace:
        if p <= self.p_lo:
            p = self.p_lo
        elif p > self.p_hi + 1:
            p = self.p_hi + 1
        s = self._levels.get((p, n))
        if s is None:
            return Subspace.zero_space(self.complex.dim(n))
        return s

    @property
    def width(self) -> int:
        return self.p_hi - self.p_lo + 1

    def __repr__(self):
        return f"FilteredComplex(levels [{self.p_lo},{self.p_hi}], {self.complex!r})"


def _coordinate_filtration(d: DoubleComplex, index: Callable[[int, int], int],
                           f_lo: int, f_hi: int) -> FilteredComplex:
    cplx = total(d)
    layout = total_layout(d)
    levels: dict[tuple[int, int], Subspace] = {}
    for n in cplx.degrees():
        dim_n = cplx.dim(n)
        for level in range(f_lo, f_hi + 2):
            vectors = []
            for p, q, off in layout[n]:
                if index(p, q) >= level:
                    for j in range(d.cell_dim(p, q)):
                        vectors.append(unit_vector(dim_n, off + j))
            levels[(level, n)] = Subspace(dim_n, vectors)
    return FilteredComplex(cplx, f_lo, f_hi, levels)


def column_filtration(d: DoubleComplex) -> FilteredComplex:
    """Filtration by the first index: F_P = sum of cells with p >= P."""
    return _coordinate_filtration(d, lambda p, q: p, d.p_lo, d.p_hi)


def row_filtration(d: DoubleComplex) -> FilteredComplex:
    """Filtration by the second index: F_Q = sum of cells with q >= Q."""
    return _coordinate_filtration(d, lambda p, q: q, d.q_lo, d.q_hi)
