"""Finite-dimensional Lie algebra cohomology and the ideal filtration.

The filtration of the exterior cochain complex by the number of
arguments allowed to lie in an ideal h gives a spectral sequence whose
second page is H^p(g/h, H^q(h, M)); `verify` checks that identification
and the convergence to H(g, M) on concrete instances.

A complement to h is chosen once (the standard echelon complement), the
whole complex is rebuilt in the adapted basis, and the filtration levels
become coordinate subspaces.  Results are compared at the level of
dimensions, which is complement-independent.
"""

from __future__ import annotations

from fractions import Fraction as QQ
from itertools import combinations
from typing import Mapping, Sequence

from .complexes import CochainComplex, FilteredComplex, betti, cohomology
from .exactla import (
    ExactMatrix,
    Subspace,
    induced_map,
    solve,
    unit_vector,
    qq,
)
from .specseq import compute_page, run


class LieAlgebraError(Exception):
    pass


class LieAlgebra:
    """Structure constants c_ij^k with antisymmetry and Jacobi checked exactly."""

    def __init__(self, dim: int, brackets: Mapping):
        self.dim = dim
        self._c: dict[tuple[int, int], tuple[QQ, ...]] = {}
        for key, coeffs in brackets.items():
            if isinstance(key, str):
                i, j = (int(t) for t in key.split(","))
            else:
                i, j = key
            if not (0 <= i < j < dim):
                raise LieAlgebraError(f"bracket key ({i},{j}) must satisfy 0 <= i < j < dim")
            cs = tuple(qq(c) for c in coeffs)
            if len(cs) != dim:
                raise LieAlgebraError("bracket coefficient vector has wrong length")
            if any(cs):
                self._c[(i, j)] = cs
        for i, j, k in combinations(range(dim), 3):
            for s in range(dim):
                total = QQ(0)
                for l in range(dim):
                    total += self.c(i, j)[l] * self.c(l, k)[s]
                    total += self.c(j, k)[l] * self.c(l, i)[s]
                    total += self.c(k, i)[l] * self.c(l, j)[s]
                if total:
                    raise LieAlgebraError(
                        f"Jacobi identity fails on (e{i}, e{j}, e{k}) in component e{s}")

    def c(self, i: int, j: int) -> tuple[QQ, ...]:
        if i == j:
            return tuple(QQ(0) for _ in range(self.dim))
        if i < j:
            return self._c.get((i, j), tuple(QQ(0) for _ in range(self.dim)))
        return tuple(-x for x in self.c(j, i))

    def bracket_vec(self, u: Sequence, v: Sequence) -> tuple[QQ, ...]:
        out = [QQ(0)] * self.dim
        for i, ui in enumerate(u):
            if not ui:
                continue
            for j, vj in enumerate(v):
                if not vj:
                    continue
                for k, ck in enumerate(self.c(i, j)):
                    if ck:
                        out[k] += ui * vj * ck
        return tuple(out)


class LieIdeal:
    """Subspace h with [g, h] contained in h (checked on basis vectors)."""

    def __init__(self, owner: LieAlgebra, subspace: Subspace):
        if subspace.ambient_dim != owner.dim:
            raise LieAlgebraError("ideal lives in the wrong space")
        for i in range(owner.dim):
            ei = unit_vector(owner.dim, i)
            for b in subspace.basis:
                if not subspace.contains(owner.bracket_vec(ei, b)):
                    raise LieAlgebraError(
                        f"not an ideal: [e{i}, h-basis vector] leaves the subspace")
        self.owner = owner
        self.subspace = subspace

    @property
    def dim(self) -> int:
        return self.subspace.dim


class GModule:
    """Finite-dimensional module given by one action matrix per basis vector."""

    def __init__(self, algebra: LieAlgebra, dim: int, actions: Sequence[ExactMatrix]):
        if len(actions) != algebra.dim:
            raise LieAlgebraError("need one action matrix per algebra basis vector")
        for a in actions:
            if a.rows != dim or a.cols != dim:
                raise LieAlgebraError("action matrix has wrong shape")
        for i in range(algebra.dim):
            for j in range(i + 1, algebra.dim):
                lhs = ExactMatrix.zeros(dim, dim)
                for k, ck in enumerate(algebra.c(i, j)):
                    if ck:
                        lhs = lhs + actions[k].scaled(ck)
                rhs = actions[i] @ actions[j] + (-(actions[j] @ actions[i]))
                if lhs != rhs:
                    raise LieAlgebraError(
                        f"action does not respect the bracket on (e{i}, e{j})")
        self.algebra = algebra
        self.dim = dim
        self.actions = tuple(actions)

    @classmethod
    def trivial(cls, algebra: LieAlgebra, dim: int = 1) -> "GModule":
        return cls(algebra, dim, [ExactMatrix.zeros(dim, dim)] * algebra.dim)


def _wedge_insert_sign(k: int, rest: tuple[int, ...]):
    if k in rest:
        return None
    pos = 0
    while pos < len(rest) and rest[pos] < k:
        pos += 1
    return rest[:pos] + (k,) + rest[pos:], -1 if pos % 2 else 1


def ce_complex(g: LieAlgebra, m: GModule) -> CochainComplex:
    """Exterior cochain complex Lambda^. g* tensor M with the standard differential."""
    n = g.dim
    dims = []
    bases = []
    for p in range(n + 1):
        basis = [(s, v) for s in combinations(range(n), p) for v in range(m.dim)]
        bases.append(basis)
        dims.append(len(basis))
    diffs = []
    for p in range(n):
        src, dst = bases[p], bases[p + 1]
        index = {b: i for i, b in enumerate(dst)}
        flat = [[QQ(0)] * len(src) for _ in range(len(dst))]
        for col, (subset, v) in enumerate(src):
            for tsub in combinations(range(n), p + 1):
                # first sum: (-1)^i rho(e_{t_i}) applied to the module value
                for i, ti in enumerate(tsub):
                    if tsub[:i] + tsub[i + 1:] != subset:
                        continue
                    sign = -1 if i % 2 else 1
                    act = m.actions[ti]
                    for r in range(m.dim):
                        c = act.entry(r, v)
                        if c:
                            flat[index[(tsub, r)]][col] += sign * c
                # second sum: (-1)^{i+j} insert [e_{t_i}, e_{t_j}]
                for i in range(len(tsub)):
                    for j in range(i + 1, len(tsub)):
                        rest = tuple(t for idx, t in enumerate(tsub) if idx not in (i, j))
                        for k, ck in enumerate(g.c(tsub[i], tsub[j])):
                            if not ck:
                                continue
                            ins = _wedge_insert_sign(k, rest)
                            if ins is None or ins[0] != subset:
                                continue
                            sign = ins[1] * (-1) ** (i + j)
                            flat[index[(tsub, v)]][col] += sign * ck
        diffs.append(ExactMatrix.from_rows(flat) if flat and src else
                     ExactMatrix.zeros(len(dst), len(src)))
    return CochainComplex(0, n, dims, diffs)


def _adapted(g: LieAlgebra, h: LieIdeal, m: GModule):
    """Rebuild (g, m) in a basis listing h first, then the echelon complement."""
    n = g.dim
    k = h.dim
    cols = list(h.subspace.basis)
    pivots = set(h.subspace.pivots)
    cols.extend(unit_vector(n, i) for i in range(n) if i not in pivots)
    pmat = ExactMatrix.from_columns(n, cols)
    new_brackets = {}
    for a in range(n):
        for b in range(a + 1, n):
            br = g.bracket_vec(pmat.column(a), pmat.column(b))
            coords = solve(pmat, br)
            if coords is None:
                raise LieAlgebraError("change of basis failed")
            if any(coords):
                new_brackets[(a, b)] = coords
    g2 = LieAlgebra(n, new_brackets)
    actions = []
    for a in range(n):
        act = ExactMatrix.zeros(m.dim, m.dim)
        for i, c in enumerate(pmat.column(a)):
            if c:
                act = act + m.actions[i].scaled(c)
        actions.append(act)
    m2 = GModule(g2, m.dim, actions)
    return g2, m2, k


def hs_filtered(g: LieAlgebra, h: LieIdeal, m: GModule) -> FilteredComplex:
    """Ideal filtration: level p keeps cochains with >= p complement factors."""
    g2, m2, k = _adapted(g, h, m)
    n = g.dim
    cplx = ce_complex(g2, m2)
    q_dim = n - k
    levels: dict[tuple[int, int], Subspace] = {}
    for deg in range(n + 1):
        basis = [(s, v) for s in combinations(range(n), deg) for v in range(m.dim)]
        dim_deg = len(basis)
        for p in range(0, q_dim + 2):
            vectors = []
            for idx, (subset, _) in enumerate(basis):
                if sum(1 for i in subset if i >= k) >= p:
                    vectors.append(unit_vector(dim_deg, idx))
            levels[(p, deg)] = Subspace(dim_deg, vectors)
    return FilteredComplex(cplx, 0, q_dim, levels)


def _sub_ideal_algebra(g2: LieAlgebra, k: int) -> LieAlgebra:
    brackets = {}
    for i in range(k):
        for j in range(i + 1, k):
            cs = g2.c(i, j)
            if any(cs[k:]):
                raise LieAlgebraError("ideal brackets leave the ideal in adapted basis")
            if any(cs[:k]):
                brackets[(i, j)] = cs[:k]
    return LieAlgebra(k, brackets)


def _quotient_algebra(g2: LieAlgebra, k: int) -> LieAlgebra:
    n = g2.dim
    brackets = {}
    for a in range(k, n):
        for b in range(a + 1, n):
            cs = g2.c(a, b)[k:]
            if any(cs):
                brackets[(a - k, b - k)] = cs
    return LieAlgebra(n - k, brackets)


def _h_module(g2: LieAlgebra, m2: GModule, k: int) -> GModule:
    hal = _sub_ideal_algebra(g2, k)
    return GModule(hal, m2.dim, m2.actions[:k])


def _action_on_h_cochains(g2: LieAlgebra, m2: GModule, k: int, x: int, q: int) -> ExactMatrix:
    """Matrix of e_x acting on C^q(h, M):
    (x.om)(h_1..h_q) = rho(x) om(h_1..h_q) - sum_i om(h_1.., [x, h_i], ..h_q)."""
    basis = [(s, v) for s in combinations(range(k), q) for v in range(m2.dim)]
    index = {b: i for i, b in enumerate(basis)}
    flat = [[QQ(0)] * len(basis) for _ in range(len(basis))]
    act = m2.actions[x]
    for col, (subset, v) in enumerate(basis):
        for r in range(m2.dim):
            c = act.entry(r, v)
            if c:
                flat[index[(subset, r)]][col] += c
        for tsub in combinations(range(k), q):
            for i, ti in enumerate(tsub):
                cs = g2.c(x, ti)
                if any(cs[k:]):
                    raise LieAlgebraError("bracket with ideal leaves the ideal")
                for s, c in enumerate(cs[:k]):
                    if c:
                        flat[index[(tsub, v)]][col] -= _eval_sign(subset, tsub, i, s) * c
    return ExactMatrix.from_rows(flat) if basis else ExactMatrix.zeros(0, 0)


def _eval_sign(subset, tsub, i, s):
    """Sign of eps_subset evaluated on (t_1, .., e_s at slot i, .., t_q)."""
    seq = list(tsub)
    seq[i] = s
    if len(set(seq)) != len(seq):
        return 0
    sorted_seq = sorted(seq)
    if tuple(sorted_seq) != subset:
        return 0
    sign = 1
    arr = list(seq)
    for a in range(len(arr)):
        for b in range(a + 1, len(arr)):
            if arr[a] > arr[b]:
                sign = -sign
    return sign


def expected_e2(g: LieAlgebra, h: LieIdeal, m: GModule) -> dict[tuple[int, int], int]:
    """Dimension grid H^p(g/h, H^q(h, M)), computed by two small CE runs."""
    g2, m2, k = _adapted(g, h, m)
    n = g.dim
    hal = _sub_ideal_algebra(g2, k)
    hm = GModule(hal, m2.dim, m2.actions[:k])
    hcomplex = ce_complex(hal, hm)
    hcoh = cohomology(hcomplex)
    quot = _quotient_algebra(g2, k)
    grid: dict[tuple[int, int], int] = {}
    for q in range(k + 1):
        hq = hcoh[q]
        induced_actions = []
        for a in range(k, n):
            raw = _action_on_h_cochains(g2, m2, k, a, q)
            induced_actions.append(induced_map(raw, hq, hq))
        module = GModule(quot, hq.dim, induced_actions)
        for p, dim in betti(ce_complex(quot, module)).items():
            grid[(p, q)] = dim
    return grid


def verify(g: LieAlgebra, h: LieIdeal, m: GModule) -> bool:
    """Page 2 of the ideal filtration matches H^p(g/h, H^q(h, M)) and the
    limit totals match the Betti numbers of the full complex."""
    filtered = hs_filtered(g, h, m)
    page2 = compute_page(filtered, 2)
    expected = expected_e2(g, h, m)
    n = g.dim
    k = h.dim
    for p in range(0, n - k + 1):
        for q in range(0, k + 1):
            if page2.entry_dim(p, q) != expected.get((p, q), 0):
                return False
    for (p, q), dim in page2.dims().items():
        if dim != expected.get((p, q), 0):
            return False
    result = run(filtered)
    totals = result.infinity_totals()
    target = betti(ce_complex(g, m))
    for deg in range(n + 1):
        if totals.get(deg, 0) != target.get(deg, 0):
            return False
    return True
