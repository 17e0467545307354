"""Weighted-homogeneous Lie-Rinehart algebras over a polynomial ring.

A presentation is a free module on generators e_1..e_m over a weighted
polynomial ring, with a homogeneous anchor rho(e_i) = sum_j a_ij d/dx_j
and a homogeneous bracket [e_i, e_j] = sum_k c_ij^k e_k.  Everything in
sight is graded, so the exterior-form complexes split into finite weight
slices and all cohomology is computed exactly, slice by slice.

Conventions: the generator dual basis eps_1..eps_m pairs as
<eps_i, e_j> = delta_ij, wedge monomials are ordered lexicographically
by index, a variable x_j has weight u_j >= 1, the symbol d/dx_j carries
weight -u_j, and generator weights may be negative (the tangent frame
d/dx_j has weight -u_j, so the Euler field has weight 0).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction as QQ
from functools import lru_cache
from itertools import combinations
from typing import Mapping, Sequence

from .complexes import CochainComplex
from .exactla import ExactMatrix, format_rational, qq

Monomial = tuple[int, ...]
Poly = dict[Monomial, QQ]


class PresentationError(Exception):
    pass


# -- polynomial helpers ------------------------------------------------------

def poly(data, nvars: int) -> Poly:
    """Normalize a {exponents: coeff} mapping into a clean Poly."""
    out: Poly = {}
    if not data:
        return out
    for mono, coeff in data.items():
        if isinstance(mono, str):
            mono = tuple(int(t) for t in mono.split(","))
        mono = tuple(int(e) for e in mono)
        if len(mono) != nvars or any(e < 0 for e in mono):
            raise PresentationError(f"bad monomial {mono} for {nvars} variables")
        c = qq(coeff)
        if c:
            out[mono] = out.get(mono, QQ(0)) + c
    return {m: c for m, c in out.items() if c}


def p_add(a: Poly, b: Poly) -> Poly:
    out = dict(a)
    for m, c in b.items():
        s = out.get(m, QQ(0)) + c
        if s:
            out[m] = s
        else:
            out.pop(m, None)
    return out


def p_scale(c, a: Poly) -> Poly:
    c = qq(c)
    if not c:
        return {}
    return {m: c * v for m, v in a.items()}


def p_sub(a: Poly, b: Poly) -> Poly:
    return p_add(a, p_scale(-1, b))


def p_mul(a: Poly, b: Poly) -> Poly:
    out: Poly = {}
    for ma, ca in a.items():
        for mb, cb in b.items():
            m = tuple(x + y for x, y in zip(ma, mb))
            s = out.get(m, QQ(0)) + ca * cb
            if s:
                out[m] = s
            else:
                out.pop(m, None)
    return out


def p_diff(a: Poly, j: int) -> Poly:
    out: Poly = {}
    for m, c in a.items():
        if m[j]:
            mm = list(m)
            mm[j] -= 1
            out[tuple(mm)] = c * m[j]
    return out


def p_str(a: Poly, names: Sequence[str] | None = None) -> str:
    if not a:
        return "0"
    terms = []
    for m, c in sorted(a.items()):
        factors = []
        for j, e in enumerate(m):
            if e:
                name = names[j] if names else f"x{j}"
                factors.append(name if e == 1 else f"{name}^{e}")
        body = "*".join(factors) if factors else "1"
        terms.append(f"{format_rational(c)}*{body}")
    return " + ".join(terms)


@lru_cache(maxsize=None)
def _monomials(weights: tuple[int, ...], w: int) -> tuple[Monomial, ...]:
    if w < 0:
        return ()
    if not weights:
        return ((),) if w == 0 else ()
    out = []
    head = weights[0]
    for e in range(w // head + 1):
        for rest in _monomials(weights[1:], w - e * head):
            out.append((e,) + rest)
    return tuple(sorted(out))


@dataclass(frozen=True)
class WeightedPolyRing:
    """Polynomial ring with positive integer weights on the variables."""

    nvars: int
    weights: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "weights", tuple(int(w) for w in self.weights))
        if len(self.weights) != self.nvars:
            raise PresentationError("weight count does not match variable count")
        if any(w < 1 for w in self.weights):
            raise PresentationError("variable weights must be positive")

    def monomials(self, w: int) -> tuple[Monomial, ...]:
        return _monomials(self.weights, w)

    def slice_dim(self, w: int) -> int:
        return len(self.monomials(w))

    def monomial_weight(self, m: Monomial) -> int:
        return sum(e * u for e, u in zip(m, self.weights))

    def weight_of(self, a: Poly) -> int | None:
        """Weight of a homogeneous polynomial (None for 0); raises if mixed."""
        ws = {self.monomial_weight(m) for m in a}
        if not ws:
            return None
        if len(ws) > 1:
            raise PresentationError(f"polynomial not homogeneous: weights {sorted(ws)}")
        return ws.pop()

    def variable(self, j: int) -> Poly:
        m = [0] * self.nvars
        m[j] = 1
        return {tuple(m): QQ(1)}


@dataclass(frozen=True)
class FormSlice:
    """Ordered basis of p-forms of total weight w: pairs (subset, monomial)."""

    p: int
    w: int
    basis: tuple[tuple[tuple[int, ...], Monomial], ...]

    @property
    def dim(self) -> int:
        return len(self.basis)

    def index(self) -> dict[tuple[tuple[int, ...], Monomial], int]:
        return {b: i for i, b in enumerate(self.basis)}


class LieRinehartPresentation:
    """Free rank-m module with homogeneous anchor and bracket data."""

    def __init__(self, ring: WeightedPolyRing, gen_weights: Sequence[int],
                 anchor: Sequence[Sequence], brackets: Mapping):
        self.ring = ring
        self.gen_weights = tuple(int(g) for g in gen_weights)
        m = len(self.gen_weights)
        if len(anchor) != m:
            raise PresentationError("anchor must have one row per generator")
        self.anchor: list[list[Poly]] = []
        for i, row in enumerate(anchor):
            if len(row) != ring.nvars:
                raise PresentationError("anchor row has wrong length")
            prow = []
            for j, entry in enumerate(row):
                a = entry if isinstance(entry, dict) else poly(entry, ring.nvars)
                a = poly(a, ring.nvars)
                wt = ring.weight_of(a)
                expected = self.gen_weights[i] + ring.weights[j]
                if wt is not None and wt != expected:
                    raise PresentationError(
                        f"anchor a[{i}][{j}] has weight {wt}, expected {expected}")
                prow.append(a)
            self.anchor.append(prow)
        self._brackets: dict[tuple[int, int], tuple[Poly, ...]] = {}
        for key, comps in brackets.items():
            if isinstance(key, str):
                i, j = (int(t) for t in key.split(","))
            else:
                i, j = key
            if not (0 <= i < j < m):
                raise PresentationError(f"bracket key ({i},{j}) must satisfy 0 <= i < j < m")
            if len(comps) != m:
                raise PresentationError("bracket value must have one component per generator")
            cs = []
            for k, entry in enumerate(comps):
                c = entry if isinstance(entry, dict) else poly(entry, ring.nvars)
                c = poly(c, ring.nvars)
                wt = ring.weight_of(c)
                expected = self.gen_weights[i] + self.gen_weights[j] - self.gen_weights[k]
                if wt is not None and wt != expected:
                    raise PresentationError(
                        f"bracket c[{i},{j}]^{k} has weight {wt}, expected {expected}")
                cs.append(c)
            self._brackets[(i, j)] = tuple(cs)
        self._slices: dict[tuple[int, int], FormSlice] = {}

    @property
    def rank(self) -> int:
        return len(self.gen_weights)

    def bracket_c(self, i: int, j: int) -> tuple[Poly, ...]:
        """Structure coefficients of [e_i, e_j], antisymmetric in (i, j)."""
        if i == j:
            return tuple({} for _ in range(self.rank))
        if i < j:
            return self._brackets.get((i, j), tuple({} for _ in range(self.rank)))
        return tuple(p_scale(-1, c) for c in self.bracket_c(j, i))

    def anchor_apply(self, i: int, f: Poly) -> Poly:
        """rho(e_i) acting as a derivation on a polynomial."""
        out: Poly = {}
        for j in range(self.ring.nvars):
            a = self.anchor[i][j]
            if a:
                out = p_add(out, p_mul(a, p_diff(f, j)))
        return out

    def form_slice(self, p: int, w: int) -> FormSlice:
        key = (p, w)
        cached = self._slices.get(key)
        if cached is not None:
            return cached
        basis: list[tuple[tuple[int, ...], Monomial]] = []
        if 0 <= p <= self.rank:
            for subset in combinations(range(self.rank), p):
                wf = w + sum(self.gen_weights[i] for i in subset)
                for mono in self.ring.monomials(wf):
                    basis.append((subset, mono))
        fs = FormSlice(p, w, tuple(basis))
        self._slices[key] = fs
        return fs


class SectionV:
    """Global section of the module, with homogeneous components."""

    def __init__(self, owner: LieRinehartPresentation, components: Sequence):
        self.owner = owner
        ring = owner.ring
        comps = []
        for entry in components:
            c = entry if isinstance(entry, dict) else poly(entry, ring.nvars)
            comps.append(poly(c, ring.nvars))
        if len(comps) != owner.rank:
            raise PresentationError("section needs one component per generator")
        wt = None
        for i, c in enumerate(comps):
            wc = ring.weight_of(c)
            if wc is None:
                continue
            total = wc + owner.gen_weights[i]
            if wt is None:
                wt = total
            elif wt != total:
                raise PresentationError(
                    f"section components have mixed total weights {wt} and {total}")
        self.components = tuple(comps)
        self.weight = 0 if wt is None else wt

    def is_zero(self) -> bool:
        return all(not c for c in self.components)


Element = tuple[Poly, ...]


def elem_basis(lr: LieRinehartPresentation, i: int, f: Poly | None = None) -> Element:
    one = {(0,) * lr.ring.nvars: QQ(1)} if f is None else f
    return tuple(dict(one) if k == i else {} for k in range(lr.rank))


def elem_anchor_apply(lr: LieRinehartPresentation, u: Element, f: Poly) -> Poly:
    out: Poly = {}
    for i, ui in enumerate(u):
        if ui:
            out = p_add(out, p_mul(ui, lr.anchor_apply(i, f)))
    return out


def elem_bracket(lr: LieRinehartPresentation, u: Element, v: Element) -> Element:
    """Bracket extended by the Leibniz rule:
    [f e_i, g e_j] = fg [e_i,e_j] + f rho(e_i)(g) e_j - g rho(e_j)(f) e_i."""
    out = [dict() for _ in range(lr.rank)]
    for i, ui in enumerate(u):
        if not ui:
            continue
        for j, vj in enumerate(v):
            if not vj:
                continue
            fg = p_mul(ui, vj)
            cs = lr.bracket_c(i, j)
            for k in range(lr.rank):
                if cs[k]:
                    out[k] = p_add(out[k], p_mul(fg, cs[k]))
            out[j] = p_add(out[j], p_mul(ui, lr.anchor_apply(i, vj)))
            out[i] = p_sub(out[i], p_mul(vj, lr.anchor_apply(j, ui)))
    return tuple(out)


def _elem_is_zero(u: Element) -> bool:
    return all(not c for c in u)


@dataclass(frozen=True)
class Failure:
    identity: str
    witness: str


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    failures: tuple[Failure, ...]


def validate(lr: LieRinehartPresentation, w_max: int = 2) -> ValidationReport:
    """Exact check of antisymmetry, Jacobi and the anchor-morphism identity.

    Generator-level identities are polynomial identities and are checked
    coefficientwise.  The same identities are then re-checked on elements
    f e_i with f running over all monomials of weight <= w_max, which
    exercises the Leibniz extension.  Since the bracket on elements is
    antisymmetric by construction, checking the Jacobiator on unordered
    triples of distinct decorated elements is complete.
    """
    failures: list[Failure] = []
    m = lr.rank
    ring = lr.ring
    gens = [f"e{i}" for i in range(m)]

    for i in range(m):
        for j in range(i + 1, m):
            lhs = lr.bracket_c(i, j)
            rhs = tuple(p_scale(-1, c) for c in lr.bracket_c(j, i))
            if lhs != rhs:
                failures.append(Failure("antisymmetry", f"[{gens[i]},{gens[j]}]"))

    # anchor morphism on generator pairs: rho([e_i,e_j]) = [rho(e_i), rho(e_j)]
    for i in range(m):
        for j in range(i + 1, m):
            cs = lr.bracket_c(i, j)
            for l in range(ring.nvars):
                lhs: Poly = {}
                for k in range(m):
                    if cs[k]:
                        lhs = p_add(lhs, p_mul(cs[k], lr.anchor[k][l]))
                rhs: Poly = {}
                for t in range(ring.nvars):
                    rhs = p_add(rhs, p_mul(lr.anchor[i][t], p_diff(lr.anchor[j][l], t)))
                    rhs = p_sub(rhs, p_mul(lr.anchor[j][t], p_diff(lr.anchor[i][l], t)))
                diff = p_sub(lhs, rhs)
                if diff:
                    failures.append(Failure(
                        "anchor-morphism",
                        f"rho([{gens[i]},{gens[j]}]) component d/dx{l}: residue {p_str(diff)}"))

    decorated: list[tuple[str, Element]] = []
    monos: list[Monomial] = []
    for w in range(w_max + 1):
        monos.extend(ring.monomials(w))
    for i in range(m):
        for mono in monos:
            f = {mono: QQ(1)}
            name = f"{p_str(f)}*{gens[i]}" if mono != (0,) * ring.nvars else gens[i]
            decorated.append((name, elem_basis(lr, i, f)))

    for a in range(len(decorated)):
        for b in range(a + 1, len(decorated)):
            for c in range(b + 1, len(decorated)):
                (na, ua), (nb, ub), (nc, uc) = decorated[a], decorated[b], decorated[c]
                jac = elem_bracket(lr, elem_bracket(lr, ua, ub), uc)
                jac = tuple(p_add(x, y) for x, y in
                            zip(jac, elem_bracket(lr, elem_bracket(lr, ub, uc), ua)))
                jac = tuple(p_add(x, y) for x, y in
                            zip(jac, elem_bracket(lr, elem_bracket(lr, uc, ua), ub)))
                if not _elem_is_zero(jac):
                    bad = next(k for k in range(m) if jac[k])
                    failures.append(Failure(
                        "jacobi",
                        f"({na}, {nb}, {nc}): component e{bad} residue {p_str(jac[bad])}"))

    # anchor morphism on decorated pairs, against a probe monomial per weight
    probes = [{mono: QQ(1)} for mono in ring.monomials(1)] or [{(0,) * ring.nvars: QQ(1)}]
    for a in range(len(decorated)):
        for b in range(a + 1, len(decorated)):
            (na, ua), (nb, ub) = decorated[a], decorated[b]
            br = elem_bracket(lr, ua, ub)
            for probe in probes:
                lhs = elem_anchor_apply(lr, br, probe)
                rhs = p_sub(elem_anchor_apply(lr, ua, elem_anchor_apply(lr, ub, probe)),
                            elem_anchor_apply(lr, ub, elem_anchor_apply(lr, ua, probe)))
                diff = p_sub(lhs, rhs)
                if diff:
                    failures.append(Failure(
                        "anchor-morphism",
                        f"({na}, {nb}) on {p_str(probe)}: residue {p_str(diff)}"))
                    break

    return ValidationReport(not failures, tuple(failures))


def _wedge_insert_sign(k: int, rest: tuple[int, ...]) -> tuple[tuple[int, ...], int] | None:
    """Sort (k, *rest) with rest strictly increasing; None if k collides."""
    if k in rest:
        return None
    pos = 0
    while pos < len(rest) and rest[pos] < k:
        pos += 1
    merged = rest[:pos] + (k,) + rest[pos:]
    return merged, -1 if pos % 2 else 1


def ce_d(lr: LieRinehartPresentation, p: int, w: int) -> ExactMatrix:
    """Matrix of the algebroid differential FormSlice(p, w) -> FormSlice(p+1, w).

    (d om)(a_0..a_p) = sum_i (-1)^i rho(a_i) om(..hat a_i..)
                     + sum_{i<j} (-1)^{i+j} om([a_i,a_j], ..hat a_i..hat a_j..).
    """
    src = lr.form_slice(p, w)
    dst = lr.form_slice(p + 1, w)
    dst_index = dst.index()
    rows, cols = dst.dim, src.dim
    flat = [[QQ(0)] * cols for _ in range(rows)]
    targets = list(combinations(range(lr.rank), p + 1))
    for col, (subset, mono) in enumerate(src.basis):
        f = {mono: QQ(1)}
        for tsub in targets:
            value: Poly = {}
            for i, ti in enumerate(tsub):
                rest = tsub[:i] + tsub[i + 1:]
                if rest == subset:
                    term = lr.anchor_apply(ti, f)
                    value = p_add(value, term if i % 2 == 0 else p_scale(-1, term))
            for i in range(len(tsub)):
                for j in range(i + 1, len(tsub)):
                    rest = tuple(t for idx, t in enumerate(tsub) if idx not in (i, j))
                    cs = lr.bracket_c(tsub[i], tsub[j])
                    for k in range(lr.rank):
                        if not cs[k]:
                            continue
                        ins = _wedge_insert_sign(k, rest)
                        if ins is None or ins[0] != subset:
                            continue
                        sign = ins[1] * (-1) ** (i + j)
                        value = p_add(value, p_scale(sign, p_mul(cs[k], f)))
            for mono2, coeff in value.items():
                r = dst_index.get((tsub, mono2))
                if r is None:
                    raise PresentationError("differential left the weight slice")
                flat[r][col] += coeff
    return ExactMatrix.from_rows(flat) if rows and cols else ExactMatrix.zeros(rows, cols)


def contraction(lr: LieRinehartPresentation, v: SectionV, p: int, w: int) -> ExactMatrix:
    """Matrix of i_V: FormSlice(p, w) -> FormSlice(p-1, w + weight(V))."""
    src = lr.form_slice(p, w)
    dst = lr.form_slice(p - 1, w + v.weight)
    dst_index = dst.index()
    rows, cols = dst.dim, src.dim
    flat = [[QQ(0)] * cols for _ in range(rows)]
    for col, (subset, mono) in enumerate(src.basis):
        f = {mono: QQ(1)}
        for pos, i in enumerate(subset):
            vi = v.components[i]
            if not vi:
                continue
            rest = subset[:pos] + subset[pos + 1:]
            term = p_mul(vi, f)
            if pos % 2:
                term = p_scale(-1, term)
            for mono2, coeff in term.items():
                r = dst_index.get((rest, mono2))
                if r is None:
                    raise PresentationError("contraction left the weight slice")
                flat[r][col] += coeff
    return ExactMatrix.from_rows(flat) if rows and cols else ExactMatrix.zeros(rows, cols)


def lie_derivative(lr: LieRinehartPresentation, v: SectionV, p: int, w: int) -> ExactMatrix:
    """Cartan homotopy d i_V + i_V d on the slice (p, w)."""
    first = ce_d(lr, p - 1, w + v.weight) @ contraction(lr, v, p, w)
    second = contraction(lr, v, p + 1, w) @ ce_d(lr, p, w)
    return first + second


def omega_slice_complex(lr: LieRinehartPresentation, w: int) -> CochainComplex:
    """The weight-w slice of the form complex (Omega^., d)."""
    dims = [lr.form_slice(p, w).dim for p in range(lr.rank + 1)]
    diffs = [ce_d(lr, p, w) for p in range(lr.rank)]
    return CochainComplex(0, lr.rank, dims, diffs)


def tangent_algebroid(ring: WeightedPolyRing) -> LieRinehartPresentation:
    """Free module on the coordinate frame d/dx_j with the identity anchor."""
    n = ring.nvars
    anchor = [[{(0,) * n: QQ(1)} if i == j else {} for j in range(n)] for i in range(n)]
    return LieRinehartPresentation(ring, [-u for u in ring.weights], anchor, {})
