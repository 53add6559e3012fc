"""Graded linear algebra, independent of the Gröbner engine.

Everything here works one degree at a time with explicit coefficient
matrices and exact row reduction (FLINT ``nmod_mat`` / ``fmpq_mat``).
"""

from __future__ import annotations

import flint

from .field import Field
from .groebner import FreeModule, FreeModuleElement
from .polyring import Polynomial, PolyRing

DEFAULT_CELL_BUDGET = 200_000_000


class CellBudgetExceeded(MemoryError):
    def __init__(self, degree: int, cells: int, budget: int, partial: dict):
        super().__init__(f"degree {degree} needs {cells} matrix cells (budget {budget})")
        self.degree = degree
        self.partial = partial


def _to_flint(field: Field, rows: list[list], ncols: int):
    nrows = len(rows)
    if field.characteristic:
        flat = [int(v) for row in rows for v in row]
        return flint.nmod_mat(nrows, ncols, flat, field.characteristic)
    flat = [flint.fmpq(int(v.numerator), int(v.denominator)) for row in rows for v in row]
    return flint.fmpq_mat(nrows, ncols, flat)


def rank(field: Field, rows: list[list], ncols: int) -> int:
    if not rows or not ncols:
        return 0
    return _to_flint(field, rows, ncols).rank()


def nullspace(field: Field, rows: list[list], ncols: int) -> list[list]:
    """Basis of {v : A v = 0} for the matrix with the given rows, as lists."""
    if not ncols:
        return []
    if not rows:
        return [[field(1) if i == j else field(0) for i in range(ncols)] for j in range(ncols)]
    A = _to_flint(field, rows, ncols)
    R, r = A.rref()
    pivots = []
    for i in range(r):
        for j in range(ncols):
            if R[i, j] != 0:
                pivots.append(j)
                break
    pivot_set = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivot_set:
            continue
        v = [field(0)] * ncols
        v[free] = field(1)
        for i, pj in enumerate(pivots):
            entry = R[i, free]
            if entry != 0:
                v[pj] = field.reduce(-_from_flint(field, entry))
        basis.append(v)
    return basis


def _from_flint(field: Field, entry):
    if field.characteristic:
        return int(entry)
    return field(f"{int(entry.p)}/{int(entry.q)}")


class _Coords:
    """Coordinates of degree-e elements of a twisted free module."""

    def __init__(self, module: FreeModule, degree: int):
        ring = module.ring
        self.module = module
        self.degree = degree
        self.index = {}
        self.monos = []
        for pos, a in enumerate(module.degrees):
            for mk in ring.monomials(degree - a):
                self.index[(pos, mk)] = len(self.monos)
                self.monos.append((pos, mk))

    def __len__(self):
        return len(self.monos)

    def vector(self, coords) -> list:
        field = self.module.ring.field
        v = [field(0)] * len(self.monos)
        for pos, c in enumerate(coords):
            for mk, val in c.terms.items():
                v[self.index[(pos, mk)]] = val
        return v

    def element(self, vec) -> FreeModuleElement:
        ring = self.module.ring
        parts = [dict() for _ in self.module.degrees]
        for (pos, mk), val in zip(self.monos, vec):
            if val:
                parts[pos][mk] = val
        return self.module.element([Polynomial(ring, p) for p in parts])


def graded_span(gens, degree: int, module: FreeModule | None = None) -> list[list]:
    """All monomial multiples of ``gens`` landing in ``degree``, as vectors."""
    gens = list(gens)
    module = module or gens[0].module
    ring = module.ring
    coords = _Coords(module, degree)
    rows = []
    for g in gens:
        d = g.degree()
        if d is None or d > degree:
            continue
        for mk in ring.monomials(degree - d):
            rows.append(coords.vector([c.shift(mk) for c in g.coords]))
    return rows


def span_dimension(gens, degree: int, module: FreeModule | None = None) -> int:
    """dim_k of the degree-``degree`` part of the submodule generated by ``gens``."""
    module = module or list(gens)[0].module
    rows = graded_span(gens, degree, module)
    return rank(module.ring.field, rows, len(_Coords(module, degree)))


def in_span(gens, v: FreeModuleElement) -> bool:
    """Membership of a homogeneous ``v`` by comparing ranks in its degree."""
    if v.is_zero():
        return True
    d = v.degree()
    module = v.module
    rows = graded_span(gens, d, module)
    n = len(_Coords(module, d))
    field = module.ring.field
    return rank(field, rows, n) == rank(field, rows + [_Coords(module, d).vector(v.coords)], n)


def kernel_in_degree(polys, target_shift: int, degree: int, budget: int = DEFAULT_CELL_BUDGET):
    """Basis of {(a_i) of degree e : sum a_i p_i = 0} for homogeneous ``polys``.

    ``target_shift`` is deg(p_i); the map goes S_e^n -> S_{e + shift}.
    """
    ring = polys[0].ring
    n = len(polys)
    src = ring.monomials(degree)
    tgt = ring.monomials(degree + target_shift)
    cells = len(src) * n * len(tgt)
    if cells > budget:
        raise CellBudgetExceeded(degree, cells, budget, {})
    tindex = {mk: i for i, mk in enumerate(tgt)}
    ncols = len(src) * n
    rows = [[ring.field(0)] * ncols for _ in tgt]
    for i, p in enumerate(polys):
        for s, mk in enumerate(src):
            col = i * len(src) + s
            for k, c in p.terms.items():
                rows[tindex[k + mk]][col] = c
    basis = nullspace(ring.field, rows, ncols)
    out = []
    for vec in basis:
        parts = []
        for i in range(n):
            terms = {mk: vec[i * len(src) + s] for s, mk in enumerate(src) if vec[i * len(src) + s]}
            parts.append(Polynomial(ring, terms))
        out.append(tuple(parts))
    return out


def graded_kernel_oracle(f: Polynomial, degree_cap: int, cell_budget: int = DEFAULT_CELL_BUDGET):
    """For each e <= degree_cap: (dim D_0(f)_e, number of minimal generators in degree e).

    The kernel of (a_i) -> sum a_i * df/dx_i is found by row reduction in
    each degree; the generator count is dim D_e - dim(S_1 * D_{e-1}).
    """
    if not f.is_homogeneous():
        raise ValueError("f must be homogeneous")
    ring = f.ring
    grad = list(f.gradient())
    shift = f.degree() - 1
    module = FreeModule(ring, [0] * ring.nvars)
    out = {}
    previous = []
    for e in range(degree_cap + 1):
        try:
            kernel = kernel_in_degree(grad, shift, e, cell_budget)
        except CellBudgetExceeded as exc:
            exc.partial = dict(out)
            raise
        dim = len(kernel)
        if previous:
            lifted = graded_span([module.element(v) for v in previous], e, module)
            generated = rank(ring.field, lifted, len(_Coords(module, e)))
        else:
            generated = 0
        out[e] = (dim, dim - generated)
        previous = kernel
    return out


def exponents_from_oracle(table: dict) -> tuple[int, ...]:
    degs = []
    for e in sorted(table):
        degs.extend([e] * table[e][1])
    return tuple(degs)


def quotient_dimension(polys, degree: int) -> int:
    """dim_k (S/I)_e for the ideal generated by homogeneous ``polys``."""
    ring: PolyRing = polys[0].ring
    module = FreeModule(ring, [0])
    gens = [module.element([p]) for p in polys if p]
    total = len(ring.monomials(degree))
    if not gens:
        return total
    return total - span_dimension(gens, degree, module)
