"""Gröbner bases for graded submodules of free modules over k[x, y, z(, w)].

Every module term (monomial times basis vector) is packed into one int whose
integer order is the module order and for which multiplication by a monomial
is integer addition.  The order is term-over-position on the twisted degree
(degree of the monomial plus degree of the basis vector), degrevlex on the
monomial, then position with e_0 > e_1 > ...  An optional block weight puts
whole groups of positions above all others; this is the elimination order
used to extract kernels from the graph of a matrix.

Only homogeneous input is accepted, so S-pairs are processed degree by
degree (normal strategy; sugar coincides with degree here).
"""

from __future__ import annotations

import heapq
from collections import defaultdict

from .polyring import WIDTH, Polynomial, PolyRing

_BLOCK = 1 << 24
_DEG_OFFSET = 1 << 22


class FreeModule:
    """Graded free module S(-a_0) + ... + S(-a_{r-1}); ``degrees`` = (a_i)."""

    def __init__(self, ring: PolyRing, degrees):
        self.ring = ring
        self.degrees = tuple(int(a) for a in degrees)

    @property
    def rank(self) -> int:
        return len(self.degrees)

    def __eq__(self, other):
        return isinstance(other, FreeModule) and other.ring == self.ring and other.degrees == self.degrees

    def __hash__(self):
        return hash((self.ring, self.degrees))

    def __repr__(self):
        return f"FreeModule({list(self.degrees)})"

    def element(self, coords) -> "FreeModuleElement":
        return FreeModuleElement(self, coords)

    def zero(self) -> "FreeModuleElement":
        return FreeModuleElement(self, [self.ring.zero] * self.rank)

    def basis(self, i: int) -> "FreeModuleElement":
        coords = [self.ring.zero] * self.rank
        coords[i] = self.ring.one
        return FreeModuleElement(self, coords)


class FreeModuleElement:
    __slots__ = ("module", "coords")

    def __init__(self, module: FreeModule, coords):
        coords = tuple(coords)
        if len(coords) != module.rank:
            raise ValueError(f"expected {module.rank} coordinates, got {len(coords)}")
        for c in coords:
            if c.ring != module.ring:
                raise ValueError("coordinate from a different ring")
        self.module = module
        self.coords = coords

    def __iter__(self):
        return iter(self.coords)

    def __getitem__(self, i):
        return self.coords[i]

    def __len__(self):
        return len(self.coords)

    def is_zero(self) -> bool:
        return not any(self.coords)

    def __bool__(self):
        return not self.is_zero()

    def degree(self) -> int | None:
        """Twisted degree if homogeneous and nonzero, else None."""
        degs = set()
        for c, a in zip(self.coords, self.module.degrees):
            if c:
                if not c.is_homogeneous():
                    return None
                degs.add(c.degree() + a)
        return degs.pop() if len(degs) == 1 else None

    def is_homogeneous(self) -> bool:
        return self.is_zero() or self.degree() is not None

    def _same(self, other):
        if not isinstance(other, FreeModuleElement) or other.module != self.module:
            raise ValueError(f"twist mismatch: {self.module} vs {getattr(other, 'module', other)}")

    def __add__(self, other):
        self._same(other)
        return FreeModuleElement(self.module, [a + b for a, b in zip(self.coords, other.coords)])

    def __sub__(self, other):
        self._same(other)
        return FreeModuleElement(self.module, [a - b for a, b in zip(self.coords, other.coords)])

    def __neg__(self):
        return FreeModuleElement(self.module, [-a for a in self.coords])

    def scale(self, p) -> "FreeModuleElement":
        if not isinstance(p, Polynomial):
            p = self.module.ring.const(p)
        return FreeModuleElement(self.module, [p * a for a in self.coords])

    def __eq__(self, other):
        if not isinstance(other, FreeModuleElement):
            return NotImplemented
        return self.module == other.module and self.coords == other.coords

    def __hash__(self):
        return hash(self.coords)

    def __str__(self):
        return "[" + ", ".join(str(c) for c in self.coords) + "]"

    __repr__ = __str__


class GradedModuleMap:
    """Matrix of homogeneous polynomials between twisted free modules.

    Columns are elements of ``target``; column j is the image of the j-th
    basis vector of ``source``.
    """

    def __init__(self, target: FreeModule, columns, source_degrees=None):
        columns = list(columns)
        for c in columns:
            if c.module != target:
                raise ValueError("column does not live in the target module")
        if source_degrees is None:
            source_degrees = []
            for c in columns:
                d = c.degree()
                if d is None:
                    raise ValueError("cannot infer the degree of a zero or inhomogeneous column")
                source_degrees.append(d)
        if len(source_degrees) != len(columns):
            raise ValueError("one source degree per column is required")
        self.target = target
        self.columns = columns
        self.source = FreeModule(target.ring, source_degrees)

    @classmethod
    def from_rows(cls, ring: PolyRing, rows, target_degrees, source_degrees=None):
        target = FreeModule(ring, target_degrees)
        ncols = len(rows[0]) if rows else len(source_degrees or [])
        cols = [target.element([rows[i][j] for i in range(len(rows))]) for j in range(ncols)]
        return cls(target, cols, source_degrees)

    @property
    def ring(self) -> PolyRing:
        return self.target.ring

    @property
    def shape(self) -> tuple[int, int]:
        return self.target.rank, len(self.columns)

    @property
    def entries(self) -> list[list[Polynomial]]:
        return [[c[i] for c in self.columns] for i in range(self.target.rank)]

    def is_homogeneous(self) -> bool:
        for c, a in zip(self.columns, self.source.degrees):
            if not c.is_zero() and c.degree() != a:
                return False
            if c.degree() is None and not c.is_zero():
                return False
        return True

    def apply(self, vector) -> FreeModuleElement:
        coords = vector.coords if isinstance(vector, FreeModuleElement) else tuple(vector)
        out = self.target.zero()
        for c, col in zip(coords, self.columns):
            if c:
                out = out + col.scale(c)
        return out

    def __repr__(self):
        return f"GradedModuleMap({self.target.rank}x{len(self.columns)}, source={list(self.source.degrees)})"


# ---------------------------------------------------------------------------
# term encoding


class _Encoder:
    def __init__(self, ring: PolyRing, degrees, blocks=None):
        self.ring = ring
        self.degrees = tuple(degrees)
        r = len(self.degrees)
        self.rank = r
        blocks = blocks or [0] * r
        self.blocks = tuple(blocks)
        sh = ring.shift
        self.off = tuple(
            (((blocks[i] * _BLOCK + self.degrees[i] + _DEG_OFFSET) << sh) * r) + (r - 1 - i)
            for i in range(r)
        )

    def encode(self, pos: int, mk: int) -> int:
        return mk * self.rank + self.off[pos]

    def decode(self, t: int) -> tuple[int, int]:
        r = self.rank
        pos = r - 1 - t % r
        return pos, (t - self.off[pos]) // r

    def to_vec(self, coords) -> dict:
        vec = {}
        r = self.rank
        for pos, c in enumerate(coords):
            o = self.off[pos]
            for k, v in c.terms.items():
                vec[k * r + o] = v
        return vec

    def from_vec(self, vec: dict) -> list[Polynomial]:
        parts = [dict() for _ in range(self.rank)]
        for t, c in vec.items():
            pos, mk = self.decode(t)
            parts[pos][mk] = c
        return [Polynomial(self.ring, p) for p in parts]

    def term_degree(self, t: int) -> int:
        pos, mk = self.decode(t)
        return self.ring.key_degree(mk) + self.degrees[pos]


class _Elem:
    __slots__ = ("vec", "lead", "pos", "packed", "deg", "index")

    def __init__(self, vec, lead, pos, packed, deg, index):
        self.vec = vec
        self.lead = lead
        self.pos = pos
        self.packed = packed
        self.deg = deg
        self.index = index


class _Engine:
    """Buchberger's algorithm on packed module vectors."""

    def __init__(self, ring: PolyRing, degrees, blocks=None, product_criterion=False):
        self.ring = ring
        self.enc = _Encoder(ring, degrees, blocks)
        self.p = ring.field.characteristic or None
        self.inv = ring.field.inv
        self.basis: list[_Elem] = []
        self.by_pos = defaultdict(list)
        self.product_criterion = product_criterion
        self.pairs = {}
        self.heap = []
        self.reductions = 0

    # -- packed monomial helpers ---------------------------------------------
    def _pmax(self, a: int, b: int) -> int:
        out = 0
        for i in range(self.ring.nvars):
            s = WIDTH * i
            ea = (a >> s) & 0xFFFF
            eb = (b >> s) & 0xFFFF
            out |= (ea if ea > eb else eb) << s
        return out

    def _coprime(self, a: int, b: int) -> bool:
        for i in range(self.ring.nvars):
            s = WIDTH * i
            if (a >> s) & 0xFFFF and (b >> s) & 0xFFFF:
                return False
        return True

    def _pdivides(self, small: int, big: int) -> bool:
        g = self.ring.guard
        return ((big | g) - small) & g == g

    def _pdeg(self, packed: int) -> int:
        return sum((packed >> (WIDTH * i)) & 0xFFFF for i in range(self.ring.nvars))

    def _term(self, pos: int, packed: int) -> int:
        mk = (self._pdeg(packed) << self.ring.shift) - packed
        return self.enc.encode(pos, mk)

    # -- reduction -------------------------------------------------------------
    def find_reducer(self, t: int):
        enc = self.enc
        r = enc.rank
        pos = r - 1 - t % r
        mk = (t - enc.off[pos]) // r
        ring = self.ring
        pk = -mk & ring.mask
        g = ring.guard
        big = pk | g
        for e in self.by_pos.get(pos, ()):
            if (big - e.packed) & g == g:
                return e
        return None

    def reduce(self, vec: dict, basis_only=None) -> dict:
        """Full reduction of ``vec`` (consumed) against the current basis."""
        if not vec:
            return vec
        p = self.p
        heap = [-t for t in vec]
        heapq.heapify(heap)
        rem = {}
        find = self.find_reducer
        pop = heapq.heappop
        push = heapq.heappush
        get = vec.get
        while heap:
            t = -pop(heap)
            c = get(t)
            if c is None:
                continue
            del vec[t]
            e = find(t)
            if e is None:
                rem[t] = c
                continue
            self.reductions += 1
            shift = t - e.lead
            if p is not None:
                nc = p - c
                for s, rc in e.vec.items():
                    if s == e.lead:
                        continue
                    k = s + shift
                    old = get(k)
                    if old is None:
                        vec[k] = nc * rc % p
                        push(heap, -k)
                    else:
                        v = (old + nc * rc) % p
                        if v:
                            vec[k] = v
                        else:
                            del vec[k]
            else:
                for s, rc in e.vec.items():
                    if s == e.lead:
                        continue
                    k = s + shift
                    old = get(k)
                    if old is None:
                        vec[k] = -c * rc
                        push(heap, -k)
                    else:
                        v = old - c * rc
                        if v:
                            vec[k] = v
                        else:
                            del vec[k]
        return rem

    # -- basis maintenance -----------------------------------------------------
    def _monic(self, vec: dict) -> tuple[dict, int]:
        lead = max(vec)
        c = vec[lead]
        if c != 1:
            ic = self.inv(c)
            p = self.p
            if p is not None:
                vec = {k: v * ic % p for k, v in vec.items()}
            else:
                vec = {k: v * ic for k, v in vec.items()}
        return vec, lead

    def add(self, vec: dict) -> _Elem:
        vec, lead = self._monic(vec)
        pos, mk = self.enc.decode(lead)
        packed = -mk & self.ring.mask
        deg = self.ring.key_degree(mk) + self.enc.degrees[pos]
        h = _Elem(vec, lead, pos, packed, deg, len(self.basis))
        self._update(h)
        self.basis.append(h)
        self.by_pos[pos].append(h)
        return h

    def _update(self, h: _Elem):
        same = self.by_pos.get(h.pos, [])
        hp = h.packed
        # old pairs made redundant by h (chain criterion)
        if self.pairs:
            lcm_with_h = {}
            dead = []
            for (i, j), lp in self.pairs.items():
                bi = self.basis[i]
                if bi.pos != h.pos or not self._pdivides(hp, lp):
                    continue
                li = lcm_with_h.get(i)
                if li is None:
                    li = lcm_with_h[i] = self._pmax(bi.packed, hp)
                lj = lcm_with_h.get(j)
                if lj is None:
                    lj = lcm_with_h[j] = self._pmax(self.basis[j].packed, hp)
                if li != lp and lj != lp:
                    dead.append((i, j))
            for key in dead:
                del self.pairs[key]
        if not same:
            return
        cands = [(g.index, self._pmax(g.packed, hp), self._coprime(g.packed, hp)) for g in same]
        # criterion M: drop (g, h) when another lcm properly divides its lcm
        kept = []
        for i, lp, cop in cands:
            if any(lq != lp and self._pdivides(lq, lp) for _, lq, _ in cands):
                continue
            kept.append((i, lp, cop))
        # criterion F plus product criterion: one pair per lcm
        groups = {}
        for i, lp, cop in kept:
            groups.setdefault(lp, []).append((i, cop))
        for lp, members in groups.items():
            if self.product_criterion and any(cop for _, cop in members):
                continue
            i = members[0][0]
            self.pairs[(i, h.index)] = lp
            t = self._term(h.pos, lp)
            deg = self._pdeg(lp) + self.enc.degrees[h.pos]
            heapq.heappush(self.heap, (deg, t, i, h.index))

    def spoly(self, i: int, j: int, lp: int) -> dict:
        a, b = self.basis[i], self.basis[j]
        t = self._term(a.pos, lp)
        sa, sb = t - a.lead, t - b.lead
        p = self.p
        out = {k + sa: c for k, c in a.vec.items() if k != a.lead}
        for k, c in b.vec.items():
            if k == b.lead:
                continue
            k += sb
            old = out.get(k)
            if old is None:
                out[k] = (-c) % p if p is not None else -c
            else:
                v = (old - c) % p if p is not None else old - c
                if v:
                    out[k] = v
                else:
                    del out[k]
        return out

    def run(self, inputs: list[dict], max_degree: int | None = None) -> list[int]:
        """Complete the basis with ``inputs``; return indices of inputs that
        were not redundant when reached (a minimal generating subset)."""
        todo = []
        for n, vec in enumerate(inputs):
            if vec:
                todo.append((self.enc.term_degree(max(vec)), n))
        todo.sort()
        minimal = []
        ti = 0
        heap = self.heap
        while ti < len(todo) or heap:
            while heap and heap[0][2:] not in self.pairs:
                heapq.heappop(heap)
            cand = []
            if heap:
                cand.append(heap[0][0])
            if ti < len(todo):
                cand.append(todo[ti][0])
            if not cand:
                break
            e = min(cand)
            if max_degree is not None and e > max_degree:
                break
            while heap and heap[0][0] == e:
                _, _, i, j = heapq.heappop(heap)
                lp = self.pairs.pop((i, j), None)
                if lp is None:
                    continue
                r = self.reduce(self.spoly(i, j, lp))
                if r:
                    self.add(r)
            while ti < len(todo) and todo[ti][0] == e:
                n = todo[ti][1]
                ti += 1
                r = self.reduce(dict(inputs[n]))
                if r:
                    self.add(r)
                    minimal.append(n)
        return minimal

    def elements(self) -> list[list[Polynomial]]:
        return [self.enc.from_vec(e.vec) for e in self.basis]


# ---------------------------------------------------------------------------
# public API


def _check_gens(gens, module=None):
    gens = list(gens)
    if module is None:
        if not gens:
            raise ValueError("cannot infer the ambient module of an empty list")
        module = gens[0].module
    for g in gens:
        if g.module != module:
            raise ValueError("twist mismatch between generators")
        if not g.is_homogeneous():
            raise ValueError(f"generator {g} is not homogeneous")
    return gens, module


class GroebnerBasis:
    """A Gröbner basis of a graded submodule, with membership and Hilbert data."""

    def __init__(self, module: FreeModule, engine: _Engine, complete_to: int | None = None):
        self.module = module
        self._engine = engine
        self.complete_to = complete_to
        self.elements = [module.element(c) for c in engine.elements()]

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def leading_terms(self) -> list[tuple[int, tuple[int, ...]]]:
        ring = self.module.ring
        out = []
        for e in self._engine.basis:
            pos, mk = self._engine.enc.decode(e.lead)
            out.append((pos, ring.exponents(mk)))
        return out

    def normal_form(self, v: FreeModuleElement) -> FreeModuleElement:
        if v.module != self.module:
            raise ValueError("twist mismatch")
        eng = self._engine
        r = eng.reduce(eng.enc.to_vec(v.coords))
        return self.module.element(eng.enc.from_vec(r))

    def contains(self, v: FreeModuleElement) -> bool:
        d = v.degree()
        if self.complete_to is not None and d is not None and d > self.complete_to:
            raise ValueError(f"basis only complete up to degree {self.complete_to}")
        return self.normal_form(v).is_zero()

    def hilbert_function(self, degree: int) -> int:
        """dim_k of the submodule in the given (twisted) degree."""
        ring = self.module.ring
        total = 0
        eng = self._engine
        for pos, a in enumerate(self.module.degrees):
            leads = [e.packed for e in eng.by_pos.get(pos, [])]
            if not leads:
                continue
            for mk in ring.monomials(degree - a):
                pk = -mk & ring.mask
                if any(eng._pdivides(lp, pk) for lp in leads):
                    total += 1
        return total


def groebner_basis(gens, module: FreeModule | None = None, *, max_degree=None) -> GroebnerBasis:
    gens, module = _check_gens(gens, module)
    eng = _Engine(module.ring, module.degrees, product_criterion=module.rank == 1)
    eng.run([eng.enc.to_vec(g.coords) for g in gens], max_degree=max_degree)
    return GroebnerBasis(module, eng, max_degree)


def buchberger(gens, module: FreeModule | None = None) -> list[FreeModuleElement]:
    """Gröbner basis (as a list) of the submodule generated by ``gens``."""
    return groebner_basis(gens, module).elements


def normal_form(v: FreeModuleElement, G) -> FreeModuleElement:
    """Remainder of ``v`` under the division algorithm by the list ``G``."""
    G = [g for g in G if not g.is_zero()]
    for g in G:
        if g.module != v.module:
            raise ValueError("twist mismatch")
    if not v.is_homogeneous() or not all(g.is_homogeneous() for g in G):
        raise ValueError("normal forms are only taken of homogeneous elements")
    module = v.module
    eng = _Engine(module.ring, module.degrees)
    for g in G:
        vec, lead = eng._monic(eng.enc.to_vec(g.coords))
        pos, mk = eng.enc.decode(lead)
        e = _Elem(vec, lead, pos, -mk & module.ring.mask, 0, len(eng.basis))
        eng.basis.append(e)
        eng.by_pos[pos].append(e)
    return module.element(eng.enc.from_vec(eng.reduce(eng.enc.to_vec(v.coords))))


def minimal_generators(gens, module: FreeModule | None = None):
    """A minimal generating subset of ``gens`` and its weakly increasing degrees.

    Homogeneous Buchberger with the inputs fed in by degree: an input that
    does not reduce to zero against everything of lower or equal degree seen
    so far is a minimal generator (graded Nakayama).
    """
    gens = list(gens)
    if module is None and not gens:
        return [], ()
    gens, module = _check_gens(gens, module)
    eng = _Engine(module.ring, module.degrees, product_criterion=module.rank == 1)
    chosen = eng.run([eng.enc.to_vec(g.coords) for g in gens])
    out = [gens[n] for n in chosen]
    return out, tuple(g.degree() for g in out)


def syzygy_module(M: GradedModuleMap) -> GradedModuleMap:
    """Generators of ker(M: source -> target), as a map into ``source``.

    Computed from a Gröbner basis of the graph {(M c, c)} under an order that
    eliminates the image block; the basis elements with zero image part form
    a Gröbner basis of the kernel.  Each is certified by multiplying out.
    """
    ring = M.ring
    r = M.target.rank
    n = len(M.columns)
    degrees = list(M.target.degrees) + list(M.source.degrees)
    blocks = [1] * r + [0] * n
    eng = _Engine(ring, degrees, blocks=blocks)
    inputs = []
    for j, col in enumerate(M.columns):
        if not col.is_zero() and col.degree() != M.source.degrees[j]:
            raise ValueError(f"column {j} is not homogeneous of degree {M.source.degrees[j]}")
        coords = list(col.coords) + [ring.zero] * n
        coords[r + j] = ring.one
        inputs.append(eng.enc.to_vec(coords))
    eng.run(inputs)
    kernel = []
    for e in eng.basis:
        if e.pos >= r:
            coords = eng.enc.from_vec(e.vec)[r:]
            v = M.source.element(coords)
            if not M.apply(v).is_zero():
                raise ArithmeticError("kernel element does not map to zero")
            kernel.append(v)
    return GradedModuleMap(M.source, kernel)


def ideal_module(ring: PolyRing) -> FreeModule:
    return FreeModule(ring, [0])


def ideal_elements(polys) -> list[FreeModuleElement]:
    polys = list(polys)
    F = ideal_module(polys[0].ring)
    return [F.element([p]) for p in polys]


def is_artinian_quotient(polys) -> tuple[bool, int | None]:
    """Whether S/(polys) is finite dimensional, and its dimension if so."""
    polys = [p for p in polys]
    ring = polys[0].ring
    nonzero = [p for p in polys if p]
    if not nonzero:
        return False, None
    for p in nonzero:
        if not p.is_homogeneous():
            raise ValueError("homogeneous generators required")
    G = groebner_basis(ideal_elements(nonzero))
    leads = [e for _, e in G.leading_terms()]
    n = ring.nvars
    bounds = []
    for v in range(n):
        pure = [lt[v] for lt in leads if all(lt[u] == 0 for u in range(n) if u != v)]
        if not pure:
            return False, None
        bounds.append(min(pure))
    # count standard monomials inside the box given by the pure powers
    eng = G._engine
    lead_packed = [e.packed for e in eng.basis]
    count = 0
    for total in range(sum(b - 1 for b in bounds) + 1):
        for mk in ring.monomials(total):
            pk = -mk & ring.mask
            if not any(eng._pdivides(lp, pk) for lp in lead_packed):
                count += 1
    return True, count
