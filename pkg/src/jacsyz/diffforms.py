"""Polynomial differential forms on k^n with the grading |x_i| = |dx_i| = 1.

A q-form is stored as ``{sorted index tuple: Polynomial}``; a form of
degree n-1 is identified with a vector (v_0, ..., v_{n-1}) through

    v  <->  sum_i (-1)^i v_i dx_0 ^ ... ^ (omit dx_i) ^ ... ^ dx_{n-1}

so that df ^ toForm(v) = (sum_i v_i * df/dx_i) dx_0 ^ ... ^ dx_{n-1}.
For three variables this is a dy^dz - b dx^dz + c dx^dy.
"""

from __future__ import annotations

from .polyring import Polynomial, PolyRing


def _merge_sign(a: tuple, b: tuple) -> int:
    """Sign of the permutation sorting the concatenation a + b (disjoint)."""
    inversions = 0
    for i in a:
        for j in b:
            if i > j:
                inversions += 1
    return -1 if inversions & 1 else 1


class DifferentialForm:
    __slots__ = ("ring", "degree", "coeffs")

    def __init__(self, ring: PolyRing, degree: int, coeffs: dict | None = None):
        if not 0 <= degree <= ring.nvars:
            raise ValueError(f"form degree {degree} out of range")
        self.ring = ring
        self.degree = degree
        clean = {}
        for idx, c in (coeffs or {}).items():
            if len(idx) != degree or list(idx) != sorted(set(idx)):
                raise ValueError(f"index {idx} is not a sorted {degree}-subset")
            if c:
                clean[tuple(idx)] = c
        self.coeffs = clean

    @classmethod
    def zero(cls, ring: PolyRing, degree: int) -> "DifferentialForm":
        return cls(ring, degree)

    @classmethod
    def function(cls, f: Polynomial) -> "DifferentialForm":
        return cls(f.ring, 0, {(): f})

    @classmethod
    def basis(cls, ring: PolyRing, *indices: int) -> "DifferentialForm":
        """dx_{i1} ^ ... ^ dx_{iq} for arbitrary (possibly unsorted) indices."""
        if len(set(indices)) < len(indices):
            return cls(ring, len(indices))
        order = sorted(range(len(indices)), key=lambda k: indices[k])
        perm = [indices[k] for k in order]
        inv = sum(1 for a in range(len(order)) for b in range(a + 1, len(order)) if order[a] > order[b])
        c = ring.one if inv % 2 == 0 else -ring.one
        return cls(ring, len(indices), {tuple(perm): c})

    @classmethod
    def exterior_derivative(cls, f: Polynomial) -> "DifferentialForm":
        """df = sum_i f_i dx_i (only the differential of functions is needed)."""
        return cls(f.ring, 1, {(i,): f.diff(i) for i in range(f.ring.nvars)})

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def total_degree(self) -> int | None:
        """Polynomial degree plus form degree, or None if inhomogeneous/zero."""
        degs = set()
        for c in self.coeffs.values():
            if not c.is_homogeneous():
                return None
            degs.add(c.degree())
        if len(degs) != 1:
            return None
        return degs.pop() + self.degree

    def _same(self, other):
        if not isinstance(other, DifferentialForm) or other.ring != self.ring:
            raise ValueError("forms live over different rings")

    def __add__(self, other):
        self._same(other)
        if other.degree != self.degree:
            raise ValueError("cannot add forms of different degree")
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            out[k] = out[k] + c if k in out else c
        return DifferentialForm(self.ring, self.degree, out)

    def __neg__(self):
        return DifferentialForm(self.ring, self.degree, {k: -c for k, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, p: Polynomial) -> "DifferentialForm":
        return DifferentialForm(self.ring, self.degree, {k: p * c for k, c in self.coeffs.items()})

    __rmul__ = scale

    def wedge(self, other: "DifferentialForm") -> "DifferentialForm":
        self._same(other)
        q = self.degree + other.degree
        if q > self.ring.nvars:
            return DifferentialForm(self.ring, self.ring.nvars)
        out = {}
        for a, ca in self.coeffs.items():
            for b, cb in other.coeffs.items():
                if set(a) & set(b):
                    continue
                key = tuple(sorted(a + b))
                term = ca * cb
                if _merge_sign(a, b) < 0:
                    term = -term
                out[key] = out[key] + term if key in out else term
        return DifferentialForm(self.ring, q, out)

    __xor__ = wedge

    def contract_euler(self) -> "DifferentialForm":
        """Interior product with the Euler field sum_i x_i d/dx_i."""
        if self.degree == 0:
            raise ValueError("cannot contract a 0-form")
        gens = self.ring.gens
        out = {}
        for idx, c in self.coeffs.items():
            for pos, i in enumerate(idx):
                key = idx[:pos] + idx[pos + 1:]
                term = gens[i] * c
                if pos % 2:
                    term = -term
                out[key] = out[key] + term if key in out else term
        return DifferentialForm(self.ring, self.degree - 1, out)

    def coefficient(self, *indices: int) -> Polynomial:
        return self.coeffs.get(tuple(indices), self.ring.zero)

    def __eq__(self, other):
        if not isinstance(other, DifferentialForm):
            return NotImplemented
        return self.ring == other.ring and self.degree == other.degree and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.degree, frozenset(self.coeffs.items())))

    def __str__(self):
        if not self.coeffs:
            return "0"
        names = [f"d{n}" for n in self.ring.names]
        parts = []
        for idx in sorted(self.coeffs):
            c = self.coeffs[idx]
            basis = "^".join(names[i] for i in idx)
            if not basis:
                parts.append(f"({c})")
            else:
                parts.append(f"({c})*{basis}")
        return " + ".join(parts)

    __repr__ = __str__


def volume_form(ring: PolyRing) -> DifferentialForm:
    return DifferentialForm(ring, ring.nvars, {tuple(range(ring.nvars)): ring.one})


def to_form(vector) -> DifferentialForm:
    """Vector (a, b, c[, e]) -> the corresponding (n-1)-form."""
    vector = list(vector)
    ring = vector[0].ring
    n = ring.nvars
    if len(vector) != n:
        raise ValueError(f"expected a vector of length {n}")
    coeffs = {}
    for i, v in enumerate(vector):
        idx = tuple(j for j in range(n) if j != i)
        coeffs[idx] = -v if i % 2 else v
    return DifferentialForm(ring, n - 1, coeffs)


def from_form(form: DifferentialForm) -> tuple[Polynomial, ...]:
    """Inverse of :func:`to_form`; requires an (n-1)-form."""
    ring = form.ring
    n = ring.nvars
    if form.degree != n - 1:
        raise ValueError(f"expected a {n - 1}-form, got degree {form.degree}")
    out = []
    for i in range(n):
        c = form.coefficient(*(j for j in range(n) if j != i))
        out.append(-c if i % 2 else c)
    return tuple(out)


def syzygy_value(vector, f: Polynomial) -> Polynomial:
    """a*f_x + b*f_y + c*f_z (+ e*f_w)."""
    return sum((v * g for v, g in zip(vector, f.gradient())), f.ring.zero)


def koszul_forms(f: Polynomial):
    """Pairs (omega^u, kappa^u) with omega^u = df ^ du and kappa^u its triple.

    kappa^x = (0, f_z, -f_y), kappa^y = (f_z, 0, -f_x), kappa^z = (f_y, -f_x, 0)
    up to the sign fixed by :func:`from_form`.
    """
    ring = f.ring
    if ring.nvars != 3:
        raise ValueError("2-forms are triples only in three variables")
    if not f.is_homogeneous() or f.degree() < 1:
        raise ValueError("need a homogeneous polynomial of positive degree")
    df = DifferentialForm.exterior_derivative(f)
    out = []
    for u in range(3):
        omega = df.wedge(DifferentialForm.basis(ring, u))
        kappa = from_form(omega)
        if syzygy_value(kappa, f):
            raise ArithmeticError("Koszul triple fails the syzygy equation")
        out.append((omega, kappa))
    return out


def koszul_syzygies(f: Polynomial) -> list[tuple[Polynomial, ...]]:
    """The trivial syzygies f_j e_i - f_i e_j, i < j, in any number of variables."""
    grad = f.gradient()
    n = f.ring.nvars
    out = []
    for i in range(n):
        for j in range(i + 1, n):
            v = [f.ring.zero] * n
            v[i] = grad[j]
            v[j] = -grad[i]
            out.append(tuple(v))
    return out
