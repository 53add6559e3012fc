"""Curve (and surface) arrangements f = f_1 ... f_m and their hypothesis checks."""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path

from .field import QQ, Field, field_from_descriptor
from .groebner import GradedModuleMap, is_artinian_quotient, minimal_generators, syzygy_module
from .oracle import _from_flint, _to_flint
from .polyring import Polynomial, PolyRing


class ArrangementError(ValueError):
    pass


class Arrangement:
    """The factor list f_1..f_m of a reduced arrangement."""

    def __init__(self, factors, ring: PolyRing | None = None):
        factors = list(factors)
        if not factors:
            raise ArrangementError("an arrangement needs at least one factor")
        ring = ring or factors[0].ring
        for i, f in enumerate(factors):
            if f.ring != ring:
                raise ArrangementError(f"factor {i + 1} lives in a different ring")
            if f.is_zero() or f.degree() < 1:
                raise ArrangementError(f"factor {i + 1} is constant")
            if not f.is_homogeneous():
                raise ArrangementError(f"factor {i + 1} ({f}) is not homogeneous")
        monics = [f.monic() for f in factors]
        for i, j in itertools.combinations(range(len(factors)), 2):
            if monics[i] == monics[j]:
                raise ArrangementError(f"repeated factor: f_{i + 1} and f_{j + 1} agree up to a scalar")
        self.ring = ring
        self.factors = factors

    @classmethod
    def from_strings(cls, texts, nvars: int = 3, field: Field | str = QQ) -> "Arrangement":
        ring = PolyRing(nvars, field)
        return cls([ring.parse(t) for t in texts], ring)

    @classmethod
    def from_json(cls, data, field: Field | str | None = None) -> "Arrangement":
        """Load ``{variables, characteristic, factors}`` from a dict, path or JSON text."""
        if isinstance(data, (str, Path)) and Path(data).exists():
            data = json.loads(Path(data).read_text())
        elif isinstance(data, str):
            data = json.loads(data)
        variables = list(data.get("variables", ["x", "y", "z"]))
        if variables not in (["x", "y", "z"], ["x", "y", "z", "w"]):
            raise ArrangementError(f"unsupported variables {variables}")
        if field is None:
            field = field_from_descriptor(data.get("characteristic", 0))
        factors = data.get("factors")
        if not isinstance(factors, list) or not factors:
            raise ArrangementError("'factors' must be a non-empty list of strings")
        return cls.from_strings(factors, len(variables), field)

    def to_json(self) -> dict:
        return {
            "variables": list(self.ring.names),
            "characteristic": self.ring.field.characteristic,
            "factors": [str(f) for f in self.factors],
        }

    @property
    def nvars(self) -> int:
        return self.ring.nvars

    @property
    def field(self) -> Field:
        return self.ring.field

    @property
    def m(self) -> int:
        return len(self.factors)

    @property
    def degrees(self) -> tuple[int, ...]:
        return tuple(f.degree() for f in self.factors)

    @property
    def d(self) -> int:
        return sum(self.degrees)

    @property
    def line_count(self) -> int:
        return sum(1 for e in self.degrees if e == 1)

    @cached_property
    def product(self) -> Polynomial:
        out = self.ring.one
        for f in self.factors:
            out = out * f
        return out

    def with_field(self, field: Field | str) -> "Arrangement":
        ring = PolyRing(self.nvars, field)
        return Arrangement([ring.parse(str(f)) for f in self.factors], ring)

    def transform(self, matrix) -> "Arrangement":
        """Apply the substitution v -> matrix * v to every factor."""
        return Arrangement([f.linear_substitution(matrix) for f in self.factors], self.ring)

    def __repr__(self):
        return "Arrangement([" + ", ".join(str(f) for f in self.factors) + "])"


def line_count(A: Arrangement) -> int:
    return A.line_count


# ---------------------------------------------------------------------------
# hypothesis checks


@dataclass
class Check:
    indices: tuple[int, ...]
    ok: bool
    witness: str | None = None


@dataclass
class GenericityReport:
    smooth: list[Check] = field(default_factory=list)
    coprime: list[Check] = field(default_factory=list)
    transversal: list[Check] = field(default_factory=list)
    no_triple_points: list[Check] = field(default_factory=list)
    higher: list[Check] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)
    experimental: bool = False

    @property
    def ok(self) -> bool:
        return all(
            c.ok
            for group in (self.smooth, self.coprime, self.transversal, self.no_triple_points, self.higher)
            for c in group
        )

    def failures(self) -> list[tuple[str, Check]]:
        out = []
        for name in ("smooth", "coprime", "transversal", "no_triple_points", "higher"):
            out.extend((name, c) for c in getattr(self, name) if not c.ok)
        return out

    @property
    def all_smooth(self) -> bool:
        return all(c.ok for c in self.smooth)

    def to_json(self) -> dict:
        def rows(group):
            return [
                {"factors": [i + 1 for i in c.indices], "pass": c.ok, "witness": c.witness} for c in group
            ]

        return {
            "generic": self.ok,
            "experimental": self.experimental,
            "smooth": rows(self.smooth),
            "coprime": rows(self.coprime),
            "transversal": rows(self.transversal),
            "noTriplePoints": rows(self.no_triple_points),
            "higher": rows(self.higher),
            "notes": list(self.notes),
        }


def _small_points(ring: PolyRing, bound: int = 2):
    n = ring.nvars
    for pt in itertools.product(range(-bound, bound + 1), repeat=n):
        nz = [v for v in pt if v]
        if nz and nz[0] == 1:
            yield pt


def find_witness(polys, ring: PolyRing, bound: int = 2) -> str | None:
    """A small projective point on which all ``polys`` vanish, if one exists."""
    for pt in _small_points(ring, bound):
        if all(not p.evaluate(pt) for p in polys):
            return "(" + ":".join(str(v) for v in pt) + ")"
    return None


def _artinian_check(indices, polys, ring, reason) -> Check:
    ok, _ = is_artinian_quotient(polys)
    if ok:
        return Check(tuple(indices), True)
    pt = find_witness(polys, ring)
    witness = f"{reason} {pt}" if pt else f"{reason} (no small rational witness found)"
    return Check(tuple(indices), False, witness)


def _maximal_minors(rows, ring) -> list[Polynomial]:
    k = len(rows)
    out = []
    for cols in itertools.combinations(range(ring.nvars), k):
        out.append(_det([[rows[i][c] for c in cols] for i in range(k)], ring))
    return out


def _det(M, ring) -> Polynomial:
    n = len(M)
    if n == 1:
        return M[0][0]
    total = ring.zero
    for j in range(n):
        if not M[0][j]:
            continue
        minor = [row[:j] + row[j + 1:] for row in M[1:]]
        term = M[0][j] * _det(minor, ring)
        total = total - term if j % 2 else total + term
    return total


def coprime(f: Polynomial, g: Polynomial) -> bool:
    """No common factor: the first syzygy of (f, g) is the Koszul one."""
    ring = f.ring
    M = GradedModuleMap.from_rows(ring, [[f, g]], [0], [f.degree(), g.degree()])
    _, degs = minimal_generators(syzygy_module(M).columns, M.source)
    return min(degs) >= f.degree() + g.degree()


def validate(A: Arrangement, *, full_check: bool = True) -> GenericityReport:
    """Check the normal crossing hypotheses of an arrangement.

    Three variables: every component smooth, pairs coprime and transversal,
    no point on three components.  In four variables the analogous Jacobian
    minor conditions are checked for every subset of at most four factors
    (labelled experimental); ``full_check=False`` skips those subsets.
    """
    ring = A.ring
    report = GenericityReport()
    if A.nvars == 3 and A.m < 4:
        raise ArrangementError(f"need at least 4 components, got {A.m}")
    n = A.nvars
    grads = [f.gradient() for f in A.factors]
    for i, f in enumerate(A.factors):
        report.smooth.append(_artinian_check([i], list(grads[i]), ring, "singular point"))
    report.notes.append("smooth components are irreducible, so no separate irreducibility test is run")
    for i, j in itertools.combinations(range(A.m), 2):
        ok = coprime(A.factors[i], A.factors[j])
        report.coprime.append(Check((i, j), ok, None if ok else "common factor"))
    if n == 4:
        report.experimental = True
        report.notes.append("four-variable hypotheses are an experimental generalisation")
        if not full_check:
            report.notes.append("subset intersection checks skipped (enable full check)")
            return report
    for i, j in itertools.combinations(range(A.m), 2):
        ideal = [A.factors[i], A.factors[j]] + _maximal_minors([grads[i], grads[j]], ring)
        report.transversal.append(_artinian_check([i, j], ideal, ring, "tangency or singular intersection"))
    for trip in itertools.combinations(range(A.m), 3):
        if n == 3:
            ideal = [A.factors[k] for k in trip]
            report.no_triple_points.append(_artinian_check(trip, ideal, ring, "triple point"))
        else:
            ideal = [A.factors[k] for k in trip] + _maximal_minors([grads[k] for k in trip], ring)
            report.no_triple_points.append(_artinian_check(trip, ideal, ring, "non-transversal triple intersection"))
    if n == 4:
        for quad in itertools.combinations(range(A.m), 4):
            ideal = [A.factors[k] for k in quad]
            report.higher.append(_artinian_check(quad, ideal, ring, "quadruple point"))
    return report


# ---------------------------------------------------------------------------
# coordinates


def _inverse(matrix, field: Field):
    n = len(matrix)
    M = _to_flint(field, [[field(v) for v in row] for row in matrix], n)
    if M.rank() < n:
        raise ArrangementError("matrix is singular")
    inv = M.inv()
    return [[_from_flint(field, inv[i, j]) for j in range(n)] for i in range(n)]


def _rank(rows, field: Field) -> int:
    if not rows:
        return 0
    return _to_flint(field, [[field(v) for v in r] for r in rows], len(rows[0])).rank()


def normalize_coordinates(A: Arrangement):
    """Move lines first and change coordinates so the first lines become x, y, z.

    Returns the new arrangement and the matrix T whose rows are the old
    linear forms taken as new coordinates (new_v = T old_v); every factor is
    replaced by f(T^{-1} v).  Free rows are filled with the earliest
    standard basis vectors that keep T invertible.
    """
    ring = A.ring
    field = ring.field
    n = ring.nvars
    lines = [f for f in A.factors if f.degree() == 1]
    others = [f for f in A.factors if f.degree() != 1]
    ordered = lines + others
    k = min(len(lines), n)
    rows = []
    for f in lines[:k]:
        rows.append([f.coefficient(tuple(1 if u == i else 0 for u in range(n))) for i in range(n)])
    if _rank(rows, field) < len(rows):
        raise ArrangementError("the first line forms are linearly dependent (concurrent lines)")
    for i in range(n):
        if len(rows) == n:
            break
        cand = [field(1) if u == i else field(0) for u in range(n)]
        if _rank(rows + [cand], field) == len(rows) + 1:
            rows.append(cand)
    identity = [[field(1) if i == j else field(0) for j in range(n)] for i in range(n)]
    if k == 0:
        return Arrangement(ordered, ring), identity
    inv = _inverse(rows, field)
    return Arrangement([f.linear_substitution(inv) for f in ordered], ring), rows


def random_invertible_matrix(n: int, field: Field, rng, bound: int = 5):
    while True:
        M = [[field(rng.randint(-bound, bound)) for _ in range(n)] for _ in range(n)]
        if _rank(M, field) == n:
            return M
