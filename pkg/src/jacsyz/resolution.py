"""Minimal graded free resolutions and Betti tables."""

from __future__ import annotations

from collections import Counter

from .groebner import (
    FreeModule,
    GradedModuleMap,
    minimal_generators,
    syzygy_module,
)


class ResolutionTooLong(RuntimeError):
    def __init__(self, maps, betti):
        super().__init__(f"resolution did not terminate within {len(maps)} steps")
        self.maps = maps
        self.betti = betti


class BettiTable:
    """Graded Betti numbers: F_i = sum_a S(-a)^{entries[(i, a)]}."""

    def __init__(self, entries=None):
        self.entries = {k: v for k, v in dict(entries or {}).items() if v}

    @classmethod
    def from_degrees(cls, stages) -> "BettiTable":
        entries = {}
        for i, degs in enumerate(stages):
            for a, n in Counter(degs).items():
                entries[(i, a)] = n
        return cls(entries)

    @classmethod
    def from_json(cls, rows) -> "BettiTable":
        return cls({(r["stage"], -r["twist"]): r["multiplicity"] for r in rows})

    @property
    def length(self) -> int:
        return max((i for i, _ in self.entries), default=-1)

    def stage(self, i: int) -> dict[int, int]:
        return {a: n for (j, a), n in sorted(self.entries.items()) if j == i}

    def rank(self, i: int) -> int:
        return sum(self.stage(i).values())

    def shifted(self, stage_offset: int = 0, degree_offset: int = 0) -> "BettiTable":
        return BettiTable({(i + stage_offset, a + degree_offset): n for (i, a), n in self.entries.items()})

    def __add__(self, other: "BettiTable") -> "BettiTable":
        out = Counter(self.entries)
        out.update(other.entries)
        return BettiTable(out)

    def __eq__(self, other):
        return isinstance(other, BettiTable) and self.entries == other.entries

    def __hash__(self):
        return hash(frozenset(self.entries.items()))

    def to_json(self) -> list[dict]:
        return [
            {"stage": i, "twist": -a, "multiplicity": n}
            for (i, a), n in sorted(self.entries.items())
        ]

    def shape(self) -> str:
        """'0 -> S(-9) -> S(-7)^3 -> S(-4)^3 -> S' style display."""
        if not self.entries:
            return "0"
        parts = []
        for i in range(self.length, -1, -1):
            terms = []
            for a, n in self.stage(i).items():
                mod = "S" if a == 0 else f"S({-a})"
                terms.append(mod if n == 1 else f"{mod}^{n}")
            parts.append(" + ".join(terms) if terms else "0")
        return "0 -> " + " -> ".join(parts)

    def staircase(self) -> str:
        """Macaulay2-style table: column i, row j holds beta_{i, i+j}."""
        if not self.entries:
            return "total: 0"
        n = self.length
        rows = sorted({a - i for i, a in self.entries})
        cols = range(n + 1)
        cells = [["" for _ in cols] for _ in rows]
        for (i, a), v in self.entries.items():
            cells[rows.index(a - i)][i] = str(v)
        totals = [str(self.rank(i)) for i in cols]
        head = [str(i) for i in cols]
        labels = ["", "total:"] + [f"{j}:" for j in rows]
        body = [head, totals] + [[c or "." for c in row] for row in cells]
        width = max(len(c) for row in body for c in row)
        lw = max(len(s) for s in labels)
        lines = []
        for label, row in zip(labels, body):
            lines.append(label.rjust(lw) + " " + " ".join(c.rjust(width) for c in row))
        return "\n".join(lines)

    def __str__(self):
        return self.shape()

    def __repr__(self):
        return f"BettiTable({self.shape()})"


def minimize_presentation(M: GradedModuleMap) -> GradedModuleMap:
    """Remove unit entries by row/column elimination until none are left.

    The cokernel is unchanged: a constant entry c at (i, j) expresses target
    generator i through the others, so row i and column j can be dropped after
    clearing row i from every other column.
    """
    ring = M.ring
    field = ring.field
    rows = [list(r) for r in M.entries]
    tdeg = list(M.target.degrees)
    sdeg = list(M.source.degrees)
    while True:
        hit = None
        for i, row in enumerate(rows):
            for j, c in enumerate(row):
                if c and c.is_constant():
                    hit = (i, j)
                    break
            if hit:
                break
        if hit is None:
            break
        i, j = hit
        inv = field.inv(rows[i][j].terms[0])
        for k in range(len(sdeg)):
            if k == j or not rows[i][k]:
                continue
            factor = rows[i][k].scale(inv)
            for r in range(len(rows)):
                if rows[r][j]:
                    rows[r][k] = rows[r][k] - factor * rows[r][j]
        del rows[i]
        del tdeg[i]
        for r in rows:
            del r[j]
        del sdeg[j]
    target = FreeModule(ring, tdeg)
    cols = [target.element([rows[r][k] for r in range(len(rows))]) for k in range(len(sdeg))]
    return GradedModuleMap(target, cols, sdeg)


def resolve(presentation: GradedModuleMap, max_length: int = 10):
    """Minimal free resolution of coker(presentation).

    Returns the list of maps F_1 -> F_0, F_2 -> F_1, ... and the Betti table.
    After removing unit entries from the presentation, each further map sends
    the basis to a minimal generating set of the previous kernel, which makes
    the resolution minimal.
    """
    pres = minimize_presentation(presentation)
    F0 = pres.target
    stages = [list(F0.degrees)]
    maps = []
    current = [c for c in pres.columns if not c.is_zero()]
    module = F0
    while current:
        if len(maps) >= max_length:
            raise ResolutionTooLong(maps, BettiTable.from_degrees(stages))
        gens, degs = minimal_generators(current, module)
        phi = GradedModuleMap(module, gens, degs)
        maps.append(phi)
        stages.append(list(degs))
        kernel = syzygy_module(phi)
        module = phi.source
        current = kernel.columns
    return maps, BettiTable.from_degrees(stages)


def minimal_free_resolution(presentation: GradedModuleMap, max_length: int = 10):
    return resolve(presentation, max_length)


def resolve_submodule(gens, module: FreeModule | None = None, max_length: int = 10):
    """Minimal free resolution of the submodule generated by ``gens``.

    Stage 0 of the returned Betti table holds its minimal generators.
    """
    mins, degs = minimal_generators(gens, module)
    if not mins:
        return [], BettiTable()
    phi = GradedModuleMap(mins[0].module, mins, degs)
    rel = syzygy_module(phi)
    pres = GradedModuleMap(phi.source, rel.columns, rel.source.degrees)
    maps, betti = resolve(pres, max_length)
    return [phi] + maps, betti


def composes_to_zero(maps) -> bool:
    for a, b in zip(maps, maps[1:]):
        for col in b.columns:
            if not a.apply(col).is_zero():
                return False
    return True


def is_minimal(maps) -> bool:
    """No entry of any map is a nonzero constant."""
    for phi in maps:
        for col in phi.columns:
            for c in col:
                if c and c.is_constant():
                    return False
    return True
