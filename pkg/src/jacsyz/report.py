"""The end-to-end pipeline and its report, as a dict, JSON or text."""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field

from .arrangement import Arrangement, ArrangementError, normalize_coordinates, validate
from .closedform import (
    CASE_NAMES,
    CheckResult,
    SurfaceResult,
    TheoremNotApplicable,
    VerificationError,
    build_omega_basis,
    compute_d0,
    count_identity,
    omega_span_check,
    oracle_agreement,
    predict,
    relation_text,
    surface_exponents,
    verify_generation,
    verify_resolution,
)
from .oracle import DEFAULT_CELL_BUDGET
from .resolution import BettiTable, ResolutionTooLong

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_HYPOTHESES = 2
EXIT_MISMATCH = 3

MODES = ("verify", "exponents-only", "surface-experiment")
ORACLES = ("groebner", "linear-algebra", "both")


class UsageError(ValueError):
    pass


@dataclass
class RunConfig:
    input_path: str | None = None
    field: str | None = None  # None: take the characteristic from the input file
    mode: str = "verify"
    oracle: str = "both"
    normalize: bool = True
    output: str = "text"
    degree_cap: int | None = None
    cell_budget: int = DEFAULT_CELL_BUDGET
    full_check: bool = False
    surface_m: int | None = None
    surface_p: int | None = None


def exponent_notation(exponents) -> str:
    """Run-length notation: (3,3,3) -> "(3)_3", (7,7,7,8,8,8,8) -> "(7)_3(8)_4"."""
    if not exponents:
        return "()"
    counts = Counter(exponents)
    return "".join(f"({e})_{counts[e]}" for e in sorted(counts))


def _evidence(field) -> str:
    return "characteristic-p evidence" if field.characteristic else "exact over Q"


def _frame(A: Arrangement, N: Arrangement, matrix) -> dict:
    fmt = A.field.format
    return {
        "matrix": [[fmt(v) for v in row] for row in matrix],
        "originalFactors": [str(f) for f in A.factors],
        "normalizedFactors": [str(f) for f in N.factors],
    }


def _identity(A: Arrangement):
    field = A.field
    n = A.nvars
    return [[field(1) if i == j else field(0) for j in range(n)] for i in range(n)]


def _coordinate_frame(A: Arrangement) -> bool:
    """Lines already come first and the first ones are the coordinate lines."""
    k = min(A.line_count, A.nvars)
    gens = A.ring.gens
    return all(A.factors[u] == gens[u] for u in range(k))


def _betti_json(d0: BettiTable | None, m: BettiTable | None):
    if d0 is None and m is None:
        return None
    return {
        "D0": None if d0 is None else d0.to_json(),
        "M": None if m is None else m.to_json(),
    }


def _status(generic: bool, checks, partial: bool) -> int:
    if not generic:
        return EXIT_HYPOTHESES
    if partial or not all(c.ok for c in checks):
        return EXIT_MISMATCH
    return EXIT_OK


@dataclass
class PipelineResult:
    """Everything one run produced; ``to_json`` is the report."""

    mode: str
    field: object
    arrangement: Arrangement
    status: int = EXIT_OK
    case: int | None = None
    predicted: tuple | None = None
    computed: tuple | None = None
    betti_predicted: tuple = (None, None)
    betti_computed: tuple = (None, None)
    checks: list = field(default_factory=list)
    frame: dict | None = None
    genericity: object = None
    roster: list | None = None
    notes: list = field(default_factory=list)
    partial: bool = False
    surface: SurfaceResult | None = None

    def to_json(self) -> dict:
        out = {
            "case": None if self.case is None else CASE_NAMES[self.case],
            "predictedExponents": None if self.predicted is None else list(self.predicted),
            "computedExponents": None if self.computed is None else list(self.computed),
            "bettiPredicted": _betti_json(*self.betti_predicted),
            "bettiComputed": _betti_json(*self.betti_computed),
            "checks": [c.to_json() for c in self.checks],
            "frame": self.frame,
            "mode": self.mode,
            "field": self.field.descriptor,
            "evidence": _evidence(self.field),
            "genericity": None if self.genericity is None else self.genericity.to_json(),
            "partial": self.partial,
            "status": self.status,
            "notes": list(self.notes),
        }
        if self.case is not None:
            out["relation"] = relation_text(self.case)
            out["generators"] = list(self.roster or [])
        if self.surface is not None:
            out["surface"] = self.surface.to_json()
        return out


# ---------------------------------------------------------------------------
# pipeline


def load_arrangement(config: RunConfig) -> Arrangement:
    if not config.input_path:
        raise UsageError("--input is required in this mode")
    try:
        with open(config.input_path) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {config.input_path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"{config.input_path} is not valid JSON: {exc}") from exc
    try:
        return Arrangement.from_json(data, field=config.field)
    except (ArrangementError, ValueError, ArithmeticError) as exc:
        raise UsageError(f"bad arrangement: {exc}") from exc


def run_pipeline(A: Arrangement, config: RunConfig) -> PipelineResult:
    """validate -> normalise -> omega basis -> predict -> compute -> verify."""
    if config.mode not in MODES:
        raise UsageError(f"unknown mode {config.mode!r}")
    if config.oracle not in ORACLES:
        raise UsageError(f"unknown oracle {config.oracle!r}")
    if config.mode == "surface-experiment":
        return _surface(A, config)
    if A.nvars != 3:
        raise UsageError(f"{config.mode} mode needs three variables")
    res = PipelineResult(config.mode, A.field, A)
    if A.m < 4:
        res.notes.append(f"fewer than 4 components (m = {A.m}); no prediction is made")
        res.frame = _frame(A, A, _identity(A))
        _violated(res, A, config)
        return res
    report = validate(A, full_check=True)
    res.genericity = report
    if not report.ok:
        res.frame = _frame(A, A, _identity(A))
        _violated(res, A, config)
        return res
    if config.normalize:
        N, T = normalize_coordinates(A)
    else:
        if A.line_count and not _coordinate_frame(A):
            raise UsageError("--no-normalize needs the lines listed first as x, y, z")
        N, T = A, _identity(A)
    res.frame = _frame(A, N, T)
    if A.m == 4 and A.line_count == 4:
        res.notes.append("boundary case m = 4 with only lines: computed and reported, not asserted")
    try:
        _generic(res, N, config)
    except ResolutionTooLong as exc:
        res.partial = True
        res.betti_computed = (exc.betti, None)
        res.notes.append(str(exc))
    except VerificationError as exc:
        res.checks.append(CheckResult("hard_failure", False, str(exc)))
    res.status = _status(True, res.checks, res.partial)
    return res


def _compute(f, config: RunConfig):
    engine = config.oracle in ("groebner", "both")
    oracle = config.oracle in ("linear-algebra", "both")
    return compute_d0(f, config.degree_cap, oracle=oracle, engine=engine, cell_budget=config.cell_budget)


def _generic(res: PipelineResult, N: Arrangement, config: RunConfig):
    omega = build_omega_basis(N)
    pred = predict(N, res.genericity)
    res.case = pred.case
    res.roster = pred.roster
    res.predicted = pred.exponents
    res.checks.extend(omega.checks)
    comp = _compute(N.product, config)
    res.computed = comp.exponents
    if comp.oracle_partial:
        res.partial = True
        res.notes.append("oracle stopped at the cell budget; its table is partial")
    if config.oracle == "linear-algebra":
        cap = max(comp.oracle, default=-1)
        res.notes.append(f"exponents counted by linear algebra in degrees <= {cap}")
    if config.mode == "exponents-only":
        res.betti_predicted = (pred.betti_d0, None)
        exps = tuple(sorted(comp.exponents))
        res.checks.append(
            CheckResult("exponents_match", exps == pred.exponents, None if exps == pred.exponents else f"computed {exps}")
        )
        res.checks.append(
            CheckResult("generator_count", len(exps) == pred.generator_count, f"s={len(exps)}")
        )
        if comp.gb is not None and comp.oracle is not None:
            res.checks.append(oracle_agreement(comp, N.d))
        return
    res.betti_predicted = (pred.betti_d0, pred.betti_milnor)
    res.checks.extend(verify_generation(N, omega, pred, comp))
    if comp.gb is None:
        res.notes.append("resolution checks need the Gröbner engine; skipped")
        return
    checks, b_d0, b_m = verify_resolution(N, omega, pred, comp)
    res.betti_computed = (b_d0, b_m)
    res.checks.extend(checks)


def _violated(res: PipelineResult, A: Arrangement, config: RunConfig):
    """Hypotheses fail: no prediction, but compute and report what is there."""
    res.status = EXIT_HYPOTHESES
    res.notes.append("theorem not applicable: hypotheses violated; computed data reported for comparison")
    if config.mode == "surface-experiment":
        return
    comp = _compute(A.product, config)
    res.computed = comp.exponents
    res.partial = comp.oracle_partial
    if comp.gb is not None and comp.oracle is not None:
        res.checks.append(oracle_agreement(comp, A.d))
    d, m = A.d, A.m
    first = sorted(comp.exponents)[: m - 1]
    res.checks.append(
        CheckResult("first_m-1_exponents_equal_d-2", first == [d - 2] * (m - 1), f"first {m - 1}: {first}")
    )
    try:
        omega = build_omega_basis(A)
    except (VerificationError, ArithmeticError) as exc:
        res.checks.append(CheckResult("omega_span_degree_d-2", False, f"omega forms unavailable: {exc}"))
        return
    res.checks.append(omega_span_check(comp, omega))


def _surface(A: Arrangement | None, config: RunConfig) -> PipelineResult:
    if A is None:
        raise UsageError("surface experiment needs an arrangement")
    if A.nvars != 4:
        raise UsageError("surface-experiment mode needs four variables")
    res = PipelineResult(config.mode, A.field, A)
    res.frame = _frame(A, A, _identity(A))
    res.notes.append("experimental: four-variable exponents compared with the conjectural surface formula")
    sr = surface_exponents(
        A,
        full_check=config.full_check,
        method=config.oracle,
        oracle_cap=config.degree_cap,
        cell_budget=config.cell_budget,
    )
    res.surface = sr
    res.genericity = sr.genericity
    res.predicted = sr.predicted
    res.computed = sr.exponents
    res.partial = sr.partial
    witness = None if sr.matches else f"computed {exponent_notation(sr.exponents or ())}"
    if sr.partial:
        witness = "incomplete: only the degrees reached by the oracle were counted"
    res.checks.append(CheckResult("exponents_match_formula", sr.matches and not sr.partial, witness))
    if sr.exponents is not None and sr.oracle is not None and not sr.partial and config.oracle == "both":
        counts = Counter(sr.exponents)
        bad = [e for e, (_, n) in sorted(sr.oracle.items()) if counts.get(e, 0) != n]
        res.checks.append(
            CheckResult("oracle_equivalence", not bad, f"generator counts differ in degrees {bad}" if bad else None)
        )
    for m in sorted({A.m, 5, 6, 7}):
        res.checks.append(CheckResult(f"count_identity_m={m}", count_identity(m)))
    generic = sr.genericity is None or sr.genericity.ok
    if sr.genericity is None:
        res.notes.append("genericity not checked (enable the full check)")
    res.status = _status(generic, res.checks, res.partial)
    return res


def run(config: RunConfig) -> PipelineResult:
    """Load the input named in ``config`` (or build the surface family) and run."""
    if config.mode == "surface-experiment" and not config.input_path:
        from .closedform import surface_factors
        from .polyring import PolyRing

        if config.surface_m is None or config.surface_p is None:
            raise UsageError("surface experiment needs --input or both --m and --p")
        ring = PolyRing(4, config.field or "p:32003")
        A = Arrangement(surface_factors(config.surface_m, config.surface_p, ring), ring)
        return run_pipeline(A, config)
    return run_pipeline(load_arrangement(config), config)


# ---------------------------------------------------------------------------
# output


def to_json_bytes(result: PipelineResult) -> bytes:
    return (json.dumps(result.to_json(), indent=2, sort_keys=True) + "\n").encode()


def _indent(text: str, pad: str = "    ") -> str:
    return "\n".join(pad + line for line in text.splitlines())


def to_text(result: PipelineResult) -> str:
    A = result.arrangement
    lines = []
    lines.append("arrangement: " + ", ".join(str(f) for f in A.factors))
    fld = result.field
    lines.append(f"field: {'Q' if not fld.characteristic else f'F_{fld.characteristic}'} ({_evidence(fld)})")
    lines.append(f"m = {A.m}, d = {A.d}, lines = {A.line_count}, mode = {result.mode}")
    gen = result.genericity
    if gen is None:
        lines.append("genericity: not checked")
    elif gen.ok:
        lines.append("genericity: hypotheses hold" + (" (experimental)" if gen.experimental else ""))
    else:
        lines.append("genericity: hypotheses violated")
        for kind, c in gen.failures():
            idx = ",".join(f"f_{i + 1}" for i in c.indices)
            lines.append(f"  {kind} [{idx}]: {c.witness}")
    frame = result.frame
    if frame and frame["normalizedFactors"] != frame["originalFactors"]:
        lines.append("normalized frame: " + ", ".join(frame["normalizedFactors"]))
        lines.append("  matrix: " + "; ".join(" ".join(r) for r in frame["matrix"]))
    if result.case is not None:
        lines.append(f"case: {CASE_NAMES[result.case]}")
        lines.append("generators: " + ", ".join(result.roster or []))
        lines.append("relation: " + relation_text(result.case))
    if result.predicted is not None:
        lines.append("predicted exponents: " + exponent_notation(result.predicted))
    if result.computed is not None:
        lines.append("computed exponents:  " + exponent_notation(result.computed))
    for label, table in (
        ("D_0(f) predicted", result.betti_predicted[0]),
        ("D_0(f) computed", result.betti_computed[0]),
        ("M(f) predicted", result.betti_predicted[1]),
        ("M(f) computed", result.betti_computed[1]),
    ):
        if table is not None:
            lines.append(f"{label}: {table.shape()}")
            lines.append(_indent(table.staircase()))
    if result.checks:
        lines.append("checks:")
        for c in result.checks:
            tail = f"  ({c.witness})" if c.witness and not c.ok else ""
            lines.append(f"  {'PASS' if c.ok else 'FAIL'} {c.name}{tail}")
    for note in result.notes:
        lines.append(f"note: {note}")
    if result.partial:
        lines.append("partial: true")
    verdict = {
        EXIT_OK: "verified",
        EXIT_HYPOTHESES: "hypotheses violated",
        EXIT_MISMATCH: "prediction mismatch" if not result.partial else "incomplete",
    }[result.status]
    lines.append(f"status: {verdict} (exit {result.status})")
    return "\n".join(lines) + "\n"


def emit_report(result: PipelineResult, fmt: str = "text") -> bytes:
    if fmt == "json":
        return to_json_bytes(result)
    return to_text(result).encode()


__all__ = [
    "EXIT_HYPOTHESES",
    "EXIT_MISMATCH",
    "EXIT_OK",
    "EXIT_USAGE",
    "PipelineResult",
    "RunConfig",
    "TheoremNotApplicable",
    "UsageError",
    "emit_report",
    "exponent_notation",
    "run",
    "run_pipeline",
]
