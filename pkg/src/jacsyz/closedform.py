"""Explicit generators and relations for the Jacobian syzygies of an arrangement.

For f = f_1 ... f_m the 2-forms omega_j = (df ^ df_j) / f_j are polynomial
and correspond to syzygies of degree d - 2.  Together with the forms
df ^ du for the coordinates u not used up by lines, they give a candidate
generating set of D_0(f), and f_j omega_j = df ^ df_j expands into a
candidate relation.  This module builds these objects, predicts exponents
and Betti tables, and checks each prediction against the Gröbner engine and
the linear-algebra oracle.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from math import comb

from .arrangement import Arrangement, GenericityReport, validate
from .diffforms import DifferentialForm, from_form, koszul_forms, syzygy_value
from .groebner import (
    FreeModule,
    GradedModuleMap,
    groebner_basis,
    minimal_generators,
    syzygy_module,
)
from .oracle import (
    DEFAULT_CELL_BUDGET,
    CellBudgetExceeded,
    _Coords,
    exponents_from_oracle,
    graded_kernel_oracle,
    kernel_in_degree,
    rank,
    span_dimension,
)
from .polyring import PolyRing
from .resolution import BettiTable, resolve, resolve_submodule

CASE_NAMES = {0: "l=0", 1: "l=1", 2: "l=2", 3: "l>=3"}


class TheoremNotApplicable(ValueError):
    pass


class VerificationError(ArithmeticError):
    pass


@dataclass
class CheckResult:
    name: str
    ok: bool
    witness: str | None = None

    def to_json(self) -> dict:
        return {"name": self.name, "pass": bool(self.ok), "witness": self.witness}


# ---------------------------------------------------------------------------
# the omega basis


@dataclass
class OmegaBasis:
    arrangement: Arrangement
    forms: list  # omega_1 .. omega_m, each computed independently
    omega_prime: DifferentialForm  # -(omega_1 + ... + omega_{m-1})
    triples: list  # triples of omega_1 .. omega_{m-1}
    checks: list = field(default_factory=list)

    @property
    def degree(self) -> int:
        return self.arrangement.d - 2


def jacobian_map(f) -> GradedModuleMap:
    """(a_i) -> sum a_i f_{x_i} as a map S^n -> S(d-1), so triples keep their degree."""
    ring = f.ring
    d = f.degree()
    return GradedModuleMap.from_rows(ring, [list(f.gradient())], [-(d - 1)], [0] * ring.nvars)


def milnor_presentation(f) -> GradedModuleMap:
    """S(-d+1)^n -> S, whose cokernel is the Milnor algebra S / J_f."""
    ring = f.ring
    d = f.degree()
    return GradedModuleMap.from_rows(ring, [list(f.gradient())], [0], [d - 1] * ring.nvars)


def build_omega_basis(A: Arrangement) -> OmegaBasis:
    """omega_j by both formulas, with the sum rule and contraction identity checked."""
    if A.nvars != 3:
        raise ValueError("the omega basis is built for plane curves (three variables)")
    ring = A.ring
    f = A.product
    d = A.d
    df = DifferentialForm.exterior_derivative(f)
    dfs = [DifferentialForm.exterior_derivative(g) for g in A.factors]
    forms = []
    checks = []
    routes_agree = True
    theta_ok = True
    for j, fj in enumerate(A.factors):
        # route 1: exact division of df ^ df_j by f_j
        num = df.wedge(dfs[j])
        try:
            coeffs = {k: c.exact_divide(fj) for k, c in num.coeffs.items()}
        except ArithmeticError as exc:
            raise VerificationError(f"df ^ df_{j + 1} is not divisible by f_{j + 1}") from exc
        omega = DifferentialForm(ring, 2, coeffs)
        # route 2: sum over the other factors
        alt = DifferentialForm.zero(ring, 2)
        for i, fi in enumerate(A.factors):
            if i == j:
                continue
            cof = f.exact_divide(fi * fj)
            alt = alt + dfs[i].wedge(dfs[j]).scale(cof)
        if alt != omega:
            routes_agree = False
        # Delta(f_j omega_j) = d f df_j - e_j f_j df
        lhs = omega.scale(fj).contract_euler()
        rhs = dfs[j].scale(f.scale(d)) - df.scale(fj.scale(fj.degree()))
        if lhs != rhs:
            theta_ok = False
        forms.append(omega)
    total = DifferentialForm.zero(ring, 2)
    for w in forms:
        total = total + w
    omega_prime = -forms[0]
    for w in forms[1:-1]:
        omega_prime = omega_prime - w
    triples = [from_form(w) for w in forms[:-1]]
    syz_ok = all(not syzygy_value(t, f) for t in triples)
    deg_ok = all(w.total_degree() == d for w in forms if w)
    checks.append(CheckResult("omega_routes_agree", routes_agree))
    checks.append(CheckResult("omega_sum_zero", total.is_zero(), None if total.is_zero() else str(total)))
    checks.append(CheckResult("theta_contraction_identity", theta_ok))
    checks.append(CheckResult("omega_triples_are_syzygies", syz_ok))
    checks.append(CheckResult("omega_total_degree_d", deg_ok))
    checks.append(CheckResult("omega_prime_equals_omega_m", omega_prime == forms[-1]))
    indep = _triple_rank(triples, d - 2) == len(triples)
    checks.append(CheckResult("omega_triples_independent", indep))
    return OmegaBasis(A, forms, omega_prime, triples, checks)


def _triple_rank(triples, degree: int) -> int:
    if not triples:
        return 0
    ring = triples[0][0].ring
    module = FreeModule(ring, [0] * ring.nvars)
    coords = _Coords(module, degree)
    rows = [coords.vector(t) for t in triples]
    return rank(ring.field, rows, len(coords))


# ---------------------------------------------------------------------------
# predictions


@dataclass
class CasePrediction:
    case: int
    roster: list  # names of the generating forms
    exponents: tuple
    betti_d0: BettiTable
    betti_milnor: BettiTable
    relation_indices: list  # 1-based j of the relations rho_j
    relation_degrees: list  # epsilon'_j from the degree bookkeeping
    generator_count: int

    @property
    def case_name(self) -> str:
        return CASE_NAMES[self.case]


def expected_generator_count(m: int, lines: int) -> int:
    return m + 2 - lines if lines <= 2 else m - 1


def secondary_degrees(exponents, relation_twists, d: int) -> list[int]:
    """epsilon_j = c_j - d - d_{j+2} + 1 with c_j the sorted relation twists of M(f)."""
    ds = sorted(exponents)
    cs = sorted(relation_twists)
    return [c - d - ds[j + 2] + 1 for j, c in enumerate(cs) if j + 2 < len(ds)]


def predict(A: Arrangement, report: GenericityReport | None = None) -> CasePrediction:
    """Exponents, generators and both Betti tables predicted for a nodal arrangement."""
    if A.nvars != 3:
        raise TheoremNotApplicable("predictions are for plane curve arrangements")
    if report is None:
        report = validate(A)
    if not report.ok:
        reasons = "; ".join(f"{kind} {c.indices}: {c.witness}" for kind, c in report.failures())
        raise TheoremNotApplicable(f"theorem not applicable: {reasons}")
    m, d, lines = A.m, A.d, A.line_count
    case = min(lines, 3)
    koszul = ["omega^x", "omega^y", "omega^z"][case:]
    roster = [f"omega_{j}" for j in range(1, m)] + koszul
    exps = tuple([d - 2] * (m - 1) + [d - 1] * len(koszul))
    # lines come first after normalisation; relations are indexed past them
    degs = sorted(A.degrees, key=lambda e: e != 1)
    rel_idx = list(range(case + 1, m + 1))
    rel_twists = [d - 2 + degs[j - 1] for j in rel_idx]
    betti_d0 = BettiTable.from_degrees([list(exps), rel_twists])
    betti_m = BettiTable.from_degrees(
        [[0], [d - 1] * 3, [e + d - 1 for e in exps], [t + d - 1 for t in rel_twists]]
    )
    eps = secondary_degrees(exps, [t + d - 1 for t in rel_twists], d)
    return CasePrediction(
        case=case,
        roster=roster,
        exponents=exps,
        betti_d0=betti_d0,
        betti_milnor=betti_m,
        relation_indices=rel_idx,
        relation_degrees=eps,
        generator_count=expected_generator_count(m, lines),
    )


def relation_text(case: int) -> str:
    """The relation rho_j in the corrected reading used by the checks."""
    slots = ["x*f_{j,x}*omega_1", "y*f_{j,y}*omega_2", "z*f_{j,z}*omega_3"][:case]
    slots += ["f_{j,x}*omega^x", "f_{j,y}*omega^y", "f_{j,z}*omega^z"][case:]
    return "f_j*omega_j - (" + " + ".join(slots) + ") = 0"


# ---------------------------------------------------------------------------
# generators and relations


def _coordinate_lines(A: Arrangement, case: int) -> bool:
    gens = A.ring.gens
    return all(A.factors[u] == gens[u] for u in range(case))


def roster_forms(A: Arrangement, omega: OmegaBasis, case: int):
    """The generating 2-forms and their triples, ordered omega_1..omega_{m-1}, omega^u."""
    kos = koszul_forms(A.product)
    forms = list(omega.forms[:-1]) + [w for w, _ in kos[case:]]
    triples = list(omega.triples) + [k for _, k in kos[case:]]
    return forms, triples


def roster_module(A: Arrangement, case: int) -> FreeModule:
    d = A.d
    return FreeModule(A.ring, [d - 2] * (A.m - 1) + [d - 1] * (3 - case))


def build_relations(A: Arrangement, omega: OmegaBasis, case: int | None = None):
    """The relations rho_j as vectors over the generator roster.

    Each is certified to evaluate to the zero 2-form; ``A`` must be in
    normalised coordinates (lines first, the first ones equal to x, y, z).
    """
    if case is None:
        case = min(A.line_count, 3)
    if not _coordinate_lines(A, case):
        raise VerificationError("relations need the first lines to be the coordinate lines")
    ring = A.ring
    m = A.m
    F0 = roster_module(A, case)
    forms, _ = roster_forms(A, omega, case)
    gens = ring.gens
    rels = []
    for j in range(case + 1, m + 1):
        fj = A.factors[j - 1]
        grad = fj.gradient()
        coords = [ring.zero] * F0.rank
        if j < m:
            coords[j - 1] = fj
        else:
            for i in range(m - 1):
                coords[i] = -fj
        for u in range(3):
            if u < case:
                coords[u] = coords[u] - gens[u] * grad[u]
            else:
                slot = m - 1 + (u - case)
                coords[slot] = coords[slot] - grad[u]
        rho = F0.element(coords)
        value = DifferentialForm.zero(ring, 2)
        for c, w in zip(coords, forms):
            if c:
                value = value + w.scale(c)
        if value:
            raise VerificationError(f"relation rho_{j} does not vanish: {value}")
        rels.append(rho)
    return rels


# ---------------------------------------------------------------------------
# verification


@dataclass
class Computation:
    """Engine and oracle results for D_0(f) shared by the verification steps.

    ``gb`` and ``minimal`` are None when only the linear-algebra route ran;
    ``oracle_partial`` marks an oracle table cut short by the cell budget.
    """

    kernel: list | None
    gb: object
    minimal: list | None
    exponents: tuple
    oracle: dict | None = None
    oracle_partial: bool = False

    def dimension(self, e: int):
        if self.gb is not None:
            return self.gb.hilbert_function(e)
        if self.oracle is not None and e in self.oracle:
            return self.oracle[e][0]
        return None


def compute_d0(
    f,
    degree_cap: int | None = None,
    oracle: bool = True,
    engine: bool = True,
    cell_budget: int = DEFAULT_CELL_BUDGET,
) -> Computation:
    """D_0(f) by the Gröbner engine and/or the per-degree oracle (up to ``degree_cap``, default d)."""
    kernel = gb = mins = None
    degs = ()
    if engine:
        J = jacobian_map(f)
        kernel = syzygy_module(J).columns
        gb = groebner_basis(kernel, J.source)
        mins, degs = minimal_generators(kernel, J.source)
    table = None
    partial = False
    if oracle:
        cap = degree_cap if degree_cap is not None else f.degree()
        try:
            table = graded_kernel_oracle(f, cap, cell_budget)
        except CellBudgetExceeded as exc:
            table = exc.partial
            partial = True
        if not engine:
            degs = exponents_from_oracle(table)
    return Computation(kernel, gb, mins, tuple(degs), table, partial)


def oracle_agreement(comp: Computation, cap: int) -> CheckResult:
    counts = Counter(comp.exponents)
    bad = []
    for e in range(cap + 1):
        if e not in comp.oracle:
            break
        dim, ngen = comp.oracle[e]
        if comp.gb.hilbert_function(e) != dim or counts.get(e, 0) != ngen:
            bad.append(
                f"e={e}: engine ({comp.gb.hilbert_function(e)}, {counts.get(e, 0)}) vs oracle ({dim}, {ngen})"
            )
    return CheckResult("oracle_equivalence", not bad, "; ".join(bad) or None)


def omega_span_check(comp: Computation, omega: OmegaBasis) -> CheckResult:
    """The computed generators of degree d-2 span the same space as the omega triples."""
    d2 = omega.degree
    if comp.minimal is not None:
        low = [tuple(g.coords) for g in comp.minimal if g.degree() == d2]
    else:
        # linear-algebra route: the whole degree d-2 piece of the kernel
        f = omega.arrangement.product
        low = kernel_in_degree(list(f.gradient()), f.degree() - 1, d2)
    r_gen = _triple_rank(low, d2)
    r_om = _triple_rank(omega.triples, d2)
    r_all = _triple_rank(low + list(omega.triples), d2)
    ok = r_gen == r_om == r_all == omega.arrangement.m - 1
    return CheckResult(
        "omega_span_degree_d-2", ok, None if ok else f"ranks generators={r_gen} omegas={r_om} joint={r_all}"
    )


def verify_generation(A: Arrangement, omega: OmegaBasis, prediction: CasePrediction, comp: Computation | None = None):
    """Generation checks for the roster of the predicted case.

    With the engine available, generation is a normal-form test against a
    Gröbner basis of the roster; without it, the roster span is compared with
    the oracle dimensions degree by degree.
    """
    f = A.product
    d, m = A.d, A.m
    comp = comp or compute_d0(f)
    checks = []
    _, triples = roster_forms(A, omega, prediction.case)
    F = FreeModule(A.ring, [0] * A.nvars)
    G = [F.element(t) for t in triples]
    in_d0 = all(not syzygy_value(t, f) for t in triples)
    if comp.gb is not None:
        in_d0 = in_d0 and all(comp.gb.contains(g) for g in G)
    checks.append(CheckResult("roster_in_D0", in_d0))
    if comp.gb is not None:
        gb_g = groebner_basis(G, F)
        missing = [str(g) for g in comp.gb if not gb_g.contains(g)]
        checks.append(CheckResult("roster_generates_D0", not missing, missing[0] if missing else None))
    else:
        bad = [e for e, (dim, _) in sorted(comp.oracle.items()) if span_dimension(G, e, F) != dim]
        checks.append(
            CheckResult(
                "roster_generates_D0",
                not bad,
                f"span falls short in degrees {bad}" if bad else f"checked up to degree {max(comp.oracle, default=-1)}",
            )
        )
    exps = tuple(sorted(comp.exponents))
    checks.append(
        CheckResult(
            "exponents_match",
            exps == tuple(sorted(prediction.exponents)),
            None if exps == tuple(sorted(prediction.exponents)) else f"computed {exps}",
        )
    )
    checks.append(CheckResult("generator_count", len(exps) == prediction.generator_count, f"s={len(exps)}"))
    low = [e for e in range(d - 2) if comp.dimension(e)]
    dim = comp.dimension(d - 2)
    checks.append(CheckResult("D0_vanishes_below_d-2", not low, f"nonzero in degrees {low}" if low else None))
    checks.append(CheckResult("dim_D0_d-2_equals_m-1", dim == m - 1, f"dim={dim}"))
    if comp.gb is not None and comp.oracle is not None:
        checks.append(oracle_agreement(comp, d))
    checks.append(omega_span_check(comp, omega))
    top = max(exps, default=0)
    checks.append(CheckResult("exponent_bound_d-1", top <= d - 1, f"max exponent {top}"))
    return checks


def verify_resolution(A: Arrangement, omega: OmegaBasis, prediction: CasePrediction, comp: Computation | None = None):
    f = A.product
    d = A.d
    comp = comp or compute_d0(f, oracle=False)
    checks = []
    _, betti_d0 = resolve_submodule(comp.minimal, comp.gb.module)
    _, betti_m = resolve(milnor_presentation(f))
    checks.append(CheckResult("betti_D0_match", betti_d0 == prediction.betti_d0, betti_d0.shape()))
    checks.append(CheckResult("betti_M_match", betti_m == prediction.betti_milnor, betti_m.shape()))
    rels = build_relations(A, omega, prediction.case)
    checks.append(CheckResult("relations_vanish", True))
    const = any(c and c.is_constant() for r in rels for c in r)
    checks.append(CheckResult("relations_minimal_entries", not const))
    F0 = roster_module(A, prediction.case)
    if rels:
        R = GradedModuleMap(F0, rels)
        second = syzygy_module(R).columns
        checks.append(
            CheckResult("relations_independent", not second, f"{len(second)} second syzygies" if second else None)
        )
    else:
        checks.append(CheckResult("relations_independent", True))
    _, triples = roster_forms(A, omega, prediction.case)
    S3 = FreeModule(A.ring, [0, 0, 0])
    roster_map = GradedModuleMap(S3, [S3.element(t) for t in triples], F0.degrees)
    syz = syzygy_module(roster_map).columns
    in_syz = all(roster_map.apply(r).is_zero() for r in rels)
    if rels:
        gb_r = groebner_basis(rels, F0)
        covered = all(gb_r.contains(s) for s in syz)
    else:
        covered = not syz
    checks.append(CheckResult("relations_generate_syzygies", in_syz and covered))
    rel_degs = sorted(r.degree() for r in rels)
    expected_degs = sorted(a for a, n in prediction.betti_d0.stage(1).items() for _ in range(n))
    checks.append(CheckResult("relation_degrees_match", rel_degs == expected_degs, str(rel_degs)))
    twists = [a for a, n in betti_m.stage(3).items() for _ in range(n)]
    eps = secondary_degrees(comp.exponents, twists, d)
    ds = sorted(comp.exponents)
    positive = all(e >= 1 for e in eps)
    total_ok = len(ds) >= 2 and sum(eps) == ds[0] + ds[1] - (d - 1) == d - 3
    checks.append(CheckResult("secondary_degrees_positive", positive, str(eps)))
    checks.append(CheckResult("secondary_degree_sum_d-3", total_ok, f"sum={sum(eps)}"))
    if prediction.case == 0:
        es = sorted(A.degrees)
        m = A.m
        expected = [es[j] if j < m - 3 else es[j] - 1 for j in range(m)]
        checks.append(CheckResult("secondary_degrees_pattern", eps == expected, f"{eps} vs {expected}"))
    return checks, betti_d0, betti_m


# ---------------------------------------------------------------------------
# surfaces in P^3


def surface_factors(m: int, p: int, ring: PolyRing):
    return [ring.parse(f"x^{p}+{2 ** j}*y^{p}+{3 ** j}*z^{p}+{4 ** j}*w^{p}") for j in range(1, m + 1)]


def surface_formula(m: int, d: int) -> tuple[int, ...]:
    """(d-3)_{(m-1)(m-2)/2} (d-2)_{4(m-1)} (d-1)_6 as a sorted tuple."""
    return tuple([d - 3] * ((m - 1) * (m - 2) // 2) + [d - 2] * (4 * (m - 1)) + [d - 1] * 6)


def count_identity(m: int) -> bool:
    return (m - 1) * (m - 2) // 2 + 4 * (m - 1) + 6 == comb(m + 3, 2)


@dataclass
class SurfaceResult:
    m: int
    d: int
    exponents: tuple | None
    predicted: tuple
    matches: bool
    count_identity: bool
    oracle: dict | None = None
    genericity: GenericityReport | None = None
    partial: bool = False

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "d": self.d,
            "predictedExponents": list(self.predicted),
            "computedExponents": None if self.exponents is None else list(self.exponents),
            "matchesFormula": self.matches,
            "countIdentity": self.count_identity,
            "oracle": None
            if self.oracle is None
            else [{"degree": e, "dimension": v[0], "generators": v[1]} for e, v in sorted(self.oracle.items())],
            "genericity": None if self.genericity is None else self.genericity.to_json(),
            "partial": self.partial,
            "experimental": True,
        }


def surface_exponents(
    A: Arrangement,
    *,
    full_check: bool = False,
    method: str = "groebner",
    oracle_cap: int | None = None,
    cell_budget: int | None = None,
) -> SurfaceResult:
    """Exponents of a surface arrangement in P^3 compared with the surface formula.

    ``method`` is "groebner", "linear-algebra" or "both".  The linear
    algebra route only sees degrees up to ``oracle_cap`` (default d - 1), so
    on its own it yields partial evidence.
    """
    if A.nvars != 4:
        raise ValueError("surface arrangements live in four variables")
    report = validate(A, full_check=full_check) if full_check else None
    f = A.product
    d = A.d
    predicted = surface_formula(A.m, d)
    exps = None
    table = None
    partial = False
    if method in ("groebner", "both"):
        K = syzygy_module(jacobian_map(f))
        _, exps = minimal_generators(K.columns, K.target)
    if method in ("linear-algebra", "both"):
        cap = oracle_cap if oracle_cap is not None else d - 1
        try:
            table = graded_kernel_oracle(f, cap, cell_budget or DEFAULT_CELL_BUDGET)
        except CellBudgetExceeded as exc:
            table = exc.partial
            partial = True
        if exps is None:
            exps = exponents_from_oracle(table)
            partial = True
    matches = exps is not None and tuple(sorted(exps)) == predicted
    return SurfaceResult(A.m, d, exps, predicted, matches, count_identity(A.m), table, report, partial)


def surface_experiment(m: int, p: int, field="p:32003", **kwargs) -> SurfaceResult:
    """The family x^p + 2^j y^p + 3^j z^p + 4^j w^p, j = 1..m."""
    ring = PolyRing(4, field)
    return surface_exponents(Arrangement(surface_factors(m, p, ring), ring), **kwargs)
