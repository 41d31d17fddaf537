"""The acceptance suite: fourteen exact checks, one function each.

Every check returns a :class:`CheckResult`; nothing here uses floating
point except the wall-clock timings.  ``run_all`` is what the
``verify-all`` subcommand and the test suite call.
"""

from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass, field
from typing import Callable

from .dynamics import (
    check_monotone,
    complement_via_inversions,
    contraction_schedule,
    detect_period,
    height_schedule,
    partition_psi,
    sign_orbit,
)
from .gcm import GCM, MatrixType, classify_type, gcm_from_rank2, is_indecomposable, parse_gcm
from .liealg import GradedLieAlgebra, bracket, lemma54_witness, serre_quotient_dimension
from .prounip import (
    Subgroup,
    build_truncated_envelope,
    contract_experiment,
    factor,
    multiply,
    normal_form,
    single_factor,
    torus_relation_check,
    twisted_exp,
    weyl_conjugate,
)
from .rootsys import (
    height,
    imaginary_root_set,
    is_root,
    peterson_multiplicity,
    positive_lattice_vectors,
    positive_roots_up_to_height,
    real_roots_up_to_height,
    reflect,
    sign,
)
from .weyl import check_power_reduced, coxeter_element, coxeter_matrix_closed_form, word_to_matrix

HYPERBOLIC = parse_gcm("2,-3;-3,2")


@dataclass
class CheckResult:
    number: int
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0
    data: dict = field(default_factory=dict)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.number:2d} {self.name} ({self.seconds:.2f}s): {self.detail}"


def random_gcm(rng: random.Random, rank: int, low: int = -6) -> GCM:
    """A random GCM with off-diagonal entries in [low, 0] and matching zero pattern."""
    rows = [[2 if i == j else 0 for j in range(rank)] for i in range(rank)]
    for i, j in itertools.combinations(range(rank), 2):
        if rng.random() < 0.3:
            continue
        rows[i][j] = rng.randint(low, -1)
        rows[j][i] = rng.randint(low, -1)
    return GCM(tuple(tuple(r) for r in rows))


def random_indefinite(rng: random.Random, ranks=(2, 3, 4), low: int = -6) -> GCM:
    while True:
        a = random_gcm(rng, rng.choice(ranks), low)
        if is_indecomposable(a) and classify_type(a) is MatrixType.INDEFINITE:
            return a


def indefinite_instances(seed: int, count: int = 10) -> list[GCM]:
    """Fixed hyperbolic instances followed by random indefinite ones of rank 2-3."""
    fixed = [HYPERBOLIC, parse_gcm("2,-4;-3,2"), parse_gcm("2,-2,-1;-2,2,-1;-1,-1,2")]
    rng = random.Random(seed)
    out = list(fixed)
    while len(out) < count:
        a = random_indefinite(rng, ranks=(2, 3), low=-3)
        if a not in out:
            out.append(a)
    return out


# --- the checks ---------------------------------------------------------------


def check_coxeter_formula(seed: int = 0) -> CheckResult:
    rng = random.Random(seed)
    bad = []
    for _ in range(200):
        a = random_gcm(rng, rng.randint(2, 5))
        closed = coxeter_matrix_closed_form(a)
        composed = word_to_matrix(a, range(1, a.rank + 1))
        if closed != composed:
            bad.append(a.to_text())
    return CheckResult(1, "coxeter closed form", not bad, f"200 random GCMs, {len(bad)} mismatches", data={"mismatches": bad})


def check_power_lengths(seed: int = 0) -> CheckResult:
    rng = random.Random(seed + 1)
    bad = []
    for _ in range(20):
        a = random_indefinite(rng)
        res = check_power_reduced(a, 6)
        if not res.ok or any(ln != l * a.rank for l, ln in res.table):
            bad.append((a.to_text(), res.offending))
    return CheckResult(2, "coxeter powers reduced", not bad, f"20 indefinite GCMs, l <= 6, {len(bad)} failures", data={"failures": bad})


def check_monotonicity(seed: int = 0) -> CheckResult:
    violations = []
    count = 0
    for a in indefinite_instances(seed):
        w = coxeter_element(a)
        for r in positive_roots_up_to_height(a, 10):
            count += 1
            res = check_monotone(sign_orbit(a, w, r, 20))
            if not res:
                violations.append((a.to_text(), r, res.witness))
    return CheckResult(3, "sign monotonicity", not violations, f"{count} roots over 10 GCMs, {len(violations)} violations")


def check_aperiodicity(seed: int = 0) -> CheckResult:
    periodic = []
    count = 0
    for a in indefinite_instances(seed):
        w = coxeter_element(a)
        for r in positive_roots_up_to_height(a, 10):
            count += 1
            per = detect_period(a, w, r, 30)
            if per is not None:
                periodic.append((a.to_text(), r, per))
    aff = parse_gcm("2,-2;-2,2")
    a2 = parse_gcm("2,-1;-1,2")
    p_aff = detect_period(aff, coxeter_element(aff), (1, 1), 30)
    p_a2 = detect_period(a2, coxeter_element(a2), (1, 0), 30)
    ok = not periodic and p_aff == 1 and p_a2 == 3
    return CheckResult(
        4,
        "aperiodicity and sharpness",
        ok,
        f"{count} roots, {len(periodic)} periodic; affine delta period {p_aff}; A2 alpha1 period {p_a2}",
    )


def check_partition(seed: int = 0) -> CheckResult:
    notes, ok = [], True
    for a in (HYPERBOLIC, parse_gcm("2,-4;-3,2")):
        part = partition_psi(a, 8, 60, chains=False)
        dual = complement_via_inversions(a, 8, 60)
        good = (
            not part.undecided.elements
            and part.closedness["psi"]
            and part.closedness["complement"]
            and part.complement.as_set() == dual.as_set()
        )
        ok = ok and good
        notes.append(f"{a.to_text()}: |psi|={len(part.psi)} |complement|={len(part.complement)} undecided={len(part.undecided)}")
    return CheckResult(5, "psi partition", ok, "; ".join(notes))


def check_schedules(seed: int = 0) -> CheckResult:
    a = HYPERBOLIC
    w = coxeter_element(a)
    ok = True
    notes = []
    for gens, direction, alpha in (([(1, 0)], 1, (1, 0)), ([(0, 1)], -1, (0, 1))):
        sched = contraction_schedule(a, gens, direction, 10)
        ref = height_schedule(a, w, alpha, 10, direction)
        good = (
            list(sched.n) == list(ref.heights)
            and sched.n[:3] == (1, 11, 76)
            and all(x < y for x, y in zip(sched.n, sched.n[1:]))
        )
        ok = ok and good
        notes.append(f"direction {direction:+d}: {list(sched.n[:4])}...")
    return CheckResult(6, "contraction schedules", ok, "; ".join(notes))


MULTIPLICITY_GCMS = (
    "2,-2;-2,2",
    "2,-3;-3,2",
    "2,-4;-1,2",
    "2,-1,-1;-1,2,-1;-1,-1,2",
    "2,-2,0;-2,2,-1;0,-1,2",
)


def check_multiplicities(seed: int = 0) -> CheckResult:
    bad = []
    roots = 0
    for text in MULTIPLICITY_GCMS:
        a = parse_gcm(text)
        L = GradedLieAlgebra(a, 6)
        for v in positive_lattice_vectors(a.rank, 6):
            serre = serre_quotient_dimension(a, v)
            built = L.dim(v)
            if is_root(a, v):
                roots += 1
                pet = peterson_multiplicity(a, v)
            else:
                pet = 0
            if not (serre == pet == built):
                bad.append((text, v, pet, serre, built))
    aff = parse_gcm("2,-2;-2,2")
    kdelta = [peterson_multiplicity(aff, (k, k)) for k in (1, 2, 3)]
    ok = not bad and kdelta == [1, 1, 1]
    return CheckResult(7, "multiplicity dual oracle", ok, f"{roots} roots, {len(bad)} disagreements; affine mult(k delta) = {kdelta}")


def check_lemma54(seed: int = 0) -> CheckResult:
    cases = {(3, 3, 5): "p∤m", (3, 3, 3): "p|m", (4, 3, 3): "p∤m", (6, 5, 3): "p|m"}
    notes, ok = [], True
    for (m, n, p), branch in cases.items():
        rep = lemma54_witness(m, n, p)
        good = rep["ok"] and rep["branch"] == branch
        ok = ok and good
        notes.append(f"({m},{n},{p}) {rep['branch']} coeff {rep['coefficient']}")
    return CheckResult(8, "non-normality witness", ok, "; ".join(notes))


def check_normal_form(seed: int = 0) -> CheckResult:
    rng = random.Random(seed + 9)
    E = build_truncated_envelope(HYPERBOLIC, 2, 3)
    expansions = set()
    round_trip = True
    for g in E.all_elements():
        u = E.expand(g)
        expansions.add(tuple(sorted(u.items())))
        round_trip = round_trip and normal_form(E, u) == g
    bij = len(expansions) == 3 ** len(E) and round_trip
    E4 = build_truncated_envelope(HYPERBOLIC, 4, 5)
    samples_ok = True
    for _ in range(200):
        coeffs = [rng.randrange(5) for _ in E4.basis]
        u = {(): 1}
        for i, c in enumerate(coeffs):
            if c:
                u = E4.mul(u, E4.expand(single_factor(E4, i, c)))
        samples_ok = samples_ok and list(normal_form(E4, u).coeffs) == coeffs
    return CheckResult(
        9,
        "normal form uniqueness",
        bij and samples_ok,
        f"h=2 q=3: {len(expansions)} distinct of 3^{len(E)}; h=4 q=5: 200 round trips {'ok' if samples_ok else 'FAILED'}",
    )


def check_factorization(seed: int = 0) -> CheckResult:
    a = HYPERBOLIC
    E = build_truncated_envelope(a, 3, 3)
    part = partition_psi(a, 3, 60, chains=False)
    S1, S2 = Subgroup(E, part.psi.elements), Subgroup(E, part.complement.elements)
    ok = True
    for g in E.all_elements():
        g1, g2 = factor(E, g, S1, S2)
        ok = ok and g1 in S1 and g2 in S2 and multiply(E, g1, g2) == g
    prods = {multiply(E, x, y) for x in S1.elements() for y in S2.elements()}
    unique = len(prods) == S1.order * S2.order == 3 ** len(E)
    return CheckResult(
        10,
        "psi/complement factorization",
        ok and unique,
        f"{3 ** len(E)} elements, |U_psi|={S1.order}, |U_complement|={S2.order}, distinct products {len(prods)}",
    )


def check_weyl_conjugation(seed: int = 0) -> CheckResult:
    a = HYPERBOLIC
    h = 4
    E = build_truncated_envelope(a, h, 3)
    ok = True
    cases = 0
    for beta in real_roots_up_to_height(a, h):
        for i in range(1, a.rank + 1):
            target = reflect(a, i - 1, beta)
            if sign(target) < 0:
                continue
            cases += 1
            image = {weyl_conjugate(E, i, g) for g in Subgroup(E, [beta]).elements()}
            predicted = set(Subgroup(E, [target] if height(target) <= h else [], check=False).elements())
            ok = ok and image == predicted
    im = list(imaginary_root_set(a, h))
    U = Subgroup(E, im)
    for i in range(1, a.rank + 1):
        for inv in (False, True):
            cases += 1
            image = {weyl_conjugate(E, i, g, inv) for g in U.elements()}
            moved = [reflect(a, i - 1, r) for r in im]
            predicted = set(Subgroup(E, [r for r in moved if height(r) <= h], check=False).elements())
            ok = ok and image == predicted
    return CheckResult(11, "weyl conjugation of root groups", ok, f"{cases} root-group cases at h={h}, q=3")


def check_contraction(seed: int = 0) -> CheckResult:
    a = HYPERBOLIC
    h = 10
    E = build_truncated_envelope(a, h, 3)
    word = (1, 2)
    L = E.algebra
    e1 = single_factor(E, E.id_of[((1, 0), 0)], 1)
    e2 = single_factor(E, E.id_of[((0, 1), 0)], 1)
    delta = twisted_exp(E, bracket(L, L.generator(1), L.generator(2)), 1)
    ok = True
    notes = []
    for name, g, inv, gens, direction in (
        ("exp(e1) under a", e1, False, [(1, 0)], 1),
        ("exp(e2) under a^-1", e2, True, [(0, 1)], -1),
        ("[exp][e1,e2] under a", delta, False, [(1, 1)], 1),
        ("[exp][e1,e2] under a^-1", delta, True, [(1, 1)], -1),
    ):
        rec = contract_experiment(E, word, g, 6, inverse=inv)
        predicted = contraction_schedule(a, gens, direction, 6).first_exceeding(h)
        before = rec.levels[: rec.first_flag] if rec.first_flag is not None else rec.levels
        good = (
            rec.first_flag is not None
            and rec.first_flag == predicted
            and all(x < y for x, y in zip(before, before[1:]))
            and rec.consistent()
        )
        ok = ok and good
        notes.append(f"{name}: levels {list(rec.levels[: (rec.first_flag or 0) + 1])} flag at l={rec.first_flag}")
    return CheckResult(12, "contraction at truncation", ok, "; ".join(notes))


def check_torus(seed: int = 0) -> CheckResult:
    ok = True
    count = 0
    for q in (3, 5, 7):
        for m, n in itertools.product((2, 3, 4), (2, 3)):
            a = gcm_from_rank2(m, n)
            same = gcm_from_rank2(m + (q - 1), n + 2 * (q - 1))
            off = gcm_from_rank2(m + (q - 1) + 1, n)
            count += 2
            ok = ok and torus_relation_check(a, same, q)["result"] is True
            ok = ok and torus_relation_check(a, off, q)["result"] is False
            ok = ok and torus_relation_check(a, a, q)["result"] is True
    return CheckResult(13, "torus relation check", ok, f"{count} instance pairs over q in (3, 5, 7)")


CHECKS: tuple[tuple[int, Callable[[int], CheckResult], float | None], ...] = (
    (1, check_coxeter_formula, 5.0),
    (2, check_power_lengths, 30.0),
    (3, check_monotonicity, None),
    (4, check_aperiodicity, None),
    (5, check_partition, None),
    (6, check_schedules, None),
    (7, check_multiplicities, 120.0),
    (8, check_lemma54, None),
    (9, check_normal_form, None),
    (10, check_factorization, None),
    (11, check_weyl_conjugation, None),
    (12, check_contraction, None),
    (13, check_torus, None),
)

TOTAL_LIMIT = 600.0


def run_check(number: int, seed: int = 0) -> CheckResult:
    for num, fn, limit in CHECKS:
        if num == number:
            t0 = time.perf_counter()
            try:
                res = fn(seed)
            except Exception as exc:  # a crash is a failed criterion, reported not hidden
                res = CheckResult(num, fn.__name__, False, f"raised {type(exc).__name__}: {exc}")
            res.seconds = time.perf_counter() - t0
            if limit is not None and res.seconds >= limit:
                res.passed = False
                res.detail += f"; exceeded the {limit:.0f}s budget"
            return res
    raise KeyError(number)


def run_all(seed: int = 0, progress: Callable[[CheckResult], None] | None = None) -> list[CheckResult]:
    t0 = time.perf_counter()
    results = []
    for num, _, _ in CHECKS:
        res = run_check(num, seed)
        results.append(res)
        if progress:
            progress(res)
    total = time.perf_counter() - t0
    overall = CheckResult(
        14,
        "verify-all within budget",
        all(r.passed for r in results) and total < TOTAL_LIMIT,
        f"{sum(r.passed for r in results)}/{len(results)} passed in {total:.1f}s (budget {TOTAL_LIMIT:.0f}s)",
        total,
    )
    results.append(overall)
    if progress:
        progress(overall)
    return results
