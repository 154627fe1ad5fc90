"""Acceptance criteria, one test each.

Every test prints a single line ``ACn name PASS|FAIL: detail`` and the lines are
repeated in the terminal summary. All comparisons are exact; the only
tolerances are the wall-clock limits below. Run standalone with
``python3 tests/test_acceptance.py``.
"""

from __future__ import annotations

import random
import time
from math import factorial

import pytest

from afasem import gen
from afasem import hyperset as hs
from afasem import mu_encoder as mu
from afasem.eqsolver import AtomTerm, EquationSystem, PairTerm, SetTerm, VarRef, rename_vars, solve
from afasem.hyperset import AtomLabel
from afasem.langmodel import FIXTURES, fixture_e1, fixture_e2, random_spec
from afasem.relsem import Clause, QuantNP, sv, systematicity_check
from afasem.wf_encoder import verify_wf
from cli_cases import cases, golden_path, run_case

THEOREM_LIMIT_S = 60.0
ORACLE_LIMIT_S = 120.0
CLI_LIMIT_S = 10.0
RANDOM_SPECS = 200
RANDOM_GRAPHS = 1000
RANDOM_SYSTEMS = 100

RESULTS: list[str] = []

pytestmark = pytest.mark.acceptance


def record(code: str, name: str, passed: bool, detail: str) -> None:
    line = f"{code} {name} {'PASS' if passed else 'FAIL'}: {detail}"
    RESULTS.append(line)
    print(line)
    assert passed, line


def specs():
    return [FIXTURES[k]() for k in sorted(FIXTURES)] + [random_spec(seed) for seed in range(RANDOM_SPECS)]


def test_ac1_theorem_suite():
    start = time.perf_counter()
    failures, n = [], 0
    for spec in specs():
        report = mu.verify(mu.encode(spec))
        n += 1
        for code in ("V1", "V2", "V3", "V4", "V5", "V6", "V7"):
            if report[code].passed is not True:
                failures.append(f"spec {n}: {report[code].line()}")
    elapsed = time.perf_counter() - start
    ok = not failures and elapsed < THEOREM_LIMIT_S
    detail = failures[0] if failures else f"V1-V7 pass on {n} specs"
    record("AC1", "theorem-suite", ok, f"{detail} ({elapsed:.1f} s, limit {THEOREM_LIMIT_S:.0f} s)")


def test_ac2_separation_instance():
    enc = mu.encode(fixture_e2())
    report = mu.verify(enc)
    same = hs.bisimilar(enc.mu("a"), enc.mu("b"))
    ok = not same and report["V1"].passed is True and report["V2"].passed is True
    record("AC2", "separation-instance", ok, f"bisimilar(mu(a), mu(b)) = {same}, V1 {report['V1'].status}, V2 {report['V2'].status}")


def test_ac3_synonym_collapse():
    enc = mu.encode(fixture_e1())
    same = hs.bisimilar(enc.mu("a"), enc.mu("b"))
    swap = mu.swap_invariance_check(fixture_e1(), "a", "b")
    record("AC3", "synonym-collapse", same and swap, f"bisimilar(mu(a), mu(b)) = {same}, swap invariance = {swap}")


def test_ac4_self_application():
    sol = solve(EquationSystem({"F": SetTerm([PairTerm(VarRef("F"), AtomTerm(AtomLabel("27")))])}))
    F = sol["F"]
    value = mu.apply(F, F).atom
    try:
        hs.decorate(F)
        raised = False
    except hs.CyclicGraph:
        raised = True
    ok = value == AtomLabel("27") and raised
    record("AC4", "self-application", ok, f"apply(F, F) = {value}, decorate raises CyclicGraph = {raised}")


def test_ac5_bisimulation_oracle():
    start = time.perf_counter()
    pairs = bad = 0
    # every APG with at most 3 nodes, all in one union
    small = gen.table_upto(3)
    bad += gen.agree(small.labels, small.indptr, small.indices)
    pairs += len(small.labels) ** 2
    # 4-node graphs against all graphs up to 2 nodes, 5-node against 1-node
    for n, partner in ((4, 2), (5, 1)):
        r = gen.sweep(n, gen.table_upto(partner))
        bad += r.disagreements
        pairs += r.node_pairs
    # random graphs
    rng = random.Random(2024)
    for _ in range(RANDOM_GRAPHS):
        g = gen.random_table(rng, 1, 40)
        bad += gen.agree(g.labels, g.indptr, g.indices)
        pairs += len(g.labels) ** 2
    # the public API on root pairs
    graphs = gen.table_upto(2).hgraphs()
    for a in graphs:
        for b in graphs:
            bad += hs.bisimilar(a, b) != hs.bisimilar_naive(a, b)
            pairs += 1
    elapsed = time.perf_counter() - start
    ok = bad == 0 and elapsed < ORACLE_LIMIT_S
    record("AC5", "bisimulation-oracle", ok, f"{bad} disagreements over {pairs} node pairs ({elapsed:.1f} s, limit {ORACLE_LIMIT_S:.0f} s)")


def test_ac6_decoration_oracle():
    graphs = gen.dag_table_upto(6).hgraphs()
    blocks = graphs[0].arena.blocks()
    # the relations agree on all pairs iff block -> decoration is a bijection of classes
    by_block, by_value = {}, {}
    for g in graphs:
        d = hs.decorate(g)
        by_block.setdefault(int(blocks[g.root]), set()).add(d)
        by_value.setdefault(d, set()).add(int(blocks[g.root]))
    bad = sum(len(v) - 1 for v in by_block.values()) + sum(len(v) - 1 for v in by_value.values())
    record("AC6", "decoration-oracle", bad == 0, f"{bad} disagreements over {len(graphs)} acyclic graphs, {len(by_block)} classes")


def test_ac7_solution_uniqueness():
    rng = random.Random(77)
    failures = checked = 0
    for _ in range(RANDOM_SYSTEMS):
        system = gen.random_system(rng)
        names = list(system.bindings)
        image = names[:] if rng.random() < 0.5 else [f"W{k}" for k in range(len(names))]
        rng.shuffle(image)
        rho = dict(zip(names, image))
        sol, renamed = solve(system), solve(rename_vars(system, rho))
        for v in names:
            checked += 1
            failures += not hs.bisimilar(renamed[rho[v]], sol[v])
    record("AC7", "solution-uniqueness", failures == 0, f"{failures} failures over {checked} variables in {RANDOM_SYSTEMS} systems")


def test_ac8_westerstahl_suite():
    failures = checked = 0
    for spec in specs():
        report = verify_wf(spec)
        for code in ("W1", "W2"):
            checked += report[code].checked
            if report[code].passed is not True:
                failures += 1
    record("AC8", "westerstahl-suite", failures == 0, f"{failures} failing checks; {checked} recoveries and APP* instances")


def test_ac9_relational_semantics():
    nps = [QuantNP("every", "dog"), QuantNP("some", "cat"), QuantNP("a", "bird"), QuantNP("no", "fish")]
    counts = [len(sv(Clause("r", nps[:k]))) for k in (1, 2, 3, 4)]
    systematic = all(
        sv(Clause("r", nps[:k])) == sv(Clause("r", [QuantNP(n.quantifier, n.noun) for n in nps[:k]]))
        and all(systematicity_check(Clause("r", nps[:k]), i, nps[i]) for i in range(k))
        for k in (1, 2, 3, 4)
    )
    ok = counts == [factorial(k) for k in (1, 2, 3, 4)] and systematic
    record("AC9", "relational-semantics", ok, f"readings {counts} for k = 1..4, content-equal clauses equal = {systematic}")


def test_ac10_cli_contract():
    start = time.perf_counter()
    mismatched = []
    corrupted_status = None
    for case in cases():
        first, second = run_case(case), run_case(case)
        if first.golden_text() != second.golden_text() or first.status != case.status:
            mismatched.append(case.name)
        elif first.golden_text(case.exact_stderr) != golden_path(case).read_text(encoding="utf-8"):
            mismatched.append(case.name)
        if case.name == "verify-corrupted":
            corrupted_status = first.status
    elapsed = time.perf_counter() - start
    ok = not mismatched and corrupted_status == 1 and elapsed < CLI_LIMIT_S
    detail = f"{len(cases()) - len(mismatched)} of {len(cases())} cases byte-identical, corrupted bundle exits {corrupted_status}"
    if mismatched:
        detail += f", first mismatch {mismatched[0]}"
    record("AC10", "cli-contract", ok, f"{detail} ({elapsed:.1f} s, limit {CLI_LIMIT_S:.0f} s)")


if __name__ == "__main__":
    import sys

    failed = 0
    for t in (
        test_ac1_theorem_suite,
        test_ac2_separation_instance,
        test_ac3_synonym_collapse,
        test_ac4_self_application,
        test_ac5_bisimulation_oracle,
        test_ac6_decoration_oracle,
        test_ac7_solution_uniqueness,
        test_ac8_westerstahl_suite,
        test_ac9_relational_semantics,
        test_ac10_cli_contract,
    ):
        try:
            t()
        except AssertionError:
            failed += 1
    sys.exit(1 if failed else 0)
