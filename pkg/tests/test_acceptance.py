"""Acceptance suite: one test per criterion, one PASS/FAIL line each.

Run ``python3 tests/test_acceptance.py`` for the summary alone, or through
pytest where each criterion is also a separate test.
"""

import dataclasses
import os
import sys
import time

import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(__file__))

from golden_ep.bench import reference_solution, table1, table2  # noqa: E402
from golden_ep.linalg import InnerProductSpace, Vector, dist, norm  # noqa: E402
from golden_ep.problems import (  # noqa: E402
    EX61_P,
    EX61_Q,
    EX61_q,
    Ball,
    ProblemInstance,
    check_conditions,
    damped_operator,
    example21,
    example61,
    example62,
    linear_vi,
    radial_operator,
    vi_bifunction,
)
from golden_ep.prox import ProxProblem, project_polytope, solve_prox  # noqa: E402
from golden_ep.solvers import (  # noqa: E402
    PHI,
    GoldenState,
    SolverConfig,
    StepSchedule,
    gra1_step,
    graal_vi_step,
    run,
)
from oracles import affine_prox_oracle, project_oracle  # noqa: E402

SEED = int(os.environ.get("EQ_SEED", "42"))


def _within(value, target, tol):
    return abs(value - target) <= tol


def criterion_1():
    t0 = time.perf_counter()
    t = table1()
    secs = time.perf_counter() - t0
    gea, gra1 = t.matrix()
    ok = (all(_within(n, 40, 5) for n in gea)
          and all(_within(n, m, 15) for n, m in zip(gra1, (97, 96, 96)))
          and secs < 10)
    return ok, f"GEA {gea} (40 +/- 5), GRA1 {gra1} (97/96/96 +/- 15), {secs:.2f} s"


def criterion_2():
    t0 = time.perf_counter()
    t = table2(N=101)
    secs = time.perf_counter() - t0
    fine = table2(N=501)
    target = {"hieu": 86, "popov": 118, "gra2": 83}
    bands = {s: all(_within(t.iterations(s, x), target[s], 10) for x in t.starts) for s in target}
    drift = max(abs(a - b) for a, b in zip(np.ravel(t.matrix()), np.ravel(fine.matrix())))
    ok = all(bands.values()) and drift <= 2 and secs < 5
    counts = ", ".join(f"{s} {t.matrix()[i]} ({target[s]} +/- 10)" for i, s in enumerate(t.solvers))
    return ok, f"{counts}; N=501 drift {drift}; {secs:.2f} s"


def criterion_3():
    worst = []
    for p in (example62(), example21()):
        for solver, sched in (("gra2", StepSchedule.diminishing(40)),
                              ("gra3", StepSchedule.adaptive(4.0))):
            for x0 in p.starting_points.values():
                cfg = SolverConfig(sched, tol=1e-300, max_iter=5000, x0=x0, record_iterates=True)
                tr = run(solver, p, cfg)
                worst.append(min(norm(x) for x, _ in tr.iterates))
    return max(worst) < 1e-2, f"largest best-so-far ||x^k|| {max(worst):.2e} (< 1e-2)"


def criterion_4():
    p = example61()
    z = reference_solution(p)
    lam = 0.27
    bad_ineq = bad_mono = 0
    checked = 0
    for x0 in p.starting_points.values():
        cfg = SolverConfig(StepSchedule.constant(lam), tol=1e-6, x0=x0, energy_reference=z,
                           record_iterates=True)
        tr = run("gra1", p, cfg)
        E = tr.energies
        # the inequality couples y^{k-1}, y^k, so it starts once y^1 has been replaced
        for k in range(1, len(E) - 1):
            xk, yk = tr.iterates[k]
            bound = E[k] - PHI * dist(xk, yk) ** 2 + 2 * lam * p.f(yk, z) + 1e-8 * (1 + E[k])
            bad_ineq += E[k + 1] > bound
            checked += 1
        bad_mono += sum(E[k + 1] > E[k] * (1 + 1e-8) for k in range(len(E) - 1))
    ok = bad_ineq == 0 and bad_mono == 0
    return ok, f"{checked} steps, {bad_ineq} energy-bound and {bad_mono} monotonicity violations"


def _vi_instances():
    space = InnerProductSpace.l2(41)
    yield linear_vi()
    yield example62(41)
    yield ProblemInstance("damped", vi_bifunction(damped_operator, L=1.0), Ball(1.0, space), space)
    yield ProblemInstance("radial-r2", vi_bifunction(radial_operator, L=3.5), Ball(2.0, space), space)


def criterion_5():
    rng = np.random.default_rng(SEED)
    worst = 0.0
    for p in _vi_instances():
        L = 2 * p.bifunction.lipschitz[0]
        lam = 0.9 * PHI / (2 * L)
        s1 = s2 = GoldenState.initial(p.set.sample(rng), p.set.sample(rng))
        for _ in range(200):
            s1 = gra1_step(s1, p, lam, method="gradient", inner_tol=1e-13)
            s2 = graal_vi_step(s2, p.bifunction.operator, lam, p.set.project)
            worst = max(worst, dist(s1.y, s2.y), dist(s1.x, s2.x))
    return worst <= 1e-10, f"max iterate gap {worst:.2e} over 4 instances x 200 steps (<= 1e-10)"


def criterion_6():
    rng = np.random.default_rng(SEED)
    E5 = InnerProductSpace.euclidean(5)
    p = example61()
    worst_proj = worst_prox = 0.0
    for _ in range(100):
        x = rng.uniform(-9, 7, 5) * rng.choice([0.2, 1.0, 2.0])
        got = project_polytope(Vector(x, E5), box=(-5.0, 5.0), halfspace=(Vector(np.ones(5), E5), -1.0))
        worst_proj = max(worst_proj, np.max(np.abs(got.coords - project_oracle(x))))
    for _ in range(100):
        anchor, center = p.set.sample(rng), Vector(rng.uniform(-8, 8, 5), E5)
        lam = rng.uniform(0.01, 1.0)
        got = solve_prox(ProxProblem(anchor, center, lam, p.bifunction, p.set)).minimizer
        ref = affine_prox_oracle(EX61_P, EX61_Q, EX61_q, anchor.coords, center.coords, lam)
        worst_prox = max(worst_prox, np.max(np.abs(got.coords - ref)))
    ok = worst_proj <= 1e-8 and worst_prox <= 1e-8
    return ok, f"projection error {worst_proj:.1e}, prox error {worst_prox:.1e} (<= 1e-8)"


def _with_constants(p, c):
    f = dataclasses.replace(p.bifunction, lipschitz=(c, c))
    return dataclasses.replace(p, bifunction=f)


def criterion_7():
    lines, ok = [], True
    for p in (example62(), example21()):
        p = _with_constants(p, 7 / 4)
        p = dataclasses.replace(p, bifunction=dataclasses.replace(p.bifunction, strong_modulus=0.5))
        res = check_conditions(p, n_samples=1000, seed=42, margin=1e-10)
        wanted = [r for r in res if r.name[:2] in ("A1", "A2", "A5", "A9")]
        ok &= len(wanted) == 4 and all(r.passed for r in wanted)
        lines.append(f"{p.name}: " + ", ".join(f"{r.name} {'ok' if r.passed else 'FAIL'}" for r in wanted))
    lvi = linear_vi()
    (a5,) = [r for r in check_conditions(lvi, n_samples=1000, seed=42, margin=1e-10) if r.name[:2] == "A5"]
    ok &= a5.passed
    lines.append(f"linear_vi: {a5.name} {'ok' if a5.passed else 'FAIL'}")
    return ok, "; ".join(lines)


# Runs covered by the certificate check: the two tables, every solver on the
# strongly pseudomonotone ball problems, and constant or 40/(k+1) steps on the
# linear VI. Diminishing steps with a small numerator can stop early on slowly
# converging problems (see test_solvers), so they are not part of this family.
def _certificate_runs():
    yield from ((example61(), tr, 1e-6) for tr in table1().traces.values())
    yield from ((example62(), tr, 1e-3) for tr in table2().traces.values())
    const, dim, adapt = StepSchedule.constant, StepSchedule.diminishing, StepSchedule.adaptive
    for p in (example62(), example21()):
        x0 = p.starting_points["paper-x0-1"]
        for solver, sched, tol in (("gra1", const(0.2), 1e-6), ("graal-vi", const(0.2), 1e-6),
                                   ("gea", const(0.2), 1e-6), ("gra2", dim(40), 1e-3),
                                   ("gra3", adapt(4.0), 1e-3), ("hieu", dim(40), 1e-3),
                                   ("popov", dim(40), 1e-3)):
            yield p, run(solver, p, SolverConfig(sched, tol=tol, x0=x0)), tol
    p = linear_vi()
    x0 = p.set.samples(1, seed=SEED)[0]
    for solver, sched, tol in (("gra1", const(0.3), 1e-6), ("graal-vi", const(0.45), 1e-6),
                               ("gea", const(0.3), 1e-6), ("hieu", const(0.3), 1e-6),
                               ("popov", const(0.3), 1e-6), ("gra2", dim(40), 1e-4)):
        yield p, run(solver, p, SolverConfig(sched, tol=tol, x0=x0)), tol


def criterion_8():
    runs = list(_certificate_runs())
    converged = [(p, tr, tol) for p, tr, tol in runs if tr.status == "converged"]
    margins = [p.gap(tr.solution, 500) + 10 * tol for p, tr, tol in converged]
    ok = len(converged) == len(runs) and min(margins) >= 0
    return ok, f"{len(converged)}/{len(runs)} converged runs, smallest gap + 10 tol = {min(margins):.2e}"


CRITERIA = [
    ("1 table1 reproduction", criterion_1),
    ("2 table2 reproduction", criterion_2),
    ("3 strong convergence", criterion_3),
    ("4 energy suite", criterion_4),
    ("5 prox / projection equivalence for VIs", criterion_5),
    ("6 oracle equivalence", criterion_6),
    ("7 condition suites", criterion_7),
    ("8 terminal certificate", criterion_8),
]


def report(label, fn):
    ok, detail = fn()
    line = f"{'PASS' if ok else 'FAIL'}  criterion {label}: {detail}"
    return ok, line


@pytest.mark.parametrize("label,fn", CRITERIA, ids=[c[0].split()[0] for c in CRITERIA])
def test_criterion(label, fn, capsys):
    ok, line = report(label, fn)
    with capsys.disabled():
        print("\n" + line)
    assert ok, line


if __name__ == "__main__":
    results = [report(label, fn) for label, fn in CRITERIA]
    for _, line in results:
        print(line)
    sys.exit(0 if all(ok for ok, _ in results) else 1)
