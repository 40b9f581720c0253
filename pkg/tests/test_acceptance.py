"""Acceptance gate: nine criteria, one PASS/FAIL line each.

Run with ``pytest tests/test_acceptance.py -v`` or directly as a script.
"""
from __future__ import annotations

import json
import sys
import time
import xml.etree.ElementTree as ET
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from conftest import FIELDS, IRRED, MP, RED, col, compositions, mp, normalized, random_mat, random_regular  # noqa: E402
from tropopt import semifield as sf  # noqa: E402
from tropopt.cli import main as cli_main  # noqa: E402
from tropopt.ineq import is_feasible, star_by_decomposition  # noqa: E402
from tropopt.linalg import (  # noqa: E402
    Mat,
    allclose,
    is_irreducible,
    mat_add,
    mat_leq,
    mat_mul,
    mat_pow,
    scalar_mul,
    spectral_radius,
    star,
    tr_sum,
    trace,
)
from tropopt.optimizer import OptProblem, brute_force_min, compute_theta, minimize, objective  # noqa: E402
from tropopt.scheduling import ProjectSpec, schedule, validate_schedule  # noqa: E402

TOL = 1e-9


def report(number: int, ok: bool, detail: str, capsys=None) -> None:
    line = f"{'PASS' if ok else 'FAIL'} criterion {number}: {detail}"
    if capsys is None:
        print(line)
        return
    # bypass output capture so the line shows in a normal pytest run
    with capsys.disabled():
        print(f"\n{line}")


def close(a: sf.Scalar, b: sf.Scalar, tol: float = TOL) -> bool:
    if a.is_null or b.is_null:
        return a.is_null and b.is_null
    return abs(a.value - b.value) <= tol


# -- 1, 2: golden examples ------------------------------------------------------


def _golden(case: dict, expected: dict) -> list[str]:
    A, C, g = mp(case["A"]), mp(case["C"]), col(case["g"])
    checks = {
        "lambda": close(spectral_radius(A), MP.scalar(expected["lambda"])),
        "A*": allclose(star(A), mp(expected["Astar"]), TOL),
        "Tr(C)": close(tr_sum(C), MP.scalar(expected["TrC"])),
        "C*": allclose(star(C), mp(expected["Cstar"]), TOL),
        "AC": allclose(mat_mul(A, C), mp(expected["AC"]), TOL),
        "theta": close(compute_theta(A, C), MP.scalar(expected["theta"])),
    }
    res = minimize(OptProblem(A, C, g))
    checks["generator"] = allclose(res.solutions.generator, mp(expected["generator"]), TOL)
    checks["minimal"] = allclose(res.minimal, col(expected["minimal"]), TOL)
    return [k for k, ok in checks.items() if not ok]


def check_1():
    start = time.perf_counter()
    bad = _golden(IRRED, {
        "lambda": 0, "Astar": [[0, -2], [-7, 0]], "TrC": 0, "Cstar": [[0, -10], [4, 0]],
        "AC": [[2, -5], [1, -6]], "theta": 2, "generator": [[0, -4], [4, 0]], "minimal": [2, 6],
    })
    elapsed = time.perf_counter() - start
    ok = not bad and elapsed < 1.0
    return ok, f"irreducible golden example, mismatches={bad or 'none'}, {elapsed:.3f}s (< 1 s)"


def check_2():
    bad = _golden(RED, {
        "lambda": 0, "Astar": [[0, None], [-4, 0]], "TrC": 0, "Cstar": [[0, -6], [None, 0]],
        "AC": [[-2, -8], [-4, -4]], "theta": 0, "generator": [[0, -6], [-4, 0]], "minimal": [3, 4],
    })
    return not bad, f"reducible golden example, mismatches={bad or 'none'}"


# -- 3: oracle equivalence ---------------------------------------------------------


def _int_mat(rng, n, m=None, null_p=0.2):
    return random_mat(rng, MP, n, m, null_p=null_p, lo=-9, hi=9)


def check_3(count: int = 60):
    rng = np.random.default_rng(20240603)
    start = time.perf_counter()
    worst, done = 0.0, 0
    while done < count:
        A, C = _int_mat(rng, 2), _int_mat(rng, 2)
        if spectral_radius(A).is_null or not is_feasible(C):
            continue
        p = OptProblem(A, C, random_regular(rng, MP, 2))
        theta = compute_theta(A, C)
        found = brute_force_min(p, grid_radius=30, grid_step=0.25)
        gap = float("inf") if found is None else abs(theta.value - found.value)
        worst = max(worst, gap)
        done += 1
    elapsed = time.perf_counter() - start
    ok = worst <= 0.25 and elapsed < 60
    return ok, f"{done} 2x2 instances, max |theta - oracle| = {worst:g} (<= 0.25), {elapsed:.1f}s (< 60 s)"


# -- 4: inequality completeness on a grid ----------------------------------------


def _grid(radius: float, step: float) -> np.ndarray:
    axis = np.arange(-radius, radius + step / 2, step)
    X1, X2 = np.meshgrid(axis, axis, indexing="ij")
    return np.stack([X1.ravel(), X2.ravel()])  # (2, N)


def _feasible_points(A: Mat, b: Mat, X: np.ndarray) -> np.ndarray:
    # plain max-plus evaluation of A x + b <= x, independent of the library
    Ax = np.max(A.data[:, :, None] + X[None, :, :], axis=1)
    lhs = np.maximum(Ax, b.data)
    return np.all(lhs <= X + TOL, axis=0)


def check_4(count: int = 25):
    rng = np.random.default_rng(4)
    X = _grid(20, 0.5)
    feasible_ok = infeasible_ok = 0
    worst = 0.0
    points = 0
    while feasible_ok < count or infeasible_ok < count:
        A = _int_mat(rng, 2, null_p=0.25)
        b = random_regular(rng, MP, 2)
        mask = _feasible_points(A, b, X)
        if is_feasible(A):
            if feasible_ok >= count:
                continue
            pts = Mat(MP, X[:, mask])
            if pts.cols:
                diff = np.abs(mat_mul(star(A), pts).data - pts.data)
                worst = max(worst, float(diff.max()))
            points += pts.cols
            feasible_ok += 1
        else:
            if infeasible_ok >= count:
                continue
            if mask.any():
                worst = float("inf")
            infeasible_ok += 1
    ok = worst <= TOL
    return ok, (f"{feasible_ok} feasible instances ({points} grid solutions, max |A*x - x| = {worst:g}), "
                f"{infeasible_ok} infeasible instances with no feasible grid point")


# -- 5: identity suites ------------------------------------------------------------


def _binomial_rhs(A: Mat, B: Mat, m: int) -> sf.Scalar:
    f = A.field
    acc = trace(mat_pow(B, m))
    for k in range(1, m + 1):
        for idx in compositions(m - k, k):
            P = Mat.identity(f, A.rows)
            for i in idx:
                P = mat_mul(mat_mul(P, A), mat_pow(B, i))
            acc = sf.add(f, acc, trace(P))
    return acc


def check_5(count: int = 200):
    rng = np.random.default_rng(5)
    failures = {"binomial": 0, "star": 0, "carre": 0, "trace": 0}
    for t in range(count):
        field = FIELDS[t % 4]
        n = 2 + t % 3
        A0, B0 = random_mat(rng, field, n), random_mat(rng, field, n)
        for m in range(1, 5):
            if not close(trace(mat_pow(mat_add(A0, B0), m)), _binomial_rhs(A0, B0, m)):
                failures["binomial"] += 1
        A, B = normalized(A0, B0, by=mat_add(A0, B0))
        if not allclose(star(mat_add(A, B)), mat_mul(star(mat_mul(star(A), B)), star(A)), TOL):
            failures["star"] += 1
        An = normalized(A0)[0]
        S = star(An)
        if not all(mat_leq(mat_pow(An, k), S, TOL) for k in range(2 * n + 1)):
            failures["carre"] += 1
        x = random_regular(rng, field, 1)[0, 0]
        ok = (close(trace(mat_mul(A0, B0)), trace(mat_mul(B0, A0)))
              and close(trace(mat_add(A0, B0)), sf.add(field, trace(A0), trace(B0)))
              and close(trace(scalar_mul(x, A0)), sf.mul(field, x, trace(A0))))
        if not ok:
            failures["trace"] += 1
    ok = not any(failures.values())
    return ok, f"{count} instances per suite, n in 2..4, all four semifields, failures={failures}"


# -- 6: extremal property ----------------------------------------------------------


def check_6(matrices: int = 24, points: int = 500):
    rng = np.random.default_rng(6)
    below = 0
    theta_gap = 0.0
    for t in range(matrices):
        field = FIELDS[t % 4]
        n = 2 + t % 3
        A = random_mat(rng, field, n)
        if spectral_radius(A).is_null:
            A = mat_add(A, Mat.identity(field, n))
        lam = spectral_radius(A)
        lam_r = field.to_repr(lam)
        for _ in range(points):
            x = random_regular(rng, field, n)
            if not field.leq_repr(lam_r, field.to_repr(objective(A, x)), TOL):
                below += 1
        res = minimize(OptProblem(A))
        theta_gap = max(theta_gap, abs(res.theta.value - lam.value))
    ok = below == 0 and theta_gap <= TOL
    return ok, (f"{matrices} matrices x {points} points, objective below lambda: {below}; "
                f"unconstrained |theta - lambda| max {theta_gap:g}")


# -- 7: reducible decomposition ------------------------------------------------------


def check_7(count: int = 30):
    rng = np.random.default_rng(7)
    done = mismatches = 0
    while done < count:
        field = FIELDS[done % 4]
        n = 3 + done % 4
        A = random_mat(rng, field, n, null_p=0.6)
        if is_irreducible(A):
            continue
        A = normalized(A)[0]
        if not allclose(star(A), star_by_decomposition(A), TOL):
            mismatches += 1
        done += 1
    return mismatches == 0, f"{done} reducible matrices (n 3..6), star vs (D*T)*D* mismatches: {mismatches}"


# -- 8: scheduling round trip ------------------------------------------------------


def check_8():
    names = ("1", "2")

    def keyed(rows):
        return {(names[i], names[j]): v for i, r in enumerate(rows) for j, v in enumerate(r) if v is not None}

    spec = ProjectSpec(names, keyed(IRRED["A"]), keyed(IRRED["C"]), dict(zip(names, IRRED["g"])))
    res = schedule(spec)
    rep = validate_schedule(spec, res.initiation)
    ok = res.max_flow_time == 2 and rep.ok and abs(rep.max_flow_time - 2) <= TOL
    return ok, f"maxFlowTime={res.max_flow_time:g}, violations={len(rep.violations)}"


# -- 9: CLI determinism and plot marker ----------------------------------------------


def check_9(workdir: Path):
    problem = workdir / "problem.json"
    problem.write_text(json.dumps({"semifield": "max-plus", **IRRED}))
    outs = [workdir / "r1.json", workdir / "r2.json"]
    codes = [cli_main(["minimize", "-i", str(problem), "-o", str(o)]) for o in outs]
    same = outs[0].read_bytes() == outs[1].read_bytes()
    svg = workdir / "plot.svg"
    code = cli_main(["plot", "-i", str(problem), "-o", str(svg)])
    marker = None
    try:
        root = ET.parse(svg).getroot()
        el = root.find(".//{http://www.w3.org/2000/svg}circle[@id='minimal']")
        marker = None if el is None else el.get("data-world")
    except ET.ParseError:
        pass
    ok = codes == [0, 0] and same and code == 0 and marker == "2,6"
    return ok, f"byte-identical results: {same}, exit codes {codes + [code]}, minimal marker at {marker}"


# -- pytest entry points ------------------------------------------------------------


CHECKS = [check_1, check_2, check_3, check_4, check_5, check_6, check_7, check_8]


@pytest.mark.parametrize("number", range(1, 9))
def test_criterion(number, capsys):
    ok, detail = CHECKS[number - 1]()
    report(number, ok, detail, capsys)
    assert ok, detail


def test_criterion_9(tmp_path, capsys):
    ok, detail = check_9(tmp_path)
    report(9, ok, detail, capsys)
    assert ok, detail


if __name__ == "__main__":
    import tempfile

    results = []
    for k, check in enumerate(CHECKS, start=1):
        ok, detail = check()
        report(k, ok, detail)
        results.append(ok)
    with tempfile.TemporaryDirectory() as tmp:
        ok, detail = check_9(Path(tmp))
        report(9, ok, detail)
        results.append(ok)
    sys.exit(0 if all(results) else 1)
