"""End-to-end acceptance checks.

Each test covers one numbered criterion, prints a single [PASS]/[FAIL] line
(visible under ``pytest -s`` or on failure), and enforces the stated
tolerances and time budgets.  Run with::

    pytest tests/test_acceptance.py -v -s
"""

import json
import time

import numpy as np

import momentflow as mf
from momentflow import cli, serialize

from corpus import (
    filiform4,
    heisenberg,
    jacobi_breaker,
    random_conditioned,
    random_spd,
    sl2_plus_center_rep,
    sl2_rep,
    so3,
    so3_plus_sl2,
    so3_plus_sl2_rep,
    so3_rep,
)


def check(criterion: int, desc: str, ok: bool) -> None:
    print(f"[{'PASS' if ok else 'FAIL'}] criterion {criterion}: {desc}")
    assert ok, f"criterion {criterion}: {desc}"


def random_rep(rng, k, n, identity_metrics=False):
    if identity_metrics:
        Gd = mf.InnerProduct.identity(k)
        Gt = mf.InnerProduct.identity(n)
    else:
        Gd = mf.InnerProduct(random_spd(rng, k))
        Gt = mf.InnerProduct(random_spd(rng, n))
    return mf.Representation(matrices=rng.standard_normal((k, n, n)),
                             G_domain=Gd, G_target=Gt)


def test_criterion_01_milnor_operator_agreement():
    start = time.perf_counter()
    rng = np.random.default_rng(100)
    worst = 0.0
    for _ in range(500):
        lam = rng.uniform(-3.0, 3.0, size=3)
        frame = mf.MilnorFrame(*lam)
        closed = np.sort(mf.milnor_frame_ricci(frame))
        mla = mf.MetricLieAlgebra.with_identity_metric(mf.milnor_algebra(frame))
        eigs = np.sort(mf.ricci_left_invariant(mla).eigenvalues)
        worst = max(worst, float(np.abs(eigs - closed).max()))
    elapsed = time.perf_counter() - start
    check(1, f"500 random frames, closed form vs operator spectrum: "
             f"max gap {worst:.2e} (<= 1e-9), {elapsed:.2f}s (< 5s)",
          worst <= 1e-9 and elapsed < 5.0)


def test_criterion_02_degenerate_frames():
    rng = np.random.default_rng(101)
    worst_closed = 0.0
    worst_op = 0.0
    for _ in range(100):
        l1 = rng.uniform(-3.0, -0.05)
        l3 = rng.uniform(0.05, 3.0)
        l2 = l1 + l3
        frame = mf.MilnorFrame(l1, l2, l3)
        expected = np.array([0.0, 2.0 * l3 * l1, 0.0])
        ric = mf.milnor_frame_ricci(frame)
        worst_closed = max(worst_closed, float(np.abs(ric - expected).max()))
        mla = mf.MetricLieAlgebra.with_identity_metric(mf.milnor_algebra(frame))
        eigs = np.sort(mf.ricci_left_invariant(mla).eigenvalues)
        worst_op = max(worst_op, float(np.abs(eigs - np.sort(expected)).max()))
    check(2, f"100 frames with l2 = l1 + l3 give (0, 2 l3 l1, 0): "
             f"closed-form gap {worst_closed:.2e}, operator gap {worst_op:.2e} "
             f"(<= 1e-9)",
          worst_closed <= 1e-9 and worst_op <= 1e-9)


def test_criterion_03_full_grid_scan():
    start = time.perf_counter()
    grid = mf.MilnorGrid()
    report = mf.milnor_min_direction_scan(grid)
    elapsed = time.perf_counter() - start
    canonical = bool((report.rows[:, 1] <= report.rows[:, 2] + 1e-12).all())
    check(3, f"default 50^3 grid: {report.points} frames, "
             f"{report.counterexamples} counterexamples, canonical order "
             f"{canonical}, {elapsed:.2f}s (< 30s)",
          report.points == 125_000 and report.counterexamples == 0
          and canonical and report.passed and elapsed < 30.0)


def test_criterion_04_moment_defining_identity():
    rng = np.random.default_rng(102)
    worst = 0.0
    for trial in range(200):
        k = int(rng.integers(1, 4))
        n = int(rng.integers(2, 5))
        theta = random_rep(rng, k, n, identity_metrics=(trial % 3 == 0))
        A = rng.standard_normal((n, n))
        lhs = float(np.trace(mf.moment_map(theta) @ theta.target_adjoint(A)))
        rhs = mf.v_inner(mf.infinitesimal_action(A, theta), theta)
        worst = max(worst, abs(lhs - rhs))
    check(4, f"200 random (theta, A): |tr(m A*) - <A.theta, theta>| "
             f"max {worst:.2e} (<= 1e-9)", worst <= 1e-9)


def test_criterion_05_gradient_finite_difference():
    rng = np.random.default_rng(103)
    h = 1e-6
    worst = 0.0
    for trial in range(50):
        k = int(rng.integers(1, 3))
        n = int(rng.integers(2, 4))
        theta = random_rep(rng, k, n, identity_metrics=(trial % 2 == 0))
        delta = theta.replace_matrices(rng.standard_normal((k, n, n)))

        def energy(t):
            m = mf.moment_map(t)
            return float(np.trace(m @ t.target_adjoint(m)))

        plus = theta.replace_matrices(theta.matrices + h * delta.matrices)
        minus = theta.replace_matrices(theta.matrices - h * delta.matrices)
        fd = (energy(plus) - energy(minus)) / (2.0 * h)
        an = mf.v_inner(mf.gradient(theta), delta)
        worst = max(worst, abs(fd - an) / max(1.0, abs(an)))
    check(5, f"50 random (theta, delta): centered difference vs "
             f"<grad, delta>, rel gap max {worst:.2e} (<= 1e-5)", worst <= 1e-5)


def test_criterion_06_flow_convergence_norm_preservation():
    start = time.perf_counter()
    rng = np.random.default_rng(104)
    worst_m = 0.0
    worst_adj = 0.0
    worst_norm = 0.0
    for base in (sl2_rep(), so3_rep()):
        base_norm = mf.v_inner(base, base)
        n = base.target_dim
        for _ in range(20):
            g = random_conditioned(rng, n, cond_max=10.0)
            trace = mf.gradient_flow(mf.gl_action(g, base))
            assert trace.converged, "flow must converge within the step budget"
            worst_m = max(worst_m, mf.moment_norm(trace.limit))
            adj = mf.self_adjointness_check(
                mf.stabilizer_algebra(trace.limit), trace.limit.G_target)
            worst_adj = max(worst_adj, adj.max_residual)
            lim_norm = mf.v_inner(trace.limit, trace.limit)
            worst_norm = max(worst_norm, abs(lim_norm - base_norm))
    elapsed = time.perf_counter() - start
    check(6, f"40 perturbed flows (cond <= 10): moment norm max {worst_m:.2e} "
             f"(<= 1e-8), stabilizer adjointness max {worst_adj:.2e} (<= 1e-6), "
             f"orbit norm drift max {worst_norm:.2e} (<= 1e-5), "
             f"{elapsed:.1f}s (< 60s)",
          worst_m <= 1e-8 and worst_adj <= 1e-6 and worst_norm <= 1e-5
          and elapsed < 60.0)


def test_criterion_07_skew_at_minimal():
    rng = np.random.default_rng(105)
    worst = 0.0
    cases = [
        (so3_rep(), so3()),
        (so3_plus_sl2_rep(), so3_plus_sl2()),
    ]
    for base, alg in cases:
        split = mf.compact_noncompact_split(alg)
        n = base.target_dim
        theta = mf.gl_action(random_conditioned(rng, n, cond_max=10.0), base)
        report = mf.skew_at_minimal_check(theta, split)
        assert report.converged
        worst = max(worst, report.symmetric_part_max)
    check(7, f"compact parts act skew-adjointly at the flow limit: "
             f"symmetric part max {worst:.2e} (<= 1e-5)", worst <= 1e-5)


def test_criterion_08_nilsoliton_oracles():
    fit1 = mf.nilsoliton_fit(mf.MetricLieAlgebra.with_identity_metric(heisenberg()))
    eig1 = np.sort(np.linalg.eigvals(fit1.derivation).real)
    ok1 = (abs(fit1.c + 1.5) <= 1e-10 and fit1.residual <= 1e-10
           and np.allclose(eig1, [1.0, 1.0, 2.0], atol=1e-9))
    fit2 = mf.nilsoliton_fit(
        mf.MetricLieAlgebra.with_identity_metric(heisenberg(scale=2.0)))
    eig2 = np.sort(np.linalg.eigvals(fit2.derivation).real)
    ok2 = (abs(fit2.c + 6.0) <= 1e-9 and fit2.residual <= 1e-10
           and np.allclose(eig2, [4.0, 4.0, 8.0], atol=1e-8))
    check(8, f"soliton fits: c={fit1.c:.6f} D~(1,1,2) resid {fit1.residual:.1e}; "
             f"scaled c={fit2.c:.6f} D~(4,4,8) resid {fit2.residual:.1e} "
             f"(<= 1e-10)", ok1 and ok2)


def test_criterion_09_compatibility_split():
    good = mf.compatibility_split_check(sl2_plus_center_rep(), central_indices=[3])
    ok_good = (good.passed
               and max(good.normality_residuals) <= 1e-8
               and max(good.commutation_residuals) <= 1e-8
               and good.associated_m_norm <= 1e-8)
    E = mf.Representation.from_matrices(np.array([[[0.0, 1.0], [0.0, 0.0]]]))
    bad = mf.compatibility_split_check(E, central_indices=[0],
                                       require_minimal=False)
    ok_bad = (not bad.passed
              and abs(bad.normality_residuals[0] - np.sqrt(2.0)) <= 1e-12)
    check(9, f"split criterion: central identity passes (assoc m norm "
             f"{good.associated_m_norm:.1e}), nilpotent central image fails "
             f"with normality residual {bad.normality_residuals[0]:.6f} "
             f"(= sqrt 2)", ok_good and ok_bad)


def test_criterion_10_phi_isometry():
    from test_checks import g_normal_matrix

    rng = np.random.default_rng(106)
    worst = 0.0
    for _ in range(100):
        n = int(rng.integers(2, 5))
        G = mf.InnerProduct(random_spd(rng, n))
        A = g_normal_matrix(rng, G)
        rep = mf.phi_orthogonal_part(A, G)
        worst = max(worst, rep.orthogonality_residual, rep.commutation_residual)
    oracle = mf.phi_orthogonal_part(np.array([[1.0, 1.0], [-1.0, 1.0]]))
    ok_oracle = bool(np.allclose(oracle.phi, [[0.0, 1.0], [-1.0, 0.0]],
                                 atol=1e-12))
    check(10, f"100 random normal matrices: phi isometry/commutation "
              f"residual max {worst:.2e} (<= 1e-8); rotation-and-scale "
              f"oracle exact: {ok_oracle}", worst <= 1e-8 and ok_oracle)


def test_criterion_11_cli_determinism_exit_codes(tmp_path, capsys):
    def payload(alg):
        T = alg.bracket_tensor
        entries = [[i + 1, j + 1, k + 1, float(T[i, j, k])]
                   for i in range(alg.dim) for j in range(i + 1, alg.dim)
                   for k in range(alg.dim) if T[i, j, k] != 0.0]
        return {"dim": alg.dim, "brackets": entries}

    def dump(name, data):
        p = tmp_path / name
        p.write_text(json.dumps(data) if not isinstance(data, str) else data)
        return str(p)

    h3 = dump("h3.json", payload(heisenberg()))
    breaker = dump("breaker.json", payload(jacobi_breaker()))
    garbage = dump("garbage.json", "{nope")
    M = np.eye(4)
    M[0, 1] = M[1, 0] = 0.4
    M[2, 3] = M[3, 2] = 0.3
    bad_soliton = payload(filiform4())
    bad_soliton["inner_product"] = M.tolist()
    n4 = dump("n4.json", bad_soliton)
    rng = np.random.default_rng(107)
    theta = mf.gl_action(random_conditioned(rng, 2, cond_max=6.0), sl2_rep())
    rep = dump("rep.json", serialize.representation_to_dict(theta))

    codes = {
        0: cli.main(["validate", "-i", h3]),
        1: cli.main(["nilsoliton", "-i", n4]),
        2: cli.main(["validate", "-i", garbage]),
        3: cli.main(["validate", "-i", breaker]),
        4: cli.main(["flow", "-i", rep, "-o", str(tmp_path / "t.csv"),
                     "--max-steps", "2"]),
        5: cli.main(["validate", "-i", h3,
                     "-o", str(tmp_path / "no" / "dir" / "x.json")]),
    }
    codes_ok = all(got == want for want, got in codes.items())

    # byte-identical reruns
    ricci_out = str(tmp_path / "ricci.json")
    assert cli.main(["ricci", "-i", h3, "-o", ricci_out]) == 0
    ricci_a = (tmp_path / "ricci.json").read_bytes()
    assert cli.main(["ricci", "-i", h3, "-o", ricci_out]) == 0
    ricci_same = (tmp_path / "ricci.json").read_bytes() == ricci_a

    flow_out = str(tmp_path / "flow.csv")
    assert cli.main(["flow", "-i", rep, "-o", flow_out]) == 0
    flow_a = (tmp_path / "flow.csv").read_bytes()
    limit_a = (tmp_path / "flow.limit.json").read_bytes()
    assert cli.main(["flow", "-i", rep, "-o", flow_out]) == 0
    flow_same = ((tmp_path / "flow.csv").read_bytes() == flow_a
                 and (tmp_path / "flow.limit.json").read_bytes() == limit_a)

    scan_out = str(tmp_path / "scan.csv")
    scan_args = ["milnor-scan", "-o", scan_out,
                 "--tol", "n1=5", "--tol", "n2=5", "--tol", "n3=5"]
    assert cli.main(scan_args) == 0
    scan_a = (tmp_path / "scan.csv").read_bytes()
    assert cli.main(scan_args) == 0
    scan_same = (tmp_path / "scan.csv").read_bytes() == scan_a

    with capsys.disabled():
        check(11, f"exit codes {sorted(codes.items())} as documented; "
                  f"ricci/flow/milnor-scan reruns byte-identical: "
                  f"{ricci_same and flow_same and scan_same}",
              codes_ok and ricci_same and flow_same and scan_same)
