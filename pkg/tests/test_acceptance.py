"""End-to-end acceptance checks.

Each test prints one PASS/FAIL line (run with ``pytest -s`` to see them
all); the assertions pin the tolerances.  One check, the tail-coefficient
guard in criterion 3b, is asserted exactly as specified even though the
inequality it states is false for every finite degree bound; see the
test docstring.
"""

import itertools
import math

import numpy as np
import pytest

from clusterqec import (
    PauliVector,
    SweepConfig,
    build_connectivity_graph,
    circulant,
    decode_depolarizing,
    decode_oracle_min_weight,
    distance_exhaustive,
    distance_upper_bound,
    gv_distance,
    hypergraph_product,
    in_rowspace,
    min_blocklength,
    rank,
    run_sweep,
    sample_cluster_histogram,
    syndrome,
)
from clusterqec.bounds import (
    cluster_tail_bound,
    default_blocklength_error_rate,
    depolarizing_bound,
    depolarizing_coefficient,
    rate_bound,
)
from clusterqec.cli import main as cli_main
from clusterqec.clusters import ClusterGraph, exact_cluster_distribution
from clusterqec.gf2 import BinaryVector


def report(name: str, ok: bool, detail: str) -> bool:
    print(f"ACCEPTANCE {name}: {'PASS' if ok else 'FAIL'} ({detail})")
    return ok


# ── criterion 1: [[450,98,5]] reproduction ───────────────────────────


def test_criterion_1_code_450_98_5(capsys, tmp_path, code450_98):
    out_path = tmp_path / "q450.json"
    rc = cli_main(["construct", "--h1", "circulant:15:0,1,3,7", "--out", str(out_path)])
    stdout = capsys.readouterr().out
    ok_params = rc == 0 and "[[450,98,?]]" in stdout

    # randomized search: monotone non-increasing in iterations for a fixed
    # seed, so finding weight 5 in 300 rounds implies finding it within 1e6
    found = distance_upper_bound(code450_98, 300, seed=7)
    certified = distance_exhaustive(code450_98, 4)

    with capsys.disabled():
        ok = report(
            "1",
            ok_params and found == 5 and certified is None,
            f"n=450 k=98, search found weight {found}, "
            f"exhaustive w<=4 found {certified} (None certifies d>=5)",
        )
    assert ok


# ── criterion 2: toric [[450,2,15]] reproduction ─────────────────────


def test_criterion_2_toric_reproduction(capsys, toric450, toric18):
    rc = cli_main(["construct", "--h1", "circulant:15:0,1"])
    stdout = capsys.readouterr().out
    ok_params = rc == 0 and "[[450,2,?]]" in stdout

    # explicit weight-15 string: all first-block qubits in one column slot
    v = BinaryVector(450, tuple(sorted(i * 15 for i in range(15))))
    logical = PauliVector(450, BinaryVector(450), v)
    in_kernel = toric450.g_z.mul_vec(v).weight == 0
    nontrivial = not in_rowspace(toric450.g_x, v)
    ok_logical = logical.weight == 15 and in_kernel and nontrivial

    d18 = distance_exhaustive(toric18, 3)
    none_below = distance_exhaustive(toric18, 2)

    with capsys.disabled():
        ok = report(
            "2",
            ok_params and ok_logical and d18 == 3 and none_below is None,
            f"n=450 k=2, weight-15 logical exhibited (d<=15), "
            f"[[18,2,3]] member certified d=3",
        )
    assert ok


# ── criterion 3: bounds identities ───────────────────────────────────


def test_criterion_3a_depolarizing_identity(capsys):
    from clusterqec import percolation_threshold

    p0 = percolation_threshold(4, 7)
    p1 = depolarizing_bound(24)
    target = p0**2 * (1 - p0) ** 44
    rel = abs(4 * p1 * (1 - p1) - target) / target
    with capsys.disabled():
        ok = report(
            "3a",
            p0 == 1 / 23 and rel < 1e-12,
            f"p0={p0} (exact 1/23), identity residual {rel:.2e}",
        )
    assert ok


def test_criterion_3b_tail_coefficient_guard(capsys):
    """Literal check of the stated guard 4 p1 (1-p1) < [e(z-1)]^-2.

    This inequality cannot hold: with c = p0^2 (1-p0)^(2(z-2)) and
    p0 = 1/(z-1), the ratio c / [e(z-1)]^-2 = e^2 (1-p0)^(2(z-2)) equals
    exp(2 + 2(z-2) ln(1 - 1/(z-1))), whose exponent is positive for all
    finite z >= 3 and only tends to 0 from above as z grows.  The check
    is asserted as stated and is expected to fail; the correct relation
    runs the other way.
    """
    z = 24
    c = depolarizing_coefficient(z)
    p1 = depolarizing_bound(z)
    lhs = 4 * p1 * (1 - p1)
    guard = (math.e * 23) ** -2
    with capsys.disabled():
        report(
            "3b",
            lhs < guard,
            f"4p1(1-p1)={lhs:.6e} vs [e*23]^-2={guard:.6e}; "
            f"the stated '<' is unsatisfiable (ratio {lhs/guard:.4f} > 1 for every z)",
        )
    assert lhs < guard, (
        "stated guard inequality is mathematically unsatisfiable: "
        f"{lhs:.6e} >= {guard:.6e}; the true relation is 4p1(1-p1) > [e(z-1)]^-2"
    )


def test_criterion_3c_rate_bound(capsys):
    got = rate_bound(7, 24)
    want = 1 - 2 / (23 - 21 * (22 / 23) ** 6)
    rel = abs(got - want) / want
    with capsys.disabled():
        ok = report("3c", rel < 1e-12, f"rate bound {got:.12f}, residual {rel:.2e}")
    assert ok


# ── criterion 4: ensemble distance ───────────────────────────────────


def test_criterion_4_gv_solver(capsys):
    sol = gv_distance(3, 4)
    with capsys.disabled():
        ok = report(
            "4",
            abs(sol.delta_c - 0.1125) < 0.005,
            f"delta_c={sol.delta_c:.6f} vs 0.1125 +/- 0.005 "
            f"(d/sqrt(n)={sol.delta_c * 4 / 5:.4f})",
        )
    assert ok


# ── criterion 5: empirical cluster tail ──────────────────────────────


def test_criterion_5_cluster_tail(capsys, code450_98, code450_98_graph):
    z = code450_98_graph.z_bound
    p0 = 1.0 / (z - 1)
    p = 0.5 * p0
    trials = 100_000
    hist = sample_cluster_histogram(code450_98_graph, p, trials, seed=20250810)
    checked = []
    all_ok = True
    for s in hist.sizes():
        if hist.counts[s] < 100:
            continue
        nh = hist.n_hat(s)
        sigma = math.sqrt(nh * (1 - nh) / trials)
        bound = cluster_tail_bound(s, p, z)
        checked.append(s)
        if nh > bound + 3 * sigma:
            all_ok = False
    with capsys.disabled():
        ok = report(
            "5",
            all_ok and len(checked) >= 3,
            f"z={z}, p={p:.5f}, sizes checked {checked}, all below tail bound",
        )
    assert ok


# ── criterion 6: exact oracle agreement ──────────────────────────────


def grid_graph(rows, cols):
    def vid(r, c):
        return r * cols + c

    n = rows * cols
    adj = [set() for _ in range(n)]
    for r in range(rows):
        for c in range(cols):
            if c + 1 < cols:
                adj[vid(r, c)].add(vid(r, c + 1))
                adj[vid(r, c + 1)].add(vid(r, c))
            if r + 1 < rows:
                adj[vid(r, c)].add(vid(r + 1, c))
                adj[vid(r + 1, c)].add(vid(r, c))
    return ClusterGraph(n, tuple(tuple(sorted(s)) for s in adj), 4, 4)


def test_criterion_6_sampled_vs_exact(capsys):
    g = grid_graph(3, 4)
    assert g.vertex_count == 12
    trials = 30_000
    all_ok = True
    details = []
    for p in (0.1, 0.3):
        hist = sample_cluster_histogram(g, p, trials, seed=61)
        exact_avg: dict[int, float] = {}
        for v in range(12):
            for s, val in exact_cluster_distribution(g, v, p).items():
                exact_avg[s] = exact_avg.get(s, 0.0) + val / 12
        worst = 0.0
        for s in set(exact_avg) | set(hist.counts):
            want = exact_avg.get(s, 0.0)
            got = hist.n_hat(s)
            sigma = math.sqrt(max(want * (1 - want), 1e-12) / trials)
            worst = max(worst, abs(got - want) / sigma)
            if abs(got - want) > 3 * sigma:
                all_ok = False
        details.append(f"p={p}: worst deviation {worst:.2f} sigma")
    with capsys.disabled():
        ok = report("6", all_ok, "; ".join(details))
    assert ok


# ── criterion 7: decoder equals oracle on the toric 18 ───────────────


def test_criterion_7_decoder_oracle_equivalence(capsys, toric18, toric18_graph):
    mismatches = 0
    cases = 0
    for q in range(18):
        for pauli in "XYZ":
            e = PauliVector.from_string(18, f"{pauli}{q}")
            synd = syndrome(toric18, e)
            a = decode_depolarizing(toric18, toric18_graph, synd, true_error=e)
            b = decode_oracle_min_weight(toric18, synd, 2, true_error=e)
            cases += 1
            mismatches += a.status != b.status
    for q1, q2 in itertools.combinations(range(18), 2):
        for p1 in "XYZ":
            for p2 in "XYZ":
                e = PauliVector.from_string(18, f"{p1}{q1},{p2}{q2}")
                synd = syndrome(toric18, e)
                a = decode_depolarizing(toric18, toric18_graph, synd, true_error=e)
                b = decode_oracle_min_weight(toric18, synd, 2, true_error=e)
                cases += 1
                mismatches += a.status != b.status
    with capsys.disabled():
        ok = report(
            "7",
            mismatches == 0 and cases == 54 + 1377,
            f"{cases} exhaustive error patterns, {mismatches} status mismatches",
        )
    assert ok


# ── criterion 8: erasure failure monotone in blocklength ─────────────


def test_criterion_8_erasure_family_monotonicity(capsys):
    results = []
    for length in (8, 11, 15):
        c = circulant(length, [0, 1])
        code = hypergraph_product(c, c)
        config = SweepConfig(
            code=code, channel="erasure", p_values=(0.02,), trials=10_000, seed=80
        )
        results.append((length, code.n, run_sweep(config).points[0]))
    ok_all = True
    details = []
    for (l1, n1, a), (l2, n2, b) in zip(results, results[1:]):
        # non-increasing within 95% confidence
        if b.ci_low > a.ci_high:
            ok_all = False
        details.append(f"n={n1}: {a.failure_rate:.4f} -> n={n2}: {b.failure_rate:.4f}")
    with capsys.disabled():
        ok = report("8", ok_all, "; ".join(details))
    assert ok


# ── criterion 9: blocklength estimate ────────────────────────────────


def test_criterion_9_blocklength(capsys):
    rc = cli_main(["bounds", "--j", "4", "--l", "7", "--h", "3", "--v", "4"])
    captured = capsys.readouterr()
    logged = "error probability" in captured.err
    n = min_blocklength(3, 4, pf_per_cycle=1e-9)
    p_assumed = default_blocklength_error_rate(3, 4)
    with capsys.disabled():
        ok = report(
            "9",
            rc == 0 and logged and 1.5e4 <= n <= 6e4,
            f"min blocklength {n} in [1.5e4, 6e4] at documented default "
            f"p={p_assumed:.3e} (p1/10); assumption logged: {logged}",
        )
    assert ok


# ── criterion 10: thread-count determinism ───────────────────────────


def test_criterion_10_thread_determinism(capsys, toric18):
    base = dict(
        code=toric18,
        channel="depolarizing",
        p_values=(0.02, 0.05),
        trials=200,
        seed=101,
    )
    csv_by_threads = [
        run_sweep(SweepConfig(**base, threads=t)).to_csv() for t in (1, 2, 4)
    ]
    identical = len(set(csv_by_threads)) == 1
    with capsys.disabled():
        ok = report(
            "10",
            identical,
            f"CSV byte-identical across thread counts 1/2/4: {identical}",
        )
    assert ok
