"""Acceptance gate: each test checks one criterion at its stated tolerance.

A one-line PASS/FAIL summary per criterion is printed at the end of the
pytest session.
"""

import csv
import math
import time

import numpy as np
import pytest

import conftest
from oracles import dense_generator
from polarga import bench, codec, diagnostics as dg, ga
from polarga.channel import ChannelModel, RngStream, transmit
from polarga.cli import main
from polarga.construction import PolarCode, construct_code

SIGMA2_1DB = 1.1915
SCHEMES_RULE1 = ("ega", "aga2", "aga3", "aga4")


def gate(k, ok, detail):
    ok = bool(ok)
    prev = conftest.ACCEPTANCE.get(k)
    if prev is None or prev[0]:
        conftest.ACCEPTANCE[k] = (ok, detail)
    assert ok, f"criterion {k}: {detail}"


def test_c01_chung_boundaries(capsys):
    t0 = time.perf_counter()
    main(["boundaries", "--method", "chung"])
    dt = time.perf_counter() - t0
    a1, a2 = (float(tok.split("=")[1]) for tok in capsys.readouterr().out.split())
    ok = abs(a1 / 0.01476 - 1) <= 1e-3 and abs(a2 / 0.02939 - 1) <= 1e-3 and dt < 1.0
    gate(1, ok, f"a1={a1:.6g} a2={a2:.6g} in {dt:.2f}s")


CHUNG_CENSUS_1DB = {10: (40, 33), 11: (89, 88), 12: (191, 225), 13: (394, 549), 14: (803, 1297)}


def test_c02_chung_census(tmp_path):
    out = tmp_path / "census.csv"
    t0 = time.perf_counter()
    main(["census", "--method", "chung", "--levels", "10..14", "--ebn0-db", "1", "--rate", "0.33333", "--out", str(out)])
    dt = time.perf_counter() - t0
    with open(out, newline="") as fh:
        rows = {int(r["n"]): r for r in csv.DictReader(fh)}
    bad = []
    for n, (pvs, prs) in CHUNG_CENSUS_1DB.items():
        r = rows[n]
        total = 2**n - 1
        counts_ok = (int(r["mu_pvs"]), int(r["mu_prs"])) == (pvs, prs)
        ratio_ok = abs(float(r["theta_pvs"]) - 100 * pvs / total) <= 0.01 and abs(
            float(r["theta_prs"]) - 100 * prs / total
        ) <= 0.01
        if not (counts_ok and ratio_ok):
            bad.append(f"n={n}: got {r['mu_pvs']}/{r['mu_prs']} want {pvs}/{prs}")
    gate(2, not bad and dt < 10, f"{len(bad)} level(s) differ in {dt:.2f}s; " + "; ".join(bad))


def test_c03_rule1_emptiness():
    grid = np.geomspace(1e-6, 100.0, 200_000)
    violations = {}
    for s in SCHEMES_RULE1:
        c = ga.check_update(s, grid, simplify=False)
        violations[s] = int(np.count_nonzero(c >= grid))
        for n in range(1, 15):
            r = dg.census(s, n, SIGMA2_1DB)
            violations[s] += r.pvs + r.prs
    gate(3, not any(violations.values()), f"violations {violations}")


def test_c04_pcle_properties():
    rng = np.random.default_rng(2024)
    worst = 0.0
    fails = 0
    for _ in range(10_000):
        I = rng.uniform(0.01, 0.99)
        J = rng.uniform(0.01, 0.99)
        d = int(rng.integers(0, 13))
        delta = J - I
        e = np.abs(dg.leaf_log_errors(I, delta, d))
        base = abs(math.log1p(delta / I) / math.log(2))
        per_leaf = 2.0 ** dg.check_counts(d) * base
        fails += not np.all(e <= per_leaf * (1 + 1e-12))
        fails += not e.sum() <= dg.pcle_bound(I, delta, d) * (1 + 1e-12)
        if base > 0:
            worst = max(worst, abs(e[0] / per_leaf[0] - 1))
    binom = all(dg.binomial_weight_sum(d) == 3**d for d in range(21))
    gate(4, fails == 0 and worst <= 1e-12 and binom, f"bound failures={fails} all-check rel err={worst:.1e}")


def test_c05_cle_ordering():
    t = np.linspace(0.5, 12.0, 50)
    t0 = time.perf_counter()
    profiles = {s: dg.cle_profile(s, 8, t) for s in ("chung", "aga2", "aga3", "aga4")}
    dt = time.perf_counter() - t0
    m = [profiles[s].mean_cle for s in ("chung", "aga2", "aga3", "aga4")]
    bounded = all(np.all(p.cle <= p.injection_bound * (1 + 1e-9)) for p in profiles.values())
    ok = m[0] > m[1] > m[2] > m[3] and bounded and dt < 60
    gate(5, ok, "mean CLE " + " > ".join(f"{v:.4g}" for v in m) + f", bounded={bounded}, {dt:.1f}s")


def test_c06_dispersion(capsys):
    main(["dispersion", "--n", "14", "--k", "5461", "--epsilon", "1e-3"])
    db = float(capsys.readouterr().out)
    gate(6, abs(db - (-0.186)) <= 0.01, f"{db:.4f} dB")


def test_c07_codec():
    rng = np.random.default_rng(7)
    enc_ok = True
    for n in range(1, 7):
        G = dense_generator(n)
        u = rng.integers(0, 2, (1000, 1 << n))
        code = PolarCode.from_info_set(n, range(1, (1 << n) + 1))
        enc_ok &= np.array_equal(codec.encode(code, u), u @ G % 2)

    rt_ok = True
    for n in range(1, 15):
        N = 1 << n
        code = PolarCode.from_info_set(n, sorted(rng.choice(np.arange(1, N + 1), max(1, N // 3), replace=False)))
        payload = rng.integers(0, 2, (4, code.K), dtype=np.uint8)
        x = codec.encode(code, payload)
        est, _ = codec.sc_decode(code, np.where(x == 0, np.inf, -np.inf))
        rt_ok &= np.array_equal(est, payload)

    s2 = ga.ebn0_to_noise_variance(1.0, 0.5)
    code = construct_code("aga4", 8, 128, s2)
    model = ChannelModel("awgn", s2)
    scl_ok = True
    for t in range(1000):
        g = RngStream(77, (t,)).generator()
        llr = transmit(model, codec.encode(code, g.integers(0, 2, 128, dtype=np.uint8)), g)
        scl_ok &= np.array_equal(codec.scl_decode(code, llr, 1)[0].u, codec.sc_decode(code, llr)[1])

    crc_ok = codec.crc16(b"123456789") == 0x31C3
    gate(7, enc_ok and rt_ok and scl_ok and crc_ok, f"encoder={enc_ok} roundtrip={rt_ok} scl1=sc={scl_ok} crc={crc_ok}")


def test_c08_sc_bound_dominance():
    cfg = bench.SimConfig(n=10, k=341, ebn0_db=(1.0, 1.5, 2.0), method="aga4", target_errors=100,
                          max_trials=1_000_000, seed=8, batch_size=512)
    t0 = time.perf_counter()
    res = bench.run_bler(cfg)
    dt = time.perf_counter() - t0
    parts, ok = [], dt < 300
    for p in res.points:
        se = math.sqrt(p.bler * (1 - p.bler) / p.trials)
        ok &= p.block_errors >= 100 and p.bler <= p.sc_bound + 3 * se
        parts.append(f"{p.ebn0_db:g}dB {p.bler:.3g}<={p.sc_bound:.3g}")
    gate(8, ok, ", ".join(parts) + f" in {dt:.0f}s")


@pytest.mark.slow
def test_c09_construction_gap():
    # 1.15 dB puts the AGA-4 code at BLER near 1e-2; "near" means within a factor of two
    db = 1.15
    pts = {}
    for m in ("aga4", "chung"):
        cfg = bench.SimConfig(n=14, k=5461, ebn0_db=(db,), method=m, target_errors=100,
                              max_trials=200_000, seed=9, batch_size=256)
        pts[m] = bench.run_bler(cfg).points[0]
    a, c = pts["aga4"], pts["chung"]
    ok = 5e-3 <= a.bler <= 2e-2 and c.bler >= 2 * a.bler and a.block_errors >= 100 and c.block_errors >= 100
    gate(9, ok, f"{db} dB: aga4 {a.bler:.3g} ({a.block_errors}/{a.trials}), chung {c.bler:.3g} ({c.block_errors}/{c.trials})")


def test_c10_llr_distribution():
    n = 1_000_000
    s2 = SIGMA2_1DB
    llr = transmit(ChannelModel("awgn", s2), np.zeros(n, dtype=np.uint8), RngStream(10).generator())
    mean, var = 2 / s2, 4 / s2
    se_mean = math.sqrt(var / n)
    se_var = var * math.sqrt(2 / (n - 1))
    dm, dv = llr.mean() - mean, llr.var(ddof=1) - var
    gate(10, abs(dm) <= 3 * se_mean and abs(dv) <= 3 * se_var, f"mean off {dm / se_mean:+.2f} se, var off {dv / se_var:+.2f} se")
