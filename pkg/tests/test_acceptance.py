"""Exit criteria for the package, each at its pinned tolerance."""
import json
import math
import time
import warnings

import numpy as np
import pytest

from acceptance_log import record
from oracles import naive_std
from series_gen import random_cases
from stdecomp import (
    MackeyGlassConfig,
    Mode,
    Variant,
    acf,
    adf_test,
    build_dataset,
    classical_decompose,
    cycle_diversity,
    cycle_mean,
    decode_forecast,
    decompose_std,
    decompose_stdr,
    encode_input_patterns,
    encode_output_patterns,
    gen_mackey_glass,
    gen_test_process,
    holdout_forecast,
    knn_forecast,
    kpss_test,
    pacf,
    pp_test,
    reconstruct,
    remainder_ratio,
    split_cycles,
    write_components,
)
from stdecomp.cli import cli_dispatch
from stdecomp.io import airline_path, read_components

RECON_TOL = 1e-9
ORACLE_TOL = 1e-12
SEED = 20220117


@pytest.fixture(scope="module")
def corpus():
    return list(random_cases(SEED, 1000))


def test_airline_ratio(airline):
    start = time.perf_counter()
    c = decompose_stdr(airline, 12)
    s = remainder_ratio(c.remainder, c.series)
    elapsed = time.perf_counter() - start
    ok = abs(s.median - 1.78) <= 0.10 and abs(s.iqr - 2.26) <= 0.10 and elapsed < 0.1
    detail = f"median={s.median:.4f} (1.78+-0.10) iqr={s.iqr:.4f} (2.26+-0.10) time={elapsed * 1e3:.2f}ms"
    assert record("airline ratio", ok, detail), detail


def test_airline_stationarity(airline):
    r = decompose_stdr(airline, 12).remainder
    adf, pp, kpss = adf_test(r), pp_test(r), kpss_test(r)
    ok = adf.rejects_null("1%") and pp.rejects_null("1%") and not kpss.rejects_null("1%")
    detail = (f"ADF={adf.statistic:.3f} (cv1%={adf.critical_values['1%']:.3f}) "
              f"PP={pp.statistic:.3f} (cv1%={pp.critical_values['1%']:.3f}) "
              f"KPSS={kpss.statistic:.4f} (cv1%={kpss.critical_values['1%']})")
    assert record("airline stationarity", ok, detail), detail


def test_mackey_glass_ratio():
    # 970 = 19 * 51 + 1: the incomplete trailing cycle (one sample) is dropped
    x = gen_mackey_glass(MackeyGlassConfig(length=970))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        c = decompose_stdr(x, 51, truncate=True)
    s = remainder_ratio(c.remainder, c.series)
    ok = abs(s.median - 8.87) <= 1.5
    detail = f"median={s.median:.3f} (8.87+-1.5) iqr={s.iqr:.3f} over {c.cycles} cycles"
    assert record("mackey-glass ratio", ok, detail), detail


def _reconstruction_failures(corpus):
    worst = 0.0
    failures = []
    for idx, (n, y) in enumerate(corpus):
        scale = np.maximum(1.0, np.abs(y))
        for variant in (Variant.DIVERSITY, Variant.STDDEV):
            std = decompose_std(y, n, variant)
            stdr = decompose_stdr(y, n, variant)
            for c in (std, stdr):
                rel = np.max(np.abs(reconstruct(c) - y) / scale)
                worst = max(worst, rel)
                if rel >= RECON_TOL:
                    failures.append((idx, "reconstruct", variant.value, rel))
            if variant is Variant.DIVERSITY:
                pats = std.seasonal_patterns()
                if np.max(np.abs(pats.sum(axis=1))) > RECON_TOL:
                    failures.append((idx, "zero-sum"))
                if np.max(np.abs(np.linalg.norm(pats, axis=1) - 1)) > RECON_TOL:
                    failures.append((idx, "unit-norm"))
            cyc = stdr.remainder.reshape(-1, n).sum(axis=1)
            if np.max(np.abs(cyc)) > RECON_TOL * np.max(scale):
                failures.append((idx, "remainder-mean", variant.value))
    return worst, failures


def _affine_failures(corpus, draws):
    rng = np.random.default_rng(SEED + 1)
    failures = []
    for d in range(draws):
        n, y = corpus[d]
        a = rng.uniform(0.05, 50) * rng.choice([-1, 1])
        b = rng.uniform(-1e3, 1e3)
        c, c2 = decompose_std(y, n), decompose_std(a * y + b, n)
        tol = RECON_TOL * max(1.0, np.max(np.abs(a * y + b)))
        if not (np.allclose(c2.trend, a * c.trend + b, rtol=0, atol=tol)
                and np.allclose(c2.dispersion, abs(a) * c.dispersion, rtol=0, atol=tol)
                and np.allclose(c2.seasonal, np.sign(a) * c.seasonal, rtol=0, atol=RECON_TOL)):
            failures.append(d)
    return failures


def test_reconstruction_suite(corpus):
    worst, failures = _reconstruction_failures(corpus)
    affine = _affine_failures(corpus, 200)
    ok = not failures and not affine
    detail = (f"{len(corpus)} series, max rel recon err={worst:.2e} (<1e-9), "
              f"invariant failures={len(failures)}, affine failures={len(affine)}/200")
    assert record("reconstruction suite", ok, detail), (detail, failures[:5], affine[:5])


def test_variant_relation(corpus):
    d_err = r_err = app_err = 0.0
    for n, y in corpus:
        div = decompose_stdr(y, n, Variant.DIVERSITY)
        sd = decompose_stdr(y, n, Variant.STDDEV)
        app = decompose_stdr(y, n, Variant.APPENDIX)
        d_err = max(d_err, np.max(np.abs(sd.dispersion * math.sqrt(n) - div.dispersion) / div.dispersion))
        r_err = max(r_err, np.max(np.abs(sd.remainder - div.remainder)),
                    np.max(np.abs(app.remainder - div.remainder)))
        app_err = max(app_err, np.max(np.abs(app.dispersion / div.dispersion - math.sqrt(n / (n - 1)))))
    ok = d_err <= ORACLE_TOL and r_err <= ORACLE_TOL and app_err <= ORACLE_TOL
    detail = (f"max rel |D_sd*sqrt(n)-D|={d_err:.1e}, max |R_variant-R|={r_err:.1e}, "
              f"max |D_app/D - sqrt(n/(n-1))|={app_err:.1e} (all <=1e-12)")
    assert record("variant relation", ok, detail), detail


def test_oracle_equivalence(corpus):
    worst = 0.0
    for n, y in corpus[:200]:
        ref = naive_std(list(y), n, stdr=True)
        c = decompose_stdr(y, n)
        for mine, theirs in zip((c.trend, c.dispersion, c.seasonal, c.seasonal_avg, c.remainder), ref):
            theirs = np.asarray(theirs)
            worst = max(worst, np.max(np.abs(mine - theirs) / np.maximum(1.0, np.abs(theirs))))
    ok = worst <= ORACLE_TOL
    detail = f"200 instances, max rel deviation={worst:.2e} (<=1e-12)"
    assert record("oracle equivalence", ok, detail), detail


def test_diagnostics_polarity():
    wn = gen_test_process("white_noise", 500, seed=7).values
    rw = gen_test_process("random_walk", 500, seed=7).values
    checks = {
        "wn ADF rejects 1%": adf_test(wn).rejects_null("1%"),
        "wn PP rejects 1%": pp_test(wn).rejects_null("1%"),
        "wn KPSS keeps 5%": not kpss_test(wn).rejects_null("5%"),
        "rw ADF keeps 5%": not adf_test(rw).rejects_null("5%"),
        "rw PP keeps 5%": not pp_test(rw).rejects_null("5%"),
        "rw KPSS rejects 1%": kpss_test(rw).rejects_null("1%"),
        "acf([1,-1,1,-1],1) == -0.75": acf([1, -1, 1, -1], 1).values[1] == -0.75,
        "pacf lag1 == acf lag1": pacf(rw, 3).values[1] == acf(rw, 3).values[1],
    }
    failed = [k for k, v in checks.items() if not v]
    ok = not failed
    detail = f"{len(checks) - len(failed)}/{len(checks)} checks" + (f", failed: {failed}" if failed else "")
    assert record("diagnostics polarity", ok, detail), detail


def test_pattern_codec(airline):
    worst_codec = 0.0
    worst_inv = 0.0
    rng = np.random.default_rng(SEED + 2)
    for n, y in random_cases(SEED + 3, 100):
        g = split_cycles(y, n)
        m, d = cycle_mean(g), cycle_diversity(g)
        for tau in range(1, g.cycles):
            out = encode_output_patterns(g, tau)
            for i in range(g.cycles - tau):
                dec = decode_forecast(out[i], m[i], d[i])
                rel = np.max(np.abs(dec - g.rows[i + tau]) / np.maximum(1.0, np.abs(g.rows[i + tau])))
                worst_codec = max(worst_codec, rel)
        a, b = rng.uniform(0.01, 100), rng.uniform(-1e3, 1e3)
        inv = np.max(np.abs(encode_input_patterns(split_cycles(a * y + b, n)) - encode_input_patterns(g)))
        worst_inv = max(worst_inv, inv)
    ds = build_dataset(airline, 12, 1)
    verbatim = all(
        np.array_equal(knn_forecast(ds, p.input, k=1).predicted_pattern, p.output) for p in ds.pairs
    )
    demo = holdout_forecast(airline, 12, horizon=1, holdout=2, k=3)
    ok = (worst_codec <= 1e-9 and worst_inv <= 1e-9 and verbatim
          and math.isfinite(demo.error.mape) and demo.error.mape < demo.naive_error.mape)
    detail = (f"codec err={worst_codec:.1e}, input invariance err={worst_inv:.1e}, k=1 verbatim={verbatim}, "
              f"airline MAPE={demo.error.mape:.3f}% vs naive {demo.naive_error.mape:.3f}%")
    assert record("pattern codec", ok, detail), detail


def test_classical_baseline():
    worst = 0.0
    mask_ok = True
    for n, y in random_cases(SEED + 4, 100, cycles=range(2, 20), positive=True):
        for mode in Mode:
            c = classical_decompose(y, n, mode)
            half = n // 2
            expected = np.zeros(y.size, dtype=bool)
            expected[:half] = expected[y.size - half:] = True
            mask_ok &= np.array_equal(np.ma.getmaskarray(c.trend), expected)
            mask_ok &= np.array_equal(np.ma.getmaskarray(c.remainder), expected)
            ok_pos = ~expected
            t, s, r = c.trend.data[ok_pos], c.seasonal[ok_pos], c.remainder.data[ok_pos]
            recon = t + s + r if mode is Mode.ADDITIVE else t * s * r
            worst = max(worst, np.max(np.abs(recon - y[ok_pos]) / np.abs(y[ok_pos])))
    ok = worst <= 1e-9 and mask_ok
    detail = f"100 series x 2 modes, max rel closure err={worst:.1e} (<=1e-9), mask widths exact={mask_ok}"
    assert record("classical baseline", ok, detail), detail


def test_cli_end_to_end(tmp_path):
    with airline_path() as p:
        air = tmp_path / "airline.csv"
        air.write_text(p.read_text())
    out = tmp_path / "air_stdr.csv"
    code1 = cli_dispatch(["decompose", "--input", str(air), "--period", "12", "--stdr", "--output", str(out)])
    header = out.read_text().splitlines()[0].split(",")
    schema1 = header == ["t", "y", "trend", "dispersion", "seasonal", "seasonal_avg", "remainder"]
    code2 = cli_dispatch(["decompose", "--input", str(air), "--period", "7"])
    mg = tmp_path / "mg.csv"
    code3a = cli_dispatch(["generate", "mackey-glass", "--length", "970", "--output", str(mg)])
    mg_out = tmp_path / "mg.json"
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        code3b = cli_dispatch(["decompose", "--input", str(mg), "--period", "51", "--truncate",
                               "--format", "json", "--output", str(mg_out)])
    doc = json.loads(mg_out.read_text())
    schema3 = set(doc) == {"meta", "components"} and doc["meta"]["period"] == 51

    c = decompose_stdr(np.random.default_rng(SEED).normal(size=144) * 97.3, 12)
    exact = True
    for fmt in ("csv", "json"):
        f = tmp_path / f"rt.{fmt}"
        write_components(c, fmt, f)
        tab = read_components(f)
        exact &= all(
            tab.columns[k].tobytes() == getattr(c, a).tobytes()
            for k, a in [("y", "series"), ("trend", "trend"), ("dispersion", "dispersion"),
                         ("seasonal", "seasonal"), ("seasonal_avg", "seasonal_avg"), ("remainder", "remainder")]
        )
    ok = (code1, code2, code3a, code3b) == (0, 2, 0, 0) and schema1 and schema3 and exact
    detail = (f"exit codes decompose/period7/generate/decompose51 = {code1}/{code2}/{code3a}/{code3b} "
              f"(want 0/2/0/0), schemas ok={schema1 and schema3}, roundtrip bit-exact={exact}")
    assert record("end-to-end CLI", ok, detail), detail
