import csv
import io
import math

import numpy as np
import pytest

from chancert import harness
from chancert.certify import AEConfig
from chancert.distances import FidelityDiamondReport
from chancert.harness import (
    AE_COLUMNS,
    LEMMA_COLUMNS,
    TRIAL_COLUMNS,
    ConfigError,
    ExperimentConfig,
    binomial_ci,
    build_config,
    derive_seed,
    fit_exponents,
    fmt,
    main,
    parse_config_text,
    run_ae_demo,
    run_certify,
    run_sweep,
    run_verify_lemmas,
    splitmix64,
    summarize,
)


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.reader(fh))


def exit_code(argv):
    try:
        return main(argv)
    except SystemExit as exc:  # argparse errors
        return exc.code


def strip_column(rows, name):
    i = rows[0].index(name)
    return [r[:i] + r[i + 1:] for r in rows]


# ---------------------------------------------------------------------------
# seeds and formatting
# ---------------------------------------------------------------------------

class TestSeeds:
    def test_splitmix_reference(self):
        # first outputs of the reference SplitMix64 generator seeded with 0
        state, outs = 0, []
        for _ in range(3):
            outs.append(splitmix64(state))
            state = (state + 0x9E3779B97F4A7C15) & ((1 << 64) - 1)
        assert outs == [0xE220A8397B1DCDAF, 0x6E789E6AA1B965F4, 0x06C45D188009454F]

    def test_distinct_and_in_range(self):
        seeds = {derive_seed(7, c, t) for c in range(5) for t in range(200)}
        assert len(seeds) == 1000
        assert all(0 <= s < 2**64 for s in seeds)

    def test_order_free(self):
        assert derive_seed(1, 2, 3) == derive_seed(1, 2, 3)
        assert derive_seed(1, 2, 3) != derive_seed(1, 3, 2)


def test_fmt():
    assert fmt(3) == "3"
    assert fmt(np.int64(3)) == "3"
    assert fmt(0.1) == "0.1"
    assert fmt(1 / 3) == "0.333333333333"
    assert fmt(True) == "true"
    assert fmt("accept") == "accept"


def test_binomial_ci():
    lo, hi = binomial_ci(50, 100)
    assert lo < 0.5 < hi
    assert binomial_ci(100, 100)[1] == pytest.approx(1.0)
    assert binomial_ci(0, 100)[0] == pytest.approx(0.0)


# ---------------------------------------------------------------------------
# configuration
# ---------------------------------------------------------------------------

class TestConfig:
    def test_parse(self):
        text = """
        # experiment record
        family = identity
        d = 2, 4,8
        eps = 0.4,0.2   # trailing comment
        master-seed = 11
        output_path = run.csv
        """
        vals = parse_config_text(text)
        assert vals == {"family": "identity", "d": [2, 4, 8], "eps": [0.4, 0.2], "seed": 11, "out": "run.csv"}

    def test_flag_wins(self):
        cfg = build_config("certify", {"trials": 5, "d": [2]}, {"trials": 9, "d": "4,8", "seed": None})
        assert cfg.trials == 9
        assert cfg.d == [4, 8]
        assert cfg.seed == 0

    @pytest.mark.parametrize("bad", [
        {"trials": 0}, {"eps": [0.0]}, {"eps": [2.5]}, {"delta": 1.0}, {"family": "nope"},
        {"d": []}, {"k": 5, "d": [2]}, {"workers": 0}, {"p": 1.5},
    ])
    def test_invalid(self, bad):
        with pytest.raises(ConfigError):
            build_config("certify", bad, {})

    def test_unknown_key(self):
        with pytest.raises(ConfigError):
            parse_config_text("colour = red")
        with pytest.raises(ConfigError):
            parse_config_text("just words")
        with pytest.raises(ConfigError):
            parse_config_text("trials = many")


# ---------------------------------------------------------------------------
# runs
# ---------------------------------------------------------------------------

def cfg_for(**kw):
    base = dict(command="certify", family="faulty-grover", access="incoherent", d=[2], eps=[0.5],
                delta=0.2, trials=20, seed=3)
    base.update(kw)
    return ExperimentConfig(**base).validate()


class TestCertify:
    def test_schema_and_rowcount(self, tmp_path):
        out = tmp_path / "c.csv"
        rows, _ = run_certify(cfg_for(d=[2, 3], eps=[0.5, 1.0], trials=7, out=str(out)))
        table = read_csv(out)
        assert tuple(table[0]) == TRIAL_COLUMNS
        assert len(table) - 1 == len(rows) == 7 * 4
        # (cell, trial) order
        assert [int(r[5]) for r in table[1:8]] == list(range(7))

    def test_summary_matches_column(self):
        rows, s = run_certify(cfg_for(d=[2], eps=[1.2], delta=0.9, trials=300))
        acc = np.mean([r["decision"] == "accept" for r in rows])
        assert 0.0 < acc < 1.0
        assert s["accept_rate"] == acc
        assert s["trials"] == 300

    def test_identity_accepts(self):
        for access in ("incoherent", "coherent", "source-code"):
            rows, s = run_certify(cfg_for(family="identity", access=access, d=[2, 3], eps=[0.5], trials=10))
            assert s["accept_rate"] == 1.0

    def test_random_unitary_accepts(self):
        rows, s = run_certify(cfg_for(family="random-unitary", access="coherent", d=[3], trials=10))
        assert s["accept_rate"] == 1.0
        assert all(r["f_ent"] == pytest.approx(1.0) for r in rows)

    def test_random_channel_rows(self):
        rows, _ = run_certify(cfg_for(family="random-channel", env_dim=2, trials=5, restarts=4))
        assert all(0.0 <= r["true_diamond_lb"] <= 2.0 for r in rows)
        assert all(r["f_ent"] < 1.0 for r in rows)

    def test_ledger_columns(self):
        rows, _ = run_certify(cfg_for(d=[4], eps=[0.4], delta=0.05, trials=3, access="source-code", p=0.8))
        ae = AEConfig.for_accuracy(0.4 / (16 * 2), 0.05)
        for r in rows:
            assert r["channel_queries"] == 0
            assert r["code_queries_fwd"] == r["code_queries_inv"] == ae.forward_queries
        rows, _ = run_certify(cfg_for(d=[2], eps=[0.5], delta=1 / math.e, trials=3, family="identity"))
        assert all(r["channel_queries"] == 64 for r in rows)

    def test_workers_do_not_change_rows(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        run_certify(cfg_for(d=[2, 3], trials=40, out=str(a), workers=1))
        run_certify(cfg_for(d=[2, 3], trials=40, out=str(b), workers=3))
        assert strip_column(read_csv(a), "wall_time_ms") == strip_column(read_csv(b), "wall_time_ms")

    def test_seed_changes_rows(self):
        r1, _ = run_certify(cfg_for(d=[2], eps=[1.2], delta=0.9, trials=50, seed=1))
        r2, _ = run_certify(cfg_for(d=[2], eps=[1.2], delta=0.9, trials=50, seed=2))
        assert [r["seed"] for r in r1] != [r["seed"] for r in r2]


class TestSweep:
    def test_fit_exact_power_law(self):
        cells = [{"d": d, "eps": e, "mean_queries": 3.0 * d * e**-2} for d in (2, 4, 8) for e in (0.1, 0.2)]
        fit = fit_exponents(cells)
        assert fit["d_exponent"] == pytest.approx(1.0)
        assert fit["eps_exponent"] == pytest.approx(-2.0)

    def test_single_axis(self):
        cells = [{"d": d, "eps": 0.1, "mean_queries": d**0.5} for d in (2, 4, 8)]
        assert set(fit_exponents(cells)) == {"d_exponent"}

    def test_incoherent_exponents(self):
        _, s = run_sweep(cfg_for(command="sweep", family="identity", d=[2, 4, 8, 16], eps=[0.2], trials=2))
        assert s["fit"]["d_exponent"] == pytest.approx(1.0, abs=0.05)
        _, s = run_sweep(cfg_for(command="sweep", family="identity", d=[2], eps=[0.4, 0.2, 0.1, 0.05], trials=2))
        assert s["fit"]["eps_exponent"] == pytest.approx(-2.0, abs=0.05)

    def test_needs_a_list(self):
        with pytest.raises(ConfigError):
            run_sweep(cfg_for(command="sweep"))


class TestVerifyLemmas:
    def test_small_suite(self):
        cfg = ExperimentConfig(command="verify-lemmas", d=[2, 3], random_instances=6, faulty_instances=6,
                               restarts=4, seed=5).validate()
        rows, rep = run_verify_lemmas(cfg)
        assert rep["violations"] == 0
        assert rep["checked"] == len(rows)
        assert sum(r["lemma"] == "fidelity-diamond" for r in rows) == 12
        # every legal n for every grid point, plus one identity row per d
        per_d = sum(int(1 / (2 * 2 * (1 - p)) + 1e-9) for p in cfg.p_grid) + 1
        assert sum(r["lemma"] == "power-amplification" for r in rows) == 2 * per_d


class TestAEDemo:
    def test_rows(self):
        cfg = ExperimentConfig(command="ae-demo", trials=50, eps_prime=0.05, delta=0.05,
                               a_grid=[0.0, 0.5, 1.0], seed=2).validate()
        rows, s = run_ae_demo(cfg)
        assert len(rows) == 150
        assert all(r["error"] == 0.0 for r in rows if r["a_true"] == 0.0)
        ae = AEConfig.for_accuracy(0.05, 0.05)
        assert {r["queries"] for r in rows} == {2 * (ae.grid_size - 1) * ae.repetitions}
        assert s["grid_size"] == ae.grid_size
        assert all(pt["success"] >= 0.9 for pt in s["points"])


# ---------------------------------------------------------------------------
# CLI
# ---------------------------------------------------------------------------

class TestCLI:
    def test_certify_stdout(self, capsys):
        assert main(["certify", "--family", "identity", "--d", "2", "--eps", "0.5", "--trials", "4"]) == 0
        out, err = capsys.readouterr()
        table = list(csv.reader(io.StringIO(out)))
        assert tuple(table[0]) == TRIAL_COLUMNS
        assert len(table) == 5
        assert "accept_rate=1.000000" in err

    def test_config_file_and_override(self, tmp_path, capsys):
        cfgfile = tmp_path / "run.cfg"
        cfgfile.write_text("family = identity\nd = 2\neps = 0.5\ntrials = 3\n")
        out = tmp_path / "o.csv"
        assert main(["certify", "--config", str(cfgfile), "--trials", "6", "--out", str(out)]) == 0
        assert len(read_csv(out)) == 7
        assert capsys.readouterr().out == ""

    @pytest.mark.parametrize("argv", [
        ["certify", "--trials", "0"],
        ["certify", "--family", "bogus"],
        ["certify", "--eps", "3"],
        ["certify", "--config", "/nonexistent/file.cfg"],
        ["certify", "--out", "/nonexistent/dir/o.csv", "--trials", "1"],
        ["frobnicate"],
    ])
    def test_invalid_exit_1(self, argv, capsys):
        assert exit_code(argv) == 1

    def test_violation_exit_2(self, monkeypatch, capsys):
        monkeypatch.setattr(harness, "fidelity_diamond_check",
                            lambda e, u, dlb: FidelityDiamondReport(1.0, 0.5, False))
        rc = main(["verify-lemmas", "--d", "2", "--restarts", "1", "--seed", "1"])
        assert rc == 2
        assert "violations=" in capsys.readouterr().err

    def test_ae_demo_cli(self, tmp_path, capsys):
        out = tmp_path / "ae.csv"
        assert main(["ae-demo", "--trials", "5", "--eps-prime", "0.1", "--out", str(out)]) == 0
        table = read_csv(out)
        assert tuple(table[0]) == AE_COLUMNS
        assert len(table) == 1 + 11 * 5

    def test_lemma_schema(self, tmp_path, monkeypatch):
        out = tmp_path / "l.csv"
        cfg = ExperimentConfig(command="verify-lemmas", d=[2], random_instances=2, faulty_instances=2,
                               restarts=2, out=str(out)).validate()
        run_verify_lemmas(cfg)
        assert tuple(read_csv(out)[0]) == LEMMA_COLUMNS

    def test_byte_identical(self, tmp_path):
        paths = [tmp_path / f"r{i}.csv" for i in range(2)]
        for path in paths:
            assert main(["certify", "--d", "2,4", "--eps", "1.2", "--delta", "0.9", "--trials", "30",
                         "--seed", "99", "--out", str(path)]) == 0
        a, b = (strip_column(read_csv(p), "wall_time_ms") for p in paths)
        assert a == b


def test_summarize_empty_queries():
    s = summarize([{"decision": "reject", "channel_queries": 5, "code_queries_fwd": 1, "code_queries_inv": 1}])
    assert s["accept_rate"] == 0.0
    assert s["mean_code_queries"] == 2.0
