import json

from combopred.cli import main


class TestRunCommand:
    def test_run_writes_csvs(self, tmp_path, capsys):
        out = tmp_path / "exp"
        code = main([
            "run", "--set", "ksubsets:d=4,k=2", "--forecaster", "linexp:eta=auto:thm10",
            "--adversary", "bernoulli:means=0.3,0.4,0.5,0.6", "--feedback", "semibandit",
            "--n", "32", "--reps", "3", "--seed", "7", "--out", str(out),
        ])
        assert code == 0
        rounds = (out / "rounds.csv").read_text().splitlines()
        assert rounds[0] == "rep,t,vertex,loss,cumloss"
        assert len(rounds) == 1 + 3 * 32
        summary = (out / "summary.csv").read_text().splitlines()
        assert summary[0] == "rep,regret,bound,pass,regret_strong"
        assert len(summary) == 4
        assert "regret mean=" in capsys.readouterr().out

    def test_run_exact_csv_path_form(self, tmp_path):
        target = tmp_path / "rounds.csv"
        code = main([
            "run", "--set", "exp2lb:d=4", "--forecaster", "exp2:eta=1.0",
            "--adversary", "thm16a", "--n", "8", "--exact", "--out", str(target),
        ])
        assert code == 0
        assert target.exists() and (tmp_path / "summary.csv").exists()

    def test_config_file_defaults_and_override(self, tmp_path, capsys):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({
            "set": "ksubsets:d=4,k=2",
            "forecaster": "linexp:eta=0.1",
            "adversary": "althalves",
            "n": 8,
            "reps": 2,
        }))
        code = main(["--config", str(cfg), "run", "--n", "4"])
        assert code == 0
        assert "rounds=4" in capsys.readouterr().out


class TestVerifyCommand:
    def test_bound_pass_exit_zero(self, capsys):
        code = main(["verify", "bound", "--id", "thm4", "--d", "4", "--n", "64"])
        assert code == 0
        assert "PASS thm4" in capsys.readouterr().out

    def test_lemma_quick(self, capsys):
        code = main(["verify", "lemma", "--id", "log4", "--grid", "25"])
        assert code == 0
        assert "PASS log4" in capsys.readouterr().out

    def test_lemma_tech1_small(self, capsys):
        code = main(["verify", "lemma", "--id", "tech1", "--k-max", "40"])
        assert code == 0


class TestSweepCommand:
    def test_eta_sweep(self, tmp_path, capsys):
        out = tmp_path / "sweep"
        code = main([
            "sweep", "--param", "eta", "--values", "0.25,1.0",
            "--set", "exp2lb:d=4", "--forecaster", "exp2:eta=1.0",
            "--adversary", "thm16a", "--n", "8", "--exact", "--out", str(out),
        ])
        assert code == 0
        lines = (out / "sweep.csv").read_text().splitlines()
        assert lines[0] == "eta,regret_mean,regret_stderr"
        assert len(lines) == 3
        assert "--- eta=0.25" in capsys.readouterr().out
