import json

from lemnicap.cli import main, parse_rational


class TestParseRational:
    def test_named_samples(self):
        R = parse_rational("twopole")
        assert R.degree == 2

    def test_counterexample_name(self):
        R = parse_rational("counterexample:100")
        assert R.degree == 3

    def test_inline_json(self):
        R = parse_rational('{"poles":[[2,0],[-2,0]],"residues":[[1,0],[1,0]]}')
        assert R.degree == 2
        assert R.poles[0] == 2.0

    def test_file(self, tmp_path):
        p = tmp_path / "r.json"
        p.write_text('{"poles":[[0,0]],"residues":[[3,0]]}')
        assert parse_rational(str(p)).degree == 1


class TestCommands:
    def test_trace_writes_artifacts(self, tmp_path):
        rc = main(["trace", "--r", "twopole", "--t", "1", "--out", str(tmp_path)])
        assert rc == 0
        assert (tmp_path / "lemniscate.svg").exists()
        obj = json.loads((tmp_path / "lemniscate.json").read_text())
        assert obj["level"] == 1.0
        assert len(obj["components"]) == 2

    def test_trace_merged(self, tmp_path):
        rc = main(["trace", "--r", "twopole", "--t", "0.4", "--out", str(tmp_path)])
        assert rc == 0
        obj = json.loads((tmp_path / "lemniscate.json").read_text())
        assert len(obj["components"]) == 1

    def test_cap_csv(self, tmp_path):
        rc = main(["cap", "--r", "disk", "--out", str(tmp_path)])
        assert rc == 0
        text = (tmp_path / "capacity.csv").read_text()
        assert "PANEL" in text and "FEKETE" in text

    def test_cap_refuses_critical_level(self, tmp_path):
        rc = main(["cap", "--r", "twopole", "--t", "0.5", "--out", str(tmp_path)])
        assert rc == 2

    def test_trace_window_too_small(self, tmp_path):
        rc = main(["trace", "--r", "disk", "--window", "0,2,-1,1",
                   "--out", str(tmp_path)])
        assert rc == 2

    def test_hm_deterministic(self, tmp_path):
        d1 = tmp_path / "a"
        d2 = tmp_path / "b"
        for d in (d1, d2):
            rc = main(["hm", "--r", "twopole", "--source", "inf",
                       "--walks", "20000", "--seed", "17", "--out", str(d)])
            assert rc == 0
        assert (d1 / "hm.json").read_bytes() == (d2 / "hm.json").read_bytes()

    def test_verify_counterexample(self, tmp_path):
        rc = main(["verify", "counterexample", "--p", "100,1000",
                   "--out", str(tmp_path)])
        assert rc == 0
        assert (tmp_path / "counterexample.csv").exists()

    def test_verify_lower_d1(self, tmp_path):
        rc = main(["verify", "lower", "--r", "disk", "--out", str(tmp_path)])
        assert rc == 0
        assert (tmp_path / "lower_bounds.csv").exists()

    def test_sweep(self, tmp_path):
        rc = main(["sweep", "--r", "m2", "--levels", "6", "--out", str(tmp_path)])
        assert rc == 0
        assert (tmp_path / "sweep.csv").exists()
        assert (tmp_path / "sweep.svg").exists()
