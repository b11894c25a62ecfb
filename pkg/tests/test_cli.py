import io
import json
import sys

import pytest

from prosupmine import cli
from prosupmine.dataio import load_stream
from prosupmine.model import TimestampReport


@pytest.fixture
def trace_file(tmp_path, trace_text):
    path = tmp_path / "trace.events"
    path.write_text(trace_text, encoding="utf-8")
    return str(path)


def run(argv):
    return cli.main(argv)


class TestMine:
    def test_text_output_on_trace(self, trace_file, capsys):
        assert run(["mine", trace_file, "--poi", "3", "--minsup", "0.5"]) == 0
        out = capsys.readouterr().out
        assert out.splitlines() == [
            "t1 <(A:2)> 1",
            "t2 <(A:2)> 1",
            "t2 <(B:1)> 1",
            "t2 <(A:2)(B:1)> 1",
        ]

    def test_boolean_flag(self, trace_file, capsys):
        assert run(["mine", trace_file, "--poi", "3", "--boolean"]) == 0
        out = capsys.readouterr().out
        assert "t2 <(A:1)(B:1)> 1" in out.splitlines()
        assert ":2" not in out

    def test_minsup_validation(self, trace_file, capsys):
        assert run(["mine", trace_file, "--minsup", "1.5"]) == cli.EXIT_USAGE
        assert "minsup must be in (0,1]" in capsys.readouterr().err

    def test_poi_validation(self, trace_file, capsys):
        assert run(["mine", trace_file, "--poi", "0"]) == cli.EXIT_USAGE
        assert "poi" in capsys.readouterr().err

    def test_missing_input_is_io_error(self, tmp_path, capsys):
        assert run(["mine", str(tmp_path / "nope.events")]) == cli.EXIT_IO

    def test_parse_error_names_line(self, tmp_path, capsys):
        path = tmp_path / "bad.events"
        path.write_text("1,S01,A\nbogus\n", encoding="utf-8")
        assert run(["mine", str(path)]) == cli.EXIT_USAGE
        assert "line 2" in capsys.readouterr().err

    def test_csv_format_single_header(self, trace_file, capsys):
        assert run(["mine", trace_file, "--poi", "3", "--format", "csv"]) == 0
        lines = capsys.readouterr().out.splitlines()
        assert lines[0] == "ts,pattern,support,support_ratio,db_size"
        assert sum(1 for l in lines if l.startswith("ts,")) == 1
        assert len(lines) == 1 + 4

    def test_jsonl_format(self, trace_file, capsys):
        assert run(["mine", trace_file, "--poi", "3", "--format", "jsonl"]) == 0
        lines = capsys.readouterr().out.splitlines()
        payloads = [json.loads(l) for l in lines]
        assert [p["ts"] for p in payloads] == [1, 2]
        assert len(payloads[1]["patterns"]) == 3

    def test_out_file(self, trace_file, tmp_path):
        out = tmp_path / "report.txt"
        assert run(["mine", trace_file, "--poi", "3", "--out", str(out)]) == 0
        assert "t2 <(A:2)(B:1)> 1" in out.read_text(encoding="utf-8")

    def test_stdin_input(self, trace_text, capsys, monkeypatch):
        monkeypatch.setattr(sys, "stdin", io.StringIO(trace_text))
        assert run(["mine", "-", "--poi", "3"]) == 0
        assert "t2 <(A:2)(B:1)> 1" in capsys.readouterr().out

    def test_reports_stream_progressively(self, trace_file, monkeypatch):
        class FlushRecorder(io.StringIO):
            def __init__(self):
                super().__init__()
                self.snapshots = []

            def flush(self):
                self.snapshots.append(len(self.getvalue()))

        recorder = FlushRecorder()
        monkeypatch.setattr(sys, "stdout", recorder)
        assert run(["mine", trace_file, "--poi", "3"]) == 0
        # one flush per tick, each with strictly more content than the last
        assert len(recorder.snapshots) == 2
        assert recorder.snapshots[0] > 0
        assert recorder.snapshots[1] > recorder.snapshots[0]

    def test_element_cap_env_override(self, tmp_path, capsys, monkeypatch):
        path = tmp_path / "wide.events"
        path.write_text("1,S01,A;B\n", encoding="utf-8")
        monkeypatch.setenv(cli.MAX_ELEMENT_ENV, "1")
        assert run(["mine", str(path)]) == cli.EXIT_USAGE
        assert "exceeds cap" in capsys.readouterr().err

    def test_element_cap_env_validation(self, trace_file, capsys, monkeypatch):
        monkeypatch.setenv(cli.MAX_ELEMENT_ENV, "zero")
        assert run(["mine", trace_file]) == cli.EXIT_USAGE
        assert cli.MAX_ELEMENT_ENV in capsys.readouterr().err


class TestVerify:
    def test_trace_matches(self, trace_file, capsys):
        assert run(["verify", trace_file, "--poi", "3", "--minsup", "0.5"]) == 0
        assert "ok: 2 ticks" in capsys.readouterr().out

    def test_generated_stream_matches(self, tmp_path, capsys):
        path = tmp_path / "gen.events"
        assert run(["generate", "--seqs", "4", "--items", "4", "--ticks", "10",
                    "--seed", "11", "--out", str(path)]) == 0
        assert run(["verify", str(path), "--poi", "3", "--minsup", "0.5"]) == 0

    def test_candidate_bound_guard(self, tmp_path, capsys):
        path = tmp_path / "wide.events"
        path.write_text("1,S01,A;B;C;D\n1,S02,A;B;C;D\n", encoding="utf-8")
        code = run(["verify", str(path), "--poi", "2", "--minsup", "0.5",
                    "--max-candidates", "10"])
        assert code == cli.EXIT_GUARD
        assert "10" in capsys.readouterr().err

    def test_mismatch_exits_3(self, trace_file, capsys, monkeypatch):
        monkeypatch.setattr(
            cli, "mine_bruteforce",
            lambda *a, **k: TimestampReport(ts=0, db_size=99, patterns=()))
        assert run(["verify", trace_file, "--poi", "3"]) == cli.EXIT_VERIFY
        err = capsys.readouterr().err
        assert "mismatch at t1" in err


class TestGenerate:
    def test_deterministic_files(self, tmp_path):
        a, b = tmp_path / "a.events", tmp_path / "b.events"
        args = ["generate", "--seqs", "2", "--items", "3", "--ticks", "5",
                "--seed", "42"]
        assert run(args + ["--out", str(a)]) == 0
        assert run(args + ["--out", str(b)]) == 0
        assert a.read_bytes() == b.read_bytes()
        assert a.stat().st_size > 0

    def test_prints_event_count(self, tmp_path, capsys):
        out = tmp_path / "g.events"
        assert run(["generate", "--seqs", "2", "--items", "3", "--ticks", "5",
                    "--seed", "42", "--out", str(out)]) == 0
        assert "3 events" in capsys.readouterr().err

    def test_validates_params(self, capsys):
        assert run(["generate", "--arrival-prob", "0"]) == cli.EXIT_USAGE
        assert "arrival_prob" in capsys.readouterr().err

    def test_default_output_parseable_by_mine(self, tmp_path):
        out = tmp_path / "default.events"
        assert run(["generate", "--out", str(out)]) == 0
        batches = load_stream(out)
        assert batches
        assert run(["mine", str(out), "--poi", "5", "--out",
                    str(tmp_path / "r.txt")]) == 0


class TestBench:
    def test_writes_sweep_and_figure_files(self, tmp_path):
        out_dir = tmp_path / "bench"
        code = run(["bench", "--seqs", "5", "--items", "4", "--ticks", "10",
                    "--arrival-prob", "0.5", "--qty-max", "2", "--seed", "3",
                    "--poi", "2", "4", "--minsup", "0.25", "0.5",
                    "--reps", "1", "--out", str(out_dir)])
        assert code == 0
        for name in ("sweep.csv", "fig5.dat", "fig6.dat", "fig7.dat"):
            content = (out_dir / name).read_text(encoding="utf-8")
            assert content.strip(), f"{name} is empty"
        header = (out_dir / "sweep.csv").read_text(encoding="utf-8").splitlines()[0]
        assert header == "poi,minsup,mode,total_patterns,mean_exec_time_ns,peak_node_count"

    def test_bench_on_event_file(self, trace_file, tmp_path):
        out_dir = tmp_path / "bench"
        code = run(["bench", "--input", trace_file, "--poi", "3",
                    "--minsup", "0.5", "--reps", "1", "--out", str(out_dir)])
        assert code == 0


class TestUsage:
    def test_requires_subcommand(self, capsys):
        with pytest.raises(SystemExit) as exc:
            run([])
        assert exc.value.code == cli.EXIT_USAGE

    def test_unknown_format_rejected(self, trace_file, capsys):
        with pytest.raises(SystemExit) as exc:
            run(["mine", trace_file, "--format", "xml"])
        assert exc.value.code == cli.EXIT_USAGE
