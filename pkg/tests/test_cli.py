import json

import pytest

from expertnet.cli import EXIT_OK, EXIT_USAGE, main
from expertnet.models import load_network


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_generate_unified(tmp_path, capsys):
    out = tmp_path / "net.json"
    code, stdout, _ = run(
        capsys, "generate", "--model", "unified", "--n", "48", "--h", "4",
        "--k", "2", "--r", "1.0", "--seed", "7", "-o", str(out),
    )
    assert code == EXIT_OK
    assert "n=48" in stdout
    net = load_network(out)
    assert net.n == 48
    assert net.config.k == 2


def test_generate_diversified_with_csv_export(tmp_path, capsys):
    out = tmp_path / "net.json"
    csv_dir = tmp_path / "csv"
    code, _, _ = run(
        capsys, "generate", "--model", "diversified", "--m", "2", "--lambda", "9",
        "--k", "3", "--r", "1.5", "-o", str(out), "--csv-dir", str(csv_dir),
    )
    assert code == EXIT_OK
    experts = (csv_dir / "experts.csv").read_text().strip().split("\n")
    assert experts[0] == "id,e_1,e_2"
    assert len(experts) == 82
    edges = (csv_dir / "edges.csv").read_text().strip().split("\n")
    assert edges[0] == "src_id,dst_id"
    assert len(edges) > 1


def test_generate_missing_params(tmp_path, capsys):
    code, _, stderr = run(
        capsys, "generate", "--model", "unified", "--n", "48", "-o", str(tmp_path / "x.json")
    )
    assert code == EXIT_USAGE
    assert "requires" in stderr


def test_sweep_csv_and_plot(tmp_path, capsys):
    out = tmp_path / "sweep.csv"
    fig = tmp_path / "sweep.png"
    code, stdout, _ = run(
        capsys, "sweep", "--model", "unified", "--n", "48", "--h", "4",
        "--r", "0,1", "--k", "1", "--realizations", "3", "--trials", "20",
        "-o", str(out), "--plot", str(fig),
    )
    assert code == EXIT_OK
    lines = out.read_text().strip().split("\n")
    assert lines[0].startswith("model,n,h_or_m,k,r,c")
    assert len(lines) == 3
    assert fig.exists() and fig.stat().st_size > 0
    assert "mean_L=" in stdout


def test_sweep_json_and_histogram(tmp_path, capsys):
    out = tmp_path / "sweep.json"
    hist = tmp_path / "hist.csv"
    code, _, _ = run(
        capsys, "sweep", "--model", "diversified", "--m", "2", "--lambda", "7",
        "--r", "1.0", "--k", "1", "--c", "0,1.0", "--realizations", "2",
        "--trials", "20", "--format", "json", "-o", str(out), "--histogram", str(hist),
    )
    assert code == EXIT_OK
    payload = json.loads(out.read_text())
    assert len(payload) == 2
    assert {p["c"] for p in payload} == {0.0, 1.0}
    lines = hist.read_text().strip().split("\n")
    assert lines[0] == "bin_lo,bin_hi,probability"
    probs = [float(l.split(",")[2]) for l in lines[1:]]
    assert sum(probs) == pytest.approx(1.0)


def test_bounds_stdout(capsys):
    code, stdout, _ = run(
        capsys, "bounds", "--model", "unified", "--n", "240", "--h", "4",
        "--k", "1", "--r", "0,1,2",
    )
    assert code == EXIT_OK
    lines = stdout.strip().split("\n")
    assert lines[0] == "model,n,h_or_m,k,r,bound,value"
    kinds = [(l.split(",")[4], l.split(",")[5]) for l in lines[1:]]
    assert ("0.0", "upper") in kinds
    assert ("2.0", "lower") in kinds
    assert sum(1 for _, b in kinds if b == "cap") == 3


def test_bounds_to_file(tmp_path, capsys):
    out = tmp_path / "bounds.csv"
    code, _, _ = run(
        capsys, "bounds", "--model", "diversified", "--m", "2", "--lambda", "14",
        "--r", "0.5,2.0", "--explicit-constants", "-o", str(out),
    )
    assert code == EXIT_OK
    assert out.read_text().startswith("model,n,h_or_m,k,r,bound,value")


def test_predict(capsys):
    code, stdout, _ = run(
        capsys, "predict", "--n", "184", "--m", "2", "--k", "1",
        "--r1", "1.98", "--r2", "1.44",
    )
    assert code == EXIT_OK
    assert stdout.strip() == "1.63"


def test_ingest_roundtrip(tmp_path, capsys):
    csv_dir = tmp_path / "csv"
    run(
        capsys, "generate", "--model", "diversified", "--m", "2", "--lambda", "14",
        "--k", "8", "--r", "1.5", "-o", str(tmp_path / "net.json"),
        "--csv-dir", str(csv_dir),
    )
    code, stdout, _ = run(
        capsys, "ingest", "--experts", str(csv_dir / "experts.csv"),
        "--edges", str(csv_dir / "edges.csv"),
    )
    assert code == EXIT_OK
    assert stdout.startswith("n=196 m=2 edges=")
    fitted = float(stdout.strip().split("fitted_r=")[1])
    assert abs(fitted - 1.5) < 0.4  # noisy at this edge count, just sanity


def test_ingest_rejects_bad_edge(tmp_path, capsys):
    (tmp_path / "experts.csv").write_text("id,e_1,e_2\n0,1,1\n1,2,2\n")
    (tmp_path / "edges.csv").write_text("src_id,dst_id\n1,0\n")
    code, _, stderr = run(
        capsys, "ingest", "--experts", str(tmp_path / "experts.csv"),
        "--edges", str(tmp_path / "edges.csv"),
    )
    assert code == EXIT_USAGE
    assert "violates candidate set" in stderr


def test_ingest_line_numbers_in_errors(tmp_path, capsys):
    (tmp_path / "experts.csv").write_text("id,e_1\n0,1\nbroken\n")
    (tmp_path / "edges.csv").write_text("src_id,dst_id\n")
    code, _, stderr = run(
        capsys, "ingest", "--experts", str(tmp_path / "experts.csv"),
        "--edges", str(tmp_path / "edges.csv"),
    )
    assert code == EXIT_USAGE
    assert "experts.csv:3" in stderr


def test_distribution(tmp_path, capsys):
    out = tmp_path / "dist.csv"
    fig = tmp_path / "dist.png"
    code, stdout, _ = run(
        capsys, "distribution", "--m", "3", "--lambda", "16",
        "-o", str(out), "--plot", str(fig),
    )
    assert code == EXIT_OK
    lines = out.read_text().strip().split("\n")
    assert lines[0] == "phi,count"
    counts = [int(l.split(",")[1]) for l in lines[1:]]
    assert sum(counts) == 4096
    assert "expected_ability=25.500" in stdout
    assert fig.exists() and fig.stat().st_size > 0


def test_unknown_command_exits_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2
