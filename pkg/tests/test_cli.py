import subprocess
import sys

import h3
import pytest

from zklp.cli import bench_rows, main
from zklp.geo import GeoPoint, haversine
from zklp.ieee import FP32, is_nan_bits


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_prove_paris(capsys):
    code, out, _ = run(capsys, "prove", "--lat", "48.8566", "--lng", "2.3522", "--res", "9")
    lines = out.splitlines()
    assert code == 0
    assert lines[0].startswith("# zklp-attestation v1")
    assert lines[1] == "res=9 face=3 i=8916 j=0 k=5963"
    assert lines[2] == f"h3_index: {h3.latlng_to_cell(48.8566, 2.3522, 9)}"
    assert "native_constraints: 10606" in lines and "lookup_constraints: 13227" in lines
    assert lines[-1] == "satisfied: true"


@pytest.mark.parametrize("argv", [
    ["prove", "--lat", "0", "--lng", "0", "--res", "16"],
    ["prove", "--lat", "91", "--lng", "0", "--res", "3"],
    ["prove", "--lat", "0", "--lng", "0", "--res", "3", "--precision", "fp16"],
    ["bench", "--batches", "2,x"],
    ["bench", "--op", "fma"],
    ["proximity", "--lat", "0", "--lng", "0", "--cell", "3 2 1 1 1"],
    ["corpus", "--resolutions", "3,17", "--out", "/dev/null"],
])
def test_usage_errors_exit_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2 and err.startswith(f"zklp {argv[0]}: error:")


def test_argparse_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["prove", "--lat", "1"])
    assert exc.value.code == 2


def test_gen_vectors_and_testfloat(tmp_path, capsys):
    path = tmp_path / "v.txt"
    code, out, _ = run(capsys, "gen-vectors", "--op", "add", "--precision", "fp32", "--count", "700",
                       "--out", str(path))
    assert code == 0 and out.strip() == f"wrote 700 vectors to {path}"
    code, out, _ = run(capsys, "testfloat", "--vectors", str(path))
    assert code == 0
    assert out.splitlines() == ["# zklp-testfloat v1 precision=fp32", "add   700/700 pass, 0 unsatisfied"]

    lines = path.read_text().splitlines()
    # NaN results compare as a class, so corrupt a non-NaN one
    n = next(n for n in range(400, 700) if not is_nan_bits(int(lines[n].split()[3], 16), FP32))
    op, a, b, e = lines[n].split()
    lines[n] = f"{op} {a} {b} {int(e, 16) ^ 1:08x}"
    path.write_text("\n".join(lines) + "\n")
    code, out, _ = run(capsys, "testfloat", "--vectors", str(path))
    assert code == 1
    assert "add   699/700 pass, 0 unsatisfied" in out
    assert out.count("failure:") == 1


def test_testfloat_rejects_malformed_file(tmp_path, capsys):
    path = tmp_path / "bad.txt"
    path.write_text("# zklp-vectors v1 fp32\nadd 1 2\n")
    code, _, err = run(capsys, "testfloat", "--vectors", str(path))
    assert code == 2 and "bad.txt:2:" in err


def test_testfloat_generated_fp16(capsys):
    code, out, _ = run(capsys, "testfloat", "--precision", "fp16", "--count", "300")
    assert code == 0
    assert len(out.splitlines()) == 7 and "sqrt  300/300 pass" in out


def test_bench_table(capsys):
    code, out, _ = run(capsys, "bench", "--op", "mul", "--batches", "2,32")
    lines = out.splitlines()
    assert code == 0 and lines[0].startswith("# zklp-bench v1 op=mul precision=fp32")
    rows = [line.split() for line in lines[2:]]
    assert [r[:2] for r in rows] == [["8", "2"], ["8", "32"]]
    assert [float(r[5]) for r in rows] == [274.5, pytest.approx(138.09, abs=0.01)]
    T, k, nat, lk, tot, per = bench_rows("mul", FP32, [2], [8])[0]
    assert tot == nat + lk and per == tot / k


def test_corpus_and_suite(tmp_path, capsys):
    path = tmp_path / "c.txt"
    code, out, _ = run(capsys, "corpus", "--resolutions", "0,5", "--out", str(path))
    assert code == 0 and out.strip() == f"wrote 3200 records to {path}"
    code, out, _ = run(capsys, "zklp-suite", "--corpus", str(path), "--limit", "1")
    lines = out.splitlines()
    assert code == 0 and lines[0] == "# zklp-suite v1 precision=fp64"
    assert lines[2].split()[:4] == ["0", "16", "16", "100.00%"]
    assert lines[3].split()[:4] == ["5", "16", "16", "100.00%"]
    code, again, _ = run(capsys, "zklp-suite", "--corpus", str(path), "--limit", "1")
    assert again == out


def test_proximity(capsys):
    code, out, _ = run(capsys, "proximity", "--lat", "48.8566", "--lng", "2.3522", "--cell", "9 3 8916 0 5963")
    d = float(out.split()[1])
    assert code == 0 and d < h3.average_hexagon_edge_length(9, "km") * 2
    code, out, _ = run(capsys, "proximity", "--lat", "51.5074", "--lng", "-0.1278", "--cell", "9 3 8916 0 5963")
    far = float(out.split()[1])
    direct = haversine(GeoPoint.from_degrees(51.5074, -0.1278), GeoPoint.from_degrees(48.8566, 2.3522))
    assert abs(far - direct) < 1.0


def test_module_entry_point():
    done = subprocess.run([sys.executable, "-m", "zklp", "proximity", "--lat", "0", "--lng", "0",
                           "--cell", "0 0 0 0 0", "--radius", "1"], capture_output=True, text=True)
    assert done.returncode == 0 and done.stdout.startswith("min_vertex_distance_km: ")
