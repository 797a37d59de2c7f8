import json

import pytest

from subedit.channel import EditOp, apply_edit, make_rng
from subedit.cli import (
    EXIT_DECODE, EXIT_NOT_DENSE, EXIT_OK, EXIT_PARSE, EXIT_USAGE, _candidate_ys, bits_to_bytes,
    bytes_to_bits, main, stats_rows,
)


def _kv(text):
    return dict(line.split("=", 1) for line in text.splitlines() if "=" in line and " " not in line)


def _random_file(path, size, seed):
    path.write_bytes(make_rng(seed).integers(0, 256, size, dtype="uint8").tobytes())
    return path


def test_bit_order():
    assert bytes_to_bits(b"\x80\x01") == "1000000000000001"
    assert bits_to_bytes("1000000000000001") == b"\x80\x01"
    assert bits_to_bytes("101") == b"\xa0"
    assert bits_to_bytes("") == b""


def test_candidate_lengths():
    ys = _candidate_ys(b"\xa0", 8, 2)
    assert ys[0] == "10100000"
    assert {len(y) for y in ys} == {6, 7, 8}


def test_sketch_recover_untouched(tmp_path, capsys):
    src = _random_file(tmp_path / "a.bin", 64, 1)
    assert main(["sketch", str(src), "--out", str(tmp_path / "a.sk")]) == EXIT_OK
    assert main(["recover", str(src), str(tmp_path / "a.sk"), "--out", str(tmp_path / "b.bin")]) == EXIT_OK
    assert (tmp_path / "b.bin").read_bytes() == src.read_bytes()
    assert main(["sketch", str(src), "--out", str(tmp_path / "c.sk")]) == EXIT_OK
    assert (tmp_path / "c.sk").read_text() == (tmp_path / "a.sk").read_text()


def test_sketch_512_bytes_paper_mode(tmp_path, capsys):
    src = _random_file(tmp_path / "big.bin", 512, 2)
    assert main(["sketch", str(src), "--out", str(tmp_path / "big.sk")]) == EXIT_OK
    out = _kv(capsys.readouterr().out)
    assert out["n"] == "4096" and out["bits_h"] == "48"
    assert main(["corrupt", str(src), "--seed", "4", "--out", str(tmp_path / "bad.bin")]) == EXIT_OK
    capsys.readouterr()
    assert main(["recover", str(tmp_path / "bad.bin"), str(tmp_path / "big.sk"),
                 "--out", str(tmp_path / "fixed.bin")]) == EXIT_OK
    assert (tmp_path / "fixed.bin").read_bytes() == src.read_bytes()


@pytest.mark.parametrize("seed", range(6))
def test_corrupt_then_recover(tmp_path, capsys, seed):
    src = _random_file(tmp_path / "x.bin", 24, 10 + seed)
    sk, bad, fixed = tmp_path / "x.sk", tmp_path / "y.bin", tmp_path / "z.bin"
    assert main(["sketch", str(src), "--out", str(sk)]) == EXIT_OK
    assert main(["corrupt", str(src), "--seed", str(seed), "--out", str(bad)]) == EXIT_OK
    capsys.readouterr()
    assert main(["recover", str(bad), str(sk), "--out", str(fixed)]) == EXIT_OK
    assert fixed.read_bytes() == src.read_bytes()


def test_corrupt_replay_and_determinism(tmp_path, capsys):
    src = _random_file(tmp_path / "x.bin", 16, 3)
    x = bytes_to_bits(src.read_bytes())
    for seed in range(20):
        assert main(["corrupt", str(src), "--seed", str(seed), "--out", str(tmp_path / "a")]) == EXIT_OK
        first = capsys.readouterr().out
        assert main(["corrupt", str(src), "--seed", str(seed), "--out", str(tmp_path / "b")]) == EXIT_OK
        assert capsys.readouterr().out == first
        assert (tmp_path / "a").read_bytes() == (tmp_path / "b").read_bytes()
        kv = _kv(first)
        ins = "" if kv["ins"] == "-" else kv["ins"]
        y = apply_edit(x, EditOp(int(kv["j"]), int(kv["a"]), ins))
        assert int(kv["y_bits"]) - int(kv["x_bits"]) == len(ins) - int(kv["a"])
        assert len(y) == int(kv["y_bits"])
        assert bytes_to_bits((tmp_path / "a").read_bytes())[:len(y)] == y
        assert len((tmp_path / "a").read_bytes()) == -(-len(y) // 8)


def test_wrong_sketch_fails(tmp_path, capsys):
    a = _random_file(tmp_path / "a.bin", 24, 21)
    b = _random_file(tmp_path / "b.bin", 24, 22)
    assert main(["sketch", str(a), "--out", str(tmp_path / "a.sk")]) == EXIT_OK
    assert main(["recover", str(b), str(tmp_path / "a.sk"), "--out", str(tmp_path / "o")]) == EXIT_DECODE


def test_error_codes(tmp_path, capsys):
    zeros = tmp_path / "z.bin"
    zeros.write_bytes(bytes(4))
    assert main(["sketch", str(zeros), "--mode", "scaled", "--blk", "8", "--delta", "8",
                 "--out", str(tmp_path / "z.sk")]) == EXIT_NOT_DENSE
    (tmp_path / "junk.sk").write_text("SSEC1\nversion=1\n")
    assert main(["recover", str(zeros), str(tmp_path / "junk.sk"), "--out", str(tmp_path / "o")]) == EXIT_PARSE
    assert main(["sketch", str(tmp_path / "missing"), "--out", str(tmp_path / "o")]) == 1
    assert main(["verify", "--n", "20", "--exhaustive"]) == EXIT_USAGE
    assert main(["stats", "--n-range", "x"]) == EXIT_USAGE
    with pytest.raises(SystemExit) as exc:
        main(["sketch"])
    assert exc.value.code == 2


def test_verify_exhaustive_n12(capsys):
    assert main(["verify", "--n", "12", "--exhaustive"]) == EXIT_OK
    out = _kv(capsys.readouterr().out)
    assert out["failures"] == "0" and out["ambiguous"] == "0" and out["fallbacks"] == "0"
    assert int(out["max_feature"]) <= int(out["A_f"])


def test_verify_sampled_n24(capsys):
    assert main(["verify", "--n", "24", "--samples", "20", "--seed", "1", "--mode", "scaled",
                 "--phi", "both", "--json"]) == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    reports = [json.loads(l) for l in lines if l.startswith("{")]
    assert [r["phi_mode"] for r in reports] == ["compressed", "reference"]
    assert all(r["failures"] == 0 for r in reports)


def test_stats(capsys):
    assert main(["stats", "--n-range", "10:14"]) == EXIT_OK
    rows = stats_rows(2, 10, 14)
    assert [r["n"] for r in rows] == [1024, 2048, 4096, 8192, 16384]
    assert rows[2]["bits_h"] == 48
    assert all(r["baseline_2log2n"] == 2 * e for r, e in zip(rows, range(10, 15)))
    assert all(a["total"] <= b["total"] for a, b in zip(rows, rows[1:]))
    assert "16384" in capsys.readouterr().out
