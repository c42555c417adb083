"""CLI subcommands, grid parsing, and exit codes."""

import numpy as np
import pytest

from varsample.cli import main, parse_grid
from varsample.errors import DomainError
from varsample.imaging import checkerboard, read_pgm, write_pgm


def test_parse_grid():
    assert parse_grid("0,0.5,3") == ((0.0, 0.5, 3),)
    assert parse_grid("-1,0.25,9;-1,0.25,9") == ((-1.0, 0.25, 9), (-1.0, 0.25, 9))
    with pytest.raises(DomainError):
        parse_grid("0,0.5")
    with pytest.raises(DomainError):
        parse_grid("")


def test_eval_writes_csv(tmp_path):
    out = tmp_path / "vals.csv"
    code = main([
        "eval", "--op", "averaged", "--kernel", "bspline:2", "--w", "4",
        "--m", "2", "--grid=-0.5,0.5,3;-0.5,0.5,3", "--func", "bump",
        "--out", str(out),
    ])
    assert code == 0
    lines = out.read_text().strip().split("\n")
    assert lines[0] == "t0,t1,value"
    assert len(lines) == 10


def test_eval_kantorovich_and_partial(tmp_path):
    for op in ("kantorovich:0", "partial:1", "sampling"):
        out = tmp_path / "vals.csv"
        code = main([
            "eval", "--op", op, "--kernel", "bspline:2", "--w", "2",
            "--grid=0,0.5,2;0,0.5,2", "--func", "bump", "--out", str(out),
        ])
        assert code == 0


def test_smooth_and_imgvar(tmp_path, capsys):
    src = tmp_path / "cb.pgm"
    dst = tmp_path / "cb_s.pgm"
    write_pgm(checkerboard(size=8, tile=2), src)
    code = main([
        "smooth", "--in", str(src), "--out", str(dst),
        "--kernel", "bspline:2", "--w", "2", "--m", "2",
    ])
    assert code == 0
    out = read_pgm(dst)
    assert out.width == 8 and out.height == 8

    assert main(["imgvar", "--in", str(src)]) == 0
    line = capsys.readouterr().out.strip()
    cells = line.split(",")
    assert len(cells) == 4
    assert float(cells[2]) > 0.0
    assert cells[3] == "true"


def test_smooth_scale(tmp_path):
    src = tmp_path / "cb.pgm"
    dst = tmp_path / "half.pgm"
    write_pgm(checkerboard(size=8, tile=2), src)
    code = main([
        "smooth", "--in", str(src), "--out", str(dst),
        "--kernel", "bspline:2", "--w", "4", "--scale", "0.5",
    ])
    assert code == 0
    assert read_pgm(dst).width == 4


def test_exit_code_config_error():
    code = main([
        "eval", "--op", "mystery", "--kernel", "bspline:2", "--w", "2",
        "--grid=0,0.5,2;0,0.5,2", "--func", "bump",
    ])
    assert code == 2
    code = main([
        "lp-study", "--kernel", "fejer", "--w-schedule", "2,4", "--func", "bump",
    ])
    assert code == 2


def test_exit_code_io_error(tmp_path):
    assert main(["imgvar", "--in", str(tmp_path / "nope.pgm")]) == 3
    bad = tmp_path / "bad.pgm"
    bad.write_bytes(b"P6\n1 1\n255\n\x00")
    assert main(["imgvar", "--in", str(bad)]) == 3


def test_verify_exit_codes(capsys):
    assert main(["verify", "--suite", "prop-der"]) == 0
    assert "prop-der: pass" in capsys.readouterr().out
    assert main(["verify", "--suite", "pu", "--pu-perturbation", "1e-3"]) == 1


def test_lp_study_stdout(capsys):
    code = main([
        "lp-study", "--kernel", "bspline:2", "--func", "bump",
        "--w-schedule", "2,4", "--grid=-1.25,0.25,11;-1.25,0.25,11",
    ])
    assert code == 0
    out = capsys.readouterr().out
    assert out.startswith("w,kernel,p,lp_err_K,bound,ratio")
    assert len(out.strip().split("\n")) == 3
