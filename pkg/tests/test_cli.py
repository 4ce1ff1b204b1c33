from importlib.resources import files

import pytest

from tmfres.cli import main, read_config


@pytest.fixture
def appendix(tmp_path):
    p = tmp_path / "appendixA.def"
    p.write_text(files("tmfres.data").joinpath("a2_module.def").read_text())
    return p


def test_validate(appendix, capsys):
    assert main(["validate", "--module", str(appendix)]) == 0
    assert capsys.readouterr().out.strip() == "OK 64 generators"


def test_validate_bad_file(tmp_path, capsys):
    p = tmp_path / "bad.def"
    p.write_text("2 0 1 0 x")
    assert main(["validate", "--module", str(p)]) == 1
    err = capsys.readouterr().err.strip().split("\t")
    assert err[0] == "error" and err[1] == "ModuleFormatError"


def test_parabola(capsys):
    assert main(["parabola", "--mass", "1", "--nmax", "2"]) == 0
    rows = [line.split("\t") for line in capsys.readouterr().out.splitlines() if not line.startswith("#")]
    assert [(int(r[0]), int(r[1])) for r in rows] == [(1, 7), (2, 16)]


def test_parabola_bad_mass(capsys):
    assert main(["parabola", "--mass", "1/3"]) == 1
    assert capsys.readouterr().err.startswith("error\targument\t")


def test_unknown_subcommand():
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2


def test_config_and_override(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# defaults\nalgebra = EQ0\nsmax = 3  # trailing\ntmax = 9\n")
    assert read_config(cfg) == {"algebra": "EQ0", "smax": "3", "tmax": "9"}
    assert main(["--config", str(cfg), "ext"]) == 0
    rows = [line for line in capsys.readouterr().out.splitlines() if not line.startswith("#")]
    assert len(rows) == 4
    assert main(["--config", str(cfg), "ext", "--smax", "5"]) == 0
    rows = [line for line in capsys.readouterr().out.splitlines() if not line.startswith("#")]
    assert len(rows) == 6


def test_config_required_from_file(tmp_path, appendix, capsys):
    cfg = tmp_path / "v.cfg"
    cfg.write_text(f"module = {appendix}\n")
    assert main(["--config", str(cfg), "validate"]) == 0
    assert "OK 64" in capsys.readouterr().out


def test_bad_config(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("no equals sign\n")
    assert main(["--config", str(cfg), "ext"]) == 1
    assert capsys.readouterr().err.startswith("error\tconfig\t")


def test_chart_pipeline(tmp_path):
    ext = tmp_path / "ext.tsv"
    svg = tmp_path / "c.svg"
    assert main(["ext", "--algebra", "A1", "--smax", "3", "--tmax", "10", "--out", str(ext)]) == 0
    assert main(["chart", "--input", str(ext), "--vanishing-line", "--out", str(svg)]) == 0
    assert svg.read_text().startswith("<?xml")


def test_other_subcommands(tmp_path, capsys):
    assert main(["margolis", "--module", "@appendixA", "--n", "2"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert all(line.split("\t")[3] == "0" for line in out[1:])
    assert main(["cobar", "--preset", "EQ0", "--nmax", "3", "--tmax", "3"]) == 0
    assert len(capsys.readouterr().out.splitlines()) == 5
    out_file = tmp_path / "mr.tsv"
    assert main(["mrss", "--variant", "l2bar", "--smax", "1", "--tmax", "14", "--out", str(out_file)]) == 0
    assert "1\t12\t2\t1" in out_file.read_text()
