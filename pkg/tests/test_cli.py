from pathlib import Path

import pytest

from levyfields.cli import main
from levyfields.experiments import EXPERIMENTS
from levyfields.io import read_csv, read_json, read_matrix_csv
from levyfields.lattice import read_field

CONFIGS = Path(__file__).resolve().parent.parent / "configs"


def _run(tmp_path, cfg, capsys, *extra):
    code = main(["run", str(cfg), "--out", str(tmp_path / "runs"), *extra])
    out = capsys.readouterr()
    dirs = sorted((tmp_path / "runs").glob("*")) if (tmp_path / "runs").exists() else []
    return code, out, dirs


def test_list(capsys):
    assert main(["list"]) == 0
    lines = [l for l in capsys.readouterr().out.splitlines() if l and not l.startswith(" ")]
    assert [l.split()[0] for l in lines] == list(EXPERIMENTS)
    assert len(EXPERIMENTS) == 8


def test_unknown_subcommand(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2
    assert "usage" in capsys.readouterr().err


@pytest.mark.parametrize("sub", ["run", "validate"])
def test_help_shows_parameter_table(sub, capsys):
    with pytest.raises(SystemExit) as exc:
        main([sub, "--help"])
    assert exc.value.code == 0
    out = capsys.readouterr().out
    for name in EXPERIMENTS:
        assert name in out
    assert "n_samples" in out and "hilbert_k_sq" in out


def test_bad_alpha(tmp_path, capsys):
    cfg = tmp_path / "bad.toml"
    cfg.write_text('experiment = "laplace"\n[kernel]\nalpha = 1.5\n')
    code, out, dirs = _run(tmp_path, cfg, capsys)
    assert code == 2 and "kernel.alpha" in out.err and dirs == []
    assert main(["validate", str(cfg)]) == 2


def test_laplace_run(tmp_path, capsys):
    code, out, dirs = _run(tmp_path, CONFIGS / "laplace.toml", capsys)
    assert code == 0
    assert (dirs[0] / "manifest.json").exists() and (dirs[0] / "laplace.csv").exists()
    man = read_json(dirs[0] / "manifest.json")
    assert man["status"] == "ok" and man["seed"] == 1
    assert {"levyfields", "numpy", "scipy", "python"} <= set(man["versions"])


def test_runs_never_overwrite(tmp_path, capsys):
    _run(tmp_path, CONFIGS / "laplace.toml", capsys)
    _, _, dirs = _run(tmp_path, CONFIGS / "laplace.toml", capsys)
    assert [d.name for d in dirs] == ["laplace-001", "laplace-002"]


def test_failing_check_exits_one(tmp_path, capsys):
    cfg = tmp_path / "strict.toml"
    cfg.write_text('experiment = "laplace"\n[params]\nalphas = [0.5]\nxs = [1.0]\nrtol = 1e-30\n'
                   'rtol_high_alpha = 1e-30\n')
    code, _, dirs = _run(tmp_path, cfg, capsys)
    assert code == 1
    assert read_json(dirs[0] / "manifest.json")["status"] == "fail"


def _small_moments(tmp_path):
    cfg = tmp_path / "moments.toml"
    cfg.write_text((CONFIGS / "moments.toml").read_text().replace("n_samples = 200000", "n_samples = 5000"))
    return cfg


def test_determinism(tmp_path, capsys, monkeypatch):
    cfg = _small_moments(tmp_path)
    monkeypatch.setenv("LEVYFIELDS_SEED", "12345")
    _run(tmp_path, cfg, capsys)
    _, _, dirs = _run(tmp_path, cfg, capsys, "--threads", "3")
    a, b = (d / "moments.csv" for d in dirs)
    assert a.read_bytes() == b.read_bytes()
    assert read_json(dirs[1] / "manifest.json")["seed"] == 12345
    monkeypatch.setenv("LEVYFIELDS_SEED", "54321")
    _, _, dirs = _run(tmp_path, cfg, capsys)
    assert (dirs[2] / "moments.csv").read_bytes() != a.read_bytes()


@pytest.mark.parametrize("name", [p.name for p in sorted(CONFIGS.glob("*.toml")) if p.name != "moments.toml"])
def test_shipped_configs_pass_and_roundtrip(name, tmp_path, capsys):
    code, _, dirs = _run(tmp_path, CONFIGS / name, capsys)
    assert code == 0
    for f in dirs[0].iterdir():
        if f.name == "gram.csv":
            assert read_matrix_csv(f).ndim == 2
        elif f.suffix == ".csv":
            header, rows = read_csv(f)
            assert rows and all(len(r) == len(header) for r in rows)
        elif f.suffix == ".json":
            assert isinstance(read_json(f), (dict, list))
        elif f.suffix == ".field":
            assert read_field(f).values.size > 0
        else:
            pytest.fail(f"unexpected output {f.name}")


def test_shipped_moments_config(tmp_path, capsys):
    code, _, dirs = _run(tmp_path, CONFIGS / "moments.toml", capsys, "--threads", "4")
    assert code == 0
    header, rows = read_csv(dirs[0] / "moments.csv")
    assert [r[0] for r in rows] == [1, 2, 3, 4] and all(r[-1] is True for r in rows)
