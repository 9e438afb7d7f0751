import json
import math

import numpy as np
import pytest

from fbminimal import cli
from fbminimal.io import (euler_characteristic, json_text, mesh_faces, obj_text, read_obj,
                          read_table, write_mesh, write_table)
from fbminimal.report import Check, VerificationReport


class TestMesh:
    def test_two_by_two(self, tmp_path):
        pts = np.array([[[0, 0, 0], [1, 0, 0]], [[0, 1, 0], [1, 1, 0]]], float)
        path = write_mesh(pts, "obj", tmp_path / "sq.obj")
        verts, faces = read_obj(path)
        assert verts.shape == (4, 3) and len(faces) == 2
        assert np.array_equal(verts, pts.reshape(-1, 3))
        assert euler_characteristic(4, faces) == 1

    def test_tube_euler(self):
        faces = mesh_faces(5, 8, periodic=True)
        assert len(faces) == 2 * 4 * 8
        assert euler_characteristic(40, faces) == 0

    def test_obj_is_one_based(self):
        text = obj_text(np.zeros((2, 2, 3)))
        assert "f 1 2 4" in text and "f 0" not in text

    def test_bad_grids(self, tmp_path):
        with pytest.raises(ValueError):
            obj_text(np.zeros((4, 3)))
        with pytest.raises(ValueError):
            obj_text(np.full((2, 2, 3), np.nan))
        with pytest.raises(ValueError):
            mesh_faces(1, 5)
        with pytest.raises(ValueError):
            write_mesh(np.zeros((2, 2, 3)), "ply", tmp_path / "x.ply")

    def test_csv_mesh_roundtrip(self, tmp_path):
        pts = np.random.default_rng(2).normal(size=(3, 4, 3))
        path = write_mesh(pts, "csv", tmp_path / "m.csv")
        back = np.loadtxt(path, delimiter=",", skiprows=1)
        assert np.max(np.abs(back - pts.reshape(-1, 3))) <= 1e-12


class TestTables:
    def test_roundtrip(self, tmp_path):
        rows = [[math.pi, 1, True], [-1e-300, 2, False]]
        path = write_table(["a", "n", "flag"], rows, tmp_path / "t.csv")
        header, back = read_table(path)
        assert header == ["a", "n", "flag"]
        assert float(back[0][0]) == pytest.approx(math.pi, rel=1e-14)
        assert back[0][1:] == ["1", "true"] and back[1][2] == "false"

    def test_json_deterministic(self):
        obj = {"b": [1.0, float("nan"), True], "a": {"x": 0.1}, "s": 'q"uote'}
        text = json_text(obj)
        assert text == json_text(obj)
        parsed = json.loads(text)
        assert parsed["b"] == [1.0, None, True]
        assert parsed["a"]["x"] == 0.1
        assert parsed["s"] == 'q"uote'

    def test_report_serialization(self):
        rep = VerificationReport("demo", [Check("x", 1e-9, 1e-8, "demo check"),
                                          Check("ctrl", 0.3, 0.01, "control", "gt"),
                                          Check("bad", 1.0, 0.5, "failing check")])
        d = json.loads(rep.to_json())
        assert d["summary"] == {"pass": False, "n_checks": 3, "n_failed": 1}
        assert [r["pass"] for r in d["records"]] == [True, True, False]
        assert rep.to_csv().splitlines()[0] == "name,measured,tolerance,compare,pass,provenance"
        assert rep.summary_lines()[1].startswith("[PASS] ctrl")


def run_cli(argv, capsys):
    code = cli.main(argv)
    return code, capsys.readouterr()


class TestCli:
    def test_critical(self, tmp_path, capsys):
        out = tmp_path / "c.json"
        code, cap = run_cli(["critical-catenoid", "-o", str(out)], capsys)
        assert code == 0
        d = json.loads(out.read_text())
        assert d["summary"]["pass"] and d["constants"]["alpha"] == pytest.approx(1.199678640257734)

    def test_one_phase_csv(self, tmp_path, capsys):
        out = tmp_path / "op.csv"
        code, _ = run_cli(["one-phase", "--grid-n", "16", "-o", str(out)], capsys)
        assert code == 0
        header, rows = read_table(out)
        assert header == ["theta", "g", "g_prime", "|grad v|"] and len(rows) == 16

    def test_cap_json(self, tmp_path, capsys):
        out = tmp_path / "cap.json"
        code, _ = run_cli(["one-phase", "--kind", "cap", "--alpha-bc", "0.3", "--format", "json",
                           "-o", str(out)], capsys)
        assert code == 0 and json.loads(out.read_text())["constants"]["boundary_value"] == 0.3

    def test_spectral_single_case(self, tmp_path, capsys):
        out = tmp_path / "sp.json"
        code, _ = run_cli(["spectral", "--kappa", "2", "--theta0", "1", "-o", str(out)], capsys)
        assert code == 0 and len(json.loads(out.read_text())["records"]) == 4

    @pytest.mark.parametrize("surface", ["critical-catenoid", "plane", "herisson"])
    def test_export(self, tmp_path, capsys, surface):
        out = tmp_path / "s.obj"
        code, _ = run_cli(["export", "--surface", surface, "--grid-n", "12", "-o", str(out)], capsys)
        assert code == 0
        verts, faces = read_obj(out)
        assert len(verts) == 144 and euler_characteristic(len(verts), faces) == 0

    def test_env_output_dir(self, tmp_path, capsys, monkeypatch):
        monkeypatch.setenv(cli.OUTPUT_DIR_ENV, str(tmp_path))
        code, _ = run_cli(["export", "--surface", "plane", "--grid-n", "8", "--format", "csv"], capsys)
        assert code == 0 and (tmp_path / "export.csv").exists()

    def test_config_overrides_flags(self, tmp_path, capsys):
        cfg = tmp_path / "run.cfg"
        out = tmp_path / "from_cfg.json"
        cfg.write_text(f"# comment\ngrid_n = 16\noutput = {out}\ntol.alpha_reference = 0.5\n")
        code, _ = run_cli(["critical-catenoid", "--grid-n", "32", "--tol", "alpha_reference=1e-3",
                           "--config", str(cfg), "-o", str(tmp_path / "flag.json")], capsys)
        assert code == 0 and out.exists() and not (tmp_path / "flag.json").exists()
        rec = [r for r in json.loads(out.read_text())["records"] if r["name"] == "alpha_reference"][0]
        assert rec["tolerance"] == 0.5

    @pytest.mark.parametrize("argv", [
        ["critical-catenoid", "--tol", "alpha_reference=-1"],
        ["critical-catenoid", "--tol", "nonsense=1"],
        ["critical-catenoid", "--tol", "alpha_reference"],
        ["critical-catenoid", "--grid-n", "4"],
        ["export", "--format", "json"],
        ["spectral", "--kappa", "1"],
        ["frobnicate"],
    ])
    def test_config_errors(self, argv, tmp_path, capsys, monkeypatch):
        monkeypatch.chdir(tmp_path)
        try:
            code = cli.main(argv)
        except SystemExit as exc:
            code = exc.code
        assert code == cli.EXIT_CONFIG

    def test_bad_config_file(self, tmp_path, capsys):
        cfg = tmp_path / "bad.cfg"
        cfg.write_text("colour = blue\n")
        code, _ = run_cli(["herisson", "--config", str(cfg)], capsys)
        assert code == cli.EXIT_CONFIG

    def test_io_error(self, tmp_path, capsys):
        code, cap = run_cli(["critical-catenoid", "-o", str(tmp_path / "missing" / "x.json")], capsys)
        assert code == cli.EXIT_IO and "I/O error" in cap.err

    def test_verification_failure(self, tmp_path, capsys):
        code, cap = run_cli(["critical-catenoid", "--tol", "fb_sphere=1e-30", "-o",
                             str(tmp_path / "f.json")], capsys)
        assert code == cli.EXIT_FAIL and "[FAIL] fb_sphere" in cap.out

    def test_no_partial_file_on_failure(self, tmp_path):
        with pytest.raises(ValueError):
            write_mesh(np.full((2, 2, 3), np.inf), "obj", tmp_path / "bad.obj")
        assert list(tmp_path.iterdir()) == []
