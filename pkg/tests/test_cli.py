import json
import math

import numpy as np
import pytest

from proctensor import (
    DensityMatrix,
    build_from_circuit,
    cnot_swap_process,
    kron,
    max_entangled_state,
    maximally_mixed,
)
from proctensor.channels import swap_unitary
from proctensor.cli import main
from proctensor.io import (
    SpecFileError,
    complex_to_pairs,
    load_choi,
    load_process_spec,
    save_choi,
)

LN2 = math.log(2)


def cnot_swap_spec_doc() -> dict:
    cnot = np.array(
        [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=float
    )
    return {
        "n": 2,
        "d": 2,
        "d_env": 2,
        "env": complex_to_pairs(np.diag([1.0, 0.0])),
        "unitaries": [complex_to_pairs(cnot), complex_to_pairs(swap_unitary(2))],
    }


class TestSpecFile:
    def test_roundtrip_build(self, tmp_path):
        path = tmp_path / "proc.json"
        path.write_text(json.dumps(cnot_swap_spec_doc()))
        spec = load_process_spec(path)
        pt = build_from_circuit(spec)
        assert np.max(np.abs(pt.state.mat - cnot_swap_process().state.mat)) <= 1e-12

    def test_missing_field_named(self, tmp_path):
        doc = cnot_swap_spec_doc()
        del doc["unitaries"]
        path = tmp_path / "bad.json"
        path.write_text(json.dumps(doc))
        with pytest.raises(SpecFileError, match="unitaries"):
            load_process_spec(path)

    def test_non_unitary_named(self, tmp_path):
        doc = cnot_swap_spec_doc()
        doc["unitaries"][0] = complex_to_pairs(np.ones((4, 4)))
        path = tmp_path / "bad.json"
        path.write_text(json.dumps(doc))
        with pytest.raises(SpecFileError, match="unitaries"):
            load_process_spec(path)

    def test_env_init_variants(self, tmp_path):
        doc = cnot_swap_spec_doc()
        del doc["env"]
        doc["env_init"] = "pure-ground"
        path = tmp_path / "proc.json"
        path.write_text(json.dumps(doc))
        spec = load_process_spec(path)
        assert np.allclose(spec.env_state.mat, np.diag([1.0, 0.0]))


class TestChoiFile:
    def test_roundtrip(self, tmp_path):
        pt = cnot_swap_process()
        path = tmp_path / "choi.txt"
        save_choi(pt.state, path)
        loaded = load_choi(path)
        assert loaded.dims == pt.state.dims
        assert np.array_equal(loaded.mat, pt.state.mat)

    def test_bad_header(self, tmp_path):
        path = tmp_path / "junk.txt"
        path.write_text("not a choi file\n")
        with pytest.raises(SpecFileError):
            load_choi(path)


class TestSweepCommand:
    def test_endpoints_and_monotonicity(self, tmp_path):
        out = tmp_path / "sweep.csv"
        assert main(["sweep-depolarizing", "--d", "2,3", "--grid", "21", "--out", str(out)]) == 0
        lines = out.read_text().splitlines()
        assert lines[0] == "d,p,M_nats"
        assert len(lines) == 1 + 2 * 21
        rows = [[float(x) for x in ln.split(",")] for ln in lines[1:]]
        for d in (2, 3):
            col = [r[2] for r in rows if r[0] == d]
            assert col[0] == pytest.approx(2 * math.log(d), abs=1e-9)
            assert col[-1] == pytest.approx(0.0, abs=1e-9)
            assert all(col[k + 1] <= col[k] + 1e-10 for k in range(len(col) - 1))

    def test_byte_stable(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        main(["sweep-depolarizing", "--d", "2", "--grid", "11", "--out", str(a)])
        main(["sweep-depolarizing", "--d", "2", "--grid", "11", "--out", str(b)])
        assert a.read_bytes() == b.read_bytes()


class TestEmitFigureCommand:
    def test_fig6_values(self, tmp_path):
        out = tmp_path / "fig6.csv"
        assert main(["emit-figure", "--figure", "fig6", "--grid", "11", "--out", str(out)]) == 0
        lines = out.read_text().splitlines()
        assert lines[0] == "p,M1,M2,N,I"
        rows = [[float(x) for x in ln.split(",")] for ln in lines[1:]]
        first, last = rows[0], rows[-1]
        assert first[1:] == pytest.approx([2 * LN2, 2 * LN2, 0.0, 4 * LN2], abs=1e-8)
        assert last[1:] == pytest.approx([0.0, 0.0, 2 * LN2, 2 * LN2], abs=1e-8)
        for r in rows:
            assert r[1] == pytest.approx(r[2], abs=1e-8)

    def test_fig2_delegates(self, tmp_path):
        out = tmp_path / "fig2.csv"
        assert main(["emit-figure", "--figure", "fig2", "--d", "2", "--grid", "5", "--out", str(out)]) == 0
        assert out.read_text().splitlines()[0] == "d,p,M_nats"


class TestAnalyzeCommand:
    def test_cnot_swap_report(self, tmp_path):
        spec_path = tmp_path / "proc.json"
        spec_path.write_text(json.dumps(cnot_swap_spec_doc()))
        out = tmp_path / "report.txt"
        assert main(["analyze", "--in", str(spec_path), "--out", str(out)]) == 0
        text = out.read_text()
        assert f"non_markov = {2 * LN2!r}" in text or "non_markov = 1.386294" in text
        assert "bounds_pass = True" in text
        assert "causality_pass = True" in text

    def test_identity_two_step(self, tmp_path):
        doc = cnot_swap_spec_doc()
        ident = complex_to_pairs(np.eye(4))
        doc["unitaries"] = [ident, ident]
        spec_path = tmp_path / "proc.json"
        spec_path.write_text(json.dumps(doc))
        out = tmp_path / "report.txt"
        assert main(["analyze", "--in", str(spec_path), "--out", str(out)]) == 0
        fields = dict(
            ln.split(" = ") for ln in out.read_text().splitlines() if " = " in ln
        )
        assert float(fields["non_markov"]) == pytest.approx(0.0, abs=1e-8)
        assert float(fields["total"]) == pytest.approx(4 * LN2, abs=1e-8)

    def test_malformed_spec_exit_two(self, tmp_path, capsys):
        doc = cnot_swap_spec_doc()
        doc["unitaries"][0] = complex_to_pairs(np.ones((4, 4)))
        spec_path = tmp_path / "bad.json"
        spec_path.write_text(json.dumps(doc))
        assert main(["analyze", "--in", str(spec_path)]) == 2
        assert "unitaries" in capsys.readouterr().err


class TestAuditRandomCommand:
    def test_zero_violations_and_determinism(self, tmp_path):
        args = ["audit-random", "--n", "2", "--d", "2", "--denv", "3",
                "--samples", "10", "--seed", "42"]
        a, b = tmp_path / "a.txt", tmp_path / "b.txt"
        assert main(args + ["--out", str(a)]) == 0
        assert main(args + ["--out", str(b)]) == 0
        assert a.read_bytes() == b.read_bytes()
        assert "violations = 0" in a.read_text()

    def test_single_step_nonmarkov_is_zero(self, tmp_path):
        out = tmp_path / "n1.txt"
        assert main(["audit-random", "--n", "1", "--d", "2", "--denv", "3",
                     "--samples", "5", "--seed", "7", "--out", str(out)]) == 0
        assert "violations = 0" in out.read_text()


class TestVerifyCommand:
    def test_spec_file_passes(self, tmp_path):
        spec_path = tmp_path / "proc.json"
        spec_path.write_text(json.dumps(cnot_swap_spec_doc()))
        assert main(["verify", "--in", str(spec_path)]) == 0

    def test_entangled_choi_fails(self, tmp_path, capsys):
        phi = max_entangled_state(4)
        bad = DensityMatrix(phi.mat, (2, 2, 2, 2))
        path = tmp_path / "bad_choi.txt"
        save_choi(bad, path)
        assert main(["verify", "--in", str(path)]) == 1
        assert "causality_pass = False" in capsys.readouterr().out

    def test_all_mixed_choi_passes(self, tmp_path):
        path = tmp_path / "mixed.txt"
        save_choi(maximally_mixed((2, 2, 2, 2)), path)
        assert main(["verify", "--in", str(path)]) == 0
