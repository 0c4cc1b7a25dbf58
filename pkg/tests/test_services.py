import io
import json
from unittest.mock import patch

import numpy as np
import pytest


class TestMatrixIO:
    def test_parse_entries_document(self):
        from phkit.services.matrix_io import MatrixIO

        p = MatrixIO.parse_matrix({"entries": [[3, [1, -2]], [[1, 2], 3]]})

        assert p.h0_real == pytest.approx(3.0)
        assert np.allclose(p.h_real, [1, 2, 0])
        assert np.allclose(p.h_imag, 0.0)

    def test_parse_pauli_document(self):
        from phkit.services.matrix_io import MatrixIO

        p = MatrixIO.parse_matrix({"pauli": {"h0": [0, 0], "hR": [1, 1, 1], "hI": [0, -1, 1]}})

        assert np.allclose(p.h_imag, [0, -1, 1])
        assert p.h0_imag == 0.0

    def test_pauli_defaults(self):
        from phkit.services.matrix_io import MatrixIO

        p = MatrixIO.parse_matrix({"pauli": {"h0": 1}})

        assert p.h0_real == 1.0
        assert np.allclose(p.vector, 0.0)

    @pytest.mark.parametrize(
        "document",
        [
            [],
            {},
            {"entries": [[1, 2]]},
            {"entries": [[1, 2], [3, "x"]]},
            {"pauli": {"hR": [1, 2]}},
            {"pauli": {"hR": [1, True, 0]}},
            {"pauli": "S4"},
        ],
    )
    def test_malformed_documents(self, document):
        from phkit.exceptions import InvalidInputError
        from phkit.services.matrix_io import MatrixIO

        with pytest.raises(InvalidInputError):
            MatrixIO.parse_matrix(document)

    def test_read_missing_file(self, tmp_path):
        from phkit.exceptions import MatrixFileError
        from phkit.services.matrix_io import MatrixIO

        with pytest.raises(MatrixFileError):
            MatrixIO.read_matrix(str(tmp_path / "missing.json"))

    def test_read_invalid_json(self, tmp_path):
        from phkit.exceptions import MatrixFileError
        from phkit.services.matrix_io import MatrixIO

        path = tmp_path / "broken.json"
        path.write_text("{not json", encoding="utf-8")

        with pytest.raises(MatrixFileError):
            MatrixIO.read_json(str(path))

    def test_pauli_document_round_trip(self, write_json):
        from phkit.models import PauliForm
        from phkit.services.matrix_io import MatrixIO

        p = PauliForm(0.5, -0.25, [1 / 3, 0, 2], [0.1, 0.2, 0.3])
        path = write_json("p.json", {"pauli": p.to_dict()})
        loaded = MatrixIO.read_matrix(path)

        assert loaded.h0_real == p.h0_real
        assert loaded.h0_imag == p.h0_imag
        assert np.array_equal(loaded.vector, p.vector)

    def test_dumps_converts_numpy(self):
        from phkit.models import Symmetry
        from phkit.services.matrix_io import MatrixIO

        text = MatrixIO.dumps(
            {"a": np.arange(3), "b": np.float64(0.1), "c": Symmetry.BROKEN, "d": 1j}
        )

        assert json.loads(text) == {"a": [0, 1, 2], "b": 0.1, "c": "Broken", "d": [0.0, 1.0]}
        assert text.endswith("\n")

    def test_dumps_rejects_nan(self):
        from phkit.exceptions import InvalidInputError
        from phkit.services.matrix_io import MatrixIO

        with pytest.raises(InvalidInputError):
            MatrixIO.dumps({"x": float("nan")})

    def test_write_to_stream(self):
        from phkit.services.matrix_io import MatrixIO

        stream = io.StringIO()
        result = MatrixIO.write_json({"ok": True}, stream=stream)

        assert result is None
        assert json.loads(stream.getvalue()) == {"ok": True}

    def test_write_to_path(self, tmp_path):
        from phkit.services.matrix_io import MatrixIO

        path = tmp_path / "nested" / "out.json"
        MatrixIO.write_json({"ok": True}, str(path))

        assert json.loads(path.read_text(encoding="utf-8")) == {"ok": True}

    def test_write_failure(self, tmp_path):
        from phkit.exceptions import MatrixFileError
        from phkit.services.matrix_io import MatrixIO

        with patch(
            "phkit.services.matrix_io.open",
            side_effect=PermissionError("denied"),
            create=True,
        ):
            with pytest.raises(MatrixFileError):
                MatrixIO.write_text("x", str(tmp_path / "out.txt"))


class TestAnalysisService:
    def test_classify(self, run_config):
        from phkit.models import PauliForm
        from phkit.services.analysis_service import AnalysisService

        result = AnalysisService.classify(
            PauliForm(0.0, 0.0, [1, 1, 1], [0, -1, 1]), run_config
        )

        assert result["cell"] == "S4"
        assert result["symmetry"] == "Unbroken"
        assert result["eigenvalues"]["e1"] == pytest.approx([-1.0, 0.0])
        assert result["eigenvalues"]["e2"] == pytest.approx([1.0, 0.0])

    def test_ensemble_with_verification(self, run_config):
        from phkit.models import PauliForm
        from phkit.services.analysis_service import AnalysisService

        g = PauliForm(3.0, 0.0, [1, 2, 0], [0, 0, 0])
        result = AnalysisService.ensemble(g, run_config, params=[0.5, 1, 2, 3], verify=True)

        assert result["basis"]["cell"] == "G4"
        assert result["metric_class"]["det_sign"] == 1
        assert result["member"]["symmetry"] == "Unbroken"
        assert len(result["verification"]) == 4
        assert all(entry["ok"] for entry in result["verification"])

    def test_ensemble_pt_only(self, run_config):
        from phkit.models import PauliForm
        from phkit.services.analysis_service import AnalysisService

        g = PauliForm(1.0, 0.0, [0, 1, 0], [0, 0, 0])
        result = AnalysisService.ensemble(g, run_config, pt_only=True)

        assert result["basis"]["pt_restricted"] is True
        assert result["basis"]["pt_constraint"]["eliminated"] == "m4"

    def test_ensemble_rejects_non_hermitian_metric(self, run_config):
        from phkit.exceptions import NotHermitianError
        from phkit.models import PauliForm
        from phkit.services.analysis_service import AnalysisService

        with pytest.raises(NotHermitianError):
            AnalysisService.ensemble(PauliForm(1.0, 0.0, [0, 0, 0], [1, 0, 0]), run_config)

    def test_ensemble_verification_failure(self, run_config, mocker):
        from phkit.exceptions import VerificationError
        from phkit.models import PauliForm
        from phkit.services.analysis_service import AnalysisService

        mocker.patch(
            "phkit.services.analysis_service.PauliCore.pseudo_hermitian_residual",
            return_value=1.0,
        )

        with pytest.raises(VerificationError):
            AnalysisService.ensemble(
                PauliForm(3.0, 0.0, [1, 2, 0], [0, 0, 0]), run_config, verify=True
            )

    def test_common(self, run_config):
        from phkit.models import PauliForm
        from phkit.services.analysis_service import AnalysisService

        g = PauliForm(2.0, 0.0, [1, 0, 0], [0, 0, 0])
        f = PauliForm(2.0, 0.0, [0, 1, 0], [0, 0, 0])
        result = AnalysisService.common(g, f, run_config, verify=True)

        assert result["solution_space_dimension"] == 1
        assert all(entry["ok"] for entry in result["residuals"])
        assert result["quotient_commutator"] <= 1e-10

    def test_quadric_reference_metric(self, run_config):
        from phkit.services.analysis_service import AnalysisService
        from phkit.services.matrix_io import MatrixIO

        g = MatrixIO.parse_matrix({"entries": [[3, [1, -2]], [[1, 2], 3]]})
        result = AnalysisService.quadric(g, -1.0, run_config, samples=50, seed=4)

        assert result["class"] == "Ellipsoid"
        assert result["symmetry_fraction"] == 1.0
        assert result["seed"] == 4
        assert np.abs(np.array(result["A"]) - result["closed_form_A"]).max() <= 1e-10

    def test_quadric_uses_configured_seed(self, run_config):
        from phkit.models import PauliForm
        from phkit.services.analysis_service import AnalysisService

        g = PauliForm(0.5, 0.0, [0, 1, 0], [0, 0, 0])
        result = AnalysisService.quadric(g, 1.0, run_config, samples=20)

        assert result["class"] == "Hyperboloid1Sheet"
        assert result["seed"] == run_config.seed
        assert result["symmetry"]["predicted"] == "Broken"

    def test_quadric_empty_level_set_skips_sampling(self, run_config):
        from phkit.models import PauliForm
        from phkit.services.analysis_service import AnalysisService

        g = PauliForm(3.0, 0.0, [1, 2, 0], [0, 0, 0])
        result = AnalysisService.quadric(g, 1.0, run_config)

        assert result["class"] == "Empty"
        assert result["symmetry_fraction"] is None

    def test_inverse_mixed_matrix(self, run_config):
        from phkit.models import PauliForm
        from phkit.services.analysis_service import AnalysisService

        h = PauliForm(0.0, 0.0, [1, 1, 1], [0, -1, 1])
        result = AnalysisService.inverse(h, 1.0, run_config, verify=True)

        assert result["consistent"] is True
        assert result["solution_dimension"] == 1
        assert len(result["singular_points"]) == 2
        assert len(result["quadrics"]) == 6
        assert result["quadrics"][4]["class"] == "HyperbolicParaboloid"
        assert result["verification"]["samples"] == 32

    def test_inverse_without_solution(self, run_config):
        from phkit.models import PauliForm
        from phkit.services.analysis_service import AnalysisService

        h = PauliForm(0.0, 0.0, [0, 0, 0], [1, 1, 1])
        result = AnalysisService.inverse(h, 1.0, run_config)

        assert result["consistent"] is False
        assert result["solution_dimension"] == 0
        assert result["particular"] is None
        assert "message" in result

    def test_export_from_inverse_document(self, run_config):
        from phkit.models import GridSpec
        from phkit.services.analysis_service import AnalysisService

        document = {
            "quadrics": [
                {"index": 1, "A": np.eye(3).tolist(), "b": [0, 0, 0], "c": -1.0},
            ]
        }
        text = AnalysisService.export(
            document, run_config, grid=GridSpec.cube(-2, 2, 5), fmt="csv", index=1
        )

        assert text.splitlines()[0] == "x,y,z"
        assert len(text.splitlines()) > 1

    def test_export_field_from_quadric_document(self, run_config):
        from phkit.models import GridSpec
        from phkit.services.analysis_service import AnalysisService

        document = {"A": (-np.eye(3)).tolist(), "level": -1.0}
        text = AnalysisService.export(
            document, run_config, grid=GridSpec.cube(-1, 1, 3), fmt="json", field=True
        )
        data = json.loads(text)

        assert data["columns"] == ["x", "y", "z", "f"]
        assert len(data["rows"]) == 27

    def test_export_touching_level(self, run_config):
        from phkit.models import GridSpec
        from phkit.services.analysis_service import AnalysisService

        document = {"A": np.diag([-1.0, 0.0, 0.0]).tolist(), "level": 0.0}
        text = AnalysisService.export(
            document, run_config, grid=GridSpec.cube(-3, 3, 8), fmt="csv"
        )
        lines = text.splitlines()

        assert lines[0] == "x,y,z"
        assert len(lines) == 1 + 8 * 8

    def test_export_missing_index(self, run_config):
        from phkit.exceptions import InvalidInputError
        from phkit.services.analysis_service import AnalysisService

        with pytest.raises(InvalidInputError):
            AnalysisService.export({"quadrics": []}, run_config, index=2)
