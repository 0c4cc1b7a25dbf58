import numpy as np
import pytest


def _form(h_real, h_imag, h0_real=0.0, h0_imag=0.0):
    from phkit.models import PauliForm

    return PauliForm(h0_real, h0_imag, h_real, h_imag)


class TestPTClassifier:
    def test_hermitian_is_s1(self):
        from phkit.analyzers.classifier import PTClassifier

        cell = PTClassifier.classify(_form([1, 0, 0], [0, 0, 0]))

        assert cell.cell.value == "S1"
        assert cell.symmetry.value == "Unbroken"
        assert cell.spectrum.value == "RealDistinct"
        assert cell.normal is True

    def test_anti_hermitian_part_is_s2(self):
        from phkit.analyzers.classifier import PTClassifier

        cell = PTClassifier.classify(_form([0, 0, 0], [0, 0, 1], h0_real=0.5))

        assert cell.cell.value == "S2"
        assert cell.symmetry.value == "Broken"
        assert cell.spectrum.value == "ComplexConjugate"

    def test_scalar_is_s3(self):
        from phkit.analyzers.classifier import PTClassifier

        cell = PTClassifier.classify(_form([0, 0, 0], [0, 0, 0], h0_real=1.0))

        assert cell.cell.value == "S3"
        assert cell.spectrum.value == "RealDegenerate"

    def test_s4_unbroken_case(self):
        from phkit.analyzers.classifier import PTClassifier

        cell = PTClassifier.classify(_form([1, 1, 1], [0, -1, 1]))

        assert cell.cell.value == "S4"
        assert cell.symmetry.value == "Unbroken"
        assert cell.spectrum.value == "RealDistinct"
        assert cell.normal is False

    def test_s4_broken(self):
        from phkit.analyzers.classifier import PTClassifier

        cell = PTClassifier.classify(_form([1, 0, 0], [0, 2, 0]))

        assert cell.cell.value == "S4"
        assert cell.symmetry.value == "Broken"
        assert cell.spectrum.value == "ComplexConjugate"

    def test_s4_exceptional_point(self):
        from phkit.analyzers.classifier import PTClassifier

        cell = PTClassifier.classify(_form([1, 0, 0], [0, 1, 0]))

        assert cell.cell.value == "S4"
        assert cell.symmetry.value == "Unbroken"
        assert cell.spectrum.value == "RealDegenerate"
        assert cell.diagonalizable is False

    def test_imaginary_trace_is_not_pt(self):
        from phkit.analyzers.classifier import PTClassifier

        cell = PTClassifier.classify(_form([1, 0, 0], [0, 0, 0], h0_imag=1.0))

        assert cell.cell.value == "NotPT"
        assert cell.symmetry.value == "NotApplicable"
        assert cell.spectrum.value == "Complex"

    def test_non_orthogonal_parts_not_pt(self):
        from phkit.analyzers.classifier import PTClassifier

        assert PTClassifier.is_pt_symmetric(_form([1, 0, 0], [1, 0, 0])) is False

    def test_pt_iff_real_characteristic_polynomial(self, rng):
        from phkit.analyzers.classifier import PTClassifier
        from phkit.models import PTCellKind

        for i in range(500):
            h_real = rng.normal(size=3)
            h_imag = rng.normal(size=3)
            if i % 2 == 0:
                h_imag -= (h_imag @ h_real) / (h_real @ h_real) * h_real
            p = _form(h_real, h_imag, h0_real=rng.normal())
            c1, c0 = PTClassifier.characteristic_coefficients(p)
            real_polynomial = abs(c1.imag) <= 1e-9 and abs(c0.imag) <= 1e-9

            assert (PTClassifier.classify(p).cell != PTCellKind.NOT_PT) == real_polynomial


class TestGPropositions:
    def test_s1_commutes_with_parallel_metric(self):
        from phkit.analyzers.classifier import PTClassifier
        from phkit.analyzers.metric_forms import MetricForms

        g = MetricForms.from_components(2.0, [1.0, 1.0, 1.0])
        report = PTClassifier.check_g_propositions(_form([1, 1, 1], [0, 0, 0]), g)

        assert report.cell.value == "S1"
        assert report.checks["s1_commutes_with_metric"] is True
        assert report.all_hold

    @pytest.mark.parametrize("d", [0.0, 1.0, -2.5])
    def test_s1_metrics_parallel_to_real_part(self, d, rng):
        from phkit.analyzers.classifier import PTClassifier
        from phkit.analyzers.inverse_solver import InverseSolver

        for _ in range(200):
            h_real = rng.uniform(-2, 2, 3)
            p = _form(h_real, [0.0, 0.0, 0.0], rng.uniform(-1, 1))
            solution = InverseSolver.solve_metrics(p, d)

            assert PTClassifier.classify(p).cell.value == "S1"
            assert solution.dimension == 1
            for value in rng.uniform(-3, 3, 3):
                g = InverseSolver.member(solution, [value])
                cross = np.linalg.norm(np.cross(g.g_real, h_real))
                scale = max(1.0, np.linalg.norm(g.g_real)) * np.linalg.norm(h_real)

                assert cross <= 1e-10 * scale
                report = PTClassifier.check_g_propositions(p, g)
                assert report.checks["s1_commutes_with_metric"] is True

    def test_s2_forces_traceless_metric(self):
        from phkit.analyzers.classifier import PTClassifier
        from phkit.analyzers.metric_forms import MetricForms

        g = MetricForms.from_components(0.0, [1.0, -1.0, 0.0])
        report = PTClassifier.check_g_propositions(_form([0, 0, 0], [1, 1, 1]), g)

        assert report.checks["s2_traceless_metric"] is True
        assert report.checks["pt_orthogonal_metric"] is True

    def test_s4_compatible_pair(self):
        from phkit.analyzers.classifier import PTClassifier
        from phkit.analyzers.metric_forms import MetricForms

        # gR = (0, 1, 1) lies on the metric line of this matrix at d = 1
        g = MetricForms.from_components(1.0, [0.0, 1.0, 1.0])
        report = PTClassifier.check_g_propositions(_form([1, 1, 1], [0, -1, 1]), g)

        assert report.cell.value == "S4"
        assert report.checks["s4_cross_iff_traceless"] is True
        assert report.checks["s4_angle_law"] is True
        assert report.details["angle_sine"] == pytest.approx(
            report.details["angle_sine_predicted"]
        )
        assert report.all_hold

    def test_incompatible_pair_raises(self):
        from phkit.analyzers.classifier import PTClassifier
        from phkit.analyzers.metric_forms import MetricForms
        from phkit.exceptions import PairNotCompatibleError

        g = MetricForms.from_components(0.0, [0.0, 1.0, 0.0])

        with pytest.raises(PairNotCompatibleError):
            PTClassifier.check_g_propositions(_form([1, 0, 0], [0, 0, 0]), g)

    def test_inapplicable_checks_are_none(self):
        from phkit.analyzers.classifier import PTClassifier
        from phkit.analyzers.metric_forms import MetricForms

        g = MetricForms.from_components(2.0, [1.0, 0.0, 0.0])
        report = PTClassifier.check_g_propositions(_form([3, 0, 0], [0, 0, 0]), g)

        assert report.checks["s4_angle_law"] is None
        assert "s4_angle_law" not in report.applicable
        assert np.isclose(report.details["residual"], 0.0)
