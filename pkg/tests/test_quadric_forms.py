import numpy as np
import pytest


def _restricted_form(d, g_real):
    from phkit.analyzers.ensemble_solver import EnsembleSolver
    from phkit.analyzers.metric_forms import MetricForms
    from phkit.analyzers.quadric_forms import QuadricForms

    metric = MetricForms.from_components(d, g_real)
    basis = EnsembleSolver.pt_restrict(EnsembleSolver.solve(metric))
    return metric, QuadricForms.det_form(basis)


class TestDetForm:
    def test_positive_determinant_metric(self):
        metric, form = _restricted_form(3.0, [1.0, 2.0, 0.0])

        expected = [[-1.25, 0.0, -0.75], [0.0, -4.0, 0.0], [-0.75, 0.0, -1.25]]
        assert np.abs(form.a - expected).max() <= 1e-10
        assert np.allclose(form.eigenvalues, [-4.0, -2.0, -0.5])
        assert form.param_names == ("k1", "k2", "k3")

    def test_negative_determinant_metric(self):
        _, form = _restricted_form(0.5, [0.0, 1.0, 0.0])

        assert np.abs(form.a - np.diag([-1.0, 0.75, 0.75])).max() <= 1e-10

    def test_traceless_g7(self):
        _, form = _restricted_form(0.0, [0.0, 0.0, 1.0])

        assert np.allclose(form.a, np.diag([-1.0, 1.0, 1.0]))

    def test_singular_g4_is_rank_one(self):
        _, form = _restricted_form(np.sqrt(5.0), [1.0, 2.0, 0.0])

        q = np.array([np.sqrt(5.0), 0.0, 1.0]) / 2
        assert np.abs(form.a + np.outer(q, q)).max() <= 1e-10

    def test_singular_g6(self):
        _, form = _restricted_form(1.0, [0.0, 1.0, 0.0])

        assert np.abs(form.a - np.diag([-1.0, 0.0, 0.0])).max() <= 1e-10

    def test_unrestricted_singular_basis_rejected(self):
        from phkit.analyzers.ensemble_solver import EnsembleSolver
        from phkit.analyzers.metric_forms import MetricForms
        from phkit.analyzers.quadric_forms import QuadricForms
        from phkit.exceptions import DimensionMismatchError

        basis = EnsembleSolver.solve(MetricForms.from_components(1.0, [0.0, 1.0, 0.0]))

        with pytest.raises(DimensionMismatchError):
            QuadricForms.det_form(basis)

    def test_polarization_matches_determinant(self, rng, metric_factory):
        from phkit.analyzers.ensemble_solver import EnsembleSolver
        from phkit.analyzers.quadric_forms import QuadricForms

        for cell in ("G1", "G2", "G3", "G4", "G5", "G6", "G7"):
            metric = metric_factory(cell, rng)
            basis = EnsembleSolver.solve(metric)
            form = QuadricForms.det_form(basis)
            v = rng.uniform(-1, 1, 3)
            member = EnsembleSolver.generate_h(basis, np.concatenate([[0.0], v]))
            scale = max(1.0, np.abs(form.a).max())

            assert abs(member.det.real - form.evaluate(v)[0]) <= 1e-10 * scale


class TestClosedFormA:
    @pytest.mark.parametrize("cell", ["G1", "G2", "G3", "G4", "G5", "G6", "G7"])
    @pytest.mark.parametrize("kind", ["invertible", "traceless", "singular"])
    def test_agrees_with_extraction(self, cell, kind, rng, metric_factory):
        from phkit.analyzers.ensemble_solver import EnsembleSolver
        from phkit.analyzers.quadric_forms import QuadricForms

        for _ in range(20):
            metric = metric_factory(cell, rng, kind)
            basis = EnsembleSolver.pt_restrict(EnsembleSolver.closed_form_basis(metric))
            extracted = QuadricForms.det_form(basis).a
            closed = QuadricForms.closed_form_a(metric)
            scale = max(1.0, np.abs(closed).max())

            assert np.abs(extracted - closed).max() <= 1e-10 * scale

    def test_g1_determinant_identity(self, rng, metric_factory):
        from phkit.analyzers.quadric_forms import QuadricForms

        for kind in ("invertible", "traceless"):
            for _ in range(500):
                metric = metric_factory("G1", rng, kind)
                a, _, c = metric.g_real
                expected = -(metric.det**2) / (a * a * c * c)
                det = np.linalg.det(QuadricForms.closed_form_a(metric))

                assert det == pytest.approx(expected, rel=1e-10)

    def test_g5_closed_form(self):
        from phkit.analyzers.metric_forms import MetricForms
        from phkit.analyzers.quadric_forms import QuadricForms

        a = QuadricForms.closed_form_a(MetricForms.from_components(1.0, [2.0, 0, 0]))

        assert np.allclose(a, np.diag([-1.0, 0.75, 0.75]))

    def test_scalar_metric_rejected(self):
        from phkit.analyzers.metric_forms import MetricForms
        from phkit.analyzers.quadric_forms import QuadricForms
        from phkit.exceptions import CellMismatchError

        with pytest.raises(CellMismatchError):
            QuadricForms.closed_form_a(MetricForms.from_components(1.0, [0, 0, 0]))


class TestClassifyLevelSet:
    def test_ellipsoid(self):
        from phkit.analyzers.quadric_forms import QuadricForms

        _, form = _restricted_form(3.0, [1.0, 2.0, 0.0])

        assert QuadricForms.classify_level_set(form, -1.0).value == "Ellipsoid"
        assert QuadricForms.classify_level_set(form, 0.0).value == "Point"
        assert QuadricForms.classify_level_set(form, 1.0).value == "Empty"

    def test_hyperboloid_family(self):
        from phkit.analyzers.quadric_forms import QuadricForms

        _, form = _restricted_form(0.5, [0.0, 1.0, 0.0])
        kinds = [QuadricForms.classify_level_set(form, level).value for level in (-1, 0, 1)]

        assert kinds == ["Hyperboloid2Sheets", "QuadricCone", "Hyperboloid1Sheet"]

    def test_singular_planes(self):
        from phkit.analyzers.quadric_forms import QuadricForms

        _, form = _restricted_form(np.sqrt(5.0), [1.0, 2.0, 0.0])

        assert QuadricForms.classify_level_set(form, -1.0).value == "TwoParallelPlanes"
        assert QuadricForms.classify_level_set(form, 0.0).value == "SinglePlane"
        assert QuadricForms.classify_level_set(form, 1.0).value == "Empty"

    def test_scalar_metric_form(self):
        from phkit.analyzers.quadric_forms import QuadricForms

        _, form = _restricted_form(2.0, [0.0, 0.0, 0.0])

        assert np.allclose(form.a, -np.eye(3))
        assert QuadricForms.classify_level_set(form, -1.0).value == "Ellipsoid"

    def test_sign_dichotomy(self, rng, metric_factory):
        from phkit.analyzers.ensemble_solver import EnsembleSolver
        from phkit.analyzers.quadric_forms import QuadricForms

        for cell in ("G1", "G2", "G3", "G4", "G5", "G6", "G7"):
            for _ in range(1430):
                positive = metric_factory(cell, rng, "positive")
                negative = metric_factory(cell, rng, "negative")
                pos_signs = QuadricForms.signature(
                    QuadricForms.det_form(EnsembleSolver.solve(positive))
                )
                neg_signs = QuadricForms.signature(
                    QuadricForms.det_form(EnsembleSolver.solve(negative))
                )

                assert pos_signs == (-1, -1, -1)
                assert sorted(neg_signs) == [-1, 1, 1]


class TestSymmetryReport:
    def test_ellipsoid_is_unbroken(self):
        from phkit.analyzers.quadric_forms import QuadricForms

        _, form = _restricted_form(3.0, [1.0, 2.0, 0.0])
        stats = QuadricForms.symmetry_report(form, -1.0, 200, seed=7)

        assert stats.predicted.value == "Unbroken"
        assert stats.fraction == 1.0
        assert stats.seed == 7

    @pytest.mark.parametrize(
        "level,predicted",
        [(-1.0, "Unbroken"), (0.0, "Unbroken"), (1.0, "Broken")],
    )
    def test_hyperboloid_levels(self, level, predicted):
        from phkit.analyzers.quadric_forms import QuadricForms

        _, form = _restricted_form(0.5, [0.0, 1.0, 0.0])
        stats = QuadricForms.symmetry_report(form, level, 500, seed=12345)

        assert stats.predicted.value == predicted
        assert stats.matched == 500
        assert stats.counts == {predicted: 500}

    def test_singular_planes_unbroken(self):
        from phkit.analyzers.quadric_forms import QuadricForms

        _, form = _restricted_form(1.0, [0.0, 1.0, 0.0])
        stats = QuadricForms.symmetry_report(form, -1.0, 100, seed=3)

        assert stats.kind.value == "TwoParallelPlanes"
        assert stats.fraction == 1.0

    def test_points_lie_on_level_set(self, rng):
        from phkit.analyzers.quadric_forms import QuadricForms

        _, form = _restricted_form(0.5, [0.0, 1.0, 0.0])
        points = QuadricForms.level_set_points(form, 1.0, 50, rng)

        assert np.allclose(form.evaluate(points), 1.0)

    @pytest.mark.parametrize("level", [-1.0, 0.0, 1.0])
    def test_points_with_two_negative_directions(self, level, rng):
        from phkit.analyzers.quadric_forms import QuadricForms
        from phkit.models import DetForm, MetricCell

        eigenvalues = np.array([-1.0, -2.0, 0.5])
        form = DetForm(
            a=np.diag(eigenvalues),
            param_names=("k1", "k2", "k3"),
            eigenvalues=eigenvalues,
            eigenvectors=np.eye(3),
            source_cell=MetricCell.G1,
        )
        points = QuadricForms.level_set_points(form, level, 50, rng)

        assert points.shape == (50, 3)
        assert np.abs(form.evaluate(points) - level).max() <= 1e-9

    def test_empty_level_set(self, rng):
        from phkit.analyzers.quadric_forms import QuadricForms
        from phkit.exceptions import EmptyLevelSetError

        _, form = _restricted_form(3.0, [1.0, 2.0, 0.0])

        with pytest.raises(EmptyLevelSetError):
            QuadricForms.symmetry_report(form, 1.0, 10)

    def test_same_seed_same_counts(self):
        from phkit.analyzers.quadric_forms import QuadricForms

        _, form = _restricted_form(0.5, [0.0, 1.0, 0.0])

        first = QuadricForms.symmetry_report(form, 1.0, 50, seed=99)
        second = QuadricForms.symmetry_report(form, 1.0, 50, seed=99)

        assert first.to_dict() == second.to_dict()
