import logging

import numpy as np

from phkit.analyzers.classifier import PTClassifier
from phkit.analyzers.ensemble_solver import EnsembleSolver
from phkit.analyzers.inverse_solver import InverseSolver
from phkit.analyzers.metric_forms import MetricForms
from phkit.analyzers.pauli_core import PauliCore
from phkit.analyzers.quadric_forms import QuadricForms
from phkit.exceptions import (
    InvalidInputError,
    NoSolutionError,
    VerificationError,
)
from phkit.models import GridSpec, MetricCell, QuadraticSurface
from phkit.services.export_service import ExportService

logger = logging.getLogger(__name__)

SAMPLEABLE_LEVEL_SETS = {
    "Ellipsoid",
    "Point",
    "Hyperboloid1Sheet",
    "Hyperboloid2Sheets",
    "QuadricCone",
    "TwoParallelPlanes",
    "SinglePlane",
}


def _frobenius(p):
    return float(np.linalg.norm(PauliCore.compose(p)))


class AnalysisService:
    @staticmethod
    def classify(p, run_config):
        cell = PTClassifier.classify(p, run_config.tolerance)
        eigenvalues = PauliCore.eigenvalues(p)
        return {
            **cell.to_dict(),
            "eigenvalues": eigenvalues.to_dict(),
            "matrix": p.to_dict(),
        }

    @staticmethod
    def _residual_entry(name, h, metric, tol):
        residual = PauliCore.pseudo_hermitian_residual(h, metric)
        bound = tol.band(_frobenius(h) * _frobenius(metric.to_pauli()))
        return {"name": name, "residual": residual, "bound": bound, "ok": residual <= bound}

    @staticmethod
    def _raise_on_failure(entries, what):
        failed = [entry["name"] for entry in entries if not entry["ok"]]
        if failed:
            raise VerificationError(f"{what} verification failed for: {', '.join(failed)}")

    @staticmethod
    def ensemble(g_form, run_config, pt_only=False, params=None, verify=False, numeric=False):
        tol = run_config.tolerance
        metric = MetricForms.from_pauli(g_form, tol)
        basis = EnsembleSolver.solve(
            metric, run_config.switchover, run_config.rank_cutoff, numeric=numeric
        )
        if pt_only:
            basis = EnsembleSolver.pt_restrict(basis, tol)

        result = {
            "metric": metric.to_dict(),
            "metric_class": MetricForms.det_trace_class(metric, tol).to_dict(),
            "basis": basis.to_dict(),
            "membership": [
                cell.to_dict() for cell in EnsembleSolver.membership(basis, tol)
            ],
        }

        member = None
        if params is not None:
            member = EnsembleSolver.generate_h(basis, params, tol)
            result["member"] = {
                "matrix": member.to_dict(),
                **PTClassifier.classify(member, tol).to_dict(),
            }

        if verify:
            entries = []
            for i, name in enumerate(basis.free_params):
                weights = np.zeros(basis.param_count)
                weights[i + (1 if basis.includes_trace_param else 0)] = 1.0
                h = EnsembleSolver.generate_h(basis, weights, tol)
                entries.append(AnalysisService._residual_entry(name, h, metric, tol))
            if member is not None:
                entries.append(AnalysisService._residual_entry("member", member, metric, tol))
            result["verification"] = entries
            AnalysisService._raise_on_failure(entries, "Ensemble")

        return result

    @staticmethod
    def common(g_form, f_form, run_config, verify=False):
        tol = run_config.tolerance
        g = MetricForms.from_pauli(g_form, tol)
        f = MetricForms.from_pauli(f_form, tol)
        h = EnsembleSolver.common_pseudo_h(g, f, tol)
        space = EnsembleSolver.common_solution_space([g, f], run_config.rank_cutoff)

        result = {
            "matrix": h.to_dict(),
            **PTClassifier.classify(h, tol).to_dict(),
            "solution_space_dimension": int(space.shape[0]),
            "g1": g.to_dict(),
            "g2": f.to_dict(),
        }
        entries = [
            AnalysisService._residual_entry("g1", h, g, tol),
            AnalysisService._residual_entry("g2", h, f, tol),
        ]
        result["residuals"] = entries

        if not g.singular and not f.singular:
            quotient = np.linalg.solve(MetricForms.to_matrix(g), MetricForms.to_matrix(f))
            h_matrix = PauliCore.compose(h)
            commutator = h_matrix @ quotient - quotient @ h_matrix
            result["quotient_commutator"] = float(np.linalg.norm(commutator))

        if verify:
            if space.shape[0] != 1:
                raise VerificationError(
                    f"common solution space has dimension {space.shape[0]}, expected 1"
                )
            AnalysisService._raise_on_failure(entries, "Common matrix")
        return result

    @staticmethod
    def quadric(g_form, level, run_config, samples=None, seed=None):
        tol = run_config.tolerance
        metric = MetricForms.from_pauli(g_form, tol)
        basis = EnsembleSolver.solve(metric, run_config.switchover, run_config.rank_cutoff)
        basis = EnsembleSolver.pt_restrict(basis, tol)
        form = QuadricForms.det_form(basis, tol)
        kind = QuadricForms.classify_level_set(form, level, tol)

        result = {
            "metric": metric.to_dict(),
            "metric_class": MetricForms.det_trace_class(metric, tol).to_dict(),
            **form.to_dict(),
            "level": float(level),
            "class": kind.value,
            "basis": basis.to_dict(),
        }
        if basis.source == "closed_form" and metric.cell != MetricCell.SCALAR:
            result["closed_form_A"] = QuadricForms.closed_form_a(metric).tolist()

        samples = run_config.symmetry_samples if samples is None else samples
        seed = run_config.seed if seed is None else seed
        result["seed"] = int(seed)
        result["symmetry_fraction"] = None
        if kind.value in SAMPLEABLE_LEVEL_SETS:
            stats = QuadricForms.symmetry_report(form, level, samples, seed, tol)
            result["symmetry"] = stats.to_dict()
            result["symmetry_fraction"] = stats.fraction
        else:
            logger.info(f"Skipping symmetry sampling on {kind.value} level set")
        return result

    @staticmethod
    def inverse(h_form, d, run_config, verify=False, samples=32, seed=None):
        tol = run_config.tolerance
        quadrics = InverseSolver.build_six_quadrics(h_form, d, tol)
        entries = [
            {**surface.to_dict(), "class": InverseSolver.classify_quadric(surface, tol).value}
            for surface in quadrics
        ]

        try:
            solution = InverseSolver.solve_metrics(h_form, d, tol, run_config.rank_cutoff)
        except NoSolutionError as e:
            logger.info(f"Inverse problem has no solution: {str(e)}")
            return {
                "d": float(d),
                "solution_dimension": 0,
                "basis": [],
                "particular": None,
                "singular_points": [],
                "consistent": False,
                "message": str(e),
                "quadrics": entries,
            }

        result = {**solution.to_dict(), "consistent": True, "quadrics": entries}
        if solution.dimension == 0 and solution.particular is None:
            result["message"] = "only the zero metric solves the system"

        if verify:
            seed = run_config.seed if seed is None else seed
            rng = np.random.default_rng(seed)
            checks = []
            for draw in range(samples):
                params = rng.uniform(-2.0, 2.0, solution.dimension)
                member = InverseSolver.member(solution, params, tol)
                if member.is_zero:
                    continue
                residuals = InverseSolver.surface_residuals(h_form, d, member)
                scale = max(h_form.scale, 1.0) * max(member.scale, 1.0) ** 2
                entry = AnalysisService._residual_entry(f"sample{draw}", h_form, member, tol)
                entry["surface_residual"] = float(np.abs(residuals).max())
                entry["ok"] = entry["ok"] and tol.is_zero(entry["surface_residual"], scale)
                checks.append(entry)
            result["verification"] = {
                "seed": int(seed),
                "samples": len(checks),
                "max_residual": max((c["residual"] for c in checks), default=0.0),
                "max_surface_residual": max(
                    (c["surface_residual"] for c in checks), default=0.0
                ),
            }
            AnalysisService._raise_on_failure(checks, "Inverse solution")
        return result

    @staticmethod
    def surface_from_document(document, index=None):
        if not isinstance(document, dict):
            raise InvalidInputError("surface document must be a JSON object")
        try:
            if "quadrics" in document:
                index = 1 if index is None else int(index)
                matches = [q for q in document["quadrics"] if int(q["index"]) == index]
                if not matches:
                    raise InvalidInputError(f"no quadric with index {index} in document")
                entry = matches[0]
                return QuadraticSurface(entry["A"], entry["b"], entry["c"], index), 0.0
            if "A" in document:
                level = float(document.get("level", 0.0))
                return QuadraticSurface(document["A"], np.zeros(3), 0.0), level
        except (KeyError, TypeError) as e:
            raise InvalidInputError(f"malformed surface document: {str(e)}")
        raise InvalidInputError('surface document needs "quadrics" or "A"')

    @staticmethod
    def export(document, run_config, level=None, grid=None, fmt="csv", index=None, field=False):
        surface, document_level = AnalysisService.surface_from_document(document, index)
        level = document_level if level is None else float(level)
        if grid is None:
            grid = GridSpec.cube(
                run_config.grid_min, run_config.grid_max, run_config.grid_resolution
            )

        table = ExportService.sample_scalar_field(
            surface, grid, run_config.export_workers, run_config.max_grid_points
        )
        if field:
            return ExportService.render(table.rows(), ("x", "y", "z", "f"), fmt)

        points = ExportService.extract_isosurface_points(table, level, run_config.tolerance)
        if len(points) == 0:
            logger.warning(f"Level {level} is not reached on the grid; no points emitted")
        elif not table.has_sign_change(level):
            logger.info(f"Level {level} touches the grid without crossing it")
        return ExportService.render(points, ("x", "y", "z"), fmt)

