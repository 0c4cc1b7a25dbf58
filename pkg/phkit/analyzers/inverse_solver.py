import logging

import numpy as np

from phkit.analyzers.classifier import PTClassifier
from phkit.analyzers.metric_forms import MetricForms
from phkit.analyzers.pauli_core import PauliCore
from phkit.analyzers.quadric_classifier import QuadricClassifier
from phkit.exceptions import DomainError, NoSolutionError, NotPTSymmetricError
from phkit.models import GSolutionSet, PauliForm, QuadraticSurface
from phkit.utils.numerics import (
    DEFAULT_RANK_CUTOFF,
    DEFAULT_TOLERANCE,
    linear_map_matrix,
    rank_from_singular_values,
    realify,
)

logger = logging.getLogger(__name__)


def _quadric_coefficients(p, d):
    h1r, h2r, h3r = (float(x) for x in p.h_real)
    h1i, h2i, h3i = (float(x) for x in p.h_imag)
    d2 = d * d
    return [
        (
            [[0.0, -h2r / 2, -h3r / 2], [-h2r / 2, h1r, 0.0], [-h3r / 2, 0.0, h1r]],
            [0.0, -d * h3i, d * h2i],
            0.0,
        ),
        (
            [[h2r, -h1r / 2, 0.0], [-h1r / 2, 0.0, -h3r / 2], [0.0, -h3r / 2, h2r]],
            [d * h3i, 0.0, -d * h1i],
            0.0,
        ),
        (
            [[h3r, 0.0, -h1r / 2], [0.0, h3r, -h2r / 2], [-h1r / 2, -h2r / 2, 0.0]],
            [-d * h2i, d * h1i, 0.0],
            0.0,
        ),
        (
            [[-h1i, -h2i / 2, -h3i / 2], [-h2i / 2, 0.0, 0.0], [-h3i / 2, 0.0, 0.0]],
            [0.0, d * h3r, -d * h2r],
            h1i * d2,
        ),
        (
            [[0.0, -h1i / 2, 0.0], [-h1i / 2, -h2i, -h3i / 2], [0.0, -h3i / 2, 0.0]],
            [-d * h3r, 0.0, d * h1r],
            h2i * d2,
        ),
        (
            [[0.0, 0.0, -h1i / 2], [0.0, 0.0, -h2i / 2], [-h1i / 2, -h2i / 2, -h3i]],
            [d * h2r, -d * h1r, 0.0],
            h3i * d2,
        ),
    ]


class InverseSolver:
    @staticmethod
    def build_six_quadrics(p, d, tol=None):
        tol = tol or DEFAULT_TOLERANCE
        if not PTClassifier.is_pt_symmetric(p, tol):
            raise NotPTSymmetricError("matrix is not PT-symmetric (h0_I or hR.hI nonzero)")
        return [
            QuadraticSurface(a=a, b=b, c=c, index=index)
            for index, (a, b, c) in enumerate(_quadric_coefficients(p, float(d)), 1)
        ]

    @staticmethod
    def classify_quadric(surface, tol=None):
        return QuadricClassifier.classify(surface.a, surface.b, surface.c, tol)

    @staticmethod
    def surface_residuals(p, d, metric):
        point = metric.g_real
        return np.array(
            [
                QuadraticSurface(a=a, b=b, c=c).evaluate(point)[0]
                for a, b, c in _quadric_coefficients(p, float(d))
            ]
        )

    @staticmethod
    def metric_system(p):
        """8x4 real matrix of (d, x, y, z) -> H^dagger G - G H for fixed H."""
        h_matrix = PauliCore.compose(p)

        def residual(components):
            g_form = PauliForm(components[0], 0.0, components[1:], np.zeros(3))
            g_matrix = PauliCore.compose(g_form)
            return realify(h_matrix.conj().T @ g_matrix - g_matrix @ h_matrix)

        return linear_map_matrix(residual, 4)

    @staticmethod
    def singular_points(particular, direction, d, tol=None):
        """Roots lambda of |particular + lambda * direction|^2 = d^2."""
        tol = tol or DEFAULT_TOLERANCE
        quadratic = float(direction @ direction)
        linear = 2 * float(particular @ direction)
        constant = float(particular @ particular) - d * d
        scale = max(quadratic, abs(linear), abs(constant), 1e-300)
        discriminant = linear * linear - 4 * quadratic * constant
        if tol.is_zero(discriminant, scale * scale):
            roots = [-linear / (2 * quadratic)]
        elif discriminant < 0:
            return ()
        else:
            root = np.sqrt(discriminant)
            roots = [(-linear - root) / (2 * quadratic), (-linear + root) / (2 * quadratic)]
        # drop the zero metric
        roots = [
            value
            for value in roots
            if not (
                tol.is_zero(d, scale)
                and tol.vector_is_zero(particular + value * direction, scale)
            )
        ]
        return tuple(sorted(float(value) for value in roots))

    @staticmethod
    def _coordinate_line(particular, direction, tol):
        """Parametrize a solution line by its first non-constant coordinate."""
        k = next(
            i
            for i, value in enumerate(direction)
            if not tol.is_zero(value, np.abs(direction).max())
        )
        direction = direction / direction[k]
        particular = particular - particular[k] * direction
        particular[k] = 0.0
        return particular, direction.reshape(1, 3)

    @staticmethod
    def solve_metrics(p, d, tol=None, cutoff=DEFAULT_RANK_CUTOFF):
        tol = tol or DEFAULT_TOLERANCE
        if not PTClassifier.is_pt_symmetric(p, tol):
            raise NotPTSymmetricError("matrix is not PT-symmetric (h0_I or hR.hI nonzero)")
        d = float(d)

        system = InverseSolver.metric_system(p)
        lhs = system[:, 1:]
        rhs = -system[:, 0] * d
        try:
            _, singular_values, vh = np.linalg.svd(lhs, full_matrices=True)
            particular, *_ = np.linalg.lstsq(lhs, rhs, rcond=cutoff)
        except np.linalg.LinAlgError as e:
            raise DomainError(f"Metric system solve failed: {str(e)}")

        rank = rank_from_singular_values(singular_values, cutoff)
        scale = max(np.abs(system).max(), 1e-300) * max(abs(d), 1.0)
        residual = float(np.linalg.norm(lhs @ particular - rhs))
        if not tol.is_zero(residual, scale):
            raise NoSolutionError(
                f"no Hermitian metric with half-trace d={d} makes H pseudo-Hermitian "
                f"(least-squares residual {residual:.3e})"
            )

        directions = vh[rank:]
        if len(directions) == 1:
            particular, directions = InverseSolver._coordinate_line(
                particular, directions[0], tol
            )
        else:
            for i, direction in enumerate(directions):
                # deterministic orientation: largest component positive
                if direction[np.argmax(np.abs(direction))] < 0:
                    directions[i] = -direction

        offset = None if d == 0.0 else MetricForms.from_components(d, particular, tol)
        basis = tuple(MetricForms.from_components(0.0, direction, tol) for direction in directions)

        singular_points = ()
        if len(directions) == 1:
            start = np.zeros(3) if offset is None else offset.g_real
            singular_points = InverseSolver.singular_points(start, directions[0], d, tol)

        logger.info(
            f"Metric solution set for d={d}: dimension {len(directions)}, "
            f"{len(singular_points)} singular point(s)"
        )
        return GSolutionSet(
            d=d,
            dimension=len(directions),
            basis=basis,
            particular=offset,
            singular_points=singular_points,
        )

    @staticmethod
    def member(solution, params, tol=None):
        return MetricForms.from_components(solution.d, solution.point(params), tol)
