import logging
from dataclasses import replace

import numpy as np

from phkit.analyzers.classifier import PTClassifier
from phkit.analyzers.metric_forms import NONZERO_COMPONENTS, MetricForms
from phkit.analyzers.pauli_core import PauliCore
from phkit.exceptions import (
    CellMismatchError,
    DimensionMismatchError,
    DomainError,
    InvalidInputError,
    ProportionalMetricsError,
    ScalarMetricUnsupportedError,
)
from phkit.models import (
    ConstraintMatrix,
    EnsembleBasis,
    MetricCell,
    PauliForm,
    PTConstraint,
)
from phkit.utils.numerics import (
    DEFAULT_RANK_CUTOFF,
    DEFAULT_TOLERANCE,
    linear_map_matrix,
    nullspace,
    realify,
)

logger = logging.getLogger(__name__)

INVERTIBLE_PARAMS = ("k1", "k2", "k3")
SINGULAR_PARAMS = ("m1", "m2", "m3", "m4")


def _invertible_forms(cell, a, b, c, d):
    if cell == MetricCell.G1:
        return (
            [
                (a / c, b / c, 1, 0, 0, 0),
                (-d / c, -b * d / (a * c), 0, -b / a, 1, 0),
                (0, -d / a, 0, -c / a, 0, 1),
            ],
            ("h3_R", "h2_I", "h3_I"),
        )
    if cell == MetricCell.G2:
        return (
            [
                (0, b / c, 1, 0, 0, 0),
                (0, d / c, 0, 1, 0, 0),
                (d / b, 0, 0, 0, -c / b, 1),
            ],
            ("h3_R", "h1_I", "h3_I"),
        )
    if cell == MetricCell.G3:
        return (
            [
                (a / c, 0, 1, 0, 0, 0),
                (-d / c, 0, 0, 0, 1, 0),
                (0, -d / a, 0, -c / a, 0, 1),
            ],
            ("h3_R", "h2_I", "h3_I"),
        )
    if cell == MetricCell.G4:
        return (
            [
                (a / b, 1, 0, 0, 0, 0),
                (0, 0, d / a, -b / a, 1, 0),
                (d / b, 0, 0, 0, 0, 1),
            ],
            ("h2_R", "h2_I", "h3_I"),
        )
    if cell == MetricCell.G5:
        return (
            [
                (1, 0, 0, 0, 0, 0),
                (0, 0, d / a, 0, 1, 0),
                (0, -d / a, 0, 0, 0, 1),
            ],
            ("h1_R", "h2_I", "h3_I"),
        )
    if cell == MetricCell.G6:
        return (
            [
                (0, 1, 0, 0, 0, 0),
                (0, 0, -d / b, 1, 0, 0),
                (d / b, 0, 0, 0, 0, 1),
            ],
            ("h2_R", "h1_I", "h3_I"),
        )
    return (
        [
            (0, 0, 1, 0, 0, 0),
            (0, d / c, 0, 1, 0, 0),
            (-d / c, 0, 0, 0, 1, 0),
        ],
        ("h3_R", "h1_I", "h2_I"),
    )


def _singular_forms(cell, a, b, c, d):
    if cell == MetricCell.G1:
        return (
            [
                (a / c, b / c, 1, 0, 0, 0),
                (a * b / (c * d), (b * b + c * c) / (c * d), 0, 1, 0, 0),
                (-(a * a + c * c) / (c * d), -a * b / (c * d), 0, 0, 1, 0),
                (b / d, -a / d, 0, 0, 0, 1),
            ],
            ("h3_R", "h1_I", "h2_I", "h3_I"),
        )
    if cell == MetricCell.G2:
        return (
            [
                (0, b / c, 1, 0, 0, 0),
                (0, d / c, 0, 1, 0, 0),
                (-c / d, 0, 0, 0, 1, 0),
                (b / d, 0, 0, 0, 0, 1),
            ],
            ("h3_R", "h1_I", "h2_I", "h3_I"),
        )
    if cell == MetricCell.G3:
        return (
            [
                (a / c, 0, 1, 0, 0, 0),
                (-d / c, 0, 0, 0, 1, 0),
                (0, c / d, 0, 1, 0, 0),
                (0, -a / d, 0, 0, 0, 1),
            ],
            ("h3_R", "h2_I", "h1_I", "h3_I"),
        )
    if cell == MetricCell.G4:
        return (
            [
                (a / b, 1, 0, 0, 0, 0),
                (0, 0, -b / d, 1, 0, 0),
                (d / b, 0, 0, 0, 0, 1),
                (0, 0, a / d, 0, 1, 0),
            ],
            ("h2_R", "h1_I", "h3_I", "h2_I"),
        )
    if cell == MetricCell.G5:
        return (
            [
                (1, 0, 0, 0, 0, 0),
                (0, 0, d / a, 0, 1, 0),
                (0, -d / a, 0, 0, 0, 1),
                (0, 0, 0, 1, 0, 0),
            ],
            ("h1_R", "h2_I", "h3_I", "h1_I"),
        )
    if cell == MetricCell.G6:
        return (
            [
                (0, 1, 0, 0, 0, 0),
                (0, 0, -d / b, 1, 0, 0),
                (d / b, 0, 0, 0, 0, 1),
                (0, 0, 0, 0, 1, 0),
            ],
            ("h2_R", "h1_I", "h3_I", "h2_I"),
        )
    return (
        [
            (0, 0, 1, 0, 0, 0),
            (0, d / c, 0, 1, 0, 0),
            (-d / c, 0, 0, 0, 1, 0),
            (0, 0, 0, 0, 0, 1),
        ],
        ("h3_R", "h1_I", "h2_I", "h3_I"),
    )


class EnsembleSolver:
    @staticmethod
    def build_constraint_matrix(metric):
        if metric.cell == MetricCell.SCALAR:
            raise ScalarMetricUnsupportedError(
                "scalar metric commutes with every matrix; no constraint system"
            )
        a, b, c = metric.g_real
        d = metric.d
        m1 = np.array(
            [
                [b * b + c * c, -a * b, -a * c],
                [-a * b, a * a + c * c, -b * c],
                [-a * c, -b * c, a * a + b * b],
            ]
        )
        m2 = np.array(
            [
                [0.0, c * d, -b * d],
                [-c * d, 0.0, a * d],
                [b * d, -a * d, 0.0],
            ]
        )
        m4 = np.array(
            [
                [d * d - a * a, -a * b, -a * c],
                [-a * b, d * d - b * b, -b * c],
                [-a * c, -b * c, d * d - c * c],
            ]
        )
        return ConstraintMatrix(matrix=np.block([[m1, m2], [-m2, m4]]), metric=metric)

    @staticmethod
    def nullspace(constraint, cutoff=DEFAULT_RANK_CUTOFF):
        try:
            return nullspace(constraint.matrix, cutoff)
        except np.linalg.LinAlgError as e:
            raise DomainError(f"Nullspace decomposition failed: {str(e)}")

    @staticmethod
    def _pt_functional(vectors, metric):
        if not metric.singular:
            return None
        return np.asarray(vectors)[:, 3:] @ metric.g_real

    @staticmethod
    def closed_form_basis(metric, cell=None):
        if metric.is_zero:
            raise InvalidInputError("the zero metric admits every matrix")
        if metric.cell == MetricCell.SCALAR:
            raise CellMismatchError("scalar metric has no closed-form cell basis")
        if cell is not None and MetricCell(cell) != metric.cell:
            raise CellMismatchError(
                f"metric belongs to {metric.cell.value}, not {MetricCell(cell).value}"
            )

        a, b, c = (float(x) for x in metric.g_real)
        d = metric.d
        if metric.singular:
            vectors, coordinates = _singular_forms(metric.cell, a, b, c, d)
            names, trace_param = SINGULAR_PARAMS, "m0"
        else:
            vectors, coordinates = _invertible_forms(metric.cell, a, b, c, d)
            names, trace_param = INVERTIBLE_PARAMS, "k0"

        vectors = np.array(vectors, dtype=float)
        return EnsembleBasis(
            vectors=vectors,
            free_params=names,
            coordinates=coordinates,
            metric=metric,
            cell=metric.cell,
            source="closed_form",
            trace_param=trace_param,
            pt_functional=EnsembleSolver._pt_functional(vectors, metric),
        )

    @staticmethod
    def numeric_basis(metric, cutoff=DEFAULT_RANK_CUTOFF):
        if metric.is_zero:
            raise InvalidInputError("the zero metric admits every matrix")
        constraint = EnsembleSolver.build_constraint_matrix(metric)
        vectors = EnsembleSolver.nullspace(constraint, cutoff)

        expected = 4 if metric.singular else 3
        if vectors.shape[0] != expected:
            logger.warning(
                f"Nullspace dimension {vectors.shape[0]} disagrees with metric "
                f"singular={metric.singular}; rank decision is at the tolerance edge"
            )
        singular = vectors.shape[0] == 4
        names = tuple(f"n{i + 1}" for i in range(vectors.shape[0]))
        return EnsembleBasis(
            vectors=vectors,
            free_params=names,
            coordinates=(None,) * len(names),
            metric=metric,
            cell=metric.cell,
            source="nullspace",
            trace_param="m0" if singular else "k0",
            pt_functional=EnsembleSolver._pt_functional(vectors, metric),
        )

    @staticmethod
    def scalar_basis(metric):
        return EnsembleBasis(
            vectors=np.hstack([np.eye(3), np.zeros((3, 3))]),
            free_params=INVERTIBLE_PARAMS,
            coordinates=("h1_R", "h2_R", "h3_R"),
            metric=metric,
            cell=MetricCell.SCALAR,
            source="scalar",
        )

    @staticmethod
    def near_cell_boundary(metric, switchover):
        components = [abs(metric.g_real[i]) for i in NONZERO_COMPONENTS[metric.cell]]
        if metric.singular:
            components.append(abs(metric.d))
        scale = metric.scale
        return any(component < switchover * scale for component in components)

    @staticmethod
    def solve(metric, switchover=1e-6, cutoff=DEFAULT_RANK_CUTOFF, numeric=False):
        if metric.is_zero:
            raise InvalidInputError("the zero metric admits every matrix")
        if metric.cell == MetricCell.SCALAR:
            logger.info("Scalar metric: returning the Hermitian generators")
            return EnsembleSolver.scalar_basis(metric)
        if numeric or EnsembleSolver.near_cell_boundary(metric, switchover):
            logger.info(
                f"Using nullspace basis for {metric.cell.value} "
                f"(forced={numeric}, switchover={switchover})"
            )
            return EnsembleSolver.numeric_basis(metric, cutoff)
        logger.info(f"Using closed-form basis for {metric.cell.value}")
        return EnsembleSolver.closed_form_basis(metric)

    @staticmethod
    def pt_restrict(basis, tol=None):
        tol = tol or DEFAULT_TOLERANCE
        if basis.pt_functional is None or basis.pt_restricted:
            return basis

        functional = basis.pt_functional
        scale = float(np.abs(functional).max())
        eliminated = len(functional) - 1
        if tol.is_zero(functional[eliminated], scale):
            eliminated = int(np.argmax(np.abs(functional)))
        pivot = functional[eliminated]
        kept = [i for i in range(len(functional)) if i != eliminated]

        vectors = np.array(
            [
                basis.vectors[i] - (functional[i] / pivot) * basis.vectors[eliminated]
                for i in kept
            ]
        )
        constraint = PTConstraint(
            eliminated=basis.free_params[eliminated],
            coefficients={
                basis.free_params[i]: float(-functional[i] / pivot) for i in kept
            },
        )
        logger.info(f"PT restriction: {constraint.describe()}")
        return replace(
            basis,
            vectors=vectors,
            free_params=tuple(basis.free_params[i] for i in kept),
            coordinates=tuple(basis.coordinates[i] for i in kept),
            pt_functional=None,
            pt_restricted=True,
            pt_constraint=constraint,
        )

    @staticmethod
    def generate_h(basis, params, tol=None):
        tol = tol or DEFAULT_TOLERANCE
        params = np.asarray(params, dtype=float).reshape(-1)
        if params.shape != (basis.param_count,):
            raise DimensionMismatchError(
                f"expected {basis.param_count} parameters "
                f"({basis.trace_param}, {', '.join(basis.free_params)}), "
                f"got {params.size}"
            )
        trace = params[0] if basis.includes_trace_param else 0.0
        weights = params[1:] if basis.includes_trace_param else params
        vector = weights @ basis.vectors

        h0_imag = 0.0
        metric = basis.metric
        if metric.singular and metric.d != 0.0:
            # scalar part of H^dagger G = G H: d * h0_I = -hI . gR
            h0_imag = -float(vector[3:] @ metric.g_real) / metric.d
            if basis.pt_restricted:
                if not tol.is_zero(h0_imag, max(np.abs(vector).max(), 1.0)):
                    logger.warning(
                        f"PT-restricted member has h0_I={h0_imag:.3e}; expected 0"
                    )
                h0_imag = 0.0
        return PauliForm.from_vector(vector, h0_real=trace, h0_imag=h0_imag)

    @staticmethod
    def membership(basis, tol=None):
        return [PTClassifier.classify(p, tol) for p in basis.basis_matrices]

    @staticmethod
    def pseudo_hermitian_operator(metric):
        """8x6 real matrix of X -> H^dagger G - G H on traceless H = sigma . X."""
        g_matrix = MetricForms.to_matrix(metric)

        def residual(vector):
            h_matrix = PauliCore.compose(PauliForm.from_vector(vector))
            return realify(h_matrix.conj().T @ g_matrix - g_matrix @ h_matrix)

        return linear_map_matrix(residual, 6)

    @staticmethod
    def common_solution_space(metrics, cutoff=DEFAULT_RANK_CUTOFF):
        stacked = np.vstack(
            [EnsembleSolver.pseudo_hermitian_operator(metric) for metric in metrics]
        )
        return nullspace(stacked, cutoff)

    @staticmethod
    def are_proportional(g, f, tol=None):
        tol = tol or DEFAULT_TOLERANCE
        singular_values = np.linalg.svd(
            np.vstack([g.components, f.components]), compute_uv=False
        )
        return singular_values[1] <= tol.band(singular_values[0])

    @staticmethod
    def common_pseudo_h(g, f, tol=None):
        tol = tol or DEFAULT_TOLERANCE
        if EnsembleSolver.are_proportional(g, f, tol):
            raise ProportionalMetricsError(
                "metrics are proportional; the common family is not one-dimensional"
            )
        h_real = f.d * g.g_real - g.d * f.g_real
        h_imag = np.cross(g.g_real, f.g_real)
        return PauliForm(0.0, 0.0, h_real, h_imag)
