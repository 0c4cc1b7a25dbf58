import logging

import numpy as np

from phkit.analyzers.pauli_core import PauliCore
from phkit.exceptions import NotHermitianError
from phkit.models import HermitianMetric, MetricCell, MetricClass
from phkit.utils.numerics import DEFAULT_TOLERANCE

logger = logging.getLogger(__name__)

# (a, b, c) nonzero pattern -> cell
_CELL_BY_PATTERN = {
    (True, True, True): MetricCell.G1,
    (False, True, True): MetricCell.G2,
    (True, False, True): MetricCell.G3,
    (True, True, False): MetricCell.G4,
    (True, False, False): MetricCell.G5,
    (False, True, False): MetricCell.G6,
    (False, False, True): MetricCell.G7,
    (False, False, False): MetricCell.SCALAR,
}

NONZERO_COMPONENTS = {
    cell: tuple(i for i, present in enumerate(pattern) if present)
    for pattern, cell in _CELL_BY_PATTERN.items()
}


class MetricForms:
    @staticmethod
    def detect_cell(g_real, scale, tol=None):
        tol = tol or DEFAULT_TOLERANCE
        pattern = tuple(not tol.is_zero(component, scale) for component in g_real)
        return _CELL_BY_PATTERN[pattern]

    @staticmethod
    def is_singular(d, g_real, tol=None):
        tol = tol or DEFAULT_TOLERANCE
        g_real = np.asarray(g_real, dtype=float)
        norm_squared = float(g_real @ g_real)
        return tol.is_zero(d * d - norm_squared, d * d + norm_squared)

    @staticmethod
    def from_components(d, g_real, tol=None):
        tol = tol or DEFAULT_TOLERANCE
        g_real = np.asarray(g_real, dtype=float)
        scale = float(max(abs(d), np.abs(g_real).max()))
        cell = MetricForms.detect_cell(g_real, scale, tol)
        singular = MetricForms.is_singular(d, g_real, tol)
        return HermitianMetric(d=d, g_real=g_real, cell=cell, singular=singular)

    @staticmethod
    def from_pauli(p, tol=None):
        tol = tol or DEFAULT_TOLERANCE
        scale = max(p.scale, 1e-300)
        if not (tol.is_zero(p.h0_imag, scale) and tol.vector_is_zero(p.h_imag, scale)):
            raise NotHermitianError(
                f"metric is not Hermitian: imaginary Pauli parts h0_I={p.h0_imag}, "
                f"hI={p.h_imag.tolist()}"
            )
        return MetricForms.from_components(p.h0_real, p.h_real, tol)

    @staticmethod
    def from_matrix(matrix, tol=None):
        tol = tol or DEFAULT_TOLERANCE
        matrix = np.asarray(matrix, dtype=complex)
        p = PauliCore.decompose(matrix)
        deviation = float(np.linalg.norm(matrix - matrix.conj().T))
        if not tol.is_zero(deviation, np.abs(matrix).max()):
            raise NotHermitianError(f"matrix is not Hermitian: |M - M^dagger| = {deviation}")
        return MetricForms.from_components(p.h0_real, p.h_real, tol)

    @staticmethod
    def to_matrix(metric):
        return PauliCore.compose(metric.to_pauli())

    @staticmethod
    def det_trace_class(metric, tol=None):
        tol = tol or DEFAULT_TOLERANCE
        norm_squared = float(metric.g_real @ metric.g_real)
        det_sign = tol.sign(metric.det, metric.d * metric.d + norm_squared)
        return MetricClass(
            det_sign=det_sign, trace_zero=tol.is_zero(metric.d, metric.scale)
        )
