import logging

import numpy as np

from phkit.analyzers.pauli_core import PauliCore
from phkit.exceptions import PairNotCompatibleError
from phkit.models import PredicateReport, PTCell, PTCellKind, Spectrum, Symmetry
from phkit.utils.numerics import DEFAULT_TOLERANCE

logger = logging.getLogger(__name__)


class PTClassifier:
    @staticmethod
    def is_pt_symmetric(p, tol=None):
        tol = tol or DEFAULT_TOLERANCE
        if not tol.is_zero(p.h0_imag, p.scale):
            return False
        norms = float(np.linalg.norm(p.h_real) * np.linalg.norm(p.h_imag))
        return tol.is_zero(float(p.h_real @ p.h_imag), norms)

    @staticmethod
    def classify(p, tol=None):
        tol = tol or DEFAULT_TOLERANCE
        scale = p.scale
        normal = PauliCore.is_normal(p, tol)

        if not PTClassifier.is_pt_symmetric(p, tol):
            h_dot_h = p.h_dot_h
            jordan = tol.is_zero(abs(h_dot_h), scale * scale) and not (
                tol.vector_is_zero(p.h_real, scale) and tol.vector_is_zero(p.h_imag, scale)
            )
            return PTCell(
                cell=PTCellKind.NOT_PT,
                symmetry=Symmetry.NOT_APPLICABLE,
                spectrum=Spectrum.COMPLEX,
                diagonalizable=not jordan,
                normal=normal,
            )

        norm_real = float(np.linalg.norm(p.h_real))
        norm_imag = float(np.linalg.norm(p.h_imag))
        real_zero = tol.is_zero(norm_real, scale)
        imag_zero = tol.is_zero(norm_imag, scale)

        if real_zero and imag_zero:
            return PTCell(
                PTCellKind.S3, Symmetry.UNBROKEN, Spectrum.REAL_DEGENERATE, True, True
            )
        if imag_zero:
            return PTCell(
                PTCellKind.S1, Symmetry.UNBROKEN, Spectrum.REAL_DISTINCT, True, True
            )
        if real_zero:
            return PTCell(
                PTCellKind.S2, Symmetry.BROKEN, Spectrum.COMPLEX_CONJUGATE, True, True
            )

        gap = norm_real - norm_imag
        if tol.is_zero(gap, scale):
            return PTCell(
                PTCellKind.S4,
                Symmetry.UNBROKEN,
                Spectrum.REAL_DEGENERATE,
                False,
                normal,
            )
        if gap > 0:
            return PTCell(
                PTCellKind.S4, Symmetry.UNBROKEN, Spectrum.REAL_DISTINCT, True, normal
            )
        return PTCell(
            PTCellKind.S4, Symmetry.BROKEN, Spectrum.COMPLEX_CONJUGATE, True, normal
        )

    @staticmethod
    def characteristic_coefficients(p):
        """Coefficients (c1, c0) of E^2 + c1 E + c0."""
        return -2 * p.h0, p.h0 * p.h0 - p.h_dot_h

    @staticmethod
    def check_g_propositions(p, g, tol=None):
        tol = tol or DEFAULT_TOLERANCE
        residual = PauliCore.pseudo_hermitian_residual(p, g)
        pair_scale = max(p.scale, 1e-300) * max(g.scale, 1e-300)
        if not tol.is_zero(residual, pair_scale):
            raise PairNotCompatibleError(
                f"H and G do not satisfy H^dagger G = G H (residual {residual:.3e})"
            )

        cell = PTClassifier.classify(p, tol)
        h_real, h_imag, g_real = p.h_real, p.h_imag, g.g_real
        norm_hr = float(np.linalg.norm(h_real))
        norm_hi = float(np.linalg.norm(h_imag))
        norm_g = float(np.linalg.norm(g_real))
        trace_zero = tol.is_zero(g.d, g.scale)
        invertible = not g.singular
        cross_norm = float(np.linalg.norm(np.cross(h_real, g_real)))
        cross_zero = tol.is_zero(cross_norm, norm_hr * norm_g)
        details = {"residual": residual}

        checks = {
            "s1_commutes_with_metric": None,
            "s2_traceless_metric": None,
            "s4_cross_iff_traceless": None,
            "s4_orthogonal_triple": None,
            "s4_angle_law": None,
            "pt_orthogonal_metric": None,
            "real_spectrum": None,
        }

        if cell.cell == PTCellKind.S1:
            checks["s1_commutes_with_metric"] = cross_zero
        if cell.cell == PTCellKind.S2:
            checks["s2_traceless_metric"] = trace_zero
        if cell.cell == PTCellKind.S4 and invertible:
            checks["s4_cross_iff_traceless"] = cross_zero == trace_zero
            orthogonal = tol.is_zero(float(h_real @ g_real), norm_hr * norm_g)
            if orthogonal:
                checks["s4_orthogonal_triple"] = (not trace_zero) and cell.diagonalizable
        if cell.cell == PTCellKind.S4 and not trace_zero and norm_g > 0:
            sine = cross_norm / (norm_hr * norm_g)
            predicted = norm_hi * abs(g.d) / (norm_hr * norm_g)
            details["angle_sine"] = sine
            details["angle_sine_predicted"] = predicted
            checks["s4_angle_law"] = tol.is_zero(sine - predicted, max(1.0, predicted))
        if cell.cell != PTCellKind.NOT_PT:
            checks["pt_orthogonal_metric"] = tol.is_zero(
                float(h_imag @ g_real), norm_hi * norm_g
            )
            forces_real = (g.det > 0 and not trace_zero) or (
                g.singular and not g.is_zero
            )
            if forces_real:
                checks["real_spectrum"] = cell.symmetry == Symmetry.UNBROKEN

        logger.debug(f"Proposition checks for cell {cell.cell.value}: {checks}")
        return PredicateReport(cell=cell.cell, checks=checks, details=details)
