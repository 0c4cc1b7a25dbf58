import cmath

import numpy as np

from phkit.exceptions import DomainError, InvalidInputError
from phkit.models import EigenPair, IdentityReport, PauliForm
from phkit.utils.numerics import DEFAULT_TOLERANCE

SIGMA_0 = np.eye(2, dtype=complex)
SIGMA_1 = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_2 = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_3 = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI_MATRICES = (SIGMA_0, SIGMA_1, SIGMA_2, SIGMA_3)


class PauliCore:
    @staticmethod
    def decompose(matrix):
        matrix = np.asarray(matrix, dtype=complex)
        if matrix.shape != (2, 2):
            raise InvalidInputError(f"expected a 2x2 matrix, got shape {matrix.shape}")
        if not np.all(np.isfinite(matrix)):
            raise InvalidInputError("matrix contains non-finite entries")

        h0 = (matrix[0, 0] + matrix[1, 1]) / 2
        h = np.array(
            [
                (matrix[0, 1] + matrix[1, 0]) / 2,
                (matrix[1, 0] - matrix[0, 1]) / 2j,
                (matrix[0, 0] - matrix[1, 1]) / 2,
            ]
        )
        return PauliForm(h0.real, h0.imag, h.real, h.imag)

    @staticmethod
    def compose(p):
        h0 = p.h0
        h1, h2, h3 = p.h
        return np.array(
            [[h0 + h3, h1 - 1j * h2], [h1 + 1j * h2, h0 - h3]], dtype=complex
        )

    @staticmethod
    def from_complex(h0, h):
        h = np.asarray(h, dtype=complex)
        return PauliForm(h0.real, h0.imag, h.real, h.imag)

    @staticmethod
    def dagger(p):
        return PauliForm(p.h0_real, -p.h0_imag, p.h_real, -p.h_imag)

    @staticmethod
    def add(p, q):
        return PauliForm(
            p.h0_real + q.h0_real,
            p.h0_imag + q.h0_imag,
            p.h_real + q.h_real,
            p.h_imag + q.h_imag,
        )

    @staticmethod
    def multiply(p, q):
        # (sigma.a)(sigma.b) = (a.b) sigma0 + i sigma.(a x b)
        p0, q0 = p.h0, q.h0
        ph, qh = p.h, q.h
        h0 = p0 * q0 + ph @ qh
        h = p0 * qh + q0 * ph + 1j * np.cross(ph, qh)
        return PauliCore.from_complex(complex(h0), h)

    @staticmethod
    def eigenvalues(p):
        root = cmath.sqrt(p.h_dot_h)
        return EigenPair(p.h0 - root, p.h0 + root)

    @staticmethod
    def is_normal(p, tol=None):
        tol = tol or DEFAULT_TOLERANCE
        cross = float(np.linalg.norm(np.cross(p.h_real, p.h_imag)))
        norms = float(np.linalg.norm(p.h_real) * np.linalg.norm(p.h_imag))
        return cross <= tol.band(1.0 + norms)

    @staticmethod
    def pseudo_hermitian_residual(h, g):
        """Frobenius norm of H^dagger G - G H; g may be a PauliForm or HermitianMetric."""
        g_form = g if isinstance(g, PauliForm) else g.to_pauli()
        h_matrix = PauliCore.compose(h)
        g_matrix = PauliCore.compose(g_form)
        residual = h_matrix.conj().T @ g_matrix - g_matrix @ h_matrix
        return float(np.linalg.norm(residual))

    @staticmethod
    def su2_identities(u, v, tol=None):
        tol = tol or DEFAULT_TOLERANCE
        for name, p in (("U", u), ("V", v)):
            scale = max(p.scale, 1.0)
            if not (tol.vector_is_zero(p.h_real, scale) and tol.is_zero(p.h0_imag, scale)):
                raise DomainError(
                    f"{name} must have vanishing hR and real trace (S2 or S3 member)"
                )

        u_matrix = PauliCore.compose(u)
        v_matrix = PauliCore.compose(v)
        trace_term = 0.5 * np.trace(u_matrix) * np.trace(v_matrix)
        scalar = trace_term + 2 * float(u.h_imag @ v.h_imag)

        product = u_matrix @ v_matrix.conj().T + v_matrix @ u_matrix.conj().T
        product_residual = np.linalg.norm(product - scalar * SIGMA_0)

        total = u_matrix + v_matrix
        det_total = np.linalg.det(total)
        determinant_residual = abs(
            det_total - np.linalg.det(u_matrix) - np.linalg.det(v_matrix) - scalar
        )
        norm_residual = np.linalg.norm(total @ total.conj().T - det_total * SIGMA_0)

        scale = max(u.scale, v.scale, 1.0)
        return IdentityReport(
            product_residual=float(product_residual),
            determinant_residual=float(determinant_residual),
            norm_residual=float(norm_residual),
            tolerance=tol.band(scale * scale),
        )
