import numpy as np

from phkit.exceptions import DomainError
from phkit.models import QuadricKind
from phkit.utils.numerics import DEFAULT_TOLERANCE, numeric_rank


class QuadricClassifier:
    """Euclidean classification of x^T A x + b . x + c = 0 in three variables."""

    @staticmethod
    def bordered(a, b, c):
        a = np.asarray(a, dtype=float)
        b = np.asarray(b, dtype=float)
        return np.block([[a, b[:, None] / 2], [b[None, :] / 2, np.array([[c]])]])

    @staticmethod
    def _reduce(a, b, c, tol):
        try:
            eigenvalues, eigenvectors = np.linalg.eigh(np.asarray(a, dtype=float))
        except np.linalg.LinAlgError as e:
            raise DomainError(f"Quadric eigen-decomposition failed: {str(e)}")
        b_rotated = eigenvectors.T @ np.asarray(b, dtype=float)
        scale = max(np.abs(eigenvalues).max(), np.abs(b_rotated).max(), abs(c))
        signs = np.array([tol.sign(value, scale) for value in eigenvalues])
        nonzero = signs != 0
        # complete the square along every nonzero principal axis
        constant = c - float(np.sum(b_rotated[nonzero] ** 2 / (4 * eigenvalues[nonzero])))
        linear = b_rotated[~nonzero]
        return signs[nonzero], constant, linear, scale

    @staticmethod
    def invariants(a, b, c, tol=None):
        tol = tol or DEFAULT_TOLERANCE
        signs, constant, linear, _ = QuadricClassifier._reduce(a, b, c, tol)
        cutoff = tol.rtol
        return {
            "rank_a": int(signs.size),
            "rank_bordered": numeric_rank(QuadricClassifier.bordered(a, b, c), cutoff),
            "positive": int(np.sum(signs > 0)),
            "negative": int(np.sum(signs < 0)),
            "reduced_constant": constant,
            "kernel_linear_norm": float(np.linalg.norm(linear)),
        }

    @staticmethod
    def classify(a, b, c, tol=None):
        tol = tol or DEFAULT_TOLERANCE
        signs, constant, linear, scale = QuadricClassifier._reduce(a, b, c, tol)
        rank = signs.size
        positive = int(np.sum(signs > 0))
        negative = rank - positive

        if not tol.vector_is_zero(linear, scale):
            if rank == 2:
                if positive == 1:
                    return QuadricKind.HYPERBOLIC_PARABOLOID
                return QuadricKind.ELLIPTIC_PARABOLOID
            if rank == 1:
                return QuadricKind.PARABOLIC_CYLINDER
            return QuadricKind.SINGLE_PLANE

        # orient so that the majority of squares are positive
        if negative > positive:
            positive, negative = negative, positive
            constant = -constant
        k_sign = tol.sign(constant, scale)

        if rank == 3:
            if negative == 0:
                if k_sign == 0:
                    return QuadricKind.POINT
                return QuadricKind.EMPTY if k_sign > 0 else QuadricKind.ELLIPSOID
            if k_sign == 0:
                return QuadricKind.QUADRIC_CONE
            if k_sign < 0:
                return QuadricKind.HYPERBOLOID_ONE_SHEET
            return QuadricKind.HYPERBOLOID_TWO_SHEETS
        if rank == 2:
            if negative == 0:
                if k_sign == 0:
                    return QuadricKind.LINE
                return QuadricKind.EMPTY if k_sign > 0 else QuadricKind.CYLINDER
            if k_sign == 0:
                return QuadricKind.TWO_INTERSECTING_PLANES
            return QuadricKind.HYPERBOLIC_CYLINDER
        if rank == 1:
            if k_sign == 0:
                return QuadricKind.SINGLE_PLANE
            return QuadricKind.EMPTY if k_sign > 0 else QuadricKind.TWO_PARALLEL_PLANES
        if k_sign == 0:
            return QuadricKind.WHOLE_SPACE
        return QuadricKind.EMPTY
