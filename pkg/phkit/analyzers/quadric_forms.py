import logging
from collections import Counter

import numpy as np

from phkit.analyzers.classifier import PTClassifier
from phkit.analyzers.ensemble_solver import EnsembleSolver
from phkit.analyzers.quadric_classifier import QuadricClassifier
from phkit.exceptions import (
    CellMismatchError,
    DimensionMismatchError,
    DomainError,
    EmptyLevelSetError,
    InvalidInputError,
)
from phkit.models import DetForm, MetricCell, QuadricKind, Symmetry, SymmetryStats
from phkit.utils.numerics import DEFAULT_TOLERANCE

logger = logging.getLogger(__name__)


def _invertible_a(cell, a, b, c, d):
    a2, b2, c2, d2 = a * a, b * b, c * c, d * d
    if cell == MetricCell.G1:
        return np.array(
            [
                [-(a2 + b2 + c2) / c2, (a2 + b2) * d / (a * c2), b * d / (a * c)],
                [
                    (a2 + b2) * d / (a * c2),
                    (a2 + b2) * (c2 - d2) / (a2 * c2),
                    b * (c2 - d2) / (a2 * c),
                ],
                [b * d / (a * c), b * (c2 - d2) / (a2 * c), (a2 + c2 - d2) / a2],
            ]
        )
    if cell == MetricCell.G2:
        return np.array(
            [
                [-(b2 + c2) / c2, -b * d / c2, 0.0],
                [-b * d / c2, (c2 - d2) / c2, 0.0],
                [0.0, 0.0, (b2 + c2 - d2) / b2],
            ]
        )
    if cell == MetricCell.G3:
        return np.array(
            [
                [-(a2 + c2) / c2, a * d / c2, 0.0],
                [a * d / c2, (c2 - d2) / c2, 0.0],
                [0.0, 0.0, (a2 + c2 - d2) / a2],
            ]
        )
    if cell == MetricCell.G4:
        return np.array(
            [
                [-(a2 + b2) / b2, 0.0, -a * d / b2],
                [0.0, (a2 + b2 - d2) / a2, 0.0],
                [-a * d / b2, 0.0, (b2 - d2) / b2],
            ]
        )
    component = {MetricCell.G5: a2, MetricCell.G6: b2, MetricCell.G7: c2}[cell]
    ratio = (component - d2) / component
    return np.diag([-1.0, ratio, ratio])


def _singular_direction(cell, a, b, c, d):
    if cell == MetricCell.G1:
        return np.array([d, b, -a]) / c
    if cell == MetricCell.G2:
        return np.array([d, b, 0.0]) / c
    if cell == MetricCell.G3:
        return np.array([d, -a, 0.0]) / c
    if cell == MetricCell.G4:
        return np.array([d, 0.0, a]) / b
    return np.array([1.0, 0.0, 0.0])


class QuadricForms:
    @staticmethod
    def det_form(basis, tol=None):
        if basis.dimension != 3:
            raise DimensionMismatchError(
                f"determinant form needs a 3-parameter traceless family, "
                f"got {basis.dimension} (apply the PT restriction to singular metrics)"
            )

        def determinant(weights):
            member = EnsembleSolver.generate_h(basis, np.concatenate([[0.0], weights]), tol)
            return member.det.real

        identity = np.eye(3)
        a = np.diag([determinant(identity[i]) for i in range(3)])
        for i in range(3):
            for j in range(i + 1, 3):
                mixed = determinant(identity[i] + identity[j]) - a[i, i] - a[j, j]
                a[i, j] = a[j, i] = 0.5 * mixed

        try:
            eigenvalues, eigenvectors = np.linalg.eigh(a)
        except np.linalg.LinAlgError as e:
            raise DomainError(f"Determinant form diagonalization failed: {str(e)}")

        return DetForm(
            a=a,
            param_names=basis.free_params,
            eigenvalues=eigenvalues,
            eigenvectors=eigenvectors,
            source_cell=basis.cell,
            basis=basis,
        )

    @staticmethod
    def closed_form_a(metric):
        if metric.cell == MetricCell.SCALAR:
            raise CellMismatchError("scalar metric has no closed-form determinant matrix")
        a, b, c = (float(x) for x in metric.g_real)
        if metric.singular:
            q = _singular_direction(metric.cell, a, b, c, metric.d)
            return -np.outer(q, q)
        return _invertible_a(metric.cell, a, b, c, metric.d)

    @staticmethod
    def signature(form, tol=None):
        tol = tol or DEFAULT_TOLERANCE
        return tuple(tol.sign(value, form.scale) for value in form.eigenvalues)

    @staticmethod
    def classify_level_set(form, level, tol=None):
        tol = tol or DEFAULT_TOLERANCE
        signs = QuadricForms.signature(form, tol)
        level_sign = tol.sign(level, max(form.scale, 1.0))
        negative = signs.count(-1)
        positive = signs.count(1)

        if negative == 3:
            return {
                -1: QuadricKind.ELLIPSOID,
                0: QuadricKind.POINT,
                1: QuadricKind.EMPTY,
            }[level_sign]
        if negative == 1 and positive == 2:
            return {
                1: QuadricKind.HYPERBOLOID_ONE_SHEET,
                0: QuadricKind.QUADRIC_CONE,
                -1: QuadricKind.HYPERBOLOID_TWO_SHEETS,
            }[level_sign]
        if negative == 1 and positive == 0:
            return {
                -1: QuadricKind.TWO_PARALLEL_PLANES,
                0: QuadricKind.SINGLE_PLANE,
                1: QuadricKind.EMPTY,
            }[level_sign]

        logger.info(f"Signature {signs} outside the determinant dichotomy")
        return QuadricClassifier.classify(form.a, np.zeros(3), -level, tol)

    @staticmethod
    def predicted_symmetry(kind):
        if kind == QuadricKind.HYPERBOLOID_ONE_SHEET:
            return Symmetry.BROKEN
        return Symmetry.UNBROKEN

    @staticmethod
    def level_set_points(form, level, samples, rng, tol=None):
        """Parameter vectors v with v^T A v = level, sampled in the eigenbasis of A."""
        tol = tol or DEFAULT_TOLERANCE
        kind = QuadricForms.classify_level_set(form, level, tol)
        if kind == QuadricKind.EMPTY:
            raise EmptyLevelSetError(f"level set {level} of the determinant form is empty")

        signs = QuadricForms.signature(form, tol)
        eigenvalues = form.eigenvalues
        flat = [i for i, s in enumerate(signs) if s == 0]
        u = np.zeros((samples, 3))

        if kind == QuadricKind.ELLIPSOID:
            directions = rng.normal(size=(samples, 3))
            directions /= np.linalg.norm(directions, axis=1, keepdims=True)
            u = directions * np.sqrt(level / eigenvalues)
        elif kind in (
            QuadricKind.HYPERBOLOID_ONE_SHEET,
            QuadricKind.HYPERBOLOID_TWO_SHEETS,
            QuadricKind.QUADRIC_CONE,
        ):
            # orient so the pair shares the majority sign
            majority = 1.0 if sum(s > 0 for s in signs) >= 2 else -1.0
            scaled, target = majority * eigenvalues, majority * level
            n = next(i for i, s in enumerate(signs) if s == -majority)
            p, q = (i for i in range(3) if i != n)
            t = rng.uniform(-1.5, 1.5, samples)
            phi = rng.uniform(0.0, 2 * np.pi, samples)
            if kind == QuadricKind.QUADRIC_CONE:
                radius = rng.uniform(0.1, 2.0, samples)
                axial, transverse = radius, radius
            elif target > 0:
                axial = np.sqrt(target) * np.sinh(t)
                transverse = np.sqrt(target) * np.cosh(t)
            else:
                branch = rng.choice([-1.0, 1.0], samples)
                axial = branch * np.sqrt(-target) * np.cosh(t)
                transverse = np.sqrt(-target) * np.sinh(t)
            u[:, n] = axial / np.sqrt(-scaled[n])
            u[:, p] = transverse * np.cos(phi) / np.sqrt(scaled[p])
            u[:, q] = transverse * np.sin(phi) / np.sqrt(scaled[q])
        elif kind in (QuadricKind.TWO_PARALLEL_PLANES, QuadricKind.SINGLE_PLANE):
            n = next(i for i, s in enumerate(signs) if s != 0)
            offset = np.sqrt(level / eigenvalues[n]) if level != 0 else 0.0
            u[:, n] = rng.choice([-1.0, 1.0], samples) * offset
            for i in flat:
                u[:, i] = rng.normal(size=samples)
        elif kind != QuadricKind.POINT:
            raise InvalidInputError(f"sampling is not supported for {kind.value} level sets")

        return u @ form.eigenvectors.T

    @staticmethod
    def symmetry_report(form, level, samples, seed=0, tol=None):
        tol = tol or DEFAULT_TOLERANCE
        if samples < 1:
            raise InvalidInputError("samples must be a positive integer")
        if form.basis is None:
            raise InvalidInputError("determinant form carries no ensemble basis")

        kind = QuadricForms.classify_level_set(form, level, tol)
        predicted = QuadricForms.predicted_symmetry(kind)
        rng = np.random.default_rng(seed)
        points = QuadricForms.level_set_points(form, level, samples, rng, tol)

        counts = Counter()
        for weights in points:
            member = EnsembleSolver.generate_h(
                form.basis, np.concatenate([[0.0], weights]), tol
            )
            counts[PTClassifier.classify(member, tol).symmetry.value] += 1

        matched = counts.get(predicted.value, 0)
        if matched != samples:
            logger.warning(
                f"{samples - matched} of {samples} samples on the {kind.value} "
                f"level set disagree with the predicted {predicted.value} symmetry"
            )
        return SymmetryStats(
            level=float(level),
            kind=kind,
            predicted=predicted,
            samples=samples,
            matched=matched,
            counts=dict(counts),
            seed=int(seed),
        )
