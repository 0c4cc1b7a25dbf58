import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Optional, Tuple

import numpy as np

from phkit.exceptions import InvalidInputError
from phkit.utils.numerics import Tolerance


class PTCellKind(str, Enum):
    S1 = "S1"
    S2 = "S2"
    S3 = "S3"
    S4 = "S4"
    NOT_PT = "NotPT"


class Symmetry(str, Enum):
    UNBROKEN = "Unbroken"
    BROKEN = "Broken"
    NOT_APPLICABLE = "NotApplicable"


class Spectrum(str, Enum):
    REAL_DISTINCT = "RealDistinct"
    REAL_DEGENERATE = "RealDegenerate"
    COMPLEX_CONJUGATE = "ComplexConjugate"
    COMPLEX = "Complex"


class MetricCell(str, Enum):
    G1 = "G1"
    G2 = "G2"
    G3 = "G3"
    G4 = "G4"
    G5 = "G5"
    G6 = "G6"
    G7 = "G7"
    SCALAR = "ScalarG"


class QuadricKind(str, Enum):
    ELLIPSOID = "Ellipsoid"
    HYPERBOLOID_ONE_SHEET = "Hyperboloid1Sheet"
    HYPERBOLOID_TWO_SHEETS = "Hyperboloid2Sheets"
    QUADRIC_CONE = "QuadricCone"
    ELLIPTIC_PARABOLOID = "EllipticParaboloid"
    HYPERBOLIC_PARABOLOID = "HyperbolicParaboloid"
    CYLINDER = "Cylinder"
    HYPERBOLIC_CYLINDER = "HyperbolicCylinder"
    PARABOLIC_CYLINDER = "ParabolicCylinder"
    TWO_INTERSECTING_PLANES = "TwoIntersectingPlanes"
    TWO_PARALLEL_PLANES = "TwoParallelPlanes"
    SINGLE_PLANE = "SinglePlane"
    LINE = "Line"
    POINT = "Point"
    EMPTY = "Empty"
    WHOLE_SPACE = "WholeSpace"


def _finite_scalar(value, name):
    try:
        value = float(value)
    except (TypeError, ValueError):
        raise InvalidInputError(f"{name} must be a real number")
    if not math.isfinite(value):
        raise InvalidInputError(f"{name} must be finite")
    return value


def _frozen_array(values, shape, name):
    try:
        array = np.array(values, dtype=float)
    except (TypeError, ValueError):
        raise InvalidInputError(f"{name} must contain real numbers")
    if array.shape != shape:
        raise InvalidInputError(f"{name} must have shape {shape}, got {array.shape}")
    if not np.all(np.isfinite(array)):
        raise InvalidInputError(f"{name} contains non-finite values")
    array.setflags(write=False)
    return array


def _complex_pair(value):
    return [float(value.real), float(value.imag)]


@dataclass(frozen=True, eq=False)
class PauliForm:
    """H = h0 * sigma0 + sigma . h with h0 = h0_real + i h0_imag, h = h_real + i h_imag."""

    h0_real: float
    h0_imag: float
    h_real: np.ndarray
    h_imag: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "h0_real", _finite_scalar(self.h0_real, "h0_real"))
        object.__setattr__(self, "h0_imag", _finite_scalar(self.h0_imag, "h0_imag"))
        object.__setattr__(self, "h_real", _frozen_array(self.h_real, (3,), "h_real"))
        object.__setattr__(self, "h_imag", _frozen_array(self.h_imag, (3,), "h_imag"))

    @classmethod
    def from_vector(cls, vector, h0_real=0.0, h0_imag=0.0):
        vector = np.asarray(vector, dtype=float).reshape(-1)
        if vector.shape != (6,):
            raise InvalidInputError("Pauli vector must have 6 components (h_real, h_imag)")
        return cls(h0_real, h0_imag, vector[:3], vector[3:])

    @property
    def h0(self):
        return complex(self.h0_real, self.h0_imag)

    @property
    def h(self):
        return self.h_real + 1j * self.h_imag

    @property
    def vector(self):
        return np.concatenate([self.h_real, self.h_imag])

    @property
    def trace(self):
        return 2 * self.h0

    @property
    def h_dot_h(self):
        return complex(
            self.h_real @ self.h_real - self.h_imag @ self.h_imag,
            2 * (self.h_real @ self.h_imag),
        )

    @property
    def det(self):
        return self.h0 * self.h0 - self.h_dot_h

    @property
    def scale(self):
        return float(
            max(
                abs(self.h0_real),
                abs(self.h0_imag),
                np.abs(self.h_real).max(),
                np.abs(self.h_imag).max(),
            )
        )

    def traceless(self):
        return PauliForm(0.0, 0.0, self.h_real, self.h_imag)

    def to_dict(self):
        return {
            "h0": [self.h0_real, self.h0_imag],
            "hR": self.h_real.tolist(),
            "hI": self.h_imag.tolist(),
        }


@dataclass(frozen=True)
class EigenPair:
    e1: complex
    e2: complex

    def to_dict(self):
        return {"e1": _complex_pair(self.e1), "e2": _complex_pair(self.e2)}


@dataclass(frozen=True)
class IdentityReport:
    product_residual: float
    determinant_residual: float
    norm_residual: float
    tolerance: float

    @property
    def holds(self):
        return max(
            self.product_residual, self.determinant_residual, self.norm_residual
        ) <= self.tolerance

    def to_dict(self):
        return {
            "product_residual": self.product_residual,
            "determinant_residual": self.determinant_residual,
            "norm_residual": self.norm_residual,
            "holds": self.holds,
        }


@dataclass(frozen=True)
class PTCell:
    cell: PTCellKind
    symmetry: Symmetry
    spectrum: Spectrum
    diagonalizable: bool
    normal: bool

    def to_dict(self):
        return {
            "cell": self.cell.value,
            "symmetry": self.symmetry.value,
            "spectrum": self.spectrum.value,
            "diagonalizable": self.diagonalizable,
            "normal": self.normal,
        }


@dataclass(frozen=True)
class PredicateReport:
    cell: PTCellKind
    checks: Dict[str, Optional[bool]]
    details: Dict[str, float] = field(default_factory=dict)

    @property
    def applicable(self):
        return {name: value for name, value in self.checks.items() if value is not None}

    @property
    def all_hold(self):
        return all(self.applicable.values())

    def to_dict(self):
        return {
            "cell": self.cell.value,
            "checks": dict(self.checks),
            "details": dict(self.details),
            "all_hold": self.all_hold,
        }


@dataclass(frozen=True, eq=False)
class HermitianMetric:
    """G = d * sigma0 + sigma . g_real with g_real = (a, b, c)."""

    d: float
    g_real: np.ndarray
    cell: MetricCell
    singular: bool

    def __post_init__(self):
        object.__setattr__(self, "d", _finite_scalar(self.d, "d"))
        object.__setattr__(self, "g_real", _frozen_array(self.g_real, (3,), "g_real"))
        object.__setattr__(self, "cell", MetricCell(self.cell))
        object.__setattr__(self, "singular", bool(self.singular))

    @property
    def a(self):
        return float(self.g_real[0])

    @property
    def b(self):
        return float(self.g_real[1])

    @property
    def c(self):
        return float(self.g_real[2])

    @property
    def det(self):
        return self.d * self.d - float(self.g_real @ self.g_real)

    @property
    def trace(self):
        return 2 * self.d

    @property
    def scale(self):
        return float(max(abs(self.d), np.abs(self.g_real).max()))

    @property
    def is_zero(self):
        return self.scale == 0.0

    @property
    def components(self):
        return np.concatenate([[self.d], self.g_real])

    def to_pauli(self):
        return PauliForm(self.d, 0.0, self.g_real, np.zeros(3))

    def to_dict(self):
        return {
            "d": self.d,
            "gR": self.g_real.tolist(),
            "cell": self.cell.value,
            "singular": self.singular,
            "det": self.det,
        }


@dataclass(frozen=True)
class MetricClass:
    det_sign: int
    trace_zero: bool

    def to_dict(self):
        return {"det_sign": self.det_sign, "trace_zero": self.trace_zero}


@dataclass(frozen=True, eq=False)
class ConstraintMatrix:
    matrix: np.ndarray
    metric: HermitianMetric

    @property
    def m1(self):
        return self.matrix[:3, :3]

    @property
    def m2(self):
        return self.matrix[:3, 3:]

    @property
    def m3(self):
        return self.matrix[3:, :3]

    @property
    def m4(self):
        return self.matrix[3:, 3:]


@dataclass(frozen=True)
class PTConstraint:
    """The eliminated parameter equals the weighted sum of the remaining ones."""

    eliminated: str
    coefficients: Dict[str, float]

    def describe(self):
        terms = " + ".join(
            f"({weight:.17g})*{name}" for name, weight in self.coefficients.items()
        )
        return f"{self.eliminated} = {terms or '0'}"

    def to_dict(self):
        return {
            "eliminated": self.eliminated,
            "coefficients": dict(self.coefficients),
            "expression": self.describe(),
        }


@dataclass(frozen=True, eq=False)
class EnsembleBasis:
    vectors: np.ndarray
    free_params: Tuple[str, ...]
    coordinates: Tuple[Optional[str], ...]
    metric: HermitianMetric
    cell: MetricCell
    source: str
    trace_param: str = "k0"
    includes_trace_param: bool = True
    pt_functional: Optional[np.ndarray] = None
    pt_restricted: bool = False
    pt_constraint: Optional[PTConstraint] = None

    def __post_init__(self):
        vectors = np.array(self.vectors, dtype=float).reshape(-1, 6)
        vectors.setflags(write=False)
        object.__setattr__(self, "vectors", vectors)
        object.__setattr__(self, "free_params", tuple(self.free_params))
        object.__setattr__(self, "coordinates", tuple(self.coordinates))
        if len(self.free_params) != vectors.shape[0]:
            raise InvalidInputError("free_params must name every basis vector")
        if len(self.coordinates) != vectors.shape[0]:
            raise InvalidInputError("coordinates must label every basis vector")
        if self.pt_functional is not None:
            functional = np.array(self.pt_functional, dtype=float).reshape(-1)
            if functional.shape != (vectors.shape[0],):
                raise InvalidInputError("PT functional must weight every parameter")
            functional.setflags(write=False)
            object.__setattr__(self, "pt_functional", functional)

    @property
    def dimension(self):
        return int(self.vectors.shape[0])

    @property
    def param_count(self):
        return self.dimension + (1 if self.includes_trace_param else 0)

    @property
    def singular(self):
        return self.metric.singular

    @property
    def basis_matrices(self):
        return [PauliForm.from_vector(vector) for vector in self.vectors]

    def to_dict(self):
        data = {
            "cell": self.cell.value,
            "source": self.source,
            "singular": self.singular,
            "trace_param": self.trace_param if self.includes_trace_param else None,
            "free_params": list(self.free_params),
            "coordinates": list(self.coordinates),
            "vectors": self.vectors.tolist(),
            "pt_restricted": self.pt_restricted,
        }
        if self.pt_functional is not None:
            data["pt_functional"] = self.pt_functional.tolist()
        if self.pt_constraint is not None:
            data["pt_constraint"] = self.pt_constraint.to_dict()
        return data


@dataclass(frozen=True, eq=False)
class DetForm:
    a: np.ndarray
    param_names: Tuple[str, ...]
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    source_cell: MetricCell
    basis: Optional[EnsembleBasis] = None

    def evaluate(self, points):
        points = np.atleast_2d(np.asarray(points, dtype=float))
        return np.einsum("ni,ij,nj->n", points, self.a, points)

    @property
    def scale(self):
        return float(np.abs(self.eigenvalues).max())

    def to_dict(self):
        return {
            "A": self.a.tolist(),
            "param_names": list(self.param_names),
            "eigenvalues": self.eigenvalues.tolist(),
            "source_cell": self.source_cell.value,
        }


@dataclass(frozen=True)
class SymmetryStats:
    level: float
    kind: QuadricKind
    predicted: Symmetry
    samples: int
    matched: int
    counts: Dict[str, int]
    seed: int

    @property
    def fraction(self):
        return self.matched / self.samples if self.samples else 1.0

    def to_dict(self):
        return {
            "level": self.level,
            "class": self.kind.value,
            "predicted": self.predicted.value,
            "samples": self.samples,
            "matched": self.matched,
            "symmetry_fraction": self.fraction,
            "counts": dict(self.counts),
            "seed": self.seed,
        }


@dataclass(frozen=True, eq=False)
class QuadraticSurface:
    """Surface x^T A x + b . x + c = 0 in the metric coordinates (x, y, z)."""

    a: np.ndarray
    b: np.ndarray
    c: float
    index: int = 0

    def __post_init__(self):
        a = _frozen_array(self.a, (3, 3), "A")
        if not np.allclose(a, a.T, rtol=0.0, atol=1e-12 * max(1.0, np.abs(a).max())):
            raise InvalidInputError("quadric matrix A must be symmetric")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", _frozen_array(self.b, (3,), "b"))
        object.__setattr__(self, "c", _finite_scalar(self.c, "c"))
        object.__setattr__(self, "index", int(self.index))

    def evaluate(self, points):
        points = np.atleast_2d(np.asarray(points, dtype=float))
        return np.einsum("ni,ij,nj->n", points, self.a, points) + points @ self.b + self.c

    @property
    def scale(self):
        return float(max(np.abs(self.a).max(), np.abs(self.b).max(), abs(self.c)))

    def to_dict(self):
        return {
            "index": self.index,
            "A": self.a.tolist(),
            "b": self.b.tolist(),
            "c": self.c,
        }


@dataclass(frozen=True, eq=False)
class GSolutionSet:
    d: float
    dimension: int
    basis: Tuple[HermitianMetric, ...]
    particular: Optional[HermitianMetric] = None
    singular_points: Tuple[float, ...] = ()

    def point(self, params=()):
        params = np.asarray(params, dtype=float).reshape(-1)
        if params.shape != (self.dimension,):
            raise InvalidInputError(
                f"solution set has {self.dimension} parameters, got {params.size}"
            )
        g_real = np.zeros(3) if self.particular is None else self.particular.g_real.copy()
        for weight, direction in zip(params, self.basis):
            g_real = g_real + weight * direction.g_real
        return g_real

    def to_dict(self):
        return {
            "d": self.d,
            "solution_dimension": self.dimension,
            "basis": [direction.g_real.tolist() for direction in self.basis],
            "particular": None if self.particular is None else self.particular.to_dict(),
            "singular_points": list(self.singular_points),
        }


@dataclass(frozen=True, eq=False)
class GridSpec:
    minimum: np.ndarray
    maximum: np.ndarray
    resolution: Tuple[int, int, int] = (64, 64, 64)

    def __post_init__(self):
        minimum = _frozen_array(np.broadcast_to(self.minimum, (3,)), (3,), "grid min")
        maximum = _frozen_array(np.broadcast_to(self.maximum, (3,)), (3,), "grid max")
        if not np.all(minimum < maximum):
            raise InvalidInputError("grid min must be below max on every axis")
        resolution = np.broadcast_to(np.asarray(self.resolution), (3,))
        if not all(float(n).is_integer() and n >= 2 for n in resolution):
            raise InvalidInputError("grid resolution must be an integer >= 2 per axis")
        object.__setattr__(self, "minimum", minimum)
        object.__setattr__(self, "maximum", maximum)
        object.__setattr__(self, "resolution", tuple(int(n) for n in resolution))

    @classmethod
    def cube(cls, low, high, resolution):
        return cls(np.full(3, low), np.full(3, high), (resolution,) * 3)

    @property
    def point_count(self):
        nx, ny, nz = self.resolution
        return nx * ny * nz

    @property
    def spacing(self):
        return (self.maximum - self.minimum) / (np.asarray(self.resolution) - 1)

    def axes(self):
        return tuple(
            np.linspace(self.minimum[i], self.maximum[i], self.resolution[i])
            for i in range(3)
        )

    def to_dict(self):
        return {
            "min": self.minimum.tolist(),
            "max": self.maximum.tolist(),
            "resolution": list(self.resolution),
        }


@dataclass(frozen=True, eq=False)
class FieldTable:
    grid: GridSpec
    values: np.ndarray

    def rows(self):
        xs, ys, zs = self.grid.axes()
        x, y, z = np.meshgrid(xs, ys, zs, indexing="ij")
        return np.column_stack([x.ravel(), y.ravel(), z.ravel(), self.values.ravel()])

    def has_sign_change(self, level=0.0):
        shifted = self.values - level
        return bool(shifted.min() < 0.0 < shifted.max() or np.any(shifted == 0.0))


@dataclass(frozen=True)
class RunConfig:
    atol: float = 1e-12
    rtol: float = 1e-10
    seed: int = 0
    output: Optional[str] = None
    switchover: float = 1e-6
    rank_cutoff: float = 1e-10
    symmetry_samples: int = 500
    grid_min: float = -3.0
    grid_max: float = 3.0
    grid_resolution: int = 64
    max_grid_points: int = 2**24
    export_workers: int = 4

    def __post_init__(self):
        self._validate_positive("atol", self.atol)
        self._validate_positive("rtol", self.rtol)
        self._validate_positive("switchover", self.switchover)
        self._validate_positive("rank_cutoff", self.rank_cutoff)
        if int(self.seed) < 0:
            raise InvalidInputError("seed must be a non-negative integer")
        if self.export_workers < 1:
            raise InvalidInputError("export_workers must be at least 1")

    @staticmethod
    def _validate_positive(name, value):
        if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0):
            raise InvalidInputError(f"{name} must be a positive finite number")

    @property
    def tolerance(self):
        return Tolerance(atol=self.atol, rtol=self.rtol)
