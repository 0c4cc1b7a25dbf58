import csv
import io
import logging
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from phkit.exceptions import GridTooLargeError, InvalidInputError
from phkit.models import DetForm, FieldTable, QuadraticSurface
from phkit.services.matrix_io import MatrixIO
from phkit.utils.numerics import DEFAULT_TOLERANCE

logger = logging.getLogger(__name__)

MAX_GRID_POINTS = 2**24


class ExportService:
    @staticmethod
    def field_function(source):
        if isinstance(source, (QuadraticSurface, DetForm)):
            return source.evaluate
        if callable(source):
            return source
        raise InvalidInputError(f"cannot sample a field from {type(source).__name__}")

    @staticmethod
    def sample_scalar_field(source, grid, workers=1, max_points=MAX_GRID_POINTS):
        if grid.point_count > max_points:
            raise GridTooLargeError(
                f"grid has {grid.point_count} points, limit is {max_points}"
            )
        field = ExportService.field_function(source)
        xs, ys, zs = grid.axes()
        y_plane, z_plane = np.meshgrid(ys, zs, indexing="ij")
        y_flat, z_flat = y_plane.ravel(), z_plane.ravel()

        def slab(x):
            points = np.column_stack([np.full(y_flat.size, x), y_flat, z_flat])
            return np.asarray(field(points), dtype=float).reshape(y_plane.shape)

        with ThreadPoolExecutor(max_workers=max(1, int(workers))) as executor:
            values = np.stack(list(executor.map(slab, xs)))

        logger.info(f"Sampled {grid.point_count} grid points with {workers} worker(s)")
        return FieldTable(grid=grid, values=values)

    @staticmethod
    def _tangent_points(shifted, axes, band):
        # level sets touched without a sign change: vertex of the parabola
        # through three consecutive nodes, exact for quadratic fields
        chunks = []
        for axis in range(3):
            count = shifted.shape[axis]
            if count < 3:
                continue
            f0 = np.take(shifted, np.arange(count - 2), axis=axis)
            f1 = np.take(shifted, np.arange(1, count - 1), axis=axis)
            f2 = np.take(shifted, np.arange(2, count), axis=axis)
            curvature = f0 - 2 * f1 + f2
            with np.errstate(divide="ignore", invalid="ignore"):
                offset = (f0 - f2) / (2 * curvature)
                vertex = f1 - (f0 - f2) ** 2 / (8 * curvature)
            touching = (
                ((f0 < 0) == (f1 < 0))
                & ((f1 < 0) == (f2 < 0))
                & (np.abs(f1) <= np.abs(f0))
                & (np.abs(f1) <= np.abs(f2))
                & (curvature != 0)
                & (np.abs(offset) <= 1.0)
                & (np.abs(vertex) <= band)
            )
            index = np.nonzero(touching)
            if index[0].size == 0:
                continue
            coordinates = [axes[k][index[k] + (1 if k == axis else 0)] for k in range(3)]
            step = axes[axis][1] - axes[axis][0]
            coordinates[axis] = coordinates[axis] + offset[index] * step
            chunks.append(np.column_stack(coordinates))
        return chunks

    @staticmethod
    def extract_isosurface_points(table, level=0.0, tol=None):
        tol = tol or DEFAULT_TOLERANCE
        shifted = table.values - level
        axes = table.grid.axes()
        chunks = []
        for axis in range(3):
            count = shifted.shape[axis]
            low = np.take(shifted, np.arange(count - 1), axis=axis)
            high = np.take(shifted, np.arange(1, count), axis=axis)
            crossing = (low < 0) != (high < 0)
            index = np.nonzero(crossing)
            if index[0].size == 0:
                continue
            fraction = low[index] / (low[index] - high[index])
            coordinates = [axes[k][index[k]] for k in range(3)]
            step = axes[axis][index[axis] + 1] - axes[axis][index[axis]]
            coordinates[axis] = coordinates[axis] + fraction * step
            chunks.append(np.column_stack(coordinates))

        band = tol.band(max(float(np.abs(shifted).max()), 1.0))
        chunks.extend(ExportService._tangent_points(shifted, axes, band))

        if not chunks:
            return np.zeros((0, 3))
        points = np.vstack(chunks)
        # nodes on the level set are reached from several edges
        keys = np.round(points / table.grid.spacing, 6) + 0.0
        _, first = np.unique(keys, axis=0, return_index=True)
        points = points[np.sort(first)]
        order = np.lexsort((points[:, 2], points[:, 1], points[:, 0]))
        return points[order]

    @staticmethod
    def render(rows, columns, fmt):
        rows = np.asarray(rows, dtype=float).reshape(-1, len(columns))
        if fmt == "csv":
            buffer = io.StringIO()
            writer = csv.writer(buffer, lineterminator="\n")
            writer.writerow(columns)
            for row in rows:
                writer.writerow([repr(float(value)) for value in row])
            return buffer.getvalue()
        if fmt == "json":
            return MatrixIO.dumps({"columns": list(columns), "rows": rows.tolist()})
        raise InvalidInputError(f"unsupported export format: {fmt}")
