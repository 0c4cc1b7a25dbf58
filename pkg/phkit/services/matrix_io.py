import json
import logging
import math
import os

import numpy as np

from phkit.analyzers.pauli_core import PauliCore
from phkit.exceptions import InvalidInputError, MatrixFileError
from phkit.models import PauliForm

logger = logging.getLogger(__name__)


def _to_jsonable(value):
    if isinstance(value, dict):
        return {str(key): _to_jsonable(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [_to_jsonable(item) for item in value]
    if isinstance(value, np.ndarray):
        return _to_jsonable(value.tolist())
    if isinstance(value, (np.bool_, bool)):
        return bool(value)
    if isinstance(value, (np.integer, int)):
        return int(value)
    if isinstance(value, (np.floating, float)):
        value = float(value)
        if not math.isfinite(value):
            raise InvalidInputError(f"cannot serialize non-finite number {value}")
        return value
    if isinstance(value, complex):
        return [value.real, value.imag]
    if hasattr(value, "value"):
        return value.value
    return value


def _complex_entry(entry, where):
    if isinstance(entry, (int, float)) and not isinstance(entry, bool):
        return complex(entry, 0.0)
    if (
        isinstance(entry, (list, tuple))
        and len(entry) == 2
        and all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in entry)
    ):
        return complex(entry[0], entry[1])
    raise InvalidInputError(f"{where} must be a number or a [re, im] pair")


def _real_triple(values, where):
    if not isinstance(values, (list, tuple)) or len(values) != 3:
        raise InvalidInputError(f"{where} must be a list of three numbers")
    if not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in values):
        raise InvalidInputError(f"{where} must contain numbers only")
    return [float(x) for x in values]


class MatrixIO:
    @staticmethod
    def read_json(path):
        try:
            with open(path, "r", encoding="utf-8") as handle:
                return json.load(handle)
        except json.JSONDecodeError as e:
            raise MatrixFileError(f"{path} is not valid JSON: {str(e)}")
        except OSError as e:
            raise MatrixFileError(f"Cannot read {path}: {str(e)}")

    @staticmethod
    def parse_matrix(document):
        if not isinstance(document, dict):
            raise InvalidInputError("matrix document must be a JSON object")

        if "pauli" in document:
            pauli = document["pauli"]
            if not isinstance(pauli, dict):
                raise InvalidInputError('"pauli" must be an object')
            h0 = _complex_entry(pauli.get("h0", 0.0), "pauli.h0")
            h_real = _real_triple(pauli.get("hR", [0, 0, 0]), "pauli.hR")
            h_imag = _real_triple(pauli.get("hI", [0, 0, 0]), "pauli.hI")
            return PauliForm(h0.real, h0.imag, h_real, h_imag)

        if "entries" in document:
            rows = document["entries"]
            if not isinstance(rows, list) or len(rows) != 2:
                raise InvalidInputError('"entries" must be a 2x2 array')
            matrix = np.empty((2, 2), dtype=complex)
            for i, row in enumerate(rows):
                if not isinstance(row, list) or len(row) != 2:
                    raise InvalidInputError('"entries" must be a 2x2 array')
                for j, entry in enumerate(row):
                    matrix[i, j] = _complex_entry(entry, f"entries[{i}][{j}]")
            return PauliCore.decompose(matrix)

        raise InvalidInputError('matrix document needs an "entries" or "pauli" key')

    @staticmethod
    def read_matrix(path):
        document = MatrixIO.read_json(path)
        logger.debug(f"Loaded matrix document from {path}")
        return MatrixIO.parse_matrix(document)

    @staticmethod
    def dumps(data):
        return json.dumps(_to_jsonable(data), indent=2, allow_nan=False) + "\n"

    @staticmethod
    def write_text(text, path=None, stream=None):
        if path is None:
            stream.write(text)
            return None
        try:
            directory = os.path.dirname(os.path.abspath(path))
            os.makedirs(directory, exist_ok=True)
            with open(path, "w", encoding="utf-8", newline="") as handle:
                handle.write(text)
        except OSError as e:
            raise MatrixFileError(f"Cannot write {path}: {str(e)}")
        logger.info(f"Wrote {len(text)} characters to {path}")
        return path

    @staticmethod
    def write_json(data, path=None, stream=None):
        return MatrixIO.write_text(MatrixIO.dumps(data), path, stream)
