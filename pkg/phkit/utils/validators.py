import math

from phkit.exceptions import InvalidInputError
from phkit.models import GridSpec

OUTPUT_FORMATS = {"csv", "json"}


def validate_finite(value, name):
    try:
        value = float(value)
    except (TypeError, ValueError):
        raise InvalidInputError(f"{name} must be a number")
    if not math.isfinite(value):
        raise InvalidInputError(f"{name} must be finite")
    return value


def parse_float_list(text, name="list"):
    if text is None or not str(text).strip():
        raise InvalidInputError(f"{name} cannot be empty")

    values = []
    for item in str(text).split(","):
        item = item.strip()
        if not item:
            raise InvalidInputError(f"{name} contains an empty entry")
        values.append(validate_finite(item, name))
    return values


def parse_grid(text, default_resolution=64):
    """Parse "min,max[,res]" into a cubic grid."""
    values = parse_float_list(text, "grid")
    if len(values) == 2:
        values.append(default_resolution)
    if len(values) != 3:
        raise InvalidInputError("grid must be given as min,max[,resolution]")

    low, high, resolution = values
    if not float(resolution).is_integer():
        raise InvalidInputError("grid resolution must be an integer")
    return GridSpec.cube(low, high, int(resolution))


def validate_output_format(fmt):
    if not fmt:
        return False

    return fmt.lower() in OUTPUT_FORMATS


def validate_sample_count(samples):
    if samples is None:
        return None
    if int(samples) < 1:
        raise InvalidInputError("samples must be a positive integer")
    return int(samples)
