import logging
import math
import os
import sys

from config import config_by_name
from phkit.models import RunConfig

logger = logging.getLogger(__name__)

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


def configure_logging(level="WARNING"):
    logging.basicConfig(stream=sys.stderr, format=LOG_FORMAT)
    logging.getLogger().setLevel(getattr(logging, str(level).upper(), logging.WARNING))


def _tolerance_override():
    raw = os.environ.get("PHKIT_TOLERANCE")
    if raw is None or not raw.strip():
        return None
    try:
        value = float(raw)
    except ValueError:
        logger.warning(f"Ignoring PHKIT_TOLERANCE={raw!r}: not a number")
        return None
    if not math.isfinite(value) or value <= 0:
        logger.warning(f"Ignoring PHKIT_TOLERANCE={raw!r}: must be positive and finite")
        return None
    return value


def validate_tolerances(run_config):
    """Warn about tolerance settings that make rank and cell decisions unreliable."""
    problems = []
    if run_config.rtol < 1e-15:
        problems.append(f"rtol={run_config.rtol} is below double precision")
    if run_config.rtol > 1e-4:
        problems.append(f"rtol={run_config.rtol} merges distinct cells")
    if run_config.rank_cutoff < run_config.rtol:
        problems.append(
            f"rank cutoff {run_config.rank_cutoff} is tighter than rtol {run_config.rtol}"
        )

    if problems:
        logger.warning(f"Tolerance configuration: {'; '.join(problems)}")
        return False
    return True


def create_config(config_name=None, **overrides):
    if config_name is None:
        config_name = os.environ.get("PHKIT_ENV", "development")

    config_class = config_by_name.get(config_name, config_by_name["default"])
    rtol = _tolerance_override()
    settings = {
        "atol": config_class.ATOL,
        "rtol": config_class.RTOL if rtol is None else rtol,
        "seed": config_class.SEED,
        "switchover": config_class.SWITCHOVER_TOL,
        "rank_cutoff": config_class.RANK_CUTOFF,
        "symmetry_samples": config_class.SYMMETRY_SAMPLES,
        "grid_min": config_class.GRID_MIN,
        "grid_max": config_class.GRID_MAX,
        "grid_resolution": config_class.GRID_RESOLUTION,
        "max_grid_points": config_class.MAX_GRID_POINTS,
        "export_workers": config_class.EXPORT_WORKERS,
    }
    settings.update({key: value for key, value in overrides.items() if value is not None})

    run_config = RunConfig(**settings)
    configure_logging(config_class.LOG_LEVEL)
    validate_tolerances(run_config)
    return run_config
