import os

from dotenv import load_dotenv

load_dotenv()


class Config:
    ATOL = float(os.environ.get("PHKIT_ATOL", 1e-12))
    RTOL = float(os.environ.get("PHKIT_RTOL", 1e-10))
    SWITCHOVER_TOL = float(os.environ.get("PHKIT_SWITCHOVER_TOL", 1e-6))
    RANK_CUTOFF = float(os.environ.get("PHKIT_RANK_CUTOFF", 1e-10))

    SEED = int(os.environ.get("PHKIT_SEED", 0))
    SYMMETRY_SAMPLES = int(os.environ.get("PHKIT_SYMMETRY_SAMPLES", 500))

    GRID_MIN = float(os.environ.get("PHKIT_GRID_MIN", -3.0))
    GRID_MAX = float(os.environ.get("PHKIT_GRID_MAX", 3.0))
    GRID_RESOLUTION = int(os.environ.get("PHKIT_GRID_RESOLUTION", 64))
    MAX_GRID_POINTS = int(os.environ.get("PHKIT_MAX_GRID_POINTS", 2**24))
    EXPORT_WORKERS = int(os.environ.get("PHKIT_EXPORT_WORKERS", 4))

    LOG_LEVEL = os.environ.get("PHKIT_LOG_LEVEL", "WARNING")


class DevelopmentConfig(Config):
    LOG_LEVEL = os.environ.get("PHKIT_LOG_LEVEL", "INFO")


class ProductionConfig(Config):
    EXPORT_WORKERS = int(os.environ.get("PHKIT_EXPORT_WORKERS", os.cpu_count() or 4))


class TestingConfig(Config):
    LOG_LEVEL = "DEBUG"
    EXPORT_WORKERS = 1
    SEED = 12345


config_by_name = {
    "development": DevelopmentConfig,
    "production": ProductionConfig,
    "testing": TestingConfig,
    "default": DevelopmentConfig,
}
