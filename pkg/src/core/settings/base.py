from pydantic import BaseModel, Field
from pydantic_settings import BaseSettings, SettingsConfigDict

from shared.path import APP_ENVIRONMENT, ENV_FILE_PATH


class ProjectSettings(BaseModel):
    NAME: str
    DESCRIPTION: str | None = None
    VERSION: str = "1.0.0"
    CODE: str
    AUTHORS: str


class LogSettings(BaseModel):
    DEBUG: bool = False
    COLORIZE: bool = False
    SERIALIZE: bool = False
    ENQUEUE: bool = False


class SolverSettings(BaseModel):
    KKT_TOLERANCE: float = 1e-9
    MAX_ITERATIONS: int = 100_000
    CG_RTOL: float = 1e-13
    DENSE_GRAM_LIMIT: int = 4096


class MatrixSettings(BaseModel):
    DENSE_LIMIT: int = 4096
    CG_RTOL: float = 1e-10
    CG_MAX_ITERATIONS: int = 10_000
    BLOCK_ROWS: int = 1024
    NEGATIVE_TOLERANCE: float = 1e-9
    NONNEG_ATOL: float = 1e-12
    SAMPLER_MAX_ATTEMPTS: int = 200_000


class EnergySettings(BaseModel):
    MIN_SAMPLES: int = 10_000
    KEY_CHUNK: int = 256


class ComputeSettings(BaseModel):
    THREADS: int = Field(default=1, ge=1)
    NAIVE_CHUNK: int = Field(default=256, ge=1)


class Settings(BaseSettings):
    model_config = SettingsConfigDict(
        env_file=ENV_FILE_PATH,
        env_nested_delimiter="__",
        case_sensitive=True,
        extra="forbid"
    )

    # General settings
    # ----------------------------------------------------------------

    ENVIRONMENT: str = Field(
        default=APP_ENVIRONMENT,
        validate_default=True
    )
    SENTRY_DSN: str | None = None

    TIME_ZONE: str = "UTC"

    # Project metadata
    # ----------------------------------------------------------------

    PROJECT: ProjectSettings = Field(
        default=ProjectSettings(
            NAME="Fractal Repulsion",
            DESCRIPTION="Repulsion, Riesz 1-energy and capacity on generational fractal sets",
            VERSION="1.0.0",
            CODE="frp",
            AUTHORS="R2"
        ),
        validate_default=True
    )

    # Log settings
    # ----------------------------------------------------------------

    LOG: LogSettings = LogSettings(
        DEBUG=False,
        COLORIZE=False,
        SERIALIZE=False,
        ENQUEUE=False
    )

    # Numerical settings
    # ----------------------------------------------------------------

    SOLVER: SolverSettings = SolverSettings()
    MATRIX: MatrixSettings = MatrixSettings()
    ENERGY: EnergySettings = EnergySettings()
    COMPUTE: ComputeSettings = ComputeSettings()
