from typing import Optional

from pydantic import field_validator, ValidationInfo
from pydantic_settings import (
    BaseSettings,
    PydanticBaseSettingsSource,
    SettingsConfigDict,
)


class Settings(BaseSettings):
    PROJECT_NAME: str = "spacelike-cmc"
    VERSION: str = "0.1.0"
    LOG_LEVEL: str = "WARNING"

    # sampling
    GRID: int = 129
    FD_STEP: Optional[float] = None
    FD_STEP_FACTOR: float = 1e-4

    # geometry and umbilics
    ISOTHERMAL_TOL: float = 1e-6
    CR_TOL: float = 1e-3
    UMBILIC_TOL: float = 1e-6
    MERGE_RADIUS_CELLS: float = 3.0
    INTERIOR_LOOP_CELLS: float = 5.0
    BOUNDARY_ARC_CELLS: float = 8.0
    LOOP_SAMPLES: int = 64
    MAX_LOOP_SAMPLES: int = 4096
    INDEX_TOL: float = 0.05
    EDGE_ALIGNMENT_TOL: float = 1e-4

    # capillary
    CAPILLARY_SAMPLES: int = 128
    CAPILLARY_SPREAD_TOL: float = 1e-4
    JOACHIMSTHAL_TOL: float = 1e-5

    # tracing
    TRACE_STEP: float = 0.01
    TRACE_MAX_STEPS: int = 2000
    UMBILIC_STOP_TOL: float = 1e-5

    model_config = SettingsConfigDict(validate_assignment=True)

    @field_validator("GRID")
    @classmethod
    def validate_grid(cls, v: int, values: ValidationInfo) -> int:
        if v < 5:
            raise ValueError("GRID must be at least 5")
        return v

    @field_validator("FD_STEP")
    @classmethod
    def validate_fd_step(cls, v: Optional[float], values: ValidationInfo):
        if v is not None and v <= 0:
            raise ValueError("FD_STEP must be positive")
        return v

    @classmethod
    def settings_customise_sources(
        cls,
        settings_cls: type[BaseSettings],
        init_settings: PydanticBaseSettingsSource,
        env_settings: PydanticBaseSettingsSource,
        dotenv_settings: PydanticBaseSettingsSource,
        file_secret_settings: PydanticBaseSettingsSource,
    ) -> tuple[PydanticBaseSettingsSource, ...]:
        # configuration comes from flags and spec files only, never the environment
        return (init_settings,)

    def cell_size(self, extent: float) -> float:
        """Parameter-plane grid spacing for a domain of the given extent."""
        return extent / (self.GRID - 1)

    def with_overrides(self, **overrides) -> "Settings":
        """Return a validated copy with the non-None overrides applied."""
        update = {k: v for k, v in overrides.items() if v is not None}
        return Settings(**{**self.model_dump(), **update})


settings = Settings()
