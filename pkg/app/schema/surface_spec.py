from typing import Optional, Union

from pydantic import BaseModel, ConfigDict


class SurfaceSpec(BaseModel):
    """A parsed surface spec file: which catalog surface to build and how to sample it."""

    model_config = ConfigDict(frozen=True)

    name: str
    params: dict[str, Union[float, str]] = {}
    grid: Optional[int] = None
    fd_step: Optional[float] = None
    skip_supports: list[str] = []
    tolerances: dict[str, float] = {}
