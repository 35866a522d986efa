import datetime
from typing import Any

from pydantic import BaseModel, Field


class RunManifest(BaseModel):
    """What produced an output file; everything but the timing fields is reproducible."""
    command: str
    parameters: dict[str, Any]
    seed: int
    tool_version: str
    started_at: datetime.datetime | None = None
    wall_time: float | None = Field(default=None, ge=0)
    summary: dict[str, Any] | None = None
