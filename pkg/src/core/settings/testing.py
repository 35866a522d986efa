from pydantic import Field

from core.settings.base import ProjectSettings, Settings


class TestingSettings(Settings):
    PROJECT: ProjectSettings = Field(
        default=ProjectSettings(
            NAME="Fractal Repulsion",
            DESCRIPTION="Fractal Repulsion test run",
            VERSION="1.0.0-test",
            CODE="frp-test",
            AUTHORS="R2"
        ),
        validate_default=True
    )
