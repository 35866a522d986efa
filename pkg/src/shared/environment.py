try:
    from enum import StrEnum
except ImportError:  # Python < 3.11
    from enum import Enum

    class StrEnum(str, Enum):
        def __str__(self) -> str:
            return str.__str__(self)

        def __format__(self, format_spec: str) -> str:
            return str.__format__(str(self), format_spec)


class AppEnvironment(StrEnum):
    """Runtime environment of a run; selects the settings class and the `.envs/` file."""

    LOCAL = "local", "local"
    DEVELOPMENT = "development", "dev"
    STAGING = "staging", "stg"
    PRODUCTION = "production", "prod"
    TESTING = "testing", "test"

    def __new__(cls, value: str, suffix: str) -> "AppEnvironment":
        obj = str.__new__(cls, value)
        obj._value_ = value
        obj._suffix = suffix  # type: ignore
        return obj

    @property
    def suffix(self) -> str:
        return self._suffix  # type: ignore

    @property
    def reports_errors(self) -> bool:
        return self in (AppEnvironment.DEVELOPMENT, AppEnvironment.STAGING, AppEnvironment.PRODUCTION)

    @property
    def env_file_name(self) -> str:
        return f".env.{self.suffix}"

    @classmethod
    def parse(cls, value: str) -> "AppEnvironment":
        try:
            return cls(value.strip().lower())
        except ValueError:
            valid = ", ".join(member.value for member in cls)
            raise ValueError(f"{value!r} is not a valid environment; expected one of: {valid}") from None
