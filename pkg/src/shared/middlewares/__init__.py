from .catcher_exceptions import CatcherExceptions
from .catcher_pydantic_errors import CatcherExceptionsPydantic

__all__ = ["CatcherExceptions", "CatcherExceptionsPydantic"]
