import json
import sys
from typing import Callable

import sentry_sdk
from loguru import logger

from shared.base_exceptions import BaseRepulsionException
from shared.base_internal_codes import CommonInternalCode
from shared.base_reports import EnvelopeReport, create_report

# exception -> (exit code, error envelope)
ExceptionHandler = Callable[[Exception], tuple[int, EnvelopeReport]]


class CatcherExceptions:
    """Runs a command and turns whatever it raises into an exit code plus an error envelope on stderr."""

    def __init__(self):
        self.handlers: dict[type[Exception], ExceptionHandler] = {}

    def exception_handler(self, exc_class: type[Exception]):
        def register(handler: ExceptionHandler) -> ExceptionHandler:
            self.handlers[exc_class] = handler
            return handler
        return register

    def dispatch(self, call_next: Callable[[], None]) -> int:
        try:
            call_next()
            return 0
        except Exception as e:  # noqa: BLE001
            exit_code, report = self._handle(e)
            sys.stderr.write(json.dumps(report.model_dump(mode="json")) + "\n")
            return exit_code

    def _handle(self, e: Exception) -> tuple[int, EnvelopeReport]:
        for exc_class, handler in self.handlers.items():
            if isinstance(e, exc_class):
                return handler(e)
        if isinstance(e, BaseRepulsionException):
            return e.exit_code, create_report(
                data=e.data,
                success=False,
                error_code=e.error_code,
                message=e.message,
            )
        logger.exception(f"Unhandled error: {e}")
        sentry_sdk.capture_exception(e)
        return 1, create_report(
            data={"detail": str(e)},
            success=False,
            error_code=CommonInternalCode.UNKNOWN,
        )
