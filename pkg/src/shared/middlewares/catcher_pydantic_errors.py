from collections import defaultdict

from pydantic import ValidationError

from shared.base_internal_codes import CommonInternalCode
from shared.base_reports import create_report
from .catcher_exceptions import CatcherExceptions

VALIDATION_EXIT_CODE = 2


def CatcherExceptionsPydantic(catcher: CatcherExceptions):
    @catcher.exception_handler(ValidationError)
    def validate(exc: ValidationError):
        error_detail = defaultdict(list)
        for error in exc.errors():
            field = ".".join(str(part) for part in error["loc"]) if error.get("loc") else "document"
            error_detail[field].append(error["msg"])

        return VALIDATION_EXIT_CODE, create_report(
            data=dict(error_detail),
            success=False,
            error_code=CommonInternalCode.PYDANTIC_VALIDATIONS,
            message=f"{exc.title} failed validation",
        )
