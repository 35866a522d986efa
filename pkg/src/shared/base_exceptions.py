from typing import Any

from loguru import logger

from shared.base_internal_codes import CommonInternalCode, InternalCode


class BaseRepulsionException(Exception):
    GENERAL_EXIT_CODE = 1
    GENERAL_ERROR_CODE = CommonInternalCode.UNKNOWN

    def __init__(self,
                 message: str | None = None,
                 error_code: InternalCode | None = None,
                 exit_code: int | None = None,
                 data: dict[str, Any] | None = None):
        super().__init__(message)
        self.exit_code = exit_code if exit_code else self.GENERAL_EXIT_CODE
        self.error_code = error_code if error_code else self.GENERAL_ERROR_CODE
        self.data = data or {}
        self.message = message
        logger.warning(self.__str__())

    def __str__(self):
        return f"[{self.exit_code}] {self.error_code.description}: {self.message}"
