from typing import Any, TypeVar

from pydantic import BaseModel

from shared.base_contextvars import ctx_run_manifest
from shared.base_internal_codes import CommonInternalCode as CC
from shared.base_internal_codes import InternalCode

T = TypeVar("T", bound=InternalCode)

# manifest fields that differ between reruns; kept out of embedded manifests
TIMING_FIELDS = {"started_at", "wall_time"}


class EnvelopeReport(BaseModel):
    success: bool
    message: str
    data: dict[str, Any] | list | None = None
    manifest: dict[str, Any] | None = None


class ErrorDetailReport(BaseModel):
    internal_error: dict[str, Any]
    details: dict[str, Any]

    @staticmethod
    def from_error_code(error_code: T | None = CC.UNKNOWN, details: dict[str, Any] | None = None) -> dict[str, Any]:
        return ErrorDetailReport(
            internal_error=error_code.to_dict(),
            details=details or {}
        ).model_dump(mode="json")


def _to_jsonable(data: Any) -> Any:
    if isinstance(data, BaseModel):
        return data.model_dump(mode="json", by_alias=True)
    if isinstance(data, list):
        return [_to_jsonable(element) for element in data]
    if isinstance(data, dict):
        return {key: _to_jsonable(value) for key, value in data.items()}
    return data


def create_report(
    data: Any = None,
    success: bool = True,
    error_code: T | None = CC.UNKNOWN,
    message: str | None = None,
) -> EnvelopeReport:
    message = message or ("Operation successful" if success else "An error occurred")
    data = _to_jsonable(data)

    if not success:
        data = ErrorDetailReport.from_error_code(error_code=error_code, details=data)

    manifest = ctx_run_manifest.get()
    return EnvelopeReport(
        success=success,
        message=message,
        data=data,
        manifest=manifest.model_dump(mode="json", exclude=TIMING_FIELDS) if manifest is not None else None,
    )
