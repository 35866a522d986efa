import json
from pathlib import Path
from typing import Any

from pydantic import BaseModel, ValidationError

from core.exceptions import ParseException
from storage.connection import get_read_context, get_write_context


def load_json(path: Path) -> Any:
    with get_read_context(path) as handle:
        text = handle.read()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseException(
            f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}",
            data={"path": str(path), "line": exc.lineno, "column": exc.colno},
        ) from exc


def validate_document(model: type[BaseModel], document: Any, path: Path, where: str = "") -> Any:
    try:
        return model.model_validate(document)
    except ValidationError as exc:
        first = exc.errors()[0]
        location = ".".join(str(part) for part in first["loc"])
        raise ParseException(
            f"{path}{where}: {location or 'document'}: {first['msg']}",
            data={"path": str(path), "errors": exc.errors(include_url=False, include_context=False)},
        ) from exc


def dump_json(path: Path | None, document: Any) -> None:
    with get_write_context(path) as handle:
        json.dump(document, handle, indent=2, sort_keys=False, allow_nan=False)
        handle.write("\n")
