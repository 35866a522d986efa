import os
import sys
import tempfile
from contextlib import contextmanager
from pathlib import Path
from typing import IO, Iterator

from core.exceptions import StorageException


@contextmanager
def get_read_context(path: Path) -> Iterator[IO[str]]:
    try:
        handle = open(path, "r", encoding="utf-8", newline="")
    except OSError as exc:
        raise StorageException(f"Cannot open {path}: {exc.strerror}", data={"path": str(path)}) from exc
    try:
        yield handle
    finally:
        handle.close()


@contextmanager
def get_write_context(path: Path | None) -> Iterator[IO[str]]:
    """
    Text handle whose content replaces `path` only if the block completes.
    Without a path the content goes to stdout.
    """
    if path is None:
        yield sys.stdout
        sys.stdout.flush()
        return

    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        descriptor, staging = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    except OSError as exc:
        raise StorageException(f"Cannot write to {path}: {exc.strerror}", data={"path": str(path)}) from exc

    try:
        with os.fdopen(descriptor, "w", encoding="utf-8", newline="") as handle:
            yield handle
        os.replace(staging, path)
    except OSError as exc:
        raise StorageException(f"Cannot write to {path}: {exc.strerror}", data={"path": str(path)}) from exc
    finally:
        if os.path.exists(staging):
            os.remove(staging)
