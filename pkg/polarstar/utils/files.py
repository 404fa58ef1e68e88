import csv
import io
import logging
import os
import time
import uuid
from typing import Iterable

logger = logging.getLogger("polarstar")

RENAME_RETRIES = 10


def mkdir_if_not_exist(path):
    if not path:
        return
    try:
        os.makedirs(path)
    except OSError:
        # Ignore errors that were likely because the directory already exists
        if not os.path.isdir(path):
            raise


def write_atomic(path, content: str, retries: int = RENAME_RETRIES):
    """Write content next to path, then rename it into place."""
    path = os.fspath(path)
    directory = os.path.dirname(os.path.abspath(path))
    mkdir_if_not_exist(directory)
    temp_path = os.path.join(
        directory, ".{}.{}.tmp".format(os.path.basename(path), uuid.uuid4())
    )
    logger.debug("Writing %d characters to %s", len(content), temp_path)
    try:
        with open(temp_path, "w", encoding="utf-8", newline="\n") as f:
            f.write(content)
        for _ in range(retries - 1):
            try:
                os.replace(temp_path, path)
                break
            except OSError as ex:
                logger.debug(
                    "An error occurred while moving %s into place: %s. Retrying...",
                    path,
                    ex,
                )
                time.sleep(0.1)
        else:
            os.replace(temp_path, path)
    except BaseException:
        logger.debug("Removing temporary file %s", temp_path)
        if os.path.exists(temp_path):
            os.remove(temp_path)
        raise
    logger.info("Wrote %s", path)
    return path


def csv_text(rows: Iterable[dict], columns: Iterable[str]) -> str:
    """Render rows as CSV with a header and LF line endings."""
    out = io.StringIO()
    writer = csv.DictWriter(out, fieldnames=list(columns), lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return out.getvalue()
