import logging
import sys
import time
from contextlib import contextmanager

from humanfriendly import format_timespan
from humanfriendly.terminal.spinners import Spinner

logger = logging.getLogger("polarstar")


@contextmanager
def show_progress(label: str, total: int):
    """Spinner on stderr with a step(done) callback; logs the elapsed time."""
    started = time.monotonic()
    with Spinner(label=label, total=total, stream=sys.stderr) as spinner:
        yield spinner.step
    logger.info("%s finished in %s", label, format_timespan(time.monotonic() - started))
