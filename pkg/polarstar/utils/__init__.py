from polarstar.utils.files import mkdir_if_not_exist, write_atomic
from polarstar.utils.progress import show_progress

__all__ = ["mkdir_if_not_exist", "show_progress", "write_atomic"]
