import logging
import os
import sys
from logging.handlers import RotatingFileHandler

# Ensure the project root is on sys.path so `app` package is importable
_project_root = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
sys.path.insert(0, _project_root)

from app.cli import dispatch  # noqa: E402

_FORMAT = "%(asctime)s [%(levelname)s] %(name)s: %(message)s"


def setup_logging(verbose: bool = False, log_file: str | None = None):
    """Rotating DEBUG file log under output/ plus a stderr handler."""
    log_file = log_file or os.path.join(_project_root, "output", "app.log")
    os.makedirs(os.path.dirname(log_file), exist_ok=True)
    file_handler = RotatingFileHandler(log_file, maxBytes=2_000_000, backupCount=3)
    file_handler.setLevel(logging.DEBUG)
    file_handler.setFormatter(logging.Formatter(_FORMAT))

    console = logging.StreamHandler(sys.stderr)
    console.setLevel(logging.DEBUG if verbose else logging.INFO)
    console.setFormatter(logging.Formatter("[%(levelname)s] %(name)s: %(message)s"))

    logging.root.addHandler(file_handler)
    logging.root.addHandler(console)
    logging.root.setLevel(logging.DEBUG)


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    setup_logging(verbose="-v" in argv or "--verbose" in argv)
    return dispatch(argv)


if __name__ == "__main__":
    sys.exit(main())
