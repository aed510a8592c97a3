#!/usr/bin/env python
# pylint: disable=wrong-import-position,wrong-import-order

"""
Batch front end of the solver suite; see lib/cli.py for the verbs.

Configuration parameters:

    log.level
    path.log.main
"""

import logging
import os
import sys

sys.path.append(os.path.abspath(os.path.join(__file__, "..", "..", "lib")))
from config import CONFIG
from cli import main
from globals import fatal


def setup_logging(verbose=False):
    log_dir = os.path.dirname(CONFIG["path.log.main"])
    try:
        os.makedirs(log_dir, exist_ok=True)
    except OSError as exc:
        fatal("cannot create log directory %s: %s" % (log_dir, exc))
    level = logging.DEBUG if verbose else CONFIG["log.level"]
    logging.basicConfig(
        filename=CONFIG["path.log.main"],
        level=level,
        format="%(asctime)s %(message)s",
    )
    # warnings and errors also go to stderr, tagged with their origin
    stderr_handler = logging.StreamHandler()
    stderr_handler.setLevel(logging.DEBUG if verbose else logging.WARNING)
    stderr_handler.setFormatter(logging.Formatter("%(filename)s:%(lineno)s: %(message)s"))
    logging.getLogger().addHandler(stderr_handler)


if __name__ == "__main__":
    setup_logging("-v" in sys.argv or "--verbose" in sys.argv)
    sys.exit(main())
