"""AMR-mediated style transfer: graph tooling, metrics and the iterative pipeline."""

import logging

logging.getLogger("tstar").addHandler(logging.NullHandler())

__version__ = "0.1.0"
