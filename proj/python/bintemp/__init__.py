"""Temperature scaling (TS), bin-wise temperature scaling (BTS) and
augmentation-based BTS for classifier logits."""

from ._bintemp import *  # noqa: F401,F403
from ._bintemp import BintempError  # noqa: F401

__version__ = "0.1.0"
