"""Rate-distortion lower bounds, numerical oracles and graph-recovery sweeps
for Gram matrices of random latent vectors. Entropic quantities are in nats."""

from ._core import *  # noqa: F401,F403
from ._core import __version__  # noqa: F401
