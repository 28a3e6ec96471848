"""Non-classicality measures for proper mixtures of coherent states."""
from .states import (CoherentMixture, make_binary_mixture, overlap, separation,
                     symmetric_pair)
from .subspace import (HermitianMatrix, OrthoBasis, entropy, gram_schmidt,
                       mixture_entropy, project_mixture)
from .splitter import TwoModeMixture, reduce, split
from .discord import (ConvergenceError, DiscordReport, MeasurementAngles,
                      conditional_entropy, discord, discord_potential,
                      minimize_conditional_entropy, two_mode_density)
from .discrimination import advantage, helstrom_error, homodyne_error

__version__ = "0.1.0"
