##
# File:  EpheHyperParams.py
# Date:  18-Apr-2023
# Updates:
#  27-Jun-2023  random session initialization inside the bounds
##
"""
Search-distribution hyperparameters and per-episode training records.

"""
__docformat__ = "restructuredtext en"
__author__ = "muBot modeling group"
__license__ = "Apache 2.0"
__version__ = "V0.02"

from dataclasses import dataclass, field
from typing import Any, List, Optional

import numpy as np

from mubot.apps.fish_swim.utils.SwimExceptions import SwimModelError

INIT_MODES = ("midpoint", "random")


@dataclass(frozen=True)
class EpheHyperParams:
    """ Diagonal Gaussian N(eta, diag(sigma^2)) over the policy vector, with box bounds [lo, hi].
    """
    eta: Any
    sigma: Any
    lo: Any
    hi: Any

    def __post_init__(self):
        for name in ("eta", "sigma", "lo", "hi"):
            object.__setattr__(self, name, np.array(getattr(self, name), dtype=float).ravel())
        d = self.eta.size
        if not (self.sigma.size == d and self.lo.size == d and self.hi.size == d):
            raise SwimModelError("eta, sigma and bounds must share one dimension")
        if np.any(self.sigma < 0.0) or not np.all(np.isfinite(self.sigma)):
            raise SwimModelError("sigma must be finite and non-negative")
        if np.any(self.lo >= self.hi):
            raise SwimModelError("every bound needs lo < hi")
        #

    @property
    def dim(self):
        return self.eta.size

    @classmethod
    def initial(cls, lo, hi, mode="midpoint", rng=None):
        """ eta at the bounds midpoint (or uniform inside them), sigma = (hi - lo) / 4.
        """
        lo = np.asarray(lo, dtype=float)
        hi = np.asarray(hi, dtype=float)
        if mode not in INIT_MODES:
            raise SwimModelError("unknown EPHE initialization '%s'" % mode)
        if mode == "random":
            if rng is None:
                raise SwimModelError("random initialization needs a generator")
            eta = rng.uniform(lo, hi)
        else:
            eta = 0.5 * (lo + hi)
        return cls(eta=eta, sigma=0.25 * (hi - lo), lo=lo, hi=hi)


@dataclass
class EpisodeRecord:
    session: int
    episode: int
    samples: Any
    rewards: Any
    eliteIndices: Any
    eta: Any
    sigma: Any
    seed: int
    attempts: int = 1
    noOp: bool = False
    clipped: int = 0
    wallClock: float = 0.0

    @property
    def meanReward(self):
        return float(np.mean(self.rewards)) if len(self.rewards) else 0.0

    @property
    def maxReward(self):
        return float(np.max(self.rewards)) if len(self.rewards) else 0.0

    @property
    def eliteMeanReward(self):
        return float(np.mean(np.asarray(self.rewards)[self.eliteIndices])) if len(self.eliteIndices) else 0.0

    def asDict(self):
        """ JSON-ready summary (sample vectors omitted). """
        return {"session": self.session, "episode": self.episode, "seed": self.seed, "attempts": self.attempts, "no_op": self.noOp,
                "clipped": self.clipped, "wall_clock": self.wallClock, "mean_reward": self.meanReward, "max_reward": self.maxReward,
                "elite_mean_reward": self.eliteMeanReward, "eta": [float(v) for v in self.eta], "sigma": [float(v) for v in self.sigma]}


@dataclass
class SessionResult:
    session: int
    records: List[EpisodeRecord] = field(default_factory=list)
    bestGamma: Optional[Any] = None
    bestReward: float = 0.0
    finalEta: Optional[Any] = None
    finalReward: float = 0.0


@dataclass
class TrainingResult:
    sessions: List[SessionResult]
    bestGamma: Any
    bestReward: float
    bestSession: int

    def sessionSpread(self):
        """ (max - min) / max of the per-session best rewards; 0 when every session scored 0. """
        best = [s.bestReward for s in self.sessions]
        top = max(best) if best else 0.0
        return (top - min(best)) / top if top > 0.0 else 0.0
