##
# File:  EpheTrainer.py
# Date:  18-Apr-2023
# Updates:
#  02-May-2023  per-rollout random substreams so the result ignores the job count
#  27-Jun-2023  final mean policy evaluated once per session
##
"""
Policy hyperparameter exploration with reward-weighted elite updates.

Each episode draws M policy vectors from N(eta, diag(sigma^2)), clips them to
the bounds, evaluates them, keeps the K best and sets

    eta'   = sum R gamma / sum R
    sigma' = sqrt(sum R (gamma - eta')^2 / sum R)

over the elite set.

"""
__docformat__ = "restructuredtext en"
__author__ = "muBot modeling group"
__license__ = "Apache 2.0"
__version__ = "V0.03"

import sys
import time

import numpy as np

from mubot.apps.fish_swim.actuation.GaitPolicy import policyBounds
from mubot.apps.fish_swim.ephe.EpheHyperParams import EpheHyperParams, EpisodeRecord, SessionResult, TrainingResult
from mubot.apps.fish_swim.ephe.RolloutPool import RolloutPool
from mubot.apps.fish_swim.rollout.RolloutRunner import RolloutRunner
from mubot.apps.fish_swim.utils.SwimExceptions import SwimModelError

MAX_RESAMPLE = 3


def _substreams(seedKey, m):
    return [np.random.default_rng(child) for child in np.random.SeedSequence(list(seedKey)).spawn(m)]


def sampleRaw(hp, m, seedKey):
    """ M unclipped draws, one independent substream per rollout. """
    return np.array([rng.normal(hp.eta, hp.sigma) for rng in _substreams(seedKey, m)]).reshape(m, hp.dim)


def samplePolicies(hp, m, seedKey):
    """ M policy vectors drawn from N(eta, sigma^2) per dimension and clipped to the bounds.

        ``seedKey`` is an int or a sequence of ints (seed, session, episode, attempt).
    """
    if isinstance(seedKey, (int, np.integer)):
        seedKey = (int(seedKey),)
    return np.clip(sampleRaw(hp, m, seedKey), hp.lo, hp.hi)


def selectElite(rewards, k):
    """ Indices of the K largest rewards; ties go to the lower rollout index. """
    r = np.asarray(rewards, dtype=float)
    if not 1 <= k <= r.size:
        raise SwimModelError("elite size %d outside 1..%d" % (k, r.size))
    return np.argsort(-r, kind="stable")[:k]


def update(hp, eliteGammas, eliteRewards, log=None):
    """ Reward-weighted mean and standard deviation of the elite set.

        A zero reward sum leaves ``hp`` unchanged (and writes a warning to ``log``).
    """
    g = np.atleast_2d(np.asarray(eliteGammas, dtype=float))
    r = np.asarray(eliteRewards, dtype=float).ravel()
    if g.shape[0] < 1 or g.shape[0] != r.size:
        raise SwimModelError("elite needs at least one (gamma, reward) pair")
    if np.any(r < 0.0) or not np.all(np.isfinite(r)):
        raise SwimModelError("elite rewards must be finite and non-negative")
    total = r.sum()
    if total <= 0.0:
        if log is not None:
            log.write("+EpheTrainer.update() - zero elite reward sum, update skipped\n")
        return hp
    eta = r @ g / total
    sigma = np.sqrt(r @ np.square(g - eta) / total)
    return EpheHyperParams(eta=eta, sigma=sigma, lo=hp.lo, hi=hp.hi)


class CallableEvaluator(object):
    """ Adapts R(gamma) -> float to the batch evaluator interface. """

    def __init__(self, func):
        self.__func = func

    def evaluate(self, samples):
        return np.array([float(self.__func(g)) for g in samples])


class EpheTrainer(object):
    """ Multi-session trainer; ``evaluator`` has evaluate(samples) -> rewards, or is a plain callable.
    """

    def __init__(self, evaluator, lo, hi, rollouts=50, elite=25, episodes=40, sessions=3, seed=7, init="midpoint", verbose=False, log=sys.stderr):
        self.__verbose = verbose
        self.__lfh = log
        self.__evaluator = evaluator if hasattr(evaluator, "evaluate") else CallableEvaluator(evaluator)
        self.__lo = np.asarray(lo, dtype=float)
        self.__hi = np.asarray(hi, dtype=float)
        if not 1 <= elite <= rollouts:
            raise SwimModelError("need 1 <= K <= M, got K=%d M=%d" % (elite, rollouts))
        if episodes < 1 or sessions < 1:
            raise SwimModelError("episodes and sessions must be >= 1")
        self.__m = rollouts
        self.__k = elite
        self.__episodes = episodes
        self.__sessions = sessions
        self.__seed = int(seed)
        self.__init = init

    def train(self, callback=None):
        """ Run every session and return the TrainingResult.  ``callback(record)`` sees each episode.
        """
        results = []
        for session in range(self.__sessions):
            results.append(self.trainSession(session, callback=callback))
        #
        best = max(range(len(results)), key=lambda i: (results[i].bestReward, -i))
        return TrainingResult(sessions=results, bestGamma=results[best].bestGamma, bestReward=results[best].bestReward, bestSession=best)

    def trainSession(self, session, callback=None):
        initRng = np.random.default_rng(np.random.SeedSequence([self.__seed, session]))
        hp = EpheHyperParams.initial(self.__lo, self.__hi, mode=self.__init, rng=initRng)
        res = SessionResult(session=session, bestGamma=hp.eta.copy(), bestReward=0.0)
        for episode in range(self.__episodes):
            hp, record = self.runEpisode(hp, session, episode)
            res.records.append(record)
            iBest = int(np.argmax(record.rewards))
            if record.rewards[iBest] > res.bestReward:
                res.bestReward = float(record.rewards[iBest])
                res.bestGamma = record.samples[iBest].copy()
            if callback is not None:
                callback(record)
            if self.__verbose:
                self.__lfh.write("+EpheTrainer.trainSession() - session %d episode %d mean %.6g max %.6g best %.6g\n"
                                 % (session, episode, record.meanReward, record.maxReward, res.bestReward))
            #
        #
        res.finalEta = hp.eta.copy()
        res.finalReward = float(self.__evaluator.evaluate(np.clip(hp.eta, hp.lo, hp.hi)[None, :])[0])
        return res

    def runEpisode(self, hp, session, episode):
        """ Sample, evaluate and update once; an all-zero elite is resampled up to MAX_RESAMPLE times.
        """
        t0 = time.time()
        for attempt in range(MAX_RESAMPLE + 1):
            raw = sampleRaw(hp, self.__m, (self.__seed, session, episode, attempt))
            samples = np.clip(raw, hp.lo, hp.hi)
            clipped = int(np.count_nonzero(raw != samples))
            rewards = np.asarray(self.__evaluator.evaluate(samples), dtype=float)
            bad = ~np.isfinite(rewards) | (rewards < 0.0)
            if np.any(bad):
                self.__lfh.write("+EpheTrainer.runEpisode() - %d invalid rewards scored as 0\n" % int(bad.sum()))
                rewards = np.where(bad, 0.0, rewards)
            elite = selectElite(rewards, self.__k)
            if rewards[elite].sum() > 0.0:
                break
            self.__lfh.write("+EpheTrainer.runEpisode() - session %d episode %d attempt %d: all elite rewards are zero\n" % (session, episode, attempt))
        #
        noOp = rewards[elite].sum() <= 0.0
        newHp = update(hp, samples[elite], rewards[elite], log=self.__lfh)
        if clipped and self.__verbose:
            self.__lfh.write("+EpheTrainer.runEpisode() - %d sample components clipped to bounds\n" % clipped)
        record = EpisodeRecord(session=session, episode=episode, samples=samples, rewards=rewards, eliteIndices=elite, eta=newHp.eta.copy(),
                               sigma=newHp.sigma.copy(), seed=self.__seed, attempts=attempt + 1, noOp=bool(noOp), clipped=clipped,
                               wallClock=time.time() - t0)
        return newHp, record


def train(model, hydro, config, callback=None, verbose=False, log=sys.stderr):
    """ Optimize the gait of ``model`` in ``hydro`` with the rollout settings of ``config``.

        ``config`` is a SwimConfigInfo or a plain dict with the same keys.
    """
    cfg = config.asDict() if hasattr(config, "asDict") else dict(config)
    runner = RolloutRunner(dt=cfg.get("dt", 1.0e-3), horizon=cfg.get("horizon", 6.0), outputRate=cfg.get("output_rate", 100.0),
                           rewardWindow=cfg.get("reward_window", 2.0), verbose=False, log=log)
    pool = RolloutPool(model, hydro, runner, jobs=cfg.get("jobs", 1), verbose=verbose, log=log)
    lo, hi = policyBounds(model.noa, eMax=cfg.get("e_max", 5.0), fMin=cfg.get("f_min", 0.5), fMax=cfg.get("f_max", 5.0))
    trainer = EpheTrainer(pool, lo, hi, rollouts=cfg.get("rollouts", 50), elite=cfg.get("elite", 25), episodes=cfg.get("episodes", 40),
                          sessions=cfg.get("sessions", 3), seed=cfg.get("seed", 7), init=cfg.get("ephe_init", "midpoint"), verbose=verbose, log=log)
    return trainer.train(callback=callback)
