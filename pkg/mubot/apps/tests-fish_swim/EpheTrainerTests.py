##
# File: EpheTrainerTests.py
# Date:  19-Apr-2023
#
# Updates:
#  02-May-2023  substream determinism
#  27-Jun-2023  final mean evaluation and zero-reward episodes
#  21-Oct-2023  serial and two-worker pools train identically
##
"""Tests for the elite-weighted policy search"""

__docformat__ = "restructuredtext en"
__author__ = "muBot modeling group"
__license__ = "Apache 2.0"
__version__ = "V0.04"

import io
import logging
import math
import os
import sys
import unittest

import numpy as np

if __package__ is None or __package__ == "":
    sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))
    from commonsetup import HERE  # noqa:  F401 pylint: disable=import-error,unused-import
else:
    from .commonsetup import HERE  # noqa: F401 pylint: disable=relative-beyond-top-level

from mubot.apps.fish_swim.ephe.EpheHyperParams import EpheHyperParams, TrainingResult, SessionResult
from mubot.apps.fish_swim.ephe.EpheTrainer import EpheTrainer, sampleRaw, samplePolicies, selectElite, train, update
from mubot.apps.fish_swim.ephe.RolloutPool import RolloutPool
from mubot.apps.fish_swim.hydro.HydroParams import HydroParams
from mubot.apps.fish_swim.morphology.RobotBuilder import buildRobot
from mubot.apps.fish_swim.rollout.RolloutRunner import RolloutRunner
from mubot.apps.fish_swim.utils.SwimExceptions import SwimModelError

logging.basicConfig(level=logging.INFO)
logger = logging.getLogger()

GAMMA_STAR = 0.1 * np.array([1.0, -1.0, 2.0, -2.0, 0.5, -0.5, 1.5, -1.5])


def _bowl(gamma):
    return max(0.0, 1.0 - float(np.sum(np.square(np.asarray(gamma) - GAMMA_STAR))))


class EpheTrainerTests(unittest.TestCase):
    def setUp(self):
        self.__hp = EpheHyperParams(eta=[0.5, -0.2], sigma=[0.1, 0.05], lo=[-10.0, -10.0], hi=[10.0, 10.0])

    def testUpdateWorkedExample(self):
        out = update(EpheHyperParams(eta=[0.0], sigma=[1.0], lo=[-5.0], hi=[5.0]), [[1.0], [3.0]], [1.0, 3.0])
        self.assertTrue(math.isclose(out.eta[0], 2.5, rel_tol=1e-12))
        self.assertTrue(math.isclose(out.sigma[0], math.sqrt(0.75), rel_tol=1e-12))

    def testUpdateMatchesTwoPassMoments(self):
        rng = np.random.default_rng(16)
        gammas = rng.uniform(-1.0, 1.0, size=(25, 6))
        rewards = rng.uniform(0.0, 2.0, size=25)
        hp = EpheHyperParams.initial(-np.ones(6), np.ones(6))
        out = update(hp, gammas, rewards)
        eta = np.sum(rewards[:, None] * gammas, axis=0) / np.sum(rewards)
        var = np.sum(rewards[:, None] * (gammas - eta) ** 2, axis=0) / np.sum(rewards)
        self.assertTrue(np.allclose(out.eta, eta, rtol=1e-12, atol=0.0))
        self.assertTrue(np.allclose(out.sigma, np.sqrt(var), rtol=1e-12, atol=0.0))
        self.assertTrue(np.all(out.eta >= gammas.min(axis=0)) and np.all(out.eta <= gammas.max(axis=0)))
        scaled = update(hp, gammas, 7.0 * rewards)
        self.assertTrue(np.allclose(scaled.eta, out.eta, rtol=1e-12, atol=1e-15))
        self.assertTrue(np.allclose(scaled.sigma, out.sigma, rtol=1e-12, atol=1e-15))

    def testIdenticalEliteCollapsesSigma(self):
        out = update(self.__hp, [[1.0, 2.0]] * 4, [1.0, 0.5, 2.0, 0.25])
        self.assertTrue(np.allclose(out.eta, [1.0, 2.0]))
        self.assertFalse(np.any(out.sigma))
        samples = samplePolicies(out, 5, 3)
        self.assertTrue(np.array_equal(samples, np.tile(out.eta, (5, 1))))

    def testZeroRewardUpdateIsNoOp(self):
        lfh = io.StringIO()
        out = update(self.__hp, [[1.0, 2.0], [3.0, 4.0]], [0.0, 0.0], log=lfh)
        self.assertIs(out, self.__hp)
        self.assertIn("update skipped", lfh.getvalue())
        with self.assertRaises(SwimModelError):
            update(self.__hp, [[1.0, 2.0]], [-1.0])
        with self.assertRaises(SwimModelError):
            update(self.__hp, [[1.0, 2.0]], [1.0, 2.0])

    def testSamplingStatisticsAndBounds(self):
        samples = samplePolicies(self.__hp, 4000, (11, 0, 0, 0))
        self.assertEqual(samples.shape, (4000, 2))
        err = np.abs(samples.mean(axis=0) - self.__hp.eta)
        self.assertTrue(np.all(err < 4.0 * self.__hp.sigma / math.sqrt(4000)))
        self.assertTrue(np.allclose(samples.std(axis=0), self.__hp.sigma, rtol=0.1))
        #
        wide = EpheHyperParams(eta=[0.0, 0.5], sigma=[5.0, 5.0], lo=[-1.0, 0.0], hi=[1.0, 1.0])
        clipped = samplePolicies(wide, 500, 5)
        self.assertTrue(np.all(clipped >= wide.lo) and np.all(clipped <= wide.hi))
        self.assertTrue(np.any(clipped == wide.hi))

    def testSamplingDeterminism(self):
        a = sampleRaw(self.__hp, 8, (7, 1, 2, 0))
        self.assertTrue(np.array_equal(a, sampleRaw(self.__hp, 8, (7, 1, 2, 0))))
        self.assertFalse(np.array_equal(a, sampleRaw(self.__hp, 8, (7, 1, 3, 0))))
        self.assertTrue(np.array_equal(samplePolicies(self.__hp, 3, 9), samplePolicies(self.__hp, 3, (9,))))
        # prefix of a larger batch is unchanged
        self.assertTrue(np.array_equal(a[:4], sampleRaw(self.__hp, 4, (7, 1, 2, 0))))

    def testSelectElite(self):
        self.assertEqual(list(selectElite([1.0, 3.0, 3.0, 0.0, 3.0], 2)), [1, 2])
        self.assertEqual(list(selectElite([0.0, 0.0, 0.0], 3)), [0, 1, 2])
        with self.assertRaises(SwimModelError):
            selectElite([1.0, 2.0], 0)
        with self.assertRaises(SwimModelError):
            selectElite([1.0, 2.0], 3)

    def testInitialHyperParams(self):
        hp = EpheHyperParams.initial([0.0, 0.5], [5.0, 5.0])
        self.assertTrue(np.allclose(hp.eta, [2.5, 2.75]))
        self.assertTrue(np.allclose(hp.sigma, [1.25, 1.125]))
        rnd = EpheHyperParams.initial([0.0, 0.5], [5.0, 5.0], mode="random", rng=np.random.default_rng(1))
        self.assertTrue(np.all(rnd.eta >= hp.lo) and np.all(rnd.eta <= hp.hi))
        self.assertTrue(np.allclose(rnd.sigma, hp.sigma))
        with self.assertRaises(SwimModelError):
            EpheHyperParams.initial([0.0], [1.0], mode="random")
        with self.assertRaises(SwimModelError):
            EpheHyperParams.initial([0.0], [1.0], mode="center")
        with self.assertRaises(SwimModelError):
            EpheHyperParams(eta=[0.0], sigma=[1.0], lo=[1.0], hi=[1.0])

    def testConvergesOnQuadraticBowl(self):
        lo, hi = -0.75 * np.ones(8), 0.75 * np.ones(8)
        for seed in range(10):
            trainer = EpheTrainer(_bowl, lo, hi, rollouts=50, elite=25, episodes=40, sessions=1, seed=seed, log=io.StringIO())
            result = trainer.train()
            eta = result.sessions[0].finalEta
            self.assertLess(np.max(np.abs(eta - GAMMA_STAR)), 0.05, "seed %d eta %r" % (seed, eta))
            self.assertGreater(result.sessions[0].finalReward, 0.98)
            self.assertGreater(result.bestReward, 0.9)
        #

    def testAllZeroEpisodeIsResampledThenSkipped(self):
        lfh = io.StringIO()
        trainer = EpheTrainer(lambda g: 0.0, [-1.0, -1.0], [1.0, 1.0], rollouts=6, elite=3, episodes=2, sessions=1, seed=3, log=lfh)
        seen = []
        result = trainer.train(callback=seen.append)
        self.assertEqual(len(seen), 2)
        for record in seen:
            self.assertTrue(record.noOp)
            self.assertEqual(record.attempts, 4)
            self.assertTrue(np.allclose(record.eta, [0.0, 0.0]))
            self.assertTrue(np.allclose(record.sigma, [0.5, 0.5]))
        #
        self.assertEqual(result.bestReward, 0.0)
        self.assertIn("all elite rewards are zero", lfh.getvalue())

    def testInvalidRewardsScoreZero(self):
        rewards = iter([float("nan"), -1.0, 0.5, 0.25] * 10)
        trainer = EpheTrainer(lambda g: next(rewards), [-1.0], [1.0], rollouts=4, elite=2, episodes=1, sessions=1, seed=3, log=io.StringIO())
        record = trainer.runEpisode(EpheHyperParams.initial([-1.0], [1.0]), 0, 0)[1]
        self.assertEqual(list(record.rewards), [0.0, 0.0, 0.5, 0.25])
        self.assertEqual(list(record.eliteIndices), [2, 3])

    def testTrainerDeterminism(self):
        def run(seed):
            trainer = EpheTrainer(_bowl, -0.75 * np.ones(8), 0.75 * np.ones(8), rollouts=10, elite=5, episodes=3, sessions=2, seed=seed, log=io.StringIO())
            return trainer.train()

        a, b, c = run(21), run(21), run(22)
        for sa, sb in zip(a.sessions, b.sessions):
            for ra, rb in zip(sa.records, sb.records):
                self.assertTrue(np.array_equal(ra.samples, rb.samples))
                self.assertTrue(np.array_equal(ra.eta, rb.eta))
            #
        #
        self.assertEqual(a.bestReward, b.bestReward)
        self.assertFalse(np.array_equal(a.sessions[0].records[0].samples, c.sessions[0].records[0].samples))
        self.assertFalse(np.array_equal(a.sessions[0].records[0].samples, a.sessions[1].records[0].samples))
        self.assertEqual(a.sessions[0].records[0].asDict()["episode"], 0)

    def testSessionSpread(self):
        result = TrainingResult(sessions=[SessionResult(0, bestReward=0.1), SessionResult(1, bestReward=0.08)], bestGamma=None, bestReward=0.1, bestSession=0)
        self.assertTrue(math.isclose(result.sessionSpread(), 0.2, rel_tol=1e-12))
        self.assertEqual(TrainingResult(sessions=[SessionResult(0)], bestGamma=None, bestReward=0.0, bestSession=0).sessionSpread(), 0.0)

    def testTrainerValidation(self):
        with self.assertRaises(SwimModelError):
            EpheTrainer(_bowl, [-1.0], [1.0], rollouts=4, elite=5)
        with self.assertRaises(SwimModelError):
            EpheTrainer(_bowl, [-1.0], [1.0], episodes=0)

    def testRolloutPoolScoresPolicies(self):
        model = buildRobot(2, "high")
        runner = RolloutRunner(dt=1.0e-3, horizon=0.2, outputRate=100.0, rewardWindow=0.1)
        lfh = io.StringIO()
        pool = RolloutPool(model, HydroParams.fromPreset("HM4"), runner, jobs=1, log=lfh)
        rewards = pool.evaluate([[4.0, 0.25, 3.0, 2.0], [0.0, 0.0, 0.0, 1.0]])
        self.assertEqual(rewards.shape, (2,))
        self.assertGreater(rewards[0], 0.0)
        self.assertEqual(rewards[1], 0.0)
        bad = pool.evaluate([[4.0, 0.25, 3.0]])
        self.assertEqual(list(bad), [0.0])
        self.assertIn("rollout 0 failed", lfh.getvalue())

    def testWorkerCountDoesNotChangeTraining(self):
        model = buildRobot(2, "high")
        runner = RolloutRunner(dt=1.0e-3, horizon=0.2, outputRate=100.0, rewardWindow=0.1)
        samples = [[4.0, 0.25, 3.0, 2.0], [2.0, 0.6, 1.0, 3.5], [0.0, 0.0, 0.0, 1.0], [5.0, 0.1, 5.0, 4.5], [1.0, 0.9, 2.5, 0.5]]
        serial = RolloutPool(model, HydroParams.fromPreset("HM4"), runner, jobs=1).evaluate(samples)
        parallel = RolloutPool(model, HydroParams.fromPreset("HM4"), runner, jobs=2).evaluate(samples)
        self.assertTrue(np.array_equal(serial, parallel))
        #
        results = []
        for jobs in (1, 2):
            config = {"dt": 1.0e-3, "horizon": 0.2, "reward_window": 0.1, "rollouts": 4, "elite": 2, "episodes": 3, "sessions": 1, "seed": 5, "jobs": jobs}
            results.append(train(model, HydroParams.fromPreset("HM4"), config))
        #
        one, two = results
        self.assertEqual(len(one.sessions[0].records), 3)
        for ra, rb in zip(one.sessions[0].records, two.sessions[0].records):
            self.assertTrue(np.array_equal(ra.samples, rb.samples))
            self.assertTrue(np.array_equal(ra.rewards, rb.rewards))
            self.assertTrue(np.array_equal(ra.eta, rb.eta))
            self.assertTrue(np.array_equal(ra.sigma, rb.sigma))
        #
        self.assertEqual(one.bestReward, two.bestReward)
        self.assertTrue(np.array_equal(one.bestGamma, two.bestGamma))

    def testTrainOnRobot(self):
        model = buildRobot(2, "high")
        config = {"dt": 1.0e-3, "horizon": 0.2, "reward_window": 0.1, "rollouts": 4, "elite": 2, "episodes": 2, "sessions": 1, "seed": 5}
        seen = []
        result = train(model, HydroParams.fromPreset("HM4"), config, callback=seen.append, log=io.StringIO())
        self.assertEqual(len(seen), 2)
        self.assertEqual(result.bestGamma.size, 4)
        self.assertTrue(np.isfinite(result.bestReward))
        self.assertGreaterEqual(result.bestReward, 0.0)


if __name__ == "__main__":
    unittest.main()
