##
# File: ChainIntegratorTests.py
# Date:  10-Apr-2023
#
# Updates:
#  21-Oct-2023  passive energy bound and NoA=4 free-chain conservation
##
"""Tests for fixed-step integration, conservation and abort handling"""

__docformat__ = "restructuredtext en"
__author__ = "muBot modeling group"
__license__ = "Apache 2.0"
__version__ = "V0.02"

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

from mubot.apps.fish_swim.actuation.GaitPolicy import GaitPolicy
from mubot.apps.fish_swim.dynamics.ChainDynamics import ChainDynamics
from mubot.apps.fish_swim.dynamics.ChainEnergy import angularMomentum, centerOfMass, linearMomentum, mechanicalEnergy, totalEnergy
from mubot.apps.fish_swim.dynamics.ChainIntegrator import ChainIntegrator, stepRk4
from mubot.apps.fish_swim.dynamics.ChainKinematics import ChainKinematics
from mubot.apps.fish_swim.dynamics.ChainState import GeneralizedState, initialState
from mubot.apps.fish_swim.hydro.HydroParams import HydroParams
from mubot.apps.fish_swim.morphology.RobotBuilder import buildRobot
from mubot.apps.fish_swim.utils.SwimExceptions import SwimSimulationError

logging.basicConfig(level=logging.INFO)
logger = logging.getLogger()


def _integrate(integrator, state, policy, dt, nSteps):
    for k in range(nSteps):
        state, _ = integrator.step(state, policy, dt, stepIndex=k)
    return state


class ChainIntegratorTests(unittest.TestCase):
    def setUp(self):
        self.__policy = GaitPolicy(amplitudes=(3.0, 2.0), phases=(0.0, 0.3), frequency=2.0)

    def testFreeDrift(self):
        model = buildRobot(2, "high")
        state = initialState(model, qdot=[0.05, -0.02, 0.0, 0.0, 0.0, 0.0])
        integrator = ChainIntegrator(ChainDynamics(model, HydroParams.still()))
        final = _integrate(integrator, state, None, 1.0e-3, 200)
        self.assertTrue(math.isclose(final.t, 0.2, rel_tol=1e-12))
        self.assertTrue(np.allclose(final.q[:2], [0.05 * final.t, -0.02 * final.t], rtol=1e-12, atol=1e-15))
        self.assertTrue(np.allclose(final.q[2:], 0.0, atol=1e-15))
        self.assertTrue(np.allclose(final.qdot, state.qdot, rtol=1e-12, atol=1e-15))

    def testZeroPolicyStaysAtRest(self):
        model = buildRobot(2, "high")
        state = initialState(model)
        for _ in range(20):
            state = stepRk4(model, state, GaitPolicy.zero(2), HydroParams.fromPreset("HM4"), 1.0e-3)
        self.assertFalse(np.any(state.q))
        self.assertFalse(np.any(state.qdot))

    def testSpringEnergyConservation(self):
        model = buildRobot(2, "high")
        state = initialState(model, jointAngles=[0.2, -0.1, 0.15])
        e0 = mechanicalEnergy(model, state)
        integrator = ChainIntegrator(ChainDynamics(model, HydroParams.still()))
        final = _integrate(integrator, state, None, 1.0e-4, 1000)
        self.assertLess(abs(mechanicalEnergy(model, final) - e0), 1e-6 * e0)

    def testMomentumConservedWithoutFluid(self):
        model = buildRobot(2, "high")
        state = initialState(model)
        com0 = centerOfMass(model, state)
        integrator = ChainIntegrator(ChainDynamics(model, HydroParams.still()))
        policy = GaitPolicy(amplitudes=(1.0, 1.0), phases=(0.0, 0.25), frequency=2.0)
        final = _integrate(integrator, state, policy, 1.0e-3, 300)
        frame = ChainKinematics(model).evaluate(final.q, final.qdot)
        masses = model.masses()
        pScale = float(np.sum(masses * np.linalg.norm(frame.comVel, axis=1)))
        lScale = float(np.sum(masses * np.linalg.norm(frame.com - com0, axis=1) * np.linalg.norm(frame.comVel, axis=1))
                       + np.sum(model.inertias() * np.abs(frame.omega)))
        self.assertGreater(pScale, 0.0)
        self.assertLess(np.linalg.norm(linearMomentum(model, final)), 1e-6 * pScale)
        self.assertLess(abs(angularMomentum(model, final, about=com0)), 1e-6 * lScale)
        self.assertLess(np.linalg.norm(centerOfMass(model, final) - com0), 1e-6 * model.totalLength())
        self.assertGreater(np.max(np.abs(final.q[3:])), 1e-3)

    def __passiveRun(self, hydro, seed, duration=0.3, dt=1.0e-4, samples=30):
        """ Unactuated NoA=4 chain released from a bent pose with random rates; total energy at evenly spaced samples.
        """
        rng = np.random.default_rng(seed)
        model = buildRobot(4, "high")
        qdot = np.concatenate([rng.normal(size=2) * 0.01, rng.uniform(-2.0, 2.0, size=model.coordinateCount - 2)])
        state = initialState(model, jointAngles=[0.3, -0.2, 0.1, -0.3, 0.2], qdot=qdot)
        integrator = ChainIntegrator(ChainDynamics(model, hydro))
        nSteps = int(round(duration / dt))
        every = nSteps // samples
        energies = [totalEnergy(model, hydro, state)]
        for k in range(nSteps):
            state, _ = integrator.step(state, None, dt, stepIndex=k)
            if (k + 1) % every == 0:
                energies.append(totalEnergy(model, hydro, state))
            #
        #
        return model, state, np.array(energies)

    def testAddedMassConservesEnergy(self):
        _, _, energies = self.__passiveRun(HydroParams(ca=1.0, cp=0.0, cf=0.0, cd=0.0), 11)
        e0 = energies[0]
        logger.info("added-mass chain energy drift %.3e of %.3e J", np.max(np.abs(energies - e0)), e0)
        self.assertLess(np.max(np.abs(energies - e0)), 1e-6 * e0)

    def testPassiveEnergyNonIncreasing(self):
        hydro = HydroParams(ca=1.0, cp=0.0, cf=0.06, cd=2.25)
        _, _, energies = self.__passiveRun(hydro, 12)
        e0 = energies[0]
        self.assertTrue(np.all(np.diff(energies) <= 1e-7 * e0), "energy increments %r" % np.diff(energies).max())
        self.assertLess(energies[-1], e0)
        for hmId in ("HM2", "HM3", "HM4"):
            _, final, energies = self.__passiveRun(HydroParams.fromPreset(hmId), 13)
            logger.info("%s passive energy %.3e -> %.3e J", hmId, energies[0], energies[-1])
            self.assertLess(energies[-1], energies[0])
            self.assertLess(np.max(np.abs(final.q[3:])), 0.5 * np.pi)
        #

    def testFreeChainConservation(self):
        model, final, energies = self.__passiveRun(HydroParams.still(), 14, duration=0.5)
        rng = np.random.default_rng(14)
        qdot = np.concatenate([rng.normal(size=2) * 0.01, rng.uniform(-2.0, 2.0, size=model.coordinateCount - 2)])
        start = initialState(model, jointAngles=[0.3, -0.2, 0.1, -0.3, 0.2], qdot=qdot)
        p0 = linearMomentum(model, start)
        com0 = centerOfMass(model, start)
        l0 = angularMomentum(model, start, about=com0)
        frame = ChainKinematics(model).evaluate(final.q, final.qdot)
        pScale = float(np.sum(model.masses() * np.linalg.norm(frame.comVel, axis=1)))
        lScale = float(np.sum(model.masses() * np.linalg.norm(frame.com - centerOfMass(model, final), axis=1) * np.linalg.norm(frame.comVel, axis=1))
                       + np.sum(model.inertias() * np.abs(frame.omega)))
        self.assertLess(np.max(np.abs(energies - energies[0])), 1e-6 * energies[0])
        self.assertLess(np.linalg.norm(linearMomentum(model, final) - p0), 1e-6 * pScale)
        # the center of mass moves with the constant momentum; angular momentum about it is conserved
        comT = com0 + p0 / model.totalMass() * final.t
        self.assertLess(np.linalg.norm(centerOfMass(model, final) - comT), 1e-6 * model.totalLength())
        self.assertLess(abs(angularMomentum(model, final, about=comT) - l0), 1e-6 * lScale)

    def testConvergenceOrder(self):
        model = buildRobot(2, "high")
        smooth = HydroParams(ca=1.0, cp=1.0, cf=0.0, cd=0.0)
        horizon = 0.1
        finals = []
        for dt in (1.0e-3, 5.0e-4, 2.5e-4):
            integrator = ChainIntegrator(ChainDynamics(model, smooth))
            finals.append(_integrate(integrator, initialState(model), self.__policy, dt, int(round(horizon / dt))).asVector())
        #
        order = math.log2(np.linalg.norm(finals[0] - finals[1]) / np.linalg.norm(finals[1] - finals[2]))
        logger.info("observed integration order %.3f", order)
        self.assertGreater(order, 3.5)

    def testForceLogOnFirstStage(self):
        model = buildRobot(2, "high")
        integrator = ChainIntegrator(ChainDynamics(model, HydroParams.fromPreset("HM4")))
        state = initialState(model)
        plain, none = integrator.step(state, self.__policy, 1.0e-3)
        logged, entry = integrator.step(state, self.__policy, 1.0e-3, recordForces=True)
        self.assertIsNone(none)
        self.assertIsNotNone(entry)
        self.assertTrue(np.array_equal(plain.asVector(), logged.asVector()))

    def testFoldOverAborts(self):
        model = buildRobot(2, "high")
        qdot = np.zeros(model.coordinateCount)
        qdot[3] = 200.0
        state = GeneralizedState(q=np.array([0.0, 0.0, 0.0, 3.13, 0.0, 0.0]), qdot=qdot)
        integrator = ChainIntegrator(ChainDynamics(model, HydroParams.still()))
        with self.assertRaises(SwimSimulationError) as ctx:
            integrator.step(state, None, 1.0e-3, stepIndex=7)
        self.assertEqual(ctx.exception.step, 7)
        self.assertIn("fold-over", ctx.exception.reason)
        with self.assertRaises(SwimSimulationError):
            integrator.step(initialState(model), None, 0.0)


if __name__ == "__main__":
    unittest.main()
