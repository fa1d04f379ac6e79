##
# File:  ChainIntegrator.py
# Date:  03-Apr-2023
# Updates:
#  12-Jun-2023  optional force log of the step start state
##
"""
Fixed-step explicit Runge-Kutta integration of the chain state, driven by
a Butcher tableau (classical RK4 by default).  Voltages are sampled at the
stage times.

"""
__docformat__ = "restructuredtext en"
__author__ = "muBot modeling group"
__license__ = "Apache 2.0"
__version__ = "V0.02"

import sys

import numpy as np

from mubot.apps.fish_swim.dynamics.ChainDynamics import ChainDynamics
from mubot.apps.fish_swim.dynamics.ChainState import GeneralizedState
from mubot.apps.fish_swim.utils.SwimExceptions import SwimSimulationError

RK4_A = np.array([[0.0, 0.0, 0.0, 0.0],
                  [0.5, 0.0, 0.0, 0.0],
                  [0.0, 0.5, 0.0, 0.0],
                  [0.0, 0.0, 1.0, 0.0]])
RK4_B = np.array([1.0 / 6.0, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 6.0])
RK4_C = np.array([0.0, 0.5, 0.5, 1.0])


class ChainIntegrator(object):
    """ Explicit fixed-step integrator for one ChainDynamics instance.
    """

    def __init__(self, dynamics, tableau=(RK4_A, RK4_B, RK4_C), verbose=False, log=sys.stderr):
        self.__verbose = verbose
        self.__lfh = log
        self.__dyn = dynamics
        self.__a, self.__b, self.__c = (np.asarray(x, dtype=float) for x in tableau)
        self.__nStage = self.__b.size
        self.__nCoord = dynamics.kinematics.nCoord

    def step(self, state, policy, dt, recordForces=False, stepIndex=None):
        """ Advance ``state`` by ``dt``.

            :Returns:
                (new GeneralizedState, ForceLogEntry of the start state or None)
        """
        if not dt > 0.0:
            raise SwimSimulationError("time step must be positive, got %r" % dt)
        t0 = state.t
        y0 = state.asVector()
        kStage = np.zeros((self.__nStage, y0.size))
        entry = None
        for i in range(self.__nStage):
            yi = y0 + dt * (self.__a[i, :i] @ kStage[:i])
            kStage[i], e = self.__dyn.derivative(t0 + self.__c[i] * dt, yi, policy, recordForces=(recordForces and i == 0))
            if i == 0:
                entry = e
        y1 = y0 + dt * (self.__b @ kStage)
        t1 = t0 + dt
        #
        if not np.all(np.isfinite(y1)):
            raise SwimSimulationError("non-finite state", time=t1, step=stepIndex)
        phi = y1[3: self.__nCoord]
        if np.any(np.abs(phi) >= np.pi):
            j = int(np.argmax(np.abs(phi))) + 1
            if self.__verbose:
                self.__lfh.write("+ChainIntegrator.step() - joint %d folded over at t %.6f\n" % (j, t1))
            raise SwimSimulationError("joint %d fold-over |phi| >= pi" % j, time=t1, step=stepIndex)
        return GeneralizedState.fromVector(y1, t1), entry


def stepRk4(model, state, policy, hydro, dt):
    """ One classical RK4 step of the chain under ``policy`` (None for no actuation).
    """
    newState, _ = ChainIntegrator(ChainDynamics(model, hydro)).step(state, policy, dt)
    return newState
