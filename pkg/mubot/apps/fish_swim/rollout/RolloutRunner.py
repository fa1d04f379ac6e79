##
# File:  RolloutRunner.py
# Date:  11-Apr-2023
# Updates:
#  12-Jun-2023  optional force recording (analysis runs only)
#  20-Jun-2023  aborted rollouts return a flagged trajectory instead of raising
##
"""
One open-loop swimming episode: integrate the chain for the configured
horizon under a voltage policy, then score it.

"""
__docformat__ = "restructuredtext en"
__author__ = "muBot modeling group"
__license__ = "Apache 2.0"
__version__ = "V0.03"

import sys

import numpy as np

from mubot.apps.fish_swim.actuation.GaitPolicy import encode
from mubot.apps.fish_swim.dynamics.ChainDynamics import ChainDynamics
from mubot.apps.fish_swim.dynamics.ChainIntegrator import ChainIntegrator
from mubot.apps.fish_swim.dynamics.ChainKinematics import ChainKinematics
from mubot.apps.fish_swim.dynamics.ChainState import ForceLog, initialState
from mubot.apps.fish_swim.rollout.Trajectory import GaitMetrics, Trajectory, envelopeAmplitudes, lateralDisplacements
from mubot.apps.fish_swim.utils.SwimExceptions import SwimModelError, SwimSimulationError


class RolloutRunner(object):
    def __init__(self, dt=1.0e-3, horizon=6.0, outputRate=100.0, rewardWindow=2.0, verbose=False, log=sys.stderr):
        self.__verbose = verbose
        self.__lfh = log
        if not (dt > 0.0 and horizon > 0.0 and outputRate > 0.0 and rewardWindow > 0.0):
            raise SwimModelError("dt, horizon, output rate and reward window must be positive")
        if horizon < rewardWindow:
            raise SwimModelError("horizon %r shorter than the reward window %r" % (horizon, rewardWindow))
        self.dt = dt
        self.horizon = horizon
        self.outputRate = outputRate
        self.rewardWindow = rewardWindow

    def simulate(self, model, hydro, policy, recordForces=False, initial=None, meta=None):
        """ Integrate from ``initial`` (straight body at rest by default) for the horizon.

            Integrator aborts are caught and returned as a flagged trajectory.
        """
        nSteps = int(round(self.horizon / self.dt))
        every = max(1, int(round(1.0 / (self.outputRate * self.dt))))
        dyn = ChainDynamics(model, hydro, verbose=self.__verbose, log=self.__lfh)
        integ = ChainIntegrator(dyn, verbose=self.__verbose, log=self.__lfh)
        kin = dyn.kinematics
        state = initial if initial is not None else initialState(model)
        #
        times, qList, qdList = [state.t], [state.q], [state.qdot]
        comTimes = np.empty(nSteps + 1)
        com = np.empty((nSteps + 1, 2))
        comTimes[0] = state.t
        com[0] = kin.centerOfMass(state.q)
        logTimes, entries = [], []
        aborted, reason, abortTime = False, "", None
        nDone = 0
        for k in range(nSteps):
            try:
                newState, entry = integ.step(state, policy, self.dt, recordForces=recordForces, stepIndex=k)
            except SwimSimulationError as e:
                aborted, reason, abortTime = True, e.reason, e.time
                self.__lfh.write("+RolloutRunner.simulate() - rollout aborted at t %r: %s\n" % (e.time, e.reason))
                break
            if entry is not None:
                logTimes.append(state.t)
                entries.append(entry)
            state = newState
            nDone = k + 1
            comTimes[nDone] = state.t
            com[nDone] = kin.centerOfMass(state.q)
            if nDone % every == 0 or nDone == nSteps:
                times.append(state.t)
                qList.append(state.q)
                qdList.append(state.qdot)
            #
        #
        metaD = {"noa": model.noa, "dt": self.dt, "horizon": self.horizon, "output_rate": self.outputRate,
                 "policy": [float(v) for v in encode(policy)] if policy is not None else [],
                 "frequency": float(policy.frequency) if policy is not None else 0.0}
        if meta:
            metaD.update(meta)
        forceLog = ForceLog.fromEntries(logTimes, entries) if entries else None
        return Trajectory(times=np.array(times), q=np.array(qList), qdot=np.array(qdList), comTimes=comTimes[: nDone + 1].copy(),
                          com=com[: nDone + 1].copy(), forceLog=forceLog, meta=metaD, aborted=aborted, abortReason=reason, abortTime=abortTime)

    def reward(self, traj):
        return reward(traj, self.rewardWindow)

    def gaitMetrics(self, traj, model):
        return gaitMetrics(traj, model, self.rewardWindow)


def simulate(model, hydro, policy, horizon=6.0, dt=1.0e-3, outputRate=100.0, recordForces=False, meta=None):
    return RolloutRunner(dt=dt, horizon=horizon, outputRate=outputRate, rewardWindow=min(2.0, horizon)).simulate(
        model, hydro, policy, recordForces=recordForces, meta=meta)


def reward(traj, window=2.0):
    """ Net center-of-mass displacement over the last ``window`` seconds divided by the window.
    """
    if traj.aborted or len(traj.comTimes) < 2:
        return 0.0
    if traj.duration < window - 1.0e-9:
        raise SwimModelError("trajectory of %r s is shorter than the reward window %r s" % (traj.duration, window))
    p1 = traj.com[-1]
    p0 = traj.comAt(traj.endTime - window)
    return float(np.linalg.norm(p1 - p0) / window)


def gaitMetrics(traj, model, window=2.0, frequency=None):
    """ Speed, per-segment lateral amplitude and the dimensionless groups over the steady window.
    """
    f = float(frequency if frequency is not None else traj.meta.get("frequency", 0.0))
    nBody = model.bodyCount
    l = model.segments[0].length  # noqa: E741
    speed = reward(traj, window)
    if traj.aborted:
        zeros = np.zeros(nBody)
        return GaitMetrics(speed=0.0, amplitudes=zeros, speedRatio=0.0, amplitudeRatios=zeros, bodyLengthsPerSecond=0.0, frequency=f)
    kin = ChainKinematics(model)
    idx = traj.windowIndices(window)
    points = [kin.bodyPoints(traj.q[i]) for i in idx]
    axes = np.array([p[1] for p in points])
    midpoints = np.array([p[0] for p in points]) + 0.5 * kin.lengths[None, :, None] * axes
    disp = lateralDisplacements(midpoints, axes)
    amps = envelopeAmplitudes(traj.times[idx], disp, f)
    return GaitMetrics(speed=speed, amplitudes=amps, speedRatio=speed / (l * f) if f > 0.0 else 0.0, amplitudeRatios=amps / l,
                       bodyLengthsPerSecond=speed / model.totalLength(), frequency=f)
