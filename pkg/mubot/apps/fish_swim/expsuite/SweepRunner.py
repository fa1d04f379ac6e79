##
# File:  SweepRunner.py
# Date:  12-Jun-2023
# Updates:
#  27-Jun-2023  session spread and final-mean rewards in the case result
#  02-Oct-2023  optional trajectory export of the best gait
#  21-Oct-2023  aborted analysis rollouts are marked and their force analyses skipped
##
"""
Run the case grid: train every case, re-simulate its best gait with the
force log switched on, analyze it and persist the result.  Completed cases
(same content hash) are skipped on a rerun; failed ones are retried.

"""
__docformat__ = "restructuredtext en"
__author__ = "muBot modeling group"
__license__ = "Apache 2.0"
__version__ = "V0.04"

import os
import sys
import traceback

from mubot.apps.fish_swim.actuation.GaitPolicy import decode
from mubot.apps.fish_swim.dynamics.ChainState import JOINT_MECHANISMS, SEGMENT_MECHANISMS
from mubot.apps.fish_swim.ephe.EpheTrainer import train
from mubot.apps.fish_swim.expsuite.CaseSpec import CaseResult, thrustColumnTotals
from mubot.apps.fish_swim.expsuite.CaseStore import CaseStore
from mubot.apps.fish_swim.expsuite.GaitAnalysis import tailTorqueDecomposition, thrustDecomposition, wavelength
from mubot.apps.fish_swim.rollout.RolloutRunner import RolloutRunner, gaitMetrics
from mubot.apps.fish_swim.rollout.TrajectoryIo import TrajectoryIo


class SweepRunner(object):
    def __init__(self, storeDir, jobs=1, exportTrajectories=False, verbose=False, log=sys.stderr):
        self.__storeDir = storeDir
        self.__jobs = jobs
        self.__export = exportTrajectories
        self.__verbose = verbose
        self.__lfh = log
        self.__store = CaseStore(storeDir, verbose=verbose, log=log)

    def run(self, cases, resume=True):
        """ Results for ``cases`` in the given order.
        """
        results = []
        for spec in cases:
            if resume and self.__store.isComplete(spec):
                self.__lfh.write("+SweepRunner.run() - %s already complete, skipped\n" % spec.caseId)
                results.append(self.__store.read(spec))
                continue
            #
            try:
                result = self.runCase(spec)
            except Exception as e:  # pylint: disable=broad-except
                self.__lfh.write("+SweepRunner.run() - case %s failed\n" % spec.caseId)
                traceback.print_exc(file=self.__lfh)
                result = CaseResult(caseId=spec.caseId, contentHash=spec.contentHash(), status="failed", message="%s: %s" % (type(e).__name__, str(e)))
            #
            self.__store.write(spec, result)
            results.append(result)
        #
        return results

    def runCase(self, spec):
        model = spec.buildRobot()
        hydro = spec.hydroParams()
        cfg = spec.trainingConfig()
        cfg["jobs"] = self.__jobs
        learning = []
        self.__lfh.write("+SweepRunner.runCase() - training %s\n" % spec.caseId)
        training = train(model, hydro, cfg, callback=lambda rec: learning.append(rec.asDict()), verbose=self.__verbose, log=self.__lfh)
        #
        policy = decode(training.bestGamma, model.noa)
        runner = RolloutRunner(dt=spec.dt, horizon=spec.horizon, outputRate=spec.outputRate, rewardWindow=spec.rewardWindow,
                               verbose=self.__verbose, log=self.__lfh)
        traj = runner.simulate(model, hydro, policy, recordForces=True, meta={"case_id": spec.caseId, "content_hash": spec.contentHash(),
                                                                               "seed": spec.seed, "case": spec.asDict()})
        if self.__export:
            TrajectoryIo(verbose=self.__verbose, log=self.__lfh).write(traj, os.path.join(self.__storeDir, "trajectories", spec.caseId, "trajectory"))
        #
        result = analyzeCase(spec, model, hydro, traj, training.bestReward, runner.rewardWindow, log=self.__lfh)
        result.bestGamma = [float(v) for v in training.bestGamma]
        result.sessionBest = [s.bestReward for s in training.sessions]
        result.sessionFinal = [s.finalReward for s in training.sessions]
        result.sessionSpread = training.sessionSpread()
        result.learning = learning
        return result


def analyzeCase(spec, model, hydro, traj, speed, window, log=sys.stderr):
    """ CaseResult analyses of one force-recorded trajectory of the case's best gait.
    """
    metrics = gaitMetrics(traj, model, window)
    totalLength = model.totalLength()
    l = model.segments[0].length  # noqa: E741
    f = metrics.frequency
    result = CaseResult(caseId=spec.caseId, contentHash=spec.contentHash(), speed=float(speed), bodyLengthsPerSecond=float(speed) / totalLength,
                        totalLength=totalLength, segmentLength=l, frequency=f)
    labels = model.segmentLabels()
    result.segmentLabels = labels
    result.amplitudes = [float(v) for v in metrics.amplitudes]
    result.amplitudeRatios = [float(v) for v in metrics.amplitudeRatios]
    result.speedRatio = float(speed) / (l * f) if f > 0.0 else 0.0
    #
    wl = wavelength(traj, model, f, window)
    result.wavelength = float(wl.wavelength)
    result.wavePerSegment = float(wl.wavePerSegment)
    result.wavelengthFlagged = bool(wl.flagged)
    #
    if traj.aborted:
        result.aborted = True
        result.message = "analysis rollout aborted at t %r: %s" % (traj.abortTime, traj.abortReason)
        log.write("+SweepRunner.analyzeCase() - %s %s, force analyses skipped\n" % (spec.caseId, result.message))
    elif traj.forceLog is None:
        log.write("+SweepRunner.analyzeCase() - %s has no force log\n" % spec.caseId)
    #
    if traj.aborted or traj.forceLog is None:
        result.thrust = [[0.0] * len(SEGMENT_MECHANISMS) for _ in labels]
        result.thrustTotals = thrustColumnTotals(result.thrust)
        result.thrustFlagged = True
        result.tailTorqueRms = {m: 0.0 for m in JOINT_MECHANISMS}
    else:
        thrust = thrustDecomposition(traj, labels, window)
        result.thrust = [[float(v) for v in row] for row in thrust.perSegment]
        result.thrustTotals = thrustColumnTotals(result.thrust)
        result.thrustFlagged = bool(thrust.flagged)
        result.tailTorqueRms = dict(tailTorqueDecomposition(traj, window).rms)
        if thrust.flagged:
            log.write("+SweepRunner.analyzeCase() - %s thrust flagged: %s\n" % (spec.caseId, thrust.reason))
        #
    #
    result.controlParams = {"noa": float(model.noa), "ar": float(model.ar), "k_hat": float(model.kHat), "c_a": hydro.ca, "c_p": hydro.cp,
                            "c_f": hydro.cf, "c_d": hydro.cd, "hm": hydro.hmId, "stiffness": model.stiffnessLevel, "speed_ratio": result.speedRatio}
    if wl.flagged:
        log.write("+SweepRunner.analyzeCase() - %s wavelength flagged: %s\n" % (spec.caseId, wl.reason))
    return result


def runSweep(cases, storeDir, jobs=1, resume=True, exportTrajectories=False, verbose=False, log=sys.stderr):
    return SweepRunner(storeDir, jobs=jobs, exportTrajectories=exportTrajectories, verbose=verbose, log=log).run(cases, resume=resume)
