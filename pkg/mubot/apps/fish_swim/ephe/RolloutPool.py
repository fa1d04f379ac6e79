##
# File:  RolloutPool.py
# Date:  02-May-2023
# Updates:
##
"""
Batch reward evaluation of sampled policy vectors, serial or across worker
processes.

"""
__docformat__ = "restructuredtext en"
__author__ = "muBot modeling group"
__license__ = "Apache 2.0"
__version__ = "V0.01"

import sys
import traceback

import numpy as np

from rcsb.utils.multiproc.MultiProcUtil import MultiProcUtil

from mubot.apps.fish_swim.actuation.GaitPolicy import decode


class RolloutPool(object):
    """ Scores gamma vectors by simulating one rollout each with ``runner``.
    """

    def __init__(self, model, hydro, runner, jobs=1, verbose=False, log=sys.stderr):
        self.__model = model
        self.__hydro = hydro
        self.__runner = runner
        self.__jobs = max(1, int(jobs))
        self.__verbose = verbose
        self.__lfh = log

    def evaluate(self, samples):
        """ Rewards in sample order; failed rollouts score 0.
        """
        dataList = [(i, tuple(float(v) for v in g)) for i, g in enumerate(samples)]
        rewards = np.zeros(len(dataList))
        if self.__jobs <= 1 or len(dataList) <= 1:
            _, resultList, _ = self.runMultiProcess(dataList, "serial", {}, None)
        else:
            mpu = MultiProcUtil(verbose=self.__verbose)
            mpu.set(workerObj=self, workerMethod="runMultiProcess")
            ok, failList, retLists, _diagList = mpu.runMulti(dataList=dataList, numProc=min(self.__jobs, len(dataList)), numResults=1)
            if not ok:
                self.__lfh.write("+RolloutPool.evaluate() - %d rollouts failed in workers\n" % len(failList))
            resultList = retLists[0] if retLists else []
        #
        # worker results arrive in completion order
        for i, r in sorted(resultList):
            rewards[i] = r
        return rewards

    def runMultiProcess(self, dataList, procName, optionsD, workingDir):  # pylint: disable=unused-argument
        successList = []
        resultList = []
        for item in dataList:
            idx, gamma = item
            try:
                policy = decode(gamma, self.__model.noa)
                traj = self.__runner.simulate(self.__model, self.__hydro, policy)
                resultList.append((idx, self.__runner.reward(traj)))
                successList.append(item)
            except Exception:  # pylint: disable=broad-except
                self.__lfh.write("+RolloutPool.runMultiProcess() - %s rollout %d failed\n" % (procName, idx))
                traceback.print_exc(file=self.__lfh)
                resultList.append((idx, 0.0))
            #
        #
        return successList, resultList, []
