##
# File:  TrajectoryIo.py
# Date:  22-Jun-2023
# Updates:
##
"""
Trajectory export and re-import.

A trajectory written under stem ``<dir>/trajectory`` produces

    trajectory.csv         states at the output rate plus the CoM
    trajectory.meta.json   metadata (case, policy vector, dt, abort flag)
    trajectory.forces.npz  full-rate CoM track and, when recorded, the force log

"""
__docformat__ = "restructuredtext en"
__author__ = "muBot modeling group"
__license__ = "Apache 2.0"
__version__ = "V0.01"

import csv
import json
import os
import sys

import numpy as np

from mubot.apps.fish_swim.dynamics.ChainState import ForceLog
from mubot.apps.fish_swim.rollout.Trajectory import Trajectory
from mubot.apps.fish_swim.utils.SwimExceptions import SwimModelError


def trajectoryHeader(jointCount):
    names = ["t", "x_h", "y_h", "theta_h"] + ["phi_%d" % j for j in range(1, jointCount + 1)]
    names += ["xdot_h", "ydot_h", "thetadot_h"] + ["phidot_%d" % j for j in range(1, jointCount + 1)]
    return names + ["com_x", "com_y"]


class TrajectoryIo(object):
    def __init__(self, verbose=False, log=sys.stderr):
        self.__verbose = verbose
        self.__lfh = log

    def write(self, traj, stem):
        """ Write the three trajectory files for ``stem`` (path without extension).
        """
        dirPath = os.path.dirname(stem)
        if dirPath and not os.access(dirPath, os.F_OK):
            os.makedirs(dirPath)
        #
        nJoint = traj.q.shape[1] - 3
        with open(stem + ".csv", "w", newline="") as ofh:
            writer = csv.writer(ofh)
            writer.writerow(trajectoryHeader(nJoint))
            for i, t in enumerate(traj.times):
                com = traj.comAt(t)
                row = [t] + list(traj.q[i]) + list(traj.qdot[i]) + list(com)
                writer.writerow(["%.17g" % v for v in row])
            #
        #
        metaD = dict(traj.meta)
        metaD.update({"aborted": traj.aborted, "abort_reason": traj.abortReason, "abort_time": traj.abortTime})
        with open(stem + ".meta.json", "w") as ofh:
            json.dump(metaD, ofh, indent=2, sort_keys=True)
        #
        arrays = {"com_times": traj.comTimes, "com": traj.com}
        if traj.forceLog is not None:
            fl = traj.forceLog
            arrays.update({"force_times": fl.times, "segment_forces": fl.segmentForces, "segment_torques": fl.segmentTorques,
                           "joint_torques": fl.jointTorques, "total_forces": fl.totalForces, "total_torques": fl.totalTorques})
        np.savez_compressed(stem + ".forces.npz", **arrays)
        if self.__verbose:
            self.__lfh.write("+TrajectoryIo.write() - wrote %d samples to %s.csv\n" % (len(traj.times), stem))
        #

    def read(self, stem):
        """ Rebuild a Trajectory from files written by write().  ``stem`` may carry the .csv suffix.
        """
        if stem.endswith(".csv"):
            stem = stem[:-4]
        if not os.access(stem + ".csv", os.F_OK):
            raise SwimModelError("trajectory file %s.csv not found" % stem)
        #
        with open(stem + ".csv", newline="") as ifh:
            reader = csv.reader(ifh)
            header = next(reader)
            rows = np.array([[float(v) for v in row] for row in reader if row])
        nJoint = sum(1 for name in header if name.startswith("phi_"))
        nc = 3 + nJoint
        if rows.size == 0:
            rows = np.zeros((0, len(header)))
        times = rows[:, 0]
        q = rows[:, 1: 1 + nc]
        qdot = rows[:, 1 + nc: 1 + 2 * nc]
        #
        metaD = {}
        if os.access(stem + ".meta.json", os.F_OK):
            with open(stem + ".meta.json") as ifh:
                metaD = json.load(ifh)
        aborted = bool(metaD.pop("aborted", False))
        reason = metaD.pop("abort_reason", "")
        abortTime = metaD.pop("abort_time", None)
        #
        comTimes, com, forceLog = times, rows[:, -2:], None
        if os.access(stem + ".forces.npz", os.F_OK):
            with np.load(stem + ".forces.npz") as npz:
                comTimes = npz["com_times"]
                com = npz["com"]
                if "force_times" in npz.files:
                    forceLog = ForceLog(times=npz["force_times"], segmentForces=npz["segment_forces"], segmentTorques=npz["segment_torques"],
                                        jointTorques=npz["joint_torques"], totalForces=npz["total_forces"], totalTorques=npz["total_torques"])
                #
            #
        #
        return Trajectory(times=times, q=q, qdot=qdot, comTimes=comTimes, com=com, forceLog=forceLog, meta=metaD,
                          aborted=aborted, abortReason=reason, abortTime=abortTime)
