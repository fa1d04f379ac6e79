##
# File:  ChainState.py
# Date:  28-Mar-2023
# Updates:
#  12-Jun-2023  force log carries per-joint mechanism torques
##
"""
Generalized state of the planar chain and the per-step force log.

q = (x_h, y_h, theta_h, phi_1 .. phi_{NoA+1}); (x_h, y_h) is the nose point and
theta_h the angle of the head's longitudinal (tail-ward) axis.

"""
__docformat__ = "restructuredtext en"
__author__ = "muBot modeling group"
__license__ = "Apache 2.0"
__version__ = "V0.02"

from dataclasses import dataclass
from typing import Any

import numpy as np

SEGMENT_MECHANISMS = ("added_mass", "pressure", "drag", "friction")
JOINT_MECHANISMS = ("actuation", "spring", "added_mass", "pressure", "drag", "friction")


@dataclass(frozen=True)
class GeneralizedState:
    q: Any
    qdot: Any
    t: float = 0.0

    def asVector(self):
        return np.concatenate([self.q, self.qdot])

    @classmethod
    def fromVector(cls, y, t):
        n = y.size // 2
        return cls(q=y[:n].copy(), qdot=y[n:].copy(), t=t)

    def isFinite(self):
        return bool(np.all(np.isfinite(self.q)) and np.all(np.isfinite(self.qdot)))


def initialState(model, pose=(0.0, 0.0, 0.0), jointAngles=None, qdot=None, t=0.0):
    """ Straight chain at rest unless angles or rates are supplied.
    """
    q = np.zeros(model.coordinateCount)
    q[:3] = pose
    if jointAngles is not None:
        q[3:] = jointAngles
    v = np.zeros(model.coordinateCount) if qdot is None else np.array(qdot, dtype=float)
    return GeneralizedState(q=q, qdot=v, t=t)


@dataclass(frozen=True)
class ForceLogEntry:
    """ One time step.

        segmentForces  (bodies, 4, 2)  world-frame force per mechanism in SEGMENT_MECHANISMS order
        segmentTorques (bodies, 4)     torque about the segment's anterior boundary point
        jointTorques   (joints, 6)     generalized force on each joint angle per JOINT_MECHANISMS
        totalForces    (bodies, 2)     total hydrodynamic force evaluated in one pass
        totalTorques   (bodies,)
    """
    segmentForces: Any
    segmentTorques: Any
    jointTorques: Any
    totalForces: Any
    totalTorques: Any


@dataclass
class ForceLog:
    """ Stacked force log entries with their time stamps.
    """
    times: Any
    segmentForces: Any
    segmentTorques: Any
    jointTorques: Any
    totalForces: Any
    totalTorques: Any

    @classmethod
    def fromEntries(cls, times, entries):
        return cls(times=np.asarray(times, dtype=float),
                   segmentForces=np.array([e.segmentForces for e in entries]),
                   segmentTorques=np.array([e.segmentTorques for e in entries]),
                   jointTorques=np.array([e.jointTorques for e in entries]),
                   totalForces=np.array([e.totalForces for e in entries]),
                   totalTorques=np.array([e.totalTorques for e in entries]))

    def __len__(self):
        return len(self.times)

    def window(self, tStart):
        sel = self.times >= tStart - 1.0e-12
        return ForceLog(self.times[sel], self.segmentForces[sel], self.segmentTorques[sel], self.jointTorques[sel],
                        self.totalForces[sel], self.totalTorques[sel])
