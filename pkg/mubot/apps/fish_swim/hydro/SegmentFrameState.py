##
# File:  SegmentFrameState.py
# Date:  20-Mar-2023
# Updates:
#  04-May-2023  fields may hold arrays (one entry per segment)
##
"""
Segment-frame kinematics, planar wrenches and the acceleration-linear part of
the reactive wrench.

Frame convention: x runs from the anterior boundary (x = 0) to the posterior
boundary (x = l); y is x rotated by +90 degrees.  Torques are taken about the
anterior boundary point.  Every field may be a scalar or a numpy array holding
one value per segment; all operations are elementwise.

"""
__docformat__ = "restructuredtext en"
__author__ = "muBot modeling group"
__license__ = "Apache 2.0"
__version__ = "V0.02"

import dataclasses
from dataclasses import dataclass
from typing import Any

import numpy as np


@dataclass(frozen=True)
class SegmentFrameState:
    """ u, v0, vl (m/s), omega (rad/s), a0 = dv0/dt in the segment frame (m/s^2),
        omegaDot (rad/s^2), a0Bias (velocity-product part of a0), geometry copies.
    """
    u: Any
    v0: Any
    vl: Any
    omega: Any
    length: Any
    depth: Any
    perimeter: Any
    a0: Any = 0.0
    omegaDot: Any = 0.0
    a0Bias: Any = 0.0

    def withAccelerations(self, a0, omegaDot):
        return dataclasses.replace(self, a0=a0, omegaDot=omegaDot)

    def consistencyError(self):
        """ max |vl - (v0 + omega l)| """
        return float(np.max(np.abs(np.asarray(self.vl) - (np.asarray(self.v0) + np.asarray(self.omega) * np.asarray(self.length)))))


@dataclass(frozen=True)
class PlanarWrench:
    fLong: Any
    fLat: Any
    torque: Any

    def asArray(self):
        """ Components stacked on the last axis: (..., 3). """
        return np.stack(np.broadcast_arrays(self.fLong, self.fLat, self.torque), axis=-1).astype(float)

    def __add__(self, other):
        return PlanarWrench(self.fLong + other.fLong, self.fLat + other.fLat, self.torque + other.torque)

    @classmethod
    def zeros(cls, shape=()):
        return cls(np.zeros(shape), np.zeros(shape), np.zeros(shape))


@dataclass(frozen=True)
class AddedInertiaBlock:
    """ Reactive wrench = bias - inertia @ (uDot, a0, omegaDot).

        ``inertia`` is symmetric positive semidefinite, shape (..., 3, 3); its uDot
        row and column are zero.
    """
    inertia: Any
    bias: PlanarWrench

    def wrench(self, uDot, a0, omegaDot):
        acc = np.stack(np.broadcast_arrays(uDot, a0, omegaDot), axis=-1).astype(float)
        out = self.bias.asArray() - np.einsum("...ij,...j->...i", self.inertia, acc)
        return PlanarWrench(out[..., 0], out[..., 1], out[..., 2])
