##
# File:  RobotModel.py
# Date:  14-Mar-2023
# Updates:
#  09-May-2023  segment labels and arc positions for the analysis tables
##
"""
Immutable morphology records: segment geometry, mass properties, joints and
the assembled robot.

"""
__docformat__ = "restructuredtext en"
__author__ = "muBot modeling group"
__license__ = "Apache 2.0"
__version__ = "V0.02"

import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from mubot.apps.fish_swim.actuation.ActuatorModel import ActuatorConstants
from mubot.apps.fish_swim.utils.SwimExceptions import SwimModelError

SEGMENT_KINDS = ("head", "body", "peduncle", "fin")


@dataclass(frozen=True)
class SegmentGeometry:
    """ One rigid segment. ``h`` is the vertical ellipse axis (depth), ``w`` the
        lateral axis (width), ``perimeter`` the wetted cross-section perimeter.
    """
    length: float
    depth: float
    width: float
    perimeter: float
    kind: str = "body"
    finThickness: float = 0.0

    def __post_init__(self):
        if self.kind not in SEGMENT_KINDS:
            raise SwimModelError("unknown segment kind '%s'" % self.kind)
        for name in ("length", "depth", "width", "perimeter"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0.0):
                raise SwimModelError("segment %s must be positive, got %r" % (name, value))
        #
        if self.kind == "fin":
            if not 0.0 < self.finThickness < self.width:
                raise SwimModelError("fin thickness must lie in (0, width), got %r" % self.finThickness)
        else:
            # the perimeter of an ellipse with diameters (h, w) lies between these bounds
            lo = math.pi * 0.5 * (self.depth + self.width)
            hi = math.pi * max(self.depth, self.width)
            if not lo * (1.0 - 1.0e-9) <= self.perimeter <= hi * (1.0 + 1.0e-9):
                raise SwimModelError("perimeter %r outside elliptical bounds [%r, %r]" % (self.perimeter, lo, hi))
            #
        #


@dataclass(frozen=True)
class MassProps:
    mass: float
    inertia: float
    comOffset: float

    def __post_init__(self):
        if not (self.mass > 0.0 and self.inertia > 0.0 and self.comOffset >= 0.0):
            raise SwimModelError("invalid mass properties %r" % (self,))


@dataclass(frozen=True)
class JointSpec:
    """ Joint ``index`` (1-based) between body ``index - 1`` and body ``index``.
    """
    index: int
    stiffness: float
    actuated: bool


@dataclass(frozen=True)
class RobotModel:
    segments: Tuple[SegmentGeometry, ...]
    massProps: Tuple[MassProps, ...]
    joints: Tuple[JointSpec, ...]
    actuator: ActuatorConstants
    noa: int
    ar: float
    kHat: float
    stiffnessLevel: str = "custom"

    def __post_init__(self):
        if len(self.segments) != self.noa + 2 or len(self.massProps) != self.noa + 2:
            raise SwimModelError("body count must be NoA + 2 = %d" % (self.noa + 2))
        if len(self.joints) != self.noa + 1:
            raise SwimModelError("joint count must be NoA + 1 = %d" % (self.noa + 1))
        for j, joint in enumerate(self.joints, start=1):
            if joint.index != j or joint.actuated != (j <= self.noa):
                raise SwimModelError("joint %d is inconsistent: %r" % (j, joint))
            #
        #
        for g, mp in zip(self.segments, self.massProps):
            if mp.comOffset > g.length:
                raise SwimModelError("center of mass offset beyond segment length")
            #
        #

    @property
    def bodyCount(self):
        return len(self.segments)

    @property
    def jointCount(self):
        return len(self.joints)

    @property
    def coordinateCount(self):
        """ (x_h, y_h, theta_h) plus one relative angle per joint. """
        return 3 + len(self.joints)

    def lengths(self):
        return np.array([g.length for g in self.segments])

    def depths(self):
        return np.array([g.depth for g in self.segments])

    def perimeters(self):
        return np.array([g.perimeter for g in self.segments])

    def masses(self):
        return np.array([mp.mass for mp in self.massProps])

    def inertias(self):
        return np.array([mp.inertia for mp in self.massProps])

    def comOffsets(self):
        return np.array([mp.comOffset for mp in self.massProps])

    def stiffnesses(self):
        return np.array([jt.stiffness for jt in self.joints])

    def totalLength(self):
        return float(sum(g.length for g in self.segments))

    def totalMass(self):
        return float(sum(mp.mass for mp in self.massProps))

    def arcPositions(self):
        """ Arc-length position of every segment midpoint measured from the nose.
        """
        lengths = self.lengths()
        return np.cumsum(lengths) - 0.5 * lengths

    def segmentLabels(self):
        """ H (head), B (body), P (peduncle), T (tail fin) per segment.
        """
        labelD = {"head": "H", "body": "B", "peduncle": "P", "fin": "T"}
        return [labelD[g.kind] for g in self.segments]
