##
# File:  HydroParams.py
# Date:  20-Mar-2023
# Updates:
##
"""
Hydrodynamic coefficients and the HM-1 .. HM-4 presets.

"""
__docformat__ = "restructuredtext en"
__author__ = "muBot modeling group"
__license__ = "Apache 2.0"
__version__ = "V0.01"

import math
from dataclasses import dataclass

from mubot.apps.fish_swim.utils.SwimExceptions import SwimModelError

# fmt:off
HM_PRESETS = {
    "HM1": (0.0, 0.0),  # resistive only
    "HM2": (1.0, 0.0),  # noqa: E241
    "HM3": (1.0, 0.5),  # noqa: E241
    "HM4": (1.0, 1.0),  # noqa: E241
}
# fmt:on


def normalizeHmId(hmId):
    return str(hmId).strip().upper().replace("-", "").replace("_", "")


def hmPreset(hmId):
    """ (C_a, C_p) for a hydrodynamic model id.
    """
    key = normalizeHmId(hmId)
    if key not in HM_PRESETS:
        raise SwimModelError("unknown hydrodynamic model '%s'" % hmId)
    return HM_PRESETS[key]


@dataclass(frozen=True)
class HydroParams:
    ca: float
    cp: float
    cf: float = 0.06
    cd: float = 2.25
    rhoF: float = 1000.0
    hmId: str = "custom"

    def __post_init__(self):
        for name in ("ca", "cp", "cf", "cd"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value >= 0.0):
                raise SwimModelError("hydrodynamic coefficient %s must be >= 0, got %r" % (name, value))
            #
        #
        if not (math.isfinite(self.rhoF) and self.rhoF > 0.0):
            raise SwimModelError("fluid density must be positive, got %r" % self.rhoF)
        if self.hmId != "custom" and hmPreset(self.hmId) != (self.ca, self.cp):
            raise SwimModelError("(C_a, C_p) = (%r, %r) do not match preset %s" % (self.ca, self.cp, self.hmId))
        #

    @classmethod
    def fromPreset(cls, hmId, cf=0.06, cd=2.25, rhoF=1000.0):
        ca, cp = hmPreset(hmId)
        return cls(ca=ca, cp=cp, cf=cf, cd=cd, rhoF=rhoF, hmId=normalizeHmId(hmId))

    @classmethod
    def still(cls, rhoF=1000.0):
        """ All coefficients zero: no fluid forces at all. """
        return cls(ca=0.0, cp=0.0, cf=0.0, cd=0.0, rhoF=rhoF)

    @property
    def hasReactive(self):
        return self.ca > 0.0
