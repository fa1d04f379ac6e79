##
# File:  ActuatorModel.py
# Date:  16-Mar-2023
# Updates:
##
"""
Calibrated linear model of the coil/magnet actuator and the harmonic voltage
signal sent to each actuator.

"""
__docformat__ = "restructuredtext en"
__author__ = "muBot modeling group"
__license__ = "Apache 2.0"
__version__ = "V0.01"

import math
from dataclasses import dataclass

import numpy as np

from mubot.apps.fish_swim.utils.SwimExceptions import SwimModelError


@dataclass(frozen=True)
class ActuatorConstants:
    """ Torque constant k_T (N m/A), back-EMF constant k_EMF (V s), coil resistance R (ohm).
    """
    kT: float = 1.26e-3
    kEmf: float = 1.26e-3
    resistance: float = 10.0

    def __post_init__(self):
        for name in ("kT", "kEmf", "resistance"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0.0):
                raise SwimModelError("actuator constant %s must be positive, got %r" % (name, value))
            #
        #


def voltageAt(policy, j, t):
    """ E_j(t) = e_j sin(2 pi (f t + Psi_j)), Psi_1 = 0.  ``j`` is 1-based.
    """
    if not 1 <= j <= policy.noa:
        raise SwimModelError("actuator index %d outside 1..%d" % (j, policy.noa))
    return policy.amplitudes[j - 1] * math.sin(2.0 * math.pi * (policy.frequency * t + policy.phases[j - 1]))


def voltages(policy, t):
    """ All actuator voltages at time ``t`` as an array.
    """
    return policy.amplitudeArray * np.sin(2.0 * np.pi * (policy.frequency * t + policy.phaseArray))


def actuatorTorque(voltage, jointRate, constants):
    """ T = (E - k_EMF * omega_joint) / R * k_T.  Works elementwise on arrays.
    """
    return (voltage - constants.kEmf * jointRate) / constants.resistance * constants.kT
