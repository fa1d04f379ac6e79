##
# File:  GaitPolicy.py
# Date:  16-Mar-2023
# Updates:
#  11-Apr-2023  policyBounds() shared by the optimizer and the CLI
##
"""
Harmonic voltage gait and its flat optimization vector

    gamma = [e_1, Psi_2, e_2, ..., Psi_NoA, e_NoA, f]

Phases are stored in cycles so that E_j(t) = e_j sin(2 pi (f t + Psi_j)).

"""
__docformat__ = "restructuredtext en"
__author__ = "muBot modeling group"
__license__ = "Apache 2.0"
__version__ = "V0.02"

import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from mubot.apps.fish_swim.utils.SwimExceptions import SwimModelError


@dataclass(frozen=True)
class GaitPolicy:
    amplitudes: Tuple[float, ...]
    phases: Tuple[float, ...]
    frequency: float

    def __post_init__(self):
        if len(self.amplitudes) < 1 or len(self.phases) != len(self.amplitudes):
            raise SwimModelError("policy needs one amplitude and one phase per actuator")
        if self.phases[0] != 0.0:
            raise SwimModelError("phase of the first actuator is fixed at 0")
        if not (math.isfinite(self.frequency) and self.frequency > 0.0):
            raise SwimModelError("input frequency must be positive, got %r" % self.frequency)
        if any((not math.isfinite(e)) or e < 0.0 for e in self.amplitudes):
            raise SwimModelError("voltage amplitudes must be finite and >= 0")
        #
        # cached arrays for the integrator inner loop
        object.__setattr__(self, "amplitudeArray", np.array(self.amplitudes, dtype=float))
        object.__setattr__(self, "phaseArray", np.array(self.phases, dtype=float))

    @property
    def noa(self):
        return len(self.amplitudes)

    def checkBounds(self, eMax):
        if max(self.amplitudes) > eMax:
            raise SwimModelError("voltage amplitude %r exceeds E_max %r" % (max(self.amplitudes), eMax))

    @classmethod
    def zero(cls, noa, frequency=1.0):
        return cls(amplitudes=(0.0,) * noa, phases=(0.0,) * noa, frequency=frequency)


def encode(policy):
    """ Flatten a policy into the gamma vector (length 2 NoA).
    """
    out = [policy.amplitudes[0]]
    for j in range(1, policy.noa):
        out.append(policy.phases[j])
        out.append(policy.amplitudes[j])
    out.append(policy.frequency)
    return np.array(out, dtype=float)


def decode(vector, noa):
    """ Inverse of encode().
    """
    gamma = np.asarray(vector, dtype=float).ravel()
    if gamma.size != 2 * noa:
        raise SwimModelError("policy vector length %d does not match 2 * NoA = %d" % (gamma.size, 2 * noa))
    #
    amplitudes = [float(gamma[0])]
    phases = [0.0]
    for j in range(1, noa):
        phases.append(float(gamma[2 * j - 1]))
        amplitudes.append(float(gamma[2 * j]))
    #
    return GaitPolicy(amplitudes=tuple(amplitudes), phases=tuple(phases), frequency=float(gamma[-1]))


def policyBounds(noa, eMax=5.0, fMin=0.5, fMax=5.0):
    """ Per-dimension [lo, hi] for gamma: e in [0, E_max], Psi in [0, 1] cycles, f in [f_min, f_max].
    """
    lo = np.zeros(2 * noa)
    hi = np.zeros(2 * noa)
    hi[0] = eMax
    for j in range(1, noa):
        lo[2 * j - 1], hi[2 * j - 1] = 0.0, 1.0
        lo[2 * j], hi[2 * j] = 0.0, eMax
    lo[-1], hi[-1] = fMin, fMax
    return lo, hi
