##
# File:  DimensionlessModel.py
# Date:  25-Mar-2023
# Updates:
#  21-Oct-2023  longitudinal reactive term sign matches HydroForces
##
"""
Dimensionless form of the segmental hydrodynamic model.

Forces are scaled by pi/4 rho_f l^2 h^2 f^2 and torques by pi/4 rho_f l^3 h^2 f^2.
Kinematics are scaled as u/U, v/(f A), omega/f, a0/(f^2 A), omegaDot/f^2, which
leaves the groups A/l, U/(l f), AR = l/h and P/h as the only parameters besides
the coefficients.

"""
__docformat__ = "restructuredtext en"
__author__ = "muBot modeling group"
__license__ = "Apache 2.0"
__version__ = "V0.01"

from dataclasses import dataclass

import numpy as np

from mubot.apps.fish_swim.hydro.HydroForces import dragIntegrals, reactiveWrench, resistiveWrench
from mubot.apps.fish_swim.hydro.SegmentFrameState import SegmentFrameState
from mubot.apps.fish_swim.utils.SwimExceptions import SwimModelError


@dataclass(frozen=True)
class DimensionlessScales:
    length: float
    depth: float
    frequency: float
    amplitude: float
    speed: float
    rhoF: float = 1000.0

    def __post_init__(self):
        if min(self.length, self.depth, self.frequency, self.amplitude, self.speed, self.rhoF) <= 0.0:
            raise SwimModelError("dimensionless scales must be positive: %r" % (self,))

    def forceScale(self):
        return 0.25 * np.pi * self.rhoF * self.length ** 2 * self.depth ** 2 * self.frequency ** 2

    def torqueScale(self):
        return self.forceScale() * self.length


@dataclass(frozen=True)
class DimensionlessState:
    uHat: float
    v0Hat: float
    omegaHat: float
    aHat: float
    omegaDotHat: float


@dataclass(frozen=True)
class DimensionlessGroups:
    amplitudeRatio: float   # A / l
    speedRatio: float       # U / (l f)
    aspectRatio: float      # l / h
    perimeterRatio: float   # P / h


def toDimensionless(s, scales):
    f = scales.frequency
    return DimensionlessState(uHat=s.u / scales.speed, v0Hat=s.v0 / (f * scales.amplitude), omegaHat=s.omega / f,
                              aHat=s.a0 / (f * f * scales.amplitude), omegaDotHat=s.omegaDot / (f * f))


def fromDimensionless(stateHat, scales, perimeter):
    """ Rebuild the dimensional segment state for geometry (l, h, P) and the given scales.
    """
    f = scales.frequency
    v0 = stateHat.v0Hat * f * scales.amplitude
    omega = stateHat.omegaHat * f
    return SegmentFrameState(u=stateHat.uHat * scales.speed, v0=v0, vl=v0 + omega * scales.length, omega=omega,
                             length=scales.length, depth=scales.depth, perimeter=perimeter,
                             a0=stateHat.aHat * f * f * scales.amplitude, omegaDot=stateHat.omegaDotHat * f * f)


def groupsFor(scales, perimeter):
    return DimensionlessGroups(amplitudeRatio=scales.amplitude / scales.length, speedRatio=scales.speed / (scales.length * scales.frequency),
                               aspectRatio=scales.length / scales.depth, perimeterRatio=perimeter / scales.depth)


def dimensionlessWrenches(stateHat, groups, params):
    """ Direct evaluation of the dimensionless reactive and resistive wrenches.

        :Returns:
            (reactive, resistive) as arrays [f_long, f_lat, tau]
    """
    ratioA = groups.amplitudeRatio
    ratioU = groups.speedRatio
    uH, v0H, wH, aH, wdH = stateHat.uHat, stateHat.v0Hat, stateHat.omegaHat, stateHat.aHat, stateHat.omegaDotHat
    vlH = v0H + wH / ratioA
    #
    react = np.zeros(3)
    if params.hasReactive:
        react[0] = ratioA * wH * v0H + 0.5 * wH * wH + params.cp * 0.5 * ratioA * ratioA * (v0H * v0H - vlH * vlH)
        react[1] = -ratioA * aH - 0.5 * wdH
        react[2] = -(0.5 * ratioA * aH - 0.5 * ratioU * uH * wH + wdH / 3.0 + ratioU * ratioA * uH * vlH)
        react *= params.ca
    #
    i0Hat, i1Hat = dragIntegrals(v0H, wH / ratioA, 1.0)
    pref = -2.0 / np.pi * groups.aspectRatio
    resis = np.array([pref * params.cf * groups.perimeterRatio * ratioU * ratioU * abs(uH) * uH,
                      pref * params.cd * ratioA * ratioA * i0Hat,
                      pref * params.cd * ratioA * ratioA * i1Hat])
    return react, resis


def nondimensionalWrenchCheck(s, params, scales):
    """ Dimensional wrenches of ``s`` normalized by the force/torque scales.

        :Returns:
            (reactive, resistive) as arrays [f_long, f_lat, tau]
    """
    norm = np.array([scales.forceScale(), scales.forceScale(), scales.torqueScale()])
    react = reactiveWrench(s, params).asArray() / norm
    resis = resistiveWrench(s, params).asArray() / norm
    return react, resis
