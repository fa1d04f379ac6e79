##
# File:  HydroForces.py
# Date:  20-Mar-2023
# Updates:
#  04-May-2023  vectorized over segments; mechanism split for the force log
#  18-May-2023  closed-form drag integrals replace quadrature in the inner loop
#  21-Oct-2023  longitudinal term follows the rotating slice momentum; a0 is dv0/dt
##
"""
Segmental hydrodynamic wrenches.

Reactive part (elongated-body added-mass volume between the planes at x = 0 and
x = l, with pressure correction C_p):

    f_long =  m l w v0 + 1/2 m l^2 w^2 + C_p 1/2 m (v0^2 - vl^2)
    f_lat  = -m l a0 - 1/2 m l^2 wdot
    tau    = -[1/2 m l^2 (a0 - w u) + 1/3 m l^3 wdot + m l u vl]

with a0 = dv0/dt, the rate of the lateral boundary velocity seen in the segment
frame.  Apart from the pressure term the wrench is minus the rate of change of
the slice momentum m (l v0 + 1/2 l^2 w) n and of its moment about the anterior
point.  Its velocity-product terms do no work: with C_p = 0 the power on the
segment is minus the rate of change of 1/2 m int_0^l v^2 dx.

Resistive part (quadratic drag on the lateral velocity profile v(x) = v0 + w x,
skin friction on the longitudinal velocity):

    f_long = -1/2 rho C_f P l |u| u
    f_lat  = -1/2 rho C_d h  int_0^l |v| v dx
    tau    = -1/2 rho C_d h  int_0^l |v| v x dx

"""
__docformat__ = "restructuredtext en"
__author__ = "muBot modeling group"
__license__ = "Apache 2.0"
__version__ = "V0.03"

import numpy as np

from mubot.apps.fish_swim.hydro.SegmentFrameState import AddedInertiaBlock, PlanarWrench


def addedMassPerLength(depth, params):
    """ Cross-sectional added mass C_a * pi/4 * h^2 * rho_f (kg/m).
    """
    return params.ca * 0.25 * np.pi * np.square(depth) * params.rhoF


def reactiveComponents(s, params):
    """ Reactive wrench split into (added-mass, pressure) parts.
    """
    shape = np.shape(s.u)
    if not params.hasReactive:
        return PlanarWrench.zeros(shape), PlanarWrench.zeros(shape)
    #
    mbar = addedMassPerLength(s.depth, params)
    l = s.length  # noqa: E741
    fLong = mbar * l * s.omega * s.v0 + 0.5 * mbar * l * l * s.omega * s.omega
    fLat = -mbar * l * s.a0 - 0.5 * mbar * l * l * s.omegaDot
    torque = -(0.5 * mbar * l * l * (s.a0 - s.omega * s.u) + mbar * l ** 3 * s.omegaDot / 3.0 + mbar * l * s.u * s.vl)
    pressure = params.cp * 0.5 * mbar * (s.v0 * s.v0 - s.vl * s.vl)
    zero = np.zeros(np.shape(pressure))
    return PlanarWrench(fLong, fLat, torque), PlanarWrench(pressure, zero, zero)


def reactiveWrench(s, params):
    added, pressure = reactiveComponents(s, params)
    return added + pressure


def reactiveAddedInertia(s, params):
    """ Acceleration-linear decomposition of the reactive wrench (accelerations in ``s`` are ignored).
    """
    mbar = addedMassPerLength(s.depth, params)
    l = np.asarray(s.length, dtype=float)  # noqa: E741
    shape = np.broadcast(mbar, l, np.asarray(s.u)).shape
    inertia = np.zeros(shape + (3, 3))
    inertia[..., 1, 1] = mbar * l
    inertia[..., 1, 2] = inertia[..., 2, 1] = 0.5 * mbar * l * l
    inertia[..., 2, 2] = mbar * l ** 3 / 3.0
    bias = reactiveWrench(s.withAccelerations(0.0, 0.0), params)
    return AddedInertiaBlock(inertia=inertia, bias=bias)


def _squareIntegral(v0, omega, a, b):
    """ int_a^b (v0 + omega x)^2 dx """
    return v0 * v0 * (b - a) + v0 * omega * (b * b - a * a) + omega * omega * (b ** 3 - a ** 3) / 3.0


def _squareMomentIntegral(v0, omega, a, b):
    """ int_a^b (v0 + omega x)^2 x dx """
    return 0.5 * v0 * v0 * (b * b - a * a) + 2.0 * v0 * omega * (b ** 3 - a ** 3) / 3.0 + 0.25 * omega * omega * (b ** 4 - a ** 4)


def dragIntegrals(v0, omega, length):
    """ Closed-form I0 = int_0^l |v| v dx and I1 = int_0^l |v| v x dx for v = v0 + omega x.

        When v changes sign inside (0, l) the integrals are split at x* = -v0 / omega.
    """
    scalar = np.ndim(v0) == 0 and np.ndim(omega) == 0 and np.ndim(length) == 0
    v0, omega, length = (np.asarray(x, dtype=float) for x in np.broadcast_arrays(v0, omega, length))
    vl = v0 + omega * length
    s0 = np.sign(v0)
    s1 = np.sign(vl)
    sWhole = np.where(s0 != 0.0, s0, s1)
    i0 = sWhole * _squareIntegral(v0, omega, 0.0, length)
    i1 = sWhole * _squareMomentIntegral(v0, omega, 0.0, length)
    #
    split = (s0 * s1) < 0.0
    if np.any(split):
        safeOmega = np.where(split, omega, 1.0)
        xs = np.where(split, -v0 / safeOmega, 0.0)
        # exact antiderivative (v^3 / 3 omega) avoids cancellation on each piece
        i0Split = (-s0 * v0 ** 3 + s1 * vl ** 3) / (3.0 * safeOmega)
        i1Split = s0 * _squareMomentIntegral(v0, omega, 0.0, xs) + s1 * _squareMomentIntegral(v0, omega, xs, length)
        i0 = np.where(split, i0Split, i0)
        i1 = np.where(split, i1Split, i1)
    #
    if scalar:
        return float(i0), float(i1)
    return i0, i1


def resistiveComponents(s, params):
    """ Resistive wrench split into (drag, friction) parts.
    """
    friction = -0.5 * params.rhoF * params.cf * s.perimeter * s.length * np.abs(s.u) * s.u
    i0, i1 = dragIntegrals(s.v0, s.omega, s.length)
    fLat = -0.5 * params.rhoF * params.cd * s.depth * i0
    torque = -0.5 * params.rhoF * params.cd * s.depth * i1
    zero = np.zeros(np.shape(friction))
    zeroLat = np.zeros(np.shape(fLat))
    return PlanarWrench(zeroLat, fLat, torque), PlanarWrench(friction, zero, zero)


def resistiveWrench(s, params):
    drag, friction = resistiveComponents(s, params)
    return drag + friction
