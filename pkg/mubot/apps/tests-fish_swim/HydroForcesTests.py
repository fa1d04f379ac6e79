##
# File: HydroForcesTests.py
# Date:  22-Mar-2023
#
# Updates:
#  18-May-2023  closed-form drag integrals checked against quadrature
#  21-Oct-2023  reactive wrench checked against the slice momentum rate
##
"""Tests for segmental reactive and resistive wrenches"""

__docformat__ = "restructuredtext en"
__author__ = "muBot modeling group"
__license__ = "Apache 2.0"
__version__ = "V0.03"

import logging
import math
import os
import sys
import unittest

import numpy as np
from scipy.integrate import quad

if __package__ is None or __package__ == "":
    sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))
    from commonsetup import HERE  # noqa:  F401 pylint: disable=import-error,unused-import
else:
    from .commonsetup import HERE  # noqa: F401 pylint: disable=relative-beyond-top-level

from mubot.apps.fish_swim.hydro.DimensionlessModel import (
    DimensionlessScales,
    DimensionlessState,
    dimensionlessWrenches,
    fromDimensionless,
    groupsFor,
    nondimensionalWrenchCheck,
    toDimensionless,
)
from mubot.apps.fish_swim.hydro.HydroForces import (
    addedMassPerLength,
    dragIntegrals,
    reactiveAddedInertia,
    reactiveComponents,
    reactiveWrench,
    resistiveComponents,
    resistiveWrench,
)
from mubot.apps.fish_swim.hydro.HydroParams import HydroParams
from mubot.apps.fish_swim.hydro.SegmentFrameState import SegmentFrameState
from mubot.apps.fish_swim.morphology.RobotBuilder import ellipsePerimeter
from mubot.apps.fish_swim.utils.SwimExceptions import SwimModelError

logging.basicConfig(level=logging.INFO)
logger = logging.getLogger()

L = 0.0274
H = 0.0137
P = ellipsePerimeter(H, 7.0e-3)


def _state(u=0.0, v0=0.0, omega=0.0, a0=0.0, omegaDot=0.0, length=L):
    return SegmentFrameState(u=u, v0=v0, vl=v0 + omega * length, omega=omega, length=length, depth=H, perimeter=P, a0=a0, omegaDot=omegaDot)


class HydroForcesTests(unittest.TestCase):
    def setUp(self):
        self.__hm4 = HydroParams.fromPreset("HM4")
        self.__hm2 = HydroParams.fromPreset("HM-2")
        self.__rng = np.random.default_rng(20230322)

    def testPresets(self):
        self.assertEqual((self.__hm4.ca, self.__hm4.cp), (1.0, 1.0))
        self.assertEqual(HydroParams.fromPreset("hm3").cp, 0.5)
        self.assertFalse(HydroParams.fromPreset("HM1").hasReactive)
        with self.assertRaises(SwimModelError):
            HydroParams.fromPreset("HM5")
        with self.assertRaises(SwimModelError):
            HydroParams(ca=1.0, cp=0.0, hmId="HM4")
        with self.assertRaises(SwimModelError):
            HydroParams(ca=-1.0, cp=0.0)

    def testAddedMassPerLength(self):
        self.assertAlmostEqual(addedMassPerLength(H, self.__hm4), 0.14740, places=4)

    def testReactiveLongitudinal(self):
        s = _state(v0=0.05, omega=1.0)
        added, pressure = reactiveComponents(s, self.__hm2)
        self.assertTrue(math.isclose(added.fLong, 2.573e-4, rel_tol=5e-3))
        self.assertEqual(pressure.fLong, 0.0)
        w = reactiveWrench(s, HydroParams.fromPreset("HM3"))
        self.assertTrue(math.isclose(w.fLong, 0.5 * added.fLong, rel_tol=1e-12))
        # C_p = 1: pressure cancels the longitudinal added-mass term exactly
        w = reactiveWrench(s, self.__hm4)
        self.assertAlmostEqual(w.fLong, 0.0, places=15)
        self.assertEqual(w.fLat, 0.0)
        self.assertAlmostEqual(w.torque, 0.0, places=15)

    def testNoReactiveWithoutAddedMass(self):
        s = _state(u=0.1, v0=0.05, omega=1.0, a0=2.0, omegaDot=3.0)
        w = reactiveWrench(s, HydroParams.fromPreset("HM1"))
        self.assertEqual((float(w.fLong), float(w.fLat), float(w.torque)), (0.0, 0.0, 0.0))
        block = reactiveAddedInertia(s, HydroParams(ca=0.0, cp=0.0))
        self.assertFalse(np.any(block.inertia))
        self.assertFalse(np.any(block.bias.asArray()))

    def testAddedInertiaLinearity(self):
        for _ in range(10):
            u, v0, omega = self.__rng.normal(size=3) * (0.1, 0.05, 2.0)
            s = _state(u=u, v0=v0, omega=omega)
            block = reactiveAddedInertia(s, self.__hm4)
            self.assertTrue(np.allclose(block.inertia, np.swapaxes(block.inertia, -1, -2)))
            self.assertGreaterEqual(np.linalg.eigvalsh(block.inertia).min(), -1e-15)
            for a0, omegaDot in self.__rng.normal(size=(10, 2)) * (1.0, 50.0):
                direct = reactiveWrench(s.withAccelerations(a0, omegaDot), self.__hm4).asArray()
                viaBlock = block.wrench(0.0, a0, omegaDot).asArray()
                self.assertTrue(np.allclose(viaBlock, direct, rtol=1e-12, atol=1e-18))
            #
        #

    def testReactiveMatchesSliceMomentumRate(self):
        """ Reactive wrench against -d/dt of the slice momentum (and its moment about the
            moving anterior point) differentiated numerically along prescribed rigid motions.
        """
        n = 1000
        rng = self.__rng
        cP = rng.normal(size=(n, 2)) * 0.05
        aP = rng.normal(size=(n, 2)) * 0.01
        wP = rng.uniform(1.0, 15.0, size=(n, 2))
        pP = rng.uniform(0.0, 2.0 * np.pi, size=(n, 2))
        cT = rng.normal(size=n)
        bT = rng.normal(size=n) * 0.3
        wT = rng.uniform(1.0, 15.0, size=n)
        pT = rng.uniform(0.0, 2.0 * np.pi, size=n)
        length = rng.uniform(0.01, 0.05, size=n)
        depth = rng.uniform(0.005, 0.02, size=n)
        mbar = addedMassPerLength(depth, self.__hm2)

        def motion(t):
            pDot = cP + aP * wP * np.cos(wP * t + pP)
            theta = cT * t + bT * np.sin(wT * t + pT)
            omega = cT + bT * wT * np.cos(wT * t + pT)
            axis = np.stack([np.cos(theta), np.sin(theta)], axis=1)
            lateral = np.stack([-np.sin(theta), np.cos(theta)], axis=1)
            return pDot, omega, axis, lateral, np.einsum("ia,ia->i", pDot, axis), np.einsum("ia,ia->i", pDot, lateral)

        def sliceQuantities(t):
            _, omega, _, lateral, _, v0 = motion(t)
            momentum = (mbar * (length * v0 + 0.5 * length ** 2 * omega))[:, None] * lateral
            moment = mbar * (0.5 * length ** 2 * v0 + length ** 3 * omega / 3.0)
            energy = 0.5 * mbar * (length * v0 ** 2 + length ** 2 * v0 * omega + length ** 3 * omega ** 2 / 3.0)
            return momentum, moment, energy

        hStep = 2.0e-4
        samples = [sliceQuantities(k * hStep) for k in (-2, -1, 1, 2)]
        rates = [(s0 - 8.0 * s1 + 8.0 * s2 - s3) / (12.0 * hStep) for s0, s1, s2, s3 in zip(*samples)]
        #
        pDot, omega, axis, lateral, u, v0 = motion(0.0)
        pDdot = -aP * wP * wP * np.sin(pP)
        a0 = np.einsum("ia,ia->i", pDdot, lateral) - omega * u
        omegaDot = -bT * wT * wT * np.sin(pT)
        s = SegmentFrameState(u=u, v0=v0, vl=v0 + omega * length, omega=omega, length=length, depth=depth, perimeter=2.5 * depth,
                              a0=a0, omegaDot=omegaDot)
        momentum = sliceQuantities(0.0)[0]
        force = -rates[0]
        torque = -(rates[1] + pDot[:, 0] * momentum[:, 1] - pDot[:, 1] * momentum[:, 0])
        scales = (np.max(np.abs(force)), np.max(np.abs(force)), np.max(np.abs(torque)))
        for params in (self.__hm2, HydroParams.fromPreset("HM3"), self.__hm4):
            w = reactiveWrench(s, params)
            pressure = params.cp * 0.5 * mbar * (s.v0 ** 2 - s.vl ** 2)
            expected = (np.einsum("ia,ia->i", force, axis) + pressure, np.einsum("ia,ia->i", force, lateral), torque)
            for got, want, scale in zip((w.fLong, w.fLat, w.torque), expected, scales):
                self.assertTrue(np.allclose(got, want, rtol=1e-8, atol=1e-8 * scale), "max diff %r" % np.max(np.abs(got - want)))
            #
        #
        # without pressure the fluid power is minus the rate of the slice kinetic energy
        w = reactiveWrench(s, self.__hm2)
        power = w.fLong * u + w.fLat * v0 + w.torque * omega
        self.assertTrue(np.allclose(power, -rates[2], rtol=1e-8, atol=1e-8 * np.max(np.abs(rates[2]))))

    def testFriction(self):
        drag, friction = resistiveComponents(_state(u=0.1), self.__hm4)
        self.assertTrue(math.isclose(friction.fLong, -2.74e-4, rel_tol=5e-3))
        self.assertEqual(friction.fLat, 0.0)
        self.assertEqual(drag.fLat, 0.0)

    def testLateralDrag(self):
        w = resistiveWrench(_state(v0=0.05, omega=1.0), self.__hm4)
        self.assertTrue(math.isclose(w.fLat, -1.74e-3, rel_tol=5e-3))
        zero = resistiveWrench(_state(), self.__hm4)
        self.assertEqual((float(zero.fLong), float(zero.fLat), float(zero.torque)), (0.0, 0.0, 0.0))

    def testDragIntegralsAgainstQuadrature(self):
        cases = [(0.05, 1.0, L), (-0.01, 1.0, L), (0.02, -3.0, L), (-0.04, 0.5, L), (0.0, 2.0, L), (0.03, 0.0, L)]
        for v0, omega, length in cases:
            i0, i1 = dragIntegrals(v0, omega, length)
            points = [-v0 / omega] if omega != 0.0 and 0.0 < -v0 / omega < length else None
            q0 = quad(lambda x: abs(v0 + omega * x) * (v0 + omega * x), 0.0, length, points=points, epsabs=0.0, epsrel=1e-13)[0]
            q1 = quad(lambda x: abs(v0 + omega * x) * (v0 + omega * x) * x, 0.0, length, points=points, epsabs=0.0, epsrel=1e-13)[0]
            self.assertTrue(math.isclose(i0, q0, rel_tol=1e-10, abs_tol=1e-22), "I0 %r %r %r" % (v0, omega, i0 - q0))
            self.assertTrue(math.isclose(i1, q1, rel_tol=1e-10, abs_tol=1e-22), "I1 %r %r %r" % (v0, omega, i1 - q1))
        #
        i0, _ = dragIntegrals(0.05, 1.0, L)
        self.assertTrue(math.isclose(i0, 1.1289e-4, rel_tol=1e-4))

    def testVectorizedDrag(self):
        v0 = np.array([0.05, -0.01, 0.02])
        omega = np.array([1.0, 1.0, -3.0])
        i0, i1 = dragIntegrals(v0, omega, L)
        for k in range(3):
            s0, s1 = dragIntegrals(float(v0[k]), float(omega[k]), L)
            self.assertTrue(math.isclose(i0[k], s0, rel_tol=1e-13))
            self.assertTrue(math.isclose(i1[k], s1, rel_tol=1e-13))
        #

    def testDimensionlessScaling(self):
        scales = DimensionlessScales(length=L, depth=H, frequency=2.0, amplitude=5.0e-3, speed=0.03)
        groups = groupsFor(scales, P)
        self.assertAlmostEqual(groups.aspectRatio, 2.0, places=12)
        for params in (self.__hm4, HydroParams.fromPreset("HM3"), HydroParams.fromPreset("HM1")):
            for _ in range(20):
                uH, v0H, wH, aH, wdH = self.__rng.normal(size=5)
                s = fromDimensionless(DimensionlessState(uHat=uH, v0Hat=v0H, omegaHat=wH, aHat=aH, omegaDotHat=wdH), scales, P)
                react, resis = nondimensionalWrenchCheck(s, params, scales)
                reactHat, resisHat = dimensionlessWrenches(toDimensionless(s, scales), groups, params)
                self.assertTrue(np.allclose(react, reactHat, rtol=1e-10, atol=1e-12))
                self.assertTrue(np.allclose(resis, resisHat, rtol=1e-10, atol=1e-12))
            #
        #

    def testDimensionlessScalesValidation(self):
        with self.assertRaises(SwimModelError):
            DimensionlessScales(length=L, depth=H, frequency=0.0, amplitude=1.0, speed=1.0)


if __name__ == "__main__":
    unittest.main()
