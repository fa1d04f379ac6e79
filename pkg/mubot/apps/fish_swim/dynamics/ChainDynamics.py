##
# File:  ChainDynamics.py
# Date:  30-Mar-2023
# Updates:
#  04-May-2023  added-mass terms assembled into the left-hand side
#  12-Jun-2023  mechanism-split force log at the solved accelerations
##
"""
Forward dynamics of the swimming chain.

Solves (M(q) + M_add(q)) qdd = tau_bias with

    M      = sum_i m_i Jc_i^T Jc_i + I_i Jth_i^T Jth_i
    M_add  = sum_i G_i^T A_i G_i,  G_i = [n_i . JP_i ; Jth_i]
    tau_bias = actuation + spring - sum_i m_i Jc_i^T bc_i
               + generalized hydrodynamic forces evaluated at qdd = 0

"""
__docformat__ = "restructuredtext en"
__author__ = "muBot modeling group"
__license__ = "Apache 2.0"
__version__ = "V0.03"

import sys

import numpy as np

from mubot.apps.fish_swim.actuation.ActuatorModel import actuatorTorque, voltages
from mubot.apps.fish_swim.dynamics.ChainKinematics import ChainKinematics
from mubot.apps.fish_swim.dynamics.ChainState import JOINT_MECHANISMS, SEGMENT_MECHANISMS, ForceLogEntry, GeneralizedState
from mubot.apps.fish_swim.hydro.HydroForces import reactiveAddedInertia, reactiveComponents, resistiveComponents, reactiveWrench, resistiveWrench
from mubot.apps.fish_swim.utils.SwimExceptions import SwimSimulationError


class ChainDynamics(object):
    """ Generalized accelerations of one robot in one fluid model.
    """

    def __init__(self, model, hydro, verbose=False, log=sys.stderr):
        self.__verbose = verbose
        self.__lfh = log
        self.model = model
        self.hydro = hydro
        self.kinematics = ChainKinematics(model)
        self.__masses = model.masses()
        self.__inertias = model.inertias()
        self.__stiffness = model.stiffnesses()
        self.__noa = model.noa
        self.__nJoint = model.jointCount

    def massMatrix(self, frame):
        jc = frame.jacCom
        jt = frame.jacTheta
        return np.einsum("i,iak,ial->kl", self.__masses, jc, jc) + np.einsum("i,ik,il->kl", self.__inertias, jt, jt)

    def addedMassMatrix(self, frame, block, gMat):
        a2 = block.inertia[:, 1:, 1:]
        return np.einsum("iak,iab,ibl->kl", gMat, a2, gMat)

    def actuationTorques(self, policy, t, qdot):
        """ Actuator torque on every joint; the passive fin joint gets zero.
        """
        out = np.zeros(self.__nJoint)
        out[: self.__noa] = actuatorTorque(voltages(policy, t), qdot[3: 3 + self.__noa], self.model.actuator)
        return out

    def __jointTorqueVector(self, jointTorques):
        tau = np.zeros(self.__nJoint)
        if jointTorques is not None:
            jt = np.asarray(jointTorques, dtype=float).ravel()
            if jt.size not in (self.__noa, self.__nJoint):
                raise SwimSimulationError("expected %d or %d joint torques, got %d" % (self.__noa, self.__nJoint, jt.size))
            tau[: jt.size] = jt
        return tau

    def forwardDynamics(self, state, jointTorques=None, recordForces=False):
        """ Generalized accelerations at ``state`` under the given actuator torques.

            :Returns:
                (qdd, ForceLogEntry or None)
        """
        kin = self.kinematics
        q = np.asarray(state.q, dtype=float)
        qdot = np.asarray(state.qdot, dtype=float)
        frame = kin.evaluate(q, qdot)
        nc = kin.nCoord
        #
        tauAct = self.__jointTorqueVector(jointTorques)
        tauSpring = -self.__stiffness * q[3:]
        genAct = np.zeros(nc)
        genAct[3:] = tauAct
        genSpring = np.zeros(nc)
        genSpring[3:] = tauSpring
        genInertial = -np.einsum("i,iak,ia->k", self.__masses, frame.jacCom, frame.biasCom)
        #
        seg = kin.segmentStates(frame)
        block = reactiveAddedInertia(seg, self.hydro)
        gMat = kin.lateralJacobian(frame)
        addedBias, pressure = reactiveComponents(seg, self.hydro)
        drag, friction = resistiveComponents(seg, self.hydro)
        genHydroBias = kin.generalizedForce(frame, addedBias.fLong + pressure.fLong + drag.fLong + friction.fLong,
                                            addedBias.fLat + pressure.fLat + drag.fLat + friction.fLat,
                                            addedBias.torque + pressure.torque + drag.torque + friction.torque)
        #
        lhs = self.massMatrix(frame) + self.addedMassMatrix(frame, block, gMat)
        rhs = genAct + genSpring + genInertial + genHydroBias
        try:
            qdd = np.linalg.solve(lhs, rhs)
        except np.linalg.LinAlgError as e:
            if self.__verbose:
                self.__lfh.write("+ChainDynamics.forwardDynamics() - singular system at t %r cond %r\n" % (state.t, np.linalg.cond(lhs)))
            raise SwimSimulationError("singular chain mass matrix: %s" % str(e), time=state.t)
        if not np.all(np.isfinite(qdd)):
            raise SwimSimulationError("non-finite generalized acceleration", time=state.t)
        #
        if not recordForces:
            return qdd, None
        return qdd, self.__forceLogEntry(frame, seg, gMat, qdd, genAct, genSpring, pressure, drag, friction)

    def __forceLogEntry(self, frame, seg, gMat, qdd, genAct, genSpring, pressure, drag, friction):
        kin = self.kinematics
        acc = gMat @ qdd
        solved = seg.withAccelerations(seg.a0Bias + acc[:, 0], acc[:, 1])
        added, _ = reactiveComponents(solved, self.hydro)
        wrenches = (added, pressure, drag, friction)
        nBody = kin.nBody
        segForces = np.zeros((nBody, len(SEGMENT_MECHANISMS), 2))
        segTorques = np.zeros((nBody, len(SEGMENT_MECHANISMS)))
        jointTorques = np.zeros((self.__nJoint, len(JOINT_MECHANISMS)))
        jointTorques[:, 0] = genAct[3:]
        jointTorques[:, 1] = genSpring[3:]
        for k, w in enumerate(wrenches):
            segForces[:, k, :] = kin.worldForces(frame, w.fLong, w.fLat)
            segTorques[:, k] = w.torque
            jointTorques[:, 2 + k] = kin.generalizedForce(frame, w.fLong, w.fLat, w.torque)[3:]
        #
        total = reactiveWrench(solved, self.hydro) + resistiveWrench(solved, self.hydro)
        return ForceLogEntry(segmentForces=segForces, segmentTorques=segTorques, jointTorques=jointTorques,
                             totalForces=kin.worldForces(frame, total.fLong, total.fLat), totalTorques=np.asarray(total.torque, dtype=float))

    def systemMatrices(self, state, jointTorques=None):
        """ (M + M_add, tau_bias) at ``state``, for residual checks.
        """
        kin = self.kinematics
        q = np.asarray(state.q, dtype=float)
        qdot = np.asarray(state.qdot, dtype=float)
        frame = kin.evaluate(q, qdot)
        seg = kin.segmentStates(frame)
        block = reactiveAddedInertia(seg, self.hydro)
        gMat = kin.lateralJacobian(frame)
        bias = reactiveWrench(seg, self.hydro) + resistiveWrench(seg, self.hydro)
        rhs = kin.generalizedForce(frame, bias.fLong, bias.fLat, bias.torque)
        rhs[3:] += self.__jointTorqueVector(jointTorques) - self.__stiffness * q[3:]
        rhs -= np.einsum("i,iak,ia->k", self.__masses, frame.jacCom, frame.biasCom)
        return self.massMatrix(frame) + self.addedMassMatrix(frame, block, gMat), rhs

    def derivative(self, t, y, policy, recordForces=False):
        """ d/dt (q, qdot) under the open-loop voltage policy.
        """
        n = self.kinematics.nCoord
        q = y[:n]
        qdot = y[n:]
        tau = self.actuationTorques(policy, t, qdot) if policy is not None else None
        qdd, entry = self.forwardDynamics(GeneralizedState(q=q, qdot=qdot, t=t), tau, recordForces=recordForces)
        return np.concatenate([qdot, qdd]), entry


def forwardDynamics(model, state, jointTorques, hydro):
    """ Generalized accelerations (convenience wrapper without a force log).
    """
    qdd, _ = ChainDynamics(model, hydro).forwardDynamics(state, jointTorques)
    return qdd


def massMatrix(model, q):
    """ Rigid-body chain mass matrix M(q).
    """
    kin = ChainKinematics(model)
    frame = kin.evaluate(q, np.zeros(kin.nCoord))
    jc = frame.jacCom
    jt = frame.jacTheta
    return np.einsum("i,iak,ial->kl", model.masses(), jc, jc) + np.einsum("i,ik,il->kl", model.inertias(), jt, jt)
