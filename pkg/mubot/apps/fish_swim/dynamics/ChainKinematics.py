##
# File:  ChainKinematics.py
# Date:  28-Mar-2023
# Updates:
#  04-May-2023  vectorized Jacobians; segment states returned as arrays
#  21-Oct-2023  a0 is the frame rate of v0 (centripetal n . bP less w u)
##
"""
Planar chain kinematics in generalized coordinates.

For body i with anterior point P_i, axis e_i = (cos th_i, sin th_i) and lateral
n_i = (-sin th_i, cos th_i):

    th_i = theta_h + sum_{k<=i} phi_k          dth_i/dq = Jth_i (constant)
    P_i  = (x_h, y_h) + sum_{k<i} l_k e_k      dP_i/dq  = JP_i
    Pdd_i = JP_i qdd + bP_i,   bP_i = -sum_{k<i} l_k w_k^2 e_k
    dv0_i/dt = n_i . Pdd_i - w_i u_i            (lateral rate in the rotating frame)
    c_i  = P_i + d_i e_i                        (center of mass)

"""
__docformat__ = "restructuredtext en"
__author__ = "muBot modeling group"
__license__ = "Apache 2.0"
__version__ = "V0.02"

from dataclasses import dataclass
from typing import Any

import numpy as np

from mubot.apps.fish_swim.hydro.SegmentFrameState import SegmentFrameState


@dataclass(frozen=True)
class ChainFrame:
    """ Kinematic quantities of every body at one state (leading axis = body).
    """
    theta: Any
    axis: Any
    lateral: Any
    anterior: Any
    com: Any
    jacP: Any
    jacTheta: Any
    jacCom: Any
    anteriorVel: Any
    comVel: Any
    omega: Any
    biasP: Any
    biasCom: Any


class ChainKinematics(object):
    """ Precomputed geometry of one RobotModel.
    """
    def __init__(self, model):
        self.model = model
        self.nBody = model.bodyCount
        self.nCoord = model.coordinateCount
        self.lengths = model.lengths()
        self.comOffsets = model.comOffsets()
        self.depths = model.depths()
        self.perimeters = model.perimeters()
        jt = np.zeros((self.nBody, self.nCoord))
        jt[:, 2] = 1.0
        for i in range(1, self.nBody):
            jt[i, 3:3 + i] = 1.0
        self.jacTheta = jt
        base = np.zeros((2, self.nCoord))
        base[0, 0] = base[1, 1] = 1.0
        self.__base = base

    def evaluate(self, q, qdot):
        q = np.asarray(q, dtype=float)
        qdot = np.asarray(qdot, dtype=float)
        theta = self.jacTheta @ q
        cth = np.cos(theta)
        sth = np.sin(theta)
        axis = np.stack([cth, sth], axis=1)
        lateral = np.stack([-sth, cth], axis=1)
        omega = self.jacTheta @ qdot
        #
        # exclusive prefix sums over the bodies ahead of body i
        steps = self.lengths[:, None] * axis
        anterior = np.empty((self.nBody, 2))
        anterior[0] = q[:2]
        anterior[1:] = q[:2] + np.cumsum(steps[:-1], axis=0)
        #
        contrib = self.lengths[:, None, None] * lateral[:, :, None] * self.jacTheta[:, None, :]
        jacP = np.empty((self.nBody, 2, self.nCoord))
        jacP[0] = self.__base
        jacP[1:] = self.__base + np.cumsum(contrib[:-1], axis=0)
        #
        cent = -(self.lengths * omega * omega)[:, None] * axis
        biasP = np.zeros((self.nBody, 2))
        biasP[1:] = np.cumsum(cent[:-1], axis=0)
        #
        d = self.comOffsets
        com = anterior + d[:, None] * axis
        jacCom = jacP + d[:, None, None] * lateral[:, :, None] * self.jacTheta[:, None, :]
        biasCom = biasP - (d * omega * omega)[:, None] * axis
        anteriorVel = jacP @ qdot
        comVel = jacCom @ qdot
        return ChainFrame(theta=theta, axis=axis, lateral=lateral, anterior=anterior, com=com, jacP=jacP, jacTheta=self.jacTheta,
                          jacCom=jacCom, anteriorVel=anteriorVel, comVel=comVel, omega=omega, biasP=biasP, biasCom=biasCom)

    def bodyPoints(self, q):
        """ Anterior points (bodies, 2) and unit axes (bodies, 2) from positions only.
        """
        q = np.asarray(q, dtype=float)
        theta = self.jacTheta @ q
        axis = np.stack([np.cos(theta), np.sin(theta)], axis=1)
        anterior = np.empty((self.nBody, 2))
        anterior[0] = q[:2]
        anterior[1:] = q[:2] + np.cumsum(self.lengths[:-1, None] * axis[:-1], axis=0)
        return anterior, axis

    def midpoints(self, q):
        anterior, axis = self.bodyPoints(q)
        return anterior + 0.5 * self.lengths[:, None] * axis

    def centerOfMass(self, q):
        anterior, axis = self.bodyPoints(q)
        m = self.model.masses()
        return m @ (anterior + self.comOffsets[:, None] * axis) / m.sum()

    def segmentStates(self, frame):
        """ Vectorized segment-frame state at qdd = 0 (a0 = a0Bias, omegaDot = 0).
        """
        u = np.einsum("ia,ia->i", frame.anteriorVel, frame.axis)
        v0 = np.einsum("ia,ia->i", frame.anteriorVel, frame.lateral)
        a0Bias = np.einsum("ia,ia->i", frame.biasP, frame.lateral) - frame.omega * u
        return SegmentFrameState(u=u, v0=v0, vl=v0 + frame.omega * self.lengths, omega=frame.omega, length=self.lengths,
                                 depth=self.depths, perimeter=self.perimeters, a0=a0Bias, omegaDot=np.zeros(self.nBody), a0Bias=a0Bias)

    def lateralJacobian(self, frame):
        """ G_i = [n_i . JP_i ; Jth_i]: maps qdd to (a0, omegaDot) of each segment, shape (bodies, 2, coords).
        """
        g = np.empty((self.nBody, 2, self.nCoord))
        g[:, 0, :] = np.einsum("ia,iak->ik", frame.lateral, frame.jacP)
        g[:, 1, :] = self.jacTheta
        return g

    def generalizedForce(self, frame, fLong, fLat, torque):
        """ Generalized force of segment-frame wrenches applied at the anterior points.
        """
        world = fLong[:, None] * frame.axis + fLat[:, None] * frame.lateral
        return np.einsum("iak,ia->k", frame.jacP, world) + torque @ self.jacTheta

    def worldForces(self, frame, fLong, fLat):
        return fLong[:, None] * frame.axis + fLat[:, None] * frame.lateral


def segmentKinematics(model, state):
    """ One SegmentFrameState per body, head first.
    """
    kin = ChainKinematics(model)
    vec = kin.segmentStates(kin.evaluate(state.q, state.qdot))
    out = []
    for i in range(kin.nBody):
        out.append(SegmentFrameState(u=float(vec.u[i]), v0=float(vec.v0[i]), vl=float(vec.vl[i]), omega=float(vec.omega[i]),
                                     length=float(vec.length[i]), depth=float(vec.depth[i]), perimeter=float(vec.perimeter[i]),
                                     a0=float(vec.a0[i]), omegaDot=0.0, a0Bias=float(vec.a0Bias[i])))
    return out
