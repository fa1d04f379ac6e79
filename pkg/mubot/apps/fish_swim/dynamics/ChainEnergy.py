##
# File:  ChainEnergy.py
# Date:  06-Apr-2023
# Updates:
#  21-Oct-2023  added-mass kinetic energy of the attached fluid
##
"""
Energy and momentum of the rigid chain, used by the conservation checks.
The attached fluid only enters through fluidKineticEnergy().

"""
__docformat__ = "restructuredtext en"
__author__ = "muBot modeling group"
__license__ = "Apache 2.0"
__version__ = "V0.02"

import numpy as np

from mubot.apps.fish_swim.dynamics.ChainDynamics import massMatrix
from mubot.apps.fish_swim.dynamics.ChainKinematics import ChainKinematics
from mubot.apps.fish_swim.hydro.HydroForces import reactiveAddedInertia


def kineticEnergy(model, state):
    qdot = np.asarray(state.qdot, dtype=float)
    return 0.5 * float(qdot @ massMatrix(model, state.q) @ qdot)


def springEnergy(model, state):
    phi = np.asarray(state.q, dtype=float)[3:]
    return 0.5 * float(np.sum(model.stiffnesses() * phi * phi))


def mechanicalEnergy(model, state):
    return kineticEnergy(model, state) + springEnergy(model, state)


def linearMomentum(model, state):
    frame = ChainKinematics(model).evaluate(state.q, state.qdot)
    return model.masses() @ frame.comVel


def centerOfMass(model, state):
    frame = ChainKinematics(model).evaluate(state.q, state.qdot)
    m = model.masses()
    return m @ frame.com / m.sum()


def angularMomentum(model, state, about=(0.0, 0.0)):
    """ z angular momentum about the fixed point ``about``.
    """
    frame = ChainKinematics(model).evaluate(state.q, state.qdot)
    r = frame.com - np.asarray(about, dtype=float)
    m = model.masses()
    orbital = np.sum(m * (r[:, 0] * frame.comVel[:, 1] - r[:, 1] * frame.comVel[:, 0]))
    return float(orbital + np.sum(model.inertias() * frame.omega))


def fluidKineticEnergy(model, hydro, state):
    """ 1/2 sum_i m_i int_0^l (v0 + omega x)^2 dx = 1/2 qdot^T M_add qdot.
    """
    kin = ChainKinematics(model)
    seg = kin.segmentStates(kin.evaluate(state.q, state.qdot))
    a2 = reactiveAddedInertia(seg, hydro).inertia[:, 1:, 1:]
    xi = np.stack([seg.v0, seg.omega], axis=1)
    return 0.5 * float(np.einsum("ia,iab,ib->", xi, a2, xi))


def totalEnergy(model, hydro, state):
    """ Chain kinetic + spring energy plus the kinetic energy of the attached fluid.
    """
    return mechanicalEnergy(model, state) + fluidKineticEnergy(model, hydro, state)
