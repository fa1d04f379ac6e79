##
# File:  RobotBuilder.py
# Date:  14-Mar-2023
# Updates:
#  27-Apr-2023  accept geometry/actuator overrides from the sweep configuration
#  02-Oct-2023  explicit normalized stiffness (k_hat) instead of a Table level
#  21-Oct-2023  explicit actuator overrides are validated instead of falling back to defaults
##
"""
Build the muBot template: head, NoA - 1 body segments, peduncle and caudal fin
connected by NoA actuated spring joints and one passive fin spring joint.

"""
__docformat__ = "restructuredtext en"
__author__ = "muBot modeling group"
__license__ = "Apache 2.0"
__version__ = "V0.04"

import math
import sys

from mubot.apps.fish_swim.actuation.ActuatorModel import ActuatorConstants
from mubot.apps.fish_swim.morphology.RobotModel import JointSpec, MassProps, RobotModel, SegmentGeometry
from mubot.apps.fish_swim.utils.SwimExceptions import SwimModelError

# normalized stiffness K_b / AR^4 in N m/rad (Table levels are quoted in N mm/rad)
STIFFNESS_LEVELS = {"high": 1.00e-3 / 16.0, "medium": 0.75e-3 / 16.0, "low": 0.50e-3 / 16.0}
FIN_STIFFNESS_FACTOR = 5.0

# fmt:off
_DEFAULT_GEOMETRY = {
    "segment_length": 27.4e-3,  # noqa: E241
    "depth":          13.7e-3,  # noqa: E241
    "width":          7.0e-3,   # noqa: E241
    "fin_length":     27.4e-3,  # noqa: E241
    "fin_thickness":  0.97e-3,  # noqa: E241
    "rho_body":       1000.0,   # noqa: E241
}
# fmt:on


def ellipsePerimeter(depth, width):
    """ Ramanujan's second approximation for an ellipse with diameters ``depth`` and ``width``.
    """
    a = 0.5 * depth
    b = 0.5 * width
    lam = (a - b) / (a + b)
    lam2 = 3.0 * lam * lam
    return math.pi * (a + b) * (1.0 + lam2 / (10.0 + math.sqrt(4.0 - lam2)))


def segmentMassProps(geometry, rhoBody):
    """ Elliptical prism for head/body/peduncle, thin rectangular plate for the fin.
        The center of mass sits at the segment midpoint.
    """
    if not (math.isfinite(rhoBody) and rhoBody > 0.0):
        raise SwimModelError("body density must be positive, got %r" % rhoBody)
    #
    length = geometry.length
    if geometry.kind == "fin":
        mass = rhoBody * geometry.depth * geometry.finThickness * length
        inertia = mass * (length ** 2 + geometry.finThickness ** 2) / 12.0
    else:
        mass = rhoBody * math.pi * (0.5 * geometry.depth) * (0.5 * geometry.width) * length
        inertia = mass * (length ** 2 / 12.0 + (0.5 * geometry.width) ** 2 / 4.0)
    #
    return MassProps(mass=mass, inertia=inertia, comOffset=0.5 * length)


def jointStiffness(j, kHat, ar, noa):
    """ K_b^j = K_hat * AR^4 * Gamma(j) with Gamma = 1 on body joints and 5 on the fin joint.
    """
    if not 1 <= j <= noa + 1:
        raise SwimModelError("joint index %d outside 1..%d" % (j, noa + 1))
    gamma = FIN_STIFFNESS_FACTOR if j == noa + 1 else 1.0
    return kHat * ar ** 4 * gamma


def buildRobot(noa, stiffnessLevel="high", overrides=None):
    return RobotBuilder().build(noa, stiffnessLevel, overrides)


class RobotBuilder(object):
    """ Assemble RobotModel instances from the control parameters.
    """
    def __init__(self, verbose=False, log=sys.stderr):
        self.__verbose = verbose
        self.__lfh = log

    def build(self, noa, stiffnessLevel="high", overrides=None):
        """ Build the template for ``noa`` actuators.

            :Params:
                ``stiffnessLevel``: high | medium | low, or None when ``overrides['k_hat']`` is given
                ``overrides``: optional dict with keys segment_length, depth, width, fin_length,
                               fin_thickness, rho_body, ar, k_hat, k_t, k_emf, coil_r
        """
        if int(noa) != noa or noa < 1:
            raise SwimModelError("NoA must be an integer >= 1, got %r" % noa)
        noa = int(noa)
        #
        geoD = dict(_DEFAULT_GEOMETRY)
        opts = dict(overrides or {})
        for key in list(opts):
            if key in geoD and opts[key] is not None:
                geoD[key] = float(opts.pop(key))
            #
        #
        if opts.get("ar") is not None:
            geoD["segment_length"] = float(opts.pop("ar")) * geoD["depth"]
        #
        kHat = opts.pop("k_hat", None)
        if kHat is not None:
            kHat = float(kHat)
            level = "custom"
        else:
            level = str(stiffnessLevel).lower() if stiffnessLevel is not None else None
            if level not in STIFFNESS_LEVELS:
                raise SwimModelError("unknown stiffness level '%s' and no explicit k_hat" % stiffnessLevel)
            kHat = STIFFNESS_LEVELS[level]
        #
        if not (math.isfinite(kHat) and kHat >= 0.0):
            raise SwimModelError("normalized stiffness must be >= 0, got %r" % kHat)
        #
        actuatorD = {"k_t": 1.26e-3, "k_emf": 1.26e-3, "coil_r": 10.0}
        for key in actuatorD:
            value = opts.pop(key, None)
            if value is None:
                continue
            value = float(value)
            if not (math.isfinite(value) and value > 0.0):
                raise SwimModelError("%s must be positive, got %r" % (key, value))
            actuatorD[key] = value
        #
        actuator = ActuatorConstants(kT=actuatorD["k_t"], kEmf=actuatorD["k_emf"], resistance=actuatorD["coil_r"])
        unknown = [k for k, v in opts.items() if v is not None]
        if unknown:
            raise SwimModelError("unknown robot overrides: %s" % ", ".join(sorted(unknown)))
        #
        segments = self.__buildSegments(noa, geoD)
        massProps = tuple(segmentMassProps(g, geoD["rho_body"]) for g in segments)
        ar = segments[0].length / segments[0].depth
        joints = tuple(JointSpec(index=j, stiffness=jointStiffness(j, kHat, ar, noa), actuated=(j <= noa)) for j in range(1, noa + 2))
        #
        model = RobotModel(segments=segments, massProps=massProps, joints=joints, actuator=actuator,
                           noa=noa, ar=ar, kHat=kHat, stiffnessLevel=level)
        if self.__verbose:
            self.__lfh.write("+RobotBuilder.build() - NoA %d, %d bodies, length %.4f m, mass %.4e kg, K_b %.4e / %.4e N m/rad\n"
                             % (noa, model.bodyCount, model.totalLength(), model.totalMass(), joints[0].stiffness, joints[-1].stiffness))
        return model

    def __buildSegments(self, noa, geoD):
        length = geoD["segment_length"]
        depth = geoD["depth"]
        width = geoD["width"]
        for name in ("segment_length", "depth", "width", "fin_length", "fin_thickness"):
            if not geoD[name] > 0.0:
                raise SwimModelError("%s must be positive, got %r" % (name, geoD[name]))
            #
        #
        perimeter = ellipsePerimeter(depth, width)
        kinds = ["head"] + ["body"] * (noa - 1) + ["peduncle"]
        segments = [SegmentGeometry(length=length, depth=depth, width=width, perimeter=perimeter, kind=kind) for kind in kinds]
        # thin-plate wetted perimeter; fin thickness only enters the mass
        segments.append(SegmentGeometry(length=geoD["fin_length"], depth=depth, width=width, perimeter=2.0 * depth,
                                        kind="fin", finThickness=geoD["fin_thickness"]))
        return tuple(segments)
