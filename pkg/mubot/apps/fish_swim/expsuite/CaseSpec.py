##
# File:  CaseSpec.py
# Date:  05-Jun-2023
# Updates:
#  02-Oct-2023  explicit k_hat cases; grid subsets from the command line
#  21-Oct-2023  CaseResult.aborted for analysis rollouts that did not finish
##
"""
Experiment case definitions, the control-parameter grid and case results.

"""
__docformat__ = "restructuredtext en"
__author__ = "muBot modeling group"
__license__ = "Apache 2.0"
__version__ = "V0.03"

import dataclasses
import hashlib
import json
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

from mubot.apps.fish_swim.hydro.HydroParams import HydroParams, hmPreset, normalizeHmId
from mubot.apps.fish_swim.morphology.RobotBuilder import STIFFNESS_LEVELS, buildRobot
from mubot.apps.fish_swim.utils.SwimExceptions import SwimModelError

_STIFFNESS_ALIASES = {"h": "high", "m": "medium", "l": "low", "high": "high", "medium": "medium", "low": "low"}


def normalizeStiffness(level):
    key = str(level).strip().lower()
    if key == "custom":
        return key
    if key not in _STIFFNESS_ALIASES:
        raise SwimModelError("unknown stiffness level '%s'" % level)
    return _STIFFNESS_ALIASES[key]


@dataclass(frozen=True)
class CaseSpec:
    """ One point of the control-parameter grid plus every setting that shapes its result.
    """
    noa: int
    stiffness: str
    hm: str
    ar: float = 2.0
    cf: float = 0.06
    cd: float = 2.25
    rhoF: float = 1000.0
    rhoBody: float = 1000.0
    kHat: Optional[float] = None
    kT: float = 1.26e-3
    kEmf: float = 1.26e-3
    coilR: float = 10.0
    eMax: float = 5.0
    fMin: float = 0.5
    fMax: float = 5.0
    dt: float = 1.0e-3
    horizon: float = 6.0
    rewardWindow: float = 2.0
    outputRate: float = 100.0
    rollouts: int = 50
    elite: int = 25
    episodes: int = 40
    sessions: int = 3
    seed: int = 7
    epheInit: str = "midpoint"

    def __post_init__(self):
        if int(self.noa) != self.noa or self.noa < 1:
            raise SwimModelError("NoA must be an integer >= 1, got %r" % self.noa)
        object.__setattr__(self, "noa", int(self.noa))
        object.__setattr__(self, "hm", normalizeHmId(self.hm))
        hmPreset(self.hm)
        if self.kHat is None:
            object.__setattr__(self, "stiffness", normalizeStiffness(self.stiffness))
            if self.stiffness not in STIFFNESS_LEVELS:
                raise SwimModelError("stiffness level '%s' needs an explicit k_hat" % self.stiffness)
        else:
            object.__setattr__(self, "stiffness", "custom")
        #

    @property
    def caseId(self):
        tag = self.stiffness[0].upper() if self.kHat is None else "K%.6g" % self.kHat
        return "N%d-%s-%s" % (self.noa, tag, self.hm)

    def asDict(self):
        return dataclasses.asdict(self)

    def contentHash(self):
        """ sha256 of the canonical JSON form; any setting change gives a new hash. """
        text = json.dumps(self.asDict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(text.encode("utf-8")).hexdigest()

    def buildRobot(self):
        overrides = {"ar": self.ar, "rho_body": self.rhoBody, "k_hat": self.kHat, "k_t": self.kT, "k_emf": self.kEmf, "coil_r": self.coilR}
        return buildRobot(self.noa, None if self.kHat is not None else self.stiffness, overrides)

    def hydroParams(self):
        return HydroParams.fromPreset(self.hm, cf=self.cf, cd=self.cd, rhoF=self.rhoF)

    def trainingConfig(self):
        """ Keys understood by the optimizer and the rollout runner. """
        return {"dt": self.dt, "horizon": self.horizon, "reward_window": self.rewardWindow, "output_rate": self.outputRate,
                "e_max": self.eMax, "f_min": self.fMin, "f_max": self.fMax, "rollouts": self.rollouts, "elite": self.elite,
                "episodes": self.episodes, "sessions": self.sessions, "seed": self.seed, "ephe_init": self.epheInit}

    @classmethod
    def fromConfig(cls, noa, stiffness, hm, config):
        """ Case for one grid point with every other field taken from a SwimConfigInfo.
        """
        c = config.asDict() if hasattr(config, "asDict") else dict(config)
        return cls(noa=noa, stiffness=stiffness, hm=hm, ar=c["ar"], cf=c["c_f"], cd=c["c_d"], rhoF=c["rho_f"], rhoBody=c["rho_body"],
                   kHat=c.get("k_hat"), kT=c["k_t"], kEmf=c["k_emf"], coilR=c["coil_r"], eMax=c["e_max"], fMin=c["f_min"], fMax=c["f_max"],
                   dt=c["dt"], horizon=c["horizon"], rewardWindow=c["reward_window"], outputRate=c["output_rate"], rollouts=c["rollouts"],
                   elite=c["elite"], episodes=c["episodes"], sessions=c["sessions"], seed=c["seed"], epheInit=c["ephe_init"])


def parseGridSubset(text, grid):
    """ Restrict ``grid`` by a subset expression such as ``noa=4,6;hm=HM4``; ``full`` keeps it whole.
    """
    out = {k: list(v) for k, v in grid.items()}
    if text is None or text.strip().lower() in ("", "full"):
        return out
    for clause in text.split(";"):
        if not clause.strip():
            continue
        if "=" not in clause:
            raise SwimModelError("grid subset clause '%s' is not key=values" % clause)
        key, values = clause.split("=", 1)
        key = key.strip().lower()
        tokens = [tok.strip() for tok in values.split(",") if tok.strip()]
        if key not in out or not tokens:
            raise SwimModelError("bad grid subset clause '%s'" % clause)
        if key == "noa":
            try:
                out[key] = [int(tok) for tok in tokens]
            except ValueError as exc:
                raise SwimModelError("grid noa values must be integers: %s" % values) from exc
        elif key == "hm":
            out[key] = [normalizeHmId(tok) for tok in tokens]
        else:
            out[key] = [normalizeStiffness(tok) for tok in tokens]
        #
    #
    return out


def enumerateGrid(config, grid=None):
    """ CaseSpecs ordered NoA x stiffness x HM (36 for the full grid).
    """
    grid = grid if grid is not None else config.getGrid()
    cases = []
    for noa in grid["noa"]:
        for stiffness in grid["stiffness"]:
            for hm in grid["hm"]:
                cases.append(CaseSpec.fromConfig(noa, stiffness, hm, config))
            #
        #
    #
    return cases


@dataclass
class CaseResult:
    """ Outcome of one case: best speed over all sessions and the analyses of that gait.
    """
    caseId: str
    contentHash: str
    status: str = "complete"
    message: str = ""
    aborted: bool = False
    speed: float = 0.0
    bodyLengthsPerSecond: float = 0.0
    totalLength: float = 0.0
    segmentLength: float = 0.0
    frequency: float = 0.0
    bestGamma: List[float] = field(default_factory=list)
    wavelength: float = 0.0
    wavePerSegment: float = 0.0
    wavelengthFlagged: bool = False
    amplitudes: List[float] = field(default_factory=list)
    amplitudeRatios: List[float] = field(default_factory=list)
    speedRatio: float = 0.0
    segmentLabels: List[str] = field(default_factory=list)
    thrust: List[List[float]] = field(default_factory=list)
    thrustTotals: List[float] = field(default_factory=list)
    thrustFlagged: bool = False
    tailTorqueRms: Dict[str, float] = field(default_factory=dict)
    sessionBest: List[float] = field(default_factory=list)
    sessionFinal: List[float] = field(default_factory=list)
    sessionSpread: float = 0.0
    controlParams: Dict[str, Any] = field(default_factory=dict)
    learning: List[Dict[str, Any]] = field(default_factory=list)

    @property
    def isComplete(self):
        return self.status == "complete"


def thrustColumnTotals(thrust):
    """ Per-mechanism sums over segments, accumulated head to tail. """
    if not thrust:
        return []
    totals = [0.0] * len(thrust[0])
    for row in thrust:
        for k, v in enumerate(row):
            totals[k] += float(v)
        #
    #
    return totals
