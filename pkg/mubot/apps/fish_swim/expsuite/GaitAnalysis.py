##
# File:  GaitAnalysis.py
# Date:  08-Jun-2023
# Updates:
#  09-Jun-2023  segment labels on the thrust table
#  23-Jun-2023  fin-joint torque summary
##
"""
Steady-window analyses of an optimized gait: body-wave wavelength, thrust
decomposition by segment and mechanism, and the fin-joint torque balance.

"""
__docformat__ = "restructuredtext en"
__author__ = "muBot modeling group"
__license__ = "Apache 2.0"
__version__ = "V0.03"

from dataclasses import dataclass
from typing import Any, Dict, List

import numpy as np

from mubot.apps.fish_swim.dynamics.ChainKinematics import ChainKinematics
from mubot.apps.fish_swim.dynamics.ChainState import JOINT_MECHANISMS, SEGMENT_MECHANISMS
from mubot.apps.fish_swim.rollout.Trajectory import lateralDisplacements
from mubot.apps.fish_swim.utils.SwimExceptions import SwimModelError

AMPLITUDE_CUTOFF = 0.05
MAX_WAVELENGTH_BODY_LENGTHS = 100.0


@dataclass(frozen=True)
class WavelengthResult:
    wavelength: float
    wavePerSegment: float
    slope: float
    phases: Any
    amplitudes: Any
    used: Any
    flagged: bool
    reason: str = ""


@dataclass(frozen=True)
class ThrustTable:
    """ Window-mean force along the swim direction (N).

        perSegment (bodies, mechanisms); totals (mechanisms,) sums over segments;
        segmentTotals (bodies,) is the logged total force along the same direction.
    """
    labels: List[str]
    mechanisms: List[str]
    perSegment: Any
    totals: Any
    segmentTotals: Any
    direction: Any
    flagged: bool
    reason: str = ""


@dataclass(frozen=True)
class TailTorqueSummary:
    """ Fin-joint generalized torque per mechanism over the window (N m). """
    rms: Dict[str, float]
    mean: Dict[str, float]
    peak: Dict[str, float]


def wavelengthFromSignals(times, s, signals, frequency, segmentLength, bodyLength=None):
    """ Traveling-wave wavelength from lateral displacement signals.

        Each column of ``signals`` (samples, markers) is fitted as
        a cos(2 pi f t) + b sin(2 pi f t) + c; its phase atan2(a, b) is unwrapped
        along the marker positions ``s`` and regressed linearly on s.
        lambda = 2 pi / |slope|.
    """
    t = np.asarray(times, dtype=float)
    s = np.asarray(s, dtype=float)
    y = np.asarray(signals, dtype=float)
    if y.ndim != 2 or y.shape != (t.size, s.size):
        raise SwimModelError("signals must have shape (samples, markers) = (%d, %d)" % (t.size, s.size))
    if bodyLength is None:
        bodyLength = float(s.max() - s.min()) if s.size > 1 else 1.0
    #
    w = 2.0 * np.pi * frequency * t
    design = np.column_stack([np.cos(w), np.sin(w), np.ones_like(t)])
    coef = np.linalg.lstsq(design, y, rcond=None)[0]
    a, b = coef[0], coef[1]
    amps = np.hypot(a, b)
    phases = np.arctan2(a, b)
    peak = amps.max() if amps.size else 0.0
    used = amps >= AMPLITUDE_CUTOFF * peak if peak > 0.0 else np.zeros(s.size, dtype=bool)
    nUsed = int(used.sum())
    #
    if peak <= 0.0 or nUsed < 2 or 2 * nUsed < s.size:
        return WavelengthResult(wavelength=float("inf"), wavePerSegment=0.0, slope=0.0, phases=phases, amplitudes=amps, used=used,
                                flagged=True, reason="too few markers above the amplitude cutoff")
    #
    order = np.argsort(s[used])
    sUsed = s[used][order]
    phUsed = np.unwrap(phases[used][order])
    slope = float(np.polyfit(sUsed, phUsed, 1)[0])
    if slope == 0.0:
        return WavelengthResult(wavelength=float("inf"), wavePerSegment=0.0, slope=0.0, phases=phases, amplitudes=amps, used=used,
                                flagged=True, reason="no phase gradient along the body")
    lam = 2.0 * np.pi / abs(slope)
    if lam > MAX_WAVELENGTH_BODY_LENGTHS * bodyLength:
        return WavelengthResult(wavelength=lam, wavePerSegment=segmentLength / lam, slope=slope, phases=phases, amplitudes=amps, used=used,
                                flagged=True, reason="phase gradient below threshold (standing wave)")
    return WavelengthResult(wavelength=lam, wavePerSegment=segmentLength / lam, slope=slope, phases=phases, amplitudes=amps, used=used, flagged=False)


def wavelength(traj, model, frequency=None, window=2.0):
    """ Wavelength of the lateral body wave over the steady window, markers at segment midpoints.
    """
    f = float(frequency if frequency is not None else traj.meta.get("frequency", 0.0))
    if not f > 0.0:
        raise SwimModelError("wavelength needs a positive input frequency")
    if traj.aborted:
        return WavelengthResult(wavelength=float("inf"), wavePerSegment=0.0, slope=0.0, phases=np.zeros(model.bodyCount),
                                amplitudes=np.zeros(model.bodyCount), used=np.zeros(model.bodyCount, dtype=bool), flagged=True,
                                reason="aborted rollout")
    kin = ChainKinematics(model)
    idx = traj.windowIndices(window)
    points = [kin.bodyPoints(traj.q[i]) for i in idx]
    axes = np.array([p[1] for p in points])
    midpoints = np.array([p[0] for p in points]) + 0.5 * kin.lengths[None, :, None] * axes
    disp = lateralDisplacements(midpoints, axes)
    return wavelengthFromSignals(traj.times[idx], model.arcPositions(), disp, f, model.segments[0].length, bodyLength=model.totalLength())


def _requireForces(traj):
    if traj.forceLog is None or len(traj.forceLog) == 0:
        raise SwimModelError("trajectory carries no force log")
    return traj.forceLog


def thrustDecomposition(traj, labels=None, window=2.0):
    """ Window-mean world-frame force along the swim direction per segment and mechanism.

        The swim direction is the unit vector of the net CoM displacement over the window.
    """
    fl = _requireForces(traj).window(traj.endTime - window)
    nBody = fl.segmentForces.shape[1]
    labels = list(labels) if labels is not None else [str(i + 1) for i in range(nBody)]
    disp = traj.com[-1] - traj.comAt(traj.endTime - window)
    dist = float(np.linalg.norm(disp))
    if dist <= 0.0 or len(fl) == 0:
        zeros = np.zeros((nBody, len(SEGMENT_MECHANISMS)))
        return ThrustTable(labels=labels, mechanisms=list(SEGMENT_MECHANISMS), perSegment=zeros, totals=zeros.sum(axis=0),
                           segmentTotals=np.zeros(nBody), direction=np.zeros(2), flagged=True, reason="zero net displacement")
    d = disp / dist
    perSegment = np.mean(fl.segmentForces @ d, axis=0)
    segmentTotals = np.mean(fl.totalForces @ d, axis=0)
    return ThrustTable(labels=labels, mechanisms=list(SEGMENT_MECHANISMS), perSegment=perSegment, totals=perSegment.sum(axis=0),
                       segmentTotals=segmentTotals, direction=d, flagged=False)


def tailTorqueDecomposition(traj, window=2.0):
    """ RMS, mean and peak of every fin-joint torque mechanism over the window.
    """
    fl = _requireForces(traj).window(traj.endTime - window)
    fin = fl.jointTorques[:, -1, :] if len(fl) else np.zeros((1, len(JOINT_MECHANISMS)))
    rms = np.sqrt(np.mean(np.square(fin), axis=0))
    mean = np.mean(fin, axis=0)
    peak = np.max(np.abs(fin), axis=0)
    return TailTorqueSummary(rms={m: float(v) for m, v in zip(JOINT_MECHANISMS, rms)}, mean={m: float(v) for m, v in zip(JOINT_MECHANISMS, mean)},
                             peak={m: float(v) for m, v in zip(JOINT_MECHANISMS, peak)})
