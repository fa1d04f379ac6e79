##
# File:  Trajectory.py
# Date:  11-Apr-2023
# Updates:
#  12-Jun-2023  full-rate CoM track kept next to the decimated states
##
"""
Rollout trajectory record and the gait metrics derived from its steady window.

"""
__docformat__ = "restructuredtext en"
__author__ = "muBot modeling group"
__license__ = "Apache 2.0"
__version__ = "V0.02"

from dataclasses import dataclass, field
from typing import Any, Optional

import numpy as np

from mubot.apps.fish_swim.dynamics.ChainState import ForceLog


@dataclass
class Trajectory:
    """ States at the output rate, the full-rate center-of-mass track, and the
        optional full-rate force log.

        times (K,), q (K, coords), qdot (K, coords), comTimes (N,), com (N, 2)
    """
    times: Any
    q: Any
    qdot: Any
    comTimes: Any
    com: Any
    forceLog: Optional[ForceLog] = None
    meta: dict = field(default_factory=dict)
    aborted: bool = False
    abortReason: str = ""
    abortTime: Optional[float] = None

    def __len__(self):
        return len(self.times)

    @property
    def duration(self):
        return float(self.comTimes[-1] - self.comTimes[0]) if len(self.comTimes) else 0.0

    @property
    def endTime(self):
        return float(self.comTimes[-1])

    def comAt(self, t):
        """ Center of mass at the full-rate sample nearest to ``t``. """
        i = int(np.argmin(np.abs(self.comTimes - t)))
        return self.com[i]

    def windowIndices(self, window):
        """ Output-rate sample indices inside the last ``window`` seconds. """
        tStart = self.endTime - window
        return np.nonzero(self.times >= tStart - 1.0e-9)[0]


@dataclass(frozen=True)
class GaitMetrics:
    """ Steady-window gait summary.

        speed         U, m/s (same as the reward)
        amplitudes    mean lateral displacement amplitude per segment, m
        speedRatio    U / (l f)
        amplitudeRatios  A / l per segment
        bodyLengthsPerSecond  U / total length
    """
    speed: float
    amplitudes: Any
    speedRatio: float
    amplitudeRatios: Any
    bodyLengthsPerSecond: float
    frequency: float


def meanHeadingFrame(midpoints, axes):
    """ Mean heading direction and centroid over a window.

        midpoints, axes: (samples, bodies, 2)
        :Returns: (centroid (2,), unit direction (2,), unit normal (2,))
    """
    angles = np.arctan2(axes[..., 1], axes[..., 0])
    mean = np.arctan2(np.mean(np.sin(angles)), np.mean(np.cos(angles)))
    direction = np.array([np.cos(mean), np.sin(mean)])
    normal = np.array([-direction[1], direction[0]])
    centroid = midpoints.reshape(-1, 2).mean(axis=0)
    return centroid, direction, normal


def lateralDisplacements(midpoints, axes):
    """ Signed distance of each midpoint from the mean-heading line, (samples, bodies).
    """
    centroid, _, normal = meanHeadingFrame(midpoints, axes)
    return (midpoints - centroid) @ normal


def envelopeAmplitudes(times, displacements, frequency):
    """ Mean over whole input periods of half peak-to-peak displacement, per column.

        When the window is shorter than one period the whole window is used.
    """
    times = np.asarray(times, dtype=float)
    disp = np.asarray(displacements, dtype=float)
    span = times[-1] - times[0]
    nPeriod = int(np.floor(span * frequency + 1.0e-9)) if frequency > 0.0 else 0
    if nPeriod < 1:
        return 0.5 * (disp.max(axis=0) - disp.min(axis=0))
    period = 1.0 / frequency
    out = []
    for k in range(nPeriod):
        lo = times[0] + k * period
        sel = (times >= lo - 1.0e-9) & (times <= lo + period + 1.0e-9)
        out.append(0.5 * (disp[sel].max(axis=0) - disp[sel].min(axis=0)))
    return np.mean(out, axis=0)
