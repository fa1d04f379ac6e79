##
# File:  CaseStore.py
# Date:  12-Jun-2023
# Updates:
#  27-Jun-2023  session and learning-curve categories
#  21-Oct-2023  aborted flag on the case result
##
"""
Persistent store of case results, one mmCIF data block per case in
``<storeDir>/cases/<caseId>_<hash12>.cif``.

Categories:  swim_case_result, swim_case_setting, swim_policy, swim_segment,
swim_tail_torque, swim_session, swim_control_param, swim_learning.

"""
__docformat__ = "restructuredtext en"
__author__ = "muBot modeling group"
__license__ = "Apache 2.0"
__version__ = "V0.03"

import os
import sys
import traceback

from mmcif.api.DataCategory import DataCategory
from mmcif.api.PdbxContainers import DataContainer
from mmcif.io.PdbxReader import PdbxReader
from mmcif.io.PdbxWriter import PdbxWriter

from mubot.apps.fish_swim.dynamics.ChainState import JOINT_MECHANISMS, SEGMENT_MECHANISMS
from mubot.apps.fish_swim.expsuite.CaseSpec import CaseResult, thrustColumnTotals

_RESULT_FLOATS = ("speed", "bodyLengthsPerSecond", "totalLength", "segmentLength", "frequency", "wavelength", "wavePerSegment",
                  "speedRatio", "sessionSpread")
_RESULT_FLAGS = ("wavelengthFlagged", "thrustFlagged", "aborted")
_LEARNING_ITEMS = ("session", "episode", "seed", "attempts", "no_op", "clipped", "wall_clock", "mean_reward", "max_reward", "elite_mean_reward",
                   "eta", "sigma")


def _fmt(value):
    if value is None:
        return "?"
    if isinstance(value, bool):
        return "Y" if value else "N"
    if isinstance(value, float):
        return "%.17g" % value
    text = str(value).replace("\n", " ").strip()
    return text if text else "?"


def _float(text):
    return float(text) if text not in ("?", ".") else 0.0


def _text(text):
    return "" if text in ("?", ".") else text


def _param(text):
    try:
        return float(text)
    except ValueError:
        return _text(text)


class CaseStore(object):
    """ Single-writer store; readers may run concurrently with completed files.
    """

    def __init__(self, storeDir, verbose=False, log=sys.stderr):
        self.__verbose = verbose
        self.__lfh = log
        self.__caseDir = os.path.join(storeDir, "cases")
        if not os.access(self.__caseDir, os.F_OK):
            os.makedirs(self.__caseDir)
        #

    def getPath(self, spec):
        return os.path.join(self.__caseDir, "%s_%s.cif" % (spec.caseId, spec.contentHash()[:12]))

    def isComplete(self, spec):
        result = self.read(spec)
        return result is not None and result.isComplete and result.contentHash == spec.contentHash()

    def write(self, spec, result):
        """ Replace the stored result of ``spec``.
        """
        block = DataContainer("case_%s" % spec.contentHash()[:12])
        head = [result.caseId, result.contentHash, result.status, result.message]
        head += [float(getattr(result, k)) for k in _RESULT_FLOATS] + [bool(getattr(result, k)) for k in _RESULT_FLAGS]
        self.__append(block, "swim_case_result", ["case_id", "content_hash", "status", "message"] + list(_RESULT_FLOATS) + list(_RESULT_FLAGS), [head])
        self.__append(block, "swim_case_setting", ["name", "value"], [[k, v] for k, v in sorted(spec.asDict().items())])
        self.__append(block, "swim_policy", ["ordinal", "value"], [[i + 1, float(v)] for i, v in enumerate(result.bestGamma)])
        segRows = []
        for i, label in enumerate(result.segmentLabels):
            row = [i + 1, label, float(result.amplitudes[i]), float(result.amplitudeRatios[i])]
            row += [float(v) for v in (result.thrust[i] if i < len(result.thrust) else [0.0] * len(SEGMENT_MECHANISMS))]
            segRows.append(row)
        #
        self.__append(block, "swim_segment", ["ordinal", "label", "amplitude", "amplitude_ratio"] + ["thrust_%s" % m for m in SEGMENT_MECHANISMS], segRows)
        self.__append(block, "swim_tail_torque", ["mechanism", "rms"], [[m, float(result.tailTorqueRms[m])] for m in JOINT_MECHANISMS if m in result.tailTorqueRms])
        sessionRows = [[i, float(b), float(f)] for i, (b, f) in enumerate(zip(result.sessionBest, result.sessionFinal))]
        self.__append(block, "swim_session", ["session", "best_reward", "final_reward"], sessionRows)
        self.__append(block, "swim_control_param", ["name", "value"], [[k, v] for k, v in sorted(result.controlParams.items())])
        learnRows = []
        for rec in result.learning:
            learnRows.append([" ".join("%.17g" % v for v in rec[k]) if k in ("eta", "sigma") else rec[k] for k in _LEARNING_ITEMS])
        self.__append(block, "swim_learning", list(_LEARNING_ITEMS), learnRows)
        #
        path = self.getPath(spec)
        tmpPath = path + ".tmp"
        with open(tmpPath, "w") as ofh:
            PdbxWriter(ofh).write([block])
        os.replace(tmpPath, path)
        if self.__verbose:
            self.__lfh.write("+CaseStore.write() - %s stored as %s\n" % (result.caseId, path))
        #

    def read(self, spec):
        """ Stored CaseResult of ``spec`` or None.
        """
        path = self.getPath(spec)
        if not os.access(path, os.F_OK):
            return None
        try:
            dataList = []
            with open(path, "r") as ifh:
                PdbxReader(ifh).read(dataList)
            return self.__toResult(dataList[0])
        except Exception:  # pylint: disable=broad-except
            self.__lfh.write("+CaseStore.read() - reading %s failed\n" % path)
            traceback.print_exc(file=self.__lfh)
            return None
        #

    def readAll(self):
        """ Every stored result, ordered by file name. """
        out = []
        for name in sorted(os.listdir(self.__caseDir)):
            if not name.endswith(".cif"):
                continue
            try:
                dataList = []
                with open(os.path.join(self.__caseDir, name), "r") as ifh:
                    PdbxReader(ifh).read(dataList)
                out.append(self.__toResult(dataList[0]))
            except Exception:  # pylint: disable=broad-except
                self.__lfh.write("+CaseStore.readAll() - skipping unreadable %s\n" % name)
                traceback.print_exc(file=self.__lfh)
            #
        #
        return out

    def __append(self, block, name, attributes, rows):
        # empty loops are left out
        if rows:
            block.append(DataCategory(name, attributes, [[_fmt(v) for v in row] for row in rows]))

    def __rows(self, block, name):
        cat = block.getObj(name)
        if cat is None:
            return []
        attrs = cat.getAttributeList()
        return [dict(zip(attrs, row)) for row in cat.getRowList()]

    def __toResult(self, block):
        head = self.__rows(block, "swim_case_result")[0]
        result = CaseResult(caseId=head["case_id"], contentHash=head["content_hash"], status=head["status"], message=_text(head["message"]))
        for k in _RESULT_FLOATS:
            setattr(result, k, _float(head[k]))
        for k in _RESULT_FLAGS:
            setattr(result, k, head.get(k) == "Y")
        result.bestGamma = [_float(r["value"]) for r in self.__rows(block, "swim_policy")]
        segs = self.__rows(block, "swim_segment")
        result.segmentLabels = [r["label"] for r in segs]
        result.amplitudes = [_float(r["amplitude"]) for r in segs]
        result.amplitudeRatios = [_float(r["amplitude_ratio"]) for r in segs]
        result.thrust = [[_float(r["thrust_%s" % m]) for m in SEGMENT_MECHANISMS] for r in segs]
        result.thrustTotals = thrustColumnTotals(result.thrust)
        result.tailTorqueRms = {r["mechanism"]: _float(r["rms"]) for r in self.__rows(block, "swim_tail_torque")}
        sessions = self.__rows(block, "swim_session")
        result.sessionBest = [_float(r["best_reward"]) for r in sessions]
        result.sessionFinal = [_float(r["final_reward"]) for r in sessions]
        result.controlParams = {r["name"]: _param(r["value"]) for r in self.__rows(block, "swim_control_param")}
        learning = []
        for r in self.__rows(block, "swim_learning"):
            rec = {}
            for k in _LEARNING_ITEMS:
                if k in ("eta", "sigma"):
                    rec[k] = [float(v) for v in _text(r[k]).split()]
                elif k == "no_op":
                    rec[k] = r[k] == "Y"
                elif k in ("session", "episode", "seed", "attempts", "clipped"):
                    rec[k] = int(r[k])
                else:
                    rec[k] = _float(r[k])
            learning.append(rec)
        result.learning = learning
        return result
