##
# File:  ReportWriter.py
# Date:  14-Jun-2023
# Updates:
#  23-Jun-2023  tail torque table
#  27-Jun-2023  failures table
#  21-Oct-2023  aborted analysis rollouts flagged; their force tables are not written
##
"""
Plot-ready tables for a set of case results.

    speeds.csv            case_id, speed_m_s, bl_per_s, aborted
    wavelengths.csv       wavelength and wave per segment per case
    thrust_<case>.csv     segment x mechanism window-mean force (N) with a totals row
    tail_torque.csv       fin-joint RMS torque per mechanism (N m)
    learning_<case>.jsonl one record per EPHE episode
    failures.csv          failed cases and their messages

Cases whose analysis rollout aborted keep their speed row (flagged) but get
no thrust or tail torque rows.

"""
__docformat__ = "restructuredtext en"
__author__ = "muBot modeling group"
__license__ = "Apache 2.0"
__version__ = "V0.04"

import csv
import json
import os
import sys

from mubot.apps.fish_swim.dynamics.ChainState import JOINT_MECHANISMS, SEGMENT_MECHANISMS
from mubot.apps.fish_swim.utils.SwimExceptions import SwimModelError


def _num(value):
    return "%.17g" % float(value)


class ReportWriter(object):
    def __init__(self, outDir, verbose=False, log=sys.stderr):
        self.__outDir = outDir
        self.__verbose = verbose
        self.__lfh = log
        try:
            if not os.access(outDir, os.F_OK):
                os.makedirs(outDir)
        except OSError as exc:
            raise SwimModelError("cannot create report directory %s: %s" % (outDir, exc)) from exc
        #
        if not os.access(outDir, os.W_OK):
            raise SwimModelError("report directory %s is not writable" % outDir)
        #

    def emit(self, results, stream=sys.stdout):
        """ Write every table for ``results`` and print the summary to ``stream``.  Returns the written paths.
        """
        complete = [r for r in results if r.isComplete]
        failed = [r for r in results if not r.isComplete]
        analyzed = [r for r in complete if not r.aborted]
        paths = [self.writeSpeeds(complete), self.writeWavelengths(complete), self.writeTailTorque(analyzed)]
        for result in complete:
            if not result.aborted:
                paths.append(self.writeThrust(result))
            paths.append(self.writeLearning(result))
        #
        paths.append(self.writeFailures(failed))
        self.writeSummary(results, stream)
        if self.__verbose:
            self.__lfh.write("+ReportWriter.emit() - %d files written to %s\n" % (len(paths), self.__outDir))
        return paths

    def writeSpeeds(self, results):
        return self.__writeCsv("speeds.csv", ["case_id", "speed_m_s", "bl_per_s", "aborted"],
                               [[r.caseId, _num(r.speed), _num(r.bodyLengthsPerSecond), "Y" if r.aborted else "N"] for r in results])

    def writeWavelengths(self, results):
        rows = []
        for r in results:
            rows.append([r.caseId, _num(r.wavelength), _num(r.wavePerSegment), _num(r.segmentLength), _num(r.frequency),
                         "Y" if r.wavelengthFlagged else "N"])
        #
        return self.__writeCsv("wavelengths.csv", ["case_id", "wavelength_m", "wave_per_segment", "segment_length_m", "frequency_hz", "flagged"], rows)

    def writeThrust(self, result):
        header = ["segment", "label"] + ["%s_N" % m for m in SEGMENT_MECHANISMS] + ["sum_N"]
        rows = []
        for i, row in enumerate(result.thrust):
            label = result.segmentLabels[i] if i < len(result.segmentLabels) else ""
            rows.append([str(i + 1), label] + [_num(v) for v in row] + [_num(sum(row))])
        #
        totals = result.thrustTotals if result.thrustTotals else [0.0] * len(SEGMENT_MECHANISMS)
        rows.append(["total", ""] + [_num(v) for v in totals] + [_num(sum(totals))])
        return self.__writeCsv("thrust_%s.csv" % result.caseId, header, rows)

    def writeTailTorque(self, results):
        header = ["case_id"] + ["%s_rms_N_m" % m for m in JOINT_MECHANISMS]
        rows = [[r.caseId] + [_num(r.tailTorqueRms.get(m, 0.0)) for m in JOINT_MECHANISMS] for r in results]
        return self.__writeCsv("tail_torque.csv", header, rows)

    def writeLearning(self, result):
        path = os.path.join(self.__outDir, "learning_%s.jsonl" % result.caseId)
        with open(path, "w") as ofh:
            for rec in result.learning:
                ofh.write(json.dumps(rec, sort_keys=True) + "\n")
            #
        #
        return path

    def writeFailures(self, results):
        return self.__writeCsv("failures.csv", ["case_id", "status", "message"], [[r.caseId, r.status, r.message] for r in results])

    def writeSummary(self, results, stream=sys.stdout):
        stream.write("%-14s %-9s %12s %10s %12s %12s %6s\n" % ("case", "status", "speed(m/s)", "BL/s", "lambda(m)", "wave/seg", "flags"))
        for r in results:
            if not r.isComplete:
                stream.write("%-14s %-9s %s\n" % (r.caseId, r.status, r.message))
                continue
            flags = ("A" if r.aborted else "") + ("W" if r.wavelengthFlagged else "") + ("T" if r.thrustFlagged else "")
            stream.write("%-14s %-9s %12.5g %10.4g %12.5g %12.4g %6s\n" % (r.caseId, r.status, r.speed, r.bodyLengthsPerSecond, r.wavelength,
                                                                        r.wavePerSegment, flags or "-"))
        #

    def __writeCsv(self, fileName, header, rows):
        path = os.path.join(self.__outDir, fileName)
        try:
            with open(path, "w", newline="") as ofh:
                writer = csv.writer(ofh)
                writer.writerow(header)
                writer.writerows(rows)
            #
        except OSError as exc:
            raise SwimModelError("cannot write %s: %s" % (path, exc)) from exc
        return path


def emitReports(results, outDir, verbose=False, log=sys.stderr, stream=sys.stdout):
    return ReportWriter(outDir, verbose=verbose, log=log).emit(results, stream=stream)
