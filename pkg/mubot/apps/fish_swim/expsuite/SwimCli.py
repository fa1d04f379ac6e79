##
# File:  SwimCli.py
# Date:  02-Oct-2023
# Updates:
#  09-Oct-2023  analyze verb works on exported trajectories without re-simulation
##
"""
Command-line entry point ``mubot-swim``.

    mubot-swim run --noa 4 --stiffness high --hm HM4 --seed 7 --out DIR
    mubot-swim sweep --grid full --sessions 3 --jobs 8 --out DIR
    mubot-swim analyze --traj DIR/trajectories/N4-H-HM4/trajectory.csv --wavelength --thrust
    mubot-swim report --in DIR --out DIR/report

Exit status is 0 on success, 2 for invalid input and 1 for runtime failures;
errors are reported as one JSON object on stderr.

"""
__docformat__ = "restructuredtext en"
__author__ = "muBot modeling group"
__license__ = "Apache 2.0"
__version__ = "V0.02"

import argparse
import json
import logging
import os
import sys
import traceback

import numpy as np

from mubot.apps.fish_swim.expsuite.CaseSpec import CaseSpec, enumerateGrid, parseGridSubset
from mubot.apps.fish_swim.expsuite.CaseStore import CaseStore
from mubot.apps.fish_swim.expsuite.GaitAnalysis import tailTorqueDecomposition, thrustDecomposition, wavelength
from mubot.apps.fish_swim.expsuite.ReportWriter import emitReports
from mubot.apps.fish_swim.expsuite.SweepRunner import SweepRunner
from mubot.apps.fish_swim.morphology.RobotBuilder import buildRobot
from mubot.apps.fish_swim.rollout.TrajectoryIo import TrajectoryIo
from mubot.apps.fish_swim.utils.SwimConfigInfo import SwimConfigInfo
from mubot.apps.fish_swim.utils.SwimExceptions import SwimModelError

logger = logging.getLogger(__name__)

# command-line option -> configuration key
_CONFIG_OPTIONS = {"seed": "seed", "sessions": "sessions", "episodes": "episodes", "rollouts": "rollouts", "elite": "elite",
                   "horizon": "horizon", "dt": "dt", "jobs": "jobs", "khat": "k_hat"}


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        raise SwimModelError("%s: %s" % (self.prog, message))


def _addTrainingOptions(parser):
    parser.add_argument("--config", default=None, help="INI file with a [swim] section (default $MUBOT_SWIM_CONFIG)")
    parser.add_argument("--seed", type=int, default=None)
    parser.add_argument("--sessions", type=int, default=None)
    parser.add_argument("--episodes", type=int, default=None)
    parser.add_argument("--rollouts", type=int, default=None, help="rollouts per episode (M)")
    parser.add_argument("--elite", type=int, default=None, help="elite size (K)")
    parser.add_argument("--horizon", type=float, default=None, help="rollout length (s)")
    parser.add_argument("--dt", type=float, default=None, help="integration step (s)")
    parser.add_argument("--jobs", type=int, default=None, help="parallel rollout workers")
    parser.add_argument("--no-resume", dest="resume", action="store_false", help="recompute completed cases")


def buildParser():
    parser = _ArgumentParser(prog="mubot-swim", description="muBot swimming simulator, gait optimizer and experiment suite")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command")
    #
    runP = sub.add_parser("run", help="optimize and analyze a single case")
    runP.add_argument("--noa", type=int, required=True)
    runP.add_argument("--stiffness", default="high", help="high | medium | low")
    runP.add_argument("--hm", default="HM4", help="HM1 .. HM4")
    runP.add_argument("--khat", type=float, default=None, help="explicit normalized stiffness (N m/rad)")
    runP.add_argument("--out", default="swim_out")
    _addTrainingOptions(runP)
    #
    sweepP = sub.add_parser("sweep", help="run the case grid")
    sweepP.add_argument("--grid", default="full", help="full or a subset such as 'noa=4,6;hm=HM4'")
    sweepP.add_argument("--out", default="swim_out")
    sweepP.add_argument("--export", action="store_true", help="export the best trajectory of every case")
    _addTrainingOptions(sweepP)
    #
    anaP = sub.add_parser("analyze", help="analyze an exported trajectory")
    anaP.add_argument("--traj", required=True, help="trajectory CSV written by run or sweep --export")
    anaP.add_argument("--wavelength", action="store_true")
    anaP.add_argument("--thrust", action="store_true")
    anaP.add_argument("--window", type=float, default=2.0, help="steady window (s)")
    #
    repP = sub.add_parser("report", help="write tables from a case store")
    repP.add_argument("--in", dest="inDir", required=True)
    repP.add_argument("--out", required=True)
    return parser


def _jsonValue(value):
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, (np.floating, np.integer, np.bool_)):
        return value.item()
    raise TypeError("not JSON serializable: %r" % type(value))


class SwimCliWorker(object):
    """ Maps a parsed command line to its operation.
    """

    def __init__(self, args, verbose=False, log=sys.stderr, out=sys.stdout):
        self.__args = args
        self.__verbose = verbose
        self.__lfh = log
        self.__out = out
        # fmt:off
        self.__opD = {"run":      "_runOp",      # noqa: E241
                      "sweep":    "_sweepOp",    # noqa: E241
                      "analyze":  "_analyzeOp",  # noqa: E241
                      "report":   "_reportOp",   # noqa: E241
                      }
        # fmt:on

    def doOp(self):
        command = self.__args.command
        if command not in self.__opD:
            raise SwimModelError("unknown command '%s'; expected one of %s" % (command, ", ".join(sorted(self.__opD))))
        mth = getattr(self, self.__opD[command])
        return mth()

    def _runOp(self):
        config = self.__config()
        spec = CaseSpec.fromConfig(self.__args.noa, self.__args.stiffness, self.__args.hm, config)
        runner = SweepRunner(self.__args.out, jobs=config.get("jobs", 1), exportTrajectories=True, verbose=self.__verbose, log=self.__lfh)
        results = runner.run([spec], resume=self.__args.resume)
        emitReports(results, self.__args.out, verbose=self.__verbose, log=self.__lfh, stream=self.__out)
        if not results[0].isComplete:
            raise RuntimeError("case %s failed: %s" % (spec.caseId, results[0].message))
        return 0

    def _sweepOp(self):
        config = self.__config()
        grid = parseGridSubset(self.__args.grid, config.getGrid())
        cases = enumerateGrid(config, grid)
        logger.info("sweep of %d cases into %s", len(cases), self.__args.out)
        runner = SweepRunner(self.__args.out, jobs=config.get("jobs", 1), exportTrajectories=self.__args.export, verbose=self.__verbose, log=self.__lfh)
        results = runner.run(cases, resume=self.__args.resume)
        emitReports(results, self.__args.out, verbose=self.__verbose, log=self.__lfh, stream=self.__out)
        return 0

    def _analyzeOp(self):
        traj = TrajectoryIo(verbose=self.__verbose, log=self.__lfh).read(self.__args.traj)
        model = self.__modelFor(traj)
        doWavelength = self.__args.wavelength or not self.__args.thrust
        reportD = {"case_id": traj.meta.get("case_id", ""), "aborted": traj.aborted}
        if doWavelength:
            wl = wavelength(traj, model, window=self.__args.window)
            reportD["wavelength"] = {"wavelength_m": wl.wavelength, "wave_per_segment": wl.wavePerSegment, "flagged": wl.flagged,
                                     "reason": wl.reason, "phases": wl.phases, "amplitudes": wl.amplitudes}
        if self.__args.thrust:
            thrust = thrustDecomposition(traj, model.segmentLabels(), window=self.__args.window)
            tail = tailTorqueDecomposition(traj, window=self.__args.window)
            reportD["thrust"] = {"labels": thrust.labels, "mechanisms": thrust.mechanisms, "per_segment_N": thrust.perSegment,
                                 "totals_N": thrust.totals, "flagged": thrust.flagged, "reason": thrust.reason}
            reportD["tail_torque"] = {"rms_N_m": tail.rms, "mean_N_m": tail.mean, "peak_N_m": tail.peak}
        #
        self.__out.write(json.dumps(reportD, indent=2, sort_keys=True, default=_jsonValue) + "\n")
        return 0

    def _reportOp(self):
        if not os.path.isdir(os.path.join(self.__args.inDir, "cases")):
            raise SwimModelError("no case store under %s" % self.__args.inDir)
        results = CaseStore(self.__args.inDir, verbose=self.__verbose, log=self.__lfh).readAll()
        emitReports(results, self.__args.out, verbose=self.__verbose, log=self.__lfh, stream=self.__out)
        return 0

    def __config(self):
        overrides = {key: getattr(self.__args, opt, None) for opt, key in _CONFIG_OPTIONS.items()}
        return SwimConfigInfo(self.__args.config, overrides=overrides, verbose=self.__verbose, log=self.__lfh)

    def __modelFor(self, traj):
        caseD = traj.meta.get("case")
        if caseD:
            return CaseSpec(**caseD).buildRobot()
        if "noa" not in traj.meta:
            raise SwimModelError("trajectory metadata names neither the case nor the NoA")
        self.__lfh.write("+SwimCliWorker.__modelFor() - no case settings in metadata, using the default high-stiffness robot\n")
        return buildRobot(int(traj.meta["noa"]), "high")


def main(argv=None, out=sys.stdout, err=sys.stderr):
    """ Console entry point; returns the process exit status.
    """
    try:
        args = buildParser().parse_args(argv)
        logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(asctime)s %(levelname)s %(name)s %(message)s")
        if args.command is None:
            raise SwimModelError("a command is required: run, sweep, analyze or report")
        return SwimCliWorker(args, verbose=args.verbose, log=err, out=out).doOp()
    except SwimModelError as e:
        err.write(json.dumps({"status": "error", "type": type(e).__name__, "message": str(e)}) + "\n")
        return 2
    except Exception as e:  # pylint: disable=broad-except
        traceback.print_exc(file=err)
        err.write(json.dumps({"status": "error", "type": type(e).__name__, "message": str(e)}) + "\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
