##
# File:  SwimConfigInfo.py
# Date:  14-Mar-2023
# Updates:
#  21-Jun-2023  add [grid] section and ephe_init
#  02-Oct-2023  k_hat override
##
"""
Configuration accessor for simulator, optimizer and sweep settings.

Settings come from three layers - built-in defaults, an INI file with a
``[swim]`` section of ``key = value`` pairs (plus an optional ``[grid]``
section), and explicit overrides (command line).  Later layers win.

"""
__docformat__ = "restructuredtext en"
__author__ = "muBot modeling group"
__license__ = "Apache 2.0"
__version__ = "V0.03"

import configparser
import os
import sys

from mubot.apps.fish_swim.utils.SwimExceptions import SwimModelError

# fmt:off
_DEFAULTS = {
    "rho_f":         (float, 1000.0),   # noqa: E241
    "rho_body":      (float, 1000.0),   # noqa: E241
    "coil_r":        (float, 10.0),     # noqa: E241
    "e_max":         (float, 5.0),      # noqa: E241
    "k_t":           (float, 1.26e-3),  # noqa: E241
    "k_emf":         (float, 1.26e-3),  # noqa: E241
    "c_f":           (float, 0.06),     # noqa: E241
    "c_d":           (float, 2.25),     # noqa: E241
    "ar":            (float, 2.0),      # noqa: E241
    "dt":            (float, 1.0e-3),   # noqa: E241
    "horizon":       (float, 6.0),      # noqa: E241
    "reward_window": (float, 2.0),      # noqa: E241
    "output_rate":   (float, 100.0),    # noqa: E241
    "f_min":         (float, 0.5),      # noqa: E241
    "f_max":         (float, 5.0),      # noqa: E241
    "rollouts":      (int, 50),         # noqa: E241
    "elite":         (int, 25),         # noqa: E241
    "episodes":      (int, 40),         # noqa: E241
    "sessions":      (int, 3),          # noqa: E241
    "seed":          (int, 7),          # noqa: E241
    "ephe_init":     (str, "midpoint"),  # noqa: E241
    "jobs":          (int, 1),          # noqa: E241
    "k_hat":         (float, None),     # noqa: E241
}
# fmt:on

_GRID_DEFAULTS = {"noa": [2, 4, 6], "stiffness": ["high", "medium", "low"], "hm": ["HM1", "HM2", "HM3", "HM4"]}


class SwimConfigInfo(object):
    """ Layered key/value settings with typed access.
    """
    def __init__(self, configPath=None, overrides=None, verbose=False, log=sys.stderr):
        self.__verbose = verbose
        self.__lfh = log
        self.__values = {k: v[1] for k, v in _DEFAULTS.items()}
        self.__grid = {k: list(v) for k, v in _GRID_DEFAULTS.items()}
        #
        if configPath is None:
            configPath = os.environ.get("MUBOT_SWIM_CONFIG")
        if configPath:
            self.readFile(configPath)
        if overrides:
            self.update(overrides)

    def readFile(self, configPath):
        """ Load the [swim] and [grid] sections of an INI file.
        """
        if not os.access(configPath, os.R_OK):
            raise SwimModelError("configuration file %s is not readable" % configPath)
        #
        cp = configparser.ConfigParser()
        cp.read(configPath)
        if cp.has_section("swim"):
            self.update(dict(cp.items("swim")))
        if cp.has_section("grid"):
            for key, text in cp.items("grid"):
                self.setGrid(key, [tok.strip() for tok in text.split(",") if tok.strip()])
            #
        #
        if self.__verbose:
            self.__lfh.write("+SwimConfigInfo.readFile() - loaded %s\n" % configPath)

    def update(self, overrides):
        """ Apply key/value overrides; ``None`` values are ignored.
        """
        for key, value in overrides.items():
            if value is None:
                continue
            #
            name = key.strip().lower()
            if name not in _DEFAULTS:
                raise SwimModelError("unknown configuration key '%s'" % key)
            #
            self.__values[name] = self.__convert(name, value)
        #

    def setGrid(self, key, values):
        if key not in _GRID_DEFAULTS:
            raise SwimModelError("unknown grid key '%s'" % key)
        #
        if key == "noa":
            try:
                values = [int(v) for v in values]
            except ValueError as exc:
                raise SwimModelError("grid noa values must be integers: %s" % values) from exc
            #
        elif key == "hm":
            values = [str(v).upper().replace("-", "") for v in values]
        else:
            values = [str(v).lower() for v in values]
        #
        if not values:
            raise SwimModelError("grid '%s' is empty" % key)
        self.__grid[key] = values

    def get(self, key, default=None):
        value = self.__values.get(key.lower())
        if value is None:
            return default
        return value

    def getGrid(self):
        return {k: list(v) for k, v in self.__grid.items()}

    def asDict(self):
        return dict(self.__values)

    def __convert(self, name, value):
        cast, _default = _DEFAULTS[name]
        if isinstance(value, str):
            value = value.strip()
            if value == "" and _default is None:
                return None
        #
        try:
            out = cast(value)
        except (TypeError, ValueError) as exc:
            raise SwimModelError("configuration key '%s' has invalid value '%s'" % (name, value)) from exc
        #
        if name == "ephe_init" and out not in ("midpoint", "random"):
            raise SwimModelError("ephe_init must be 'midpoint' or 'random', got '%s'" % out)
        return out
