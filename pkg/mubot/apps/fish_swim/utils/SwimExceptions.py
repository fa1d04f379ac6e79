##
# File:  SwimExceptions.py
# Date:  14-Mar-2023
# Updates:
##
"""
Exception types raised by the swimming simulator.

"""
__docformat__ = "restructuredtext en"
__author__ = "muBot modeling group"
__license__ = "Apache 2.0"
__version__ = "V0.01"


class SwimModelError(ValueError):
    """ Invalid model, parameter, policy or configuration input.
    """


class SwimSimulationError(RuntimeError):
    """ Integration aborted (singular system, non-finite state or joint fold-over).
    """
    def __init__(self, reason, time=None, step=None):
        self.reason = reason
        self.time = time
        self.step = step
        text = reason
        if time is not None:
            text += " at t=%.6g s" % time
        if step is not None:
            text += " (step %d)" % step
        super().__init__(text)
