__docformat__ = "restructuredtext en"
__author__ = "muBot modeling group"
__license__ = "Apache 2.0"
__version__ = "0.3.1"
