# flake8: noqa
"""
lgradial - radial su(1,1) structure of Laguerre-Gauss beams

Operator matrices, coherent and intelligent states, and their fields.
"""
from .__about__ import *
from .config import *
from .exceptions import *
from .fields import *
from .specfun import *
from .states import *
from .su11 import *
from .two_mode import *
from .verify import *
