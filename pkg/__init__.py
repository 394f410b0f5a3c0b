'''Proportional-odds tilts of discrete lifetime distributions.

:mod:`.dist` holds the distributions, :mod:`.tilt` the transform,
:mod:`.ageing` and :mod:`.orders` the property checks, and :mod:`.lab` the
experiments on what a tilt keeps. :mod:`.cli` puts a command line on top.

'''

from . import config
from . import datawriter
from . import errors
from . import dist
from . import tilt
from . import ageing
from . import orders
from . import interchange
from . import timer
from . import lab
