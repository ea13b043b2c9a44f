from __future__ import division
from __future__ import print_function

__version__ = '0.1.0'
