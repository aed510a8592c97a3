"""
Import all schemes from the current directory
and make them available for import as
    schemes.SchemeName
"""

# pylint: disable=wildcard-import

from os.path import dirname, basename, isfile, join
import glob

__all__ = [
    basename(f)[:-3]
    for f in glob.glob(join(dirname(__file__), "*.py"))
    if isfile(f) and not f.endswith("__init__.py")
]

from .scheme import (
    Limiter,
    Scheme,
    SchemeConfig,
    SplitMode,
    all_schemes,
    make_scheme,
    scheme_by_name,
)
from .timestep import cfl_dt, ssp_rk3_step
from .reconstruction import reconstruct_muscl, reconstruct_weno5
from .steps import (
    step_godunov,
    step_lax_friedrichs,
    step_maccormack,
    step_richtmyer,
    step_vnr_viscosity,
)
from . import *
