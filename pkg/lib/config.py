"""
Global configuration of the solver suite.

All configurable parameters are stored in the global variable CONFIG,
the only variable which is exported from the module.

Default values of all configuration parameters are specified
in the `_CONFIG` dictionary. Those parameters can be overridden
by three means:
    * config file `etc/config.yaml` located in the work dir
    * config file `etc/config.yaml` located in the project dir
      (if the work dir and the project dir are not the same)
    * environment variables prefixed with `SHOCKCAP_`

Configuration placement priorities, from high to low:
    * environment variables;
    * configuration file in the workdir
    * configuration file in the project dir
    * default values specified in the `_CONFIG` dictionary

A config file may nest its keys (`scheme: {cfl: {vnr: 0.4}}`) or
spell them flat (`scheme.cfl.vnr: 0.4`); keys that are not in `_CONFIG`
are ignored.

Configuration parameters set by environment variables are mapped
in this way:
    * SHOCKCAP_ prefix is trimmed
    * _ replaced with .
    * the string is lowercased

For instance, an environment variable named `SHOCKCAP_RUN_WORKERS`
specifies the value for the `run.workers` configuration parameter
(the cap on concurrently executed cases of a convergence or compare run).
Keys with an underscore, such as `scheme.weno_eps`, are matched by
trying each underscore after the first one as `.` and as `_`.

A value that cannot be converted to the type of the default is ignored.
"""

import itertools
import os

_ENV_VAR_PREFIX = "SHOCKCAP"

_MYDIR = os.path.abspath(os.path.join(__file__, "..", ".."))


def _config_locations():
    """
    Return (workdir, config file in the workdir, config file in the project dir)
    """
    workdir = os.environ.get(
        _ENV_VAR_PREFIX + "_PATH_WORKDIR", os.path.join(os.path.expanduser("~"), ".shockcap")
    )
    conf_file_workdir = os.environ.get(
        _ENV_VAR_PREFIX + "_CONFIG", os.path.join(workdir, "etc/config.yaml")
    )
    return workdir, conf_file_workdir, os.path.join(_MYDIR, "etc/config.yaml")


_WORKDIR, _CONF_FILE_WORKDIR, _CONF_FILE_MYDIR = _config_locations()

_CONFIG = {
    "csv.digits": 17,
    "diagnostics.shock_threshold": 0.1,
    "gas.vacuum_floor": 1e-12,
    "log.level": 20,
    "path.log.main": "log/main.log",
    "path.problems": os.path.join(_MYDIR, "etc/problems.json"),
    "path.problems.schema": os.path.join(_MYDIR, "etc/problems.schema.json"),
    "path.workdir": _WORKDIR,
    "riemann.max_iter": 100,
    "riemann.pressure_floor": 1e-8,
    "riemann.tolerance": 1e-12,
    "run.output": "runs",
    "run.workers": 1,
    "scheme.cfl.first_order": 0.9,
    "scheme.cfl.high_order": 0.8,
    "scheme.cfl.vnr": 0.45,
    "scheme.highorder_flux": "hll",
    "scheme.limiter": "minmod",
    "scheme.pswitch": 0.25,
    "scheme.qlinear": 0.75,
    "scheme.qvisc": 2.0,
    "scheme.weno_eps": 1e-6,
}


class Config(dict):
    """
    Configuration dictionary; relative `path.*` values are anchored
    at `path.workdir`
    """

    def __init__(self, *args, **kwargs):
        dict.__init__(self)
        self.update(*args, **kwargs)

    def __setitem__(self, key, val):
        if key.startswith("path.") and key != "path.workdir" and not os.path.isabs(val):
            val = os.path.join(self.get("path.workdir", _WORKDIR), val)
        dict.__setitem__(self, key, val)

    def update(self, *args, **kwargs):
        # workdir first, the other paths depend on it
        newdict = dict(*args, **kwargs)
        if "path.workdir" in newdict:
            self["path.workdir"] = newdict.pop("path.workdir")
        for key, val in newdict.items():
            self[key] = val


def _coerce(default, value):
    """
    Convert `value` to the type of `default`; None if that is not possible

    >>> _coerce(1, "4")
    4
    >>> _coerce(0.5, "1e-3")
    0.001
    >>> print(_coerce(3, "many"))
    None
    """
    if isinstance(default, bool):
        if isinstance(value, str):
            return value.lower() in ("1", "true", "yes", "on")
        return bool(value)
    if isinstance(default, (int, float)):
        if isinstance(value, bool):
            return None
        try:
            return type(default)(value)
        except (ValueError, TypeError):
            return None
    if isinstance(value, (dict, list)):
        return None
    return str(value)


def _flatten(data, prefix=""):
    """
    Yield (dotted key, value) for every leaf of a nested mapping

    >>> sorted(_flatten({'a': {'b': 1, 'c.d': 2}, 'e': 3}))
    [('a.b', 1), ('a.c.d', 2), ('e', 3)]
    """
    for key, val in data.items():
        key = "%s.%s" % (prefix, key) if prefix else str(key)
        if isinstance(val, dict):
            yield from _flatten(val, key)
        else:
            yield key, val


def _select(default_config, pairs):
    update = {}
    for key, val in pairs:
        if key not in default_config or val is None:
            continue
        val = _coerce(default_config[key], val)
        if val is not None:
            update[key] = val
    return update


def _load_config_from_file(default_config, filename):
    import yaml

    if not os.path.exists(filename):
        return {}
    with open(filename) as f:
        data = yaml.safe_load(f)
    if not isinstance(data, dict):
        return {}
    return _select(default_config, _flatten(data))


def _env_keys(env_var):
    """
    Configuration keys an environment variable may stand for

    >>> sorted(_env_keys("SHOCKCAP_SCHEME_WENO_EPS"))
    ['scheme.weno.eps', 'scheme.weno_eps']
    """
    parts = env_var[len(_ENV_VAR_PREFIX) + 1 :].lower().split("_")
    for seps in itertools.product(".", *[(".", "_")] * (len(parts) - 2)):
        yield parts[0] + "".join(s + p for s, p in zip(seps, parts[1:]))


def _load_config_from_environ(default_config, environ=None):
    environ = os.environ if environ is None else environ
    pairs = []
    for env_var, val in environ.items():
        if not env_var.startswith(_ENV_VAR_PREFIX + "_"):
            continue
        pairs.extend((key, val) for key in _env_keys(env_var) if key in default_config)
    return _select(default_config, pairs)


CONFIG = Config()
CONFIG.update(_CONFIG)
CONFIG.update(_load_config_from_file(_CONFIG, _CONF_FILE_MYDIR))
if _CONF_FILE_WORKDIR != _CONF_FILE_MYDIR:
    CONFIG.update(_load_config_from_file(_CONFIG, _CONF_FILE_WORKDIR))
CONFIG.update(_load_config_from_environ(_CONFIG))

if __name__ == "__main__":
    import doctest

    doctest.testmod()
