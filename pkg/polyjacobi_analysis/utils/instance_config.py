"""JSON instance configs for the verify, sweep and spectrum tools.

Example:

    {
        "sigma": 1,
        "gamma": [1, 1.5, 2],
        "operator": "h_sigma",
        "b": [[0, 3.0], [2, 0.5]]
    }

W_sigma instances use "operator": "w_sigma" and may also list band deviations a_n^i - omega_i as
"deviations": [[i, n, value], ...].
"""

from collections import namedtuple
import math
import numbers

import simplejson as json

from polyjacobi_analysis.utils.bounds_engine import THEOREMS
from polyjacobi_analysis.utils.operator_core import SIGMA_CAP, PolyJacobiCoefficients

CONFIG_OPERATORS = ("h_sigma", "w_sigma")

DEFAULT_THEOREMS = {
    "h_sigma": ["thm2", "cor3"],
    "w_sigma": ["thm4"],
}

CONFIG_KEYS = (
    "sigma", "gamma", "operator", "theorems", "b", "deviations", "tolerance", "edge_margin", "padding",
    "max_doublings",
)


class ConfigError(ValueError):
    pass


class InstanceConfig(namedtuple("InstanceConfig", [
        "sigma", "gammas", "operator", "theorems", "b_entries", "deviation_entries", "tolerance", "edge_margin",
        "padding", "max_doublings"])):

    __slots__ = ()

    def to_coefficients(self):
        return PolyJacobiCoefficients.from_entries(self.sigma, self.b_entries, self.deviation_entries)

    def spectrum_kwargs(self):
        """Spectrum options that were set in the config. Unset options keep the library defaults."""
        kwargs = {
            "tolerance": self.tolerance,
            "edge_margin": self.edge_margin,
            "padding": self.padding,
            "max_doublings": self.max_doublings,
        }
        return {key: value for key, value in kwargs.items() if value is not None}

    def with_overrides(self, sigma=None, gammas=None, tolerance=None):
        """Return a copy with command-line overrides applied and validated."""
        config = self
        if sigma is not None:
            config = config._replace(sigma=_check_sigma_value(sigma))
            _check_deviation_bands(config.deviation_entries, config.sigma)
        if gammas is not None:
            config = config._replace(gammas=_check_gammas(gammas))
        if tolerance is not None:
            config = config._replace(tolerance=_check_positive_number(tolerance, "tolerance"))
        return config


def _is_number(value):
    return isinstance(value, numbers.Real) and not isinstance(value, bool) and math.isfinite(value)


def _is_integer(value):
    return isinstance(value, numbers.Integral) and not isinstance(value, bool)


def _check_sigma_value(sigma):
    if not _is_integer(sigma) or not 1 <= sigma <= SIGMA_CAP:
        raise ConfigError(f"sigma: expected an integer between 1 and {SIGMA_CAP}, got {sigma!r}")
    return int(sigma)


def _check_gammas(gamma):
    gammas = gamma if isinstance(gamma, list) else [gamma]
    if not gammas:
        raise ConfigError("gamma: the list is empty")
    for value in gammas:
        if not _is_number(value) or value < 1:
            raise ConfigError(f"gamma: expected numbers >= 1, got {value!r}")
    return [float(value) for value in gammas]


def _check_positive_number(value, key):
    if not _is_number(value) or value <= 0:
        raise ConfigError(f"{key}: expected a positive number, got {value!r}")
    return value


def _check_b_entries(entries):
    if not isinstance(entries, list):
        raise ConfigError(f"b: expected a list of [index, value] pairs, got {entries!r}")
    for entry in entries:
        if not isinstance(entry, list) or len(entry) != 2 or not _is_integer(entry[0]) or not _is_number(entry[1]):
            raise ConfigError(f"b: expected [index, value] with an integer index and a finite value, got {entry!r}")
    return [tuple(entry) for entry in entries]


def _check_deviation_entries(entries):
    if not isinstance(entries, list):
        raise ConfigError(f"deviations: expected a list of [band, index, value] triples, got {entries!r}")
    for entry in entries:
        if (not isinstance(entry, list) or len(entry) != 3 or not _is_integer(entry[0]) or not _is_integer(entry[1])
                or not _is_number(entry[2])):
            raise ConfigError(
                f"deviations: expected [band, index, value] with integer band and index and a finite value, "
                f"got {entry!r}")
    return [tuple(entry) for entry in entries]


def _check_deviation_bands(entries, sigma):
    for band, n, value in entries:
        if not 1 <= band <= sigma:
            raise ConfigError(f"deviations: band {band} at index {n} is outside 1..{sigma}")


def parse_instance_config(data, source="config"):
    """Validate a parsed JSON object and return an InstanceConfig.

    Args:
        data (dict): the parsed JSON
        source (str): name used in error messages
    Return:
        InstanceConfig
    """
    if not isinstance(data, dict):
        raise ConfigError(f"{source}: expected a JSON object at the top level")

    unknown_keys = sorted(set(data) - set(CONFIG_KEYS))
    if unknown_keys:
        raise ConfigError(f"{source}: unknown key(s): {', '.join(unknown_keys)}. Expected: {', '.join(CONFIG_KEYS)}")

    if "sigma" not in data:
        raise ConfigError(f"{source}: missing required key: sigma")

    try:
        sigma = _check_sigma_value(data["sigma"])
        gammas = _check_gammas(data.get("gamma", 1))

        operator = data.get("operator", "h_sigma")
        if operator not in CONFIG_OPERATORS:
            raise ConfigError(f"operator: expected one of {', '.join(CONFIG_OPERATORS)}, got {operator!r}")

        theorems = data.get("theorems", DEFAULT_THEOREMS[operator])
        if not isinstance(theorems, list) or not theorems or any(t not in THEOREMS for t in theorems):
            raise ConfigError(f"theorems: expected a nonempty list drawn from {', '.join(THEOREMS)}, got {theorems!r}")

        b_entries = _check_b_entries(data.get("b", []))
        deviation_entries = _check_deviation_entries(data.get("deviations", []))
        _check_deviation_bands(deviation_entries, sigma)

        tolerance = data.get("tolerance")
        if tolerance is not None:
            _check_positive_number(tolerance, "tolerance")

        edge_margin = data.get("edge_margin")
        if edge_margin is not None and (not _is_number(edge_margin) or edge_margin < 0):
            raise ConfigError(f"edge_margin: expected a nonnegative number, got {edge_margin!r}")

        for key in "padding", "max_doublings":
            if data.get(key) is not None and (not _is_integer(data[key]) or data[key] < 1):
                raise ConfigError(f"{key}: expected a positive integer, got {data[key]!r}")
    except ConfigError as e:
        raise ConfigError(f"{source}: {e}")

    return InstanceConfig(
        sigma=sigma,
        gammas=gammas,
        operator=operator,
        theorems=list(theorems),
        b_entries=b_entries,
        deviation_entries=deviation_entries,
        tolerance=tolerance,
        edge_margin=edge_margin,
        padding=data.get("padding"),
        max_doublings=data.get("max_doublings"))


def load_instance_config(path):
    """Read and validate a JSON instance config. Raises ConfigError with the line and column of malformed JSON."""
    try:
        with open(path, "rt") as f:
            data = json.load(f)
    except json.JSONDecodeError as e:
        raise ConfigError(f"{path}: malformed JSON at line {e.lineno}, column {e.colno}: {e.msg}")
    except OSError as e:
        raise ConfigError(f"Unable to read {path}: {e}")

    return parse_instance_config(data, source=path)
