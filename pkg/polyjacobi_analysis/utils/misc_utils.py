import math


def parse_window(window_string):
    """Parses a window string like "-20:20" and returns the 2-tuple (lo, hi) of inclusive lattice indices"""

    try:
        lo, hi = map(int, window_string.split(":"))
    except Exception as e:
        raise ValueError(f"Unable to parse window: '{window_string}': {e}")

    if lo > hi:
        raise ValueError(f"Window start {lo} is after window end {hi}: '{window_string}'")

    return lo, hi


def parse_number_list(list_string, value_type=float):
    """Parses a comma-separated string like "1,1.5,2" into a list of numbers.

    Args:
        list_string (str): the comma-separated values
        value_type (type): int or float

    Return:
        list: the parsed values, in the given order
    """

    values = []
    for token in list_string.split(","):
        token = token.strip()
        if not token:
            raise ValueError(f"Empty value in list: '{list_string}'")
        try:
            value = value_type(token)
        except ValueError:
            raise ValueError(f"Unable to parse '{token}' as {value_type.__name__} in list: '{list_string}'")
        if value_type is float and not math.isfinite(value):
            raise ValueError(f"Value '{token}' is not finite in list: '{list_string}'")
        values.append(value)

    return values


def parse_key_value(key_value, delimiter="="):
    """Splits a string like "x=3" into a 2-tuple ("x", "3")

    Args:
        key_value (str): The string containing the key and value separated by the delimiter.
        delimiter (str): Separator between the key and value. Default is "=".

    Return:
        2-tuple: (key string, value string)
    """

    key_value_list = key_value.split(delimiter)
    if len(key_value_list) != 2 or not key_value_list[0] or not key_value_list[1]:
        raise ValueError(f"Invalid arg {key_value}")

    return tuple(key_value_list)


def format_float(value):
    """17 significant digits, locale independent"""
    return "%.17g" % value


EXIT_PASS = 0
EXIT_BOUND_FAILURE = 1
EXIT_CONFIG_ERROR = 2
EXIT_NOT_CONVERGED = 3


def exit_status(statuses):
    """Process exit status for a collection of report statuses: 1 if anything failed or violated a theorem
    hypothesis, otherwise 3 if some spectrum did not converge, otherwise 0.
    """

    statuses = set(statuses)
    if statuses & {"fail", "domain_error"}:
        return EXIT_BOUND_FAILURE
    if "indeterminate" in statuses:
        return EXIT_NOT_CONVERGED
    return EXIT_PASS
