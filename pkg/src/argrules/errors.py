"""Exception hierarchy; CLI exit codes hang off these classes."""


class ArgRulesError(Exception):
    exit_code = 1


class ConfigError(ArgRulesError, ValueError):
    """Bad parameters or an inconsistent configuration."""

    exit_code = 2


class DataIOError(ArgRulesError, OSError):
    exit_code = 3


class SchemaError(ArgRulesError, ValueError):
    """Data does not match the expected table/model layout."""

    exit_code = 4


class InvariantError(ArgRulesError, RuntimeError):
    """An internal structural guarantee was broken (e.g. an attack cycle)."""

    exit_code = 5
