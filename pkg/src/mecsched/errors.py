"""Exception types shared across the package."""


class ConfigError(ValueError):
    """A configuration file, override, or run setup is invalid."""


class ContractViolation(RuntimeError):
    """An operation was invoked outside its documented preconditions,
    e.g. scheduling on a busy processor or consuming a task the queue
    does not hold."""


class MetricUndefined(ValueError):
    """A metric has no defined value for this run, e.g. data per task
    when no task was ever scheduled."""
