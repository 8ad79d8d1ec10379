class ConfigError(ValueError):
    """Raised when a scenario, workload or sweep configuration is invalid."""


class ContractViolation(ValueError):
    """Raised when an operation is called outside its precondition."""
