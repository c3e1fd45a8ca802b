"""Error types shared across the library and the CLI exit-code mapping."""


class ConfigError(ValueError):
    """A run configuration is malformed or violates a field constraint."""


class RegimeError(RuntimeError):
    """A physics-validity flag is violated (model outside its regime)."""


class NumericalError(RuntimeError):
    """A numerical method failed to meet its accuracy contract."""
