class ConfigurationError(Exception):
    """A configuration parsing or consistency error."""
    pass


class InputFormatError(Exception):
    """A contents, query or configuration file syntax error."""
    pass
