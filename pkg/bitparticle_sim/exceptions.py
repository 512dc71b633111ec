# Value errors
class OperandRangeError(ValueError):
    pass


class InvalidIRValue(ValueError):
    pass


class FieldOverflow(ValueError):
    pass


class InvalidParameter(ValueError):
    pass


class UnknownPreset(ValueError):
    pass


class ConfigurationError(ValueError):
    pass


class ProfileFormatError(ValueError):
    def __init__(self, message, lineno=None):
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)
        self.lineno = lineno


# Runtime errors
class SchedulingError(RuntimeError):
    pass


class AccumulatorOverflow(RuntimeError):
    pass
