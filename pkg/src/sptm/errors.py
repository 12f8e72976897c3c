"""Exception hierarchy shared by every sptm module."""


class SPTMError(Exception):
    """Base class for all errors raised by this package."""


class MachineSyntaxError(SPTMError, ValueError):
    """A machine description could not be tokenized or parsed."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", column {column}"
            where += ": "
        super().__init__(where + message)


class MachineValidationError(SPTMError, ValueError):
    """The machine parsed but violates a structural invariant."""


class ConflictingRulesError(MachineValidationError):
    pass


class UnknownStateError(MachineValidationError):
    pass


class MissingStateError(MachineValidationError):
    pass


class IncompleteMachineError(SPTMError, RuntimeError):
    """A reachable domain point has no applicable rule."""


class NotDeterministicError(SPTMError, ValueError):
    pass


class PriorError(SPTMError, ValueError):
    pass


class NonPrefixFreeError(PriorError):
    def __init__(self, shorter, longer):
        self.pair = (shorter, longer)
        super().__init__(f"support is not prefix-free: {shorter!r} is a prefix of {longer!r}")


class OutOfSupportError(PriorError, KeyError):
    def __str__(self):
        return self.args[0] if self.args else "string not in prior support"


class NoHaltingMassError(SPTMError):
    pass


class NoPosteriorSupportError(SPTMError):
    def __init__(self, y):
        self.y = y
        super().__init__(f"no posterior support: pi(out={y!r}) = 0")


class ZeroPosteriorError(SPTMError):
    pass
