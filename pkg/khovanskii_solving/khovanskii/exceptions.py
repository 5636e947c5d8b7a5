"""Errors raised by the solver, each tagged with the exit code the CLI reports."""


class KhovanskiiError(Exception):
    exit_code = 2


class InputError(KhovanskiiError):
    exit_code = 1


class PolynomialSyntaxError(InputError):

    def __init__(self, message, text="", position=0):
        super().__init__(f"{message} at position {position}")
        self.text = text
        self.position = position


class UnknownVariableError(PolynomialSyntaxError):
    pass


class FieldMismatchError(InputError):
    pass


class SystemFileError(InputError):
    pass


class SchubertConditionError(InputError):
    pass


class MathematicalFailure(KhovanskiiError):
    exit_code = 2


class DuplicateLeadingTermError(MathematicalFailure):
    pass


class NotKhovanskiiError(MathematicalFailure):

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class MembershipError(MathematicalFailure):
    pass


class RegularityError(MathematicalFailure):
    pass


class SingularSelectionError(MathematicalFailure):
    pass


class CommutationError(MathematicalFailure):
    pass


class ChartError(MathematicalFailure):
    pass


class UnsupportedFieldError(KhovanskiiError):
    exit_code = 3


class ScanSizeError(UnsupportedFieldError):
    pass
