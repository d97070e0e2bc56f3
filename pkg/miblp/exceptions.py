"""Exceptions and warnings for the bilevel solver."""

__all__ = ["MiblpException", "InvalidInstanceException", "InvalidParameterException",
           "FileFormatException", "UnboundedException", "IterationLimitException",
           "SubsolverLimitException", "EnumerationLimitException",
           "MiblpWarning", "IgnoredDataWarning", "VerificationWarning"]

class MiblpException(Exception):
    """Base class for custom exceptions."""
    pass

class InvalidInstanceException(MiblpException):
    """This is raised when instance data are inconsistent or break a standing assumption."""
    pass

class InvalidParameterException(MiblpException):
    """This should be triggered when a function argument or solver parameter is invalid."""
    pass

class FileFormatException(MiblpException):
    """This tells that an input file couldn't be parsed.

    Attributes:
        line(int): 1-based line number of the offending record (None if unknown)
    """
    def __init__(self, message:str, line:int = None):
        self.line = line
        if line != None:
            message = "line {:d}: {:s}".format(line, message)
        super().__init__(message)

class UnboundedException(MiblpException):
    """This is raised when a relaxation that must be bounded turns out unbounded."""
    pass

class IterationLimitException(MiblpException):
    """This is used to notify that the simplex hard iteration cap was exceeded."""
    pass

class SubsolverLimitException(MiblpException):
    """This is raised when the MILP subsolver stops on a limit where a proven answer is needed."""
    pass

class EnumerationLimitException(MiblpException):
    """This is raised when brute-force enumeration would exceed its caps."""
    pass

class MiblpWarning(Warning):
    """Base class for custom warnings."""
    pass

class IgnoredDataWarning(MiblpWarning):
    """This is used to mention that part of an input file was ignored or reinterpreted."""
    pass

class VerificationWarning(MiblpWarning):
    """This is used to mention that a returned incumbent failed its final re-check."""
    pass
