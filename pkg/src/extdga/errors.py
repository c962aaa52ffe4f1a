"""Exception hierarchy.

Two families matter to callers: :class:`InputError` (malformed or
inconsistent input, CLI exit code 1) and :class:`MathError` (a
mathematical precondition of the requested computation fails, CLI exit
code 2).  Negative answers such as an unsolvable obstruction search are
results, never exceptions.
"""


class ExtDGAError(Exception):
    pass


class InputError(ExtDGAError):
    pass


class ParseError(InputError):
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


class InvalidPresentation(InputError):
    pass


class MathError(ExtDGAError):
    pass


class NonConfluentRelations(MathError):
    pass


class MixedAlgebras(MathError):
    pass


class NonFieldCoefficients(MathError):
    pass


class DegreeOverflow(MathError):
    pass


class NotSupported(MathError):
    pass


class InvalidDGA(MathError):
    pass


class NonUnital(InvalidDGA):
    pass


class NonAssociativeTable(InvalidDGA):
    pass


class RepresentativeFailure(MathError):
    pass


class NotABasis(MathError):
    pass


class AssociativityFailure(MathError):
    pass


class NonFreePieces(MathError):
    pass


class MissingGeneratorAction(MathError):
    pass


class CapTooSmall(MathError):
    pass


class RingMismatch(MathError):
    pass


class NotCertified(MathError):
    pass
