"""Errors raised by the election computations."""


class ElectionError(ValueError):
    """Base class for every domain error in the voting package."""


class BltFormatError(ElectionError):
    """The ballot file does not follow the BLT grammar."""

    def __init__(self, message: str, line_no: int | None = None):
        self.line_no = line_no
        if line_no is not None:
            message = f"line {line_no}: {message}"
        super().__init__(message)


class ExplicitTieError(BltFormatError):
    """A ballot line uses ``=`` to rank candidates equally."""


class InvalidElectionError(ElectionError):
    """A profile, ballot or election violates its invariants."""


class ProfileExhaustedError(ElectionError):
    """Every ballot is exhausted before the requested seats are filled."""


class CommitteeSearchError(ElectionError):
    """Exhaustive committee search requested above the enumeration limit."""


class MissingPartyError(ElectionError, KeyError):
    """A winner has no party entry."""

    def __str__(self) -> str:
        return str(self.args[0]) if self.args else ""


class SamplerError(ElectionError):
    """A culture model was configured with unsupported parameters."""


class ConstructionError(ElectionError):
    """The disjoint-winner construction is infeasible for the inputs."""
