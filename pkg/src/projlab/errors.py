"""Exception hierarchy shared by every projlab module."""

from __future__ import annotations


class ProjlabError(ValueError):
    pass


class LayoutError(ProjlabError):
    """Unknown register, duplicate name, or dimension mismatch."""


class CapacityError(ProjlabError):
    """Requested object exceeds the dense-simulation size cap."""


class InvalidStateError(ProjlabError):
    pass


class InvalidProjectorError(ProjlabError):
    pass


class InvalidUnitaryError(ProjlabError):
    pass


class InvalidGeneratorError(ProjlabError):
    pass


class OrthogonalityError(ProjlabError):
    pass


class InvalidResolutionError(ProjlabError):
    pass


class UnsupportedGroupError(ProjlabError):
    pass


class GroupError(ProjlabError):
    """Permutation set is not a group, or a representation is not a homomorphism."""


class ParityError(ProjlabError):
    """Control encoding does not map odd permutations to odd-weight basis states."""


class ParameterError(ProjlabError):
    pass
