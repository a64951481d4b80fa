"""Exception hierarchy shared by all modules."""

from __future__ import annotations


class CliffmatError(Exception):
    """Base class for every error raised by this package."""


class DimensionMismatch(CliffmatError):
    pass


class FieldMismatch(CliffmatError):
    pass


class Singular(CliffmatError):
    def __init__(self, rank: int, n: int):
        super().__init__(f"matrix of order {n} is singular (rank {rank})")
        self.rank = rank
        self.n = n


class SizeCapExceeded(CliffmatError):
    def __init__(self, max_size: int):
        super().__init__(f"semigroup has more than {max_size} elements")
        self.max_size = max_size


class NotInSubgroup(CliffmatError):
    def __init__(self, element: int, index: int):
        super().__init__(f"element {element} has index {index} > 1 and lies in no subgroup")
        self.element = element
        self.index = index


class NotIdempotent(CliffmatError):
    pass


class NotClifford(CliffmatError):
    def __init__(self, verdict, message: str = "semigroup is not Clifford"):
        super().__init__(message)
        self.verdict = verdict


class BlockLeakage(CliffmatError):
    """An off-diagonal block of a conjugated element is nonzero."""

    def __init__(self, element: int, position: tuple[int, int]):
        super().__init__(f"element {element} has a nonzero off-diagonal entry at {position}")
        self.element = element
        self.position = position


class NotZeroFullranked(CliffmatError):
    def __init__(self, element: int, rank: int, n: int):
        super().__init__(f"element {element} has rank {rank}, strictly between 0 and {n}")
        self.element = element
        self.rank = rank
        self.n = n


class NotAGroup(CliffmatError):
    def __init__(self, reason: str, element: int | None = None):
        super().__init__(reason)
        self.element = element


class CertificateFailure(CliffmatError):
    def __init__(self, check: str, witness, certificate=None):
        super().__init__(f"subdirect certificate check {check!r} failed, witness {witness}")
        self.check = check
        self.witness = witness
        self.certificate = certificate


class SingularSeed(CliffmatError):
    pass


class SweepTooLarge(CliffmatError):
    pass


class ParseError(CliffmatError):
    def __init__(self, position: str, message: str):
        super().__init__(f"{position}: {message}")
        self.position = position
        self.message = message


class InconsistencyError(CliffmatError):
    """Two independent computations of the same property disagree."""
