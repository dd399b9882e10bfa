"""Exception types raised across the package."""


class DecodingError(Exception):
    """Base class for all errors raised by stochdec."""


class NotAFunction(DecodingError):
    """A satisfaction set whose induced mapping for one edge role is multi-valued."""

    def __init__(self, edge_role, witness, values=()):
        self.edge_role = edge_role
        self.witness = tuple(witness)
        self.values = tuple(values)
        super().__init__(
            f"mapping for role {edge_role} is not single-valued: "
            f"{self.witness} -> {sorted(self.values)}"
        )


class GraphError(DecodingError):
    """Structural problem in a constraint graph or its text description."""


class DegenerateMass(DecodingError):
    """A normalizer underflowed to zero."""


class BetaOutOfRange(DecodingError, ValueError):
    pass


class CodebookTooLarge(DecodingError):
    pass


class EmptyHistogram(DecodingError):
    pass


class IncompletePacket(DecodingError):
    pass


class UncoveredCycle(DecodingError):
    """The graph has a cycle that no supernode interrupts."""

    def __init__(self, cycle):
        self.cycle = list(cycle)
        super().__init__(f"cycle without a supernode edge: edges {self.cycle}")


class LengthMismatch(DecodingError, ValueError):
    pass


class ConfigInvalid(DecodingError, ValueError):
    pass
