import attrs
from enum import Enum


class Outcome(Enum):
    DELIVERED = "delivered"
    ERASED = "erased"
    BIT = "bit"


class Route(Enum):
    A = "A"
    B = "B"


# Integer codes used by the vectorized kernels and the trajectory CSV.
ERASED_CODE = -1
DELIVERED_CODE = 2
NO_ROUTE, ROUTE_A_CODE, ROUTE_B_CODE = 0, 1, 2
GATE_UNDEFINED, GATE_CLOSED, GATE_OPEN = -1, 0, 1


@attrs.frozen
class PortOutcome:
    """The output symbol of one channel use.

    Quantum-track uses yield `DELIVERED` or `ERASED` and never carry a bit;
    classical-track uses yield `BIT` (with its value) or `ERASED`.
    """

    variant: Outcome = attrs.field(validator=attrs.validators.instance_of(Outcome))
    bit: int | None = attrs.field(default=None)

    @bit.validator
    def check_bit(self, attribute, value):
        if self.variant is Outcome.BIT:
            if value not in (0, 1):
                raise ValueError(f"Bit outcome must carry 0 or 1, got {value!r}.")
        elif value is not None:
            raise ValueError(f"{self.variant.name} outcome cannot carry a bit value.")

    @classmethod
    def delivered(cls) -> "PortOutcome":
        return cls(Outcome.DELIVERED)

    @classmethod
    def erased(cls) -> "PortOutcome":
        return cls(Outcome.ERASED)

    @classmethod
    def of_bit(cls, bit: int) -> "PortOutcome":
        return cls(Outcome.BIT, int(bit))

    @classmethod
    def from_code(cls, code: int) -> "PortOutcome":
        if code == ERASED_CODE:
            return cls.erased()
        if code == DELIVERED_CODE:
            return cls.delivered()
        return cls.of_bit(code)

    @property
    def is_erased(self) -> bool:
        return self.variant is Outcome.ERASED

    @property
    def code(self) -> int:
        if self.variant is Outcome.ERASED:
            return ERASED_CODE
        if self.variant is Outcome.DELIVERED:
            return DELIVERED_CODE
        return self.bit

    def __str__(self) -> str:
        return str(self.bit) if self.variant is Outcome.BIT else self.variant.value


@attrs.frozen
class StepResult:
    """Trace record of one channel use."""

    outcome: PortOutcome
    memory_after: int
    branch_taken: Route | None = None
    # None for kinds without the T gate
    gate_open: bool | None = None


def route_code(route: Route | None) -> int:
    return {None: NO_ROUTE, Route.A: ROUTE_A_CODE, Route.B: ROUTE_B_CODE}[route]


def gate_code(gate_open: bool | None) -> int:
    return GATE_UNDEFINED if gate_open is None else int(gate_open)
