"""Exception hierarchy shared by all modules."""


class CyclicTriError(ValueError):
    """Base class for every error raised by this package."""


class WrongArity(CyclicTriError):
    pass


class OutOfRange(CyclicTriError):
    pass


class NotInternal(CyclicTriError):
    """The tuple lies in a facet of the polytope (a cyclic gap is < 2)."""


class ParamMismatch(CyclicTriError):
    pass


class IntertwiningPair(CyclicTriError):
    def __init__(self, first, second):
        self.pair = (first, second)
        super().__init__(f"intertwining pair {first} ≀ {second}")


class WrongCardinality(CyclicTriError):
    def __init__(self, found: int, expected: int):
        self.found = found
        self.expected = expected
        super().__init__(f"wrong cardinality: found {found} arcs, expected {expected}")


class ReconstructionFailure(CyclicTriError):
    pass


class ArcInTriangulation(CyclicTriError):
    pass


class ArcNotInTriangulation(CyclicTriError):
    pass


class ArrowNotInQuiver(CyclicTriError):
    pass


class NotMutable(CyclicTriError):
    def __init__(self, arc, path):
        self.arc = arc
        self.path = path
        super().__init__(f"{arc} is in the middle of the retrograde path {path}")


class InternalConsistencyError(AssertionError):
    """An invariant guaranteed by the theory failed; indicates a bug."""


class InvalidTildeVertex(CyclicTriError):
    pass


class NotACut(CyclicTriError):
    def __init__(self, cycle, hits):
        self.cycle = cycle
        self.hits = hits
        super().__init__(f"cycle {cycle} contains {hits} cut arrows (expected exactly 1)")


class NotASlice(CyclicTriError):
    pass


class CyclicQuiver(CyclicTriError):
    pass


class NotSourceOrSink(CyclicTriError):
    pass


class NotACutQuiver(CyclicTriError):
    pass


class BudgetExceeded(CyclicTriError):
    pass


class CounterexampleFound(AssertionError):
    def __init__(self, message, witness=None):
        self.witness = witness
        super().__init__(message)
