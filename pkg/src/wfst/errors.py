"""Exception hierarchy shared by all wfst modules."""


class FstError(Exception):
    """Base class for library errors."""


class RingMismatchError(FstError, ValueError):
    """Operands come from different semirings."""


class DomainError(FstError, ArithmeticError):
    """Undefined weight operation (division by zero, negative cycle, ...)."""


class OracleInapplicable(FstError):
    """The brute-force oracle cannot bound the path set of its input."""


class NonDeterminable(FstError):
    """Determinization exceeded its state budget."""

    def __init__(self, num_subsets, max_states):
        super().__init__(
            f"determinization produced {num_subsets} subsets "
            f"(limit {max_states}); input may lack the twins property"
        )
        self.num_subsets = num_subsets
        self.max_states = max_states


class CompositionError(FstError):
    """Composition refused for its operands."""


class UnsupportedError(FstError):
    """Operation not supported for this ring or topology."""


class NoPathError(FstError):
    """No successful path matches the query."""


class FstParseError(FstError, ValueError):
    def __init__(self, lineno, message):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno
