"""Exception hierarchy. ``code`` is the stable name reported by the CLI."""


class RainbowError(Exception):
    code = "rainbow-error"


class DimensionMismatch(RainbowError, ValueError):
    code = "dimension-mismatch"


class ColorIdOutOfRange(RainbowError, ValueError):
    code = "color-id-out-of-range"

    def __init__(self, row: int, col: int, value, s: int):
        super().__init__(f"color id {value!r} at ({row},{col}) is outside [0, {s})")
        self.row, self.col, self.value = row, col, value


class SizeMismatch(RainbowError, ValueError):
    code = "size-mismatch"


class InvalidMatching(RainbowError, ValueError):
    code = "invalid-matching"


class UndefinedMu(RainbowError, ValueError):
    code = "undefined-mu"


class DivisibilityViolation(RainbowError, ValueError):
    code = "divisibility-violation"


class OutOfRange(RainbowError, ValueError):
    code = "out-of-range"


class ColoringParseError(RainbowError, ValueError):
    code = "parse-error"

    def __init__(self, message: str, line: int, column: int | None = None):
        where = f"line {line}" if column is None else f"line {line}, column {column}"
        super().__init__(f"{where}: {message}")
        self.line, self.column = line, column


class BudgetExceeded(RainbowError, RuntimeError):
    code = "budget-exceeded"

    def __init__(self, nodes_visited: int, message: str | None = None):
        super().__init__(message or f"search budget exhausted after {nodes_visited} nodes")
        self.nodes_visited = nodes_visited
