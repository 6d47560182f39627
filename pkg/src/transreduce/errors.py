class ReductionError(ValueError):
    """An input violates the precondition of a construction."""


class SizeLimitError(ReductionError):
    """A construction would exceed a configured size cap."""


class ParseError(ValueError):
    def __init__(self, path, line_no, line, expected):
        self.path = path
        self.line_no = line_no
        self.line = line
        self.expected = expected
        super().__init__(f"{path}:{line_no}: cannot parse {line!r}; expected {expected}")
