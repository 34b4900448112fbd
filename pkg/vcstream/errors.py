"""
Exception hierarchy for vcstream.

Every error carries a short user-facing message plus optional technical
details, so the CLI can print the first and log the second.
"""

from typing import Optional


class VcStreamError(Exception):
    """Base exception for all vcstream failures"""

    exit_code = 1

    def __init__(self, user_message: str, technical_details: str = ""):
        self.user_message = user_message
        self.technical_details = technical_details
        super().__init__(user_message)


class ConfigError(VcStreamError):
    """Invalid configuration values"""


class SelfLoop(VcStreamError):
    """An edge was requested with identical endpoints"""

    exit_code = 3


class InvalidStream(VcStreamError):
    """Stream deletes an absent edge, inserts a present one, or names an unknown vertex"""

    exit_code = 3


class ParseError(VcStreamError):
    """Malformed stream file"""

    exit_code = 2

    def __init__(self, user_message: str, line_number: int, technical_details: str = ""):
        self.line_number = line_number
        super().__init__(f"line {line_number}: {user_message}", technical_details)


class PromiseViolation(VcStreamError):
    """The matching grew beyond k while the stream promised a cover of size k"""

    exit_code = 4

    def __init__(self, at: int, technical_details: str = ""):
        self.at = at
        super().__init__(f"promise violated at update {at}", technical_details)


class SketchFail(VcStreamError):
    """A linear sketch could not answer a query (sampling or recovery)"""

    exit_code = 5


class RecoveryFail(SketchFail):
    """Peeling stalled before the sparse-recovery grid emptied"""


class RematchMiss(SketchFail):
    """High-degree rematch drew no exposed neighbor"""

    def __init__(self, vertex: int, samples: int, technical_details: str = ""):
        self.vertex = vertex
        self.samples = samples
        super().__init__(
            f"no exposed neighbor among {samples} samples for vertex {vertex}",
            technical_details,
        )


class EstimateFail(SketchFail):
    """Distinct-edge estimator ran out of levels"""


class BudgetExceeded(VcStreamError):
    """Input too large for an exhaustive oracle"""

    def __init__(self, user_message: str, limit: Optional[int] = None):
        self.limit = limit
        super().__init__(user_message)
