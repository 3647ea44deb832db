"""Error type shared by all workbench modules.

Every failure that a caller may want to dispatch on carries a short
upper-case code.  Report-valued operations (validation, evenness) do not
raise; they return a report object listing the violated invariants.
"""


class WorkbenchError(Exception):
    def __init__(self, code, message, pointer=None):
        self.code = code
        self.pointer = pointer
        super().__init__(f"{code}: {message}" if pointer is None
                         else f"{code} at {pointer}: {message}")


# Codes that signal bad mathematical input rather than an internal bug.
# The CLI maps these to exit status 2 (validation failure).
VALIDATION_CODES = frozenset({
    "INVALID_CURVE",
    "INVALID_DOMAIN",
    "EMPTY_DOMAIN",
    "NOT_EVEN_PRIMITIVE",
    "NOT_TRIVALENT",
    "NOT_BOUNDARY_CONFIG",
    "NON_GENERIC_CONFIG",
    "DELTA_TOO_LARGE",
    "NON_FINITE_SIGMA",
    "DEGENERATE_VERTEX",
    "NO_BASIS",
    "SPLIT_DEGENERATE",
    "NOT_BISSECTRICE",
})
