from enum import Enum, IntEnum


class Command(str, Enum):
    """Enumeration of the subcommands of the command-line tool."""

    GEN = "gen"
    LINEALITY = "lineality"
    DECOMPOSE = "decompose"
    VERIFY = "verify"
    SELFTEST = "selftest"


class ExitCode(IntEnum):
    """Process exit codes.

    HYPOTHESIS_FAILS and TIGHTNESS_WITNESS are regular outcomes of
    ``verify``; INVARIANT_BREACH always means a bug.
    """

    OK = 0
    HYPOTHESIS_FAILS = 2
    TIGHTNESS_WITNESS = 3
    INPUT_ERROR = 4
    INVARIANT_BREACH = 5
