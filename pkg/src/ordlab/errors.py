"""Exception hierarchy shared by every ordlab module."""

from __future__ import annotations


class OrdlabError(Exception):
    """Base class for all library errors."""


class OrdinalSyntaxError(OrdlabError, ValueError):
    pass


class OrdinalOverflowError(OrdlabError, ArithmeticError):
    """A natural number exceeded the configured guard."""


class NotALimitError(OrdlabError, ValueError):
    pass


class ScanLimitError(OrdlabError, RuntimeError):
    """A fundamental-sequence scan ran past its step limit."""


class WalkDepthError(OrdlabError, RuntimeError):
    pass


class MemoLimitError(OrdlabError, RuntimeError):
    pass


class NotFoundWithinBound(OrdlabError, LookupError):
    def __init__(self, alpha, beta, bound):
        super().__init__(f"no xi <= {bound} puts {alpha} in F_xi({beta})")
        self.alpha = alpha
        self.beta = beta
        self.bound = bound


class Unsupported(OrdlabError, NotImplementedError):
    pass


class IncompleteData(OrdlabError, LookupError):
    """A tree fragment lacks nodes or chains that a query needs."""


class Undecided(OrdlabError, RuntimeError):
    """An omega-set decision exceeded the symbolic budget."""


class ConfigError(OrdlabError, ValueError):
    pass
