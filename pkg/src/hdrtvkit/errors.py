"""Exception types shared across the package."""


class DomainError(ValueError):
    """A numeric argument lies outside the documented domain of an operation."""


class ContractError(ValueError):
    """A frame (or frame pair) violates an operation's encoding/geometry contract."""


class LutParseError(ValueError):
    """A .cube file is malformed; the message carries the offending line number."""
