"""Exception types shared across the library."""


class StructuralError(Exception):
    """Input data is malformed (bad tables, dangling ids, unparseable file)."""


class InternalInconsistencyError(Exception):
    """A derived quantity failed a check that valid input makes impossible."""


class NotSemistrictError(Exception):
    """Strictification was requested for a 2-group that is not semistrict."""

    def __init__(self, witness):
        self.witness = witness
        super().__init__(f"not semistrict: {witness}")


class ConnectednessAnalogError(Exception):
    """A conclusion that base connectedness would force fails on this input.

    ``lemma`` names which conclusion broke, ``witness`` is the offending tuple.
    """

    def __init__(self, lemma, witness):
        self.lemma = lemma
        self.witness = witness
        super().__init__(f"{lemma}: fails at {witness}")


class FillerError(Exception):
    """A horn that should have a unique filler has none or several."""


class EnumerationBoundExceeded(Exception):
    """A bounded search (coset enumeration, reduction search) hit its cap."""
