"""Exception hierarchy shared by all modules."""


class MsolwordsError(Exception):
    pass


class ParseError(MsolwordsError):
    pass


class UnboundVariable(MsolwordsError):
    pass


class MissingIndeterminate(MsolwordsError):
    pass


class UnknownLetter(MsolwordsError):
    pass


class FragmentError(MsolwordsError):
    """A formula falls outside the fragment an operation requires.

    ``offending`` holds the smallest subformula found to violate it.
    """

    def __init__(self, message, offending=None):
        super().__init__(message)
        self.offending = offending


class NotGroundError(MsolwordsError):
    pass


class FieldRequired(MsolwordsError):
    pass


class RankNotSaturated(MsolwordsError):
    pass


class SingularSystem(MsolwordsError):
    pass
