"""Exception hierarchy shared by all modules."""


class TermGraphError(Exception):
    """Base class for every error raised by this package."""


class InvalidGraph(TermGraphError):
    pass


class CyclicGraph(InvalidGraph):
    pass


class ArityMismatch(InvalidGraph):
    pass


class VarWithSuccessors(InvalidGraph):
    pass


class UnreachableNode(InvalidGraph):
    pass


class DanglingSuccessor(InvalidGraph):
    pass


class DuplicateNode(InvalidGraph):
    pass


class UnknownNode(TermGraphError, KeyError):
    def __str__(self):
        return Exception.__str__(self)


class NotATermGraph(InvalidGraph):
    pass


class VariableNode(TermGraphError):
    pass


class NonGroundGraph(TermGraphError):
    pass


# precedences

class PrecedenceError(TermGraphError):
    pass


class SizeConditionViolated(PrecedenceError):
    pass


class UnknownSymbol(PrecedenceError):
    pass


class UnknownTop(PrecedenceError):
    pass


class MalformedTop(PrecedenceError):
    pass


class UnvalidatedPrecedence(PrecedenceError):
    pass


# embedding

class TooLarge(TermGraphError):
    pass


# rules and rewriting

class InvalidRule(TermGraphError):
    pass


class VariableLhsRoot(InvalidRule):
    pass


class FreeRhsVariable(InvalidRule):
    pass


class DuplicateVariableLabel(InvalidRule):
    pass


class CyclicResult(TermGraphError):
    pass


# orders

class InletsNotParallel(TermGraphError):
    pass


# text formats

class ParseError(TermGraphError):
    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"{line}:{column}: {message}"
        super().__init__(message)


class GraphSyntaxError(ParseError):
    pass


class DuplicateName(ParseError):
    pass


class ArityConflict(ParseError):
    pass
