"""Exception types raised across the toolkit.

Everything derives from :class:`EvalError` (itself a ``ValueError``), so callers
that only care about "bad input" can catch one class.
"""


class EvalError(ValueError):
    """Base class for all toolkit errors."""


class ParseError(EvalError):
    """Input file problem tied to a 1-based line number."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class EmptyInput(ParseError):
    pass


class MalformedLine(ParseError):
    pass


class MalformedRecord(ParseError):
    pass


class NonFiniteScore(ParseError):
    pass


class NonFiniteComponent(ParseError):
    pass


class DuplicateTrial(ParseError):
    def __init__(self, model_id, utt_id, line=None):
        self.ids = (model_id, utt_id)
        super().__init__(f"duplicate trial ({model_id}, {utt_id})", line)


class DimensionMismatch(ParseError):
    pass


class EmptyReference(EvalError):
    def __init__(self, utt_id):
        self.utt_id = utt_id
        super().__init__(f"empty reference for utterance {utt_id!r}")


# manifest
class MissingField(EvalError):
    def __init__(self, key):
        self.key = key
        super().__init__(f"missing manifest field {key!r}")


class UnknownTeam(EvalError):
    def __init__(self, team_id, where=""):
        self.team_id = team_id
        super().__init__(f"unknown team {team_id!r}" + (f" in {where}" if where else ""))


class PathNotDeclared(EvalError):
    def __init__(self, key):
        self.key = key
        super().__init__(f"file key {key!r} is referenced but not declared under 'files'")


class FileMissing(EvalError):
    pass


# metrics
class EmptyClass(EvalError):
    def __init__(self, which):
        self.which = which
        super().__init__(f"empty score set: {which}")


class EmptySet(EvalError):
    pass


class ZeroNormVector(EvalError):
    pass


class InvalidCostModel(EvalError):
    pass


class DegenerateNormalizer(EvalError):
    pass


class MissingClass(EvalError):
    def __init__(self, label):
        self.label = label
        super().__init__(f"no trials with label {label!r}")


class EmptyCorpus(EvalError):
    pass


class ConstantInput(EvalError):
    def __init__(self, which):
        self.which = which
        super().__init__(f"constant input vector: {which}")


class LengthMismatch(EvalError):
    pass


class TooFewSamples(EvalError):
    pass


class RankDeficient(EvalError):
    pass


class InvalidDf(EvalError):
    pass


class ConvergenceError(EvalError):
    pass


# campaign / oracle
class NoTeams(EvalError):
    pass


class EmptyTable(EvalError):
    pass


class UnknownLanguageCode(EvalError):
    def __init__(self, code):
        self.code = code
        super().__init__(f"unknown language code {code!r}")


class InvalidSpec(EvalError):
    pass


class InputTooLong(EvalError):
    pass


class InvalidParams(EvalError):
    pass


class OutOfRange(EvalError):
    pass


class IoFailure(EvalError):
    pass
