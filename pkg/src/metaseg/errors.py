"""Exception hierarchy.

Everything raised on bad *data* (corpus files, grammar files, patterns,
segmentation failures) derives from :class:`ValidationError`; the CLI maps
those to exit status 1.
"""


class MetasegError(Exception):
    pass


class ValidationError(MetasegError, ValueError):
    pass


class UnknownLetter(ValidationError):
    def __init__(self, letter):
        super().__init__(f"unknown action letter {letter!r}")
        self.letter = letter


class PatternSyntaxError(ValidationError):
    def __init__(self, source, offset, reason, line=None):
        where = f"offset {offset}" if line is None else f"line {line}, offset {offset}"
        super().__init__(f"{reason} at {where} in pattern {source!r}")
        self.source = source
        self.offset = offset
        self.reason = reason
        self.line = line


class DuplicateName(ValidationError):
    pass


class EmptyGrammar(ValidationError):
    pass


class SegmentationIncomplete(ValidationError):
    def __init__(self, index, trajectory_index=None):
        msg = f"no meta-action covers position {index}"
        if trajectory_index is not None:
            msg = f"trajectory {trajectory_index}: {msg}"
        super().__init__(msg)
        self.index = index
        self.trajectory_index = trajectory_index


class CoverageMismatch(ValidationError):
    pass


class DimensionMismatch(ValidationError):
    pass


class NonPositiveTemperature(ValidationError):
    pass


class EmptyLogits(ValidationError):
    pass


class TargetOutOfRange(ValidationError):
    pass


class MissingPositive(ValidationError):
    pass


class EmptyCorpus(ValidationError):
    pass


class EmptyConditions(ValidationError):
    pass


class DegenerateLengths(ValidationError):
    pass


class EmptyPath(ValidationError):
    pass


class NonPositiveThreshold(ValidationError):
    pass


class GoldOutOfRange(ValidationError):
    pass


class SchemaError(ValidationError):
    def __init__(self, field, episode_index=None, reason="invalid value"):
        where = "" if episode_index is None else f"episode {episode_index}: "
        super().__init__(f"{where}field {field!r}: {reason}")
        self.field = field
        self.episode_index = episode_index
        self.reason = reason


class InvariantViolation(ValidationError):
    def __init__(self, reason, episode_index=None):
        where = "" if episode_index is None else f"episode {episode_index}: "
        super().__init__(f"{where}{reason}")
        self.reason = reason
        self.episode_index = episode_index


class CorpusIOError(ValidationError, OSError):
    pass
