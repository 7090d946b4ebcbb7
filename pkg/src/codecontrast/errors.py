"""Exception hierarchy shared across the toolkit."""


class CodeContrastError(Exception):
    pass


class LexError(CodeContrastError):
    def __init__(self, offset: int, message: str = "illegal character"):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset
        self.message = message


class ParseError(CodeContrastError):
    def __init__(self, offset: int, expected: str, found: str = ""):
        msg = f"expected {expected} at offset {offset}"
        if found:
            msg += f", found {found!r}"
        super().__init__(msg)
        self.offset = offset
        self.expected = expected
        self.found = found


class UnsupportedSyntax(CodeContrastError):
    def __init__(self, construct: str, offset: int = -1):
        super().__init__(f"unsupported syntax: {construct}" + (f" at offset {offset}" if offset >= 0 else ""))
        self.construct = construct
        self.offset = offset


class TransformError(CodeContrastError):
    def __init__(self, transform_id: str, reason: str):
        super().__init__(f"{transform_id}: {reason}")
        self.transform_id = transform_id
        self.reason = reason


class VocabError(CodeContrastError):
    pass


class DecodeError(CodeContrastError):
    pass


class EmptySequence(CodeContrastError):
    pass


class DimensionMismatch(CodeContrastError):
    pass


class ConfigError(CodeContrastError):
    pass


class DataError(CodeContrastError):
    pass


class DegenerateLabels(CodeContrastError):
    pass


class ZeroNorm(CodeContrastError):
    pass
