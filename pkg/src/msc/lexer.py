"""Tokenizer and cursor shared by the stack language and variety files."""

from dataclasses import dataclass
import re

from .errors import StackSyntaxError

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r]+)
  | (?P<nl>\n)
  | (?P<comment>\#[^\n]*)
  | (?P<int>\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>->|[-+*/^()\[\]{},;:=])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str  # "int", "ident", "op" or "eof"
    text: str
    line: int
    col: int

    @property
    def value(self):
        return int(self.text) if self.kind == "int" else self.text


def tokenize(text, source=None):
    tokens = []
    line, line_start, pos = 1, 0, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise StackSyntaxError(
                f"unexpected character {text[pos]!r}", line, pos - line_start + 1, source
            )
        kind = m.lastgroup
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind not in ("ws", "comment"):
            tokens.append(Token(kind, m.group(), line, m.start() - line_start + 1))
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


class Cursor:
    """Recursive-descent helper over a token list."""

    def __init__(self, tokens, source=None):
        self.tokens = tokens
        self.i = 0
        self.source = source

    @property
    def tok(self):
        return self.tokens[self.i]

    def peek(self, offset=1):
        j = min(self.i + offset, len(self.tokens) - 1)
        return self.tokens[j]

    def at(self, text, kind=None):
        t = self.tok
        return t.text == text and t.kind != "eof" and (kind is None or t.kind == kind)

    def at_eof(self):
        return self.tok.kind == "eof"

    def advance(self):
        t = self.tok
        if t.kind != "eof":
            self.i += 1
        return t

    def accept(self, text):
        if self.at(text):
            return self.advance()
        return None

    def expect(self, text):
        if not self.at(text):
            self.fail(f"expected {text!r}, found {self.describe(self.tok)}")
        return self.advance()

    def expect_kind(self, kind, what=None):
        if self.tok.kind != kind:
            self.fail(f"expected {what or kind}, found {self.describe(self.tok)}")
        return self.advance()

    def expect_int(self, signed=False):
        neg = bool(signed and self.accept("-"))
        value = self.expect_kind("int", "an integer").value
        return -value if neg else value

    @staticmethod
    def describe(t):
        return "end of input" if t.kind == "eof" else repr(t.text)

    def fail(self, message, token=None, cls=StackSyntaxError):
        t = token or self.tok
        raise cls(message, t.line, t.col, self.source)
