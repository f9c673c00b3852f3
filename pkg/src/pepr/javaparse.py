"""Lightweight Java parser producing statement-level nodes with line spans.

Covers the statement and expression grammar needed for bug-feature
extraction. Declarations (classes, methods, fields) are parsed
structurally; constructs outside the supported grammar degrade to
generic nodes instead of failing, so real-world files stay usable.
Only tokenization errors (unterminated strings/comments) are fatal.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .errors import ParseError

KEYWORDS = frozenset(
    """
    abstract assert boolean break byte case catch char class const continue
    default do double else enum extends final finally float for goto if
    implements import instanceof int interface long native new package
    private protected public return short static strictfp super switch
    synchronized this throw throws transient try void volatile while
    true false null
    """.split()
)

PRIMITIVES = frozenset(
    {"boolean", "byte", "char", "short", "int", "long", "float", "double", "void"}
)

MODIFIERS = frozenset(
    {
        "public", "private", "protected", "static", "final", "abstract",
        "native", "synchronized", "transient", "volatile", "strictfp",
        "default",
    }
)

LITERAL_KEYWORDS = frozenset({"true", "false", "null"})

# '>' is always lexed as a single token; the parser merges adjacent '>'s
# for shifts so that nested generic closers (e.g. Map<K, List<V>>) work.
_MULTI_OPS = [
    "<<=", "...",
    "->", "::", "++", "--", "&&", "||", "==", "!=", "<=", ">=",
    "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "<<",
]
_SINGLE_OPS = set("+-*/%=<>!~&|^?:.,;()[]{}@")

_NUMBER_RE = re.compile(
    r"""
      0[xX][0-9a-fA-F_]+[lL]?
    | 0[bB][01_]+[lL]?
    | (?:\d[\d_]*)?\.\d[\d_]*(?:[eE][+-]?\d+)?[fFdD]?
    | \d[\d_]*\.(?:\d[\d_]*)?(?:[eE][+-]?\d+)?[fFdD]?
    | \d[\d_]*(?:[eE][+-]?\d+)?[fFdDlL]?
    """,
    re.VERBOSE,
)
_IDENT_RE = re.compile(r"[A-Za-z_$][A-Za-z0-9_$]*")


@dataclass(frozen=True)
class Token:
    kind: str  # ident | keyword | number | string | char | op | eof
    text: str
    line: int
    offset: int

    def adjacent_to(self, other: "Token") -> bool:
        return other.offset == self.offset + len(self.text)


def tokenize(source: str) -> list[Token]:
    out: list[Token] = []
    i, line, n = 0, 1, len(source)
    while i < n:
        c = source[i]
        if c == "\n":
            line += 1
            i += 1
            continue
        if c in " \t\r\f":
            i += 1
            continue
        if c == "/" and source.startswith("//", i):
            j = source.find("\n", i)
            i = n if j < 0 else j
            continue
        if c == "/" and source.startswith("/*", i):
            j = source.find("*/", i + 2)
            if j < 0:
                raise ParseError(f"unterminated block comment at line {line}")
            line += source.count("\n", i, j)
            i = j + 2
            continue
        if c == '"':
            if source.startswith('"""', i):
                j = source.find('"""', i + 3)
                if j < 0:
                    raise ParseError(f"unterminated text block at line {line}")
                out.append(Token("string", source[i : j + 3], line, i))
                line += source.count("\n", i, j)
                i = j + 3
                continue
            j = i + 1
            while j < n:
                if source[j] == "\\":
                    j += 2
                    continue
                if source[j] == '"':
                    break
                if source[j] == "\n":
                    raise ParseError(f"unterminated string literal at line {line}")
                j += 1
            if j >= n:
                raise ParseError(f"unterminated string literal at line {line}")
            out.append(Token("string", source[i : j + 1], line, i))
            i = j + 1
            continue
        if c == "'":
            j = i + 1
            while j < n:
                if source[j] == "\\":
                    j += 2
                    continue
                if source[j] == "'":
                    break
                if source[j] == "\n":
                    raise ParseError(f"unterminated char literal at line {line}")
                j += 1
            if j >= n:
                raise ParseError(f"unterminated char literal at line {line}")
            out.append(Token("char", source[i : j + 1], line, i))
            i = j + 1
            continue
        if c.isdigit() or (c == "." and i + 1 < n and source[i + 1].isdigit()):
            m = _NUMBER_RE.match(source, i)
            if m:
                out.append(Token("number", m.group(), line, i))
                i = m.end()
                continue
        if c.isalpha() or c in "_$":
            m = _IDENT_RE.match(source, i)
            text = m.group()
            kind = "keyword" if text in KEYWORDS else "ident"
            out.append(Token(kind, text, line, i))
            i = m.end()
            continue
        matched = None
        for op in _MULTI_OPS:
            if source.startswith(op, i):
                matched = op
                break
        if matched:
            out.append(Token("op", matched, line, i))
            i += len(matched)
            continue
        if c in _SINGLE_OPS:
            out.append(Token("op", c, line, i))
            i += 1
            continue
        i += 1  # unknown character: skip, stay tolerant
    out.append(Token("eof", "", line, n))
    return out


@dataclass
class Node:
    kind: str
    start: int
    end: int
    start_line: int
    end_line: int
    children: list["Node"] = field(default_factory=list)
    name: str = ""
    arg_count: int = 0
    is_statement: bool = False

    def walk(self):
        yield self
        for child in self.children:
            yield from child.walk()

    def span_chars(self) -> int:
        return self.end - self.start

    def covers_line(self, line: int) -> bool:
        return self.start_line <= line <= self.end_line


@dataclass
class ParsedJava:
    root: Node
    line_tokens: dict[int, list[str]]
    line_count: int


def parse_java(source: str) -> ParsedJava:
    tokens = tokenize(source)
    line_tokens: dict[int, list[str]] = {}
    for tok in tokens[:-1]:
        line_tokens.setdefault(tok.line, []).append(tok.text)
    root = _Parser(tokens).parse_unit()
    return ParsedJava(root, line_tokens, source.count("\n") + 1)


_STATEMENT_KINDS = frozenset(
    {
        "LocalVar", "If", "For", "ForEach", "While", "DoWhile", "Try",
        "Switch", "Return", "Throw", "Break", "Continue", "Assert",
        "Synchronized", "Labeled", "Yield", "Field", "Invocation", "Assign",
        "Unary", "ConstructorCall",
    }
)


class _Parser:
    """Tolerant recursive-descent parser over the token stream."""

    def __init__(self, tokens: list[Token]):
        self.toks = tokens
        self.i = 0

    # --- token helpers -------------------------------------------------

    def peek(self, k: int = 0) -> Token:
        j = self.i + k
        return self.toks[j] if j < len(self.toks) else self.toks[-1]

    def at(self, text: str) -> bool:
        return self.peek().text == text and self.peek().kind in ("op", "keyword")

    def at_ident(self, k: int = 0) -> bool:
        return self.peek(k).kind == "ident"

    def eof(self) -> bool:
        return self.peek().kind == "eof"

    def advance(self) -> Token:
        tok = self.toks[self.i]
        if self.i < len(self.toks) - 1:
            self.i += 1
        return tok

    def accept(self, text: str) -> bool:
        if self.at(text):
            self.advance()
            return True
        return False

    def last(self) -> Token:
        return self.toks[max(0, self.i - 1)]

    def _mk(self, kind: str, start_tok: Token, children=None, **kw) -> Node:
        end_tok = self.last()
        end = end_tok.offset + len(end_tok.text)
        node = Node(
            kind,
            start_tok.offset,
            max(end, start_tok.offset),
            start_tok.line,
            max(end_tok.line, start_tok.line),
            children or [],
            **kw,
        )
        return node

    # --- lookahead scanners (no consumption) ---------------------------

    def _skip_annotation_at(self, j: int) -> int:
        # at '@': @Name(.Name)* optionally followed by balanced (...)
        j += 1
        if self.toks[j].kind not in ("ident", "keyword"):
            return j
        j += 1
        while self.toks[j].text == "." and self.toks[j + 1].kind == "ident":
            j += 2
        if self.toks[j].text == "(":
            j = self._skip_balanced_at(j, "(", ")")
        return j

    def _skip_balanced_at(self, j: int, open_t: str, close_t: str) -> int:
        depth = 0
        while j < len(self.toks) - 1:
            t = self.toks[j].text
            if t == open_t:
                depth += 1
            elif t == close_t:
                depth -= 1
                if depth == 0:
                    return j + 1
            j += 1
        return j

    def _scan_generics_at(self, j: int) -> int | None:
        # at '<': balanced scan allowing only type-ish tokens
        depth = 0
        while j < len(self.toks) - 1:
            tok = self.toks[j]
            t = tok.text
            if t == "<":
                depth += 1
            elif t == ">":
                depth -= 1
                if depth == 0:
                    return j + 1
            elif t in (",", ".", "?", "[", "]", "&") or tok.kind in ("ident",):
                pass
            elif tok.kind == "keyword" and t in ("extends", "super") or t in PRIMITIVES:
                pass
            elif t == "@":
                j = self._skip_annotation_at(j) - 1
            else:
                return None
            j += 1
        return None

    def _scan_type_at(self, j: int) -> int | None:
        """Return token index just past a type shape starting at j, else None."""
        while self.toks[j].text == "@":
            j = self._skip_annotation_at(j)
        tok = self.toks[j]
        if tok.kind == "keyword" and tok.text in PRIMITIVES:
            j += 1
        elif tok.kind == "ident":
            j += 1
            while self.toks[j].text == "." and self.toks[j + 1].kind == "ident":
                j += 2
        else:
            return None
        if self.toks[j].text == "<":
            nj = self._scan_generics_at(j)
            if nj is None:
                return None
            j = nj
        while self.toks[j].text == "[" and self.toks[j + 1].text == "]":
            j += 2
        return j

    def _scan_cast_at(self, j: int) -> tuple[int, bool] | None:
        """From index of '(', return (index past ')', is_primitive) if a cast shape."""
        first = j + 1
        k = self._scan_type_at(first)
        if k is None:
            return None
        primitive = self.toks[first].text in PRIMITIVES
        while self.toks[k].text == "&":  # intersection cast (A & B) x
            nk = self._scan_type_at(k + 1)
            if nk is None:
                return None
            k = nk
        if self.toks[k].text != ")":
            return None
        return k + 1, primitive

    def _looks_like_cast(self) -> int | None:
        """At '(' in unary position: return index past ')' when a cast."""
        scan = self._scan_cast_at(self.i)
        if scan is None:
            return None
        k, primitive = scan
        nxt = self.toks[k]
        if nxt.kind in ("ident", "number", "string", "char"):
            return k
        if nxt.kind == "keyword" and nxt.text in ("this", "super", "new") | LITERAL_KEYWORDS:
            return k
        if nxt.text in ("(", "!", "~"):
            return k
        if primitive and nxt.text in ("+", "-"):
            return k
        return None

    def _looks_like_lambda(self) -> bool:
        if self.at_ident() and self.peek(1).text == "->":
            return True
        if self.at("("):
            j = self._skip_balanced_at(self.i, "(", ")")
            return self.toks[j].text == "->"
        return False

    def _looks_like_local_decl(self) -> bool:
        j = self.i
        while True:
            tok = self.toks[j]
            if tok.text == "final" or (tok.kind == "keyword" and tok.text == "final"):
                j += 1
                continue
            if tok.text == "@":
                j = self._skip_annotation_at(j)
                continue
            break
        tok = self.toks[j]
        if tok.kind == "ident" and tok.text == "var" and self.toks[j + 1].kind == "ident":
            return True
        k = self._scan_type_at(j)
        return k is not None and self.toks[k].kind == "ident"

    # --- compilation unit ----------------------------------------------

    def parse_unit(self) -> Node:
        start = self.peek()
        children: list[Node] = []
        while not self.eof():
            before = self.i
            tok = self.peek()
            if tok.kind == "keyword" and tok.text == "package":
                first = self.advance()
                self._skip_to_semicolon()
                children.append(self._mk("Package", first))
            elif tok.kind == "keyword" and tok.text == "import":
                first = self.advance()
                self._skip_to_semicolon()
                children.append(self._mk("Import", first))
            else:
                decl = self._try_parse_type_decl()
                if decl is not None:
                    children.append(decl)
            if self.i == before:
                self.advance()
        return Node(
            "Unit",
            start.offset,
            self.last().offset + len(self.last().text),
            start.line,
            self.last().line,
            children,
        )

    def _skip_to_semicolon(self) -> None:
        while not self.eof() and not self.at(";"):
            self.advance()
        self.accept(";")

    def _consume_modifiers(self) -> None:
        while True:
            tok = self.peek()
            if tok.text == "@" and self.peek(1).text != "interface":
                self.i = self._skip_annotation_at(self.i)
                continue
            if tok.kind == "keyword" and tok.text in MODIFIERS:
                self.advance()
                continue
            if tok.kind == "ident" and tok.text in ("sealed",):
                self.advance()
                continue
            break

    def _at_type_decl_keyword(self) -> bool:
        tok = self.peek()
        if tok.kind == "keyword" and tok.text in ("class", "interface", "enum"):
            return True
        if tok.text == "@" and self.peek(1).text == "interface":
            return True
        if (
            tok.kind == "ident"
            and tok.text == "record"
            and self.peek(1).kind == "ident"
            and self.peek(2).text == "("
        ):
            return True
        return False

    def _try_parse_type_decl(self) -> Node | None:
        start = self.peek()
        save = self.i
        self._consume_modifiers()
        if not self._at_type_decl_keyword():
            self.i = save
            return None
        tok = self.advance()
        if tok.text == "@":  # @interface
            self.advance()
        is_enum = tok.text == "enum"
        is_record = tok.kind == "ident" and tok.text == "record"
        if self.at_ident():
            self.advance()
        if self.at("<"):
            j = self._scan_generics_at(self.i)
            if j is not None:
                self.i = j
        if is_record and self.at("("):
            self.i = self._skip_balanced_at(self.i, "(", ")")
        while not self.eof() and not self.at("{"):
            self.advance()
        members = self._parse_class_body(is_enum=is_enum)
        return self._mk("TypeDecl", start, members)

    def _parse_class_body(self, is_enum: bool = False) -> list[Node]:
        members: list[Node] = []
        if not self.accept("{"):
            return members
        if is_enum:
            members.extend(self._parse_enum_constants())
        while not self.eof() and not self.at("}"):
            before = self.i
            member = self._parse_member()
            if member is not None:
                members.append(member)
            if self.i == before:
                self.advance()
        self.accept("}")
        return members

    def _parse_enum_constants(self) -> list[Node]:
        constants: list[Node] = []
        while not self.eof():
            if self.at(";"):
                self.advance()
                break
            if self.at("}"):
                break
            if self.at("@"):
                self.i = self._skip_annotation_at(self.i)
                continue
            if self.at_ident():
                start = self.peek()
                name = self.advance().text
                args: list[Node] = []
                if self.at("("):
                    args = self._parse_arguments()
                body: list[Node] = []
                if self.at("{"):
                    body = self._parse_class_body()
                constants.append(
                    self._mk("EnumConstant", start, args + body, name=name)
                )
                self.accept(",")
                continue
            self.advance()
        return constants

    def _parse_member(self) -> Node | None:
        start = self.peek()
        if self.at(";"):
            self.advance()
            return None
        decl = self._try_parse_type_decl()
        if decl is not None:
            return decl
        self._consume_modifiers()
        if self.at("{"):  # instance/static initializer
            block = self.parse_block()
            return self._mk("Initializer", start, [block])
        if self.at("<"):
            j = self._scan_generics_at(self.i)
            if j is not None:
                self.i = j
        # constructor: Name (
        if self.at_ident() and self.peek(1).text == "(":
            name = self.advance().text
            return self._finish_method(start, name)
        j = self._scan_type_at(self.i)
        if j is not None and self.toks[j].kind == "ident":
            if self.toks[j + 1].text == "(":
                self.i = j
                name = self.advance().text
                return self._finish_method(start, name)
            self.i = j
            return self._finish_field(start)
        return None

    def _finish_method(self, start: Token, name: str) -> Node:
        self.i = self._skip_balanced_at(self.i, "(", ")")
        while not self.eof() and not self.at("{") and not self.at(";"):
            self.advance()
        children: list[Node] = []
        if self.at("{"):
            children.append(self.parse_block())
        else:
            self.accept(";")
        return self._mk("Method", start, children, name=name)

    def _finish_field(self, start: Token) -> Node:
        # positioned at the first declarator name
        inits: list[Node] = []
        name = ""
        while self.at_ident():
            if not name:
                name = self.peek().text
            self.advance()
            while self.at("[") and self.peek(1).text == "]":
                self.advance()
                self.advance()
            if self.accept("="):
                inits.append(self._parse_variable_init())
            if not self.accept(","):
                break
        self.accept(";")
        node = self._mk("Field", start, inits, name=name)
        node.is_statement = True
        return node

    def _parse_variable_init(self) -> Node:
        if self.at("{"):
            return self._parse_array_initializer()
        return self.parse_expression()

    def _parse_array_initializer(self) -> Node:
        start = self.advance()  # '{'
        elems: list[Node] = []
        while not self.eof() and not self.at("}"):
            before = self.i
            elems.append(self._parse_variable_init())
            self.accept(",")
            if self.i == before:
                self.advance()
        self.accept("}")
        return self._mk("ArrayInit", start, elems)

    # --- statements -----------------------------------------------------

    def parse_block(self) -> Node:
        start = self.peek()
        self.accept("{")
        stmts: list[Node] = []
        while not self.eof() and not self.at("}"):
            before = self.i
            s = self.parse_statement()
            if s is not None:
                stmts.append(s)
            if self.i == before:
                self.advance()
        self.accept("}")
        node = self._mk("Block", start, stmts)
        node.is_statement = True
        return node

    def parse_statement(self) -> Node | None:
        tok = self.peek()
        t = tok.text
        if t == "{":
            return self.parse_block()
        if t == ";":
            self.advance()
            return self._mk("Empty", tok)
        if tok.kind == "keyword":
            handler = {
                "if": self._parse_if,
                "for": self._parse_for,
                "while": self._parse_while,
                "do": self._parse_do,
                "try": self._parse_try,
                "switch": self._parse_switch,
                "return": self._parse_return,
                "throw": self._parse_throw,
                "break": lambda: self._parse_jump("Break"),
                "continue": lambda: self._parse_jump("Continue"),
                "assert": self._parse_assert,
                "synchronized": self._parse_synchronized,
            }.get(t)
            if handler is not None:
                return handler()
            if t in ("class", "enum", "interface") or t in MODIFIERS or t == "final":
                decl = self._try_parse_type_decl()
                if decl is not None:
                    return decl
                if t == "final":
                    return self._parse_local_var()
                self.advance()
                return None
        if tok.kind == "ident" and tok.text == "yield" and not self.peek(1).text == "=":
            start = self.advance()
            expr = self.parse_expression()
            self.accept(";")
            node = self._mk("Yield", start, [expr])
            node.is_statement = True
            return node
        if tok.kind == "ident" and self.peek(1).text == ":" and self.peek(1).kind == "op":
            start = self.advance()
            self.advance()  # ':'
            inner = self.parse_statement()
            node = self._mk("Labeled", start, [inner] if inner else [])
            node.is_statement = True
            return node
        if self.at("@") or self._looks_like_local_decl():
            if self._at_type_decl_keyword():
                return self._try_parse_type_decl()
            return self._parse_local_var()
        return self._parse_expression_statement()

    def _stmt(self, kind: str, start: Token, children: list[Node], **kw) -> Node:
        node = self._mk(kind, start, children, **kw)
        node.is_statement = True
        return node

    def _parse_paren_expr(self) -> Node | None:
        if not self.accept("("):
            return None
        expr = self.parse_expression()
        self.accept(")")
        return expr

    def _parse_if(self) -> Node:
        start = self.advance()
        children: list[Node] = []
        cond = self._parse_paren_expr()
        if cond is not None:
            children.append(cond)
        then = self.parse_statement()
        if then is not None:
            children.append(then)
        if self.at("else"):
            self.advance()
            other = self.parse_statement()
            if other is not None:
                children.append(other)
        return self._stmt("If", start, children)

    def _at_foreach_header(self) -> bool:
        j = self.i
        while self.toks[j].text in ("final", "@"):
            j = self._skip_annotation_at(j) if self.toks[j].text == "@" else j + 1
        if self.toks[j].kind == "ident" and self.toks[j].text == "var":
            return self.toks[j + 1].kind == "ident" and self.toks[j + 2].text == ":"
        k = self._scan_type_at(j)
        if k is None or self.toks[k].kind != "ident":
            return False
        return self.toks[k + 1].text == ":"

    def _parse_for(self) -> Node:
        start = self.advance()
        children: list[Node] = []
        if self.accept("("):
            if self._at_foreach_header():
                while not self.eof() and not self.at(":"):
                    self.advance()
                self.accept(":")
                children.append(self.parse_expression())
                self.accept(")")
                body = self.parse_statement()
                if body is not None:
                    children.append(body)
                return self._stmt("ForEach", start, children)
            if not self.at(";"):
                if self._looks_like_local_decl():
                    children.append(self._parse_local_var(consume_semicolon=False))
                else:
                    children.append(self.parse_expression())
                    while self.accept(","):
                        children.append(self.parse_expression())
            self.accept(";")
            if not self.at(";"):
                children.append(self.parse_expression())
            self.accept(";")
            if not self.at(")"):
                children.append(self.parse_expression())
                while self.accept(","):
                    children.append(self.parse_expression())
            self.accept(")")
        body = self.parse_statement()
        if body is not None:
            children.append(body)
        return self._stmt("For", start, children)

    def _parse_while(self) -> Node:
        start = self.advance()
        children: list[Node] = []
        cond = self._parse_paren_expr()
        if cond is not None:
            children.append(cond)
        body = self.parse_statement()
        if body is not None:
            children.append(body)
        return self._stmt("While", start, children)

    def _parse_do(self) -> Node:
        start = self.advance()
        children: list[Node] = []
        body = self.parse_statement()
        if body is not None:
            children.append(body)
        if self.accept("while"):
            cond = self._parse_paren_expr()
            if cond is not None:
                children.append(cond)
        self.accept(";")
        return self._stmt("DoWhile", start, children)

    def _parse_try(self) -> Node:
        start = self.advance()
        children: list[Node] = []
        if self.accept("("):
            while not self.eof() and not self.at(")"):
                before = self.i
                if self._looks_like_local_decl():
                    children.append(self._parse_local_var(consume_semicolon=False))
                else:
                    children.append(self.parse_expression())
                self.accept(";")
                if self.i == before:
                    self.advance()
            self.accept(")")
        if self.at("{"):
            children.append(self.parse_block())
        while self.at("catch"):
            cstart = self.advance()
            if self.at("("):
                self.i = self._skip_balanced_at(self.i, "(", ")")
            cbody = self.parse_block() if self.at("{") else None
            children.append(self._mk("Catch", cstart, [cbody] if cbody else []))
        if self.accept("finally"):
            if self.at("{"):
                children.append(self.parse_block())
        return self._stmt("Try", start, children)

    def _parse_switch(self) -> Node:
        start = self.advance()
        children: list[Node] = []
        sel = self._parse_paren_expr()
        if sel is not None:
            children.append(sel)
        if self.accept("{"):
            while not self.eof() and not self.at("}"):
                before = self.i
                if self.at("case"):
                    self.advance()
                    while not self.eof() and not self.at(":") and not self.at("->"):
                        children.append(self.parse_expression())
                        if not self.accept(","):
                            break
                    self.accept(":") or self.accept("->")
                elif self.at("default"):
                    self.advance()
                    self.accept(":") or self.accept("->")
                else:
                    s = self.parse_statement()
                    if s is not None:
                        children.append(s)
                if self.i == before:
                    self.advance()
            self.accept("}")
        return self._stmt("Switch", start, children)

    def _parse_return(self) -> Node:
        start = self.advance()
        children: list[Node] = []
        if not self.at(";"):
            children.append(self.parse_expression())
        self.accept(";")
        return self._stmt("Return", start, children)

    def _parse_throw(self) -> Node:
        start = self.advance()
        children = [self.parse_expression()]
        self.accept(";")
        return self._stmt("Throw", start, children)

    def _parse_jump(self, kind: str) -> Node:
        start = self.advance()
        if self.at_ident():
            self.advance()  # label
        self.accept(";")
        return self._stmt(kind, start, [])

    def _parse_assert(self) -> Node:
        start = self.advance()
        children = [self.parse_expression()]
        if self.accept(":"):
            children.append(self.parse_expression())
        self.accept(";")
        return self._stmt("Assert", start, children)

    def _parse_synchronized(self) -> Node:
        start = self.advance()
        children: list[Node] = []
        lock = self._parse_paren_expr()
        if lock is not None:
            children.append(lock)
        if self.at("{"):
            children.append(self.parse_block())
        return self._stmt("Synchronized", start, children)

    def _parse_local_var(self, consume_semicolon: bool = True) -> Node:
        start = self.peek()
        while self.at("final") or self.at("@"):
            if self.at("@"):
                self.i = self._skip_annotation_at(self.i)
            else:
                self.advance()
        if self.at_ident() and self.peek().text == "var":
            self.advance()
        else:
            j = self._scan_type_at(self.i)
            if j is not None:
                self.i = j
        inits: list[Node] = []
        name = ""
        while self.at_ident():
            if not name:
                name = self.peek().text
            self.advance()
            while self.at("[") and self.peek(1).text == "]":
                self.advance()
                self.advance()
            if self.accept("="):
                inits.append(self._parse_variable_init())
            if not self.accept(","):
                break
        if consume_semicolon:
            self.accept(";")
        return self._stmt("LocalVar", start, inits, name=name)

    def _parse_expression_statement(self) -> Node | None:
        start = self.peek()
        expr = self.parse_expression()
        self.accept(";")
        if expr is None:
            return None
        expr.is_statement = True
        # widen span over the trailing semicolon
        end_tok = self.last()
        expr.end = max(expr.end, end_tok.offset + len(end_tok.text))
        expr.start = min(expr.start, start.offset)
        return expr

    # --- expressions -----------------------------------------------------

    def parse_expression(self) -> Node:
        return self._parse_assignment()

    _ASSIGN_OPS = frozenset(
        {"=", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "<<="}
    )

    def _at_shift_assign(self) -> int:
        """Number of tokens forming >>= or >>>= at the cursor, else 0."""
        t0, t1, t2 = self.peek(0), self.peek(1), self.peek(2)
        if t0.text == ">" and t1.text == ">=" and t0.adjacent_to(t1):
            return 2
        if (
            t0.text == ">"
            and t1.text == ">"
            and t2.text == ">="
            and t0.adjacent_to(t1)
            and t1.adjacent_to(t2)
        ):
            return 3
        return 0

    def _parse_assignment(self) -> Node:
        start = self.peek()
        left = self._parse_ternary()
        if self.peek().kind == "op" and self.peek().text in self._ASSIGN_OPS:
            self.advance()
            right = self._parse_assignment()
            return self._mk("Assign", start, [left, right])
        n = self._at_shift_assign()
        if n:
            for _ in range(n):
                self.advance()
            right = self._parse_assignment()
            return self._mk("Assign", start, [left, right])
        return left

    def _parse_ternary(self) -> Node:
        start = self.peek()
        cond = self._parse_binary(0)
        if self.at("?"):
            self.advance()
            then = self.parse_expression()
            self.accept(":")
            other = self._parse_ternary()
            return self._mk("Ternary", start, [cond, then, other])
        return cond

    _BINARY_LEVELS = [
        {"||"},
        {"&&"},
        {"|"},
        {"^"},
        {"&"},
        {"==", "!="},
        {"<", ">", "<=", ">=", "instanceof"},
        {"<<", ">>", ">>>"},  # '>' merging handled explicitly
        {"+", "-"},
        {"*", "/", "%"},
    ]

    def _match_binary_op(self, level: int) -> bool:
        ops = self._BINARY_LEVELS[level]
        tok = self.peek()
        if level == 6:  # relational
            if tok.kind == "keyword" and tok.text == "instanceof":
                return True
            if tok.text in ("<=", ">="):
                return True
            if tok.text == "<":
                return True
            if tok.text == ">":
                nxt = self.peek(1)
                # '>' '>' adjacency means shift (or shift-assign), not relational
                if nxt.text in (">", ">=") and tok.adjacent_to(nxt):
                    return False
                return True
            return False
        if level == 7:  # shifts
            if tok.text == "<<":
                return True
            if tok.text == ">" and self.peek(1).text == ">" and tok.adjacent_to(self.peek(1)):
                third = self.peek(2)
                if third.text == ">=" and self.peek(1).adjacent_to(third):
                    return False  # >>>= assignment
                return True
            return False
        if tok.kind == "op" and tok.text in ops:
            # '&' also appears in intersection types; fine in expressions
            return True
        return False

    def _consume_binary_op(self, level: int) -> None:
        tok = self.peek()
        if level == 7 and tok.text == ">":
            self.advance()  # first '>'
            self.advance()  # second '>'
            third = self.peek()
            if third.text == ">" and self.last().adjacent_to(third):
                self.advance()  # '>>>'
            return
        if level == 6 and tok.kind == "keyword" and tok.text == "instanceof":
            self.advance()
            j = self._scan_type_at(self.i)
            if j is not None:
                self.i = j
            if self.at_ident():
                self.advance()  # pattern variable
            return
        self.advance()

    def _parse_binary(self, level: int) -> Node:
        if level >= len(self._BINARY_LEVELS):
            return self._parse_unary()
        start = self.peek()
        node = self._parse_binary(level + 1)
        while self._match_binary_op(level):
            if self.peek().kind == "keyword" and self.peek().text == "instanceof":
                self._consume_binary_op(level)
                node = self._mk("Binary", start, [node])
                continue
            self._consume_binary_op(level)
            right = self._parse_binary(level + 1)
            node = self._mk("Binary", start, [node, right])
        return node

    def _parse_unary(self) -> Node:
        tok = self.peek()
        if tok.kind == "op" and tok.text in ("+", "-", "!", "~", "++", "--"):
            start = self.advance()
            operand = self._parse_unary()
            return self._mk("Unary", start, [operand])
        if tok.text == "(":
            k = self._looks_like_cast()
            if k is not None:
                start = self.peek()
                self.i = k
                operand = self._parse_unary()
                return self._mk("Cast", start, [operand])
        return self._parse_postfix()

    def _parse_arguments(self) -> list[Node]:
        args: list[Node] = []
        self.accept("(")
        while not self.eof() and not self.at(")"):
            before = self.i
            args.append(self.parse_expression())
            if not self.accept(","):
                break
            if self.i == before:
                self.advance()
        self.accept(")")
        return args

    def _parse_postfix(self) -> Node:
        start = self.peek()
        node = self._parse_primary()
        while True:
            tok = self.peek()
            if tok.text == "." and tok.kind == "op":
                self.advance()
                if self.at("<"):
                    j = self._scan_generics_at(self.i)
                    if j is not None:
                        self.i = j
                if self.at("new"):
                    self.advance()
                    node = self._finish_creation(start, qualifier=node)
                    continue
                if self.at("this") or self.at("super"):
                    kw = self.advance().text
                    node = self._mk("FieldAccess", start, [node], name=kw)
                    continue
                if self.at("class"):
                    self.advance()
                    node = self._mk("ClassLiteral", start, [node])
                    continue
                if self.at_ident():
                    name = self.advance().text
                    if self.at("("):
                        args = self._parse_arguments()
                        node = self._mk(
                            "Invocation", start, [node] + args,
                            name=name, arg_count=len(args),
                        )
                    else:
                        node = self._mk("FieldAccess", start, [node], name=name)
                    continue
                continue
            if tok.text == "[" and tok.kind == "op":
                self.advance()
                index = self.parse_expression()
                self.accept("]")
                node = self._mk("ArrayAccess", start, [node, index])
                continue
            if tok.text == "::":
                self.advance()
                if self.at_ident() or self.at("new"):
                    self.advance()
                node = self._mk("MethodRef", start, [node])
                continue
            if tok.text in ("++", "--"):
                self.advance()
                node = self._mk("Unary", start, [node])
                continue
            if tok.text == "(" and node.kind in ("VarRead", "This", "Super"):
                name = node.name or node.kind.lower()
                args = self._parse_arguments()
                node = self._mk(
                    "Invocation", start, args, name=name, arg_count=len(args)
                )
                continue
            break
        return node

    def _parse_primary(self) -> Node:
        tok = self.peek()
        if self._looks_like_lambda():
            return self._parse_lambda()
        if tok.kind in ("number", "string", "char"):
            self.advance()
            return self._mk("Literal", tok)
        if tok.kind == "keyword":
            if tok.text in LITERAL_KEYWORDS:
                self.advance()
                return self._mk("Literal", tok)
            if tok.text == "this":
                self.advance()
                return self._mk("This", tok, name="this")
            if tok.text == "super":
                self.advance()
                return self._mk("Super", tok, name="super")
            if tok.text == "new":
                self.advance()
                return self._finish_creation(tok)
            if tok.text in PRIMITIVES:  # e.g. int.class, int[]::new
                self.advance()
                while self.at("[") and self.peek(1).text == "]":
                    self.advance()
                    self.advance()
                return self._mk("TypeRef", tok)
            if tok.text == "switch":
                return self._parse_switch_expr()
            self.advance()
            return self._mk("Unknown", tok)
        if tok.kind == "ident":
            self.advance()
            return self._mk("VarRead", tok, name=tok.text)
        if tok.text == "(":
            self.advance()
            inner = self.parse_expression()
            self.accept(")")
            return inner
        self.advance()
        return self._mk("Unknown", tok)

    def _parse_lambda(self) -> Node:
        start = self.peek()
        if self.at("("):
            self.i = self._skip_balanced_at(self.i, "(", ")")
        else:
            self.advance()  # single param
        self.accept("->")
        body = self.parse_block() if self.at("{") else self.parse_expression()
        return self._mk("Lambda", start, [body])

    def _parse_switch_expr(self) -> Node:
        start = self.advance()
        children: list[Node] = []
        sel = self._parse_paren_expr()
        if sel is not None:
            children.append(sel)
        if self.at("{"):
            j = self._skip_balanced_at(self.i, "{", "}")
            self.i = j
        return self._mk("SwitchExpr", start, children)

    def _finish_creation(self, start: Token, qualifier: Node | None = None) -> Node:
        children: list[Node] = [qualifier] if qualifier else []
        name = ""
        if self.at("@"):
            self.i = self._skip_annotation_at(self.i)
        if self.peek().kind == "keyword" and self.peek().text in PRIMITIVES:
            name = self.advance().text
        elif self.at_ident():
            name = self.advance().text
            while self.at(".") and self.at_ident(1):
                self.advance()
                name = self.advance().text
        if self.at("<"):
            j = self._scan_generics_at(self.i)
            if j is not None:
                self.i = j
        if self.at("["):
            dims: list[Node] = []
            while self.at("["):
                self.advance()
                if not self.at("]"):
                    dims.append(self.parse_expression())
                self.accept("]")
            if self.at("{"):
                dims.append(self._parse_array_initializer())
            return self._mk("ArrayCreation", start, children + dims, name=name)
        args: list[Node] = []
        if self.at("("):
            args = self._parse_arguments()
        node_children = children + args
        if self.at("{"):  # anonymous class body
            node_children = node_children + self._parse_class_body()
        return self._mk(
            "ConstructorCall", start, node_children, name=name, arg_count=len(args)
        )
