#!/usr/bin/env python3
"""Reference feature extractor for the golden fixture corpus.

This is an independent implementation of the documented lexing, layout and
structural-parse rules, kept deliberately separate from the C++ library. It
regenerates tests/fixtures/golden/expected.json, which the acceptance suite
compares against the library output (1e-9 absolute).

Run from the repository root:

    python3 tests/oracle/golden_oracle.py [--dump-trees]

The fixtures are plain ASCII; the script refuses anything else so that byte
offsets and string indices coincide.
"""

import json
import math
import os
import sys

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))  # tests/
REPO = os.path.dirname(ROOT)

# ---------------------------------------------------------------------------
# tokens

(COMMENT, STRING, IDENT, KEYWORD, IMPORT, LITERAL, PUNCT, WS, MACRO) = range(9)

OPS4 = [">>>="]
OPS3 = ["<<=", ">>=", "->*", "...", ">>>"]
OPS2 = ["::", "->", "++", "--", "<<", ">>", "<=", ">=", "==", "!=",
        "&&", "||", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^="]


def load_keywords(lang):
    path = os.path.join(REPO, "configs", "keywords", lang + ".txt")
    words = set()
    with open(path) as fh:
        for line in fh:
            line = line.split("#")[0].strip()
            if line:
                words.add(line)
    return words


def count_lines(text):
    if not text:
        return 0
    n = text.count("\n")
    if not text.endswith("\n"):
        n += 1
    return n


class Tok:
    __slots__ = ("kind", "text", "line", "col", "offset")

    def __init__(self, kind, text, line, col, offset):
        self.kind = kind
        self.text = text
        self.line = line
        self.col = col
        self.offset = offset


def is_hspace(c):
    return c in " \t"


def is_space(c):
    return c in " \t\r\n\v\f"


def is_ident_start(c):
    return c.isascii() and (c.isalpha() or c in "_$")


def is_ident_char(c):
    return c.isascii() and (c.isalnum() or c in "_$")


def is_hex_digit(c):
    return c in "0123456789abcdefABCDEF"


def tokenize(src, lang, keywords):
    line_starts = [0]
    for i, c in enumerate(src):
        if c == "\n":
            line_starts.append(i + 1)

    def locate(off):
        lo, hi = 0, len(line_starts)
        while lo < hi:
            mid = (lo + hi) // 2
            if line_starts[mid] <= off:
                lo = mid + 1
            else:
                hi = mid
        li = lo - 1
        return li + 1, off - line_starts[li] + 1

    toks = []
    diags = []

    def emit(kind, start, end):
        line, col = locate(start)
        toks.append(Tok(kind, src[start:end], line, col, start))

    n = len(src)
    pos = 0
    import_pending = False

    def at_line_start_ws(p):
        while p > 0:
            c = src[p - 1]
            if c == "\n":
                return True
            if not is_hspace(c):
                return False
            p -= 1
        return True

    while pos < n:
        c = src[pos]
        if c == "#" and lang == "cpp" and at_line_start_ws(pos):
            # directive
            q = pos + 1
            while q < n and is_hspace(src[q]):
                q += 1
            name_start = q
            while q < n and "a" <= src[q] <= "z":
                q += 1
            name = src[name_start:q]
            if name != "include":
                start = pos
                end = pos
                while True:
                    nl = src.find("\n", end)
                    if nl < 0:
                        end = n
                        break
                    line_end = nl
                    if line_end > 0 and src[line_end - 1] == "\r":
                        line_end -= 1
                    if line_end > start and src[line_end - 1] == "\\":
                        end = nl + 1
                    else:
                        end = line_end
                        break
                emit(MACRO, start, end)
                pos = end
                continue
            emit(MACRO, pos, q)
            pos = q
            ws = pos
            while pos < n and is_hspace(src[pos]):
                pos += 1
            if pos > ws:
                emit(WS, ws, pos)
            if pos >= n:
                continue
            opener = src[pos]
            if opener not in "<\"":
                continue
            closer = ">" if opener == "<" else '"'
            emit(PUNCT, pos, pos + 1)
            pos += 1
            nb = pos
            while pos < n and src[pos] != closer and src[pos] != "\n":
                pos += 1
            if pos > nb:
                emit(IMPORT, nb, pos)
            if pos < n and src[pos] == closer:
                emit(PUNCT, pos, pos + 1)
                pos += 1
            continue
        if is_space(c):
            start = pos
            newline = False
            while pos < n and is_space(src[pos]):
                if src[pos] == "\n":
                    newline = True
                pos += 1
            emit(WS, start, pos)
            if newline:
                import_pending = False
            continue
        if src.startswith("//", pos):
            start = pos
            while pos < n and src[pos] != "\n":
                pos += 1
            emit(COMMENT, start, pos)
            continue
        if src.startswith("/*", pos):
            start = pos
            close = src.find("*/", pos + 2)
            if close < 0:
                pos = n
                diags.append("unterminated block comment")
            else:
                pos = close + 2
            emit(COMMENT, start, pos)
            continue
        if c == '"' or c == "'":
            kind = STRING if c == '"' else LITERAL
            start = pos
            pos += 1
            closed = False
            while pos < n:
                ch = src[pos]
                if ch == "\\" and pos + 1 < n:
                    pos += 2
                    continue
                pos += 1
                if ch == c:
                    closed = True
                    break
            if not closed:
                diags.append("unterminated literal")
            emit(kind, start, pos)
            continue
        if c.isdigit() or (c == "." and pos + 1 < n and src[pos + 1].isdigit()):
            start = pos
            hex_prefix = False
            if src[pos:pos + 2] in ("0x", "0X", "0b", "0B"):
                hex_prefix = src[pos + 1] in "xX"
                pos += 2
            prev = ""
            while pos < n:
                ch = src[pos]
                nxt = src[pos + 1] if pos + 1 < n else ""
                if ch.isascii() and ch.isalnum():
                    prev = ch
                    pos += 1
                elif ch == "." and nxt.isdigit():
                    prev = ch
                    pos += 1
                elif ((ch == "'" and lang == "cpp") or (ch == "_" and lang == "java")) \
                        and nxt and is_hex_digit(nxt):
                    prev = ch
                    pos += 1
                elif ch in "+-" and not hex_prefix and prev in "eE":
                    prev = ch
                    pos += 1
                elif ch in "+-" and hex_prefix and prev in "pP":
                    prev = ch
                    pos += 1
                else:
                    break
            emit(LITERAL, start, pos)
            continue
        if is_ident_start(c):
            start = pos
            if import_pending:
                while pos < n and (is_ident_char(src[pos]) or src[pos] in ".*"):
                    pos += 1
                text = src[start:pos]
                if text in keywords and "." not in text:
                    emit(KEYWORD, start, pos)
                else:
                    emit(IMPORT, start, pos)
                    import_pending = False
                continue
            while pos < n and is_ident_char(src[pos]):
                pos += 1
            text = src[start:pos]
            if text in keywords:
                emit(KEYWORD, start, pos)
                if lang == "java" and text == "import":
                    import_pending = True
            else:
                emit(IDENT, start, pos)
            continue
        # punctuation with maximal munch
        length = 1
        for op in OPS4:
            if src.startswith(op, pos):
                length = 4
        if length == 1:
            for op in OPS3:
                if src.startswith(op, pos):
                    length = 3
        if length == 1:
            for op in OPS2:
                if src.startswith(op, pos):
                    length = 2
        emit(PUNCT, pos, pos + length)
        if length == 1 and c == ";":
            import_pending = False
        pos += length

    return toks, diags


def split_identifier(word):
    def classify(ch):
        if "a" <= ch <= "z":
            return "l"
        if "A" <= ch <= "Z":
            return "u"
        if "0" <= ch <= "9":
            return "d"
        if ord(ch) >= 0x80:
            return "l"
        return None

    out = []
    cur = ""
    prev = None
    for i, ch in enumerate(word):
        cls = classify(ch)
        if cls is None:
            if cur:
                out.append(cur)
                cur = ""
            prev = None
            continue
        boundary = False
        if prev == "l" and cls == "u":
            boundary = True
        if prev == "d" and cls != "d":
            boundary = True
        if prev in ("l", "u") and cls == "d":
            boundary = True
        if prev == "u" and cls == "u" and i + 1 < len(word) and classify(word[i + 1]) == "l":
            boundary = True
        if boundary and cur:
            out.append(cur)
            cur = ""
        cur += ch.lower() if "A" <= ch <= "Z" else ch
        prev = cls
    if cur:
        out.append(cur)
    return out


# ---------------------------------------------------------------------------
# lexical profile

CATEGORIES = ["comments_strings", "identifiers", "keywords", "imports"]


def lexical_profile(toks, lang):
    counts = {c: {} for c in CATEGORIES}
    totals = {c: 0 for c in CATEGORIES}

    def add(cat, word):
        counts[cat][word] = counts[cat].get(word, 0) + 1
        totals[cat] += 1

    def add_subwords(cat, text):
        word = ""
        for ch in text:
            if (ch.isascii() and ch.isalnum()) or ch == "_" or ord(ch) >= 0x80:
                word += ch
            else:
                for sub in split_identifier(word):
                    add(cat, sub)
                word = ""
        for sub in split_identifier(word):
            add(cat, sub)

    for t in toks:
        if t.kind == COMMENT:
            text = t.text
            if text.startswith("/*"):
                text = text[2:]
                if text.endswith("*/"):
                    text = text[:-2]
            elif text.startswith("//"):
                text = text[2:]
            add_subwords("comments_strings", text)
        elif t.kind == STRING:
            text = t.text
            if text.startswith('"'):
                text = text[1:]
            if text.endswith('"'):
                text = text[:-1]
            add_subwords("comments_strings", text)
        elif t.kind == IDENT:
            for sub in split_identifier(t.text):
                add("identifiers", sub)
        elif t.kind == KEYWORD:
            add("keywords", t.text)
        elif t.kind == IMPORT:
            add("imports", t.text.lower())

    out = {}
    for cat in CATEGORIES:
        tf = {}
        if totals[cat]:
            for w, k in counts[cat].items():
                tf[w] = k / totals[cat]
        out[cat] = {"total": totals[cat], "tf": tf}
    return out


# ---------------------------------------------------------------------------
# structural parser

NODE_TYPES = ["TranslationUnit", "Function", "ParameterList", "Parameter", "Block",
              "If", "Else", "Switch", "Case", "For", "While", "DoWhile", "Ternary",
              "Return", "Declaration", "Call", "Identifier", "Literal", "BinaryOp",
              "UnaryOp", "Import", "Class", "Other"]

TYPE_START = {"auto", "bool", "boolean", "byte", "char", "char8_t", "char16_t",
              "char32_t", "const", "constexpr", "double", "extern", "final",
              "float", "int", "long", "register", "short", "signed", "static",
              "template", "typedef", "typename", "unsigned", "using", "void",
              "volatile", "wchar_t"}
CLASS_KW = {"class", "struct", "interface", "enum", "union"}
GUARD_KW = {"new", "return", "throw", "delete"}
ASSIGN_OPS = {"=", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "<<=", ">>=", ">>>="}
BINARY_OPS = {"||", "&&", "|", "^", "&", "==", "!=", "<=", ">=", "<", ">",
              "<<", ">>", ">>>", "+", "-", "*", "/", "%"}
UNARY_OPS = {"!", "~", "++", "--", "-", "+", "*", "&"}
OP_LIKE = ASSIGN_OPS | BINARY_OPS | UNARY_OPS | {"(", "[", "{", ",", "?", ":", ";"}


class Node:
    __slots__ = ("type", "depth", "children")

    def __init__(self, type_, depth=1):
        self.type = type_
        self.depth = depth
        self.children = []

    def add(self, type_):
        node = Node(type_, self.depth + 1)
        self.children.append(node)
        return node


class Parser:
    def __init__(self, toks):
        self.sig = [t for t in toks if t.kind not in (WS, COMMENT, MACRO)]
        self.pos = 0

    def run(self):
        root = Node("TranslationUnit")
        self.pos = 0
        self.parse_statements(root, len(self.sig), True, False)
        return root

    # -- helpers

    def tokat(self, i):
        return self.sig[i]

    def is_punct(self, i, text):
        return i < len(self.sig) and self.sig[i].kind == PUNCT and self.sig[i].text == text

    def is_kw(self, i, text):
        return i < len(self.sig) and self.sig[i].kind == KEYWORD and self.sig[i].text == text

    def is_kind(self, i, kind):
        return i < len(self.sig) and self.sig[i].kind == kind

    @staticmethod
    def open_delta(t):
        if t.kind != PUNCT:
            return 0
        if t.text in "([{":
            return 1
        if t.text in ")]}":
            return -1
        return 0

    def find_close(self, open_, limit):
        depth = 0
        i = open_
        while i < limit and i < len(self.sig):
            depth += self.open_delta(self.sig[i])
            if depth == 0:
                return i
            i += 1
        return min(limit, len(self.sig))

    def after_close(self, close, limit):
        return close + 1 if close < min(limit, len(self.sig)) else close

    def match_backward(self, begin, close):
        depth = 0
        i = close
        while i >= begin:
            depth += self.open_delta(self.sig[i])
            if depth == 0:
                return i
            i -= 1
        return close

    # -- statements

    def parse_statements(self, parent, limit, allow_function, stop_at_rbrace):
        while self.pos < limit and self.pos < len(self.sig):
            if self.is_punct(self.pos, "}"):
                if stop_at_rbrace:
                    return
                self.pos += 1
                continue
            self.parse_statement(parent, limit, allow_function)

    def parse_statement(self, parent, limit, allow_function):
        t = self.tokat(self.pos)
        if t.kind == PUNCT:
            if t.text == ";":
                self.pos += 1
                return
            if t.text == "{":
                self.parse_block(parent, limit, False)
                return
            if t.text in ("<", '"') and self.is_kind(self.pos + 1, IMPORT):
                self.pos += 1
                parent.add("Import")
                self.pos += 1
                if self.is_punct(self.pos, ">") or self.is_punct(self.pos, '"'):
                    self.pos += 1
                return
            if t.text in (")", "]"):
                self.pos += 1
                return
            self.parse_mixed(parent, limit, allow_function)
            return
        if t.kind == IMPORT:
            parent.add("Import")
            self.pos += 1
            return
        if t.kind == KEYWORD:
            kw = t.text
            if kw == "if":
                self.parse_if(parent, limit)
                return
            if kw == "for":
                self.parse_for(parent, limit)
                return
            if kw == "while":
                self.parse_while(parent, limit)
                return
            if kw == "do":
                self.parse_do(parent, limit)
                return
            if kw == "switch":
                self.parse_switch(parent, limit)
                return
            if kw in ("case", "default"):
                self.parse_case(parent, limit)
                return
            if kw == "return":
                self.pos += 1
                node = parent.add("Return")
                end = self.find_statement_end(self.pos, limit)
                self.parse_expression(node, self.pos, end)
                self.pos = end
                if self.is_punct(self.pos, ";"):
                    self.pos += 1
                return
            if kw in ("break", "continue", "goto"):
                parent.add("Other")
                self.pos = self.find_statement_end(self.pos, limit)
                if self.is_punct(self.pos, ";"):
                    self.pos += 1
                return
            if kw == "throw":
                self.pos += 1
                node = parent.add("Other")
                end = self.find_statement_end(self.pos, limit)
                self.parse_expression(node, self.pos, end)
                self.pos = end
                if self.is_punct(self.pos, ";"):
                    self.pos += 1
                return
            if kw in ("try", "catch", "finally", "synchronized"):
                self.pos += 1
                node = parent.add("Other")
                if self.is_punct(self.pos, "("):
                    self.pos = self.after_close(self.find_close(self.pos, limit), limit)
                if self.is_punct(self.pos, "{"):
                    self.parse_block(node, limit, False)
                return
            if kw == "else":
                self.pos += 1
                node = parent.add("Other")
                self.parse_embedded_block(node, limit)
                return
            if kw in CLASS_KW:
                self.parse_class(parent, limit)
                return
            if kw == "namespace":
                self.parse_namespace(parent, limit)
                return
            if kw == "import":
                self.parse_import_statement(parent, limit)
                return
        self.parse_mixed(parent, limit, allow_function)

    def parse_embedded_block(self, parent, limit):
        if self.is_punct(self.pos, "{"):
            self.parse_block(parent, limit, False)
            return
        block = parent.add("Block")
        if self.pos >= limit or self.pos >= len(self.sig):
            return
        if self.is_punct(self.pos, ";"):
            self.pos += 1
            return
        if self.is_punct(self.pos, "}"):
            return
        self.parse_statement(block, limit, False)

    def parse_block(self, parent, limit, allow_function):
        block = parent.add("Block")
        close = self.find_close(self.pos, limit)
        self.pos += 1
        self.parse_statements(block, close, allow_function, True)
        self.pos = self.after_close(close, limit)

    def parse_if(self, parent, limit):
        node = parent.add("If")
        self.pos += 1
        if self.is_kw(self.pos, "constexpr"):
            self.pos += 1
        self.parse_paren_condition(node, limit)
        self.parse_embedded_block(node, limit)
        if self.is_kw(self.pos, "else"):
            self.pos += 1
            els = node.add("Else")
            if self.is_kw(self.pos, "if"):
                self.parse_if(els, limit)
            else:
                self.parse_embedded_block(els, limit)

    def parse_paren_condition(self, node, limit):
        if not self.is_punct(self.pos, "("):
            return
        close = self.find_close(self.pos, limit)
        self.parse_expression(node, self.pos + 1, close)
        self.pos = self.after_close(close, limit)

    def parse_for(self, parent, limit):
        node = parent.add("For")
        self.pos += 1
        if self.is_punct(self.pos, "("):
            close = self.find_close(self.pos, limit)
            b = self.pos + 1
            parts = self.split_top_level(b, close, ";")
            if len(parts) >= 2:
                if parts[0][0] < parts[0][1]:
                    self.parse_simple_range(node, parts[0][0], parts[0][1])
                for fb, fe in parts[1:]:
                    self.parse_expression(node, fb, fe)
            else:
                colon = self.split_top_level(b, close, ":")
                if len(colon) == 2:
                    if colon[0][0] < colon[0][1]:
                        self.parse_simple_range(node, colon[0][0], colon[0][1])
                    self.parse_expression(node, colon[1][0], colon[1][1])
                else:
                    self.parse_expression(node, b, close)
            self.pos = self.after_close(close, limit)
        self.parse_embedded_block(node, limit)

    def parse_while(self, parent, limit):
        node = parent.add("While")
        self.pos += 1
        self.parse_paren_condition(node, limit)
        self.parse_embedded_block(node, limit)

    def parse_do(self, parent, limit):
        node = parent.add("DoWhile")
        self.pos += 1
        self.parse_embedded_block(node, limit)
        if self.is_kw(self.pos, "while"):
            self.pos += 1
            self.parse_paren_condition(node, limit)
        if self.is_punct(self.pos, ";"):
            self.pos += 1

    def parse_switch(self, parent, limit):
        node = parent.add("Switch")
        self.pos += 1
        self.parse_paren_condition(node, limit)
        if self.is_punct(self.pos, "{"):
            self.parse_block(node, limit, False)

    def parse_case(self, parent, limit):
        is_default = self.tokat(self.pos).text == "default"
        node = parent.add("Case")
        self.pos += 1
        end = self.pos
        depth = 0
        while end < limit and end < len(self.sig):
            t = self.tokat(end)
            depth += self.open_delta(t)
            if depth < 0:
                break
            if depth == 0 and t.kind == PUNCT and t.text in (":", ";"):
                break
            end += 1
        if not is_default:
            self.parse_expression(node, self.pos, end)
        self.pos = end
        if self.is_punct(self.pos, ":") or self.is_punct(self.pos, ";"):
            self.pos += 1

    def parse_class(self, parent, limit):
        node = parent.add("Class")
        self.pos += 1
        depth = 0
        while self.pos < limit and self.pos < len(self.sig):
            t = self.tokat(self.pos)
            if depth == 0 and t.kind == PUNCT and t.text in ("{", ";", "}"):
                break
            depth += self.open_delta(t)
            self.pos += 1
        if self.is_punct(self.pos, ";"):
            self.pos += 1
            return
        if self.is_punct(self.pos, "{"):
            close = self.find_close(self.pos, limit)
            self.pos += 1
            self.parse_statements(node, close, True, True)
            self.pos = self.after_close(close, limit)

    def parse_namespace(self, parent, limit):
        node = parent.add("Other")
        self.pos += 1
        while self.pos < limit and self.pos < len(self.sig) and \
                not self.is_punct(self.pos, "{") and not self.is_punct(self.pos, ";") and \
                not self.is_punct(self.pos, "}"):
            self.pos += 1
        if self.is_punct(self.pos, ";"):
            self.pos += 1
            return
        if self.is_punct(self.pos, "{"):
            close = self.find_close(self.pos, limit)
            self.pos += 1
            self.parse_statements(node, close, True, True)
            self.pos = self.after_close(close, limit)

    def parse_import_statement(self, parent, limit):
        line = self.tokat(self.pos).line
        self.pos += 1
        while self.pos < limit and self.pos < len(self.sig) and self.tokat(self.pos).line == line:
            if self.is_punct(self.pos, ";"):
                self.pos += 1
                break
            self.pos += 1
        parent.add("Import")

    def find_statement_end(self, frm, limit):
        depth = 0
        i = frm
        while i < limit and i < len(self.sig):
            t = self.tokat(i)
            if depth == 0 and t.kind == PUNCT and t.text in (";", "}"):
                return i
            depth += self.open_delta(t)
            if depth < 0:
                return i
            i += 1
        return min(limit, len(self.sig))

    def parse_mixed(self, parent, limit, allow_function):
        start = self.pos
        i = self.pos
        saw_assign = False
        saw_class_kw = False
        while i < limit and i < len(self.sig):
            t = self.tokat(i)
            if t.kind == KEYWORD and t.text in CLASS_KW:
                saw_class_kw = True
            if t.kind == PUNCT:
                if t.text == ";":
                    self.parse_simple_range(parent, start, i)
                    self.pos = i + 1
                    return
                if t.text == "}":
                    self.parse_simple_range(parent, start, i)
                    self.pos = i
                    return
                if t.text in ("(", "["):
                    i = self.after_close(self.find_close(i, limit), limit)
                    continue
                if t.text == "=":
                    saw_assign = True
                if t.text == "{":
                    init_continuation = (not saw_class_kw) and (
                        saw_assign or (i > start and self.tokat(i - 1).kind == IDENT))
                    if init_continuation:
                        i = self.after_close(self.find_close(i, limit), limit)
                        continue
                    self.decide_braced(parent, start, i, limit, allow_function)
                    return
            i += 1
        self.parse_simple_range(parent, start, min(limit, len(self.sig)))
        self.pos = min(limit, len(self.sig))

    def decide_braced(self, parent, start, brace, limit, allow_function):
        if brace == start:
            self.pos = brace
            self.parse_block(parent, limit, False)
            return
        has_class_kw = False
        has_guard_kw = False
        first_open = None
        first_close = None
        depth = 0
        i = start
        while i < brace:
            t = self.tokat(i)
            if depth == 0 and t.kind == KEYWORD:
                if t.text in CLASS_KW:
                    has_class_kw = True
                if t.text in GUARD_KW:
                    has_guard_kw = True
            if depth == 0 and t.kind == PUNCT and t.text == "(" and first_open is None:
                first_open = i
                first_close = self.find_close(i, brace)
            depth += self.open_delta(t)
            i += 1

        if has_class_kw and first_open is None:
            node = parent.add("Class")
            self.pos = brace
            close = self.find_close(self.pos, limit)
            self.pos += 1
            self.parse_statements(node, close, True, True)
            self.pos = self.after_close(close, limit)
            return

        head_ok = allow_function and not has_guard_kw and first_open is not None and \
            first_open > start and self.tokat(first_open - 1).kind == IDENT
        if head_ok:
            fn = parent.add("Function")
            params = fn.add("ParameterList")
            self.parse_parameters(params, first_open + 1, first_close)
            self.pos = brace
            self.parse_block(fn, limit, False)
            return

        node = parent.add("Other")
        self.pos = brace
        self.parse_block(node, limit, allow_function)

    def parse_parameters(self, params, b, e):
        if b >= e:
            return
        for fb, fe in self.split_top_level(b, e, ","):
            if fb >= fe:
                continue
            if fe - fb == 1 and self.is_kw(fb, "void"):
                continue
            params.add("Parameter")

    # -- declarations and expressions

    def split_top_level(self, b, e, sep):
        parts = []
        e = min(e, len(self.sig))
        depth = 0
        frag = b
        i = b
        while i < e:
            t = self.tokat(i)
            if depth == 0 and t.kind == PUNCT and t.text == sep:
                parts.append((frag, i))
                frag = i + 1
                i += 1
                continue
            depth += self.open_delta(t)
            i += 1
        parts.append((frag, e))
        return parts

    def contains_import(self, b, e):
        return any(self.tokat(i).kind == IMPORT for i in range(b, e))

    def parse_simple_range(self, parent, b, e):
        e = min(e, len(self.sig))
        if b >= e:
            return
        if self.contains_import(b, e):
            parent.add("Import")
            return
        decl = False
        first = self.tokat(b)
        if first.kind == KEYWORD and first.text in TYPE_START:
            decl = True
        if not decl:
            depth = 0
            saw_assign = False
            for i in range(b, e - 1):
                t = self.tokat(i)
                if depth == 0 and t.kind == PUNCT and t.text in ASSIGN_OPS:
                    saw_assign = True
                if depth == 0:
                    nxt = self.tokat(i + 1)
                    t_namey = t.kind == IDENT or (t.kind == KEYWORD and t.text in TYPE_START)
                    if t_namey and nxt.kind == IDENT:
                        decl = True
                        break
                    if t.kind == PUNCT and t.text == ">" and nxt.kind == IDENT and \
                            not saw_assign and first.kind == IDENT:
                        decl = True
                        break
                depth += self.open_delta(t)
        if decl:
            self.parse_declaration(parent, b, e)
        else:
            self.parse_expression(parent, b, e)

    def parse_declaration(self, parent, b, e):
        node = parent.add("Declaration")
        for fb, fe in self.split_top_level(b, e, ","):
            if fb >= fe:
                continue
            depth = 0
            handled = False
            for i in range(fb, fe):
                t = self.tokat(i)
                if depth == 0 and t.kind == PUNCT and t.text == "=":
                    self.parse_expression(node, i + 1, fe)
                    handled = True
                    break
                depth += self.open_delta(t)
            if handled:
                continue
            depth = 0
            i = fb
            while i < fe:
                t = self.tokat(i)
                if depth == 0 and t.kind == PUNCT and t.text == "{":
                    close = self.find_close(i, fe)
                    self.parse_brace_group(node, i + 1, close)
                    i = close
                    continue
                depth += self.open_delta(t)
                i += 1

    def parse_brace_group(self, parent, b, e):
        block = parent.add("Block")
        e = min(e, len(self.sig))
        has_semi = False
        depth = 0
        for i in range(b, e):
            t = self.tokat(i)
            if depth == 0 and t.kind == PUNCT and t.text == ";":
                has_semi = True
                break
            depth += self.open_delta(t)
        if has_semi:
            save = self.pos
            self.pos = b
            self.parse_statements(block, e, False, True)
            self.pos = save
        elif b < e:
            for fb, fe in self.split_top_level(b, e, ","):
                self.parse_expression(block, fb, fe)

    def parse_expression(self, parent, b, e):
        e = min(e, len(self.sig))
        if b >= e:
            return

        fragments = self.split_top_level(b, e, ",")
        if len(fragments) > 1:
            for fb, fe in fragments:
                self.parse_expression(fb_parent := parent, fb, fe)
            return

        depth = 0
        for i in range(b, e):
            t = self.tokat(i)
            if depth == 0 and t.kind == PUNCT and t.text == "?":
                colon = self.find_ternary_colon(i + 1, e)
                if colon < e:
                    node = parent.add("Ternary")
                    self.parse_expression(node, b, i)
                    self.parse_expression(node, i + 1, colon)
                    self.parse_expression(node, colon + 1, e)
                    return
            depth += self.open_delta(t)

        for pass_ in range(2):
            ops = ASSIGN_OPS if pass_ == 0 else BINARY_OPS
            depth = 0
            for i in range(b, e):
                t = self.tokat(i)
                if depth == 0 and i > b and t.kind == PUNCT and t.text in ops and \
                        not self.op_like(self.tokat(i - 1)):
                    node = parent.add("BinaryOp")
                    self.parse_expression(node, b, i)
                    self.parse_expression(node, i + 1, e)
                    return
                if depth == 0 and pass_ == 1 and i > b and t.kind == KEYWORD and \
                        t.text == "instanceof":
                    node = parent.add("BinaryOp")
                    self.parse_expression(node, b, i)
                    self.parse_expression(node, i + 1, e)
                    return
                depth += self.open_delta(t)

        first = self.tokat(b)
        if e - b >= 2 and first.kind == PUNCT and first.text in UNARY_OPS:
            node = parent.add("UnaryOp")
            self.parse_expression(node, b + 1, e)
            return
        last = self.tokat(e - 1)
        if e - b >= 2 and last.kind == PUNCT and last.text in ("++", "--"):
            node = parent.add("UnaryOp")
            self.parse_expression(node, b, e - 1)
            return

        if last.kind == PUNCT and last.text == ")":
            open_ = self.match_backward(b, e - 1)
            if open_ < e - 1 and open_ > b and self.tokat(open_ - 1).kind == IDENT:
                node = parent.add("Call")
                self.parse_expression(node, open_ + 1, e - 1)
                return
        if last.kind == PUNCT and last.text == "]":
            open_ = self.match_backward(b, e - 1)
            if open_ < e - 1 and open_ > b:
                node = parent.add("Other")
                self.parse_expression(node, open_ + 1, e - 1)
                return

        if e - b == 1:
            t = self.tokat(b)
            if t.kind == IDENT:
                parent.add("Identifier")
            elif t.kind in (LITERAL, STRING):
                parent.add("Literal")
            elif t.kind == KEYWORD:
                if t.text in ("true", "false", "null", "nullptr"):
                    parent.add("Literal")
                else:
                    parent.add("Other")
            elif t.kind == IMPORT:
                parent.add("Import")
            return

        if first.kind == PUNCT and first.text == "(":
            close = self.find_close(b, e)
            if close == e - 1:
                self.parse_expression(parent, b + 1, e - 1)
                return
            node = parent.add("Other")
            self.parse_expression(node, b + 1, close)
            self.parse_expression(node, close + 1, e)
            return
        if first.kind == PUNCT and first.text == "{":
            close = self.find_close(b, e)
            if close == e - 1:
                self.parse_brace_group(parent, b + 1, e - 1)
                return
            node = parent.add("Other")
            self.parse_brace_group(node, b + 1, close)
            self.parse_expression(node, close + 1, e)
            return
        if first.kind == KEYWORD and first.text == "new":
            node = parent.add("Other")
            self.parse_expression(node, b + 1, e)
            return

        node = parent.add("Other")
        i = b
        while i < e:
            t = self.tokat(i)
            if t.kind == PUNCT and t.text in ("(", "[", "{"):
                close = self.find_close(i, e)
                if t.text == "{":
                    self.parse_brace_group(node, i + 1, close)
                else:
                    self.parse_expression(node, i + 1, close)
                i = close + 1 if close < e else e
                continue
            if t.kind == IDENT:
                node.add("Identifier")
            elif t.kind in (LITERAL, STRING):
                node.add("Literal")
            elif t.kind == KEYWORD and t.text in ("true", "false", "null", "nullptr"):
                node.add("Literal")
            i += 1

    @staticmethod
    def op_like(t):
        return t.kind == PUNCT and t.text in OP_LIKE

    def find_ternary_colon(self, frm, e):
        depth = 0
        for i in range(frm, e):
            t = self.tokat(i)
            if t.kind != PUNCT:
                continue
            if t.text in ("(", "[", "{"):
                depth += 1
            elif t.text in (")", "]", "}"):
                if depth == 0:
                    return e
                depth -= 1
            elif depth == 0 and t.text == ":":
                return i
            elif depth == 0 and t.text == ";":
                return e
        return e


CONTROL_OWNERS = {"If", "Else", "Switch", "For", "While", "DoWhile"}


def syntax_metrics(root, toks):
    stats = {
        "max_nesting": 0, "max_depth": 0, "blocks": 0, "block_children": 0,
        "params": [], "leaves": 0, "leaf_depth": 0,
        "type_counts": {t: 0 for t in NODE_TYPES},
        "type_depth": {t: 0 for t in NODE_TYPES},
        "bigrams": {}, "edges": 0, "functions": 0,
    }

    def visit(n, parent, has_parent, ctrl):
        if n.type == "Block" and has_parent and parent in CONTROL_OWNERS:
            ctrl += 1
        stats["max_nesting"] = max(stats["max_nesting"], ctrl)
        stats["max_depth"] = max(stats["max_depth"], n.depth)
        stats["type_counts"][n.type] += 1
        stats["type_depth"][n.type] += n.depth
        if has_parent:
            key = parent + ">" + n.type
            stats["bigrams"][key] = stats["bigrams"].get(key, 0) + 1
            stats["edges"] += 1
        if n.type == "Block":
            stats["blocks"] += 1
            stats["block_children"] += len(n.children)
        if n.type == "Function":
            stats["functions"] += 1
            count = 0
            for ch in n.children:
                if ch.type == "ParameterList":
                    count += sum(1 for p in ch.children if p.type == "Parameter")
            stats["params"].append(count)
        if not n.children:
            stats["leaves"] += 1
            stats["leaf_depth"] += n.depth
        for ch in n.children:
            visit(ch, n.type, True, ctrl)

    visit(root, "TranslationUnit", False, 0)

    out = {
        "max_nesting_depth": stats["max_nesting"],
        "max_ast_depth": stats["max_depth"],
        "avg_branching_factor": (stats["block_children"] / stats["blocks"]) if stats["blocks"] else 0.0,
        "avg_leaf_depth": (stats["leaf_depth"] / stats["leaves"]) if stats["leaves"] else 0.0,
    }
    if stats["params"]:
        n = len(stats["params"])
        mean = sum(stats["params"]) / n
        var = sum((p - mean) ** 2 for p in stats["params"]) / n
        out["avg_params_per_function"] = mean
        out["param_count_stddev"] = math.sqrt(var)
    else:
        out["avg_params_per_function"] = 0.0
        out["param_count_stddev"] = 0.0
    out["avg_depth_per_type"] = {
        t: (stats["type_depth"][t] / stats["type_counts"][t]) if stats["type_counts"][t] else 0.0
        for t in NODE_TYPES}
    out["bigram_freq"] = {
        k: v / stats["edges"] for k, v in sorted(stats["bigrams"].items())} if stats["edges"] else {}
    kw_counts = {}
    total = 0
    for t in toks:
        if t.kind == KEYWORD:
            kw_counts[t.text] = kw_counts.get(t.text, 0) + 1
            total += 1
    out["keyword_freq"] = {w: c / total for w, c in sorted(kw_counts.items())} if total else {}
    out["function_count"] = stats["functions"]
    return out


# ---------------------------------------------------------------------------
# layout metrics

def layout_metrics(src, toks, function_count):
    lines = count_lines(src)

    def density(count):
        return math.log((count + 1) / (lines + 1))

    spans = []
    start = 0
    for i, ch in enumerate(src):
        if ch == "\n":
            end = i
            if end > start and src[end - 1] == "\r":
                end -= 1
            spans.append((start, end))
            start = i + 1
    if start < len(src):
        spans.append((start, len(src)))

    # control structures with else-if pairing
    ctrl = 0
    kws = [t for t in toks if t.kind not in (WS, COMMENT)]
    i = 0
    while i < len(kws):
        t = kws[i]
        if t.kind == KEYWORD:
            if t.text == "else" and i + 1 < len(kws) and kws[i + 1].kind == KEYWORD \
                    and kws[i + 1].text == "if":
                ctrl += 1
                i += 2
                continue
            if t.text in ("do", "if", "else", "switch", "for", "while"):
                ctrl += 1
        i += 1

    # ternaries
    sig = [t for t in toks if t.kind not in (WS, COMMENT, MACRO)]
    ternary = 0
    for i, t in enumerate(sig):
        if t.kind != PUNCT or t.text != "?":
            continue
        depth = 0
        for u in sig[i + 1:]:
            if u.kind != PUNCT:
                continue
            if u.text in ("(", "["):
                depth += 1
            elif u.text in (")", "]"):
                if depth == 0:
                    break
                depth -= 1
            elif depth == 0:
                if u.text == ":":
                    ternary += 1
                    break
                if u.text in (";", "{", "}"):
                    break

    token_count = sum(1 for t in toks if t.kind != WS)
    comment_count = sum(1 for t in toks if t.kind == COMMENT)
    literal_count = sum(1 for t in toks if t.kind in (LITERAL, STRING))
    keyword_count = sum(1 for t in toks if t.kind == KEYWORD)

    macro_count = 0
    for t in toks:
        if t.kind != MACRO:
            continue
        i = 0
        while i < len(t.text) and t.text[i] in "# \t":
            i += 1
        b = i
        while i < len(t.text) and "a" <= t.text[i] <= "z":
            i += 1
        if t.text[b:i] != "include":
            macro_count += 1

    open_braces = 0
    newline_braces = 0
    for t in toks:
        if t.kind == PUNCT and t.text == "{":
            open_braces += 1
            p = t.offset
            while p > 0 and src[p - 1] in " \t":
                p -= 1
            if p == 0 or src[p - 1] in "\n\r":
                newline_braces += 1

    tabs = src.count("\t")
    spaces = src.count(" ")
    ws_bytes = sum(1 for c in src if c in " \t\r\n\v\f")

    empty_lines = 0
    indented = 0
    tab_indented = 0
    for b, e in spans:
        content = src[b:e]
        if all(c in " \t" for c in content):
            empty_lines += 1
        if content and content[0] in " \t":
            indented += 1
            if content[0] == "\t":
                tab_indented += 1

    m = {
        "control_structure_density": density(ctrl),
        "ternary_operator_density": density(ternary),
        "token_density": density(token_count),
        "comment_density": density(comment_count),
        "literal_density": density(literal_count),
        "keyword_density": density(keyword_count),
        "function_density": density(function_count),
        "macro_density": density(macro_count),
        "tab_density": density(tabs),
        "space_density": density(spaces),
        "empty_line_density": density(empty_lines),
        "avg_line_length": 0.0,
        "line_length_stddev": 0.0,
        "whitespace_ratio": ws_bytes / max(1, len(src) - ws_bytes),
        "newline_before_open_brace_ratio":
            (newline_braces / open_braces) if open_braces else 0.0,
        "tab_indent_ratio": (tab_indented / indented) if indented else 0.0,
        "line_length_histogram": [0.0] * 16,
    }
    if spans:
        n = len(spans)
        lens = [e - b for b, e in spans]
        mean = sum(lens) / n
        var = sum((x - mean) ** 2 for x in lens) / n
        m["avg_line_length"] = mean
        m["line_length_stddev"] = math.sqrt(var)
        hist = [0.0] * 16
        for x in lens:
            hist[min(x // 10, 15)] += 1.0
        m["line_length_histogram"] = [h / n for h in hist]
    return m


# ---------------------------------------------------------------------------

def dump_tree(node, indent=0, out=None):
    if out is None:
        out = []
    out.append("  " * indent + node.type)
    for ch in node.children:
        dump_tree(ch, indent + 1, out)
    return out


def analyze(path, lang, keywords):
    with open(path, "rb") as fh:
        raw = fh.read()
    if any(b >= 0x80 for b in raw):
        raise SystemExit(f"{path}: golden fixtures must be ASCII")
    src = raw.decode("ascii")
    toks, diags = tokenize(src, lang, keywords)
    assert "".join(t.text for t in toks) == src, f"coverage broken for {path}"
    assert not diags, f"unexpected lex diagnostics in {path}: {diags}"
    root = Parser(toks).run()
    syn = syntax_metrics(root, toks)
    fn_count = syn.pop("function_count")
    return {
        "language": lang,
        "line_count": count_lines(src),
        "char_count": len(src),
        "lexical": lexical_profile(toks, lang),
        "layout": layout_metrics(src, toks, fn_count),
        "syntax": syn,
    }, root


def main():
    dump = "--dump-trees" in sys.argv
    golden = os.path.join(ROOT, "fixtures", "golden")
    keywords = {lang: load_keywords(lang) for lang in ("cpp", "java")}
    result = {}
    for lang, ext in (("cpp", ".cpp"), ("java", ".java")):
        d = os.path.join(golden, lang)
        for name in sorted(os.listdir(d)):
            if not name.endswith(ext):
                continue
            rel = f"{lang}/{name}"
            data, root = analyze(os.path.join(d, name), lang, keywords[lang])
            result[rel] = data
            if dump:
                print(f"==== {rel}")
                print("\n".join(dump_tree(root)))
    out_path = os.path.join(golden, "expected.json")
    with open(out_path, "w") as fh:
        json.dump(result, fh, indent=1, sort_keys=True)
        fh.write("\n")
    print(f"wrote {out_path} ({len(result)} files)")


if __name__ == "__main__":
    main()
