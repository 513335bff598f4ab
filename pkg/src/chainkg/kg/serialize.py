"""Graph serialization: deterministic N-Triples and Turtle, plus parsers.

Exports sort lines lexicographically so equal triple sets always produce
byte-identical documents. The Turtle reader handles exactly the subset the
writer emits (prefix header, one triple per line); N-Triples is the
interchange and snapshot format.
"""

from __future__ import annotations

from datetime import datetime, timezone
from decimal import Decimal, InvalidOperation

from chainkg.errors import ParseError, ValidationError
from chainkg.kg.terms import Iri, Literal, Term, TriplePattern, Triple, Variable
from chainkg.kg.vocab import XSD_NS
from chainkg.kg.store import Store

FORMATS = ("ntriples", "turtle")

_XSD_INTEGER = XSD_NS + "integer"
_XSD_DECIMAL = XSD_NS + "decimal"
_XSD_DATETIME = XSD_NS + "dateTime"

_ESCAPES = {"\\": "\\\\", '"': '\\"', "\n": "\\n", "\r": "\\r", "\t": "\\t"}
_UNESCAPES = {"\\": "\\", '"': '"', "n": "\n", "r": "\r", "t": "\t"}


def _escape(text: str) -> str:
    out = []
    for c in text:
        if c in _ESCAPES:
            out.append(_ESCAPES[c])
        elif ord(c) < 0x20 or ord(c) == 0x7F:
            out.append(f"\\u{ord(c):04X}")
        else:
            out.append(c)
    return "".join(out)


def _timestamp_lexical(value: datetime) -> str:
    return value.astimezone(timezone.utc).isoformat().replace("+00:00", "Z")


def _parse_timestamp(lexical: str) -> datetime:
    if lexical.endswith("Z"):
        lexical = lexical[:-1] + "+00:00"
    return datetime.fromisoformat(lexical)


def term_to_nt(term: Term) -> str:
    if isinstance(term, Iri):
        return f"<{term.value}>"
    if term.kind == "text":
        return f'"{_escape(term.value)}"'
    if term.kind == "integer":
        return f'"{term.value}"^^<{_XSD_INTEGER}>'
    if term.kind == "decimal":
        return f'"{term.value}"^^<{_XSD_DECIMAL}>'
    return f'"{_timestamp_lexical(term.value)}"^^<{_XSD_DATETIME}>'


def triple_to_nt(triple: Triple) -> str:
    return f"{term_to_nt(triple.subject)} {term_to_nt(triple.predicate)} {term_to_nt(triple.object)} ."


def export_graph(store: Store, fmt: str = "ntriples") -> str:
    if fmt not in FORMATS:
        raise ValidationError(f"unknown export format {fmt!r}")
    triples = store.triples()
    if fmt == "ntriples":
        lines = sorted(triple_to_nt(t) for t in triples)
        return "\n".join(lines) + ("\n" if lines else "")
    prefixes = store.vocab.prefix_table()
    header = [f"@prefix {prefix}: <{ns}> ." for prefix, ns in sorted(prefixes.items())]
    body = sorted(
        f"{_term_to_turtle(t.subject, prefixes)} {_term_to_turtle(t.predicate, prefixes)} "
        f"{_term_to_turtle(t.object, prefixes)} ."
        for t in triples
    )
    text = "\n".join(header) + "\n"
    if body:
        text += "\n" + "\n".join(body) + "\n"
    return text


def _term_to_turtle(term: Term, prefixes: dict[str, str]) -> str:
    if isinstance(term, Iri):
        best = None
        for prefix, ns in prefixes.items():
            if term.value.startswith(ns) and (best is None or len(ns) > len(prefixes[best])):
                local = term.value[len(ns):]
                if _is_safe_local(local):
                    best = prefix
        if best is not None:
            return f"{best}:{term.value[len(prefixes[best]):]}"
        return f"<{term.value}>"
    return term_to_nt(term)


def _is_safe_local(local: str) -> bool:
    return bool(local) and all(c.isalnum() or c in "_-" for c in local)


def import_graph(store: Store, text: str, fmt: str = "ntriples") -> int:
    """Parse a document and insert its triples; returns the newly added count."""
    if fmt not in FORMATS:
        raise ValidationError(f"unknown import format {fmt!r}")
    prefixes: dict[str, str] = {}
    triples: list[Triple] = []
    # Split on newlines only: exotic Unicode line separators may appear raw
    # inside literals and must not break framing.
    for line_no, raw in enumerate(text.split("\n"), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("@prefix"):
            if fmt != "turtle":
                raise ParseError("@prefix is only valid in Turtle", line=line_no)
            _parse_prefix(line, prefixes, line_no)
            continue
        terms, rest = _parse_terms(line, prefixes, line_no, allow_variables=False)
        if rest != ".":
            raise ParseError("triple must end with ' .'", line=line_no)
        if len(terms) != 3:
            raise ParseError(f"expected 3 terms, found {len(terms)}", line=line_no)
        subject, predicate, obj = terms
        if not isinstance(subject, Iri) or not isinstance(predicate, Iri):
            raise ParseError("subject and predicate must be IRIs", line=line_no)
        triples.append(Triple(subject, predicate, obj))
    return store.insert(triples)


def _parse_prefix(line: str, prefixes: dict[str, str], line_no: int) -> None:
    parts = line.split()
    if len(parts) != 4 or not parts[1].endswith(":") or parts[3] != ".":
        raise ParseError("malformed @prefix line", line=line_no)
    ns = parts[2]
    if not (ns.startswith("<") and ns.endswith(">")):
        raise ParseError("prefix namespace must be an <IRI>", line=line_no)
    prefixes[parts[1][:-1]] = ns[1:-1]


def parse_pattern_line(line: str, line_no: int = 1) -> TriplePattern:
    """One conjunctive query pattern: three terms, ?var for variables."""
    terms, rest = _parse_terms(line.strip(), {}, line_no, allow_variables=True)
    if rest not in ("", "."):
        raise ParseError(f"unexpected trailing {rest!r}", line=line_no)
    if len(terms) != 3:
        raise ParseError(f"expected 3 terms, found {len(terms)}", line=line_no)
    return TriplePattern(*terms)


def parse_patterns(text: str) -> list[TriplePattern]:
    patterns = []
    for line_no, raw in enumerate(text.split("\n"), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        patterns.append(parse_pattern_line(line, line_no))
    if not patterns:
        raise ParseError("pattern file contains no patterns")
    return patterns


def _parse_terms(line: str, prefixes: dict[str, str], line_no: int, allow_variables: bool):
    """Scan whitespace-separated terms off a line; returns (terms, remainder)."""
    terms = []
    i = 0
    while i < len(line):
        while i < len(line) and line[i].isspace():
            i += 1
        if i >= len(line):
            break
        if line[i] == "." and i == len(line) - 1:
            return terms, "."
        if len(terms) == 3:
            return terms, line[i:]
        term, i = _parse_term(line, i, prefixes, line_no, allow_variables)
        terms.append(term)
    return terms, ""


def _parse_term(line: str, i: int, prefixes: dict[str, str], line_no: int, allow_variables: bool):
    c = line[i]
    if c == "<":
        end = line.find(">", i)
        if end < 0:
            raise ParseError("unterminated IRI", line=line_no)
        return Iri(line[i + 1 : end]), end + 1
    if c == "?":
        if not allow_variables:
            raise ParseError("variables are not allowed here", line=line_no)
        j = i + 1
        while j < len(line) and (line[j].isalnum() or line[j] == "_"):
            j += 1
        if j == i + 1:
            raise ParseError("variable needs a name", line=line_no)
        return Variable(line[i + 1 : j]), j
    if c == '"':
        lexical, j = _parse_quoted(line, i, line_no)
        if line[j : j + 2] == "^^":
            datatype, j = _parse_datatype(line, j + 2, prefixes, line_no)
            return _typed_literal(lexical, datatype, line_no), j
        return Literal.text(lexical), j
    # prefixed name
    j = i
    while j < len(line) and not line[j].isspace():
        j += 1
    token = line[i:j]
    if ":" not in token:
        raise ParseError(f"cannot parse term {token!r}", line=line_no)
    prefix, local = token.split(":", 1)
    if prefix not in prefixes:
        raise ParseError(f"unknown prefix {prefix!r}", line=line_no)
    return Iri(prefixes[prefix] + local), j


def _parse_quoted(line: str, i: int, line_no: int) -> tuple[str, int]:
    out = []
    j = i + 1
    while j < len(line):
        c = line[j]
        if c == "\\":
            escape = line[j + 1] if j + 1 < len(line) else ""
            if escape in _UNESCAPES:
                out.append(_UNESCAPES[escape])
                j += 2
            elif escape in ("u", "U"):
                width = 4 if escape == "u" else 8
                digits = line[j + 2 : j + 2 + width]
                if len(digits) != width:
                    raise ParseError("truncated unicode escape", line=line_no)
                try:
                    out.append(chr(int(digits, 16)))
                except ValueError:
                    raise ParseError(f"bad unicode escape \\{escape}{digits}", line=line_no) from None
                j += 2 + width
            else:
                raise ParseError("bad escape in literal", line=line_no)
        elif c == '"':
            return "".join(out), j + 1
        else:
            out.append(c)
            j += 1
    raise ParseError("unterminated literal", line=line_no)


def _parse_datatype(line: str, i: int, prefixes: dict[str, str], line_no: int) -> tuple[str, int]:
    if i < len(line) and line[i] == "<":
        end = line.find(">", i)
        if end < 0:
            raise ParseError("unterminated datatype IRI", line=line_no)
        return line[i + 1 : end], end + 1
    j = i
    while j < len(line) and not line[j].isspace():
        j += 1
    token = line[i:j]
    if ":" not in token:
        raise ParseError(f"cannot parse datatype {token!r}", line=line_no)
    prefix, local = token.split(":", 1)
    if prefix not in prefixes:
        raise ParseError(f"unknown prefix {prefix!r}", line=line_no)
    return prefixes[prefix] + local, j


def _typed_literal(lexical: str, datatype: str, line_no: int) -> Literal:
    try:
        if datatype == _XSD_INTEGER:
            return Literal.integer(int(lexical))
        if datatype == _XSD_DECIMAL:
            return Literal.decimal(Decimal(lexical))
        if datatype == _XSD_DATETIME:
            return Literal.timestamp(_parse_timestamp(lexical))
        if datatype == XSD_NS + "string":
            return Literal.text(lexical)
    except (ValueError, InvalidOperation) as exc:
        raise ParseError(f"bad {datatype.rsplit('#', 1)[-1]} literal {lexical!r}: {exc}", line=line_no) from None
    raise ParseError(f"unsupported literal datatype <{datatype}>", line=line_no)
