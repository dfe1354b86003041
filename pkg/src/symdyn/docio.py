"""Shift description documents (YAML or JSON) with line/field diagnostics."""
from __future__ import annotations

import json
import re
from pathlib import Path

import yaml

from .words import ConstructionError, InputError
from .zoo import ShiftSpec, spec_from_doc


class DocumentError(InputError):
    """A document that does not describe a valid shift."""

    def __init__(self, message: str, line: int | None = None, field: str | None = None, source: str = "<document>"):
        self.line, self.field, self.source = line, field, source
        where = source if line is None else f"{source}:{line}"
        super().__init__(f"{where}: {message}")


def _key_lines(node, out: dict, values: list, parent=None):
    """Record the (1-based) line of each mapping key and of each value scalar."""
    if isinstance(node, yaml.MappingNode):
        for k, v in node.value:
            out.setdefault(str(k.value), k.start_mark.line + 1)
            _key_lines(v, out, values, str(k.value))
    elif isinstance(node, yaml.SequenceNode):
        for v in node.value:
            _key_lines(v, out, values, parent)
    elif node is not None:
        values.append((str(node.value), node.start_mark.line + 1, parent))


_FIELD = re.compile(r"field '([^']+)'|^(\w+) must be")
_QUOTED = re.compile(r"'([^']+)'|\{'([^']+)'")


def _locate(msg: str, lines: dict, values: list):
    m = _FIELD.search(msg)
    field = (m.group(1) or m.group(2)) if m else None
    if field is None and "family" in msg:
        field = "family"
    if field is not None:
        return lines.get(field, 1), field
    # fall back to the first value or key containing a quoted token
    for q in _QUOTED.finditer(msg):
        tok = q.group(1) or q.group(2)
        for val, line, parent in values:
            if tok in val:
                return line, parent
        if tok in lines:
            return lines[tok], tok
    return 1, None




def parse_shift_spec(text: str, source: str = "<document>") -> ShiftSpec:
    """Parse a YAML/JSON shift description into a validated spec."""
    try:
        node = yaml.compose(text, Loader=yaml.SafeLoader)
        doc = yaml.load(text, Loader=_TextLoader)
    except yaml.YAMLError as e:
        mark = getattr(e, "problem_mark", None)
        raise DocumentError(f"not valid YAML/JSON: {getattr(e, 'problem', e)}", mark.line + 1 if mark else None,
                            source=source) from None
    if not isinstance(doc, dict):
        raise DocumentError("document must be a mapping with a 'family' field", 1, source=source)
    lines, values = {}, []
    _key_lines(node, lines, values)
    try:
        return spec_from_doc(doc)
    except (InputError, ConstructionError, KeyError, TypeError, ValueError) as e:
        msg = str(e) if not isinstance(e, KeyError) else f"missing field {e.args[0]!r}"
        line, field = _locate(msg, lines, values)
        raise DocumentError(msg, line, field, source) from None


def load_shift_spec(path) -> ShiftSpec:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise DocumentError(f"cannot read shift description: {e.strerror}", source=str(path)) from None
    return parse_shift_spec(text, str(path))


def dump_shift_spec(spec: ShiftSpec, fmt: str = "yaml") -> str:
    doc = spec.to_doc()
    if fmt == "json":
        return json.dumps(doc, sort_keys=True, indent=2) + "\n"
    return yaml.safe_dump(doc, sort_keys=True, default_flow_style=False, allow_unicode=True)


class _TextLoader(yaml.SafeLoader):
    """SafeLoader that keeps digit words such as 0110 as text."""


def _is_int(node) -> bool:
    return isinstance(node, yaml.ScalarNode) and node.tag == "tag:yaml.org,2002:int"


def _scalar(loader, node):
    # a leading zero marks a word, never an octal number
    if _is_int(node) and len(node.value) > 1 and node.value[0] == "0":
        return node.value
    return loader.construct_object(node, deep=True)


def _seq_as_text(loader, node):
    return [item.value if _is_int(item) else _scalar(loader, item) for item in node.value]


def _map_with_text_keys(loader, node):
    return {(k.value if _is_int(k) else _scalar(loader, k)): _scalar(loader, v) for k, v in node.value}


_TextLoader.add_constructor("tag:yaml.org,2002:seq", _seq_as_text)
_TextLoader.add_constructor("tag:yaml.org,2002:map", _map_with_text_keys)
