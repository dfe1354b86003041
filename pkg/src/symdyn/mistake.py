"""Mistake functions g(n): nondecreasing, sublinear letter-change budgets."""
from __future__ import annotations

import math
from dataclasses import dataclass

from .words import InputError

FORMULAS = ("sqrt", "loglog", "log2")


@dataclass(frozen=True)
class MistakeFunction:
    """A nondecreasing budget rule.

    kind is one of ``const`` (value m), ``table`` (values for n = 1..len,
    the last value extended), or ``formula`` with name ``sqrt``
    (ceil(sqrt n)), ``loglog`` (1 + 2 floor(log2 log2 n) for n >= 4, else 1)
    or ``log2`` (offset + coef * floor(log2 n)).
    """

    kind: str
    value: int = 0
    table: tuple = ()
    name: str = ""
    coef: int = 1
    offset: int = 0

    def __post_init__(self):
        if self.kind == "const":
            if self.value < 0:
                raise InputError("constant mistake function must be >= 0")
        elif self.kind == "table":
            t = tuple(int(x) for x in self.table)
            object.__setattr__(self, "table", t)
            if not t:
                raise InputError("table mistake function needs at least one value")
            if any(x < 0 for x in t):
                raise InputError("mistake function values must be >= 0")
            if any(b < a for a, b in zip(t, t[1:])):
                raise InputError(f"mistake function table is not nondecreasing: {t}")
        elif self.kind == "formula":
            if self.name not in FORMULAS:
                raise InputError(f"unknown mistake function formula {self.name!r}; known: {FORMULAS}")
            if self.name == "log2" and (self.coef < 0 or self.offset < 0):
                raise InputError("log2 formula needs nonnegative coef and offset")
        else:
            raise InputError(f"unknown mistake function kind {self.kind!r}")

    @classmethod
    def const(cls, m: int) -> "MistakeFunction":
        return cls("const", value=int(m))

    @classmethod
    def from_table(cls, values) -> "MistakeFunction":
        return cls("table", table=tuple(values))

    @classmethod
    def sqrt(cls) -> "MistakeFunction":
        return cls("formula", name="sqrt")

    @classmethod
    def loglog(cls) -> "MistakeFunction":
        return cls("formula", name="loglog")

    @classmethod
    def log2(cls, coef: int = 1, offset: int = 0) -> "MistakeFunction":
        return cls("formula", name="log2", coef=int(coef), offset=int(offset))

    def __call__(self, n: int) -> int:
        if n < 0:
            raise InputError("mistake function argument must be >= 0")
        if self.kind == "const":
            return self.value
        if self.kind == "table":
            if n == 0:
                return self.table[0]
            return self.table[min(n, len(self.table)) - 1]
        if n == 0:
            return self(1)
        if self.name == "sqrt":
            return math.isqrt(n - 1) + 1
        if self.name == "loglog":
            return 1 if n < 4 else _loglog(n)
        return self.offset + self.coef * (n.bit_length() - 1)

    @property
    def bounded(self) -> bool:
        return self.kind in ("const", "table")

    @property
    def bound(self) -> int | None:
        if self.kind == "const":
            return self.value
        if self.kind == "table":
            return self.table[-1]
        return None

    def values(self, n_max: int) -> list:
        """[g(0), g(1), ..., g(n_max)] as a lookup table."""
        return [self(n) for n in range(n_max + 1)]

    def check_sublinear(self, n_max: int) -> bool:
        """Spot check of the declared sublinearity: g(n_max) < n_max."""
        return self(n_max) < n_max

    def describe(self) -> str:
        if self.kind == "const":
            return f"const:{self.value}"
        if self.kind == "table":
            return "table:" + ",".join(str(x) for x in self.table)
        if self.name == "log2":
            return f"log2:c={self.coef},a={self.offset}"
        return self.name

    @classmethod
    def parse(cls, text: str) -> "MistakeFunction":
        """Parse ``const:m``, a bare integer, ``table:a,b,c``, ``sqrt``, ``loglog`` or ``log2:c=..,a=..``."""
        text = str(text).strip()
        if text.lstrip("-").isdigit():
            return cls.const(int(text))
        head, _, rest = text.partition(":")
        head = head.strip().lower()
        try:
            if head == "const":
                return cls.const(int(rest))
            if head == "table":
                return cls.from_table(int(x) for x in rest.split(",") if x.strip())
            if head in ("sqrt", "loglog") and not rest:
                return cls("formula", name=head)
            if head == "log2":
                params = {"c": 1, "a": 0}
                for part in filter(None, (p.strip() for p in rest.split(","))):
                    key, _, val = part.partition("=")
                    if key not in params:
                        raise InputError(f"unknown log2 parameter {key!r}")
                    params[key] = int(val)
                return cls.log2(params["c"], params["a"])
        except ValueError as exc:
            raise InputError(f"malformed mistake function {text!r}: {exc}") from None
        raise InputError(f"malformed mistake function {text!r}")

    def to_doc(self):
        if self.kind == "const":
            return {"const": self.value}
        if self.kind == "table":
            return {"table": list(self.table)}
        if self.name == "log2":
            return {"formula": "log2", "coef": self.coef, "offset": self.offset}
        return {"formula": self.name}

    @classmethod
    def from_doc(cls, doc) -> "MistakeFunction":
        if isinstance(doc, (int, str)):
            return cls.parse(str(doc))
        if not isinstance(doc, dict):
            raise InputError(f"mistake function must be a mapping, integer or string, got {doc!r}")
        if "const" in doc:
            return cls.const(int(doc["const"]))
        if "table" in doc:
            return cls.from_table(doc["table"])
        if "formula" in doc:
            name = doc["formula"]
            if name == "log2":
                return cls.log2(int(doc.get("coef", 1)), int(doc.get("offset", 0)))
            return cls("formula", name=name)
        raise InputError(f"mistake function mapping needs const, table or formula: {doc!r}")


def _loglog(n: int) -> int:
    # floor(log2(floor(log2 n))) equals floor(log2 log2 n) for integers n >= 4
    lg = n.bit_length() - 1
    return 1 + 2 * (lg.bit_length() - 1)
