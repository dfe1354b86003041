"""On-disk memo of language counts and word lists.

One text file per (shift fingerprint, n)::

    symdyn-cache 1
    fingerprint <hex>
    n <int>
    counts <c0> <c1> ... <cn>
    words <k>            (or "words -" when no list is stored)
    <one word per line, symbol indices separated by spaces>
    sha256 <hex digest of every line above>

Entries that fail to parse or whose digest does not match are treated as
missing and rewritten on the next store.
"""
from __future__ import annotations

import hashlib
import os
import tempfile
from pathlib import Path

MAGIC = "symdyn-cache 1"
ENV_VAR = "SYMDYN_CACHE_DIR"


def default_cache_dir() -> Path | None:
    val = os.environ.get(ENV_VAR)
    return Path(val) if val else None


class CountCache:
    def __init__(self, root):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)
        self.corrupt = 0

    def path(self, fingerprint: str, n: int) -> Path:
        return self.root / f"{fingerprint}-{n}.txt"

    def _read(self, fingerprint: str, n: int):
        p = self.path(fingerprint, n)
        try:
            lines = p.read_text(encoding="ascii").split("\n")
        except (OSError, UnicodeDecodeError):
            return None
        try:
            if lines and lines[-1] == "":
                lines.pop()
            *body, tail = lines
            tag, digest = tail.split(" ")
            if tag != "sha256" or hashlib.sha256("\n".join(body).encode()).hexdigest() != digest:
                raise ValueError("checksum mismatch")
            if body[0] != MAGIC or body[1] != f"fingerprint {fingerprint}" or body[2] != f"n {n}":
                raise ValueError("header mismatch")
            key, *vals = body[3].split(" ")
            if key != "counts" or len(vals) != n + 1:
                raise ValueError("bad counts line")
            counts = tuple(int(v) for v in vals)
            key, k = body[4].split(" ")
            if key != "words":
                raise ValueError("bad words line")
            words = None
            if k != "-":
                rows = body[5:]
                if len(rows) != int(k):
                    raise ValueError("word list truncated")
                words = tuple(tuple(int(x) for x in r.split()) for r in rows)
            elif len(body) != 5:
                raise ValueError("trailing data")
            return counts, words
        except (ValueError, IndexError):
            self.corrupt += 1
            return None

    def get_counts(self, fingerprint: str, n: int):
        hit = self._read(fingerprint, n)
        return None if hit is None else hit[0]

    def get_words(self, fingerprint: str, n: int):
        hit = self._read(fingerprint, n)
        return None if hit is None else hit[1]

    def put_counts(self, fingerprint: str, n: int, counts, words=None):
        body = [MAGIC, f"fingerprint {fingerprint}", f"n {n}", "counts " + " ".join(str(int(c)) for c in counts)]
        if words is None:
            body.append("words -")
        else:
            body.append(f"words {len(words)}")
            body.extend(" ".join(str(a) for a in w) for w in words)
        text = "\n".join(body)
        text += "\nsha256 " + hashlib.sha256(text.encode()).hexdigest() + "\n"
        # write-then-rename: concurrent writers of one key write identical bytes
        fd, tmp = tempfile.mkstemp(dir=self.root, prefix=".tmp-")
        with os.fdopen(fd, "w", encoding="ascii") as fh:
            fh.write(text)
        os.replace(tmp, self.path(fingerprint, n))
