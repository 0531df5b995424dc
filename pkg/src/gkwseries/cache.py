"""On-disk cache of computed tables, one rational function per file.

Layout under the cache root::

    <variant>/psi_<j>.rf
    <variant>/col_<p>/a_<p>_<t>.rf
    <variant>/at_<x>_<y>/...        same layout, values specialized at (x, y)

Writes go through a temporary file and ``os.replace`` so concurrent readers
never observe a partial file.
"""

from __future__ import annotations

import os
import tempfile
from fractions import Fraction
from pathlib import Path

from .exact import RatFunc2, rf_parse_with_header, rf_serialize

KIND_NAMES = {
    ("GKW", "psi"): "PSI",
    ("GKW", "grid"): "A",
    ("MR", "psi"): "LAMBDA",
    ("MR", "grid"): "B",
}


def _point_dir(key) -> str | None:
    if key is None:
        return None
    _, x, y = key

    def fmt(q: Fraction):
        return str(q.numerator) if q.denominator == 1 else f"{q.numerator}o{q.denominator}"

    return f"at_{fmt(x)}_{fmt(y)}"


class TableCache:
    def __init__(self, root: str | os.PathLike):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)

    def _base(self, variant: str, domain_key) -> Path:
        base = self.root / variant.lower()
        sub = _point_dir(domain_key)
        return base / sub if sub else base

    def path(self, variant: str, domain_key, kind: str, idx) -> Path:
        base = self._base(variant, domain_key)
        if kind == "psi":
            return base / f"psi_{idx}.rf"
        p, t = idx
        return base / f"col_{p}" / f"a_{p}_{t}.rf"

    def load(self, variant: str, domain_key, kind: str, idx) -> RatFunc2 | None:
        path = self.path(variant, domain_key, kind, idx)
        try:
            text = path.read_text(encoding="ascii")
        except FileNotFoundError:
            return None
        _, rf = rf_parse_with_header(text)
        return rf

    def store(self, variant: str, domain_key, kind: str, idx, value: RatFunc2) -> Path:
        path = self.path(variant, domain_key, kind, idx)
        path.parent.mkdir(parents=True, exist_ok=True)
        idx_text = str(idx) if kind == "psi" else f"{idx[0]},{idx[1]}"
        header = {"variant": variant, "kind": KIND_NAMES[(variant, kind)], "idx": idx_text}
        text = rf_serialize(value, header)
        fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=".tmp-", suffix=".rf")
        try:
            with os.fdopen(fd, "w", encoding="ascii", newline="\n") as fh:
                fh.write(text)
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
        return path

    def files(self):
        return sorted(self.root.rglob("*.rf"))
