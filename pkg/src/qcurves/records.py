"""Plain-text curve records: one ``key: value`` per line, records separated by ``---``.

Integers are hex (optional leading ``-``), so a record round-trips exactly.
Keys: version, label, p, delta, d, s, twisted, and optionally a4, a6 (degree
1 only) and the certificate fields order, n, h, r, t.
"""

from __future__ import annotations

from dataclasses import dataclass, fields
from importlib import resources
from pathlib import Path
from typing import List, Optional

from .arith import FieldCtx, decode_int, encode_int
from .counting import OrderCertificate
from .families import FamilyCurve, build_family, build_gls

FORMAT_VERSION = 1
_INT_KEYS = ("p", "delta", "d", "s", "a4", "a6", "order", "n", "h", "r", "t")


class RecordError(ValueError):
    pass


@dataclass(frozen=True)
class CurveSpec:
    p: int
    delta: int
    d: int
    s: int = 0
    twisted: bool = False
    label: str = ""
    a4: Optional[int] = None
    a6: Optional[int] = None
    order: Optional[int] = None
    n: Optional[int] = None
    h: Optional[int] = None
    r: Optional[int] = None
    t: Optional[int] = None

    def ctx(self) -> FieldCtx:
        return FieldCtx(self.p, self.delta)

    def build(self) -> FamilyCurve:
        ctx = self.ctx()
        if self.d == 1:
            if self.a4 is None or self.a6 is None:
                raise RecordError("degree-1 records need a4 and a6")
            return build_gls(ctx, self.a4, self.a6, twisted=self.twisted)
        return build_family(ctx, self.d, self.s, self.twisted)

    def certificate(self) -> Optional[OrderCertificate]:
        if self.order is None or self.n is None:
            return None
        h = self.h if self.h is not None else self.order // self.n
        t = self.t if self.t is not None else self.p * self.p + 1 - self.order
        return OrderCertificate(self.order, self.n, h, self.r, t, "claimed")


def format_record(spec: CurveSpec) -> str:
    lines = [f"version: {FORMAT_VERSION}"]
    if spec.label:
        lines.append(f"label: {spec.label}")
    for f in fields(spec):
        v = getattr(spec, f.name)
        if f.name == "label" or v is None:
            continue
        if f.name == "twisted":
            lines.append(f"twisted: {'yes' if v else 'no'}")
        else:
            lines.append(f"{f.name}: {encode_int(v)}")
    return "\n".join(lines) + "\n"


def format_records(specs) -> str:
    return "---\n".join(format_record(s) for s in specs)


def _parse_one(block: str) -> CurveSpec:
    kv = {}
    for raw in block.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if ":" not in line:
            raise RecordError(f"malformed line {raw!r}")
        k, v = (x.strip() for x in line.split(":", 1))
        if k in kv:
            raise RecordError(f"duplicate key {k!r}")
        kv[k] = v
    version = int(kv.pop("version", "0"))
    if version != FORMAT_VERSION:
        raise RecordError(f"unsupported record version {version}")
    args = {}
    for k, v in kv.items():
        if k in _INT_KEYS:
            args[k] = decode_int(v)
        elif k == "twisted":
            if v not in ("yes", "no"):
                raise RecordError("twisted must be yes or no")
            args[k] = v == "yes"
        elif k == "label":
            args[k] = v
        else:
            raise RecordError(f"unknown key {k!r}")
    for k in ("p", "delta", "d"):
        if k not in args:
            raise RecordError(f"missing key {k!r}")
    return CurveSpec(**args)


def parse_records(text: str) -> List[CurveSpec]:
    blocks = [b for b in text.split("---") if b.strip()]
    return [_parse_one(b) for b in blocks]


def load_records(path) -> List[CurveSpec]:
    return parse_records(Path(path).read_text())


def bundled(name: str) -> List[CurveSpec]:
    """Records shipped in the package data directory, e.g. ``bundled("example1")``."""
    text = resources.files("qcurves").joinpath("data", f"{name}.txt").read_text()
    return parse_records(text)


BUNDLED = ("example1", "example2", "example3")
