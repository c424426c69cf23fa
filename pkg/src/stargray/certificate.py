"""Gray-code certificates: a start vertex plus a sequence of flip positions."""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .flip_graph import Vertex, format_vertex, parse_vertex
from .partition_core import FrequencyVector, as_partition, format_partition, parse_partition

HEADER = "stargray v1"


class CertificateFormatError(ValueError):
    pass


@dataclass(frozen=True)
class HamPath:
    """A Hamilton path or cycle, stored as its vertex rows and flips.

    For a cycle the last flip leads from the last vertex back to the first.
    """

    a: FrequencyVector
    vertices: np.ndarray
    flips: np.ndarray
    kind: str = "path"

    @property
    def start(self) -> Vertex:
        return tuple(int(s) for s in self.vertices[0])

    @property
    def end(self) -> Vertex:
        return tuple(int(s) for s in self.vertices[-1])

    def __len__(self) -> int:
        return int(self.vertices.shape[0])

    def vertex_list(self) -> list[Vertex]:
        return [tuple(int(s) for s in row) for row in self.vertices]

    def reversed(self) -> "HamPath":
        if self.kind != "path":
            raise ValueError("only paths can be reversed")
        return HamPath(self.a, self.vertices[::-1].copy(), self.flips[::-1].copy(), "path")

    def to_certificate(self, view: str = "full") -> "Certificate":
        return Certificate(self.a, self.kind, self.start, tuple(int(f) for f in self.flips), view)


def flips_from_rows(rows: np.ndarray) -> np.ndarray:
    """Flip positions (1-based) between consecutive rows; 0 marks a non-edge."""
    rows = np.asarray(rows)
    if rows.shape[0] < 2:
        return np.zeros(0, dtype=np.int32)
    diff = rows[1:] != rows[:-1]
    out = np.zeros(rows.shape[0] - 1, dtype=np.int32)
    ok = diff[:, 0] & (diff.sum(axis=1) == 2)
    if rows.shape[1] > 1:
        last = rows.shape[1] - 1 - np.argmax(diff[:, ::-1], axis=1)
        out[ok] = last[ok] + 1
    return out


def rows_from_flips(start: Sequence[int], flips: Sequence[int]) -> np.ndarray:
    """Replay flips from start; raises on an out-of-range position."""
    n = len(start)
    rows = np.zeros((len(flips) + 1, n), dtype=np.int8)
    cur = np.array(start, dtype=np.int8)
    rows[0] = cur
    for i, f in enumerate(flips):
        f = int(f)
        if not 2 <= f <= n:
            raise CertificateFormatError(f"flip {i}: position {f} out of range 2..{n}")
        cur[0], cur[f - 1] = cur[f - 1], cur[0]
        rows[i + 1] = cur
    return rows


VIEWS = ("full", "short")


def short_to_full(a: FrequencyVector, x: Sequence[int]) -> Vertex:
    """Lift a length 2n-1 string over 0..k-1 to a vertex of G(a).

    The missing symbol moves to the front and every symbol shifts up by one.
    """
    counts = [0] * a.k
    for s in x:
        if not 0 <= s < a.k:
            raise CertificateFormatError(f"symbol {s} outside 0..{a.k - 1}")
        counts[s] += 1
    missing = [j for j in range(a.k) if counts[j] == a.parts[j] - 1]
    if len(x) != a.n - 1 or len(missing) != 1:
        raise CertificateFormatError(f"{format_vertex(x)} is not a short string for {format_partition(a)}")
    return (missing[0] + 1,) + tuple(s + 1 for s in x)


def full_to_short(x: Sequence[int]) -> Vertex:
    return tuple(s - 1 for s in x[1:])


def _render(x: Sequence[int], view: str) -> str:
    return format_vertex(full_to_short(x)) if view == "short" else format_vertex(x)


@dataclass(frozen=True)
class Certificate:
    """Start vertex and flips of a Hamilton path or cycle.

    With ``view="short"`` the text forms drop the first coordinate: vertices
    print as strings over 0..k-1 and flip i prints as i-1.
    """

    a: FrequencyVector
    kind: str
    start: Vertex
    flips: tuple[int, ...]
    view: str = "full"

    def _shown_flips(self) -> list[int]:
        off = 1 if self.view == "short" else 0
        return [f - off for f in self.flips]

    def header(self) -> str:
        head = f"{HEADER} a={format_partition(self.a)} kind={self.kind}"
        return head + (" view=short" if self.view == "short" else "")

    def to_text(self, listing: bool = True) -> str:
        lines = [self.header()]
        if listing:
            lines.extend(_render(r, self.view) for r in self.rows())
        else:
            lines.append(_render(self.start, self.view))
        lines.append("flips: " + " ".join(str(f) for f in self._shown_flips()))
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        data = {
            "partition": list(self.a.parts),
            "kind": self.kind,
            "start": _render(self.start, self.view),
            "flips": self._shown_flips(),
        }
        if self.view == "short":
            data["view"] = "short"
        return json.dumps(data, sort_keys=True) + "\n"

    def to_flips(self) -> str:
        return " ".join(str(f) for f in self._shown_flips()) + "\n"

    def rows(self) -> np.ndarray:
        rows = rows_from_flips(self.start, self.flips)
        if self.kind == "cycle":
            rows = rows[:-1]
        return rows

    def to_hampath(self) -> HamPath:
        return HamPath(self.a, self.rows(), np.array(self.flips, dtype=np.int32), self.kind)


def _read_vertex(a: FrequencyVector, text: str, view: str) -> Vertex:
    x = parse_vertex(text)
    return short_to_full(a, x) if view == "short" else x


def parse_certificate(text: str) -> Certificate:
    """Parse the text or JSON certificate form.

    A vertex listing in the text form is optional; when present it must
    agree with the replayed flips.
    """
    body = text.strip()
    if not body:
        raise CertificateFormatError("empty certificate")
    listing: list[str] = []
    if body.startswith("{"):
        try:
            data = json.loads(body)
            a = as_partition(tuple(data["partition"]))
            kind = data["kind"]
            view = data.get("view", "full")
            start = data["start"]
            flips = tuple(int(f) for f in data["flips"])
        except (KeyError, TypeError, ValueError) as exc:
            raise CertificateFormatError(f"bad JSON certificate: {exc}") from exc
        if view not in VIEWS:
            raise CertificateFormatError(f"unknown view {view!r}")
        if isinstance(start, str):
            start = _read_vertex(a, start, view)
        else:
            start = tuple(int(s) for s in start)
            if view == "short":
                start = short_to_full(a, start)
    else:
        lines = [ln.strip() for ln in body.splitlines() if ln.strip()]
        head = lines[0].split()
        if len(head) < 4 or " ".join(head[:2]) != HEADER:
            raise CertificateFormatError(f"bad header line {lines[0]!r}")
        fields = dict(item.split("=", 1) for item in head[2:] if "=" in item)
        if "a" not in fields or "kind" not in fields or len(lines) < 2:
            raise CertificateFormatError("header needs a=<parts> and kind=<path|cycle>")
        a = parse_partition(fields["a"])
        kind = fields["kind"]
        view = fields.get("view", "full")
        if view not in VIEWS:
            raise CertificateFormatError(f"unknown view {view!r}")
        rest = lines[1:]
        if rest[-1].startswith("flips:"):
            flip_text = rest[-1][len("flips:"):]
            rest = rest[:-1]
        elif len(rest) == 2:
            flip_text = rest[1]
            rest = rest[:1]
        else:
            flip_text = ""
        if not rest:
            raise CertificateFormatError("missing start vertex")
        try:
            start = _read_vertex(a, rest[0], view)
            flips = tuple(int(f) for f in flip_text.split())
        except ValueError as exc:
            raise CertificateFormatError(str(exc)) from exc
        listing = rest
    if kind not in ("path", "cycle"):
        raise CertificateFormatError(f"unknown kind {kind!r}")
    if view == "short":
        flips = tuple(f + 1 for f in flips)
    cert = Certificate(a, kind, start, flips, view)
    if len(listing) > 1:
        rows = cert.rows()
        if len(listing) != len(rows):
            raise CertificateFormatError(f"listing has {len(listing)} vertices, flips give {len(rows)}")
        for i, (line, row) in enumerate(zip(listing, rows)):
            if _read_vertex(a, line, view) != tuple(int(s) for s in row):
                raise CertificateFormatError(f"listing line {i + 1} disagrees with the flips")
    return cert
