"""graph6 encoding (McKay's bit-packed upper triangle), one graph per line."""

from __future__ import annotations

from typing import Iterable, Iterator, TextIO

from mtlz.graph import Graph, GraphError, build_graph

HEADER = ">>graph6<<"


def _encode_n(n: int) -> str:
    if n < 63:
        return chr(n + 63)
    if n < 258048:
        return "~" + "".join(chr(((n >> s) & 63) + 63) for s in (12, 6, 0))
    return "~~" + "".join(chr(((n >> s) & 63) + 63) for s in (30, 24, 18, 12, 6, 0))


def encode(g: Graph) -> str:
    bits = []
    for j in range(1, g.n):
        row = g.adj[j]
        bits.extend((row >> i) & 1 for i in range(j))
    bits.extend([0] * (-len(bits) % 6))
    body = "".join(
        chr(63 + int("".join(map(str, bits[k:k + 6])), 2)) for k in range(0, len(bits), 6)
    )
    return _encode_n(g.n) + body


def decode(line: str) -> Graph:
    s = line.strip()
    if s.startswith(HEADER):
        s = s[len(HEADER):]
    if not s:
        raise GraphError("empty graph6 string")
    if any(not 63 <= ord(ch) <= 126 for ch in s):
        raise GraphError(f"invalid graph6 character in {s!r}")
    if s[0] != "~":
        n, body = ord(s[0]) - 63, s[1:]
    elif len(s) < 4 or (s[1] == "~" and len(s) < 8):
        raise GraphError(f"truncated graph6 size prefix in {s!r}")
    elif s[1] != "~":
        n = sum((ord(ch) - 63) << sh for ch, sh in zip(s[1:4], (12, 6, 0)))
        body = s[4:]
    else:
        n = sum((ord(ch) - 63) << sh for ch, sh in zip(s[2:8], (30, 24, 18, 12, 6, 0)))
        body = s[8:]
    nbits = n * (n - 1) // 2
    if len(body) != (nbits + 5) // 6:
        raise GraphError(f"graph6 body length {len(body)} does not match n={n}")
    bits = []
    for ch in body:
        v = ord(ch) - 63
        bits.extend((v >> s) & 1 for s in range(5, -1, -1))
    edges = []
    k = 0
    for j in range(1, n):
        for i in range(j):
            if bits[k]:
                edges.append((i, j))
            k += 1
    return build_graph(n, edges)


def write(graphs: Iterable[Graph], fh: TextIO) -> int:
    count = 0
    for g in graphs:
        fh.write(encode(g) + "\n")
        count += 1
    return count


def read(fh: TextIO) -> Iterator[Graph]:
    for line in fh:
        if line.strip():
            yield decode(line)
