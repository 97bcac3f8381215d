"""On-disk persistence for ``KLContext``.

File layout (big endian)::

    magic    4 bytes   b"KLCX"
    version  u16
    length   u64       payload length in bytes
    digest   32 bytes  sha256 of the payload
    payload  zlib-compressed JSON

Inside the payload every permutation and every distinct Laurent polynomial is
stored once (``perms`` and ``polys``, the latter in ``[[exponent, coeff], ...]``
form) and referenced by index.  A map ``{perm: poly}`` is a flat list
``[perm0, poly0, perm1, poly1, ...]`` in the (length, window) order.
"""
from __future__ import annotations

import hashlib
import json
import os
import struct
import tempfile
import zlib

from .errors import ChecksumMismatch, FormatVersionMismatch
from .kl import KLContext
from .laurent import LaurentPoly
from .symgroup import Permutation

__all__ = ["FORMAT_VERSION", "save_context", "load_context", "export_kl_table"]

MAGIC = b"KLCX"
FORMAT_VERSION = 2
_HEADER = struct.Struct(">4sHQ32s")


class _Interner:
    """Assigns consecutive indices to permutations and polynomials."""

    def __init__(self):
        self.perm_ix: dict = {}
        self.perms: list = []
        self.poly_ix: dict = {}
        self.polys: list = []

    def perm(self, p: Permutation) -> int:
        j = self.perm_ix.get(p)
        if j is None:
            j = self.perm_ix[p] = len(self.perms)
            self.perms.append(list(p.window))
        return j

    def poly(self, c: LaurentPoly) -> int:
        j = self.poly_ix.get(c)
        if j is None:
            j = self.poly_ix[c] = len(self.polys)
            self.polys.append(c.to_json())
        return j

    def flat(self, d: dict) -> list:
        # {perm: poly} as [perm0, poly0, perm1, poly1, ...] in the permutation order
        out = []
        for w in sorted(d, key=Permutation.sort_key):
            out += (self.perm(w), self.poly(d[w]))
        return out


def _encode(ctx: KLContext) -> bytes:
    ix = _Interner()
    key = Permutation.sort_key

    def by(items, *pos):
        return sorted(items, key=lambda t: tuple(key(t[0][j]) for j in pos))

    body = {
        "rank": ctx.rank,
        "full_ranks": sorted(ctx._full_ranks),
        "cols": [[ix.perm(y), ix.flat(col)] for y, col in sorted(ctx._cols.items(), key=lambda t: key(t[0]))],
        "pairs": [[ix.perm(x), ix.perm(y), ix.poly(p)] for (x, y), p in by(ctx._pairs.items(), 1, 0)],
        "mu": [[ix.perm(a), ix.perm(b), m] for (a, b), m in by(ctx._mu.items(), 1, 0)],
        "gamma": [[ix.perm(a), ix.perm(b), ix.flat(g)] for (a, b), g in by(ctx._gamma.items(), 0, 1)],
        "action": [[ix.perm(x), i, k, ix.flat(d)] for (x, i, k), d in
                   sorted(ctx._action.items(), key=lambda t: (key(t[0][0]), t[0][1], t[0][2]))],
        "theta": [[ix.perm(x), ix.perm(y), k, ix.flat(d)] for (x, y, k), d in
                  sorted(ctx._theta.items(), key=lambda t: (key(t[0][0]), key(t[0][1]), t[0][2]))],
        "form": [[ix.perm(x), ix.perm(y), k, ix.flat(d)] for (x, y, k), d in
                 sorted(ctx._form.items(), key=lambda t: (key(t[0][0]), key(t[0][1]), t[0][2]))],
    }
    body["perms"] = ix.perms
    body["polys"] = ix.polys
    return json.dumps(body, separators=(",", ":")).encode()


def save_context(ctx: KLContext, path) -> None:
    """Write all tables of ``ctx`` to ``path`` atomically."""
    payload = zlib.compress(_encode(ctx), 6)
    header = _HEADER.pack(MAGIC, FORMAT_VERSION, len(payload), hashlib.sha256(payload).digest())
    path = os.fspath(path)
    d = os.path.dirname(os.path.abspath(path))
    os.makedirs(d, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".klcx-")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(header)
            fh.write(payload)
        umask = os.umask(0)
        os.umask(umask)
        os.chmod(tmp, 0o666 & ~umask)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    ctx.dirty = False


def load_context(path, rank: int | None = None) -> KLContext:
    """Read a context written by ``save_context``; ``rank`` overrides the stored rank."""
    with open(path, "rb") as fh:
        raw = fh.read()
    if len(raw) < _HEADER.size:
        raise FormatVersionMismatch(f"{path}: not a context file (too short)")
    magic, version, length, digest = _HEADER.unpack_from(raw)
    if magic != MAGIC or version != FORMAT_VERSION:
        raise FormatVersionMismatch(f"{path}: magic {magic!r} version {version}, "
                                    f"expected {MAGIC!r} version {FORMAT_VERSION}")
    payload = raw[_HEADER.size:]
    if len(payload) != length or hashlib.sha256(payload).digest() != digest:
        raise ChecksumMismatch(f"{path}: payload corrupted")
    body = json.loads(zlib.decompress(payload))

    perms = [Permutation._trusted(tuple(w)) for w in body["perms"]]
    polys = [LaurentPoly.from_json(c) for c in body["polys"]]

    def unflat(a: list) -> dict:
        return {perms[j]: polys[q] for j, q in zip(a[::2], a[1::2])}

    ctx = KLContext(rank if rank is not None else body["rank"])
    ctx._full_ranks = set(body["full_ranks"])
    ctx._cols = {perms[y]: unflat(col) for y, col in body["cols"]}
    ctx._pairs = {(perms[x], perms[y]): polys[q] for x, y, q in body["pairs"]}
    ctx._mu = {(perms[a], perms[b]): m for a, b, m in body["mu"]}
    ctx._gamma = {(perms[a], perms[b]): unflat(g) for a, b, g in body["gamma"]}
    ctx._action = {(perms[x], i, k): unflat(d) for x, i, k, d in body["action"]}
    ctx._theta = {(perms[x], perms[y], k): unflat(d) for x, y, k, d in body["theta"]}
    ctx._form = {(perms[x], perms[y], k): unflat(d) for x, y, k, d in body["form"]}
    ctx.dirty = False
    return ctx


def export_kl_table(ctx: KLContext) -> list:
    """``[[x-window, y-window, laurent-json], ...]`` for debugging."""
    key = Permutation.sort_key
    return [[list(x.window), list(y.window), p.to_json()]
            for (x, y), p in sorted(ctx.kl_table().items(),
                                    key=lambda t: (key(t[0][1]), key(t[0][0])))]
