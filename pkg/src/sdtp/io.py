"""Line-oriented text format for SDTP instances.

::

    c optional comment
    p sdtp <n> <m1> <m2>
    a <i> <j> <w>                      s_i - s_j <= w
    d <i> <k> <l1> <u1> ... <lk> <uk>  k intervals for time-point i

Time-points without a ``d`` line receive the default box
``[-DEFAULT_HORIZON, DEFAULT_HORIZON]``.
"""
from __future__ import annotations

import io
import os

import numpy as np

from .model import DEFAULT_HORIZON, SdtpInstance


class InstanceFormatError(ValueError):
    pass


def parse(text: str, name: str = "") -> SdtpInstance:
    header = None
    arcs: list[tuple[int, int, int]] = []
    doms: dict[int, list[tuple[int, int]]] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line[0] == "c":
            continue
        tag, *rest = line.split()
        try:
            vals = [int(v) for v in rest[1:]] if tag == "p" else [int(v) for v in rest]
        except ValueError as exc:
            raise InstanceFormatError(f"line {lineno}: non-integer field ({exc})") from None
        if tag == "p":
            if header is not None:
                raise InstanceFormatError(f"line {lineno}: duplicate problem line")
            if not rest or rest[0] != "sdtp" or len(vals) != 3:
                raise InstanceFormatError(f"line {lineno}: expected 'p sdtp <n> <m1> <m2>'")
            header = vals
        elif header is None:
            raise InstanceFormatError(f"line {lineno}: data before problem line")
        elif tag == "a":
            if len(vals) != 3:
                raise InstanceFormatError(f"line {lineno}: expected 'a <i> <j> <w>'")
            arcs.append((vals[0], vals[1], vals[2]))
        elif tag == "d":
            if len(vals) < 2 or len(vals) != 2 + 2 * vals[1]:
                raise InstanceFormatError(f"line {lineno}: interval count does not match 'd <i> <k> ...'")
            i = vals[0]
            if i in doms:
                raise InstanceFormatError(f"line {lineno}: duplicate d line for time-point {i}")
            if not 1 <= i <= header[0]:
                raise InstanceFormatError(f"line {lineno}: time-point {i} out of range")
            doms[i] = list(zip(vals[2::2], vals[3::2]))
        else:
            raise InstanceFormatError(f"line {lineno}: unknown line type {tag!r}")
    if header is None:
        raise InstanceFormatError("missing problem line")
    n, m1, m2 = header
    if len(arcs) != m1 or len(doms) != m2:
        raise InstanceFormatError(f"header announces {m1} a-lines / {m2} d-lines, found {len(arcs)} / {len(doms)}")
    return SdtpInstance.from_lists(n, arcs, doms, name=name)


def serialize(instance: SdtpInstance, comments=()) -> str:
    buf = io.StringIO()
    write(instance, buf, comments)
    return buf.getvalue()


def write(instance: SdtpInstance, fh, comments=()) -> None:
    """Write ``instance`` to a text stream.

    Every time-point gets an explicit ``d`` line, so the output is
    independent of the default-box convention.
    """
    for c in comments:
        fh.write(f"c {c}\n")
    fh.write(f"p sdtp {instance.n} {instance.m1} {instance.n}\n")
    if instance.m1:
        rows = np.column_stack([instance.c1_i, instance.c1_j, instance.c1_w])
        fh.write("".join(f"a {i} {j} {w}\n" for i, j, w in rows.tolist()))
    ptr = instance.dom_ptr.tolist()
    lo = instance.dom_lo
    hi = instance.dom_hi
    inter = np.empty(2 * len(lo), dtype=np.int64)
    inter[0::2] = lo
    inter[1::2] = hi
    flat = inter.astype(str)
    for i in range(1, instance.n + 1):
        a, b = ptr[i], ptr[i + 1]
        fh.write(f"d {i} {b - a} " + " ".join(flat[2 * a : 2 * b]) + "\n")


def read_instance(path: str | os.PathLike) -> SdtpInstance:
    with open(path) as fh:
        return parse(fh.read(), name=os.path.splitext(os.path.basename(path))[0])


def write_instance(instance: SdtpInstance, path: str | os.PathLike, comments=()) -> None:
    with open(path, "w") as fh:
        write(instance, fh, comments)


__all__ = [
    "DEFAULT_HORIZON",
    "InstanceFormatError",
    "parse",
    "read_instance",
    "serialize",
    "write",
    "write_instance",
]
