"""File formats: spec configs, adjacency matrices and CSV tables.

Spec config (one ``[graphon]`` section)::

    [graphon]
    family = sbm
    weights = 0.5, 0.5
    block_probs = 0.8 0.2; 0.2 0.8

Families: ``sbm``, ``erdos_renyi`` (``p``), ``geometric`` (``d``, ``delta``),
``holder_cube`` (``d``, ``kernel``, ``alpha``), ``lower_bound_sbm``
(``n_ref``, ``delta``).
"""
from __future__ import annotations

import configparser
import struct
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import InvalidArgument
from .model import (AdjacencyMatrix, ErdosRenyi, GeometricGraph, GraphonSpec,
                    HolderCube, LowerBoundSBM, SBM)

MAGIC = b"GADJ"
_HEADER = struct.Struct("<4sId")
TEXT_SUFFIXES = (".txt", ".edges", ".edgelist", ".el")


def fmt(x) -> str:
    """Shortest round-trip text for a number (deterministic)."""
    if isinstance(x, (bool, np.bool_)):
        return "1" if x else "0"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if x is None:
        return ""
    return repr(float(x))


# ---------------------------------------------------------------- specs

def _floats(text: str) -> list:
    return [float(t) for t in text.replace(",", " ").split()]


def spec_from_section(section) -> GraphonSpec:
    """Build a spec from a mapping of config keys."""
    family = section.get("family", "").strip().lower()
    try:
        if family == "sbm":
            w = _floats(section["weights"])
            rows = [_floats(r) for r in section["block_probs"].split(";") if r.strip()]
            return SBM(w, rows)
        if family in ("erdos_renyi", "er"):
            return ErdosRenyi(float(section["p"]))
        if family in ("geometric", "geometric_graph"):
            return GeometricGraph(int(section["d"]), float(section["delta"]))
        if family == "holder_cube":
            return HolderCube(int(section["d"]), section["kernel"].strip(),
                              float(section.get("alpha", "1")))
        if family == "lower_bound_sbm":
            return LowerBoundSBM(float(section["delta"]), int(section["n_ref"]))
    except KeyError as exc:
        raise InvalidArgument(f"spec is missing key {exc.args[0]!r}") from None
    except ValueError as exc:
        if isinstance(exc, InvalidArgument):
            raise
        raise InvalidArgument(f"malformed spec value: {exc}") from None
    raise InvalidArgument(f"unknown graphon family {family!r}")


def parse_spec(text: str) -> GraphonSpec:
    cp = configparser.ConfigParser()
    cp.read_string(text)
    if "graphon" not in cp:
        raise InvalidArgument("spec config needs a [graphon] section")
    return spec_from_section(cp["graphon"])


def load_spec(path) -> GraphonSpec:
    return parse_spec(Path(path).read_text())


def dump_spec(spec: GraphonSpec) -> str:
    if isinstance(spec, SBM):
        body = {"family": "sbm",
                "weights": ", ".join(fmt(w) for w in spec.weights_),
                "block_probs": "; ".join(" ".join(fmt(v) for v in r) for r in spec.block_probs_)}
    elif isinstance(spec, ErdosRenyi):
        body = {"family": "erdos_renyi", "p": fmt(spec.p)}
    elif isinstance(spec, GeometricGraph):
        body = {"family": "geometric", "d": str(spec.d), "delta": fmt(spec.delta)}
    elif isinstance(spec, HolderCube):
        body = {"family": "holder_cube", "d": str(spec.d), "kernel": spec.kernel_id,
                "alpha": fmt(spec.alpha)}
    elif isinstance(spec, LowerBoundSBM):
        body = {"family": "lower_bound_sbm", "n_ref": str(spec.n_ref), "delta": fmt(spec.delta)}
    else:
        raise InvalidArgument(f"cannot serialize {type(spec).__name__}")
    return "[graphon]\n" + "".join(f"{k} = {v}\n" for k, v in body.items())


# ----------------------------------------------------------- adjacency

def write_edgelist(A: AdjacencyMatrix, path) -> None:
    iu, ju = np.nonzero(np.triu(A.bits, 1))
    with open(path, "w", newline="\n") as fh:
        fh.write(f"n={A.n} rho={fmt(A.rho)}\n")
        for i, j in zip(iu.tolist(), ju.tolist()):
            fh.write(f"{i} {j}\n")


def read_edgelist(path) -> AdjacencyMatrix:
    with open(path) as fh:
        header = fh.readline().split()
        try:
            meta = dict(tok.split("=", 1) for tok in header)
            n = int(meta["n"])
            rho = float(meta.get("rho", "1"))
        except (ValueError, KeyError):
            raise InvalidArgument(f"{path}: bad header, expected 'n=<N> rho=<R>'") from None
        bits = np.zeros((n, n), dtype=np.uint8)
        for lineno, line in enumerate(fh, start=2):
            parts = line.split()
            if not parts or parts[0].startswith("#"):
                continue
            try:
                i, j = int(parts[0]), int(parts[1])
            except (ValueError, IndexError):
                raise InvalidArgument(f"{path}:{lineno}: expected 'i j'") from None
            if not (0 <= i < n and 0 <= j < n) or i == j:
                raise InvalidArgument(f"{path}:{lineno}: invalid edge ({i}, {j})")
            bits[i, j] = bits[j, i] = 1
    return AdjacencyMatrix(bits=bits, rho=rho)


def write_binary(A: AdjacencyMatrix, path) -> None:
    packed = np.packbits(A.bits.reshape(-1), bitorder="little")
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(MAGIC, A.n, A.rho))
        fh.write(packed.tobytes())


def read_binary(path) -> AdjacencyMatrix:
    data = Path(path).read_bytes()
    if len(data) < _HEADER.size:
        raise InvalidArgument(f"{path}: truncated header")
    magic, n, rho = _HEADER.unpack_from(data)
    if magic != MAGIC:
        raise InvalidArgument(f"{path}: not a GADJ file")
    nbytes = (n * n + 7) // 8
    payload = np.frombuffer(data, dtype=np.uint8, offset=_HEADER.size)
    if payload.size != nbytes:
        raise InvalidArgument(f"{path}: expected {nbytes} payload bytes, got {payload.size}")
    bits = np.unpackbits(payload, count=n * n, bitorder="little").reshape(n, n)
    return AdjacencyMatrix(bits=bits, rho=rho)


def write_graph(A: AdjacencyMatrix, path) -> None:
    if str(path).lower().endswith(TEXT_SUFFIXES):
        write_edgelist(A, path)
    else:
        write_binary(A, path)


def read_graph(path) -> AdjacencyMatrix:
    with open(path, "rb") as fh:
        head = fh.read(4)
    return read_binary(path) if head == MAGIC else read_edgelist(path)


# ----------------------------------------------------------------- csv

def write_csv(path, columns: Sequence[str], rows: Iterable[Sequence], comments: Sequence[str] = ()) -> None:
    """Write a CSV with optional leading ``#`` comment lines, LF endings."""
    with open(path, "w", newline="\n") as fh:
        for c in comments:
            fh.write(f"# {c}\n")
        fh.write(",".join(columns) + "\n")
        for row in rows:
            fh.write(",".join(v if isinstance(v, str) else fmt(v) for v in row) + "\n")


def read_csv(path):
    """Return ``(comments, columns, rows)`` with rows as lists of strings."""
    comments, rows, columns = [], [], None
    with open(path) as fh:
        for line in fh:
            line = line.rstrip("\n")
            if line.startswith("#"):
                comments.append(line[1:].strip())
            elif columns is None:
                columns = line.split(",")
            elif line:
                rows.append(line.split(","))
    return comments, columns, rows
