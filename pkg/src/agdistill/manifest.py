"""Artifact manifests: deterministic JSON with hex payloads and a sha256 digest.

The digest is taken over every byte of the file that precedes the
``"digest":`` key, so it covers all content fields in their serialized form.
"""

from __future__ import annotations

import gzip
import hashlib
import json
from pathlib import Path
from typing import Any

import numpy as np

from .gf2e import FieldSpec, get_field
from .selfdual import SelfDualBasis
from .triortho import TriorthogonalMatrix

FORMAT_VERSION = 1
_HEX = np.frombuffer(b"0123456789abcdef", dtype=np.uint8)
_DIGEST_KEY = '"digest":"'


class ManifestError(ValueError):
    pass


def matrix_to_hex(spec: FieldSpec, m: np.ndarray) -> list[str]:
    """One string per row: fixed-width lowercase hex of each entry, concatenated."""
    m = np.atleast_2d(np.asarray(m, dtype=np.int64))
    w = spec.hex_width
    shifts = 4 * np.arange(w - 1, -1, -1)
    digits = (m[:, :, None] >> shifts) & 15
    chars = _HEX[digits].reshape(m.shape[0], -1)
    return [row.tobytes().decode("ascii") for row in chars]


def hex_to_row(spec: FieldSpec, text: str) -> np.ndarray:
    w = spec.hex_width
    if len(text) % w:
        raise ManifestError("hex row length is not a multiple of the element width")
    raw = np.frombuffer(text.encode("ascii"), dtype=np.uint8).astype(np.int64)
    val = np.where(raw <= ord("9"), raw - ord("0"), raw - ord("a") + 10)
    if np.any((val < 0) | (val > 15)):
        raise ManifestError("invalid hex digit")
    val = val.reshape(-1, w)
    out = np.zeros(val.shape[0], dtype=np.int64)
    for j in range(w):
        out = (out << 4) | val[:, j]
    if out.size and out.max() >= spec.q:
        raise ManifestError("value outside the field")
    return out


def build_body(T: TriorthogonalMatrix, basis: SelfDualBasis, t: int, degA1: int, d_lower: int) -> dict[str, Any]:
    spec = T.spec
    prov = {k: v for k, v in T.provenance.items() if k != "places"}
    return {
        "format_version": FORMAT_VERSION,
        "field": {"s": spec.s, "modulus": format(spec.modulus, "x")},
        "basis": basis.to_hex(),
        "curve": T.provenance["curve"],
        "parameters": {
            "a": T.provenance["a"],
            "k": T.k,
            "g": T.provenance["genus"],
            "n": T.n,
            "m": T.m,
            "N": T.N,
            "t": t,
            "degA1": degA1,
            "d_lower": d_lower,
        },
        "places": [int(p) for p in T.provenance["places"]],
        "w": matrix_to_hex(spec, T.w)[0],
        "sigma": matrix_to_hex(spec, T.sigma)[0],
        "tau": matrix_to_hex(spec, T.tau)[0],
        "rows": matrix_to_hex(spec, T.rows),
        "provenance": prov,
    }


def dumps(body: dict[str, Any]) -> str:
    text = json.dumps(body, separators=(",", ":"), ensure_ascii=True)
    prefix = text[:-1] + ","
    digest = hashlib.sha256(prefix.encode("ascii")).hexdigest()
    return prefix + _DIGEST_KEY + "sha256:" + digest + '"}\n'


def digest_ok(text: str) -> bool:
    pos = text.rfind("," + _DIGEST_KEY)
    if pos < 0:
        return False
    want = "sha256:" + hashlib.sha256(text[: pos + 1].encode("ascii")).hexdigest()
    return json.loads(text).get("digest") == want


def loads(text: str, check_digest: bool = True) -> dict[str, Any]:
    pos = text.rfind("," + _DIGEST_KEY)
    if pos < 0:
        raise ManifestError("manifest has no digest")
    prefix = text[: pos + 1]
    doc = json.loads(text)
    want = "sha256:" + hashlib.sha256(prefix.encode("ascii")).hexdigest()
    if check_digest and doc.get("digest") != want:
        raise ManifestError("digest mismatch: manifest content was modified")
    if doc.get("format_version") != FORMAT_VERSION:
        raise ManifestError(f"unsupported format_version {doc.get('format_version')}")
    return doc


def write(path: str | Path, body: dict[str, Any], compress: bool | None = None) -> None:
    path = Path(path)
    data = dumps(body).encode("ascii")
    if compress is None:
        compress = path.suffix == ".gz"
    if compress:
        with open(path, "wb") as fh, gzip.GzipFile(fileobj=fh, mode="wb", mtime=0, filename="") as gz:
            gz.write(data)
    else:
        path.write_bytes(data)


def read_text(path: str | Path) -> str:
    raw = Path(path).read_bytes()
    if raw[:2] == b"\x1f\x8b":
        raw = gzip.decompress(raw)
    return raw.decode("ascii")


def read(path: str | Path, check_digest: bool = True) -> dict[str, Any]:
    return loads(read_text(path), check_digest)


def body_of(doc: dict[str, Any]) -> dict[str, Any]:
    return {k: v for k, v in doc.items() if k != "digest"}


def to_objects(doc: dict[str, Any]) -> tuple[TriorthogonalMatrix, SelfDualBasis, dict[str, Any]]:
    spec = get_field(int(doc["field"]["s"]), int(doc["field"]["modulus"], 16))
    basis = SelfDualBasis.from_hex(spec, doc["basis"])
    par = doc["parameters"]
    rows = np.array([hex_to_row(spec, r) for r in doc["rows"]], dtype=np.int64).reshape(par["m"], par["n"])
    prov = dict(doc["provenance"])
    prov["places"] = list(doc["places"])
    T = TriorthogonalMatrix(
        spec,
        int(par["n"]),
        int(par["k"]),
        int(par["m"]),
        rows,
        hex_to_row(spec, doc["sigma"]),
        hex_to_row(spec, doc["tau"]),
        hex_to_row(spec, doc["w"]),
        prov,
    )
    if T.sigma.size != T.n or T.tau.size != T.k or T.w.size != T.N or len(prov["places"]) != T.N:
        raise ManifestError("manifest vectors have inconsistent lengths")
    return T, basis, par
