"""Newform coefficient tables and elimination certificates on disk.

Newform table (JSON, ``format_version`` 1)::

    {
      "format_version": 1,
      "newforms": [
        {
          "label": "608.2.a.x",
          "level": 608,
          "field_poly": [0, 1],                  # monic, low-to-high; [0, 1] is Q
          "char_modulus": 8,
          "char_order": 2,
          "eps_values": {"1": [1], "3": [-1], "5": [-1], "7": [1]},
          "ap": {"3": [1], "5": ["1/2", "3/2"]}  # power-basis coordinates
        }
      ]
    }

``eps_values`` may be omitted for the trivial character (modulus 1).

Certificate (JSON)::

    {"format_version": 1,
     "envelope": {"timestamp": ..., "digest": sha256(body)},
     "body": {...}}

The digest covers the canonical serialisation of ``body`` only, so
bodies are byte-identical across runs with identical inputs.
"""

from __future__ import annotations

import hashlib
import json
import os
from dataclasses import dataclass, field
from datetime import datetime, timezone
from fractions import Fraction
from pathlib import Path
from typing import Mapping, Union

from sympy import isprime

from freymod.errors import CertificateDigestError, DataIntegrityError, NewformDataError
from freymod.numfield import CharacterTable, NumberField, NumberFieldElement, char_value

FORMAT_VERSION = 1


@dataclass(frozen=True)
class NewformRecord:
    label: str
    level: int
    char_modulus: int
    char_order: int
    field_poly: tuple
    ap_table: Mapping[int, NumberFieldElement] = field(repr=False)
    eps_table: CharacterTable = field(repr=False)

    @property
    def number_field(self) -> NumberField:
        return NumberField(self.field_poly)

    @property
    def degree(self) -> int:
        return len(self.field_poly) - 1

    def ap(self, ell: int) -> NumberFieldElement:
        try:
            return self.ap_table[ell]
        except KeyError:
            raise DataIntegrityError(f"record {self.label!r} has no coefficient a_{ell}") from None

    def eps(self, ell: int) -> NumberFieldElement:
        return char_value(self.eps_table, ell)

    def key(self):
        """Hashable content key (used for order-independence checks)."""
        return (
            self.label,
            self.level,
            self.char_modulus,
            self.char_order,
            self.field_poly,
            tuple(sorted((p, v.coords) for p, v in self.ap_table.items())),
            tuple(sorted((u, v.coords) for u, v in self.eps_table.values.items())),
        )


def ramanujan_ok(value: NumberFieldElement, ell: int) -> bool:
    """Necessary norm condition |N(a)| <= (2 sqrt(ell))^n, checked exactly."""
    n = value.field.degree
    N = value.norm()
    return N * N <= (4 * ell) ** n


def _coords(raw, label, what):
    if not isinstance(raw, list):
        raw = [raw]
    try:
        return [Fraction(str(c)) for c in raw]
    except (ValueError, ZeroDivisionError):
        raise NewformDataError(label, f"bad coordinates for {what}: {raw!r}") from None


def record_from_dict(raw: Mapping) -> NewformRecord:
    label = raw.get("label")
    if not isinstance(label, str) or not label:
        raise DataIntegrityError("newform record without a label")
    try:
        level = int(raw["level"])
        poly = [int(c) for c in raw["field_poly"]]
        modulus = int(raw.get("char_modulus", 1))
        order = int(raw.get("char_order", 1))
        ap_raw = raw["ap"]
    except (KeyError, TypeError, ValueError) as exc:
        raise NewformDataError(label, f"missing or malformed field: {exc}") from None
    if level < 1:
        raise NewformDataError(label, "level must be positive")
    if order < 1 or order & (order - 1):
        raise NewformDataError(label, f"character order {order} is not a power of two")
    try:
        F = NumberField(poly)
    except ValueError as exc:
        raise NewformDataError(label, str(exc)) from None
    eps_raw = raw.get("eps_values")
    if eps_raw is None:
        if modulus != 1:
            raise NewformDataError(label, "eps_values required for a nontrivial modulus")
        eps_raw = {"0": [1]}
    values = {int(u) % modulus: F(_coords(v, label, f"eps({u})")) for u, v in eps_raw.items()}
    table = CharacterTable(modulus, order, values)
    try:
        table.validate()
    except ValueError as exc:
        raise NewformDataError(label, str(exc)) from None
    ap = {}
    for key, v in ap_raw.items():
        ell = int(key)
        if not isprime(ell):
            raise NewformDataError(label, f"coefficient index {ell} is not prime")
        ap[ell] = F(_coords(v, label, f"a_{ell}"))
        if not ap[ell].is_integral():
            raise NewformDataError(label, f"a_{ell} is not an algebraic integer")
        if not ramanujan_ok(ap[ell], ell):
            raise NewformDataError(label, f"a_{ell} violates the Ramanujan norm bound |N| <= (2 sqrt {ell})^{F.degree}")
    return NewformRecord(label, level, modulus, order, tuple(poly), ap, table)


def record_to_dict(rec: NewformRecord) -> dict:
    def enc(v: NumberFieldElement):
        return [int(c) if c.denominator == 1 else str(c) for c in v.coords]

    out = {
        "label": rec.label,
        "level": rec.level,
        "field_poly": list(rec.field_poly),
        "char_modulus": rec.char_modulus,
        "char_order": rec.char_order,
        "ap": {str(p): enc(v) for p, v in sorted(rec.ap_table.items())},
    }
    if rec.char_modulus != 1:
        out["eps_values"] = {str(u): enc(v) for u, v in sorted(rec.eps_table.values.items())}
    return out


def load_newforms(path: Union[str, os.PathLike]) -> list[NewformRecord]:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise DataIntegrityError(f"{path}: parse error: {exc}") from None
    return parse_newforms(doc)


def parse_newforms(doc: Mapping) -> list[NewformRecord]:
    if doc.get("format_version") != FORMAT_VERSION:
        raise DataIntegrityError(f"unsupported newform format version {doc.get('format_version')!r}")
    records = [record_from_dict(r) for r in doc.get("newforms", [])]
    seen = set()
    for r in records:
        if r.label in seen:
            raise DataIntegrityError(f"duplicate newform label {r.label!r}")
        seen.add(r.label)
    return sorted(records, key=lambda r: r.label)


def write_newforms(records, path) -> None:
    doc = {"format_version": FORMAT_VERSION, "newforms": [record_to_dict(r) for r in records]}
    Path(path).write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def file_digest(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


# -- certificates ------------------------------------------------------------


def canonical_bytes(body: Mapping) -> bytes:
    return json.dumps(body, sort_keys=True, indent=2, ensure_ascii=False).encode("utf-8")


def certificate_body_bytes(cert) -> bytes:
    return canonical_bytes(cert.to_dict())


def write_certificate(cert, path, timestamp: str = None) -> bytes:
    """Write ``cert``; returns the canonical body bytes that were hashed."""
    body = cert.to_dict()
    raw = canonical_bytes(body)
    doc = {
        "format_version": FORMAT_VERSION,
        "envelope": {
            "timestamp": timestamp or datetime.now(timezone.utc).isoformat(timespec="seconds"),
            "digest": hashlib.sha256(raw).hexdigest(),
        },
        "body": body,
    }
    text = json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"
    Path(path).write_text(text, encoding="utf-8")
    return raw


def verify_certificate(path) -> dict:
    """Parse a certificate file and check its digest; returns the raw document."""
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise DataIntegrityError(f"{path}: parse error: {exc}") from None
    if doc.get("format_version") != FORMAT_VERSION:
        raise DataIntegrityError(f"unsupported certificate format version {doc.get('format_version')!r}")
    try:
        body, digest = doc["body"], doc["envelope"]["digest"]
    except (KeyError, TypeError):
        raise DataIntegrityError(f"{path}: missing body or envelope") from None
    if hashlib.sha256(canonical_bytes(body)).hexdigest() != digest:
        raise CertificateDigestError(f"{path}: digest mismatch")
    return doc


def read_certificate(path):
    from freymod.eliminate import EliminationCertificate

    return EliminationCertificate.from_dict(verify_certificate(path)["body"])


__all__ = [
    "NewformRecord",
    "load_newforms",
    "parse_newforms",
    "write_newforms",
    "record_from_dict",
    "record_to_dict",
    "ramanujan_ok",
    "write_certificate",
    "read_certificate",
    "verify_certificate",
    "certificate_body_bytes",
    "file_digest",
    "FORMAT_VERSION",
]
