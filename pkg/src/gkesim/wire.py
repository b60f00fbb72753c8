"""JSON wire encodings.

Every protocol integer travels as a lowercase big-endian hex string with no
leading zeros ("0" for zero), and every serialized object is emitted as
canonical JSON (sorted keys, compact separators) so equal values are equal
bytes.  Transcript determinism rests on that.
"""

from __future__ import annotations

import json
from typing import Any

from .groups import GroupParams, validate_params
from .pki import Certificate
from .protocol import BroadcastMessage


def int_to_hex(n: int) -> str:
    if n < 0:
        raise ValueError("wire integers are non-negative")
    return format(n, "x")


def int_from_hex(s: str) -> int:
    if not isinstance(s, str) or s == "" or s.startswith("-"):
        raise ValueError(f"not a hex integer: {s!r}")
    return int(s, 16)


def canonical_json(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def params_record(params: GroupParams) -> dict:
    return {
        "p": int_to_hex(params.p),
        "q": int_to_hex(params.q),
        "g": int_to_hex(params.g),
        "hash": params.hash_name,
    }


def params_from_record(record: dict) -> GroupParams:
    return validate_params(
        int_from_hex(record["p"]),
        int_from_hex(record["q"]),
        int_from_hex(record["g"]),
        record.get("hash", "sha256"),
    )


def certificate_record(cert: Certificate) -> dict:
    return {
        "id": int_to_hex(cert.member_id),
        "y": int_to_hex(cert.public_key),
        "sig_commitment": int_to_hex(cert.commitment),
        "sig_response": int_to_hex(cert.response),
    }


def certificate_from_record(record: dict) -> Certificate:
    return Certificate(
        member_id=int_from_hex(record["id"]),
        public_key=int_from_hex(record["y"]),
        commitment=int_from_hex(record["sig_commitment"]),
        response=int_from_hex(record["sig_response"]),
    )


def broadcast_record(msg: BroadcastMessage) -> dict:
    return {
        "initiator_id": None if msg.initiator_id is None else int_to_hex(msg.initiator_id),
        "recipient_ids": None
        if msg.recipient_ids is None
        else [int_to_hex(i) for i in msg.recipient_ids],
        "r": int_to_hex(msg.r),
        "t": int_to_hex(msg.t),
        "points": [[int_to_hex(x), int_to_hex(y)] for x, y in msg.public_points],
        "commitment_hex": msg.key_commitment.hex(),
    }


def broadcast_from_record(record: dict) -> BroadcastMessage:
    ids = record["recipient_ids"]
    return BroadcastMessage(
        initiator_id=None
        if record["initiator_id"] is None
        else int_from_hex(record["initiator_id"]),
        recipient_ids=None if ids is None else tuple(int_from_hex(i) for i in ids),
        r=int_from_hex(record["r"]),
        t=int_from_hex(record["t"]),
        public_points=tuple((int_from_hex(x), int_from_hex(y)) for x, y in record["points"]),
        key_commitment=bytes.fromhex(record["commitment_hex"]),
    )
