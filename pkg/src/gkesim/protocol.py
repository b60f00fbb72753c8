"""The broadcast key establishment protocol.

An initiator picks a session key K, derives a one-time DH secret with every
intended recipient, lays all of them on a polynomial over Z_q with K parked
at abscissa 0, and broadcasts fresh evaluations of that polynomial together
with a hash commitment h(t || K).  Each recipient rebuilds the polynomial
from its own DH-derived point plus the public ones and reads K off at 0.

The commitment is the scheme's only integrity check.  It binds nothing but
the timestamp and the key, which is exactly what the adversary module
exploits.
"""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass
from typing import Sequence

from .errors import (
    CertificateInvalidError,
    DuplicateAbscissaError,
    DuplicateRecipientError,
    EmptyGroupError,
    ZeroIdentifierError,
)
from .groups import (
    GroupParams,
    Point,
    lagrange_eval,
    random_scalar,
    random_scalar_excluding,
)
from .pki import Certificate, Member, verify_certificate

DEFAULT_FRESHNESS_WINDOW = 120  # seconds, |now - t| tolerated both ways


class RejectReason(enum.Enum):
    STALE_TIMESTAMP = "stale_timestamp"
    COMMITMENT_MISMATCH = "commitment_mismatch"
    NOT_ADDRESSED = "not_addressed"
    MALFORMED_MESSAGE = "malformed_message"


@dataclass(frozen=True)
class BroadcastMessage:
    """The initiator's transmission.

    In the normal message format the initiator and recipient identifiers are
    carried in the clear.  In the degraded paper-literal format both are
    omitted (None): recipients then cannot tell whether they are addressed
    and must attempt recovery blindly.
    """

    initiator_id: int | None
    recipient_ids: tuple[int, ...] | None
    r: int
    t: int
    public_points: tuple[Point, ...]
    key_commitment: bytes


@dataclass(frozen=True)
class AcceptanceResult:
    """Outcome of processing one broadcast at one recipient."""

    accepted: bool
    key: int | None = None
    reason: RejectReason | None = None

    @classmethod
    def accept(cls, key: int) -> "AcceptanceResult":
        return cls(accepted=True, key=key)

    @classmethod
    def reject(cls, reason: RejectReason) -> "AcceptanceResult":
        return cls(accepted=False, reason=reason)


def pairwise_key_initiator(x_w: int, s: int, y_z: int, params: GroupParams) -> int:
    """One-time shared secret, initiator side: (y_z**(x_w+s) mod p) mod q."""
    exponent = (x_w + s) % params.q
    return pow(y_z, exponent, params.p) % params.q


def pairwise_key_recipient(x_z: int, r: int, y_w: int, params: GroupParams) -> int:
    """Same secret, recipient side: ((r * y_w)**x_z mod p) mod q."""
    return pow(r * y_w % params.p, x_z, params.p) % params.q


def hash_commitment(t: int, key: int, params: GroupParams) -> bytes:
    """h(t || K): 8-byte big-endian timestamp, then the key at q's byte width."""
    hasher = params.new_hash()
    hasher.update(t.to_bytes(8, "big"))
    hasher.update(key.to_bytes(params.q_bytes, "big"))
    return hasher.digest()


def random_session_key(rng: random.Random, params: GroupParams) -> int:
    """Session keys are drawn from [1, q-1]; zero is excluded as degenerate."""
    return random_scalar(rng, params.q, allow_zero=False)


def build_broadcast(
    initiator: Member,
    recipient_certs: Sequence[Certificate],
    session_key: int,
    t: int,
    rng: random.Random,
    params: GroupParams,
    *,
    ca_verify_element: int,
    paper_literal: bool = False,
) -> tuple[BroadcastMessage, int]:
    """Construct the broadcast for a group; returns (message, ephemeral s).

    The polynomial has degree <= len(recipient_certs) and passes through
    (0, session_key) plus one DH-derived point per recipient.  The published
    evaluations sit at fresh abscissas disjoint from 0, the recipient ids
    and each other, so no recipient's point is leaked and interpolation
    stays well defined.
    """
    if len(recipient_certs) == 0:
        raise EmptyGroupError("broadcast needs at least one recipient")
    if not (0 <= session_key < params.q):
        raise ValueError("session key must be a Z_q scalar")
    ids = [cert.member_id for cert in recipient_certs]
    if len(set(ids)) != len(ids):
        raise DuplicateRecipientError("recipient listed twice")
    if any(i == 0 for i in ids):
        raise ZeroIdentifierError("recipient id 0 collides with the key abscissa")
    for cert in recipient_certs:
        if not verify_certificate(params, ca_verify_element, cert):
            raise CertificateInvalidError(f"certificate for id {cert.member_id} failed")

    s = random_scalar(rng, params.q, allow_zero=False)
    r = pow(params.g, s, params.p)
    base_points: list[Point] = [(0, session_key)]
    for cert in recipient_certs:
        k = pairwise_key_initiator(initiator.private_key, s, cert.public_key, params)
        base_points.append((cert.member_id, k))

    banned = {0, *ids}
    public_points: list[Point] = []
    for _ in recipient_certs:
        a = random_scalar_excluding(rng, params.q, banned)
        banned.add(a)
        public_points.append((a, lagrange_eval(base_points, a, params.q)))

    message = BroadcastMessage(
        initiator_id=None if paper_literal else initiator.id,
        recipient_ids=None if paper_literal else tuple(ids),
        r=r,
        t=t,
        public_points=tuple(public_points),
        key_commitment=hash_commitment(t, session_key, params),
    )
    return message, s


def process_broadcast(
    member: Member,
    initiator_cert: Certificate,
    msg: BroadcastMessage,
    now: int,
    freshness_window: int,
    params: GroupParams,
    *,
    paper_literal: bool = False,
) -> AcceptanceResult:
    """Recipient-side processing of one broadcast.

    In the normal mode a member that is not listed refuses immediately.  In
    paper-literal mode the identifier lists are treated as absent, so every
    member attempts recovery and non-members only find out through the
    failing commitment check, at the price of the full computation.
    """
    points = list(msg.public_points)
    abscissas = [x for x, _ in points]
    if len(points) == 0 or len(set(abscissas)) != len(abscissas):
        return AcceptanceResult.reject(RejectReason.MALFORMED_MESSAGE)

    if not paper_literal:
        if msg.recipient_ids is None or msg.initiator_id is None:
            return AcceptanceResult.reject(RejectReason.MALFORMED_MESSAGE)
        if len(msg.recipient_ids) != len(points):
            return AcceptanceResult.reject(RejectReason.MALFORMED_MESSAGE)
        if msg.initiator_id != initiator_cert.member_id:
            return AcceptanceResult.reject(RejectReason.MALFORMED_MESSAGE)
        if member.id not in msg.recipient_ids:
            return AcceptanceResult.reject(RejectReason.NOT_ADDRESSED)

    k = pairwise_key_recipient(member.private_key, msg.r, initiator_cert.public_key, params)
    try:
        recovered = lagrange_eval([(member.id, k), *points], 0, params.q)
    except DuplicateAbscissaError:
        return AcceptanceResult.reject(RejectReason.MALFORMED_MESSAGE)

    if abs(now - msg.t) > freshness_window:
        return AcceptanceResult.reject(RejectReason.STALE_TIMESTAMP)
    if hash_commitment(msg.t, recovered, params) != msg.key_commitment:
        return AcceptanceResult.reject(RejectReason.COMMITMENT_MISMATCH)
    return AcceptanceResult.accept(recovered)
