"""Attacks on the broadcast protocol.

Three adversaries, in increasing strength of assumption:

* a replay forger who once learned a session key and re-stamps the old
  broadcast at will,
* an insider recipient who reads every other member's one-time secret off
  the polynomial and then impersonates the initiator,
* an outsider who solves the discrete logarithm at toy parameter sizes and
  decrypts the broadcast outright, showing the scheme's secrecy is at most
  computational.

All of them succeed against honestly produced messages; the test suite
checks that, not merely that the functions run.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .errors import (
    DlogNotFoundError,
    KeyRecoveryMismatchError,
    MissingLeakedKeyError,
    NotAMemberError,
    ParamsTooLargeError,
)
from .groups import GroupParams, Point, lagrange_eval, random_scalar_excluding
from .pki import Certificate, Member
from .protocol import BroadcastMessage, hash_commitment, pairwise_key_recipient

MAX_DLOG_ORDER = 2**24  # linear scan stays under seconds up to here


@dataclass(frozen=True)
class ObservedSession:
    """What an eavesdropper holds: the wire message, maybe the key too."""

    msg: BroadcastMessage
    leaked_key: int | None = None


@dataclass(frozen=True)
class RecoveredShareSet:
    """Every recipient's one-time secret, as recovered by an insider."""

    pairs: tuple[Point, ...]


def forge_replay(
    observed: ObservedSession, t_new: int, params: GroupParams
) -> BroadcastMessage:
    """Re-stamp a captured broadcast with a fresh timestamp.

    Only t and the commitment change; r, the points and the identifier
    lists are reused verbatim.  Nothing in the message authenticates them,
    so recipients recover the same key and the new commitment matches.
    """
    if observed.leaked_key is None:
        raise MissingLeakedKeyError("replay forgery needs the old session key")
    msg = observed.msg
    return BroadcastMessage(
        initiator_id=msg.initiator_id,
        recipient_ids=msg.recipient_ids,
        r=msg.r,
        t=t_new,
        public_points=msg.public_points,
        key_commitment=hash_commitment(t_new, observed.leaked_key, params),
    )


def insider_recover_shares(
    me: Member,
    initiator_cert: Certificate,
    msg: BroadcastMessage,
    params: GroupParams,
) -> RecoveredShareSet:
    """Recover every recipient's one-time secret from a single membership.

    The broadcast polynomial passes through (d, k_d) for every recipient d.
    Any one recipient can rebuild the whole polynomial from its own point
    plus the public ones, then evaluate at the other identifiers.
    """
    if msg.recipient_ids is None or me.id not in msg.recipient_ids:
        raise NotAMemberError("caller is not an addressed recipient")
    own_k = pairwise_key_recipient(me.private_key, msg.r, initiator_cert.public_key, params)
    basis = [(me.id, own_k), *msg.public_points]
    pairs = tuple(
        (d, own_k if d == me.id else lagrange_eval(basis, d, params.q))
        for d in msg.recipient_ids
    )
    return RecoveredShareSet(pairs=pairs)


def insider_forge_broadcast(
    shares: RecoveredShareSet,
    r_original: int,
    forged_initiator_id: int,
    new_key: int,
    t_star: int,
    rng: random.Random,
    params: GroupParams,
) -> BroadcastMessage:
    """Impersonate the initiator towards the whole group with a chosen key.

    The forged polynomial keeps the recovered (d, k_d) constraints and only
    moves the value at 0 to new_key, so every recipient's own check still
    interpolates cleanly.  r is reused from the original broadcast because
    the one-time secrets are tied to it.
    """
    ids = [d for d, _ in shares.pairs]
    base_points: list[Point] = [(0, new_key), *shares.pairs]
    banned = {0, *ids}
    public_points: list[Point] = []
    for _ in ids:
        a = random_scalar_excluding(rng, params.q, banned)
        banned.add(a)
        public_points.append((a, lagrange_eval(base_points, a, params.q)))
    return BroadcastMessage(
        initiator_id=forged_initiator_id,
        recipient_ids=tuple(ids),
        r=r_original,
        t=t_star,
        public_points=tuple(public_points),
        key_commitment=hash_commitment(t_star, new_key, params),
    )


def brute_force_dlog(
    params: GroupParams, y: int, max_exponent: int | None = None
) -> int:
    """Smallest x with g**x mod p = y, by linear scan over [0, max_exponent].

    Deliberately the dumbest correct algorithm: it is used as an oracle and
    capped at toy orders where the full scan takes well under a second.
    """
    if params.q > MAX_DLOG_ORDER:
        raise ParamsTooLargeError(f"q > 2**24, refusing a {params.q.bit_length()}-bit scan")
    if max_exponent is None:
        max_exponent = params.q - 1
    acc = 1
    target = y % params.p
    for x in range(max_exponent + 1):
        if acc == target:
            return x
        acc = acc * params.g % params.p
    raise DlogNotFoundError(f"no exponent up to {max_exponent} maps to the target")


def outsider_recover_key(
    msg: BroadcastMessage,
    victim_cert: Certificate,
    initiator_cert: Certificate,
    params: GroupParams,
) -> int:
    """Recover the session key from public data alone, at toy sizes.

    Solves the victim's private key from its certificate, replays the
    recipient computation, and interpolates the broadcast polynomial at 0.
    The result is checked against the message's own commitment so a wrong
    recovery cannot pass silently.
    """
    x_victim = brute_force_dlog(params, victim_cert.public_key)
    k = pairwise_key_recipient(x_victim, msg.r, initiator_cert.public_key, params)
    recovered = lagrange_eval(
        [(victim_cert.member_id, k), *msg.public_points], 0, params.q
    )
    if hash_commitment(msg.t, recovered, params) != msg.key_commitment:
        raise KeyRecoveryMismatchError("recovered key fails the broadcast commitment")
    return recovered
