"""Simulated certificate authority.

The CA binds member identifiers to long-term DH public keys with a Schnorr
signature over the same group the protocol uses, so the repo needs no second
algebraic structure.  Certificates are issued once at community setup; there
is no revocation or expiry because none of the demonstrated attacks involve
PKI failure.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .errors import ZeroIdentifierError
from .groups import GroupParams, random_scalar

Signature = tuple[int, int]


@dataclass(frozen=True)
class CaKeypair:
    signing_scalar: int
    verify_element: int


@dataclass(frozen=True)
class Certificate:
    """CA-signed binding of a member id to a DH public key.

    The signature pair is (commitment, response), both Z_q scalars.
    """

    member_id: int
    public_key: int
    commitment: int
    response: int


@dataclass(frozen=True)
class Member:
    """A community member: identifier, long-term DH keypair, certificate."""

    id: int
    private_key: int
    public_key: int
    certificate: Certificate


def certificate_payload(member_id: int, public_key: int, params: GroupParams) -> bytes:
    """Canonical signing encoding: fixed-width big-endian id then key.

    Fixed widths (q width for the id, p width for the key) make the
    encoding injective, so no two (id, key) pairs share a signature
    preimage.
    """
    return member_id.to_bytes(params.q_bytes, "big") + public_key.to_bytes(
        params.p_bytes, "big"
    )


def _challenge(commit_element: int, message: bytes, params: GroupParams) -> int:
    hasher = params.new_hash()
    hasher.update(commit_element.to_bytes(params.p_bytes, "big"))
    hasher.update(message)
    return int.from_bytes(hasher.digest(), "big") % params.q


def ca_keygen(params: GroupParams, rng: random.Random) -> CaKeypair:
    """Fresh CA keypair; the signing scalar is never zero."""
    x = random_scalar(rng, params.q, allow_zero=False)
    return CaKeypair(signing_scalar=x, verify_element=pow(params.g, x, params.p))


def sign(ca: CaKeypair, message: bytes, rng: random.Random, params: GroupParams) -> Signature:
    """Schnorr signature: (challenge, response) over the group's hash."""
    k = random_scalar(rng, params.q, allow_zero=False)
    commit_element = pow(params.g, k, params.p)
    e = _challenge(commit_element, message, params)
    s = (k + ca.signing_scalar * e) % params.q
    return (e, s)


def verify(verify_element: int, message: bytes, signature: Signature, params: GroupParams) -> bool:
    """Check a signature; rejection is a return value, never an exception."""
    e, s = signature
    if not (0 <= e < params.q and 0 <= s < params.q):
        return False
    if not (1 <= verify_element < params.p):
        return False
    # g**s * y**-e reconstructs the signer's commitment; y**-e = y**(q-e)
    # because y lies in the order-q subgroup.
    recon = pow(params.g, s, params.p) * pow(verify_element, (params.q - e) % params.q, params.p) % params.p
    return _challenge(recon, message, params) == e


def member_keygen(params: GroupParams, member_id: int, ca: CaKeypair, rng: random.Random) -> Member:
    """Generate a member keypair and have the CA certify it.

    Identifier 0 is refused: the session key is stored at abscissa 0, so a
    member with id 0 would collide with it.
    """
    if member_id == 0:
        raise ZeroIdentifierError("member id 0 collides with the key abscissa")
    if not (0 < member_id < params.q):
        raise ValueError(f"member id {member_id} outside [1, q-1]")
    x = random_scalar(rng, params.q, allow_zero=False)
    y = pow(params.g, x, params.p)
    e, s = sign(ca, certificate_payload(member_id, y, params), rng, params)
    cert = Certificate(member_id=member_id, public_key=y, commitment=e, response=s)
    return Member(id=member_id, private_key=x, public_key=y, certificate=cert)


def verify_certificate(params: GroupParams, ca_verify_element: int, cert: Certificate) -> bool:
    """Accept iff the signature binds (member_id, public_key) under the CA key."""
    payload = certificate_payload(cert.member_id, cert.public_key, params)
    return verify(ca_verify_element, payload, (cert.commitment, cert.response), params)
