"""Tests for broadcast construction and processing."""

import dataclasses
import random

import pytest

from gkesim import (
    CertificateInvalidError,
    Certificate,
    DuplicateRecipientError,
    EmptyGroupError,
    RejectReason,
    ZeroIdentifierError,
    build_broadcast,
    ca_keygen,
    hash_commitment,
    member_keygen,
    pairwise_key_initiator,
    pairwise_key_recipient,
    process_broadcast,
    random_session_key,
    setup_community,
)
from oracles import ScriptedRng, naive_mod_exp

WINDOW = 120

# frozen known-answer vector: sha256(t=0 as 8 bytes || K=1 as 1 byte)
COMMITMENT_KAT = "2ae1c19c0cbd378e46c927a9f3611923ec07cc1ae357502a09536d455275cf21"


@pytest.fixture(scope="module")
def toy_session(toy):
    """The hand-checkable single-recipient session.

    Initiator id 1 with x_w=3, recipient id 4 with x_z=4, ephemeral s=2,
    session key K=7, public abscissa a=2.  The polynomial through (0,7)
    and (4,6) over Z_11 is f(x) = 7 - 3x, so the published point is (2,1).
    """
    ca = ca_keygen(toy, random.Random(0))
    initiator = member_keygen(toy, 1, ca, ScriptedRng([3, 5]))
    recipient = member_keygen(toy, 4, ca, ScriptedRng([4, 6]))
    msg, s = build_broadcast(
        initiator,
        [recipient.certificate],
        7,
        1000,
        ScriptedRng([2, 2]),
        toy,
        ca_verify_element=ca.verify_element,
    )
    return ca, initiator, recipient, msg, s


class TestPairwiseKeys:
    def test_derived_initiator_example(self, toy):
        assert pairwise_key_initiator(3, 2, 16, toy) == 6

    def test_derived_recipient_example(self, toy):
        assert pairwise_key_recipient(4, 4, 8, toy) == 6

    def test_zero_exponents(self, toy):
        assert pairwise_key_initiator(0, 0, 16, toy) == 1
        assert pairwise_key_recipient(0, 4, 8, toy) == 1

    def test_matches_naive_oracle(self, toy, rng):
        for _ in range(100):
            x_w = rng.randrange(11)
            s = rng.randrange(11)
            y_z = rng.randrange(1, 23)
            expected = naive_mod_exp(y_z, (x_w + s) % 11, 23) % 11
            assert pairwise_key_initiator(x_w, s, y_z, toy) == expected

    def test_dh_symmetry_toy(self, toy, rng):
        for _ in range(1000):
            x_w = rng.randrange(11)
            x_z = rng.randrange(11)
            s = rng.randrange(11)
            y_w = pow(toy.g, x_w, toy.p)
            y_z = pow(toy.g, x_z, toy.p)
            r = pow(toy.g, s, toy.p)
            assert pairwise_key_initiator(x_w, s, y_z, toy) == pairwise_key_recipient(
                x_z, r, y_w, toy
            )

    def test_dh_symmetry_std(self, std, rng):
        for _ in range(120):
            x_w = rng.randrange(std.q)
            x_z = rng.randrange(std.q)
            s = rng.randrange(std.q)
            y_w = pow(std.g, x_w, std.p)
            y_z = pow(std.g, x_z, std.p)
            r = pow(std.g, s, std.p)
            assert pairwise_key_initiator(x_w, s, y_z, std) == pairwise_key_recipient(
                x_z, r, y_w, std
            )


class TestHashCommitment:
    def test_known_answer(self, toy):
        assert hash_commitment(0, 1, toy).hex() == COMMITMENT_KAT

    def test_deterministic(self, toy):
        assert hash_commitment(1000, 7, toy) == hash_commitment(1000, 7, toy)

    def test_timestamp_sensitivity(self, medium, rng):
        for _ in range(200):
            t = rng.randrange(2**40)
            key = rng.randrange(medium.q)
            assert hash_commitment(t, key, medium) != hash_commitment(t + 1, key, medium)

    def test_key_width_follows_q(self, toy, std):
        assert len(hash_commitment(0, 1, toy)) == 32
        assert len(hash_commitment(0, 1, std)) == 32
        # widths differ, so equal (t, K) under different q still hash apart
        assert hash_commitment(0, 1, toy) != hash_commitment(0, 1, std)


class TestRandomSessionKey:
    def test_range(self, toy, rng):
        for _ in range(500):
            assert 1 <= random_session_key(rng, toy) < toy.q


class TestBuildBroadcast:
    def test_toy_fixture_message(self, toy, toy_session):
        ca, initiator, recipient, msg, s = toy_session
        assert s == 2
        assert msg.r == 4  # 2^2 mod 23
        assert msg.initiator_id == 1
        assert msg.recipient_ids == (4,)
        assert msg.public_points == ((2, 1),)
        assert msg.key_commitment == hash_commitment(1000, 7, toy)

    def test_empty_group(self, toy, toy_session):
        ca, initiator, *_ = toy_session
        with pytest.raises(EmptyGroupError):
            build_broadcast(
                initiator, [], 7, 1000, random.Random(0), toy,
                ca_verify_element=ca.verify_element,
            )

    def test_duplicate_recipient(self, toy, toy_session):
        ca, initiator, recipient, *_ = toy_session
        with pytest.raises(DuplicateRecipientError):
            build_broadcast(
                initiator,
                [recipient.certificate, recipient.certificate],
                7, 1000, random.Random(0), toy,
                ca_verify_element=ca.verify_element,
            )

    def test_zero_recipient_id(self, toy, toy_session):
        ca, initiator, recipient, *_ = toy_session
        bogus = Certificate(
            member_id=0,
            public_key=recipient.certificate.public_key,
            commitment=recipient.certificate.commitment,
            response=recipient.certificate.response,
        )
        with pytest.raises(ZeroIdentifierError):
            build_broadcast(
                initiator, [bogus], 7, 1000, random.Random(0), toy,
                ca_verify_element=ca.verify_element,
            )

    def test_invalid_certificate(self, toy, toy_session):
        ca, initiator, recipient, *_ = toy_session
        tampered = dataclasses.replace(
            recipient.certificate, response=(recipient.certificate.response + 1) % toy.q
        )
        with pytest.raises(CertificateInvalidError):
            build_broadcast(
                initiator, [tampered], 7, 1000, random.Random(0), toy,
                ca_verify_element=ca.verify_element,
            )

    def test_session_key_out_of_range(self, toy, toy_session):
        ca, initiator, recipient, *_ = toy_session
        with pytest.raises(ValueError):
            build_broadcast(
                initiator, [recipient.certificate], 11, 1000, random.Random(0), toy,
                ca_verify_element=ca.verify_element,
            )

    def test_abscissa_hygiene(self, medium, medium_community, rng):
        community = medium_community
        ids = sorted(community.members)
        for _ in range(100):
            group = rng.sample(ids, rng.randrange(1, 11))
            initiator = community.members[rng.choice(ids)]
            key = random_session_key(rng, medium)
            msg, _ = build_broadcast(
                initiator,
                [community.members[i].certificate for i in group],
                key, 1000, rng, medium,
                ca_verify_element=community.ca.verify_element,
            )
            abscissas = [x for x, _ in msg.public_points]
            assert len(msg.public_points) == len(group)
            assert len(set(abscissas)) == len(abscissas)
            assert 0 not in abscissas
            assert not set(abscissas) & set(group)


class TestProcessBroadcast:
    def test_toy_fixture_accepted(self, toy, toy_session):
        ca, initiator, recipient, msg, _ = toy_session
        result = process_broadcast(
            recipient, initiator.certificate, msg, 1000, WINDOW, toy
        )
        assert result.accepted
        assert result.key == 7
        assert result.reason is None

    def test_freshness_boundary(self, toy, toy_session):
        ca, initiator, recipient, msg, _ = toy_session
        at_edge = process_broadcast(
            recipient, initiator.certificate, msg, 1000 + WINDOW, WINDOW, toy
        )
        assert at_edge.accepted
        past_edge = process_broadcast(
            recipient, initiator.certificate, msg, 1000 + WINDOW + 1, WINDOW, toy
        )
        assert not past_edge.accepted
        assert past_edge.reason is RejectReason.STALE_TIMESTAMP

    def test_freshness_is_two_sided(self, toy, toy_session):
        ca, initiator, recipient, msg, _ = toy_session
        early = process_broadcast(
            recipient, initiator.certificate, msg, 1000 - WINDOW - 1, WINDOW, toy
        )
        assert not early.accepted
        assert early.reason is RejectReason.STALE_TIMESTAMP

    def test_tampered_commitment(self, toy, toy_session):
        ca, initiator, recipient, msg, _ = toy_session
        tampered = dataclasses.replace(
            msg, key_commitment=bytes(32 - len(b"x")) + b"x"
        )
        result = process_broadcast(
            recipient, initiator.certificate, tampered, 1000, WINDOW, toy
        )
        assert not result.accepted
        assert result.reason is RejectReason.COMMITMENT_MISMATCH

    def test_not_addressed(self, toy, toy_session):
        ca, initiator, recipient, msg, _ = toy_session
        outsider = member_keygen(toy, 5, ca, random.Random(2))
        result = process_broadcast(
            outsider, initiator.certificate, msg, 1000, WINDOW, toy
        )
        assert not result.accepted
        assert result.reason is RejectReason.NOT_ADDRESSED

    def test_malformed_variants(self, toy, toy_session):
        ca, initiator, recipient, msg, _ = toy_session
        cases = [
            dataclasses.replace(msg, public_points=()),
            dataclasses.replace(msg, public_points=((2, 1), (2, 5))),
            dataclasses.replace(msg, recipient_ids=(4, 5)),
            dataclasses.replace(msg, recipient_ids=None),
            dataclasses.replace(msg, initiator_id=None),
            dataclasses.replace(msg, initiator_id=9),
            # a published point right on the recipient's own abscissa
            dataclasses.replace(msg, public_points=((4, 1),)),
        ]
        for malformed in cases:
            result = process_broadcast(
                recipient, initiator.certificate, malformed, 1000, WINDOW, toy
            )
            assert not result.accepted
            assert result.reason is RejectReason.MALFORMED_MESSAGE

    def test_completeness_random_groups(self, medium, medium_community, rng):
        community = medium_community
        ids = sorted(community.members)
        for _ in range(30):
            group = rng.sample(ids, rng.randrange(1, 11))
            initiator = community.members[rng.choice(ids)]
            key = random_session_key(rng, medium)
            t = rng.randrange(2**32)
            msg, _ = build_broadcast(
                initiator,
                [community.members[i].certificate for i in group],
                key, t, rng, medium,
                ca_verify_element=community.ca.verify_element,
            )
            for member_id in group:
                result = process_broadcast(
                    community.members[member_id], initiator.certificate,
                    msg, t, WINDOW, medium,
                )
                assert result.accepted
                assert result.key == key

    def test_initiator_in_own_group(self, medium, medium_community, rng):
        community = medium_community
        ids = sorted(community.members)
        initiator = community.members[ids[0]]
        group = ids[:4]
        key = random_session_key(rng, medium)
        msg, _ = build_broadcast(
            initiator,
            [community.members[i].certificate for i in group],
            key, 1000, rng, medium,
            ca_verify_element=community.ca.verify_element,
        )
        result = process_broadcast(
            initiator, initiator.certificate, msg, 1000, WINDOW, medium
        )
        assert result.accepted
        assert result.key == key


class TestPaperLiteralMode:
    def test_message_omits_identifiers(self, toy, toy_session):
        ca, initiator, recipient, *_ = toy_session
        msg, _ = build_broadcast(
            initiator, [recipient.certificate], 7, 1000, random.Random(1), toy,
            ca_verify_element=ca.verify_element, paper_literal=True,
        )
        assert msg.initiator_id is None
        assert msg.recipient_ids is None

    def test_member_still_recovers(self, toy, toy_session):
        ca, initiator, recipient, *_ = toy_session
        msg, _ = build_broadcast(
            initiator, [recipient.certificate], 7, 1000, random.Random(1), toy,
            ca_verify_element=ca.verify_element, paper_literal=True,
        )
        result = process_broadcast(
            recipient, initiator.certificate, msg, 1000, WINDOW, toy,
            paper_literal=True,
        )
        assert result.accepted
        assert result.key == 7

    def test_non_member_soundness(self, std, rng):
        # 1000 blind recovery attempts by outsiders, zero false accepts
        community = setup_community(30, std, seed=4)
        ids = sorted(community.members)
        false_accepts = 0
        attempts = 0
        for session in range(100):
            group = rng.sample(ids, 5)
            initiator = community.members[rng.choice(ids)]
            key = random_session_key(rng, std)
            msg, _ = build_broadcast(
                initiator,
                [community.members[i].certificate for i in group],
                key, 1000, rng, std,
                ca_verify_element=community.ca.verify_element, paper_literal=True,
            )
            outsiders = [i for i in ids if i not in group]
            for member_id in rng.sample(outsiders, 10):
                result = process_broadcast(
                    community.members[member_id], initiator.certificate,
                    msg, 1000, WINDOW, std, paper_literal=True,
                )
                attempts += 1
                if result.accepted:
                    false_accepts += 1
                else:
                    assert result.reason is RejectReason.COMMITMENT_MISMATCH
        assert attempts == 1000
        assert false_accepts == 0
