"""Deterministic scenario runner.

A Community bundles parameters, CA and members; a Scenario says which story
to run (one honest session, optionally followed by an attack phase); the
runner produces a Transcript of ordered events.  All randomness flows
through one seeded RNG, the clock is logical, and transcripts serialize to
canonical JSON lines, so equal inputs give byte-identical files.

The transcript doubles as the adversary's view: broadcast events carry the
wire message verbatim (the channel is public) plus ground-truth values the
simulation knows, which attack replays and audits check against.
"""

from __future__ import annotations

import enum
import json
import random
from dataclasses import dataclass, field, replace

from .adversary import (
    ObservedSession,
    forge_replay,
    insider_forge_broadcast,
    insider_recover_shares,
    outsider_recover_key,
)
from .errors import (
    CertificateInvalidError,
    DuplicateIdentifierError,
    MissingLeakedKeyError,
    ScenarioInvalidError,
)
from .groups import GroupParams, random_scalar_excluding
from .pki import CaKeypair, Certificate, Member, ca_keygen, member_keygen, verify_certificate
from .protocol import (
    DEFAULT_FRESHNESS_WINDOW,
    AcceptanceResult,
    BroadcastMessage,
    build_broadcast,
    pairwise_key_initiator,
    process_broadcast,
    random_session_key,
)
from .wire import (
    broadcast_from_record,
    broadcast_record,
    canonical_json,
    certificate_from_record,
    certificate_record,
    int_from_hex,
    int_to_hex,
    params_from_record,
    params_record,
)

DEFAULT_START_TIME = 1_700_000_000  # arbitrary fixed epoch for simulated clocks
DEFAULT_ATTACK_OFFSET = 3600  # attacker strikes an hour later by default


def seeded_rng(purpose: str, seed: int) -> random.Random:
    """Deterministic RNG whose stream is namespaced by purpose.

    Community setup, scenario runs and attack extensions must never share
    a stream even when the user passes equal seeds: a community id draw
    reappearing as a broadcast abscissa would corrupt paper-literal
    processing for that member.
    """
    return random.Random(f"{purpose}:{seed}")


class ScenarioKind(enum.Enum):
    HONEST = "honest"
    REPLAY = "replay"
    INSIDER = "insider"
    DLOG_BREAK = "dlog_break"
    PAPER_LITERAL = "paper_literal"


@dataclass(frozen=True)
class Community:
    """Everyone who agreed on the parameters, plus the CA that vouches."""

    params: GroupParams
    ca: CaKeypair
    members: dict[int, Member]

    def certificate_of(self, member_id: int) -> Certificate:
        return self.members[member_id].certificate

    def record(self) -> dict:
        return {
            "params": params_record(self.params),
            "ca": {
                "signing_scalar": int_to_hex(self.ca.signing_scalar),
                "verify_element": int_to_hex(self.ca.verify_element),
            },
            "members": [
                {
                    "id": int_to_hex(m.id),
                    "private_key": int_to_hex(m.private_key),
                    "certificate": certificate_record(m.certificate),
                }
                for m in sorted(self.members.values(), key=lambda m: m.id)
            ],
        }

    @classmethod
    def from_record(cls, record: dict) -> "Community":
        params = params_from_record(record["params"])
        ca = CaKeypair(
            signing_scalar=int_from_hex(record["ca"]["signing_scalar"]),
            verify_element=int_from_hex(record["ca"]["verify_element"]),
        )
        members: dict[int, Member] = {}
        for entry in record["members"]:
            cert = certificate_from_record(entry["certificate"])
            member = Member(
                id=int_from_hex(entry["id"]),
                private_key=int_from_hex(entry["private_key"]),
                public_key=cert.public_key,
                certificate=cert,
            )
            if member.id != cert.member_id:
                raise ValueError(f"member id {member.id} disagrees with its certificate")
            if member.id in members:
                raise DuplicateIdentifierError(f"member id {member.id} appears twice")
            if pow(params.g, member.private_key, params.p) != member.public_key:
                raise ValueError(f"private key for id {member.id} does not match public key")
            if not verify_certificate(params, ca.verify_element, cert):
                raise CertificateInvalidError(f"certificate for id {member.id} does not verify")
            members[member.id] = member
        return cls(params=params, ca=ca, members=members)


def setup_community(
    n: int, params: GroupParams, seed: int = 0, ids: str = "random"
) -> Community:
    """Create n members with fresh keypairs and CA certificates.

    Identifiers are distinct nonzero scalars, drawn at random or assigned
    1..n under ids="sequential".  Deterministic for a given seed.
    """
    if n < 1:
        raise ValueError("community needs at least one member")
    if n >= params.q:
        raise ValueError("not enough distinct identifiers in Z_q*")
    if ids not in ("random", "sequential"):
        raise ValueError(f"unknown id assignment mode: {ids!r}")
    rng = seeded_rng("community", seed)
    ca = ca_keygen(params, rng)
    members: dict[int, Member] = {}
    used = {0}
    for index in range(n):
        if ids == "sequential":
            member_id = index + 1
        else:
            member_id = random_scalar_excluding(rng, params.q, used)
        used.add(member_id)
        member = member_keygen(params, member_id, ca, rng)
        members[member.id] = member
    return Community(params=params, ca=ca, members=members)


@dataclass(frozen=True)
class Scenario:
    """One scripted story: an honest session, then the kind's attack phase."""

    kind: ScenarioKind
    group_ids: tuple[int, ...]
    initiator_id: int
    seed: int = 0
    start_time: int = DEFAULT_START_TIME
    freshness_window: int = DEFAULT_FRESHNESS_WINDOW
    attack_offset: int = DEFAULT_ATTACK_OFFSET
    insider_id: int | None = None
    victim_id: int | None = None
    new_key: int | None = None
    leak_key: bool = False


def scenario_record(scenario: Scenario) -> dict:
    return {
        "kind": scenario.kind.value,
        "group_ids": [int_to_hex(i) for i in scenario.group_ids],
        "initiator_id": int_to_hex(scenario.initiator_id),
        "seed": scenario.seed,
        "start_time": int_to_hex(scenario.start_time),
        "freshness_window": scenario.freshness_window,
        "attack_offset": scenario.attack_offset,
        "insider_id": None if scenario.insider_id is None else int_to_hex(scenario.insider_id),
        "victim_id": None if scenario.victim_id is None else int_to_hex(scenario.victim_id),
        "new_key": None if scenario.new_key is None else int_to_hex(scenario.new_key),
        "leak_key": scenario.leak_key,
    }


def scenario_from_record(record: dict) -> Scenario:
    return Scenario(
        kind=ScenarioKind(record["kind"]),
        group_ids=tuple(int_from_hex(i) for i in record["group_ids"]),
        initiator_id=int_from_hex(record["initiator_id"]),
        seed=record["seed"],
        start_time=int_from_hex(record["start_time"]),
        freshness_window=record["freshness_window"],
        attack_offset=record["attack_offset"],
        insider_id=None if record["insider_id"] is None else int_from_hex(record["insider_id"]),
        victim_id=None if record["victim_id"] is None else int_from_hex(record["victim_id"]),
        new_key=None if record["new_key"] is None else int_from_hex(record["new_key"]),
        leak_key=record["leak_key"],
    )


@dataclass
class Transcript:
    """Ordered event log; steps are consecutive integers starting at 0."""

    events: list[dict] = field(default_factory=list)

    def append(self, event_type: str, **payload) -> dict:
        event = {"step": len(self.events), "type": event_type, **payload}
        self.events.append(event)
        return event

    def to_jsonl(self) -> str:
        return "".join(canonical_json(event) + "\n" for event in self.events)

    def write(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(self.to_jsonl())

    @classmethod
    def from_jsonl(cls, text: str) -> "Transcript":
        events = [json.loads(line) for line in text.splitlines() if line.strip()]
        return cls(events=events)

    @classmethod
    def read(cls, path) -> "Transcript":
        with open(path, "r", encoding="utf-8") as fh:
            return cls.from_jsonl(fh.read())

    def setup_event(self) -> dict:
        if not self.events or self.events[0]["type"] != "setup":
            raise ValueError("transcript does not start with a setup event")
        return self.events[0]

    def broadcast_events(self) -> list[dict]:
        return [e for e in self.events if e["type"] == "broadcast"]

    def verdict(self) -> dict | None:
        last = self.events[-1] if self.events else None
        return last if last is not None and last["type"] == "verdict" else None

    def audit(self) -> list[str]:
        """Recompute what the verdict claims from the raw events.

        Returns a list of problems; an empty list means the transcript is
        internally consistent (steps consecutive, every delivery references
        an earlier broadcast, verdict counts match the delivery events).
        """
        problems = []
        for index, event in enumerate(self.events):
            if event.get("step") != index:
                problems.append(f"event {index} has step {event.get('step')}")
        broadcast_steps: set[int] = set()
        counts: dict[str, dict] = {}
        for event in self.events:
            if event["type"] == "broadcast":
                broadcast_steps.add(event["step"])
            elif event["type"] == "delivery":
                ref = event.get("broadcast_step")
                if ref not in broadcast_steps or ref >= event["step"]:
                    problems.append(f"delivery at step {event['step']} references broadcast {ref}")
                    continue
                bucket = counts.setdefault(str(ref), {"delivered": 0, "accepted": 0, "rejected": {}})
                bucket["delivered"] += 1
                if event["accepted"]:
                    bucket["accepted"] += 1
                else:
                    reason = event["reason"]
                    bucket["rejected"][reason] = bucket["rejected"].get(reason, 0) + 1
        verdict = self.verdict()
        if verdict is None:
            problems.append("transcript has no final verdict event")
        elif verdict["counts"] != counts:
            problems.append(f"verdict counts {verdict['counts']} != recomputed {counts}")
        return problems


def validate_scenario(community: Community, scenario: Scenario) -> None:
    known = community.members.keys()
    if len(scenario.group_ids) == 0:
        raise ScenarioInvalidError("group is empty")
    if len(set(scenario.group_ids)) != len(scenario.group_ids):
        raise ScenarioInvalidError("group lists a member twice")
    missing = [i for i in scenario.group_ids if i not in known]
    if missing:
        raise ScenarioInvalidError(f"group ids {missing} are not community members")
    if scenario.initiator_id not in known:
        raise ScenarioInvalidError(f"initiator {scenario.initiator_id} is not a community member")
    if scenario.kind is ScenarioKind.REPLAY and not scenario.leak_key:
        raise ScenarioInvalidError("replay scenario requires the leaked session key")
    if scenario.kind is ScenarioKind.INSIDER:
        if scenario.insider_id is None or scenario.insider_id not in scenario.group_ids:
            raise ScenarioInvalidError("insider scenario needs an insider inside the group")
    if scenario.kind is ScenarioKind.DLOG_BREAK:
        if scenario.victim_id is None or scenario.victim_id not in scenario.group_ids:
            raise ScenarioInvalidError("dlog scenario needs a victim inside the group")
    if scenario.new_key is not None and not (1 <= scenario.new_key < community.params.q):
        raise ScenarioInvalidError("forged session key must lie in [1, q-1]")


def _deliver(
    transcript: Transcript,
    community: Community,
    initiator_cert: Certificate,
    msg: BroadcastMessage,
    broadcast_step: int,
    member_ids,
    now: int,
    freshness_window: int,
    paper_literal: bool,
) -> dict[int, AcceptanceResult]:
    results: dict[int, AcceptanceResult] = {}
    for member_id in member_ids:
        result = process_broadcast(
            community.members[member_id],
            initiator_cert,
            msg,
            now,
            freshness_window,
            community.params,
            paper_literal=paper_literal,
        )
        results[member_id] = result
        transcript.append(
            "delivery",
            broadcast_step=broadcast_step,
            member_id=int_to_hex(member_id),
            now=int_to_hex(now),
            accepted=result.accepted,
            key=None if result.key is None else int_to_hex(result.key),
            reason=None if result.reason is None else result.reason.value,
        )
    return results


def _verdict_counts(transcript: Transcript) -> dict:
    counts: dict[str, dict] = {}
    for event in transcript.events:
        if event["type"] != "delivery":
            continue
        bucket = counts.setdefault(
            str(event["broadcast_step"]), {"delivered": 0, "accepted": 0, "rejected": {}}
        )
        bucket["delivered"] += 1
        if event["accepted"]:
            bucket["accepted"] += 1
        else:
            reason = event["reason"]
            bucket["rejected"][reason] = bucket["rejected"].get(reason, 0) + 1
    return counts


def _append_verdict(transcript: Transcript, ok: bool, summary: str) -> None:
    transcript.append("verdict", ok=ok, summary=summary, counts=_verdict_counts(transcript))


def _attack_phase(
    transcript: Transcript,
    community: Community,
    scenario: Scenario,
    initiator_cert: Certificate,
    msg: BroadcastMessage,
    session_key: int,
    pairwise: list[tuple[int, int]],
    rng: random.Random,
) -> None:
    """Append the attack of scenario.kind, its deliveries, and the verdict."""
    params = community.params
    group = list(scenario.group_ids)
    t_attack = msg.t + scenario.attack_offset

    if scenario.kind is ScenarioKind.REPLAY:
        observed = ObservedSession(msg=msg, leaked_key=session_key)
        forged = forge_replay(observed, t_attack, params)
        transcript.append(
            "attack_action",
            attack="replay",
            details={"t_new": int_to_hex(t_attack), "leaked_key": int_to_hex(session_key)},
        )
        step = transcript.append(
            "broadcast",
            origin="replay_forgery",
            msg=broadcast_record(forged),
            ground_truth={"session_key": int_to_hex(session_key)},
        )["step"]
        results = _deliver(
            transcript, community, initiator_cert, forged, step, group,
            t_attack, scenario.freshness_window,
            paper_literal=forged.recipient_ids is None,
        )
        accepted = sum(
            1 for r in results.values() if r.accepted and r.key == session_key
        )
        _append_verdict(
            transcript,
            ok=accepted == len(group),
            summary=f"{accepted}/{len(group)} accepted forged replay",
        )

    elif scenario.kind is ScenarioKind.INSIDER:
        insider = community.members[scenario.insider_id]
        shares = insider_recover_shares(insider, initiator_cert, msg, params)
        shares_match = sorted(shares.pairs) == sorted(pairwise)
        new_key = scenario.new_key
        if new_key is None:
            new_key = random_session_key(rng, params)
        forged = insider_forge_broadcast(
            shares, msg.r, msg.initiator_id, new_key, t_attack, rng, params
        )
        transcript.append(
            "attack_action",
            attack="insider",
            details={
                "insider_id": int_to_hex(scenario.insider_id),
                "recovered_shares": [[int_to_hex(d), int_to_hex(k)] for d, k in shares.pairs],
                "shares_match_ground_truth": shares_match,
                "new_key": int_to_hex(new_key),
                "t_star": int_to_hex(t_attack),
            },
        )
        step = transcript.append(
            "broadcast",
            origin="insider_forgery",
            msg=broadcast_record(forged),
            ground_truth={"session_key": int_to_hex(new_key)},
        )["step"]
        results = _deliver(
            transcript, community, initiator_cert, forged, step, group,
            t_attack, scenario.freshness_window, paper_literal=False,
        )
        accepted = sum(1 for r in results.values() if r.accepted and r.key == new_key)
        _append_verdict(
            transcript,
            ok=accepted == len(group) and shares_match,
            summary=f"{accepted}/{len(group)} accepted K*",
        )

    elif scenario.kind is ScenarioKind.DLOG_BREAK:
        victim_cert = community.certificate_of(scenario.victim_id)
        recovered = outsider_recover_key(msg, victim_cert, initiator_cert, params)
        transcript.append(
            "attack_action",
            attack="dlog",
            details={
                "victim_id": int_to_hex(scenario.victim_id),
                "recovered_key": int_to_hex(recovered),
            },
        )
        matched = recovered == session_key
        _append_verdict(
            transcript,
            ok=matched,
            summary="recovered key matches ground truth"
            if matched
            else "recovered key does not match ground truth",
        )

    else:
        raise ScenarioInvalidError(f"no attack phase for kind {scenario.kind}")


def run_scenario(community: Community, scenario: Scenario) -> Transcript:
    """Run one scenario end to end and return its transcript."""
    validate_scenario(community, scenario)
    params = community.params
    paper = scenario.kind is ScenarioKind.PAPER_LITERAL
    rng = seeded_rng("scenario", scenario.seed)
    transcript = Transcript()
    transcript.append(
        "setup", community=community.record(), scenario=scenario_record(scenario)
    )

    initiator = community.members[scenario.initiator_id]
    recipient_certs = [community.certificate_of(i) for i in scenario.group_ids]
    session_key = random_session_key(rng, params)
    msg, s = build_broadcast(
        initiator,
        recipient_certs,
        session_key,
        scenario.start_time,
        rng,
        params,
        ca_verify_element=community.ca.verify_element,
        paper_literal=paper,
    )
    pairwise = [
        (cert.member_id, pairwise_key_initiator(initiator.private_key, s, cert.public_key, params))
        for cert in recipient_certs
    ]
    broadcast_step = transcript.append(
        "broadcast",
        origin="honest",
        msg=broadcast_record(msg),
        ground_truth={
            "session_key": int_to_hex(session_key),
            "ephemeral_s": int_to_hex(s),
            "pairwise": [[int_to_hex(d), int_to_hex(k)] for d, k in pairwise],
        },
    )["step"]

    # paper-literal broadcasts reach everyone; fixed-format ones are still
    # delivered only to the listed group, which is all that matters here
    targets = sorted(community.members) if paper else list(scenario.group_ids)
    results = _deliver(
        transcript, community, initiator.certificate, msg, broadcast_step,
        targets, scenario.start_time, scenario.freshness_window, paper_literal=paper,
    )

    if scenario.kind is ScenarioKind.HONEST:
        accepted = sum(1 for r in results.values() if r.accepted)
        keys_equal = all(
            r.accepted and r.key == session_key for r in results.values()
        )
        _append_verdict(
            transcript,
            ok=accepted == len(targets) and keys_equal,
            summary=f"{accepted}/{len(targets)} accepted, keys "
            + ("equal" if keys_equal else "mismatch"),
        )
    elif paper:
        group = set(scenario.group_ids)
        members_ok = sum(
            1 for i, r in results.items() if i in group and r.accepted and r.key == session_key
        )
        outsiders = [r for i, r in results.items() if i not in group]
        rejected_mismatch = sum(
            1
            for r in outsiders
            if not r.accepted and r.reason is not None and r.reason.value == "commitment_mismatch"
        )
        false_accepts = sum(1 for r in outsiders if r.accepted)
        _append_verdict(
            transcript,
            ok=members_ok == len(group)
            and rejected_mismatch == len(outsiders)
            and false_accepts == 0,
            summary=f"{members_ok}/{len(group)} members accepted; "
            f"{rejected_mismatch}/{len(outsiders)} non-members rejected (commitment_mismatch)",
        )
    else:
        _attack_phase(
            transcript, community, scenario, initiator.certificate, msg,
            session_key, pairwise, rng,
        )
    return transcript


def extend_with_attack(
    transcript: Transcript,
    kind: ScenarioKind,
    *,
    seed: int = 0,
    t_offset: int = DEFAULT_ATTACK_OFFSET,
    insider_id: int | None = None,
    victim_id: int | None = None,
    new_key: int | None = None,
    leak_key: bool = False,
) -> Transcript:
    """Append an attack phase to a previously recorded honest transcript.

    The community, scenario and observed broadcast are reconstructed from
    the transcript's own events; the attack runs with a fresh RNG seeded
    independently of the recorded session.
    """
    setup = transcript.setup_event()
    community = Community.from_record(setup["community"])
    base = scenario_from_record(setup["scenario"])
    broadcasts = transcript.broadcast_events()
    honest = next((e for e in broadcasts if e["origin"] == "honest"), None)
    if honest is None:
        raise ScenarioInvalidError("transcript records no honest broadcast")
    msg = broadcast_from_record(honest["msg"])
    truth = honest["ground_truth"]
    session_key = int_from_hex(truth["session_key"])
    pairwise = [(int_from_hex(d), int_from_hex(k)) for d, k in truth["pairwise"]]

    if kind is ScenarioKind.REPLAY and not leak_key:
        raise MissingLeakedKeyError("replay attack requires the leaked session key")
    if kind is ScenarioKind.INSIDER and msg.initiator_id is None:
        raise ScenarioInvalidError("insider forgery needs the fixed message format")

    scenario = replace(
        base,
        kind=kind,
        seed=seed,
        attack_offset=t_offset,
        insider_id=insider_id,
        victim_id=victim_id,
        new_key=new_key,
        leak_key=leak_key,
    )
    validate_scenario(community, scenario)
    extended = Transcript(events=[dict(e) for e in transcript.events])
    if extended.verdict() is not None:
        # the honest run's verdict is superseded by the attack verdict;
        # keep delivery history, drop the old summary line
        extended.events.pop()
    rng = seeded_rng("attack", seed)
    _attack_phase(
        extended,
        community,
        scenario,
        community.certificate_of(base.initiator_id),
        msg,
        session_key,
        pairwise,
        rng,
    )
    return extended
