"""Request and response schemas for the scenario service.

Protocol scalars (identifiers, keys) travel as hex strings, matching the
transcript wire format; plain integers are reserved for configuration
values like seeds and window sizes.  Transcript events are passed through
as JSON objects so the service stays the single producer of their shape.
"""

from __future__ import annotations

from typing import Literal

from pydantic import BaseModel, Field

from ..harness import DEFAULT_ATTACK_OFFSET, DEFAULT_START_TIME
from ..protocol import DEFAULT_FRESHNESS_WINDOW


class SetupRequest(BaseModel):
    n: int = Field(ge=1)
    params: Literal["toy", "std", "gen"] = "toy"
    seed: int = 0
    ids: Literal["random", "sequential"] = "random"


class SetupResponse(BaseModel):
    community: dict


class RunRequest(BaseModel):
    community: dict
    group_ids: list[str]
    initiator_id: str
    seed: int = 0
    start_time: int = DEFAULT_START_TIME
    freshness_window: int = DEFAULT_FRESHNESS_WINDOW


class ReplayAttackRequest(BaseModel):
    events: list[dict]
    leak_key: bool = False
    t_offset: int = DEFAULT_ATTACK_OFFSET
    seed: int = 0


class InsiderAttackRequest(BaseModel):
    events: list[dict]
    insider_id: str
    new_key: str | None = None
    t_offset: int = DEFAULT_ATTACK_OFFSET
    seed: int = 0


class DlogAttackRequest(BaseModel):
    events: list[dict]
    victim_id: str
    seed: int = 0


class TranscriptResponse(BaseModel):
    events: list[dict]
    ok: bool
    summary: str
