"""HTTP face of the scenario runner.

Every endpoint is a pure function of its request body: communities and
transcripts are sent back and forth as JSON rather than held in server
state, so the service can be scaled or embedded in-process (the CLI does
the latter) without behavioral difference.
"""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from ..errors import GkesimError
from ..harness import (
    Community,
    Scenario,
    ScenarioKind,
    Transcript,
    extend_with_attack,
    run_scenario,
    seeded_rng,
    setup_community,
)
from ..presets import generate_params, std_params, toy_params
from ..wire import int_from_hex
from .models import (
    DlogAttackRequest,
    InsiderAttackRequest,
    ReplayAttackRequest,
    RunRequest,
    SetupRequest,
    SetupResponse,
    TranscriptResponse,
)


def _transcript_response(transcript: Transcript) -> TranscriptResponse:
    verdict = transcript.verdict()
    return TranscriptResponse(
        events=transcript.events, ok=verdict["ok"], summary=verdict["summary"]
    )


def _run(request: RunRequest, kind: ScenarioKind) -> TranscriptResponse:
    community = Community.from_record(request.community)
    scenario = Scenario(
        kind=kind,
        group_ids=tuple(int_from_hex(i) for i in request.group_ids),
        initiator_id=int_from_hex(request.initiator_id),
        seed=request.seed,
        start_time=request.start_time,
        freshness_window=request.freshness_window,
    )
    return _transcript_response(run_scenario(community, scenario))


def create_app() -> FastAPI:
    app = FastAPI(
        title="gkesim",
        description="Group key establishment scenarios and attacks over a simulated broadcast channel.",
    )

    @app.exception_handler(GkesimError)
    async def domain_error(request: Request, exc: GkesimError) -> JSONResponse:
        return JSONResponse(status_code=400, content={"detail": str(exc)})

    @app.exception_handler(ValueError)
    async def value_error(request: Request, exc: ValueError) -> JSONResponse:
        return JSONResponse(status_code=400, content={"detail": str(exc)})

    @app.post("/setup", response_model=SetupResponse)
    def setup(request: SetupRequest) -> SetupResponse:
        if request.params == "toy":
            params = toy_params()
        elif request.params == "std":
            params = std_params()
        else:
            params = generate_params(seeded_rng("params", request.seed))
        community = setup_community(request.n, params, seed=request.seed, ids=request.ids)
        return SetupResponse(community=community.record())

    @app.post("/run/honest", response_model=TranscriptResponse)
    def run_honest(request: RunRequest) -> TranscriptResponse:
        return _run(request, ScenarioKind.HONEST)

    @app.post("/run/paper-literal", response_model=TranscriptResponse)
    def run_paper_literal(request: RunRequest) -> TranscriptResponse:
        return _run(request, ScenarioKind.PAPER_LITERAL)

    @app.post("/attack/replay", response_model=TranscriptResponse)
    def attack_replay(request: ReplayAttackRequest) -> TranscriptResponse:
        extended = extend_with_attack(
            Transcript(events=request.events),
            ScenarioKind.REPLAY,
            seed=request.seed,
            t_offset=request.t_offset,
            leak_key=request.leak_key,
        )
        return _transcript_response(extended)

    @app.post("/attack/insider", response_model=TranscriptResponse)
    def attack_insider(request: InsiderAttackRequest) -> TranscriptResponse:
        extended = extend_with_attack(
            Transcript(events=request.events),
            ScenarioKind.INSIDER,
            seed=request.seed,
            t_offset=request.t_offset,
            insider_id=int_from_hex(request.insider_id),
            new_key=None if request.new_key is None else int_from_hex(request.new_key),
        )
        return _transcript_response(extended)

    @app.post("/attack/dlog", response_model=TranscriptResponse)
    def attack_dlog(request: DlogAttackRequest) -> TranscriptResponse:
        extended = extend_with_attack(
            Transcript(events=request.events),
            ScenarioKind.DLOG_BREAK,
            seed=request.seed,
            victim_id=int_from_hex(request.victim_id),
        )
        return _transcript_response(extended)

    return app


app = create_app()
