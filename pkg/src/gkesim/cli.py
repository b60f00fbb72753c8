"""Command-line client for the scenario service.

The CLI owns the files (community JSON, transcript JSONL) and delegates all
protocol work to the HTTP service: by default an in-process instance, or a
remote one when --server is given.  Identifiers and keys are written in hex
on the command line, matching the file formats.
"""

from __future__ import annotations

import argparse
import sys
import warnings

import httpx

from .harness import DEFAULT_ATTACK_OFFSET, Transcript
from .wire import canonical_json, int_from_hex


def _client(server: str | None):
    if server is None:
        with warnings.catch_warnings():
            # some installed starlette versions warn at import time
            warnings.simplefilter("ignore")
            from fastapi.testclient import TestClient

        from .service.app import app

        return TestClient(app)
    return httpx.Client(base_url=server, timeout=600.0)


def _post(server: str | None, path: str, payload: dict) -> dict:
    with _client(server) as client:
        response = client.post(path, json=payload)
    if response.status_code != 200:
        try:
            detail = response.json().get("detail", response.text)
        except ValueError:
            detail = response.text
        raise RuntimeError(f"{path} failed ({response.status_code}): {detail}")
    return response.json()


def _read_events(path: str) -> list[dict]:
    return Transcript.read(path).events


def _finish_transcript(payload: dict, out: str | None) -> int:
    if out is not None:
        Transcript(events=payload["events"]).write(out)
        print(f"transcript written to {out}")
    print(f"verdict: {payload['summary']}")
    return 0 if payload["ok"] else 1


def _cmd_setup(args: argparse.Namespace) -> int:
    payload = _post(
        args.server,
        "/setup",
        {"n": args.n, "params": args.params, "seed": args.seed, "ids": args.ids},
    )
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(canonical_json(payload["community"]) + "\n")
    print(f"community of {args.n} written to {args.out}")
    return 0


def _cmd_run(args: argparse.Namespace) -> int:
    with open(args.community, "r", encoding="utf-8") as fh:
        import json

        community = json.load(fh)
    body = {
        "community": community,
        "group_ids": [part for part in args.group.split(",") if part],
        "initiator_id": args.initiator,
        "seed": args.seed,
    }
    path = "/run/paper-literal" if args.run_kind == "paper-literal" else "/run/honest"
    payload = _post(args.server, path, body)
    return _finish_transcript(payload, args.out)


def _cmd_attack_replay(args: argparse.Namespace) -> int:
    payload = _post(
        args.server,
        "/attack/replay",
        {
            "events": _read_events(args.transcript),
            "leak_key": args.leak_key,
            "t_offset": args.t_offset,
            "seed": args.seed,
        },
    )
    return _finish_transcript(payload, args.out)


def _cmd_attack_insider(args: argparse.Namespace) -> int:
    new_key = None if args.new_key == "random" else args.new_key
    if new_key is not None:
        int_from_hex(new_key)  # fail fast on garbage before the request
    payload = _post(
        args.server,
        "/attack/insider",
        {
            "events": _read_events(args.transcript),
            "insider_id": args.insider,
            "new_key": new_key,
            "t_offset": args.t_offset,
            "seed": args.seed,
        },
    )
    return _finish_transcript(payload, args.out)


def _cmd_attack_dlog(args: argparse.Namespace) -> int:
    payload = _post(
        args.server,
        "/attack/dlog",
        {
            "events": _read_events(args.transcript),
            "victim_id": args.victim,
            "seed": args.seed,
        },
    )
    return _finish_transcript(payload, args.out)


def _cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service.app import app

    uvicorn.run(app, host=args.host, port=args.port)
    return 0


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--seed", type=int, default=0, help="RNG seed (default 0)")
    parser.add_argument(
        "--server", default=None, help="service base URL; default runs in-process"
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gkesim",
        description="Group key establishment scenarios: honest runs and attack demonstrations.",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    setup = commands.add_parser("setup", help="create a community file")
    setup.add_argument("--n", type=int, required=True, help="number of members")
    setup.add_argument("--params", choices=["toy", "std", "gen"], default="toy")
    setup.add_argument("--ids", choices=["random", "sequential"], default="random")
    setup.add_argument("--out", required=True, help="community JSON path")
    _add_common(setup)
    setup.set_defaults(handler=_cmd_setup)

    run = commands.add_parser("run", help="run a scenario")
    run_kinds = run.add_subparsers(dest="run_kind", required=True)
    for kind in ("honest", "paper-literal"):
        sub = run_kinds.add_parser(kind)
        sub.add_argument("--community", required=True, help="community JSON path")
        sub.add_argument("--group", required=True, help="comma-separated hex member ids")
        sub.add_argument("--initiator", required=True, help="hex member id")
        sub.add_argument("--out", required=True, help="transcript JSONL path")
        _add_common(sub)
        sub.set_defaults(handler=_cmd_run)

    attack = commands.add_parser("attack", help="extend a transcript with an attack")
    attack_kinds = attack.add_subparsers(dest="attack_kind", required=True)

    replay = attack_kinds.add_parser("replay")
    replay.add_argument("--transcript", required=True)
    replay.add_argument("--leak-key", action="store_true", help="grant the attacker the session key")
    replay.add_argument("--t-offset", type=int, default=DEFAULT_ATTACK_OFFSET)
    replay.add_argument("--out", default=None, help="extended transcript path")
    _add_common(replay)
    replay.set_defaults(handler=_cmd_attack_replay)

    insider = attack_kinds.add_parser("insider")
    insider.add_argument("--transcript", required=True)
    insider.add_argument("--insider", required=True, help="hex id of the malicious member")
    insider.add_argument("--new-key", default="random", help="forged key, hex or 'random'")
    insider.add_argument("--t-offset", type=int, default=DEFAULT_ATTACK_OFFSET)
    insider.add_argument("--out", default=None, help="extended transcript path")
    _add_common(insider)
    insider.set_defaults(handler=_cmd_attack_insider)

    dlog = attack_kinds.add_parser("dlog")
    dlog.add_argument("--transcript", required=True)
    dlog.add_argument("--victim", required=True, help="hex id whose key is brute forced")
    dlog.add_argument("--out", default=None, help="extended transcript path")
    _add_common(dlog)
    dlog.set_defaults(handler=_cmd_attack_dlog)

    serve = commands.add_parser("serve", help="run the HTTP service")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8000)
    serve.set_defaults(handler=_cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except (RuntimeError, OSError, ValueError, httpx.HTTPError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
