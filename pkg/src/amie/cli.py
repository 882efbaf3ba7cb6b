"""Operator command line: calibrate, evaluate, serve, replay, walkthrough."""

from __future__ import annotations

import argparse
import asyncio
import difflib
import json
import math
import sys
from pathlib import Path

from .config import AppConfig, ConfigError, config_from_env, load_app_config
from .errors import AmieError
from .floorplan import (
    Direction,
    UserPose,
    drop_reached_waypoint,
    load_reference_plan,
    next_direction,
    plan_route,
)
from .messages import render_message
from .rfmodel import fit_cubic_model, fit_cubic_to_log_model, load_calibration_csv
from .service import AmbientServer, AmbientService
from .simkit import SimConfig, Simulator, run_accuracy_eval
from .weather import stub_provider, url_provider


def build_service(config: AppConfig) -> AmbientService:
    plan = config.load_plan()
    simulator = None
    if config.mode == "sim":
        simulator = Simulator(
            SimConfig(
                plan=plan,
                radio=config.radio,
                noise_sigma=config.noise_sigma,
                seed=config.seed,
                step_length=config.step_length,
            )
        )
    weather = stub_provider if config.weather == "stub" else url_provider(config.weather)
    return AmbientService(
        plan, config.radio, simulator=simulator, weather=weather, default_lang=config.lang
    )


def run_walkthrough(lang: str = "en", step_length: float = 2.0) -> list[str]:
    """Drive a virtual user from (1,1) to the digital lab and collect messages."""
    plan = load_reference_plan()
    dest = plan.poi("digital_lab")
    pose = UserPose(position=(1.0, 1.0), heading=math.pi / 2)
    waypoints = plan_route(plan, pose.position, "digital_lab")
    messages = []
    for _ in range(64):  # bounded: the fixture route is short
        waypoints = drop_reached_waypoint(pose.position, waypoints)
        direction = next_direction(pose, waypoints, dest.anchor)
        messages.append(render_message(direction, lang))
        if direction is Direction.ARRIVED:
            break
        if direction is Direction.FORWARD:
            x = pose.position[0] + step_length * math.cos(pose.heading)
            y = pose.position[1] + step_length * math.sin(pose.heading)
            pose = UserPose(position=plan.clamp((x, y)), heading=pose.heading)
        else:
            wx, wy = waypoints[0]
            bearing = math.atan2(wy - pose.position[1], wx - pose.position[0])
            pose = UserPose(position=pose.position, heading=bearing)
    return messages


def _nonneg_float(text: str) -> float:
    value = float(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be non-negative, got {text}")
    return value


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be at least 1, got {text}")
    return value


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="amie", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("calibrate", help="fit cubic distance coefficients from a sample CSV")
    p.add_argument("samples", help="CSV file with header rssi_dbm,distance_m")

    p = sub.add_parser("evaluate", help="run a Monte Carlo localization accuracy evaluation")
    p.add_argument("--sigma", type=_nonneg_float, default=2.0, help="RSSI noise sigma in dB")
    p.add_argument("--trials", type=_positive_int, default=10000)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--models", default="cubic,logdist", help="comma list: cubic,logdist")
    p.add_argument("--out", default="reports", help="report output directory")

    p = sub.add_parser("serve", help="run the control-unit service")
    p.add_argument("--config", help="config file (falls back to AMIE_CONFIG)")

    p = sub.add_parser("replay", help="re-send recorded request frames and diff the responses")
    p.add_argument("trace", help="file with one request frame per line")
    p.add_argument("--golden", help="expected responses (default: <trace>.golden if present)")
    p.add_argument("--config", help="service config to replay against")

    p = sub.add_parser("walkthrough", help="print the canonical guided-walk direction sequence")
    p.add_argument("--lang", choices=("en", "ar"), default="en")

    return parser


def _cmd_calibrate(args) -> int:
    model = fit_cubic_model(load_calibration_csv(args.samples))
    print(f"a3={model.a3:.10g} a2={model.a2:.10g} a1={model.a1:.10g} a0={model.a0:.10g}")
    return 0


def _cmd_evaluate(args) -> int:
    plan = load_reference_plan()
    config = AppConfig()
    radio = config.radio
    names = [n.strip() for n in args.models.split(",") if n.strip()]
    models = {}
    for name in names:
        if name == "cubic":
            models[name] = fit_cubic_to_log_model(radio)
        elif name == "logdist":
            models[name] = radio
        else:
            print(f"error: unknown model {name!r} (expected cubic or logdist)", file=sys.stderr)
            return 2
    report = run_accuracy_eval(
        SimConfig(plan=plan, radio=radio, noise_sigma=args.sigma, seed=args.seed, trials=args.trials),
        models,
    )
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    stem = f"accuracy_s{args.sigma:g}_n{args.trials}_seed{args.seed}"
    (out / f"{stem}.json").write_text(
        json.dumps(report.to_dict(), sort_keys=True, indent=2) + "\n", "utf-8"
    )
    (out / f"{stem}.txt").write_text(report.to_table(), "utf-8")
    print(report.to_table(), end="")
    print(f"reports written to {out / stem}.{{json,txt}}")
    return 0


def _load_cli_config(path: str | None) -> AppConfig:
    if path is not None:
        return load_app_config(path)
    try:
        return config_from_env()
    except ConfigError:
        return AppConfig()


def _cmd_serve(args) -> int:
    config = load_app_config(args.config) if args.config else config_from_env()
    service = build_service(config)
    server = AmbientServer(service, tcp_port=config.tcp_port, ws_port=config.ws_port)
    try:
        asyncio.run(server.serve_forever())
    except KeyboardInterrupt:
        pass
    return 0


def _cmd_replay(args) -> int:
    config = _load_cli_config(args.config)
    service = build_service(config)
    lines = Path(args.trace).read_text("utf-8").splitlines()

    async def run() -> list[str]:
        ctx = service.new_session()
        return [(await service.process_line(line, ctx)).to_frame() for line in lines]

    responses = asyncio.run(run())
    for frame in responses:
        print(frame)

    golden_path = args.golden
    if golden_path is None:
        candidate = Path(args.trace + ".golden")
        golden_path = str(candidate) if candidate.is_file() else None
    if golden_path is None:
        return 0
    expected = Path(golden_path).read_text("utf-8").splitlines()
    if responses == expected:
        print(f"replay matches {golden_path}")
        return 0
    print("replay differs from golden:", file=sys.stderr)
    for delta in difflib.unified_diff(expected, responses, "golden", "replay", lineterm=""):
        print(delta, file=sys.stderr)
    return 1


def _cmd_walkthrough(args) -> int:
    for message in run_walkthrough(lang=args.lang):
        print(message)
    return 0


def dispatch(argv: list[str]) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    commands = {
        "calibrate": _cmd_calibrate,
        "evaluate": _cmd_evaluate,
        "serve": _cmd_serve,
        "replay": _cmd_replay,
        "walkthrough": _cmd_walkthrough,
    }
    try:
        return commands[args.command](args)
    except AmieError as exc:
        print(f"error: {exc.code}: {exc}", file=sys.stderr)
        return 1
    except FileNotFoundError as exc:
        print(f"error: file not found: {exc.filename}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(dispatch(sys.argv[1:]))


if __name__ == "__main__":
    main()
