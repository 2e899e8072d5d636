"""Command-line entry points: simulate, replay, analyze, serve, plan."""

from __future__ import annotations

import asyncio
import glob as globmod
import json
import sys
from pathlib import Path

import click

from hovernav import __version__
from hovernav.agents import (AGENT_FOR_TECHNIQUE, AGENT_KINDS,
                             TECHNIQUE_FOR_AGENT, AgentConfig, make_agent)
from hovernav.analyze import analyze as analyze_logs
from hovernav.analyze import write_csv
from hovernav.config import ConfigurationError, load_config
from hovernav.harness import generate_trial_plan
from hovernav.service import SessionDescriptor, replay as replay_log, run_session
from hovernav.techniques import TECHNIQUE_KINDS


@click.group()
@click.version_option(version=__version__, prog_name="hovernav")
def main():
    """Hover-height multiscale navigation: simulator, task harness, service."""


def _load_config(path):
    try:
        return load_config(path)
    except ConfigurationError as exc:
        raise click.ClickException(str(exc))


@main.command()
@click.option("--technique", type=click.Choice(TECHNIQUE_KINDS), required=True)
@click.option("--map", "map_name", default="small", show_default=True,
              help="small, large, or a map named in the config file.")
@click.option("--agent", "agent_kind", type=click.Choice(AGENT_KINDS),
              default=None, help="Defaults to the technique's natural agent.")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--ticks-rate", "--tick-rate", "tick_rate", type=float,
              default=60.0, show_default=True, help="Engine ticks per second.")
@click.option("--out", "out_path", type=click.Path(dir_okay=False),
              required=True, help="Log file to write (one JSON line per tick).")
@click.option("--config", "config_path", type=click.Path(exists=True),
              default=None, help="JSON config with parameter overrides.")
@click.option("--session-id", default="", help="Session id recorded in the log.")
@click.option("--jitter", type=float, default=None,
              help="Agent pointing jitter sd in meters.")
@click.option("--reaction-delay", type=float, default=None,
              help="Agent reaction delay in seconds.")
@click.option("--max-minutes", type=float, default=10.0, show_default=True,
              help="Simulated-time watchdog.")
@click.option("--quiet", is_flag=True)
def simulate(technique, map_name, agent_kind, seed, tick_rate, out_path,
             config_path, session_id, jitter, reaction_delay, max_minutes,
             quiet):
    """Run one agent session and write its tick log."""
    config = _load_config(config_path)
    agent_kind = agent_kind or AGENT_FOR_TECHNIQUE[technique]
    if TECHNIQUE_FOR_AGENT[agent_kind] != technique:
        raise click.ClickException(
            f"agent {agent_kind} drives {TECHNIQUE_FOR_AGENT[agent_kind]}, "
            f"not {technique}")
    agent_overrides = dict(config.agents)
    if jitter is not None:
        agent_overrides["pointing_jitter_sd"] = jitter
    if reaction_delay is not None:
        agent_overrides["reaction_delay_s"] = reaction_delay
    try:
        agent = make_agent(agent_kind, AgentConfig(**agent_overrides), seed)
        descriptor = SessionDescriptor(
            technique=technique, map=map_name, seed=seed, tick_rate=tick_rate,
            session=session_id, agent=agent.describe())
        log, metrics = run_session(
            descriptor, policy=agent, log_path=out_path,
            max_ticks=int(max_minutes * 60.0 * tick_rate), config=config)
    except (ConfigurationError, TypeError) as exc:
        raise click.ClickException(str(exc))
    if not quiet:
        stats = metrics.class_stats()
        mean, sd, n = stats["all"]
        status = "TRUNCATED (watchdog)" if metrics.truncated else "complete"
        click.echo(f"session {descriptor.session_id()}: {status}, "
                   f"{len(log.records)} ticks, {metrics.total_time:.2f} s simulated")
        click.echo(f"  acquisition time: mean {mean:.3f} s, sd {sd:.3f} s over {n} targets")
        click.echo(f"  errors: {metrics.first_miss} first-miss, "
                   f"{metrics.wrong_target} wrong-target; "
                   f"norm scale {metrics.norm_scale_avg:.3f}; "
                   f"zoom-free {metrics.zoom_free_count}")
        click.echo(f"  log: {out_path}")
    if metrics.truncated:
        sys.exit(3)


@main.command(name="replay")
@click.option("--in", "in_path", type=click.Path(exists=True, dir_okay=False),
              required=True)
@click.option("--quiet", is_flag=True)
def replay_cmd(in_path, quiet):
    """Re-execute a log's inputs and verify it reproduces exactly."""
    result = replay_log(in_path)
    if not quiet:
        click.echo(result.describe())
    if not result.ok:
        sys.exit(1)


@main.command(name="analyze")
@click.option("--in", "in_glob", required=True,
              help="Log file, glob, or comma-separated list of either.")
@click.option("--out", "out_path", type=click.Path(dir_okay=False),
              required=True, help="CSV report to write.")
@click.option("--group-by", default="technique,map,class", show_default=True)
@click.option("--fitts", is_flag=True,
              help="Also print a time vs index-of-difficulty fit.")
def analyze_cmd(in_glob, out_path, group_by, fitts):
    """Summarize logs into a per-target + aggregate CSV."""
    paths: list[str] = []
    for part in in_glob.split(","):
        matches = sorted(globmod.glob(part))
        if not matches and Path(part).exists():
            matches = [part]
        paths.extend(matches)
    if not paths:
        raise click.ClickException(f"no logs match {in_glob!r}")
    try:
        rows = analyze_logs(paths, tuple(group_by.split(",")))
    except ValueError as exc:
        raise click.ClickException(str(exc))
    write_csv(rows, out_path)
    n_targets = sum(1 for r in rows if r["row"] == "target")
    click.echo(f"{len(paths)} logs, {n_targets} targets -> {out_path}")
    if fitts:
        from hovernav.analyze import fitts_fit
        try:
            fit = fitts_fit(paths)
        except ValueError as exc:
            raise click.ClickException(str(exc))
        click.echo(f"fitts fit: time = {fit['a']:.3f} + {fit['b']:.3f} * ID "
                   f"(r2 {fit['r2']:.3f}, n {fit['n']})")


@main.command(name="serve")
@click.option("--port", type=int, default=8765, show_default=True,
              help="TCP port for the line-delimited protocol (0 = ephemeral).")
@click.option("--ws-port", type=int, default=None,
              help="WebSocket port speaking the same protocol (0 = ephemeral).")
@click.option("--log-dir", type=click.Path(file_okay=False), default="logs",
              show_default=True)
@click.option("--snapshot-every", type=int, default=1, show_default=True,
              help="Send a state snapshot every N ticks.")
@click.option("--config", "config_path", type=click.Path(exists=True),
              default=None)
@click.option("--ui-dir", type=click.Path(file_okay=False, exists=True),
              default=None, help="Also serve this directory over HTTP :8080.")
@click.option("--ui-port", type=int, default=8080, show_default=True)
def serve_cmd(port, ws_port, log_dir, snapshot_every, config_path, ui_dir,
              ui_port):
    """Run the live session service."""
    from hovernav.server import serve
    config = _load_config(config_path)
    if ui_dir:
        import functools
        import http.server
        import threading
        handler = functools.partial(http.server.SimpleHTTPRequestHandler,
                                    directory=ui_dir)
        httpd = http.server.ThreadingHTTPServer(("127.0.0.1", ui_port), handler)
        threading.Thread(target=httpd.serve_forever, daemon=True).start()
        click.echo(f"ui: http://127.0.0.1:{httpd.server_address[1]}/")
    try:
        asyncio.run(serve(port=port, ws_port=ws_port, log_dir=log_dir,
                          config=config, snapshot_every=snapshot_every))
    except KeyboardInterrupt:
        pass


@main.command(name="plan")
@click.option("--map", "map_name", default="small", show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--config", "config_path", type=click.Path(exists=True),
              default=None)
@click.option("--json", "as_json", is_flag=True, help="Emit JSON instead of text.")
def plan_cmd(map_name, seed, config_path, as_json):
    """Print the target sequence a (map, seed) pair generates."""
    config = _load_config(config_path)
    try:
        map_cfg = config.map_config(map_name)
        plan = generate_trial_plan(map_cfg, seed)
    except (ConfigurationError, Exception) as exc:
        if isinstance(exc, click.ClickException):
            raise
        raise click.ClickException(str(exc))
    if as_json:
        click.echo(json.dumps({
            "map": {"name": map_cfg.name, "width": map_cfg.width,
                    "height": map_cfg.height},
            "seed": seed,
            "targets": [{"index": t.index, "class": t.distance_class,
                         "x": t.position[0], "y": t.position[1],
                         "distance": plan.class_distance(t.distance_class)}
                        for t in plan.targets],
        }))
        return
    click.echo(f"map {map_cfg.name} ({map_cfg.width} x {map_cfg.height} m), "
               f"seed {seed}, diagonal {map_cfg.diagonal:.4f} m")
    for t in plan.targets:
        d = plan.class_distance(t.distance_class)
        click.echo(f"  {t.index:2d}  {t.distance_class:6s} d={d:10.4f} m  "
                   f"({t.position[0]:+10.4f}, {t.position[1]:+10.4f})")


if __name__ == "__main__":
    main()
