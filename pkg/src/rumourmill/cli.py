"""The `mill` command line.

    mill once --wackiness 0.7 --genre politics --when past [--seed 42]
    mill serve --config mill.json
    mill refill --target 2 [--config mill.json]
    mill refserver [--listen 127.0.0.1:8900]
"""

from __future__ import annotations

import argparse
import logging
import random
import sys
import time
from datetime import datetime

from rumourmill.backends import BuiltinBackend
from rumourmill.api import MillApiServer
from rumourmill.config import load_config, make_backend, make_controller
from rumourmill.cache import CacheStore
from rumourmill.errors import NoRumourAvailable, RumourMillError
from rumourmill.milling import generate_rumour, mill_once
from rumourmill.params import MillSettings, Wackiness, genre_from_string, when_from_string
from rumourmill.refserver import ReferenceServer
from rumourmill.remote import RemoteBackend
from rumourmill.ticket import render_ticket

logger = logging.getLogger(__name__)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mill", description="The rumour mill")
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    sub = parser.add_subparsers(dest="command", required=True)

    once = sub.add_parser("once", help="mill a single rumour and print the ticket")
    once.add_argument("--wackiness", type=float, required=True, help="0.0 (conventional) .. 1.0 (wacky)")
    once.add_argument("--genre", required=True, help="genre name, e.g. politics or conspiracy_theory")
    once.add_argument("--when", required=True, help="past, present or future")
    once.add_argument("--seed", type=int, default=None, help="fix the rng for reproducible output")
    once.add_argument("--now", default=None, help="pin the clock (ISO-8601) for reproducible output")
    once.add_argument("--backend", choices=("builtin", "remote"), default="builtin")
    once.add_argument("--config", default=None, help="service config (required for --backend remote)")
    once.add_argument("--width", type=int, default=32, help="ticket width in columns")
    once.add_argument("--escpos", default=None, help="also write the ESC/POS bytes to this file")

    serve = sub.add_parser("serve", help="run the mill service")
    serve.add_argument("--config", required=True, help="service config file (JSON)")

    refill = sub.add_parser("refill", help="run one full cache refill pass")
    refill.add_argument("--target", type=int, required=True, help="per-key queue target")
    refill.add_argument("--config", default="mill.json", help="service config file (JSON)")

    ref = sub.add_parser("refserver", help="run the reference generation server")
    ref.add_argument("--listen", default="127.0.0.1:8900", help="host:port to bind")
    return parser


def _parse_listen(listen: str):
    host, _, port = listen.rpartition(":")
    return host, int(port)


def cmd_once(args) -> int:
    settings = MillSettings(
        wackiness=Wackiness(args.wackiness),
        genre=genre_from_string(args.genre),
        when=when_from_string(args.when),
    )
    if args.backend == "remote":
        if args.config is None:
            print("error: --backend remote needs --config", file=sys.stderr)
            return 2
        config = load_config(args.config)
        if config.remote is None:
            print("error: config has no remote section", file=sys.stderr)
            return 2
        backend = RemoteBackend(config.remote)
    else:
        backend = BuiltinBackend()
    rng = random.Random(args.seed)
    if args.now is not None:
        pinned = datetime.fromisoformat(args.now)
        clock = lambda: pinned
    else:
        clock = datetime.now
    try:
        rumour = mill_once(settings, backend, None, clock, rng)
    except NoRumourAvailable as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    ticket = render_ticket(rumour, args.width)
    sys.stdout.buffer.write(("\n".join(ticket.lines) + "\n").encode("utf-8"))
    sys.stdout.buffer.flush()
    if args.escpos:
        with open(args.escpos, "wb") as fh:
            fh.write(ticket.escpos)
    return 0


def cmd_serve(args) -> int:
    config = load_config(args.config)
    controller = make_controller(config)
    controller.start()
    server = MillApiServer(config.listen_address(), controller)
    server.start()
    logger.info("mill service listening on %s", server.base_url)
    print(f"mill service listening on {server.base_url}", file=sys.stderr)
    try:
        while True:
            time.sleep(3600)
    except KeyboardInterrupt:
        pass
    finally:
        server.stop()
        controller.stop()
        controller.cache.close()
    return 0


def cmd_refill(args) -> int:
    config = load_config(args.config)
    backend, _ = make_backend(config)
    genre_map = config.load_genre_map()
    rng = random.Random()
    deposited = failures = 0
    with CacheStore(config.cache_path, capacity=config.cache_capacity) as cache:
        plan = cache.refill_plan(args.target)
        for key, deficit in plan:
            for _ in range(deficit):
                try:
                    from rumourmill.controller import settings_for_key

                    rumour = generate_rumour(settings_for_key(key), backend, datetime.now, rng, genre_map)
                except RumourMillError as exc:
                    logger.warning("refill failed for %s: %s", key, exc)
                    failures += 1
                    continue
                cache.put(key, rumour)
                deposited += 1
        total = cache.total()
    print(f"refill: deposited {deposited} rumour(s), {failures} failure(s), cache now holds {total}")
    return 0 if failures == 0 else 1


def cmd_refserver(args) -> int:
    server = ReferenceServer(_parse_listen(args.listen))
    server.backend.warm()
    print(f"reference server listening on {server.base_url}", file=sys.stderr)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
    return 0


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    try:
        if args.command == "once":
            return cmd_once(args)
        if args.command == "serve":
            return cmd_serve(args)
        if args.command == "refill":
            return cmd_refill(args)
        return cmd_refserver(args)
    except RumourMillError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
