"""Command-line interface: run programs, emit traces, print derivations,
and serve trace documents to the stepper UI.

Exit codes: 0 ok, 1 runtime error, 2 parse error, 3 step limit, 4 usage.
"""

from __future__ import annotations

import argparse
import sys
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

from . import trace as trace_mod
from .errors import MachineError, ReadError, StepLimitError
from .machine import DEFAULT_CONFIG, MachineConfig, run
from .values import UNSPECIFIED, write_text

EXIT_OK = 0
EXIT_RUNTIME = 1
EXIT_PARSE = 2
EXIT_STEP_LIMIT = 3
EXIT_USAGE = 4

DEFAULT_PORT = 8731


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(prog="cse", description=__doc__)
    commands = parser.add_subparsers(dest="command", required=True)

    def add(name, help_text):
        sub = commands.add_parser(name, help=help_text)
        sub.add_argument("input", help="program file, or - for stdin")
        sub.add_argument("--step-limit", type=int, default=DEFAULT_CONFIG.step_limit,
                         metavar="N", help="abort after N machine states")
        sub.add_argument("--proper-tail-calls", action="store_true",
                         help="elide redundant environment-restore instructions")
        return sub

    add("run", "evaluate a program and print its value")
    sub = add("trace", "write the full state trace as JSON")
    sub.add_argument("--output", default="-", metavar="PATH",
                     help="trace destination (default stdout)")
    add("derive", "print the run as a plain-text derivation")
    sub = add("serve", "serve the program's trace over HTTP for the stepper UI")
    sub.add_argument("--port", type=int, default=DEFAULT_PORT, metavar="N")
    return parser


def _read_input(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, "r", encoding="utf-8") as handle:
        return handle.read()


def _config(args) -> MachineConfig:
    return MachineConfig(step_limit=args.step_limit,
                         proper_tail_calls=args.proper_tail_calls)


def cmd_run(args) -> int:
    source = _read_input(args.input)
    try:
        outcome = run(source, _config(args), out_hook=sys.stdout.write)
    except ReadError as error:
        print(str(error), file=sys.stderr)
        return EXIT_PARSE
    except StepLimitError as error:
        print(str(error), file=sys.stderr)
        return EXIT_STEP_LIMIT
    except MachineError as error:
        print(str(error), file=sys.stderr)
        return EXIT_RUNTIME
    if outcome.value is not UNSPECIFIED:
        print(write_text(outcome.value, outcome.final_state.pairs))
    print(f"steps: {outcome.steps_taken}", file=sys.stderr)
    return EXIT_OK


_OUTCOME_EXIT = {"value": EXIT_OK, "error": EXIT_RUNTIME, "step_limit": EXIT_STEP_LIMIT}


def _record_document(args):
    source = _read_input(args.input)
    return trace_mod.record(source, _config(args))


def cmd_trace(args) -> int:
    try:
        document = _record_document(args)
    except ReadError as error:
        print(str(error), file=sys.stderr)
        return EXIT_PARSE
    text = trace_mod.serialize(document)
    if args.output == "-":
        sys.stdout.write(text)
    else:
        with open(args.output, "w", encoding="utf-8") as handle:
            handle.write(text)
    outcome = document["outcome"]
    if outcome["kind"] != "value":
        print(outcome["repr"], file=sys.stderr)
    return _OUTCOME_EXIT[outcome["kind"]]


### derivation rendering (the paper-style notation in plain text)

def _collapse(text: str) -> str:
    return " ".join(text.split())


def _derive_control_item(item: dict) -> str:
    opcode = item.get("opcode")
    if opcode is None:
        return _collapse(item["source_text"])
    params = item["params"]
    if opcode == "ASGN":
        return f"ASGN {params['name']}"
    if opcode == "CALL":
        return f"CALL {params['arity']}"
    if opcode == "ENV":
        return f"ENV E{item['env_ref']}"
    if opcode == "BRANCH":
        consequent = _collapse(params["consequent"]["source_text"])
        alternative = _collapse(params["alternative"]["source_text"])
        return f"BRANCH {consequent} {alternative}"
    return "POP"


def _derive_stack(items: list, render) -> str:
    if not items:
        return "ε"
    return ":".join(render(item) for item in items) + ":ε"


def _derive_value(descriptor: dict) -> str:
    kind = descriptor["kind"]
    if kind == "primitive":
        return descriptor["name"]
    if kind == "closure":
        params = " ".join(descriptor["params"])
        return f"CLO ({params}) {_collapse(descriptor['body_text'])} E{descriptor['env_ref']}"
    if kind == "continuation":
        control = _embedded_stack(descriptor["control"], _derive_control_item)
        stash = _embedded_stack(descriptor["stash"], _derive_value)
        return f"CONT {control} {stash} E{descriptor['env_ref']}"
    return descriptor["repr"]


def _embedded_stack(items: list, render) -> str:
    if not items:
        return "ε"
    return "(" + ":".join(render(item) for item in items) + ":ε)"


def derivation_lines(document: dict) -> list[str]:
    """One line per state, paper-style: (control, stash, env)."""
    lines = []
    for snap in document["states"]:
        control = _derive_stack(snap["control"], _derive_control_item)
        stash = _derive_stack(snap["stash"], _derive_value)
        line = f"({control}, {stash}, E{snap['current_env']})"
        if snap["step_number"] > 0:
            line = "↓ " + line
        lines.append(line)
    return lines


def frame_table_lines(document: dict) -> list[str]:
    if not document["states"]:
        return []
    lines = ["where:"]
    for frame in document["states"][-1]["frames"]:
        if frame["parent"] is None:
            lines.append(f"  E{frame['id']} = global environment "
                         f"({len(frame['bindings'])} bindings)")
        else:
            bindings = ", ".join(f"{name} = {_derive_value(v)}"
                                 for name, v in frame["bindings"].items())
            lines.append(f"  E{frame['id']} = E{frame['parent']}[{bindings}]")
    return lines


def cmd_derive(args) -> int:
    try:
        document = _record_document(args)
    except ReadError as error:
        print(str(error), file=sys.stderr)
        return EXIT_PARSE
    for line in derivation_lines(document):
        print(line)
    print()
    for line in frame_table_lines(document):
        print(line)
    outcome = document["outcome"]
    if outcome["kind"] != "value":
        print(outcome["repr"], file=sys.stderr)
    return _OUTCOME_EXIT[outcome["kind"]]


### trace server

class TraceHandler(BaseHTTPRequestHandler):
    def do_GET(self):
        if self.path == "/trace":
            self._respond(200, "application/json", self.server.trace_bytes)
        elif self.path == "/health":
            self._respond(200, "text/plain", b"ok")
        else:
            self._respond(404, "text/plain", b"not found")

    def _respond(self, status, content_type, body):
        self.send_response(status)
        self.send_header("Content-Type", f"{content_type}; charset=utf-8")
        self.send_header("Content-Length", str(len(body)))
        self.send_header("Access-Control-Allow-Origin", "*")
        self.end_headers()
        self.wfile.write(body)

    def log_message(self, format, *log_args):
        pass


def make_server(document: dict, port: int) -> ThreadingHTTPServer:
    """Build (but do not start) the HTTP server for a recorded trace."""
    server = ThreadingHTTPServer(("127.0.0.1", port), TraceHandler)
    server.trace_bytes = trace_mod.serialize(document).encode("utf-8")
    return server


def cmd_serve(args) -> int:
    if not 1 <= args.port <= 65535:
        print(f"invalid port {args.port}", file=sys.stderr)
        return EXIT_USAGE
    try:
        document = _record_document(args)
    except ReadError as error:
        print(str(error), file=sys.stderr)
        return EXIT_PARSE
    try:
        server = make_server(document, args.port)
    except OSError as error:
        print(f"cannot bind port {args.port}: {error}", file=sys.stderr)
        return EXIT_RUNTIME
    print(f"serving trace of {args.input} on http://127.0.0.1:{args.port}/trace",
          file=sys.stderr)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exit_:
        return exit_.code if isinstance(exit_.code, int) else EXIT_USAGE
    if args.step_limit < 1:
        print("--step-limit must be >= 1", file=sys.stderr)
        return EXIT_USAGE
    try:
        handler = {"run": cmd_run, "trace": cmd_trace,
                   "derive": cmd_derive, "serve": cmd_serve}[args.command]
        return handler(args)
    except OSError as error:
        print(str(error), file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
