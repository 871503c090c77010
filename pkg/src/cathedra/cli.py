"""The ``cathedra`` command line.

Exit status: 0 when every requested task is ok, 1 on usage errors and
unreadable files, 2 when a document fails validation, 3 when a task ran
but came back not-found or error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .caps import default_caps
from .catlang import Atom, TaskSpec, Workspace, load
from .errors import CathedraError, UsageError
from .tasks import SHAPE_WORDS, corpus_workspace, report_json, run_task, run_tasks

EXIT_OK, EXIT_USAGE, EXIT_INVALID, EXIT_TASK = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _located_message(exc: CathedraError, filename: str | None) -> str:
    span = getattr(exc, "span", None)
    message = exc.args[0] if exc.args else type(exc).__name__
    where = filename or "<input>"
    if span is not None:
        return f"{where}:{span.line}:{span.col}: {message}"
    return f"{where}: {message}"


def _caps(ns):
    return default_caps().with_overrides(
        max_objects=ns.max_objects, max_morphisms=ns.max_morphisms, max_enum=ns.max_enum)


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"{path}: {exc.strerror or exc}") from None


def _workspace(ns, caps) -> Workspace:
    """The --file document on top of the shipped corpus, or the corpus alone."""
    env = corpus_workspace(caps)
    if getattr(ns, "file", None):
        return load(_read(ns.file), caps, env=env)
    return env


def _summary_line(entry: dict) -> str:
    w = entry["witness"]
    if entry["status"] == "ok":
        body = json.dumps(w, ensure_ascii=False, sort_keys=False)
    elif entry["status"] == "not-found":
        body = w.get("reason", "")
    else:
        body = f"{w.get('error', 'error')}: {w.get('message', '')}"
    return f"{entry['id']:<16} {entry['status']:<9} {body}"


def _emit(report: dict, ns) -> int:
    text = report_json(report) if ns.json else "".join(_summary_line(t) + "\n" for t in report["tasks"])
    if getattr(ns, "output", None):
        Path(ns.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_OK if all(t["status"] == "ok" for t in report["tasks"]) else EXIT_TASK


def _single(ns, kind: str, args: list[str]) -> int:
    caps = _caps(ns)
    ws = _workspace(ns, caps)
    spec = TaskSpec(f"{kind}#1", kind, [Atom(a) for a in args])
    entry = run_task(ws, spec, caps, timing=not ns.no_timing)
    return _emit({"schema": "1", "caps": caps.as_dict(), "tasks": [entry]}, ns)


# subcommand bodies


def _cmd_check(ns) -> int:
    ws = load(_read(ns.file), _caps(ns))
    counts = ", ".join(f"{len(getattr(ws, t))} {t}" for t in ("categories", "functors", "nats", "presheaves"))
    print(f"{ns.file}: ok ({counts}, {len(ws.tasks)} tasks)")
    return EXIT_OK


def _cmd_task(ns) -> int:
    caps = _caps(ns)
    ws = load(_read(ns.file), caps)
    return _emit(run_tasks(ws, caps, threads=ns.threads, timing=not ns.no_timing), ns)


def _cmd_report(ns) -> int:
    ns.json = True
    return _cmd_task(ns)


def _cmd_limit(ns, kind="limit") -> int:
    if ns.of:
        args = ["of", ns.of]
        if ns.within:
            args += ["in", ns.within]
    else:
        if not ns.shape or not ns.within:
            raise UsageError(f"{kind} needs --shape and --in, or --of")
        args = [ns.shape, *ns.args, "in", ns.within]
    return _single(ns, kind, args)


def _cmd_adjoint(ns) -> int:
    return _single(ns, "left-adjoint", ["of", ns.name, "via", ns.via])


def _simple(kind):
    return lambda ns: _single(ns, kind, [ns.name])


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--max-objects", type=int)
    common.add_argument("--max-morphisms", type=int)
    common.add_argument("--max-enum", type=int)
    common.add_argument("--json", action="store_true", help="print the JSON report")
    common.add_argument("--no-timing", action="store_true", help="report millis as 0")
    common.add_argument("-o", "--output", help="write the report here instead of stdout")

    with_file = _Parser(add_help=False)
    with_file.add_argument("--file", help="catlang document layered over the shipped corpus")

    p = _Parser(prog="cathedra", description="Finite category computations from catlang documents.")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    c = sub.add_parser("check", parents=[common], help="validate every declaration in FILE")
    c.add_argument("file")
    c.set_defaults(func=_cmd_check)

    for name, func, text in (("task", _cmd_task, "run every task in FILE"),
                             ("report", _cmd_report, "run every task in FILE and print JSON")):
        t = sub.add_parser(name, parents=[common], help=text)
        t.add_argument("file")
        t.add_argument("--threads", type=int, default=1)
        t.set_defaults(func=func)

    for kind in ("limit", "colimit"):
        q = sub.add_parser(kind, parents=[common, with_file], help=f"compute a {kind}")
        q.add_argument("--shape", choices=sorted(SHAPE_WORDS))
        q.add_argument("--in", dest="within", metavar="CATEGORY")
        q.add_argument("--of", metavar="DIAGRAM", help="a declared diagram functor")
        q.add_argument("args", nargs="*", help="objects or arrows of the diagram")
        q.set_defaults(func=lambda ns, k=kind: _cmd_limit(ns, k))

    a = sub.add_parser("adjoint", parents=[common, with_file], help="left adjoint of a functor")
    a.add_argument("name")
    a.add_argument("--via", choices=("comma", "oaft", "gaft"), default="comma")
    a.set_defaults(func=_cmd_adjoint)

    for name, kind, what in (("yoneda", "yoneda-check", "presheaf"),
                             ("density", "density", "presheaf"),
                             ("classifier", "classifier", "category")):
        s = sub.add_parser(name, parents=[common, with_file], help=f"{kind} task on a {what}")
        s.add_argument("name", metavar=what.upper())
        s.set_defaults(func=_simple(kind))
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    filename = None  # set once parsing succeeds, for located messages
    try:
        ns = parser.parse_args(argv)
        if ns.command is None:
            raise UsageError("a subcommand is required")
        filename = getattr(ns, "file", None)
        return ns.func(ns)
    except UsageError as exc:
        print(f"cathedra: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CathedraError as exc:
        print(_located_message(exc, filename), file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
