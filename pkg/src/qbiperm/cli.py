"""Command-line surface.

Commands: eval, compare, dilate, normalform, components, distance, lift,
selftest, report.  All outputs are JSON on stdout; errors are JSON on
stderr with a machine-readable "kind".  Exit codes: 0 success, 1 domain
error, 2 usage or parse error.

The default comparison tolerance is 1e-9; it can be overridden by the
QBIPERM_TOL environment variable, which is itself overridden by an
explicit --tol flag.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import algebra as al
from . import circuits as cc
from . import completion as co
from . import linalg as la
from . import normalform as nf
from . import selftest as st
from . import topology as tp
from .errors import QbipermError, UsageError

DEFAULT_TOL = 1e-9


def default_tol(flag_value: float | None) -> float:
    if flag_value is not None:
        return float(flag_value)
    env = os.environ.get("QBIPERM_TOL")
    if env is not None:
        try:
            return float(env)
        except ValueError:
            raise UsageError(f"QBIPERM_TOL is not a number: {env!r}")
    return DEFAULT_TOL


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _load_value(path: str):
    """Load a .qc circuit (evaluated) or a .json matrix/channel value."""
    p = Path(path)
    if not p.exists():
        raise UsageError(f"no such file: {path}")
    if p.suffix == ".qc":
        ast = cc.parse(p.read_text())
        cc.typecheck(ast)
        return cc.evaluate(ast)
    if p.suffix == ".json":
        data = json.loads(p.read_text())
        if "blocks" in data:
            return al.channel_from_json(data)
        if "data" in data:
            return la.matrix_from_json(data)
        raise UsageError(f"unrecognized JSON payload in {path}")
    raise UsageError(f"unrecognized input extension: {path} (expected .qc or .json)")


def _as_channel(value) -> al.Channel:
    if isinstance(value, al.Channel):
        return value
    return al.embed_E(value)


def _encode_value(value) -> dict:
    if isinstance(value, al.Channel):
        return al.channel_to_json(value)
    return la.matrix_to_json(value)


def _emit(payload: dict, out: str | None = None) -> None:
    text = json.dumps(payload)
    print(text)
    if out:
        Path(out).write_text(text + "\n")


def _parse_dims(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(",") if x != "")
    except ValueError:
        raise UsageError(f"expected a comma-separated dimension list, got {text!r}")


def _cmd_eval(args) -> int:
    value = _load_value(args.file)
    _emit(_encode_value(value), args.out)
    return 0


def _cmd_compare(args) -> int:
    tol = default_tol(args.tol)
    a = _as_channel(_load_value(args.a))
    b = _as_channel(_load_value(args.b))
    equal, dist = nf.channel_equal(a, b, tol=tol)
    _emit({"equal": bool(equal), "distance": float(dist)})
    return 0


def _cmd_distance(args) -> int:
    a = _as_channel(_load_value(args.a))
    b = _as_channel(_load_value(args.b))
    _emit({"distance": float(tp.distance(a, b))})
    return 0


def _normal_forms(channel: al.Channel, picture: str | None):
    if picture is not None and picture != channel.picture:
        channel = al.dualize(channel)
    forms = nf.stinespring_components(channel)
    return channel, forms


def _cmd_dilate(args, picture: str | None = None) -> int:
    channel = _as_channel(_load_value(args.file))
    channel, forms = _normal_forms(channel, picture or args.picture)
    if len(forms) == 1:
        _emit(nf.normal_form_to_json(forms[0]), args.out)
    else:
        _emit(
            {
                "picture": channel.picture,
                "components": [nf.normal_form_to_json(f) for f in forms],
            },
            args.out,
        )
    return 0


def _cmd_components(args) -> int:
    dom = _parse_dims(args.dom)
    cod = _parse_dims(args.cod)
    if len(cod) != 1:
        raise UsageError("--cod must be a single block dimension")
    infos = tp.component_atlas(dom, cod[0])
    _emit(
        {
            "dom": list(dom),
            "cod": cod[0],
            "count": len(infos),
            "components": [tp.component_info_to_json(i) for i in infos],
        }
    )
    return 0


def _cmd_lift(args) -> int:
    functor = co.builtin_target(args.target)
    value = _load_value(args.input)
    if isinstance(value, al.Channel):
        if value.picture == al.HEISENBERG:
            lifted = co.lift_starhom(functor, value)
        else:
            lifted = co.lift_channel(functor, value)
    else:
        if isinstance(functor.target, co.IsometryTarget):
            lifted = co.lift_isometry(functor, value)
        else:
            lifted = co.lift_channel(functor, al.embed_E(value))
    _emit(functor.target.encode(lifted))
    return 0


def _cmd_selftest(args) -> int:
    report = st.run_all(seed=args.seed)
    _emit(report)
    return 0 if report["passed"] else 1


def _cmd_report(args) -> int:
    from . import report as rp

    manifest = rp.render_all(args.out_dir, seed=args.seed, samples=args.samples)
    _emit(manifest)
    return 0


def build_parser() -> _Parser:
    parser = _Parser(prog="qbiperm", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="evaluate a circuit or echo a JSON value")
    p.add_argument("file")
    p.add_argument("--out", default=None)
    p.set_defaults(fn=_cmd_eval)

    p = sub.add_parser("compare", help="semantic channel equality")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--tol", type=float, default=None)
    p.set_defaults(fn=_cmd_compare)

    p = sub.add_parser("distance", help="transfer-norm distance")
    p.add_argument("a")
    p.add_argument("b")
    p.set_defaults(fn=_cmd_distance)

    p = sub.add_parser("dilate", help="Stinespring normal form(s) of a channel")
    p.add_argument("file")
    p.add_argument("--picture", choices=[al.SCHRODINGER, al.HEISENBERG], default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(fn=_cmd_dilate)

    p = sub.add_parser("normalform", help="normal form with picture control")
    p.add_argument("file")
    p.add_argument("--picture", choices=[al.SCHRODINGER, al.HEISENBERG], default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(fn=_cmd_dilate)

    p = sub.add_parser("components", help="component atlas of a homomorphism space")
    p.add_argument("--dom", required=True)
    p.add_argument("--cod", required=True)
    p.set_defaults(fn=_cmd_components)

    p = sub.add_parser("lift", help="lift a morphism into a named target")
    p.add_argument("input")
    p.add_argument("--target", default="cptp")
    p.set_defaults(fn=_cmd_lift)

    p = sub.add_parser("selftest", help="run the sampled law suites")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(fn=_cmd_selftest)

    p = sub.add_parser("report", help="render figures and delimited data")
    p.add_argument("--out-dir", default="reports")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, default=200)
    p.set_defaults(fn=_cmd_report)

    return parser


def run(argv) -> int:
    """Dispatch a command line; returns the exit code."""
    try:
        args = build_parser().parse_args(argv)
        return args.fn(args)
    except QbipermError as exc:
        payload = {"kind": exc.kind, "message": str(exc)}
        print(json.dumps(payload), file=sys.stderr)
        return exc.exit_code
    except json.JSONDecodeError as exc:
        print(json.dumps({"kind": "syntax-error", "message": str(exc)}), file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
