"""Command line front end.

Thin client over the service handlers: flags are parsed here, files are
read here, and everything else happens in service.py so the HTTP endpoints
and the CLI emit identical payloads. One CommandResult JSON line goes to
stdout; anything human-readable goes to stderr. Exit code 0 for ok, 1 for
domain errors (error name in the payload), 2 for usage and parse errors.

GERMKIT_THREADS is validated (positive integer) but execution is serial;
all operations are deterministic either way.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .disk import MobiusDisk
from .errors import GermkitError, GridFormatError, InputFormatError
from .grid import GridField
from .jsonio import load_series
from .monomial import Monomial, UnitScale
from .service import (
    classify_pair_payload,
    error_result,
    find_hyperbolic_payload,
    intersect_payload,
    levin_payload,
    normal_form_payload,
    ok_result,
    orbit_payload,
    parse_unit_scale,
    pingpong_payload,
    poly_from_pairs,
    relations_payload,
    render,
    ruelle_push_payload,
    shared_iter_payload,
    transport_payload,
    unit_root_samples,
    version_payload,
    _resize,
)


# flags whose values may start with a minus sign; argparse would otherwise
# read "-2,-2,2,2" as an option, so such pairs are merged into --flag=value
_NUMERIC_FLAGS = {
    "--bounds", "--z0", "--c1", "--c2", "--a1", "--b1", "--a2", "--b2",
    "--poly", "--f-poly", "--g-poly", "--theta1", "--theta2", "--g-scale",
}


def _merge_negative_args(argv: list) -> list:
    out = []
    i = 0
    while i < len(argv):
        arg = argv[i]
        nxt = argv[i + 1] if i + 1 < len(argv) else None
        if arg in _NUMERIC_FLAGS and nxt is not None and len(nxt) > 1 and nxt[0] == "-" and nxt[1] in "0123456789.":
            out.append(f"{arg}={nxt}")
            i += 2
        else:
            out.append(arg)
            i += 1
    return out


def _complex_arg(text: str) -> complex:
    parts = text.split(",")
    if len(parts) == 1:
        return complex(float(parts[0]), 0.0)
    if len(parts) == 2:
        return complex(float(parts[0]), float(parts[1]))
    raise ValueError(f"expected RE or RE,IM, got {text!r}")


def _poly_arg(text: str):
    values = [float(p) for p in text.split(",")]
    return poly_from_pairs([[v, 0.0] for v in values])


def _bounds_arg(text: str) -> list:
    values = [float(p) for p in text.split(",")]
    if len(values) != 4:
        raise ValueError(f"expected xmin,ymin,xmax,ymax, got {text!r}")
    return values


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="germkit", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("version", help="toolkit version")

    p = sub.add_parser("normal-form", help="linearizing, power, or parabolic normal form of a series")
    p.add_argument("--input", required=True, help="series JSON path")
    p.add_argument("--order", type=int, default=None, help="re-truncate or pad the input to this order")
    p.add_argument("--root-order", type=int, default=None, help="multiplier root order hint (approximate mode)")

    p = sub.add_parser("classify-pair", help="relation search for the pair z^m, (scale)z^k")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--g-scale", required=True, help="p/q for exp(2 pi i p/q); bare integer for infinite order")
    p.add_argument("--bound", type=int, default=10)

    p = sub.add_parser("relations", help="first coincidence among substitution words of two series")
    p.add_argument("--f", required=True, help="series JSON path")
    p.add_argument("--g", required=True, help="series JSON path")
    p.add_argument("--max-len", type=int, default=8)

    p = sub.add_parser("shared-iter", help="search for f^m = g^n")
    p.add_argument("--f", required=True)
    p.add_argument("--g", required=True)
    p.add_argument("--max-m", type=int, default=6)
    p.add_argument("--max-n", type=int, default=6)

    p = sub.add_parser("levin", help="check f^k g^l = f^(2k) and g^l f^k = g^(2l)")
    p.add_argument("--f", required=True)
    p.add_argument("--g", required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--l", type=int, required=True)

    disk = sub.add_parser("disk", help="hyperbolic disk isometries").add_subparsers(
        dest="disk_command", required=True
    )
    p = disk.add_parser("find-hyperbolic", help="first hyperbolic word in two rotations")
    p.add_argument("--c1", type=_complex_arg, required=True, help="first rotation center RE,IM")
    p.add_argument("--theta1", type=float, required=True)
    p.add_argument("--c2", type=_complex_arg, required=True)
    p.add_argument("--theta2", type=float, required=True)
    p.add_argument("--max-len", type=int, default=8)
    p = disk.add_parser("pingpong", help="freeness certificate for two hyperbolic isometries")
    p.add_argument("--a1", type=_complex_arg, required=True, help="first generator a RE,IM")
    p.add_argument("--b1", type=_complex_arg, required=True)
    p.add_argument("--a2", type=_complex_arg, required=True)
    p.add_argument("--b2", type=_complex_arg, required=True)
    p.add_argument("--samples", type=int, default=256)

    p = sub.add_parser("orbit", help="forward orbit with escape flag")
    p.add_argument("--poly", type=_poly_arg, required=True, help="real coefficients, highest degree first")
    p.add_argument("--z0", type=_complex_arg, required=True)
    p.add_argument("--n", type=int, required=True)

    p = sub.add_parser("intersect", help="orbit intersection of two maps")
    p.add_argument("--f-poly", type=_poly_arg, required=True)
    p.add_argument("--g-poly", type=_poly_arg, required=True)
    p.add_argument("--z0", type=_complex_arg, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--tol", type=float, default=1e-9)

    ruelle = sub.add_parser("ruelle", help="transfer operator on grid fields").add_subparsers(
        dest="ruelle_command", required=True
    )
    p = ruelle.add_parser("push", help="pushforward of a grid field")
    p.add_argument("--poly", type=_poly_arg, required=True)
    p.add_argument("--phi", required=True, help="input GridField binary path")
    p.add_argument("--grid", type=int, default=None, help="expected resolution (validated)")
    p.add_argument("--bounds", type=_bounds_arg, default=None, help="expected bounds (validated)")
    p.add_argument("--out", default=None, help="write the pushforward GridField here")

    p = sub.add_parser("transport-check", help="Levin identities plus preperiodic transport")
    p.add_argument("--f-poly", type=_poly_arg, required=True)
    p.add_argument("--g-poly", type=_poly_arg, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--samples", default=None, help="JSON path with [[re,im], ...] sample points")
    p.add_argument("--unit-roots", type=int, default=None, help="use the m-th roots of unity as samples")
    p.add_argument("--max-iter", type=int, default=256)
    p.add_argument("--tol", type=float, default=1e-9)

    return parser


def _load_samples(path) -> list:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise InputFormatError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputFormatError(f"{path} is not valid JSON: {exc}") from exc
    if not isinstance(data, list):
        raise InputFormatError("samples file must hold a JSON list of [re, im] pairs")
    out = []
    for entry in data:
        if not isinstance(entry, list) or len(entry) != 2:
            raise InputFormatError(f"bad sample {entry!r}")
        out.append(complex(entry[0], entry[1]))
    return out


def _dispatch(args) -> dict:
    cmd = args.command
    if cmd == "version":
        return version_payload()
    if cmd == "normal-form":
        series = _resize(load_series(args.input), args.order)
        return normal_form_payload(series, args.root_order)
    if cmd == "classify-pair":
        scale = parse_unit_scale(args.g_scale)
        f = Monomial(UnitScale(0, scale.base_order), args.m)
        return classify_pair_payload(f, Monomial(scale, args.k), args.bound)
    if cmd == "relations":
        return relations_payload(load_series(args.f), load_series(args.g), args.max_len)
    if cmd == "shared-iter":
        return shared_iter_payload(load_series(args.f), load_series(args.g), args.max_m, args.max_n)
    if cmd == "levin":
        return levin_payload(load_series(args.f), load_series(args.g), args.k, args.l)
    if cmd == "disk":
        if args.disk_command == "find-hyperbolic":
            return find_hyperbolic_payload(args.c1, args.theta1, args.c2, args.theta2, args.max_len)
        return pingpong_payload(MobiusDisk(args.a1, args.b1), MobiusDisk(args.a2, args.b2), args.samples)
    if cmd == "orbit":
        return orbit_payload(args.poly, args.z0, args.n)
    if cmd == "intersect":
        return intersect_payload(args.f_poly, args.g_poly, args.z0, args.n, args.tol)
    if cmd == "ruelle":
        phi = GridField.load(args.phi)
        payload, field = ruelle_push_payload(args.poly, phi, args.grid, args.bounds, out=args.out)
        if args.out is not None:
            field.save(args.out)
        return payload
    assert cmd == "transport-check"
    if (args.samples is None) == (args.unit_roots is None):
        raise InputFormatError("provide exactly one of --samples and --unit-roots")
    samples = _load_samples(args.samples) if args.samples is not None else unit_root_samples(args.unit_roots)
    return transport_payload(args.f_poly, args.g_poly, args.n, args.k, samples, args.max_iter, args.tol)


def _threads_error() -> str | None:
    raw = os.environ.get("GERMKIT_THREADS")
    if raw is None:
        return None
    try:
        value = int(raw)
    except ValueError:
        value = 0
    if value < 1:
        return f"GERMKIT_THREADS must be a positive integer, got {raw!r}"
    return None


def main(argv=None) -> int:
    problem = _threads_error()
    if problem is not None:
        print(f"germkit: error: {problem}", file=sys.stderr)
        return 2
    parser = build_parser()
    args = parser.parse_args(_merge_negative_args(list(sys.argv[1:] if argv is None else argv)))
    try:
        payload = _dispatch(args)
    except (InputFormatError, GridFormatError) as exc:
        print(f"germkit: error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"germkit: error: {exc}", file=sys.stderr)
        return 2
    except GermkitError as exc:
        print(render(error_result(exc)))
        return 1
    print(render(ok_result(payload)))
    return 0


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
