"""Operation handlers shared by the HTTP service and the CLI.

Each handler takes domain objects and returns a JSON-safe payload dict;
the FastAPI endpoints below adapt pydantic requests onto them and the CLI
binds them in-process, so both fronts serialize the exact same bytes.
Domain failures surface as GermkitError and map to an error CommandResult
(HTTP 422); malformed wire input maps to InputFormatError.
"""

from __future__ import annotations

import base64
import math

from fastapi import FastAPI, Response

from . import __version__
from .disk import (
    MobiusDisk,
    PingPongCertificate,
    find_hyperbolic_word,
    ping_pong_certificate,
    rotation_about,
    translation_length,
)
from .dynamics import PolynomialMap, orbit, orbit_intersection, semiconjugacy_transport_check
from .errors import GermkitError, InputFormatError
from .grid import GridField
from .jsonio import dumps_deterministic, jsonable, series_from_json, series_to_json
from .monomial import (
    ExactRelation,
    FreeAbelianWitness,
    LevinPair,
    Monomial,
    UnitScale,
    classify_pair,
)
from .monomial import FreeUpTo as MonoFreeUpTo
from .normal_forms import normal_form
from .relations import FreeUpTo, OrderNRelation, find_relations, levin_certificate, shared_iteration
from .ruelle import ruelle_pushforward
from .schemas import (
    ClassifyPairRequest,
    CommandResult,
    FindHyperbolicRequest,
    IntersectRequest,
    LevinRequest,
    NormalFormRequest,
    OrbitRequest,
    PingPongRequest,
    RelationsRequest,
    RuellePushRequest,
    SharedIterRequest,
    TransportRequest,
)

# -- result plumbing ---------------------------------------------------------


def ok_result(payload: dict, diagnostics=()) -> CommandResult:
    return CommandResult(status="ok", payload=payload, diagnostics=list(diagnostics), version=__version__)


def error_result(exc: GermkitError) -> CommandResult:
    payload = {"error": type(exc).__name__, "code": exc.code, "message": str(exc)}
    return CommandResult(status="error", payload=payload, diagnostics=[], version=__version__)


def render(result: CommandResult) -> str:
    return dumps_deterministic(result.model_dump())


# -- wire parsing shared with the CLI ----------------------------------------


def parse_unit_scale(text: str) -> UnitScale:
    """"p/q" is the finite-order scale exp(2*pi*i*p/q); a bare integer k is
    the k-th power of the generic infinite-order scale."""
    text = text.strip()
    try:
        if "/" in text:
            p, q = text.split("/", 1)
            return UnitScale(int(p), int(q))
        return UnitScale(int(text), None)
    except ValueError as exc:
        raise InputFormatError(f"bad unit scale {text!r}: expected p/q or an integer") from exc


def poly_from_pairs(pairs) -> PolynomialMap:
    """Coefficient pairs [re, im], highest degree first (CLI flag order)."""
    if not isinstance(pairs, (list, tuple)) or not pairs:
        raise InputFormatError("polynomial needs at least one coefficient")
    coeffs = []
    for entry in pairs:
        if not isinstance(entry, (list, tuple)) or len(entry) != 2:
            raise InputFormatError(f"bad polynomial coefficient {entry!r}")
        coeffs.append(complex(entry[0], entry[1]))
    return PolynomialMap(tuple(reversed(coeffs)))


def _resize(series, order: int | None):
    if order is None or order == series.order:
        return series
    if order > series.order:
        return series.pad_to(order)
    return series.truncate(order)


def _pair(z: complex) -> list:
    return [z.real, z.imag]


# -- payload builders ---------------------------------------------------------


def version_payload() -> dict:
    return {"version": __version__}


def normal_form_payload(series, root_order: int | None = None) -> dict:
    res = normal_form(series, root_order)
    return {
        "kind": res.kind,
        "verified_order": res.verified_order,
        "conjugator": series_to_json(res.conjugator),
        "normal_form": series_to_json(res.normal_form),
        "parameters": jsonable(res.parameters),
    }


def _mono_doc(m: Monomial) -> dict:
    return {"exponent": m.scale.exponent, "base_order": m.scale.base_order, "degree": m.degree}


def classify_pair_payload(f: Monomial, g: Monomial, bound: int) -> dict:
    verdict = classify_pair(f, g, bound)
    if isinstance(verdict, LevinPair):
        return {"type": "levin", "k": verdict.k, "l": verdict.l,
                "f_side": _mono_doc(verdict.f_side), "g_side": _mono_doc(verdict.g_side)}
    if isinstance(verdict, ExactRelation):
        return {"type": "exact_relation", "w1": verdict.w1, "w2": verdict.w2,
                "value": _mono_doc(verdict.value)}
    if isinstance(verdict, FreeAbelianWitness):
        return {"type": "free_abelian", "search_bound": verdict.search_bound,
                "product": _mono_doc(verdict.product)}
    assert isinstance(verdict, MonoFreeUpTo)
    return {"type": "free_up_to", "max_len": verdict.max_len}


def relations_payload(f, g, max_len: int) -> dict:
    cert = find_relations(f, g, max_len)
    if isinstance(cert, OrderNRelation):
        return {"type": "relation", "w1": cert.w1, "w2": cert.w2, "order": cert.order,
                "lhs": series_to_json(cert.lhs), "rhs": series_to_json(cert.rhs)}
    assert isinstance(cert, FreeUpTo)
    return {"type": "free_up_to", "max_len": cert.max_len, "order": cert.order}


def shared_iter_payload(f, g, max_m: int, max_n: int) -> dict:
    found = shared_iteration(f, g, max_m, max_n)
    if found is None:
        return {"found": False, "max_m": max_m, "max_n": max_n}
    return {"found": True, "m": found.m, "n": found.n, "order": found.order,
            "value": series_to_json(found.lhs)}


def levin_payload(f, g, k: int, l: int) -> dict:
    cert = levin_certificate(f, g, k, l)
    if cert is None:
        return {"holds": False, "k": k, "l": l, "order": f.order}
    return {"holds": True, "k": cert.k, "l": cert.l, "order": cert.order}


def find_hyperbolic_payload(c1: complex, theta1: float, c2: complex, theta2: float, max_len: int) -> dict:
    gamma = rotation_about(c1, theta1)
    tau = rotation_about(c2, theta2)
    hit = find_hyperbolic_word(gamma, tau, max_len)
    if hit is None:
        return {"found": False, "max_len": max_len}
    word, m = hit
    return {"found": True, "word": word, "a": _pair(m.a), "b": _pair(m.b),
            "trace_abs": m.trace_abs(), "translation_length": translation_length(m)}


def _disk_doc(d) -> dict:
    return {"center": _pair(d.center), "radius": d.radius}


def pingpong_payload(h: MobiusDisk, g: MobiusDisk, samples: int) -> dict:
    res = ping_pong_certificate(h, g, samples)
    if isinstance(res, PingPongCertificate):
        return {"type": "certificate", "margin": res.margin, "samples": res.samples,
                "disks": {"h_plus": _disk_doc(res.u_h_plus), "h_minus": _disk_doc(res.u_h_minus),
                          "g_plus": _disk_doc(res.u_g_plus), "g_minus": _disk_doc(res.u_g_minus)}}
    return {"type": "failure", "reason": res.reason, "samples": res.samples}


def orbit_payload(f: PolynomialMap, z0: complex, n: int) -> dict:
    res = orbit(f, z0, n)
    return {"points": [_pair(z) for z in res.points], "escaped": res.escaped,
            "escape_index": res.escape_index}


def intersect_payload(f: PolynomialMap, g: PolynomialMap, z0: complex, n: int, tol: float) -> dict:
    matches = orbit_intersection(f, g, z0, n, tol)
    return {"matches": [_pair(z) for z in matches], "count": len(matches)}


def ruelle_push_payload(
    f: PolynomialMap,
    phi: GridField,
    grid: int | None = None,
    bounds=None,
    out: str | None = None,
    include_field: bool = False,
) -> tuple[dict, GridField]:
    if grid is not None and (phi.nx != grid or phi.ny != grid):
        raise InputFormatError(f"--grid {grid} does not match the loaded field {phi.nx}x{phi.ny}")
    if bounds is not None and any(not math.isclose(a, b, abs_tol=1e-12) for a, b in zip(bounds, phi.bounds)):
        raise InputFormatError(f"--bounds {bounds} do not match the loaded field {phi.bounds}")
    push = ruelle_pushforward(f, phi)
    payload = {
        "bounds": list(push.field.bounds),
        "nx": push.field.nx,
        "ny": push.field.ny,
        "l1_norm": push.field.l1_norm(),
        "sup_norm": push.field.sup_norm(),
        "critical_excluded": push.critical_excluded,
        "out": out,
    }
    if include_field:
        payload["field_b64"] = base64.b64encode(push.field.to_bytes()).decode("ascii")
    return payload, push.field


def transport_payload(
    f: PolynomialMap, g: PolynomialMap, n: int, k: int, samples, max_iter: int, tol: float
) -> dict:
    report = semiconjugacy_transport_check(f, g, n, k, samples, max_iter, tol)
    return {
        "identity_residual": report.identity_residual,
        "checked": report.checked,
        "transported": report.transported,
        "skipped": report.skipped,
        "counterexamples": [_pair(z) for z in report.counterexamples],
    }


def unit_root_samples(m: int) -> list:
    return [complex(math.cos(2 * math.pi * t / m), math.sin(2 * math.pi * t / m)) for t in range(m)]


# -- HTTP front ----------------------------------------------------------------

app = FastAPI(title="germkit", version=__version__)


def _respond(result: CommandResult, status_code: int = 200) -> Response:
    return Response(content=render(result) + "\n", media_type="application/json", status_code=status_code)


def _run(build) -> Response:
    try:
        return _respond(ok_result(build()))
    except GermkitError as exc:
        return _respond(error_result(exc), status_code=422)


@app.post("/v1/version")
def ep_version() -> Response:
    return _run(version_payload)


@app.post("/v1/normal-form")
def ep_normal_form(req: NormalFormRequest) -> Response:
    def build():
        series = _resize(series_from_json(req.series.model_dump()), req.order)
        return normal_form_payload(series, req.root_order)

    return _run(build)


@app.post("/v1/classify-pair")
def ep_classify_pair(req: ClassifyPairRequest) -> Response:
    def build():
        scale = parse_unit_scale(req.g_scale)
        # f carries the trivial scale over the same base so the pair shares it
        f = Monomial(UnitScale(0, scale.base_order), req.m)
        return classify_pair_payload(f, Monomial(scale, req.k), req.bound)

    return _run(build)


@app.post("/v1/relations")
def ep_relations(req: RelationsRequest) -> Response:
    def build():
        f = series_from_json(req.f.model_dump())
        g = series_from_json(req.g.model_dump())
        return relations_payload(f, g, req.max_len)

    return _run(build)


@app.post("/v1/shared-iter")
def ep_shared_iter(req: SharedIterRequest) -> Response:
    def build():
        f = series_from_json(req.f.model_dump())
        g = series_from_json(req.g.model_dump())
        return shared_iter_payload(f, g, req.max_m, req.max_n)

    return _run(build)


@app.post("/v1/levin")
def ep_levin(req: LevinRequest) -> Response:
    def build():
        f = series_from_json(req.f.model_dump())
        g = series_from_json(req.g.model_dump())
        return levin_payload(f, g, req.k, req.l)

    return _run(build)


@app.post("/v1/disk/find-hyperbolic")
def ep_find_hyperbolic(req: FindHyperbolicRequest) -> Response:
    def build():
        return find_hyperbolic_payload(
            complex(*req.c1), req.theta1, complex(*req.c2), req.theta2, req.max_len
        )

    return _run(build)


@app.post("/v1/disk/pingpong")
def ep_pingpong(req: PingPongRequest) -> Response:
    def build():
        h = MobiusDisk(complex(*req.a1), complex(*req.b1))
        g = MobiusDisk(complex(*req.a2), complex(*req.b2))
        return pingpong_payload(h, g, req.samples)

    return _run(build)


@app.post("/v1/orbit")
def ep_orbit(req: OrbitRequest) -> Response:
    def build():
        return orbit_payload(poly_from_pairs(req.poly), complex(*req.z0), req.n)

    return _run(build)


@app.post("/v1/intersect")
def ep_intersect(req: IntersectRequest) -> Response:
    def build():
        return intersect_payload(
            poly_from_pairs(req.f_poly), poly_from_pairs(req.g_poly), complex(*req.z0), req.n, req.tol
        )

    return _run(build)


@app.post("/v1/ruelle/push")
def ep_ruelle_push(req: RuellePushRequest) -> Response:
    def build():
        try:
            blob = base64.b64decode(req.phi_b64, validate=True)
        except (ValueError, TypeError) as exc:
            raise InputFormatError(f"phi_b64 is not valid base64: {exc}") from exc
        phi = GridField.from_bytes(blob)
        payload, _ = ruelle_push_payload(
            poly_from_pairs(req.poly), phi, req.grid, req.bounds, include_field=True
        )
        return payload

    return _run(build)


@app.post("/v1/transport-check")
def ep_transport(req: TransportRequest) -> Response:
    def build():
        if (req.samples is None) == (req.unit_roots is None):
            raise InputFormatError("provide exactly one of samples or unit_roots")
        if req.samples is not None:
            samples = [complex(*pair) for pair in req.samples]
        else:
            samples = unit_root_samples(req.unit_roots)
        return transport_payload(
            poly_from_pairs(req.f_poly), poly_from_pairs(req.g_poly), req.n, req.k, samples, req.max_iter, req.tol
        )

    return _run(build)
