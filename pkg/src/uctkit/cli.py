"""Command line front end.

Each verb builds the same request model the HTTP service accepts and, by
default, runs the handler in-process; with ``--server URL`` it posts the
request to a running service instead and renders the response it gets
back.  Text output is a rendering of the JSON report; the JSON is the
contract and is byte-identical across runs with the same inputs and seed.

Exit codes: 0 success with all verdicts true, 1 some verdict false,
2 malformed input.
"""

from __future__ import annotations

import json
import pathlib
import sys

import click

from . import api, schemas
from .schemas import InputError
from .verify import SUITES as VERIFY_SUITES

DEFAULT_SEED = 17


def _fail_input(message: str):
    click.echo(f"input error: {message}", err=True)
    sys.exit(2)


def _load_json(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except FileNotFoundError:
        _fail_input(f"{path}: file not found")
    except json.JSONDecodeError as e:
        _fail_input(f"{path}: invalid JSON ({e})")


def _doc_kind(doc: dict) -> str:
    if "sub_facets" in doc:
        return "pair"
    if "facets" in doc:
        return "simplicial"
    if "orientation" in doc:
        return "complex"
    _fail_input("document: expected 'facets', 'sub_facets' or 'orientation' keys")


def _dispatch(server: str | None, endpoint: str, request_model, response_type):
    """Run locally or POST to a running service.

    ``response_type`` may be a model class or a callable picking one from
    the raw payload (for endpoints with more than one report shape).
    """
    if server is None:
        handler = getattr(api, "handle_" + endpoint.replace("-", "_"))
        return handler(request_model)
    import httpx
    url = server.rstrip("/") + "/" + endpoint
    resp = httpx.post(url, json=request_model.model_dump(mode="json"), timeout=600.0)
    if resp.status_code == 422:
        detail = resp.json().get("detail", "invalid input")
        raise InputError(str(detail))
    resp.raise_for_status()
    payload = resp.json()
    if not isinstance(response_type, type):
        response_type = response_type(payload)
    return response_type.model_validate(payload)


def _emit(resp, as_json: bool, text_lines) -> None:
    if as_json:
        click.echo(json.dumps(resp.model_dump(), sort_keys=True,
                              separators=(",", ":")))
    else:
        for line in text_lines(resp):
            click.echo(line)


def _exit_on_verdict(resp) -> None:
    ok = getattr(resp, "all_ok", True)
    sys.exit(0 if ok else 1)


@click.group()
def main():
    """Exact homology, cohomology and universal-coefficient reports."""


def _complex_request(path: str, coeff: str, degree: int) -> schemas.HomologyRequest:
    doc = _load_json(path)
    kind = _doc_kind(doc)
    if kind == "simplicial":
        return schemas.HomologyRequest(simplicial=schemas.SimplicialDoc(**doc),
                                       coeff=coeff, degree=degree)
    if kind == "complex":
        return schemas.HomologyRequest(complex=schemas.ComplexDoc(**doc),
                                       coeff=coeff, degree=degree)
    _fail_input(f"{path}: pair documents are not accepted here")


@main.command()
@click.option("--complex", "complex_path", required=True, type=str,
              help="simplicial or chain-complex JSON document")
@click.option("--coeff", default="Z", show_default=True)
@click.option("--degree", default=0, show_default=True, type=int)
@click.option("--json", "as_json", is_flag=True)
@click.option("--server", default=None, help="URL of a running service")
def homology(complex_path, coeff, degree, as_json, server):
    """H_n of the input with the given coefficients."""
    try:
        req = _complex_request(complex_path, coeff, degree)
        resp = _dispatch(server, "homology", req, schemas.HomologyResponse)
    except InputError as e:
        _fail_input(str(e))
    _emit(resp, as_json, lambda r: [f"H_{r.degree} = {r.group}"])
    _exit_on_verdict(resp)


@main.command()
@click.option("--complex", "complex_path", required=True, type=str)
@click.option("--coeff", default="Z", show_default=True)
@click.option("--degree", default=0, show_default=True, type=int)
@click.option("--json", "as_json", is_flag=True)
@click.option("--server", default=None)
def cohomology(complex_path, coeff, degree, as_json, server):
    """H^n of the input with the given coefficients."""
    try:
        req = _complex_request(complex_path, coeff, degree)
        resp = _dispatch(server, "cohomology", req, schemas.HomologyResponse)
    except InputError as e:
        _fail_input(str(e))
    _emit(resp, as_json, lambda r: [f"H^{r.degree} = {r.group}"])
    _exit_on_verdict(resp)


@main.command()
@click.option("--complex", "complex_path", required=True, type=str,
              help="free cochain complex or simplicial JSON document")
@click.option("--coeff", default="Z", show_default=True)
@click.option("--degree", default=0, show_default=True, type=int)
@click.option("--json", "as_json", is_flag=True)
@click.option("--server", default=None)
def uct(complex_path, coeff, degree, as_json, server):
    """The split short exact sequence Ext -> middle -> Hom with verdicts."""
    doc = _load_json(complex_path)
    kind = _doc_kind(doc)
    try:
        if kind == "simplicial":
            req = schemas.UctRequest(simplicial=schemas.SimplicialDoc(**doc),
                                     coeff=coeff, degree=degree)
        elif kind == "complex":
            req = schemas.UctRequest(complex=schemas.ComplexDoc(**doc),
                                     coeff=coeff, degree=degree)
        else:
            _fail_input(f"{complex_path}: pair documents are not accepted here")
        resp = _dispatch(server, "uct", req, schemas.UctResponse)
    except InputError as e:
        _fail_input(str(e))

    def lines(r):
        yield (f"0 -> Ext = {r.ext_part} -> middle = {r.middle} "
               f"-> Hom = {r.hom_part} -> 0")
        for k in sorted(r.verdicts):
            yield f"  {k}: {'ok' if r.verdicts[k] else 'FAIL'}"
        yield f"all verdicts: {'ok' if r.all_ok else 'FAIL'}"

    _emit(resp, as_json, lines)
    _exit_on_verdict(resp)


@main.command()
@click.option("--group", required=True, type=str, help="source group, e.g. Z/6")
@click.option("--coeff", default="Z", show_default=True)
@click.option("--cocycle-check", is_flag=True,
              help="cross-check Ext against the cocycle-space quotient (finite groups)")
@click.option("--json", "as_json", is_flag=True)
@click.option("--server", default=None)
def ext(group, coeff, cocycle_check, as_json, server):
    """Hom, Ext, tensor and Tor of two finitely generated groups."""
    try:
        req = schemas.ExtRequest(group=group, coeff=coeff, cocycle_check=cocycle_check)
        resp = _dispatch(server, "ext", req, schemas.ExtResponse)
    except InputError as e:
        _fail_input(str(e))

    def lines(r):
        yield f"Hom({r.group}, {r.coeff}) = {r.hom}"
        yield f"Ext({r.group}, {r.coeff}) = {r.ext}"
        yield f"Tensor = {r.tensor}; Tor = {r.tor}"
        yield f"pure part of Ext vanishes: {'yes' if r.pext_zero else 'NO'}"
        if r.cocycle_ext is not None:
            yield (f"cocycle-space quotient = {r.cocycle_ext} "
                   f"({'matches' if r.cocycle_matches else 'MISMATCH'})")

    _emit(resp, as_json, lines)
    _exit_on_verdict(resp)


@main.command("space-report")
@click.option("--tower", "tower_path", required=True, type=str)
@click.option("--coeff", default="Z", show_default=True)
@click.option("--degree", default=0, show_default=True, type=int)
@click.option("--depth", default=6, show_default=True, type=int)
@click.option("--json", "as_json", is_flag=True)
@click.option("--server", default=None)
def space_report(tower_path, coeff, degree, depth, as_json, server):
    """Limit-side universal-coefficient report for a tower of complexes."""
    doc = _load_json(tower_path)
    try:
        req = schemas.SpaceReportRequest(tower=schemas.TowerDoc(**doc),
                                         coeff=coeff, degree=degree, depth=depth)
        resp = _dispatch(server, "space-report", req,
                         lambda payload: schemas.PairSpaceReportResponse
                         if "stages" in payload else schemas.SpaceReportResponse)
    except InputError as e:
        _fail_input(str(e))

    def lines(r):
        yield f"degree {r.degree}, coefficients {r.coeff}"
        yield f"certified by stationary tail: {'yes' if r.certified else 'no (window only)'}"
        if isinstance(r, schemas.SpaceReportResponse):
            yield f"hom part: lim = {r.hom_part.lim} [{r.hom_part.status}]"
            yield (f"ext part: lim Ext = {r.ext_lim.lim} [{r.ext_lim.status}], "
                   f"lim1-Hom = {r.ext_lim1_hom}")
            yield f"weak part: lim = {r.weak_part.lim} [{r.weak_part.status}]"
            yield f"asymptotic flag: {r.asymptotic_flag}"
            yield f"stage UCT verdicts: {'ok' if all(r.stage_uct_ok) else 'FAIL'}"
        else:
            for i, s in enumerate(r.stages):
                yield (f"stage {i}: connecting {s.connecting_source} -> "
                       f"{s.connecting_target}, naturality "
                       f"{'ok' if s.naturality_ok else 'FAIL'}")
            yield f"relative weak lim = {r.relative_weak.lim} [{r.relative_weak.status}]"
        yield f"all verdicts: {'ok' if r.all_ok else 'FAIL'}"

    _emit(resp, as_json, lines)
    _exit_on_verdict(resp)


@main.command("polyhedron-report")
@click.option("--cofiltration", "cof_path", required=True, type=str)
@click.option("--coeff", default="Z", show_default=True)
@click.option("--degree", default=0, show_default=True, type=int)
@click.option("--depth", default=6, show_default=True, type=int)
@click.option("--json", "as_json", is_flag=True)
@click.option("--server", default=None)
def polyhedron_report(cof_path, coeff, degree, depth, as_json, server):
    """Colimit-side universal-coefficient report for increasing subcomplexes."""
    doc = _load_json(cof_path)
    try:
        req = schemas.PolyhedronReportRequest(
            cofiltration=schemas.CofiltrationDoc(**doc),
            coeff=coeff, degree=degree, depth=depth)
        resp = _dispatch(server, "polyhedron-report", req,
                         lambda payload: schemas.PairPolyhedronReportResponse
                         if "stage_connecting" in payload
                         else schemas.PolyhedronReportResponse)
    except InputError as e:
        _fail_input(str(e))

    def lines(r):
        if isinstance(r, schemas.PairPolyhedronReportResponse):
            yield f"degree {r.degree}, coefficients {r.coeff}"
            for i, (src, tgt) in enumerate(r.connecting_groups):
                yield (f"stage {i}: connecting {src} -> {tgt}, naturality "
                       f"{'ok' if r.naturality_ok[i] else 'FAIL'}")
            yield f"relative colim = {r.relative.colim_homology}"
        else:
            yield f"degree {r.degree}, coefficients {r.coeff}"
            yield f"homology colim = {r.colim_homology} [{r.colim_status}]"
            yield f"hom part = {r.hom_part}"
            yield (f"ext part: lim Ext = {r.ext_lim.lim} [{r.ext_lim.status}], "
                   f"lim1-Hom = {r.ext_lim1_hom}")
            yield f"Milnor lim = {r.milnor_lim.lim} [{r.milnor_lim.status}]"
            yield f"stage UCT verdicts: {'ok' if all(r.stage_uct_ok) else 'FAIL'}"
        yield f"all verdicts: {'ok' if r.all_ok else 'FAIL'}"

    _emit(resp, as_json, lines)
    _exit_on_verdict(resp)


@main.command()
@click.option("--suite", default="uct-random", show_default=True,
              help="one of: " + ", ".join(sorted(VERIFY_SUITES)) + ", all")
@click.option("--seed", default=DEFAULT_SEED, show_default=True, type=int)
@click.option("--count", default=None, type=int)
@click.option("--json", "as_json", is_flag=True)
@click.option("--server", default=None)
def verify(suite, seed, count, as_json, server):
    """Run a named verification suite; exits 1 on any failing instance."""
    try:
        req = schemas.VerifyRequest(suite=suite, seed=seed, count=count)
        resp = _dispatch(server, "verify", req, schemas.VerifyResponse)
    except InputError as e:
        _fail_input(str(e))

    def lines(r):
        yield f"suite {r.suite} (seed {r.seed}): {r.passed}/{r.total} pass"
        for f in r.failures:
            yield f"  FAIL: {f}"

    _emit(resp, as_json, lines)
    _exit_on_verdict(resp)


@main.command()
@click.argument("name")
@click.option("--out", default=".", show_default=True,
              help="directory for the emitted documents")
@click.option("--json", "as_json", is_flag=True)
@click.option("--server", default=None)
def examples(name, out, as_json, server):
    """Write a canned input document (solenoid-p, sphere-n, torus, klein,
    rp2, delta-pair, wedge-chain)."""
    try:
        if server is None:
            resp = api.handle_examples(name)
        else:
            import httpx
            url = server.rstrip("/") + "/examples/" + name
            raw = httpx.get(url, timeout=60.0)
            if raw.status_code == 422:
                raise InputError(str(raw.json().get("detail", "invalid input")))
            raw.raise_for_status()
            resp = schemas.ExamplesResponse.model_validate(raw.json())
    except InputError as e:
        _fail_input(str(e))
    outdir = pathlib.Path(out)
    outdir.mkdir(parents=True, exist_ok=True)
    written = []
    for fname, doc in resp.files.items():
        path = outdir / fname
        path.write_text(json.dumps(doc, sort_keys=True, indent=2) + "\n",
                        encoding="utf-8")
        written.append(str(path))
    if as_json:
        click.echo(json.dumps({"name": resp.name, "written": written}, sort_keys=True))
    else:
        for p in written:
            click.echo(f"wrote {p}")
    sys.exit(0)


if __name__ == "__main__":
    main()
