"""HTTP service: the compute handlers behind JSON POST endpoints.

Run with ``uvicorn uctkit.service:app``.  Every endpoint is stateless; the
CLI drives the same handlers in-process and accepts ``--server`` to talk to
a running instance instead.
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException

from . import api, schemas

app = FastAPI(title="uctkit",
              description="Exact homology/cohomology with universal-coefficient "
                          "sequence reports over finitely generated coefficients")


def _guard(fn, *args):
    try:
        return fn(*args)
    except schemas.InputError as e:
        raise HTTPException(status_code=422, detail=str(e))


@app.get("/health")
def health() -> dict:
    return {"status": "ok"}


@app.post("/homology", response_model=schemas.HomologyResponse)
def homology_endpoint(req: schemas.HomologyRequest):
    return _guard(api.handle_homology, req)


@app.post("/cohomology", response_model=schemas.HomologyResponse)
def cohomology_endpoint(req: schemas.HomologyRequest):
    return _guard(api.handle_cohomology, req)


@app.post("/uct", response_model=schemas.UctResponse)
def uct_endpoint(req: schemas.UctRequest):
    return _guard(api.handle_uct, req)


@app.post("/ext", response_model=schemas.ExtResponse)
def ext_endpoint(req: schemas.ExtRequest):
    return _guard(api.handle_ext, req)


@app.post("/space-report")
def space_report_endpoint(req: schemas.SpaceReportRequest):
    return _guard(api.handle_space_report, req)


@app.post("/polyhedron-report")
def polyhedron_report_endpoint(req: schemas.PolyhedronReportRequest):
    return _guard(api.handle_polyhedron_report, req)


@app.post("/verify", response_model=schemas.VerifyResponse)
def verify_endpoint(req: schemas.VerifyRequest):
    return _guard(api.handle_verify, req)


@app.get("/examples/{name}", response_model=schemas.ExamplesResponse)
def examples_endpoint(name: str):
    return _guard(api.handle_examples, name)
