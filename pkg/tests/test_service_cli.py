import json

import pytest
from click.testing import CliRunner
from fastapi.testclient import TestClient

from uctkit import schemas
from uctkit.api import handle_examples
from uctkit.cli import main
from uctkit.service import app

client = TestClient(app)


def example_doc(name):
    resp = handle_examples(name)
    return next(iter(resp.files.values()))


# --- service ----------------------------------------------------------------

def test_health():
    r = client.get("/health")
    assert r.status_code == 200 and r.json() == {"status": "ok"}


def test_homology_endpoint_simplicial():
    r = client.post("/homology", json={
        "simplicial": example_doc("sphere-1"), "coeff": "Z", "degree": 1})
    assert r.status_code == 200
    assert r.json()["group"] == "Z"


def test_homology_endpoint_complex_doc():
    doc = {"orientation": "chain", "degrees": {"0": 1, "1": 1},
           "differentials": {"1": [["2"]]}}
    r = client.post("/homology", json={"complex": doc, "coeff": "Z", "degree": 0})
    assert r.status_code == 200 and r.json()["group"] == "Z/2"


def test_cohomology_endpoint():
    r = client.post("/cohomology", json={
        "simplicial": example_doc("klein"), "coeff": "Z", "degree": 2})
    assert r.status_code == 200 and r.json()["group"] == "Z/2"


def test_uct_endpoint():
    r = client.post("/uct", json={
        "simplicial": example_doc("klein"), "coeff": "Z/2", "degree": 1})
    body = r.json()
    assert r.status_code == 200
    assert body["all_ok"] and body["middle"] == "Z/2 + Z/2"
    assert body["ext_part"] == "Z/2" and body["hom_part"] == "Z/2"


def test_ext_endpoint():
    r = client.post("/ext", json={"group": "Z/6", "coeff": "Z", "cocycle_check": False})
    body = r.json()
    assert body["ext"] == "Z/6" and body["hom"] == "0" and body["pext_zero"]


def test_space_report_endpoint():
    r = client.post("/space-report", json={
        "tower": example_doc("solenoid-2"), "coeff": "Z", "degree": 0, "depth": 6})
    body = r.json()
    assert r.status_code == 200
    assert body["hom_part"]["lim"] == "Z"
    assert body["ext_lim1_hom"] == "uncountable"
    assert body["weak_part"]["lim"] == "Z"
    assert body["all_ok"]


def test_polyhedron_report_endpoint():
    r = client.post("/polyhedron-report", json={
        "cofiltration": example_doc("wedge-chain"), "coeff": "Z",
        "degree": 1, "depth": 4})
    body = r.json()
    assert body["colim_homology"] == "Z^5" and body["hom_part"] == "Z^5"


def test_verify_endpoint():
    r = client.post("/verify", json={"suite": "named-spaces", "seed": 3})
    body = r.json()
    assert body["all_ok"] and body["passed"] == body["total"] == 8


def test_examples_endpoint():
    r = client.get("/examples/torus")
    assert r.status_code == 200
    assert "torus.json" in r.json()["files"]


def test_input_errors_are_422():
    r = client.post("/homology", json={"coeff": "Z", "degree": 0})
    assert r.status_code == 422
    r = client.post("/homology", json={
        "simplicial": {"facets": [[0]]}, "coeff": "Q", "degree": 0})
    assert r.status_code == 422
    assert "coeff" in r.json()["detail"]
    r = client.get("/examples/moebius")
    assert r.status_code == 422
    r = client.post("/verify", json={"suite": "nope"})
    assert r.status_code == 422


def test_bad_differential_names_offending_key():
    doc = {"orientation": "chain", "degrees": {"0": 1, "1": 1},
           "differentials": {"1": [["x"]]}}
    r = client.post("/homology", json={"complex": doc, "coeff": "Z", "degree": 0})
    assert r.status_code == 422
    assert "differentials.1" in r.json()["detail"]


# --- CLI ----------------------------------------------------------------------

def run_cli(args, cwd_files=None):
    runner = CliRunner()
    with runner.isolated_filesystem():
        if cwd_files:
            for fname, doc in cwd_files.items():
                with open(fname, "w") as fh:
                    json.dump(doc, fh)
        return runner.invoke(main, args, catch_exceptions=False)


def test_cli_homology_text():
    result = run_cli(["homology", "--complex", "c.json", "--coeff", "Z",
                      "--degree", "1"],
                     {"c.json": example_doc("sphere-1")})
    assert result.exit_code == 0
    assert result.output.strip() == "H_1 = Z"


def test_cli_space_report_solenoid():
    result = run_cli(["space-report", "--tower", "t.json", "--coeff", "Z",
                      "--degree", "0", "--depth", "6"],
                     {"t.json": example_doc("solenoid-2")})
    assert result.exit_code == 0
    assert "hom part: lim = Z" in result.output
    assert "lim1-Hom = uncountable" in result.output


def test_cli_verify_pass_and_exit_codes():
    result = run_cli(["verify", "--suite", "named-spaces", "--seed", "42"])
    assert result.exit_code == 0
    assert "8/8 pass" in result.output


def test_cli_unknown_suite_exit_2():
    result = run_cli(["verify", "--suite", "bogus"])
    assert result.exit_code == 2


def test_cli_missing_file_exit_2():
    result = run_cli(["homology", "--complex", "missing.json"])
    assert result.exit_code == 2


def test_cli_malformed_doc_exit_2():
    result = run_cli(["homology", "--complex", "bad.json"],
                     {"bad.json": {"orientation": "chain",
                                   "degrees": {"zero": 1}}})
    assert result.exit_code == 2


def test_cli_json_deterministic():
    files = {"t.json": example_doc("solenoid-2")}
    args = ["space-report", "--tower", "t.json", "--coeff", "Z",
            "--degree", "0", "--depth", "4", "--json"]
    out1 = run_cli(args, files).output
    out2 = run_cli(args, files).output
    assert out1 == out2
    parsed = json.loads(out1)
    assert parsed["all_ok"] is True


def test_cli_verify_json_deterministic():
    args = ["verify", "--suite", "cocycle-ext", "--seed", "5", "--json"]
    assert run_cli(args).output == run_cli(args).output


def test_cli_examples_round_trip(tmp_path):
    runner = CliRunner()
    result = runner.invoke(main, ["examples", "torus", "--out", str(tmp_path)])
    assert result.exit_code == 0
    doc = json.loads((tmp_path / "torus.json").read_text())
    # the emitted document parses and has the right Euler count
    from uctkit.schemas import SimplicialDoc
    k = SimplicialDoc(**doc).to_complex()
    assert k.euler_characteristic() == 0
    result = runner.invoke(main, ["examples", "nonsense", "--out", str(tmp_path)])
    assert result.exit_code == 2


def test_cli_against_live_service(tmp_path):
    """Thin-client mode: the CLI should produce identical reports through HTTP."""
    import threading
    import time

    import uvicorn

    config = uvicorn.Config(app, host="127.0.0.1", port=8137, log_level="error")
    server = uvicorn.Server(config)
    thread = threading.Thread(target=server.run, daemon=True)
    thread.start()
    try:
        for _ in range(100):
            if server.started:
                break
            time.sleep(0.05)
        assert server.started
        doc = example_doc("sphere-1")
        path = tmp_path / "c.json"
        path.write_text(json.dumps(doc))
        runner = CliRunner()
        local = runner.invoke(main, ["homology", "--complex", str(path),
                                     "--degree", "1", "--json"])
        remote = runner.invoke(main, ["homology", "--complex", str(path),
                                      "--degree", "1", "--json",
                                      "--server", "http://127.0.0.1:8137"])
        assert local.exit_code == 0 and remote.exit_code == 0
        assert local.output == remote.output
    finally:
        server.should_exit = True
        thread.join(timeout=5)


def test_depth_limit_env(monkeypatch):
    from uctkit import api as api_mod
    monkeypatch.setenv("UCTKIT_DEPTH_LIMIT", "2")
    assert api_mod.depth_limit() == 2
    req = schemas.SpaceReportRequest(
        tower=schemas.TowerDoc(**example_doc("solenoid-2")),
        coeff="Z", degree=0, depth=50)
    resp = api_mod.handle_space_report(req)
    # depth got clamped to the limit: window of 3 stages
    assert len(resp.stage_cohomology) == 3
    monkeypatch.setenv("UCTKIT_DEPTH_LIMIT", "junk")
    with pytest.raises(schemas.InputError):
        api_mod.depth_limit()


def test_all_example_documents_round_trip():
    from uctkit.api import EXAMPLE_NAMES
    for name in EXAMPLE_NAMES:
        resp = handle_examples(name)
        for fname, doc in resp.files.items():
            if "stages" in doc and "bonding" in doc:
                model = schemas.TowerDoc(**doc)
                if model.is_pair_tower():
                    model.to_pair_tower()
                else:
                    model.to_simplicial_tower()
            elif "stages" in doc:
                schemas.CofiltrationDoc(**doc).to_complex_list()
            elif "sub_facets" in doc:
                schemas.PairDoc(**doc).to_pair()
            else:
                schemas.SimplicialDoc(**doc).to_complex()


def test_cover_document_round_trip():
    doc = schemas.CoverDoc(ground=6, sets=[[0, 1, 2], [2, 3, 4], [4, 5, 0]])
    cover = doc.to_cover()
    from uctkit.simplicial import nerve
    from uctkit.generators import sphere
    assert nerve(cover) == sphere(1)
    with pytest.raises(schemas.InputError):
        schemas.CoverDoc(ground=7, sets=[[0, 1]]).to_cover()
