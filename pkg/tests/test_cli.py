import json
import os
import subprocess
import sys

import pytest

from twoec.cli import main, three_edge_coloring
from _instances import k33, petersen, prism


def run(*args, stdin="", env=None):
    e = dict(os.environ)
    e.update(env or {})
    p = subprocess.run(
        [sys.executable, "-m", "twoec.cli", *args], input=stdin, capture_output=True, text=True, env=e
    )
    return p.returncode, p.stdout, p.stderr


def pipe(gen_args, verb_args):
    code, inst, err = run("gen", *gen_args)
    assert code == 0, err
    code, cert, err = run(*verb_args, stdin=inst)
    assert code == 0, err
    return cert


def test_uniform_cover_pipe_verifies():
    cert = pipe(["cubic", "--n", "10", "--seed", "7"], ["uniform-cover"])
    code, out, _ = run("verify", stdin=cert)
    assert code == 0 and out.rstrip().endswith("VERIFIED")


def test_thirteen_fifteenths_without_color_column():
    graph = "4 6\n0 1 1\n0 2 1\n0 3 1\n1 2 1\n1 3 1\n2 3 1\n"
    code, cert, err = run("uniform-cover", "--variant", "13/15", stdin=graph)
    assert code == 0, err
    assert json.loads(cert)["target"] == ["13/15"] * 6


def test_square_and_triangle_pipes():
    for gen_args, verb in ((["donut", "--k", "4"], ["square"]), (["triangle-chain"], ["triangle"])):
        cert = pipe(gen_args, verb)
        assert run("verify", stdin=cert)[0] == 0


def test_triangle_e_star_by_label():
    _, inst, _ = run("gen", "triangle-k4", "--format", "json")
    code, _, err = run("triangle", "--e-star", "nope", stdin=inst)
    assert code == 2 and "nope" in err
    code, cert, _ = run("triangle", "--e-star", "e1", stdin=inst)
    assert code == 0 and json.loads(cert)["notes"]["e_star"] == "e1"


def test_tampered_certificate_exits_one():
    cert = json.loads(pipe(["cubic", "--n", "6", "--seed", "1"], ["uniform-cover"]))
    cert["terms"][0]["weight"] = "1/1"
    code, out, _ = run("verify", stdin=json.dumps(cert))
    assert code == 1 and "FAILED" in out


@pytest.mark.parametrize(
    "args,stdin",
    [
        (["uniform-cover"], "3 2\n0 1 1\n"),
        (["uniform-cover"], "4 4\n0 1 1\n1 2 1\n2 3 1\n3 0 1\n"),
        (["gen", "cubic", "--n", "9"], ""),
        (["gen", "donut"], ""),
        (["square"], "4 6\n0 1 1\n0 2 1\n0 3 1\n1 2 1\n1 3 1\n2 3 1\n"),
        (["verify"], '{"version": 2}'),
    ],
)
def test_bad_input_exits_two(args, stdin):
    code, _, err = run(*args, stdin=stdin)
    assert code == 2 and err.startswith("error:")


def test_oracle_verb():
    graph = "4 6\n0 1 1\n0 2 1\n0 3 1\n1 2 1\n1 3 1\n2 3 1\n"
    assert run("oracle", "--y", "7/8", stdin=graph)[0] == 0
    code, out, _ = run("oracle", "--y", "13/20", stdin=graph)
    assert code == 1 and out.startswith("does not dominate")


def test_fixed_seed_gives_identical_bytes(tmp_path):
    a = pipe(["cubic", "--n", "14", "--seed", "3"], ["uniform-cover"])
    b = pipe(["cubic", "--n", "14", "--seed", "3"], ["uniform-cover"])
    _, inst, _ = run("gen", "cubic", "--n", "14", "--seed", "3")
    code, c, _ = run("uniform-cover", stdin=inst, env={"TWOEC_THREADS": "3"})
    assert code == 0 and a == b == c


def test_output_file(tmp_path):
    out = tmp_path / "donut.txt"
    assert main(["gen", "donut", "--k", "2", "-o", str(out)]) == 0
    assert out.read_text().startswith("12 16\n")


def test_three_edge_coloring():
    for g in (prism(), k33()):
        col = three_edge_coloring(g)
        for v in range(g.n):
            assert sorted(col[i] for i in g.incident(v)) == [0, 1, 2]
    assert three_edge_coloring(petersen()) is None
