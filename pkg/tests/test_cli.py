import json
import subprocess
import sys

TATE_CURVE = {
    "schema": 1, "p": 2, "a": 1, "d": 1,
    "phi": [["1", "0"], ["0", "2"]],
    "N": [["0", "1"], ["0", "0"]],
    "fil": {"0": [["1", "0"], ["0", "1"]], "1": [["1", "1"]]},
}

NETCOH_D2 = {
    "schema": 1, "p": 2, "a": 1, "d": 2,
    "phi": [["4", "0", "0", "0"], ["0", "2", "0", "0"],
            ["0", "0", "2", "0"], ["0", "0", "0", "1"]],
    "N": [["0", "0", "0", "0"], ["1", "0", "0", "0"],
          ["0", "0", "0", "0"], ["0", "1", "1", "0"]],
    "fil": {"0": [["1", "0", "0", "0"], ["0", "1", "0", "0"],
                  ["0", "0", "1", "0"], ["0", "0", "0", "1"]],
            "1": [["1", "0", "0", "0"], ["0", "1", "0", "0"], ["0", "0", "1", "0"]],
            "2": [["1", "0", "0", "0"]]},
}

TRIANGLE_NERVE = {
    "schema": 1,
    "components": ["a", "b", "c"],
    "strata": {"a": {"0": 1}, "b": {"0": 1}, "c": {"0": 1},
               "a,b": {"0": 1}, "a,c": {"0": 1}, "b,c": {"0": 1}},
    "restrictions": {
        "a->a,b": {"0": [["1"]]}, "b->a,b": {"0": [["1"]]},
        "a->a,c": {"0": [["1"]]}, "c->a,c": {"0": [["1"]]},
        "b->b,c": {"0": [["1"]]}, "c->b,c": {"0": [["1"]]},
    },
}

CYCLE3_STEENBRINK = {
    "schema": 1, "d": 1,
    "levels": {"1": ["c0", "c1", "c2"], "2": ["p0", "p1", "p2"]},
    "dims": {"c0": {"0": 1, "2": 1}, "c1": {"0": 1, "2": 1}, "c2": {"0": 1, "2": 1},
             "p0": {"0": 1}, "p1": {"0": 1}, "p2": {"0": 1}},
    "restrictions": {
        "c0->p0": {"0": [["1"]]}, "c1->p0": {"0": [["-1"]]},
        "c1->p1": {"0": [["1"]]}, "c2->p1": {"0": [["-1"]]},
        "c2->p2": {"0": [["1"]]}, "c0->p2": {"0": [["-1"]]},
    },
    "gysins": {
        "p0->c0": {"0": [["1"]]}, "p0->c1": {"0": [["-1"]]},
        "p1->c1": {"0": [["1"]]}, "p1->c2": {"0": [["-1"]]},
        "p2->c2": {"0": [["1"]]}, "p2->c0": {"0": [["-1"]]},
    },
}

D2_COMPLEX = {
    "schema": 1,
    "spaces": {"0": 1, "1": 1, "2": 1},
    "differentials": {"0": [["1"]], "1": [["0"]]},
    "filtration": {"0": {"0": [["1"]], "1": []},
                   "1": {"2": [["1"]], "3": []},
                   "2": {"1": [["1"]], "2": []}},
}


def run_cli(args, input_obj=None, path=None):
    cmd = [sys.executable, "-m", "weightfil.cli"] + args
    if path is not None:
        cmd.append(str(path))
    return subprocess.run(cmd, capture_output=True)


def write(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(json.dumps(obj))
    return p


def test_phin_analyze_tate_curve(tmp_path):
    p = write(tmp_path, "tate.json", TATE_CURVE)
    res = run_cli(["phin-analyze"], path=p)
    assert res.returncode == 0, res.stderr
    rep = json.loads(res.stdout)
    assert rep["t_N"] == "1" and rep["t_H"] == "1"
    assert rep["weakly_admissible"]["verdict"] == "admissible"
    assert rep["ordinary"] is True
    assert rep["monodromy_weight_equal"] is True
    assert "clauses" in rep


def test_phin_netcoh(tmp_path):
    p = write(tmp_path, "d2.json", NETCOH_D2)
    res = run_cli(["phin-netcoh"], path=p)
    assert res.returncode == 0, res.stderr
    rep = json.loads(res.stdout)
    assert rep["a"] and rep["b"] and rep["c"]
    assert rep["dim_C"] == 1
    assert rep["C_meets_middle_level"] is False


def test_phin_check_mw_failure_diff(tmp_path):
    obj = dict(TATE_CURVE)
    obj["N"] = [["0", "0"], ["0", "0"]]
    obj["fil"] = {"0": [["1", "0"], ["0", "1"]], "1": [["0", "1"]]}
    p = write(tmp_path, "mixed.json", obj)
    res = run_cli(["phin-check-mw"], path=p)
    rep = json.loads(res.stdout)
    assert rep["equal"] is False
    assert rep["step_diff"]


def test_ss_cech_triangle(tmp_path):
    p = write(tmp_path, "tri.json", TRIANGLE_NERVE)
    res = run_cli(["ss-cech"], path=p)
    assert res.returncode == 0, res.stderr
    rep = json.loads(res.stdout)
    assert rep["total_cohomology"] == {"0": 1, "1": 1}
    assert rep["flag_complex_agrees"] is True
    assert rep["equivariant_degeneration"] is True
    assert rep["degeneration_page"] == 2


def test_ss_steenbrink_cycle(tmp_path):
    p = write(tmp_path, "cyc.json", CYCLE3_STEENBRINK)
    res = run_cli(["ss-steenbrink"], path=p)
    assert res.returncode == 0, res.stderr
    rep = json.loads(res.stdout)
    assert rep["total_cohomology"] == {"0": 1, "1": 2, "2": 1}
    assert rep["weight_graded"]["1"] == {"0": 1, "2": 1}
    assert rep["monodromy_rank"]["1"] == 1
    assert rep["monodromy_weight_equal"]["1"] is True


def test_ss_pages(tmp_path):
    p = write(tmp_path, "cx.json", D2_COMPLEX)
    res = run_cli(["ss-pages", "--max-page", "4"], path=p)
    rep = json.loads(res.stdout)
    assert rep["degeneration_page"] == 3
    assert rep["pages"]["2"] == {"0,0": 1, "1,1": 1, "2,-1": 1}


def test_drinfeld_commands():
    res = run_cli(["drinfeld-ball", "--d", "1", "--p", "2", "--n", "2"])
    rep = json.loads(res.stdout)
    assert rep["vertex_count"] == 10
    res = run_cli(["drinfeld-counts", "--d", "2", "--q", "2", "--i", "3"])
    rep = json.loads(res.stdout)
    assert rep["neighbor_count"] == 14
    assert rep["simplices_through_vertex"] == 21
    res = run_cli(["drinfeld-arrangement", "--r", "2", "--q", "2"])
    rep = json.loads(res.stdout)
    assert rep["poincare"] == [1, 6, 8] and rep["cross_check"] == "pass"
    res = run_cli(["drinfeld-blowup", "--r", "2", "--q", "2"])
    rep = json.loads(res.stdout)
    assert rep["poincare"] == [1, 0, 8, 0, 1]
    assert rep["point_counts"]["1"] == 21


def test_exit_code_schema_error(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text("{not json")
    assert run_cli(["phin-analyze"], path=p).returncode == 1
    q = write(tmp_path, "unknown.json", dict(TATE_CURVE, extra=1))
    assert run_cli(["phin-analyze"], path=q).returncode == 1
    r = write(tmp_path, "noschema.json", {k: v for k, v in TATE_CURVE.items()
                                          if k != "schema"})
    assert run_cli(["phin-analyze"], path=r).returncode == 1


def test_exit_code_precondition(tmp_path):
    obj = dict(TATE_CURVE)
    obj["phi"] = [["1", "0"], ["0", "1"]]  # breaks N phi = q phi N
    p = write(tmp_path, "bad_comm.json", obj)
    res = run_cli(["phin-analyze"], path=p)
    assert res.returncode == 2
    assert b"commutation" in res.stderr


def test_text_format(tmp_path):
    p = write(tmp_path, "tate.json", TATE_CURVE)
    res = run_cli(["phin-analyze", "--format", "text"], path=p)
    assert res.returncode == 0
    assert b"t_N: 1" in res.stdout


def test_determinism_golden(tmp_path):
    fixtures = [
        (["phin-analyze", "--seed", "3"], write(tmp_path, "a.json", TATE_CURVE)),
        (["phin-netcoh"], write(tmp_path, "b.json", NETCOH_D2)),
        (["ss-cech"], write(tmp_path, "c.json", TRIANGLE_NERVE)),
        (["ss-steenbrink"], write(tmp_path, "d.json", CYCLE3_STEENBRINK)),
        (["ss-pages"], write(tmp_path, "e.json", D2_COMPLEX)),
        (["drinfeld-ball", "--d", "1", "--p", "2", "--n", "2"], None),
        (["drinfeld-arrangement", "--r", "2", "--q", "3"], None),
        (["drinfeld-blowup", "--r", "2", "--q", "3"], None),
        (["drinfeld-counts", "--d", "2", "--q", "2", "--i", "2"], None),
    ]
    for args, path in fixtures:
        first = run_cli(args, path=path)
        second = run_cli(args, path=path)
        assert first.returncode == 0, (args, first.stderr)
        assert first.stdout == second.stdout  # byte identical
