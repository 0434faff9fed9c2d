import json

from comical.opcalc import FLAVOR_NEG, FLAVOR_NONE, run_nf
from comical.complexes import identity_map, standard_cube, tensor_indexed, marked_cube
from comical.functors import FlavorInclusion, materialize_forgotten
from comical.cli import complex_doc, main, map_entry, word_out


def run(capsys, argv):
    code = main(argv)
    cap = capsys.readouterr()
    return code, cap.out, cap.err


def run_json(capsys, argv):
    code, out, err = run(capsys, argv)
    assert err == "", err
    return code, json.loads(out)


def write_doc(tmp_path, name, doc):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return str(path)


def dims_of(doc):
    return sorted(c["dim"] for c in doc["cubes"])


def marked_ids(doc):
    return {c["id"] for c in doc["cubes"] if c["marked"]}


def test_normalize_cancels_a_degeneracy_against_its_face(capsys):
    code, doc = run_json(capsys, ["normalize", "--dim", "1", "s(1),d(1,0)"])
    assert code == 0
    assert doc["word"] == "id"
    assert doc["acts_on"] == 1 and doc["result_dim"] == 1
    assert doc["is_identity"] is True


def test_normalize_keeps_the_other_composition_order(capsys):
    code, doc = run_json(capsys, ["normalize", "--dim", "1", "d(1,0),s(1)"])
    assert code == 0
    assert doc["word"] == "d(1,0),s(1)"
    assert doc["is_identity"] is False


def test_normalize_rejects_words_outside_the_flavor(capsys):
    code, out, err = run(
        capsys, ["normalize", "--dim", "2", "--flavor", "none", "g(1,0)"]
    )
    assert code == 2
    assert err.startswith("error:")


def test_compose_concatenates_first_applied_first(capsys):
    code, doc = run_json(capsys, ["compose", "--dim", "1", "d(1,0)", "s(1)"])
    assert code == 0
    assert doc["word"] == "d(1,0),s(1)"
    code, doc = run_json(capsys, ["compose", "--dim", "1", "s(1)", "d(1,0)"])
    assert doc["word"] == "id"


def test_tailform_reports_the_terminal_connection_run(capsys):
    word = word_out(run_nf(3, 1, 2, 0))
    code, doc = run_json(capsys, ["tailform", "--dim", "3", word])
    assert code == 0
    assert (doc["j"], doc["q"], doc["mu"]) == (1, 2, 0)
    assert doc["psi"] == "id"
    assert doc["trivial"] is False
    assert doc["maximal_index"] == 2


def test_catalog_comical_cube_marks_the_critical_faces(capsys):
    code, doc = run_json(
        capsys,
        ["catalog", "comical-cube", "--n", "2", "--face", "1,0", "--flavor", "neg"],
    )
    assert code == 0
    assert marked_ids(doc) == {"int", "d(2,1)"}


def test_catalog_cylinder_marks_the_collapsing_direction(capsys):
    code, doc = run_json(capsys, ["catalog", "cylinder", "--flavor", "none"])
    assert code == 0
    assert marked_ids(doc) == {"d(1,0)*int", "d(1,1)*int", "int*int"}


def test_catalog_open_box_ships_its_inclusion(capsys):
    code, doc = run_json(
        capsys,
        ["catalog", "comical-open-box", "--n", "2", "--face", "1,0", "--flavor", "neg"],
    )
    assert code == 0
    ids = {c["id"] for c in doc["cubes"]}
    assert "int" not in ids and "d(1,0)" not in ids
    (entry,) = doc["maps"]
    assert entry["name"] == "inclusion"
    assert set(entry["assignment"]) == ids


def test_tensor_of_intervals_is_a_square(capsys, tmp_path):
    code, interval = run_json(capsys, ["catalog", "standard", "--n", "1"])
    path = write_doc(tmp_path, "interval.json", interval)
    code, doc = run_json(capsys, ["tensor", path, path])
    assert code == 0
    assert dims_of(doc) == [0, 0, 0, 0, 1, 1, 1, 1, 2]


def test_pushout_glues_two_intervals_at_a_point(capsys, tmp_path):
    pt = standard_cube(0, FLAVOR_NONE)
    iv = standard_cube(1, FLAVOR_NONE)
    doc = complex_doc(pt)
    doc["maps"] = [
        {
            "name": "left",
            "domain": "main",
            "codomain": complex_doc(iv),
            "assignment": {"int": ["id", iv.face("int", 1, 1).base]},
        },
        {
            "name": "right",
            "domain": "main",
            "codomain": complex_doc(iv),
            "assignment": {"int": ["id", iv.face("int", 1, 0).base]},
        },
    ]
    path = write_doc(tmp_path, "wedge.json", doc)
    code, out = run_json(capsys, ["pushout", path])
    assert code == 0
    assert dims_of(out) == [0, 0, 0, 1, 1]
    names = {m["name"] for m in out["maps"]}
    assert names == {"into-left", "into-right"}


def test_triangulate_square_counts_and_markings(capsys, tmp_path):
    code, sq = run_json(capsys, ["catalog", "standard", "--n", "2"])
    path = write_doc(tmp_path, "square.json", sq)
    code, doc = run_json(capsys, ["triangulate", path])
    assert code == 0
    dims = sorted(s["dim"] for s in doc["simplices"])
    assert dims == [0, 0, 0, 0, 1, 1, 1, 1, 1, 2, 2]
    marked_tops = [s for s in doc["simplices"] if s["dim"] == 2 and s["marked"]]
    assert len(marked_tops) == 1


def test_flavor_round_trip_free_then_forget(capsys, tmp_path):
    code, iv = run_json(capsys, ["catalog", "standard", "--n", "1"])
    path = write_doc(tmp_path, "iv.json", iv)
    code, free = run_json(capsys, ["ifree", path, "--flavor", "neg"])
    assert code == 0 and free["flavor"] == "neg"
    assert dims_of(free) == [0, 0, 1]
    path2 = write_doc(tmp_path, "ivneg.json", free)
    code, forgot = run_json(capsys, ["iforget", path2, "--flavor", "none", "--cap", "3"])
    assert code == 0 and forgot["flavor"] == "none"
    assert dims_of(forgot) == [0, 0, 1, 2, 3]


def test_icofree_produces_the_larger_flavor(capsys, tmp_path):
    code, pt = run_json(capsys, ["catalog", "standard", "--n", "0"])
    path = write_doc(tmp_path, "pt.json", pt)
    code, doc = run_json(capsys, ["icofree", path, "--flavor", "neg", "--cap", "2"])
    assert code == 0 and doc["flavor"] == "neg"


def test_trivialize_marks_everything_above_the_threshold(capsys, tmp_path):
    code, sq = run_json(capsys, ["catalog", "standard", "--n", "2"])
    path = write_doc(tmp_path, "sq.json", sq)
    code, doc = run_json(capsys, ["trivialize", path, "--n-trivial", "0"])
    assert code == 0
    assert marked_ids(doc) == {c["id"] for c in doc["cubes"] if c["dim"] >= 1}


def test_mark_modes(capsys, tmp_path):
    code, m1 = run_json(capsys, ["catalog", "marked", "--n", "1", "--flavor", "neg"])
    path = write_doc(tmp_path, "m1.json", m1)
    code, doc = run_json(capsys, ["mark", path, "--mode", "underlying"])
    assert code == 0 and doc["regime"] == "unmarked"
    code, sq = run_json(capsys, ["catalog", "standard", "--n", "2"])
    path2 = write_doc(tmp_path, "sq.json", sq)
    code, cored = run_json(capsys, ["mark", path2, "--mode", "core"])
    assert code == 0 and max(dims_of(cored)) == 1
    code, sqe = run_json(
        capsys, ["catalog", "standard", "--n", "2", "--regime", "edge-marked"]
    )
    path3 = write_doc(tmp_path, "sqe.json", sqe)
    code, flatd = run_json(capsys, ["mark", path3, "--mode", "flat"])
    assert code == 0 and flatd["regime"] == "full-marked"
    assert marked_ids(flatd) == set()
    code, sharpd = run_json(capsys, ["mark", path3, "--mode", "sharp"])
    assert code == 0 and "int" in marked_ids(sharpd)


def test_rlp_exit_codes_track_the_verdict(capsys, tmp_path):
    iv = standard_cube(1, FLAVOR_NEG)
    pt = standard_cube(0, FLAVOR_NEG)
    p = {
        "name": "p",
        "domain": "main",
        "codomain": complex_doc(pt),
        "assignment": {x: ["id" if iv.cube_dim(x) == 0 else "d(1,0),s(1)", "int"] for x in iv.cubes},
    }
    p["assignment"] = {
        "int": ["s(1)", "int"],
        "d(1,0)": ["id", "int"],
        "d(1,1)": ["id", "int"],
    }
    doc = complex_doc(iv)
    doc["maps"] = [p]
    path = write_doc(tmp_path, "p.json", doc)
    code, out = run_json(
        capsys, ["rlp", "--map", path, "--gen", "comical-open-box", "--n", "1"]
    )
    assert code == 0 and out["holds"] is True

    M = marked_cube(1, FLAVOR_NEG)
    bad = complex_doc(standard_cube(0, FLAVOR_NEG))
    bad["maps"] = [
        {
            "name": "pv",
            "domain": "main",
            "codomain": complex_doc(M),
            "assignment": {"int": ["id", M.face("int", 1, 0).base]},
        }
    ]
    path2 = write_doc(tmp_path, "pv.json", bad)
    code, out = run_json(
        capsys,
        ["rlp", "--map", path2, "--gen", "comical-open-box", "--n", "1", "--face", "1,1"],
    )
    assert code == 1 and out["holds"] is False
    assert "counterexample" in out


def test_comical_check_exit_codes(capsys, tmp_path):
    code, pt = run_json(capsys, ["catalog", "standard", "--n", "0", "--flavor", "neg"])
    path = write_doc(tmp_path, "pt.json", pt)
    code, out = run_json(capsys, ["comical-check", path, "--cap", "2"])
    assert code == 0 and out["holds"] is True
    code, iv = run_json(capsys, ["catalog", "standard", "--n", "1", "--flavor", "neg"])
    path2 = write_doc(tmp_path, "iv.json", iv)
    code, out = run_json(capsys, ["comical-check", path2, "--cap", "2"])
    assert code == 1 and out["holds"] is False
    assert out["generator"] == "box(2,1,1)"


def test_fibrant_approx_grows_the_complex(capsys, tmp_path):
    code, iv = run_json(capsys, ["catalog", "standard", "--n", "1", "--flavor", "neg"])
    path = write_doc(tmp_path, "iv.json", iv)
    code, doc = run_json(capsys, ["fibrant-approx", path, "--cap", "2", "--rounds", "1"])
    assert code == 0
    assert len(doc["cubes"]) > len(iv["cubes"])
    (entry,) = doc["maps"]
    assert entry["name"] == "inclusion"


def test_wcs_synthesize_then_validate(capsys, tmp_path):
    code, iv = run_json(capsys, ["catalog", "standard", "--n", "1"])
    path = write_doc(tmp_path, "iv.json", iv)
    code, table = run_json(
        capsys, ["wcs-synthesize", path, "--cap", "2", "--flavor", "neg"]
    )
    assert code == 0 and table["kind"] == "wcs-table"
    tpath = write_doc(tmp_path, "table.json", table)
    code, verdict = run_json(capsys, ["wcs-validate", tpath])
    assert code == 0 and verdict["holds"] is True


def test_scs_extend_builds_a_composition_closed_table(capsys, tmp_path):
    inc = FlavorInclusion(FLAVOR_NONE, FLAVOR_NEG)
    host, _ = materialize_forgotten(standard_cube(1, FLAVOR_NEG), inc, 3)
    path = write_doc(tmp_path, "host.json", complex_doc(host))
    code, table = run_json(
        capsys, ["scs-extend", path, "--cap", "2", "--flavor", "neg"]
    )
    assert code == 0 and table["kind"] == "wcs-table"
    tpath = write_doc(tmp_path, "table.json", table)
    code, verdict = run_json(capsys, ["wcs-validate", tpath, "--scs"])
    assert code == 0 and verdict["composition_closed"] is True


def test_scs_extend_reports_missing_fillers(capsys, tmp_path):
    inc = FlavorInclusion(FLAVOR_NONE, FLAVOR_NEG)
    host, _ = materialize_forgotten(standard_cube(1, FLAVOR_NEG), inc, 2)
    path = write_doc(tmp_path, "host.json", complex_doc(host))
    code, report = run_json(
        capsys, ["scs-extend", path, "--cap", "2", "--flavor", "neg"]
    )
    assert code == 1 and report["holds"] is False
    assert "no filler" in report["error"]


def test_scs_extend_then_promote_on_the_point(capsys, tmp_path):
    code, pt = run_json(capsys, ["catalog", "standard", "--n", "0"])
    path = write_doc(tmp_path, "pt.json", pt)
    code, table = run_json(
        capsys, ["scs-extend", path, "--cap", "2", "--flavor", "neg"]
    )
    assert code == 0
    tpath = write_doc(tmp_path, "ptable.json", table)
    code, promoted = run_json(capsys, ["promote", tpath])
    assert code == 0
    assert promoted["flavor"] == "neg"
    assert dims_of(promoted) == [0]


def test_quotient_collapse_on_the_cylinder(capsys, tmp_path):
    T, _ = tensor_indexed(
        standard_cube(1, FLAVOR_NONE, "full-marked"), marked_cube(1, FLAVOR_NONE)
    )
    doc = complex_doc(T, [map_entry("embed", identity_map(T))])
    path = write_doc(tmp_path, "cyl.json", doc)
    code, out = run_json(capsys, ["quotient-collapse", path])
    assert code == 0
    assert dims_of(out) == [0, 0, 1]
    first, second = out["identified"]
    assert first != second


def test_output_is_deterministic(capsys, tmp_path):
    argv = ["catalog", "comical-cube", "--n", "2", "--face", "2,1", "--flavor", "both"]
    _, out1, _ = run(capsys, argv)
    _, out2, _ = run(capsys, argv)
    assert out1 == out2
    code, iv = run_json(capsys, ["catalog", "standard", "--n", "1"])
    path = write_doc(tmp_path, "iv.json", iv)
    argv = ["wcs-synthesize", path, "--cap", "2", "--flavor", "neg"]
    _, s1, _ = run(capsys, argv)
    _, s2, _ = run(capsys, argv)
    assert s1 == s2


def test_bad_inputs_exit_with_code_2(capsys, tmp_path):
    cases = [
        ["normalize", "--dim", "1", "d(9,0)"],
        ["normalize", "--dim", "1", "d(1,0"],
        ["tensor", str(tmp_path / "missing.json"), str(tmp_path / "missing.json")],
        ["compose", "--dim", "0", "d(1,0)", "id"],
    ]
    for argv in cases:
        code, out, err = run(capsys, argv)
        assert code == 2, argv
        assert err.startswith("error:"), argv
    garbled = tmp_path / "garbled.json"
    garbled.write_text("{not json")
    code, out, err = run(capsys, ["triangulate", str(garbled)])
    assert code == 2 and err.startswith("error:")
