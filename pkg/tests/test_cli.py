import json

from starlab.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_sgp_info_457(capsys):
    code, out, _ = run_cli(capsys, "sgp", "info", "--gens", "4,5,7")
    assert code == 0
    payload = json.loads(out)
    assert payload["schema_version"] == 1
    results = payload["results"]
    assert results["frobenius"] == 6
    assert results["tau"] == 3
    assert results["pseudo_symmetric"] is True
    assert results["canonical_ideal_members"] == [0, 3, 4, 5, 7]
    assert results["witness_pair"] == [3, 2]


def test_sgp_info_symmetric(capsys):
    code, out, _ = run_cli(capsys, "sgp", "info", "--gens", "2,3")
    assert code == 0
    results = json.loads(out)["results"]
    assert results["symmetric"] is True and results["pseudo_symmetric"] is False


def test_sgp_info_bad_gcd_exit_2(capsys):
    code, _, err = run_cli(capsys, "sgp", "info", "--gens", "4,6")
    assert code == 2
    assert "gcd" in err


def test_enum_stars_345(capsys):
    code, out, _ = run_cli(capsys, "ring", "enum-stars", "--gens", "3,4,5", "--q", "2")
    assert code == 0
    results = json.loads(out)["results"]
    assert results["star_count"] == 3


def test_enum_stars_457(capsys):
    code, out, _ = run_cli(capsys, "ring", "enum-stars", "--gens", "4,5,7", "--q", "2")
    assert code == 0
    results = json.loads(out)["results"]
    assert results["star_count"] == 19
    tags = sorted(f["classification"] for f in results["families"])
    assert tags.count("unit_class_union_with_overring") == 16
    assert tags.count("identity") == 1
    assert tags.count("divisorial") == 1
    assert tags.count("all_but_canonical_class") == 1


def test_enum_stars_overring(capsys):
    code, out, _ = run_cli(capsys, "ring", "enum-stars", "--gens", "4,5,6,7", "--q", "2")
    assert code == 0
    assert json.loads(out)["results"]["star_count"] == 42


def test_enum_ideals(capsys):
    code, out, _ = run_cli(capsys, "ring", "enum-ideals", "--gens", "4,5,7", "--q", "2")
    assert code == 0
    results = json.loads(out)["results"]
    assert results["ideal_count"] == 19


def test_kunz_counterexample(capsys):
    code, out, _ = run_cli(
        capsys, "kunz", "counterexample", "--gens", "4,5,7", "--q", "2", "--jobs", "1"
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["results"]["star_count"] == 19
    assert payload["results"]["overring_star_count"] == 42
    assert set(payload["verdicts"].values()) == {"verified"}


def test_kunz_gate_exit_4(capsys):
    code, _, err = run_cli(capsys, "kunz", "counterexample", "--gens", "3,4,5", "--q", "2")
    assert code == 4


def test_kunz_lower_bound(capsys):
    code, out, _ = run_cli(capsys, "kunz", "lower-bound", "--n", "5", "--q", "2")
    assert code == 0
    results = json.loads(out)["results"]
    assert results["certified_lower_bound"] == 256
    assert results["formula_floor"] == 128


def test_kunz_subspace_orbits(capsys):
    code, out, _ = run_cli(capsys, "kunz", "subspace-orbits", "--n", "4", "--q", "3")
    assert code == 0
    results = json.loads(out)["results"]
    assert results["x_size"] == 12 and results["class_count"] == 6


def test_kunz_lemmas(capsys):
    code, out, _ = run_cli(capsys, "kunz", "lemmas", "--gens", "4,5,7", "--q", "2")
    assert code == 0
    assert set(json.loads(out)["verdicts"].values()) == {"verified"}


def test_budget_exit_3(capsys):
    code, _, err = run_cli(
        capsys,
        "ring", "enum-stars", "--gens", "4,5,7", "--q", "2", "--max-ideals", "3",
    )
    assert code == 3


def test_csv_output(capsys):
    code, out, _ = run_cli(
        capsys, "ring", "enum-stars", "--gens", "3,4,5", "--q", "2", "--out", "csv"
    )
    assert code == 0
    assert "results.star_count,3" in out
    assert out.startswith("key,value")
    assert "\r\n" in out


def test_md_output(capsys):
    code, out, _ = run_cli(
        capsys, "kunz", "subspace-orbits", "--n", "4", "--q", "2", "--out", "md"
    )
    assert code == 0
    assert out.startswith("| key | value |")
    assert "| results.class_count | 4 |" in out


def test_jobs_do_not_change_bytes(capsys):
    outputs = set()
    for jobs in ("1", "2", "4"):
        code, out, _ = run_cli(
            capsys,
            "kunz", "counterexample", "--gens", "4,5,7", "--q", "2", "--jobs", jobs,
        )
        assert code == 0
        outputs.add(out)
    assert len(outputs) == 1


def test_cache_roundtrip(tmp_path, capsys):
    args = ["ring", "enum-stars", "--gens", "3,5,7", "--q", "2",
            "--cache-dir", str(tmp_path)]
    code1, out1, _ = run_cli(capsys, *args)
    assert code1 == 0
    assert list(tmp_path.iterdir())
    code2, out2, _ = run_cli(capsys, *args)
    assert code2 == 0
    assert out1 == out2
    # and identical to the uncached run
    code3, out3, _ = run_cli(capsys, "ring", "enum-stars", "--gens", "3,5,7", "--q", "2")
    assert out3 == out1


def test_field_poly_flag(capsys):
    # two different irreducible moduli for F_9 give isomorphic fields, so
    # the star count must agree with the default choice
    code, out, _ = run_cli(
        capsys,
        "ring", "enum-stars", "--gens", "3,4,5", "--q", "9",
        "--field-poly", "2,1,1",
    )
    assert code == 0
    count_custom = json.loads(out)["results"]["star_count"]
    code, out, _ = run_cli(capsys, "ring", "enum-stars", "--gens", "3,4,5", "--q", "9")
    assert code == 0
    assert count_custom == json.loads(out)["results"]["star_count"] == 3


def test_timings_flag_populates(capsys):
    code, out, _ = run_cli(
        capsys, "sgp", "info", "--gens", "4,5,7", "--timings"
    )
    assert code == 0
    assert "total" in json.loads(out)["timings_ms"]
