import json

from cycliczeta.cli import main

SCHEMA_KEYS = {"p", "r", "F", "N", "L", "frobenius_polynomial", "U",
               "counts", "timings_ms", "strategy"}


def test_json_output_and_roundtrip(capsys):
    rc = main(["--p", "13", "--r", "2", "--poly", "1,1,0,1",
               "--verify", "2", "--output", "json"])
    assert rc == 0
    report = json.loads(capsys.readouterr().out)
    assert set(report) == SCHEMA_KEYS
    assert report["L"] == [1, 4, 13]
    assert report["frobenius_polynomial"] == [13, 4, 1]
    assert report["U"] == [1]
    assert report["counts"] == {"1": 18, "2": 180}
    # round-trip: recompute from the parsed report and compare
    rc2 = main(["--p", str(report["p"]), "--r", str(report["r"]),
                "--poly", ",".join(str(c) for c in report["F"]),
                "--output", "json"])
    assert rc2 == 0
    again = json.loads(capsys.readouterr().out)
    assert again["L"] == report["L"]
    assert again["frobenius_polynomial"] == report["frobenius_polynomial"]


def test_plain_output_matches_json_content(capsys):
    main(["--p", "13", "--r", "2", "--poly", "1,1,0,1", "--output", "json"])
    report = json.loads(capsys.readouterr().out)
    rc = main(["--p", "13", "--r", "2", "--poly", "1,1,0,1", "--timing"])
    assert rc == 0
    out = capsys.readouterr().out
    assert f"L coefficients = {report['L']}" in out
    assert f"frobenius polynomial coefficients = {report['frobenius_polynomial']}" in out
    assert "strategy = naive" in out


def test_validation_exit_code(capsys):
    rc = main(["--p", "7", "--r", "5", "--poly", "1,0,0,0,0,1"])
    assert rc == 2
    err = capsys.readouterr().err
    assert "PTooSmall" in err and "125" in err


def test_not_prime_exit_code(capsys):
    rc = main(["--p", "15", "--r", "2", "--poly", "1,1,0,1"])
    assert rc == 2


def test_internal_error_exit_code(capsys):
    # N too small to pin the trace lift: an internal computation error
    rc = main(["--p", "211", "--r", "2", "--poly", "1,1,0,0,0,1", "--N", "1"])
    assert rc == 3
    assert "LiftAmbiguous" in capsys.readouterr().err


def test_n_override_flag(capsys):
    rc = main(["--p", "211", "--r", "2", "--poly", "1,2,0,1",
               "--N", "3", "--output", "json"])
    assert rc == 0
    report = json.loads(capsys.readouterr().out)
    assert report["N"] == 3
