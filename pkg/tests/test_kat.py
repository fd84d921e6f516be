"""Vector suites: committed files are byte-stable, verification catches
tampering, and the line format is strict."""

import json

import pytest

from mscikdf import (
    VectorFormatError,
    kat_generate,
    kat_verify,
    read_vectors,
    write_vectors,
)
from mscikdf.kat import (
    CORE_PASSPHRASES,
    FIXED_ROOT_32,
    KatRecord,
    SUITES,
    make_record,
)

from conftest import VECTOR_DIR

ZERO_RECORD_LINE = (
    '{"root_hex":"0000000000000000000000000000000000000000000000000000000000000000",'
    '"passphrase_utf8":"",'
    '"hardening_profile":"test-vectors",'
    '"context_text_form":"mscikdf:v1/ed25519/edwards25519//0",'
    '"expected_state_fingerprint_hex":"8fb37676347c218d",'
    '"expected_secret_hex":"e5b948a88983392bee500d20d737e6555f067b21217b6a131fa99e301fe31adf",'
    '"expected_public_hex":"48d2185bfb6dbc6e4d0a0ccc2b1a5fe011e86877d3c63a7acf66ac73eb2f9fdc"}'
)


def test_suite_sizes():
    assert sorted(SUITES) == ["core", "rotation", "slots"]
    assert len(kat_generate("core")) == 18
    assert len(kat_generate("slots")) == 6
    assert len(kat_generate("rotation")) == 3


def test_core_grid_shape():
    records = kat_generate("core")
    roots = {r.root_hex for r in records}
    assert roots == {bytes(16).hex(), bytes(32).hex(), FIXED_ROOT_32.hex()}
    passphrases = {r.passphrase_utf8 for r in records}
    assert passphrases == set(CORE_PASSPHRASES)
    assert all(r.hardening_profile == "test-vectors" for r in records)


def test_zero_record_is_frozen():
    records = kat_generate("core")
    zero = [
        r for r in records
        if r.root_hex == bytes(32).hex()
        and r.passphrase_utf8 == ""
        and "ed25519" in r.context_text_form
    ]
    assert len(zero) == 1
    assert zero[0].to_json_line() == ZERO_RECORD_LINE


def test_generated_suites_self_verify():
    for suite in ("core", "slots", "rotation"):
        report = kat_verify(kat_generate(suite))
        assert report.all_passed, report.summary()


def test_committed_files_match_regeneration():
    for suite, filename in (
        ("core", "core-v1.jsonl"),
        ("slots", "slots-v1.jsonl"),
        ("rotation", "rotation-v1.jsonl"),
    ):
        expected = "".join(r.to_json_line() + "\n" for r in kat_generate(suite))
        committed = (VECTOR_DIR / filename).read_bytes()
        assert committed == expected.encode("utf-8"), f"{filename} drifted"


def test_committed_files_verify():
    for filename in ("core-v1.jsonl", "slots-v1.jsonl", "rotation-v1.jsonl"):
        report = kat_verify(read_vectors(VECTOR_DIR / filename))
        assert report.all_passed, f"{filename}: {report.summary()}"


def test_rotation_records_have_no_public():
    for record in read_vectors(VECTOR_DIR / "rotation-v1.jsonl"):
        assert record.expected_public_hex is None
        assert "expected_public_hex" not in record.to_json_line()


def test_tampered_secret_fails_exactly_there():
    records = kat_generate("slots")
    line = records[2].to_json_line()
    body = json.loads(line)
    flipped = "0" if body["expected_secret_hex"][0] != "0" else "1"
    body["expected_secret_hex"] = flipped + body["expected_secret_hex"][1:]
    tampered = KatRecord.from_json_line(json.dumps(body, separators=(",", ":")))
    report = kat_verify(records[:2] + [tampered] + records[3:])
    assert not report.all_passed
    assert [f.index for f in report.failures] == [2]
    assert report.failures[0].failed_field == "secret"


def test_wrong_profile_fails_at_fingerprint():
    good = make_record(
        root=bytes(32),
        passphrase="",
        profile="test-vectors",
        context_text="mscikdf:v1/ed25519/edwards25519//0",
    )
    body = json.loads(good.to_json_line())
    body["hardening_profile"] = "default"
    lying = KatRecord.from_json_line(json.dumps(body, separators=(",", ":")))
    report = kat_verify([lying])
    assert not report.all_passed
    assert report.failures[0].failed_field == "fingerprint"


def test_fingerprint_checked_before_secret():
    good = make_record(
        root=bytes(32),
        passphrase="pw",
        profile="test-vectors",
        context_text="mscikdf:v1/x25519/curve25519//0",
    )
    body = json.loads(good.to_json_line())
    body["expected_state_fingerprint_hex"] = "0" * 16
    body["expected_secret_hex"] = "0" * 64
    doubly_wrong = KatRecord.from_json_line(json.dumps(body, separators=(",", ":")))
    report = kat_verify([doubly_wrong])
    assert report.failures[0].failed_field == "fingerprint"


@pytest.mark.parametrize(
    "line,fragment",
    [
        ("{not json", "invalid JSON"),
        ('{"root_hex":"00"}', "missing"),
        (ZERO_RECORD_LINE.replace('"8fb37676347c218d"', '"8FB37676347C218D"'), "lowercase"),
        (ZERO_RECORD_LINE.replace('"8fb37676347c218d"', '"8fb37676347c21"'), "fingerprint"),
        (ZERO_RECORD_LINE.replace('"test-vectors"', "17"), "string"),
        (ZERO_RECORD_LINE[:-1] + ',"extra":1}', "unknown keys"),
    ],
)
def test_record_parse_errors(line, fragment):
    with pytest.raises(VectorFormatError) as exc:
        KatRecord.from_json_line(line, lineno=4)
    assert exc.value.line == 4
    assert fragment.lower() in str(exc.value).lower()


def test_read_vectors_reports_line_numbers(tmp_path):
    path = tmp_path / "bad.jsonl"
    good = kat_generate("slots")[0].to_json_line()
    path.write_text(good + "\n" + "{broken\n", encoding="utf-8")
    with pytest.raises(VectorFormatError) as exc:
        read_vectors(path)
    assert exc.value.line == 2


def test_read_vectors_rejects_blank_lines(tmp_path):
    path = tmp_path / "blank.jsonl"
    good = kat_generate("slots")[0].to_json_line()
    path.write_text(good + "\n\n" + good + "\n", encoding="utf-8")
    with pytest.raises(VectorFormatError) as exc:
        read_vectors(path)
    assert exc.value.line == 2


def test_write_read_round_trip(tmp_path):
    records = kat_generate("rotation")
    path = tmp_path / "out.jsonl"
    write_vectors(path, records)
    raw = path.read_bytes()
    assert raw.endswith(b"\n") and b"\r" not in raw
    assert read_vectors(path) == records


def test_unknown_suite():
    with pytest.raises(VectorFormatError):
        kat_generate("everything")


@pytest.mark.slow
def test_default_profile_record_verifies():
    records = read_vectors(VECTOR_DIR / "default-profile-v1.jsonl")
    assert len(records) == 1
    assert records[0].hardening_profile == "default"
    report = kat_verify(records)
    assert report.all_passed, report.summary()
