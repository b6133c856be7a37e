import json

import pytest
from hypothesis import given, settings, strategies as st

from conftest import FIXTURES
from freymod.eliminate import run_elimination
from freymod.errors import CertificateDigestError, DataIntegrityError, NewformDataError
from freymod.ingest import (
    certificate_body_bytes,
    load_newforms,
    parse_newforms,
    read_certificate,
    record_to_dict,
    verify_certificate,
    write_certificate,
    write_newforms,
)


def doc(*records):
    return {"format_version": 1, "newforms": list(records)}


def rational(label="g", **ap):
    return {"label": label, "level": 608, "field_poly": [0, 1], "ap": {k[1:]: [v] for k, v in ap.items()}}


def test_load_fixture(fixtures_nf):
    recs = load_newforms(fixtures_nf)
    assert [r.label for r in recs] == sorted(r.label for r in recs)
    by = {r.label: r for r in recs}
    g = by["synthetic.rational.1"]
    assert g.degree == 1 and g.ap(3).coords == (1,)
    h = by["synthetic.nebentypus.1"]
    assert h.eps(3).coords == (-1, 0) and h.eps(7).coords == (1, 0)


def test_rational_record_loaded():
    (g,) = parse_newforms(doc(rational(a3=1)))
    assert g.degree == 1
    assert g.eps(5).coords == (1,)


def test_ramanujan_gate():
    with pytest.raises(NewformDataError, match="Ramanujan") as exc:
        parse_newforms(doc(rational("bad", a3=4)))
    assert exc.value.label == "bad"
    # a_3 = 3 is allowed: 3 <= 2 sqrt(3) ~ 3.46
    parse_newforms(doc(rational(a3=3)))
    # quadratic: a_3 = 2 + x in Q(sqrt 2) has norm 2; a_3 = 4 + x has norm 14 > 12
    quad = {"label": "q", "level": 1, "field_poly": [-2, 0, 1], "ap": {"3": [2, 1]}}
    parse_newforms(doc(quad))
    quad["ap"]["3"] = [4, 1]
    with pytest.raises(NewformDataError):
        parse_newforms(doc(quad))


def test_character_order_gate():
    rec = rational(a3=1)
    rec.update(char_modulus=7, char_order=3, eps_values={str(u): [1] for u in range(1, 7)})
    with pytest.raises(NewformDataError, match="power of two"):
        parse_newforms(doc(rec))


def test_other_record_errors():
    with pytest.raises(DataIntegrityError, match="duplicate"):
        parse_newforms(doc(rational("x", a3=1), rational("x", a3=0)))
    with pytest.raises(NewformDataError, match="not prime"):
        parse_newforms(doc(rational(a9=1)))
    with pytest.raises(NewformDataError, match="monic"):
        parse_newforms(doc({"label": "m", "level": 1, "field_poly": [1, 2], "ap": {}}))
    with pytest.raises(NewformDataError, match="eps_values"):
        parse_newforms(doc({"label": "e", "level": 1, "field_poly": [0, 1], "char_modulus": 8, "ap": {}}))
    with pytest.raises(NewformDataError, match="algebraic integer"):
        parse_newforms(doc(rational(a3="1/2")))
    with pytest.raises(DataIntegrityError, match="version"):
        parse_newforms({"format_version": 99, "newforms": []})
    with pytest.raises(DataIntegrityError, match="a_5"):
        parse_newforms(doc(rational(a3=1)))[0].ap(5)


def test_parse_error(tmp_path):
    p = tmp_path / "broken.nf"
    p.write_text("{not json")
    with pytest.raises(DataIntegrityError, match="parse"):
        load_newforms(p)


@settings(max_examples=30, deadline=None)
@given(st.permutations(range(3)))
def test_order_independent(perm):
    raw = json.loads((FIXTURES / "fixtures.nf").read_text())
    shuffled = {**raw, "newforms": [raw["newforms"][i] for i in perm]}
    base = {r.key() for r in parse_newforms(raw)}
    assert {r.key() for r in parse_newforms(shuffled)} == base
    assert [r.key() for r in parse_newforms(shuffled)] == [r.key() for r in parse_newforms(raw)]


def test_newform_roundtrip(tmp_path, fixtures_nf):
    recs = load_newforms(fixtures_nf)
    out = tmp_path / "copy.nf"
    write_newforms(recs, out)
    assert [r.key() for r in load_newforms(out)] == [r.key() for r in recs]
    assert record_to_dict(recs[0])["label"] == recs[0].label


@pytest.fixture
def certificate(fixtures_nf):
    return run_elimination([3, 5], 19, load_newforms(fixtures_nf), input_digest="abc")


def test_certificate_roundtrip(tmp_path, certificate):
    path = tmp_path / "cert.json"
    write_certificate(certificate, path)
    assert read_certificate(path) == certificate


def test_certificate_tamper(tmp_path, certificate):
    path = tmp_path / "cert.json"
    write_certificate(certificate, path)
    docu = json.loads(path.read_text())
    docu["body"]["d"] = 43
    path.write_text(json.dumps(docu))
    with pytest.raises(CertificateDigestError):
        verify_certificate(path)


def test_certificate_body_stable(tmp_path, certificate, fixtures_nf):
    again = run_elimination([3, 5], 19, load_newforms(fixtures_nf), input_digest="abc")
    a = write_certificate(certificate, tmp_path / "a.json", timestamp="2000-01-01T00:00:00+00:00")
    b = write_certificate(again, tmp_path / "b.json", timestamp="2030-01-01T00:00:00+00:00")
    assert a == b == certificate_body_bytes(again)
    da, db = (json.loads((tmp_path / n).read_text()) for n in ("a.json", "b.json"))
    assert da["envelope"]["digest"] == db["envelope"]["digest"]
    assert da["envelope"]["timestamp"] != db["envelope"]["timestamp"]
