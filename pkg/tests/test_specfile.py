import json
import random
from fractions import Fraction

import pytest

from shallowcast import NetworkSpec, SpecFileError, dump_spec_file, load_spec_file
from shallowcast.specfile import default_names, parse_spec_document, spec_document

from conftest import random_sustainable_spec

F = Fraction

THREE_SITE_DOC = {
    "sites": [
        {"name": "v1", "uplink": "2", "rate": "1"},
        {"name": "v2", "uplink": "10", "rate": "3"},
        {"name": "v3", "uplink": "6", "rate": "5"},
    ]
}


def test_parse_basic_document():
    spec, names = parse_spec_document(THREE_SITE_DOC)
    assert names == ("v1", "v2", "v3")
    assert spec.uplink == (F(2), F(10), F(6))
    assert spec.rates == (F(1), F(3), F(5))
    assert spec.downlink == (None, None, None)  # omitted means unbounded


def test_downlink_parsed_when_present():
    doc = {"sites": [{"name": "a", "uplink": "1", "rate": "1", "downlink": "7/2"},
                     {"name": "b", "uplink": "1", "rate": "0"}]}
    spec, _ = parse_spec_document(doc)
    assert spec.downlink == (F(7, 2), None)


@pytest.mark.parametrize(
    "doc",
    [
        [],
        {"sites": []},
        {"sites": "nope"},
        {"sites": [{"uplink": "1", "rate": "1"}]},  # missing name
        {"sites": [{"name": "a", "rate": "1"}]},  # missing uplink
        {"sites": [{"name": "a", "uplink": "1"}]},  # missing rate
        {"sites": [{"name": "a", "uplink": "1", "rate": "-1"}]},
        {"sites": [{"name": "a", "uplink": "1", "rate": "1", "downlink": 3}]},
        {"sites": [{"name": "a", "uplink": "1", "rate": "1"},
                   {"name": "a", "uplink": "1", "rate": "1"}]},  # duplicate name
        {"sites": [{"name": "a", "uplink": "1", "rate": "1"}], "extra": 1},
    ],
)
def test_malformed_documents_rejected(doc):
    with pytest.raises(SpecFileError):
        parse_spec_document(doc)


def test_error_messages_carry_site_context():
    doc = {"sites": [{"name": "hub", "uplink": "1", "rate": "nope"}]}
    with pytest.raises(SpecFileError, match=r"sites\[0\] \(hub\)"):
        parse_spec_document(doc)


def test_load_reports_json_line_context(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text('{\n  "sites": [\n', encoding="utf-8")
    with pytest.raises(SpecFileError, match="line 3"):
        load_spec_file(path)


def test_load_missing_file(tmp_path):
    with pytest.raises(SpecFileError):
        load_spec_file(tmp_path / "absent.json")


def test_file_roundtrip(tmp_path):
    path = tmp_path / "net.json"
    path.write_text(json.dumps(THREE_SITE_DOC), encoding="utf-8")
    spec, names = load_spec_file(path)

    out = tmp_path / "again.json"
    dump_spec_file(spec, names, out)
    spec2, names2 = load_spec_file(out)
    assert spec2 == spec
    assert names2 == names


def test_roundtrip_canonicalizes_rate_strings():
    doc = {"sites": [{"name": "a", "uplink": "0.25", "rate": "6/4", "downlink": "2.5"},
                     {"name": "b", "uplink": "3", "rate": "0"}]}
    spec, names = parse_spec_document(doc)
    rendered = spec_document(spec, names)
    assert rendered["sites"][0] == {"name": "a", "uplink": "1/4", "rate": "3/2", "downlink": "5/2"}
    assert "downlink" not in rendered["sites"][1]
    spec2, _ = parse_spec_document(rendered)
    assert spec2 == spec


def test_random_specs_roundtrip():
    rng = random.Random(47)
    for _ in range(40):
        spec = random_sustainable_spec(rng, max_n=12)
        names = default_names(spec.n)
        spec2, names2 = parse_spec_document(spec_document(spec, names))
        assert spec2 == spec
        assert names2 == names


def test_default_names():
    assert default_names(3) == ("v1", "v2", "v3")
