import random

import pytest

from docgen import DocGen
from streamcheck.dsl import (ModelDocument, load_model, parse_model, serialize_model)
from streamcheck.errors import ModelFormatError

from conftest import MODEL_FILES, fixture_text


def test_fixture_files_parse_clean():
    base = ModelDocument()
    for name in MODEL_FILES:
        result = parse_model(fixture_text(name), base=base)
        assert result.ok, f"{name}: {[str(d) for d in result.diagnostics]}"
        base.merge(result.document)


def test_fixture_round_trip():
    base = ModelDocument()
    for name in MODEL_FILES:
        result = parse_model(fixture_text(name), base=base)
        assert result.ok
        again = parse_model(serialize_model(result.document), base=base)
        assert again.ok, f"{name}: {[str(d) for d in again.diagnostics]}"
        assert again.document == result.document, name
        base.merge(result.document)


def test_parse_reports_located_diagnostics():
    result = parse_model("component Broken {\n  input x bool\n}\n")
    assert not result.ok
    d = result.diagnostics[0]
    assert d.line == 2 and "':'" in d.message


def test_parser_recovers_at_next_top_level_item():
    text = """
component Bad { input x : }

component Good weak {
  input x : bool
  output y : bool
  states Run init
  transition Run -> Run { y := x }
}
"""
    result = parse_model(text)
    assert not result.ok
    assert "Good" in result.document.components


def test_unresolved_references_are_diagnosed():
    result = parse_model("refinement R { abstract Nowhere }")
    assert any("Nowhere" in d.message for d in result.diagnostics)


def test_duplicate_names_are_diagnosed():
    text = "type T = bool\ntype T = real\n"
    result = parse_model(text)
    assert any("duplicate" in d.message.lower() or "already" in d.message.lower()
               for d in result.diagnostics)


def test_semantic_validation_surfaces_as_diagnostics():
    text = """
component Bad {
  input x : bool
  output y : bool init false
  states Run init
  transition Run -> Run { y := z }
}
"""
    result = parse_model(text)
    assert any("'z'" in d.message for d in result.diagnostics)


def test_load_model_raises_on_diagnostics(tmp_path):
    p = tmp_path / "bad.scm.txt"
    p.write_text("component {", encoding="utf-8")
    with pytest.raises(ModelFormatError):
        load_model(p)


def test_base_document_resolves_cross_file_names():
    first = parse_model("""
component A weak {
  input x : bool
  output y : bool
  states Run init
  transition Run -> Run { y := x }
}
""")
    assert first.ok
    second = parse_model("relation R RI when x\nrefinement Z { abstract A }",
                         base=first.document)
    assert second.ok
    assert second.document.refinements["Z"].abstract == "A"


def test_random_documents_round_trip_small():
    rng = random.Random(2024)
    for _ in range(50):
        doc = DocGen(rng).document()
        text = serialize_model(doc)
        result = parse_model(text)
        assert result.ok, [str(d) for d in result.diagnostics] + [text]
        assert result.document == doc, text


def test_parser_total_on_random_bytes_small():
    rng = random.Random(99)
    for _ in range(500):
        blob = bytes(rng.randrange(256) for _ in range(rng.randrange(0, 120)))
        result = parse_model(blob.decode("latin-1"))
        assert isinstance(result.document, ModelDocument)


def test_parser_total_on_keyword_soup():
    rng = random.Random(7)
    words = ["component", "type", "states", "transition", "{", "}", "->", ":=",
             "when", "init", "input", "output", "bool", "int", "[", "]", "..",
             "1", "x", ",", ";", "galois", "universe", "in", "relation"]
    for _ in range(300):
        text = " ".join(rng.choice(words) for _ in range(rng.randrange(0, 40)))
        result = parse_model(text)
        assert isinstance(result.document, ModelDocument)
