import json
import os

import pytest

import vpe

FIXTURE = json.dumps(
    {
        "images": {
            "a.png": {
                "objdet": {
                    "dog": [{"box": [0.1, 0.2, 0.3, 0.6], "confidence": 0.9}],
                    "cat": [{"box": [0.6, 0.2, 0.9, 0.6], "confidence": 0.8}],
                },
                "vqa": {"is the dog happy?": "yes"},
            }
        }
    }
)


def test_format_program_is_canonical():
    assert vpe.format_program("objectEval( img,'dog' );countEval(img,'dog','==1')") == (
        "objectEval(img, 'dog')\ncountEval(img, 'dog', '==1')"
    )


def test_parse_error_carries_position():
    with pytest.raises(vpe.ParseError) as info:
        vpe.format_program("objectEval(img, 'dog')\ncountEval(img, 'dog')")
    assert info.value.line == 2
    assert info.value.code == "parse-error"
    assert isinstance(info.value, vpe.VpeError)


def test_validate_program():
    assert vpe.validate_program("objectEval(img, 'dog')") == []
    diags = vpe.validate_program("vqa(img, 'q?', 'yes|no', 'maybe')")
    assert any(d["severity"] == "error" for d in diags)


def test_quantization_round_trip():
    assert all(vpe.quantize(vpe.dequantize(b)) == b for b in range(100))
    assert abs(vpe.dequantize(vpe.quantize(0.123)) - 0.123) <= 0.005


def test_evaluate_with_fixture():
    backend = vpe.FixtureBackend.from_json(FIXTURE)
    report = vpe.evaluate(
        backend,
        "a.png",
        "objectEval(img, 'dog')\nspatialEval(img, 'dog', 'cat', 'left')\nobjectEval(img, 'horse')",
        prompt="a dog left of a cat",
    )
    assert [r["score"] for r in report["results"]] == [1, 1, 0]
    assert report["score"] == pytest.approx(2 / 3)


def test_invalid_threshold_raises():
    backend = vpe.FixtureBackend.from_json(FIXTURE)
    with pytest.raises(vpe.VpeError) as info:
        vpe.evaluate(backend, "a.png", "objectEval(img, 'dog')", scale_tau=0.5)
    assert info.value.code == "out-of-range"


def test_corpus_sizes():
    assert len(vpe.generate_corpus(0, "text")) == 403
    assert len(vpe.generate_corpus(0)) == 3803
    with pytest.raises(vpe.VpeError):
        vpe.generate_corpus(0, "colour")


def test_statistics():
    assert vpe.spearman_rho([1, 2, 3], [3, 2, 1]) == pytest.approx(-1.0)
    assert vpe.spearman_rho([2, 2, 2], [1, 2, 3]) is None
    assert vpe.cohen_kappa(["1", "0"], ["1", "0"]) == 1.0
    assert vpe.krippendorff_alpha([[1.0, 1.0, 0.0, 0.0], [1.0, 1.0, 0.0, 1.0]]) == pytest.approx(8 / 15)
    assert vpe.krippendorff_alpha([[1.0, None, 0.0], [1.0, 2.0, 0.0]], "interval") == pytest.approx(1.0)
    assert f"{vpe.row_average([97, 47, 23, 11, 9]):.1f}" == "37.4"


@pytest.mark.skipif("VPE_TEST_DATA_DIR" not in os.environ, reason="test data dir not configured")
def test_golden_fixture_loads():
    backend = vpe.FixtureBackend.load(os.path.join(os.environ["VPE_TEST_DATA_DIR"], "golden", "fixture.json"), True)
    report = vpe.evaluate(backend, "g01.png", "objectEval(img, 'dog')")
    assert 0.0 <= report["score"] <= 1.0
