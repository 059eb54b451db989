import os
import random
import tempfile

import pytest

import unitk


@pytest.fixture(scope="module")
def pg16():
    return unitk.build_pg2(16)


@pytest.fixture(scope="module")
def pg4():
    return unitk.build_pg2(4)


def test_plane_shape(pg16):
    assert (pg16.v, pg16.b, pg16.order) == (273, 273, 16)
    assert all(len(b) == 17 for b in pg16.blocks)
    report = unitk.validate_design(pg16, 17, 1)
    assert report["valid"] and report["symmetric"]
    assert report["pairs_checked"] == 273 * 272 // 2


def test_group_orders(pg4, pg16):
    assert unitk.group_order(pg4, self_dual=False) == 120960
    assert unitk.group_order(pg16) == 34217164800


def test_hermitian(pg16):
    h = unitk.hermitian_unital(4)
    assert len(h) == 65
    assert unitk.is_unital(pg16, h)
    assert unitk.tangent_secant_counts(pg16, h) == (65, 208)
    assert unitk.stabilizer_order(pg16, h) == 249600


def test_random_set_is_not_unital(pg16):
    rng = random.Random(5)
    s = rng.sample(range(273), 65)
    assert not unitk.is_unital(pg16, s)
    with pytest.raises(unitk.ContractError):
        unitk.tangent_secant_counts(pg16, s)


def test_errors(pg16):
    with pytest.raises(unitk.ConfigError):
        unitk.build_pg2(6)
    with pytest.raises(unitk.Error):
        unitk.is_unital(pg16, [1, 1, 2])
    with pytest.raises(unitk.ParseError):
        unitk.load_plane("0 1 x\n", "royle", order=4)


def test_native_round_trip(pg4):
    text = unitk.write_native(pg4)
    again = unitk.load_plane(text, "native", order=4)
    assert again.blocks == pg4.blocks


def test_embedded_catalogs():
    counts = {name: len(unitk.embedded_catalog(name)) for name in ("royle", "moorhouse", "dreadnaut")}
    assert counts == {"royle": 148, "moorhouse": 138, "dreadnaut": 256}
    records, issues = unitk.parse_unital_catalog(unitk.embedded_catalog_text("royle"))
    assert not issues
    assert all(len(r["points"]) == 65 for r in records)


def test_classify_relabelled(pg16):
    h = unitk.hermitian_unital(4)
    classes = unitk.classify(pg16, [h, h])
    assert len(classes) == 1
    assert classes[0]["members"] == [0, 1]
    assert classes[0]["order"] == 249600


def test_exhaustive_search_pg4(pg4):
    records, stats = unitk.find_unitals(pg4, exhaustive=True)
    assert len(records) == 1
    assert records[0]["order"] == 432
    assert "classes" in stats


def test_cli():
    with tempfile.TemporaryDirectory() as root:
        code, out, err = unitk.run_cli(["--workspace", root, "verify", "--plane", "pg2_16", "--hermitian"])
        assert code == 0, err
        assert "PASS hermitian" in out
        assert os.path.exists(os.path.join(root, "logs", "unitk.log"))
        code, _, err = unitk.run_cli(["--workspace", root, "construct", "6"])
        assert code == 2 and "error:" in err
