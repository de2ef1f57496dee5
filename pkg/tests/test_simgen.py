import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rpminer import run_pipeline
from rpminer.log_model import UiType, parse_log, write_log
from rpminer.simgen import (
    RandomValue,
    RoutineModel,
    Variant,
    automatability_model,
    click,
    copy_cell,
    cpn1_model,
    edit_field,
    generate,
    multi_variant_model,
    paste_field,
    read_truth,
    write_truth,
)


def test_cpn1_size():
    log, truth = generate(cpn1_model(), 100)
    assert len(log) == 1400
    assert len(truth) == 1400
    assert len(truth.boundaries()) == 100
    assert all(b - a + 1 == 14 for a, b in truth.boundaries())


def test_zero_instances():
    log, truth = generate(cpn1_model(), 0)
    assert len(log) == 0 and len(truth) == 0


def test_negative_instances():
    with pytest.raises(ValueError):
        generate(cpn1_model(), -1)


def test_same_seed_same_bytes(tmp_path):
    texts = [write_log(generate(multi_variant_model(seed=5, noise_rate=0.1), 40)[0]) for _ in range(2)]
    assert texts[0] == texts[1]
    assert write_log(generate(multi_variant_model(seed=6), 40)[0]) != texts[0]


def test_log_round_trips_through_csv():
    log, _ = generate(automatability_model(), 5)
    assert parse_log(write_log(log)) == log


def test_truth_round_trip(tmp_path):
    _, truth = generate(multi_variant_model(noise_rate=0.2), 30)
    path = tmp_path / "truth.csv"
    write_truth(truth, path)
    assert read_truth(path) == truth


def test_truth_rejects_bad_header(tmp_path):
    path = tmp_path / "truth.csv"
    path.write_text("a,b\n")
    with pytest.raises(ValueError):
        read_truth(path)


def test_noise_is_navigation_between_instances():
    log, truth = generate(cpn1_model(noise_rate=0.5), 50)
    noise = [i for i, sid in enumerate(truth.segment_ids) if sid is None]
    assert noise
    assert all(log[i].ui_type is UiType.NAVIGATE_TO for i in noise)
    assert len({log[i].params["url"] for i in noise}) == len(noise)
    # contiguous planted instances
    for a, b in truth.boundaries():
        assert all(truth.segment_ids[i] == truth.segment_ids[a] for i in range(a, b + 1))


def test_variant_weights_respected():
    _, truth = generate(multi_variant_model(), 200)
    variants = [truth.variant_ids[a] for a, _ in truth.boundaries()]
    shares = {v: variants.count(v) / len(variants) for v in set(variants)}
    assert len(shares) == 3
    assert all(s >= 0.1 for s in shares.values())


def test_automatability_model_plants_fourteen_edits():
    log, truth = generate(automatability_model(), 1)
    edits = [i for i, e in enumerate(log) if e.ui_type is UiType.EDIT_FIELD]
    assert len(edits) == 14
    assert sum(truth.automatable[i] for i in edits) == 10


def test_model_validation():
    with pytest.raises(ValueError):
        RoutineModel(variants=[])
    with pytest.raises(ValueError):
        Variant("empty", ())


@settings(max_examples=10)
@given(st.integers(0, 10_000))
def test_random_edits_are_flagged_non_deterministic(seed):
    actions = (
        click("Start"),
        copy_cell("A", "name"),
        paste_field("Name"),
        edit_field("Name", RandomValue(6)),
        click("Done"),
    )
    model = RoutineModel([Variant("v", actions)], seed=seed)
    log, _ = generate(model, 8)
    (spec,) = run_pipeline(log).routines
    assert spec.flags == (True, True, True, False, True)
