"""Figure presets tests"""

import pytest

from lspair.core import Topology
from lspair.experiments import load_figure_points
from lspair.policy import PolicyKind
from lspair.presets import FIGURE_IDS, FigurePreset, get_preset, iter_presets
from lspair.traffic import DemandPattern


def test_figure_ids() -> None:
    """Presets are listed in figure order"""
    assert FIGURE_IDS == ("fig3-1", "fig3-2", "fig4", "fig5", "fig6", "fig7-1", "fig7-2")
    assert [preset.figure_id for preset in iter_presets()] == list(FIGURE_IDS)


def test_unknown_figure() -> None:
    """Unknown ids list the valid ones"""
    with pytest.raises(KeyError, match="fig3-1, fig3-2"):
        get_preset("fig8")


@pytest.mark.parametrize("preset", list(iter_presets()), ids=FIGURE_IDS)
def test_every_point_loads(preset: FigurePreset) -> None:
    """Every sweep point is a valid scenario for every compared policy"""
    points = load_figure_points(preset)
    assert [value for value, _ in points] == list(preset.values)
    policies = preset.reduction if preset.reduction is not None else preset.policies
    for _, scenario_file in points:
        for policy in policies:
            scenario_file.to_scenario(policy_kind=policy).validate()


def test_anti_phase_preset() -> None:
    """Two 20/20 pairs, H = 6"""
    (_, scenario_file), *_ = load_figure_points(get_preset("fig3-2"), values=[12])
    scenario = scenario_file.to_scenario()
    assert scenario.topology == Topology.build([(20, 20), (20, 20)])
    assert scenario.arrival.holding_time == 6.0
    assert scenario.pattern == DemandPattern.cyclic((12, 1), (1, 12))


def test_delay_preset() -> None:
    """Pair delays 0.1 s and 0.3 s, permitted delays 0.1 s or 0.3 s"""
    preset = get_preset("fig7-1")
    (_, scenario_file), *_ = load_figure_points(preset, values=[0.7])
    scenario = scenario_file.to_scenario()
    assert [pair.delay for pair in scenario.topology] == [0.1, 0.3]
    assert scenario.pattern == DemandPattern.cyclic((4, 2), (2, 4))
    assert scenario.delay_mix is not None
    assert (scenario.delay_mix.short_fraction, scenario.delay_mix.short_permitted) == (0.7, 0.1)
    assert scenario.delay_mix.long_permitted == 0.3
    assert preset.policies == (PolicyKind.METHOD_B, PolicyKind.METHOD_C)
    assert preset.values == (0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0)


def test_capacity_split_corners() -> None:
    """All capacity on one pair is still a valid setup for both methods"""
    points = load_figure_points(get_preset("fig5"), values=[0, 40])
    for value, scenario_file in points:
        topology = scenario_file.to_scenario().topology
        assert topology.total_up == topology.total_down == 40.0
        assert topology[0].max_up == value
        scenario_file.to_scenario(policy_kind=PolicyKind.METHOD_B).validate()


def test_pair_count_preset() -> None:
    """n pairs of 20/20"""
    for count, scenario_file in load_figure_points(get_preset("fig6")):
        assert scenario_file.to_scenario().topology == Topology.build([(20, 20)] * count)


def test_reduction_presets() -> None:
    """Reduction figures compare a reference against a test policy"""
    assert get_preset("fig4").reduction == (PolicyKind.METHOD_A, PolicyKind.METHOD_B)
    assert get_preset("fig7-2").reduction == (PolicyKind.METHOD_B, PolicyKind.METHOD_C)
    assert [preset.figure_id for preset in iter_presets() if preset.is_reduction] == ["fig4", "fig7-2"]


def test_default_loads() -> None:
    """Mean inter-arrival times of the shipped presets"""
    loads = {preset.figure_id: preset.document["traffic"]["mean_interarrival"] for preset in iter_presets()}
    assert loads == {
        "fig3-1": 1.0,
        "fig3-2": 1.0,
        "fig4": 1.0,
        "fig5": 1.0,
        "fig6": 0.6,
        "fig7-1": 2.0,
        "fig7-2": 2.0,
    }
    assert get_preset("fig4").values == (0.8, 1.0, 1.2, 1.4)


def test_overrides_apply_to_every_point() -> None:
    """Overrides go before the sweep assignment"""
    points = load_figure_points(get_preset("fig4"), overrides=["run.total_requests=5000", "traffic.holding_time=3"])
    assert {scenario_file.run.total_requests for _, scenario_file in points} == {5000}
    assert [scenario_file.traffic.mean_interarrival for _, scenario_file in points] == list(get_preset("fig4").values)
    assert {scenario_file.traffic.holding_time for _, scenario_file in points} == {3.0}


def test_base_document_is_a_copy() -> None:
    """Presets are never mutated"""
    preset = get_preset("fig3-1")
    document = preset.base_document()
    document["topology"].clear()
    assert len(preset.document["topology"]) == 2
