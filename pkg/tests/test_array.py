from dataclasses import replace
from itertools import product

import numpy as np
import pytest
from loguru import logger

from fetcam.array import tcam_array
from fetcam.array.grid_io import format_row, parse_grid, parse_queries, random_queries, random_words, read_grid, \
    write_grid
from fetcam.array.tcam_array import ArrayConfig, program, search, wells_and_drivers, worst_case_latency_scenario
from fetcam.array.waveform import scenario_instance, waveform_trace
from fetcam.array_types import ArrayShapeError, Scenario, ScenarioError, TerminationGranularity
from fetcam.cell_types import CellDesign, CellEncodingError, TernaryBit
from fetcam.configuration.configuration_manager import ConfigurationManager
from fetcam.configuration.configuration_types import ConfigurationError, InputFormatError
from fetcam.device_types import PolarizationState
from fetcam.performance.energy import write_voltage_table

MANAGER = ConfigurationManager()
TIMING = MANAGER.timing_params()
CALIBRATED = MANAGER.effective_timing()
FINE_STEP = TIMING.trace_step / 8
PAIRED = (CellDesign.ONE_FIVE_SG, CellDesign.ONE_FIVE_DG)
RANDOM_INSTANCES = 1000


def make_config(design: CellDesign, rows: int, cols: int, **kwargs) -> ArrayConfig:
    return replace(MANAGER.array_config(design, TIMING, rows=rows, cols=cols), **kwargs)


def oracle(words: np.ndarray, query: np.ndarray) -> np.ndarray:
    return np.all((words == TernaryBit.DONT_CARE.value) | (words == query[np.newaxis, :]), axis=1)


def test_wildcard_match():
    words = parse_grid(["10X1"])
    query = parse_queries(["1001"])[0]
    for design in CellDesign:
        config = make_config(design, 1, 4)
        outcome = search(config, program(config, words).state, query)
        assert outcome.matched_rows == [0]


def test_all_dont_care_row_matches():
    words = np.full((1, 8), TernaryBit.DONT_CARE.value, dtype=np.int8)
    rng = np.random.default_rng(3)
    for design in CellDesign:
        config = make_config(design, 1, 8)
        state = program(config, words).state
        for query in random_queries(rng, 4, 8):
            assert search(config, state, query).match_mask.tolist() == [True]


def test_exhaustive_four_cell_rows():
    # Every stored row of four symbols, one array row each.
    words = np.array(list(product(range(len(TernaryBit)), repeat=4)), dtype=np.int8)
    queries = np.array(list(product(range(2), repeat=4)), dtype=np.int8)
    for design in CellDesign:
        config = make_config(design, len(words), 4)
        state = program(config, words).state
        model = config.energy_model()
        for query in queries:
            outcome = search(config, state, query, model)
            assert np.array_equal(outcome.match_mask, oracle(words, query)), (design, format_row(query))


def test_random_arrays_match_oracle():
    rng = np.random.default_rng(2023)
    for design in CellDesign:
        config = make_config(design, 64, 64)
        model = config.energy_model()
        for _ in range(RANDOM_INSTANCES):
            words = random_words(rng, 64, 64)
            state = program(config, words).state

            # One query drawn from a stored row so that at least that row matches.
            row = int(rng.integers(0, 64))
            query = words[row].copy()
            wildcards = query == TernaryBit.DONT_CARE.value
            query[wildcards] = rng.integers(0, 2, size=int(wildcards.sum()))
            outcome = search(config, state, query, model)
            assert np.array_equal(outcome.match_mask, oracle(words, query)), design
            assert outcome.match_mask[row]

            query = random_queries(rng, 1, 64)[0]
            assert np.array_equal(search(config, state, query, model).match_mask, oracle(words, query)), design


def test_early_termination_properties():
    rng = np.random.default_rng(5)
    for design in PAIRED:
        config = make_config(design, 4, 8)
        without = replace(config, early_termination=False)
        model = config.energy_model()
        for _ in range(RANDOM_INSTANCES):
            words = random_words(rng, 4, 8)
            query = random_queries(rng, 1, 8)[0]
            state = program(config, words).state

            terminating = search(config, state, query, model)
            full = search(without, state, query, model)

            assert np.array_equal(terminating.match_mask, full.match_mask)
            assert terminating.total_energy.precharge == full.total_energy.precharge
            for short_row, full_row in zip(terminating.per_row, full.per_row):
                assert short_row.energy.precharge == full_row.energy.precharge

            if any(row.terminated_at_step == 1 for row in terminating.per_row):
                assert terminating.total_energy.total < full.total_energy.total
            else:
                assert terminating.total_energy.total == full.total_energy.total


def test_step_one_global_termination():
    words = np.zeros((3, 4), dtype=np.int8)
    words[:, 0] = TernaryBit.ONE.value
    query = np.zeros(4, dtype=np.int8)
    for granularity in TerminationGranularity:
        config = make_config(CellDesign.ONE_FIVE_DG, 3, 4, termination_granularity=granularity)
        model = config.energy_model()
        outcome = search(config, program(config, words).state, query, model)

        assert outcome.global_termination
        assert outcome.total_latency == model.latency.one_step
        for row in outcome.per_row:
            assert row.terminated_at_step == 1
            assert row.executed_steps == 1
            assert row.energy == model.row_energy(words[row.row], query, 1)


def test_global_granularity_runs_step_two_for_every_row():
    words = np.zeros((2, 4), dtype=np.int8)
    words[0, 0] = TernaryBit.ONE.value
    query = np.zeros(4, dtype=np.int8)

    row_config = make_config(CellDesign.ONE_FIVE_SG, 2, 4)
    global_config = replace(row_config, termination_granularity=TerminationGranularity.GLOBAL)
    state = program(row_config, words).state

    per_row = search(row_config, state, query)
    everywhere = search(global_config, state, query)
    assert [row.executed_steps for row in per_row.per_row] == [1, 2]
    assert [row.executed_steps for row in everywhere.per_row] == [2, 2]
    assert per_row.sel_b_active and everywhere.sel_b_active
    assert per_row.per_row[0].latency < per_row.per_row[1].latency
    assert np.array_equal(per_row.match_mask, [False, True])


def test_program_write_steps_and_latency():
    words = parse_grid(["01X1", "X0X0"])
    for design in CellDesign:
        config = make_config(design, 2, 4)
        result = program(config, words)
        assert result.write_steps == (3 if design.is_paired else 2)
        assert result.write_latency == pytest.approx(result.write_steps * TIMING.write_pulse)
        assert result.write_energy > 0
        assert np.array_equal(result.state.stored, words)
        assert np.all(result.state.ml_voltages == config.div.vdd)


def test_program_all_dont_care_two_fefet():
    config = make_config(CellDesign.TWO_FEFET_DG, 2, 3)
    state = program(config, np.full((2, 3), TernaryBit.DONT_CARE.value, dtype=np.int8)).state
    assert np.all(state.polarization == PolarizationState.HVT.value)


def test_program_realizes_encoding():
    words = parse_grid(["01X"])
    state = program(make_config(CellDesign.TWO_FEFET_SG, 1, 3), words).state
    assert state.polarization[0].tolist() == [[0, 2], [2, 0], [0, 0]]

    state = program(make_config(CellDesign.ONE_FIVE_SG, 1, 4), parse_grid(["01X1"])).state
    assert state.polarization[0, :, 0].tolist() == [0, 2, 1, 2]


def test_program_drives_the_write_voltage_table(monkeypatch):
    for design in CellDesign:
        config = make_config(design, 1, 4)
        cell = config.cell()
        table = write_voltage_table(design, config.dev, config.div)
        for bit in TernaryBit:
            assert tuple(table[bit][line] for line in cell.gate_lines) == cell.write_gate_voltages(bit)

    def ones_written_as_zeros(design, dev, div):
        table = write_voltage_table(design, dev, div)
        table[TernaryBit.ONE] = table[TernaryBit.ZERO]
        return table

    monkeypatch.setattr(tcam_array, "write_voltage_table", ones_written_as_zeros)
    for design in CellDesign:
        config = make_config(design, 1, 4)
        program(config, parse_grid(["0X00"]))
        with pytest.raises(CellEncodingError, match="realize the 1 encoding"):
            program(config, parse_grid(["0100"]))


def test_reprogram_is_stateless():
    words = parse_grid(["1X01", "0011"])
    config = make_config(CellDesign.ONE_FIVE_DG, 2, 4)
    first, second = program(config, words), program(config, words)
    assert np.array_equal(first.state.polarization, second.state.polarization)
    assert first.write_energy == second.write_energy


def test_shape_errors():
    with pytest.raises(ArrayShapeError):
        make_config(CellDesign.ONE_FIVE_SG, 2, 3)
    with pytest.raises(ArrayShapeError):
        make_config(CellDesign.TWO_FEFET_SG, 0, 4)
    with pytest.raises(ConfigurationError):
        make_config(CellDesign.TWO_FEFET_SG, 1, 4, step1_miss_rate=1.5)

    config = make_config(CellDesign.TWO_FEFET_SG, 1, 4)
    state = program(config, parse_grid(["0101"])).state
    with pytest.raises(ArrayShapeError):
        program(config, parse_grid(["010"]))
    with pytest.raises(ArrayShapeError):
        search(config, state, np.zeros(5, dtype=np.int8))
    with pytest.raises(CellEncodingError):
        search(config, state, parse_grid(["01X1"])[0])


def test_worst_case_latency_scenario():
    for design in CellDesign:
        for cols in (2, 64):
            config = make_config(design, 2, cols)
            state, query = worst_case_latency_scenario(config)
            outcome = search(config, state, query)
            assert outcome.pull_down_counts == [1, 1]
            assert not outcome.match_mask.any()
            if design.is_paired:
                assert all(row.pull_downs == (0, 1) for row in outcome.per_row)
                assert all(row.terminated_at_step == 2 for row in outcome.per_row)
                assert outcome.total_latency == config.energy_model().latency.full


def test_wells_and_drivers():
    counts = {design: wells_and_drivers(make_config(design, 64, 64)) for design in CellDesign}
    assert counts[CellDesign.ONE_FIVE_DG].p_well_count == 128
    assert counts[CellDesign.TWO_FEFET_DG].p_well_count == 128
    assert counts[CellDesign.ONE_FIVE_SG].p_well_count == 0
    assert counts[CellDesign.TWO_FEFET_SG].p_well_count == 0
    assert counts[CellDesign.ONE_FIVE_DG].hv_driver_count == 192

    for design in CellDesign:
        shared = wells_and_drivers(make_config(design, 64, 64, driver_shared=True))
        assert shared.hv_driver_count / counts[design].hv_driver_count == 0.5
        assert shared.p_well_count == counts[design].p_well_count

    # The paired DG-FeFET array uses M rows of wells, the 2DG-FeFET array N columns.
    assert wells_and_drivers(make_config(CellDesign.ONE_FIVE_DG, 8, 32)).p_well_count == 16
    assert wells_and_drivers(make_config(CellDesign.TWO_FEFET_DG, 8, 32)).p_well_count == 64


def test_driver_sharing_warning():
    messages = []
    handler = logger.add(messages.append, level="WARNING")
    try:
        wells_and_drivers(make_config(CellDesign.ONE_FIVE_DG, 4, 4, driver_shared=True))
        assert not messages
        wells_and_drivers(make_config(CellDesign.TWO_FEFET_SG, 4, 4, driver_shared=True))
        assert len(messages) == 1
    finally:
        logger.remove(handler)


def sense_threshold(config: ArrayConfig) -> float:
    return config.timing.sense_fraction * config.div.vdd


def test_waveform_match_stays_high():
    for design in PAIRED:
        single, state, query = scenario_instance(make_config(design, 4, 8), Scenario.MATCH)
        trace = waveform_trace(single, state, query, TIMING.trace_step)
        assert np.all(trace.ml >= sense_threshold(single))
        assert np.all(trace.sa == 1)
        assert trace.sel_b.max() > 0


def test_waveform_step_one_miss():
    for design, timing in product(PAIRED, (TIMING, CALIBRATED)):
        config = MANAGER.array_config(design, timing, rows=4, cols=8)
        single, state, query = scenario_instance(config, Scenario.STEP1_MISS)
        trace = waveform_trace(single, state, query, FINE_STEP)
        fall = int(np.argmax(trace.sa[0] == 0))
        step_one_end = trace.step_starts[0] + trace.pulse

        assert trace.sa[0, -1] == 0
        assert trace.step_starts[0] < trace.time[fall] < step_one_end
        assert trace.sel_a[fall] == single.div.v_sel
        assert trace.ml[0, fall] < sense_threshold(single)
        # Every row missed in step 1, so SeL_b never rises.
        assert np.all(trace.sel_b == 0)


def test_waveform_step_two_miss():
    for design, timing in product(PAIRED, (TIMING, CALIBRATED)):
        config = MANAGER.array_config(design, timing, rows=4, cols=8)
        single, state, query = scenario_instance(config, Scenario.STEP2_MISS)
        trace = waveform_trace(single, state, query, FINE_STEP)
        before_step_two = trace.time < trace.step_starts[1]
        step_two_end = trace.step_starts[1] + trace.pulse
        last_in_step_two = int(np.flatnonzero(trace.time < step_two_end)[-1])
        fall = int(np.argmax(trace.sa[0] == 0))

        assert np.all(trace.ml[0, before_step_two] == single.div.vdd)
        assert trace.step_starts[1] < trace.time[fall] < step_two_end
        assert trace.ml[0, last_in_step_two] < sense_threshold(single)
        assert trace.sa[0, last_in_step_two] == 0
        assert trace.sel_b[last_in_step_two] == single.div.v_sel


def test_waveform_holds_after_the_select_line_drops():
    single, state, query = scenario_instance(make_config(CellDesign.ONE_FIVE_DG, 1, 8), Scenario.STEP1_MISS)
    trace = waveform_trace(single, state, query, FINE_STEP)
    after = trace.time >= trace.step_starts[0] + trace.pulse
    assert np.all(trace.ml[0, after] == trace.ml[0, after][0])
    assert trace.pulse == pytest.approx((1 + TIMING.slack_fraction) * trace.window)


def test_sense_threshold_follows_sense_fraction():
    config = make_config(CellDesign.ONE_FIVE_SG, 1, 4)
    with pytest.raises(ConfigurationError, match="sa_threshold"):
        replace(config, timing=replace(TIMING, sense_fraction=0.6))
    replace(config, timing=replace(TIMING, sense_fraction=0.6, sa_threshold=0.48))


def test_waveform_errors():
    with pytest.raises(ScenarioError):
        scenario_instance(make_config(CellDesign.TWO_FEFET_DG, 1, 4), Scenario.MATCH)

    single, state, query = scenario_instance(make_config(CellDesign.ONE_FIVE_SG, 1, 4), Scenario.MATCH)
    with pytest.raises(ConfigurationError):
        waveform_trace(single, state, query, 0.0)


def test_waveform_csv(tmp_path):
    single, state, query = scenario_instance(make_config(CellDesign.ONE_FIVE_SG, 1, 4), Scenario.STEP1_MISS)
    trace = waveform_trace(single, state, query, TIMING.trace_step)
    path = tmp_path / "trace.csv"
    trace.write_csv(path)

    lines = path.read_text().splitlines()
    assert lines[0] == "time_s,sel_a_v,sel_b_v,ml_row0_v,sa_row0"
    assert len(lines) == len(trace.time) + 1


def test_parse_grid_skips_comments_and_blank_lines():
    codes = parse_grid(["# stored words", "", "10X1", "  0x00  "])
    assert codes.tolist() == [[1, 0, 2, 1], [0, 2, 0, 0]]


def test_parse_errors_name_the_line():
    with pytest.raises(InputFormatError, match="contents.txt:2:"):
        parse_grid(["0101", "01A1"], "contents.txt")
    with pytest.raises(InputFormatError, match=":2: expected 4 symbols"):
        parse_grid(["0101", "01"])
    with pytest.raises(InputFormatError):
        parse_queries(["01X1"])
    with pytest.raises(InputFormatError):
        parse_grid(["# nothing"])


def test_grid_file_round_trip(tmp_path):
    words = random_words(np.random.default_rng(9), 6, 10)
    path = tmp_path / "contents.txt"
    write_grid(path, words)
    assert np.array_equal(read_grid(path), words)


def test_random_instances_are_seeded():
    first = random_words(np.random.default_rng(1), 4, 4)
    second = random_words(np.random.default_rng(1), 4, 4)
    assert np.array_equal(first, second)
    assert set(np.unique(random_queries(np.random.default_rng(1), 50, 8))) <= {0, 1}
