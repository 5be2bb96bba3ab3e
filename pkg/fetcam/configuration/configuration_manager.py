import copy
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Optional

import yaml
from loguru import logger

from fetcam.array.tcam_array import ArrayConfig
from fetcam.array_types import TerminationGranularity
from fetcam.cell.divider import DividerParams
from fetcam.cell_types import CellDesign, CellEncodingError
from fetcam.configuration.configuration_types import ConfigurationError, InputFormatError
from fetcam.device import initialize_preset, preset_map
from fetcam.device.fefet import FeFetParams
from fetcam.device.mosfet import MosfetParams
from fetcam.device.presets import default_mosfets
from fetcam.device_types import DeviceError, DeviceKind, MosfetKind
from fetcam.performance.calibration import REFERENCE_FOM, FomTargets, calibrate
from fetcam.performance.constants import CellConstants
from fetcam.performance.timing import TimingParams, check_sense_threshold

# Sections whose keys are free-form device field overrides.
OPEN_SECTIONS = {"device.overrides.sg", "device.overrides.dg"}


def _per_design(values: dict[CellDesign, float]) -> dict[str, float]:
    return {design.label: values[design] for design in CellDesign}


DEFAULT_CONFIGURATION: dict[str, Any] = {
    "device": {
        "presets": {"sg": "sg14", "dg": "dg14"},
        "overrides": {"sg": {}, "dg": {}},
    },
    "divider": {
        "vdd": 0.8,
        "sg": {"v_sel": 0.8, "v_b": 0.0, "v_search": 0.8},
        "dg": {"v_sel": 2.0, "v_b": 0.25, "v_search": 2.0},
    },
    "mosfet": {
        kind.name.lower(): {"vth": params.vth, "r_on": params.r_on, "r_off": params.r_off,
                            "gate_capacitance": params.gate_capacitance}
        for kind, params in default_mosfets().items()
    },
    "timing": {
        "c_ml_per_cell": {"2SG-FeFET": 5.0e-17, "2DG-FeFET": 5.0e-17, "1.5T1SG-Fe": 3.0e-17, "1.5T1DG-Fe": 3.0e-17},
        "c_sl_per_cell": {"2SG-FeFET": 2.0e-17, "2DG-FeFET": 2.0e-17, "1.5T1SG-Fe": 2.0e-17, "1.5T1DG-Fe": 2.0e-17},
        "c_wire_per_cell": 2.0e-17,
        "c_sa_input": 5.0e-17,
        "sa_energy": 3.0e-17,
        "sa_threshold": 0.4,
        "sense_fraction": 0.5,
        "slack_fraction": 0.2,
        "write_pulse": 1.0e-8,
        "search_pulse": 5.0e-11,
        "trace_step": 2.0e-12,
    },
    "cells": {
        "area_um2": {"2SG-FeFET": 0.095, "2DG-FeFET": 0.204, "1.5T1SG-Fe": 0.108, "1.5T1DG-Fe": 0.156},
        "fe_write_energy": {"sg": 8.15e-16, "dg": 4.075e-16},
        "well_spacing_overhead": 0.0,
    },
    "array": {
        "rows": 64,
        "cols": 64,
        "driver_shared": False,
        "step1_miss_rate": 0.9,
        "early_termination": True,
        "termination_granularity": "row",
        "designs": [design.label for design in CellDesign],
    },
    "sweep": {
        "word_lengths": [16, 32, 64, 128],
    },
    "calibration": {
        "enabled": True,
        "word_len": 64,
        "targets": {
            "latency_one_step": _per_design(REFERENCE_FOM.latency_one_step),
            "latency_full": _per_design(REFERENCE_FOM.latency_full),
            "energy_one_step": _per_design(REFERENCE_FOM.energy_one_step),
            "energy_two_step": _per_design(REFERENCE_FOM.energy_two_step),
        },
    },
    "run": {
        "seed": 2023,
        "threads": 1,
        "random_queries": 16,
    },
}


@dataclass(frozen=True)
class RunConfig:
    """The run-level selections of a configuration."""
    designs: tuple[CellDesign, ...]
    rows: int
    cols: int
    driver_shared: bool
    step1_miss_rate: float
    early_termination: bool
    termination_granularity: TerminationGranularity
    word_lengths: tuple[int, ...]
    calibration_enabled: bool
    calibration_word_len: int
    seed: int
    threads: int
    random_queries: int


def _coerce(default: Any, value: Any, location: str) -> Any:
    if isinstance(default, bool):
        if not isinstance(value, bool):
            raise ConfigurationError(f"'{location}' must be true or false, got {value!r}")
        return value
    if isinstance(default, int):
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigurationError(f"'{location}' must be an integer, got {value!r}")
        return value
    if isinstance(default, float):
        # PyYAML reads exponents without a dot (1e-15) as strings.
        try:
            if isinstance(value, bool):
                raise ValueError
            return float(value)
        except (TypeError, ValueError):
            raise ConfigurationError(f"'{location}' must be a number, got {value!r}")
    if isinstance(default, str):
        if not isinstance(value, str):
            raise ConfigurationError(f"'{location}' must be a string, got {value!r}")
        return value
    if isinstance(default, list):
        if not isinstance(value, list):
            raise ConfigurationError(f"'{location}' must be a list, got {value!r}")
        if not default:
            return value
        return [_coerce(default[0], item, f"{location}[{index}]") for index, item in enumerate(value)]
    if isinstance(default, dict):
        return _merge(default, value, location)

    raise ConfigurationError(f"'{location}' has no known type")


def _merge(defaults: dict[str, Any], contents: Any, location: str) -> dict[str, Any]:
    """
    Merge configuration contents over their defaults.
    :param defaults: The default section.
    :param contents: The section as read, which may omit any key.
    :param location: The dotted section name used in error messages.
    :return: The merged section.
    """
    if contents is None:
        return copy.deepcopy(defaults)
    if not isinstance(contents, dict):
        raise ConfigurationError(f"Section '{location}' must be a mapping, got {contents!r}")

    merged = copy.deepcopy(defaults)
    for key, value in contents.items():
        key = str(key)
        child = f"{location}.{key}" if location else key
        if location in OPEN_SECTIONS:
            merged[key] = _coerce(0.0, value, child)
        elif key not in defaults:
            raise ConfigurationError(f"Unknown configuration field '{child}'")
        else:
            merged[key] = _coerce(defaults[key], value, child)
    return merged


def _per_design_values(section: dict[str, float], location: str) -> dict[CellDesign, float]:
    values = {}
    for label, value in section.items():
        try:
            values[CellDesign.from_label(label)] = value
        except CellEncodingError as err:
            raise ConfigurationError(f"'{location}': {err}")
    return values


class ConfigurationManager:
    """A manager for the simulator configuration file."""

    def __init__(self, configuration_file_path: Optional[Path] = None) -> None:
        """
        Initialize the configuration manager.
        :param configuration_file_path: The YAML (or JSON) configuration; the built-in defaults when None.
        """
        self.configuration_file_path = configuration_file_path

        # Keep the contents as written beside the merged, effective ones.
        self.original_configuration_contents = self.read_configuration()
        self.configuration_contents = _merge(DEFAULT_CONFIGURATION, self.original_configuration_contents, "")

    def read_configuration(self) -> dict:
        """
        Read the configuration from the configuration file.
        :return: The configuration as a dictionary.
        """
        if self.configuration_file_path is None:
            return {}

        with open(self.configuration_file_path, "r") as stream:
            try:
                contents = yaml.safe_load(stream)
            except yaml.YAMLError as err:
                mark = getattr(err, "problem_mark", None)
                where = f":{mark.line + 1}" if mark is not None else ""
                raise InputFormatError(f"{self.configuration_file_path}{where}: {err}")

        # An empty file means all defaults.
        if contents is None:
            contents = {}
        if not isinstance(contents, dict):
            raise ConfigurationError(f"{self.configuration_file_path}: the configuration must be a mapping")
        return contents

    def write_configuration(self, path: Path) -> None:
        """
        Write the effective configuration.
        :param path: The output file.
        :return: None.
        """
        with open(path, "w") as stream:
            yaml.safe_dump(self.configuration_contents, stream, sort_keys=False)

    def section(self, name: str) -> dict[str, Any]:
        return self.configuration_contents[name]

    def device_params(self, kind: DeviceKind) -> FeFetParams:
        """
        Build the FeFET parameters of a device family.
        :param kind: The device family.
        :return: The preset with its configured overrides applied.
        """
        device = self.section("device")
        name = device["presets"][kind.label]
        if name not in preset_map:
            raise ConfigurationError(f"'device.presets.{kind.label}': preset '{name}' not found")

        try:
            params = initialize_preset(name, device["overrides"][kind.label])
        except DeviceError as err:
            raise ConfigurationError(f"'device.overrides.{kind.label}': {err}")
        if params.device_kind is not kind:
            raise ConfigurationError(f"'device.presets.{kind.label}': preset '{name}' is a "
                                     f"{params.device_kind.name} device")
        return params

    def devices(self) -> dict[DeviceKind, FeFetParams]:
        return {kind: self.device_params(kind) for kind in DeviceKind}

    def mosfets(self) -> dict[MosfetKind, MosfetParams]:
        mosfet = self.section("mosfet")
        try:
            return {kind: MosfetParams(kind=kind, **mosfet[kind.name.lower()]) for kind in MosfetKind}
        except DeviceError as err:
            raise ConfigurationError(f"'mosfet': {err}")

    def divider_params(self, kind: DeviceKind) -> DividerParams:
        """
        Build the divider levels of a device family.

        R_N and R_P are the ON resistances of TN and TP, and the TML threshold
        is taken from the mosfet section.
        """
        divider = self.section("divider")
        mosfets = self.mosfets()
        levels = divider[kind.label]
        return DividerParams(vdd=divider["vdd"], v_sel=levels["v_sel"], v_b=levels["v_b"],
                             v_search=levels["v_search"], r_n=mosfets[MosfetKind.TN].r_on,
                             r_p=mosfets[MosfetKind.TP].r_on, tml_vth=mosfets[MosfetKind.TML].vth)

    def dividers(self) -> dict[DeviceKind, DividerParams]:
        return {kind: self.divider_params(kind) for kind in DeviceKind}

    def timing_params(self) -> TimingParams:
        timing = dict(self.section("timing"))
        timing["c_ml_per_cell"] = _per_design_values(timing["c_ml_per_cell"], "timing.c_ml_per_cell")
        timing["c_sl_per_cell"] = _per_design_values(timing["c_sl_per_cell"], "timing.c_sl_per_cell")
        params = TimingParams(**timing)
        check_sense_threshold(params, self.section("divider")["vdd"])
        return params

    def cell_constants(self) -> CellConstants:
        cells = self.section("cells")
        return CellConstants(area_um2=_per_design_values(cells["area_um2"], "cells.area_um2"),
                             fe_write_energy={kind: cells["fe_write_energy"][kind.label] for kind in DeviceKind},
                             well_spacing_overhead=cells["well_spacing_overhead"])

    def fom_targets(self) -> FomTargets:
        targets = self.section("calibration")["targets"]
        return FomTargets(**{name: _per_design_values(values, f"calibration.targets.{name}")
                             for name, values in targets.items()})

    def run_config(self) -> RunConfig:
        """
        Build the run-level selections.
        :return: The run configuration.
        """
        array = self.section("array")
        run = self.section("run")
        calibration = self.section("calibration")
        word_lengths = tuple(self.section("sweep")["word_lengths"])

        try:
            designs = tuple(CellDesign.from_label(label) for label in array["designs"])
        except CellEncodingError as err:
            raise ConfigurationError(f"'array.designs': {err}")
        try:
            granularity = TerminationGranularity[array["termination_granularity"].upper()]
        except KeyError:
            raise ConfigurationError(f"'array.termination_granularity' must be one of "
                                     f"{[g.name.lower() for g in TerminationGranularity]}")

        if not designs:
            raise ConfigurationError("'array.designs' must name at least one design")
        if not word_lengths or any(a >= b for a, b in zip(word_lengths, word_lengths[1:])) or word_lengths[0] < 1:
            raise ConfigurationError(f"'sweep.word_lengths' must be a non-empty ascending list, got {word_lengths}")
        if run["threads"] < 1 or run["random_queries"] < 1:
            raise ConfigurationError("'run.threads' and 'run.random_queries' must be at least 1")

        return RunConfig(designs=designs, rows=array["rows"], cols=array["cols"], driver_shared=array["driver_shared"],
                         step1_miss_rate=array["step1_miss_rate"], early_termination=array["early_termination"],
                         termination_granularity=granularity, word_lengths=word_lengths,
                         calibration_enabled=calibration["enabled"], calibration_word_len=calibration["word_len"],
                         seed=run["seed"], threads=run["threads"], random_queries=run["random_queries"])

    def effective_timing(self) -> TimingParams:
        """
        Get the timing parameters, calibrated when the calibration section is enabled.
        :return: The timing parameters.
        """
        timing = self.timing_params()
        run = self.run_config()
        if not run.calibration_enabled:
            return timing

        logger.info(f"Calibrating match-line and search-line loads at N = {run.calibration_word_len}")
        return calibrate(list(CellDesign), run.calibration_word_len, self.devices(), self.dividers(),
                         self.mosfets()[MosfetKind.TML], timing, self.fom_targets())

    def array_config(self, design: CellDesign, timing: TimingParams, rows: Optional[int] = None,
                     cols: Optional[int] = None, early_termination: Optional[bool] = None) -> ArrayConfig:
        """
        Build the array configuration of a design.
        :param design: The cell design.
        :param timing: The (possibly calibrated) timing parameters.
        :param rows: A row count overriding the configured one.
        :param cols: A column count overriding the configured one.
        :param early_termination: An early-termination switch overriding the configured one.
        :return: The array configuration.
        """
        run = self.run_config()
        return ArrayConfig(rows=run.rows if rows is None else rows, cols=run.cols if cols is None else cols,
                           design=design, dev=self.device_params(design.device_kind),
                           div=self.divider_params(design.device_kind), tml=self.mosfets()[MosfetKind.TML],
                           timing=timing, constants=self.cell_constants(), driver_shared=run.driver_shared,
                           step1_miss_rate=run.step1_miss_rate,
                           early_termination=run.early_termination if early_termination is None else
                           early_termination,
                           termination_granularity=run.termination_granularity)
