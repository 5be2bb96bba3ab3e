from enum import Enum


class ArrayShapeError(Exception):
    """An array dimension, pairing or query length specific error."""
    pass


class ScenarioError(Exception):
    """A waveform scenario specific error."""
    pass


class TerminationGranularity(Enum):
    """
    How step-1 mismatches stop the second search step.

    ROW stops step 2 for every row that already missed; GLOBAL runs step 2 for
    all rows unless every row missed in step 1.
    """
    ROW = 1
    GLOBAL = 2


class Scenario(Enum):
    """The three single-row cases of a two-step search."""
    MATCH = 1
    STEP1_MISS = 2
    STEP2_MISS = 3

    @property
    def label(self) -> str:
        return self.name.lower()
