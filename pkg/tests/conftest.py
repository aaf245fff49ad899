import pytest

from bnexplain.model import EvidenceSet

from helpers import (
    TRAUMA_EVIDENCE,
    WORKED_EVIDENCE,
    build_and_gate_network,
    build_blanket_showcase_network,
    build_flow_network,
    build_trauma_network,
    build_worked_example_network,
)


@pytest.fixture(scope="session")
def worked_net():
    return build_worked_example_network()


@pytest.fixture(scope="session")
def worked_evidence(worked_net):
    return EvidenceSet.build(worked_net, WORKED_EVIDENCE)


@pytest.fixture(scope="session")
def blanket_net():
    return build_blanket_showcase_network()


@pytest.fixture(scope="session")
def flow_net():
    return build_flow_network()


@pytest.fixture(scope="session")
def and_gate_net():
    return build_and_gate_network()


@pytest.fixture(scope="session")
def trauma_net():
    return build_trauma_network()


@pytest.fixture(scope="session")
def trauma_evidence(trauma_net):
    return EvidenceSet.build(trauma_net, TRAUMA_EVIDENCE)
