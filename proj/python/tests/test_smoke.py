# Copyright 2026 The ghznet Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import math
import pathlib

import pytest

import ghznet

SCENARIOS = pathlib.Path(__file__).resolve().parents[2] / "scenarios"
RING = """
node 0 1 2 3 4 5
edge 0 1
edge 1 2
edge 2 3
edge 3 4
edge 4 5
edge 5 0
block 0 1 2 3
block 3 4 5 0
"""


def test_ghz_amplitudes():
    s = ghznet.prepare_ghz(3)
    assert s.num_qubits == 3
    assert abs(s[0] - 1 / math.sqrt(2)) < 1e-12
    assert abs(s[7] - 1 / math.sqrt(2)) < 1e-12
    assert sum(abs(a) ** 2 for a in s.amplitudes) == pytest.approx(1.0, abs=1e-12)


def test_bell_measurement_and_frame_restore_input():
    psi = ghznet.prepare_arbitrary(0.6, 0.8j)
    joint = ghznet.tensor(psi, ghznet.prepare_ghz(3))
    for flip in (0, 1):
        for sign in (0, 1):
            p = ghznet.project_bell(joint, 0, 1, ghznet.BellOutcome(flip, sign))
            assert p.probability == pytest.approx(0.25, abs=1e-12)
            for b in (0, 1):
                x = ghznet.project_x(p.state, 0, b)
                frame = ghznet.outcome_to_frame(ghznet.BellOutcome(flip, sign), b)
                fixed = ghznet.apply_frame(x.state, frame, 0)
                assert ghznet.overlap_fidelity(fixed, psi) == pytest.approx(1.0, abs=1e-9)


def test_parity_channels_decode_each_record():
    recs = [ghznet.OutcomeRecord(t, ghznet.BellOutcome(t % 2, (t // 2) % 2), [t % 2]) for t in (1, 2, 3, 4)]
    msgs = ghznet.encode_all_channels(recs)
    assert [m.channel for m in msgs] == ["E", "E1", "E2", "E3", "E4"]
    for r in recs:
        assert ghznet.reconstruct_record(msgs, r.terminal) == r
    assert ghznet.ParityMessage.parse(msgs[2].serialize()) == msgs[2]


def test_exhaustive_round_is_perfect():
    rng = ghznet.RandomSource(3)
    inst = ghznet.build_instance(3, ghznet.random_inputs(3, rng))
    for chirality in (ghznet.Chirality.CLOCKWISE, ghznet.Chirality.COUNTERCLOCKWISE):
        count, worst = ghznet.min_branch_fidelity(inst, ghznet.RoutingConfig(3, chirality))
        assert count == 512
        assert worst == pytest.approx(1.0, abs=1e-9)
    branches = ghznet.enumerate_branches(inst, ghznet.RoutingConfig(3))
    assert len(branches) == 512
    assert sum(b.probability for b in branches) == pytest.approx(1.0, abs=1e-12)
    assert len(branches[0].messages) == 4


def test_graph_network_recovery():
    topo = ghznet.NetworkTopology.parse(RING)
    plus = ghznet.InputAmplitudes(1 / math.sqrt(2), 1 / math.sqrt(2))
    net = ghznet.prepare_graph_network(topo, plus)
    assert net.all_stabilizers_hold()
    rng = ghznet.RandomSource(1)
    repaired, reported, report = ghznet.recover(net, {1}, rng=rng)
    assert report.outcome == "recovered"
    assert report.stabilizers_hold
    assert repaired.status[1] == ghznet.NodeStatus.SUBSTITUTED
    assert ghznet.criticality_check(topo, set()) == ghznet.Criticality.RECOVERABLE
    with pytest.raises(ghznet.InputLost):
        ghznet.excise_node(net, 0, rng)


def test_bound_and_channels():
    assert ghznet.bound_threshold(3) == pytest.approx(2.1384, abs=1e-12)
    assert ghznet.channel_fidelity("measure_and_resend") == pytest.approx(0.5, abs=1e-12)
    assert ghznet.channel_fidelity("replacement") == pytest.approx(0.25, abs=1e-12)
    base = ghznet.baseline_no_entanglement(3)
    assert base.satisfied and base.sum == pytest.approx(1.5, abs=1e-12)
    ent = ghznet.entangled_protocol_bound(3)
    assert not ent.satisfied and ent.sum == pytest.approx(3.0, abs=1e-9)


def test_scenario_reports_are_deterministic():
    path = str(SCENARIOS / "two_failures.scn")
    text, code = ghznet.run_scenario_file(path)
    assert code == 0
    assert "VERDICT final_stabilizers PASS" in text.splitlines()
    assert ghznet.run_scenario_file(path) == (text, code)
    with pytest.raises(ValueError):
        ghznet.run_scenario_file(str(SCENARIOS / "missing.scn"))
