// Copyright 2026 The ghznet Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "ghznet/analysis.hpp"
#include "ghznet/butterfly.hpp"
#include "ghznet/coding.hpp"
#include "ghznet/qsim.hpp"
#include "ghznet/recovery.hpp"
#include "ghznet/scenario.hpp"

namespace py = pybind11;
using namespace ghznet;

namespace {

void bind_qsim(py::module_ &m) {
    py::class_<RandomSource>(m, "RandomSource")
        .def(py::init<std::uint64_t>(), py::arg("seed"))
        .def("uniform", &RandomSource::uniform)
        .def_property_readonly("seed", &RandomSource::seed);

    py::class_<StateVector>(m, "StateVector")
        .def(py::init<>())
        .def_static("from_amplitudes", &StateVector::from_amplitudes, py::arg("amplitudes"))
        .def_static("basis", &StateVector::basis, py::arg("num_qubits"), py::arg("index"))
        .def_property_readonly("num_qubits", &StateVector::num_qubits)
        .def_property_readonly("amplitudes", &StateVector::amplitudes)
        .def("norm_squared", &StateVector::norm_squared)
        .def("__len__", &StateVector::size)
        .def("__getitem__", [](const StateVector &s, std::size_t i) {
            if (i >= s.size()) throw py::index_error();
            return s[i];
        });

    py::enum_<Pauli>(m, "Pauli").value("I", Pauli::I).value("X", Pauli::X).value("Z", Pauli::Z).value("XZ", Pauli::XZ);

    py::class_<BellOutcome>(m, "BellOutcome")
        .def(py::init([](Bit flip, Bit sign) { return BellOutcome{flip, sign}; }), py::arg("flip") = 0,
             py::arg("sign") = 0)
        .def_readwrite("flip", &BellOutcome::flip)
        .def_readwrite("sign", &BellOutcome::sign)
        .def(py::self == py::self)
        .def("__repr__", [](const BellOutcome &b) {
            return "BellOutcome(" + std::to_string(b.flip) + ", " + std::to_string(b.sign) + ")";
        });

    py::class_<Projection>(m, "Projection")
        .def_readonly("probability", &Projection::probability)
        .def_readonly("state", &Projection::state);

    m.def("prepare_arbitrary", &prepare_arbitrary, py::arg("alpha"), py::arg("beta"));
    m.def("prepare_plus", &prepare_plus);
    m.def("prepare_ghz", &prepare_ghz, py::arg("n"));
    m.def("tensor", &tensor);
    m.def("apply_pauli", &apply_pauli, py::arg("state"), py::arg("which"), py::arg("qubit"));
    m.def("apply_cphase", &apply_cphase, py::arg("state"), py::arg("i"), py::arg("j"));
    m.def("project_bell", &project_bell, py::arg("state"), py::arg("q1"), py::arg("q2"), py::arg("outcome"));
    m.def("project_x", &project_x, py::arg("state"), py::arg("qubit"), py::arg("outcome"));
    m.def("project_z", &project_z, py::arg("state"), py::arg("qubit"), py::arg("outcome"));
    m.def(
        "measure_bell",
        [](const StateVector &s, std::size_t q1, std::size_t q2, RandomSource &rng) {
            auto r = measure_bell(s, q1, q2, rng);
            return py::make_tuple(r.outcome, r.state);
        },
        py::arg("state"), py::arg("q1"), py::arg("q2"), py::arg("rng"));
    m.def(
        "measure_x",
        [](const StateVector &s, std::size_t q, RandomSource &rng) {
            auto r = measure_x(s, q, rng);
            return py::make_tuple(r.outcome, r.state);
        },
        py::arg("state"), py::arg("qubit"), py::arg("rng"));
    m.def("overlap_fidelity", &overlap_fidelity);
    m.def(
        "fidelity_with_pure",
        [](const StateVector &s, std::vector<std::size_t> kept, const StateVector &target) {
            return fidelity_with_pure(s, kept, target);
        },
        py::arg("state"), py::arg("kept"), py::arg("target"));
}

void bind_coding(py::module_ &m) {
    py::class_<PauliFrame>(m, "PauliFrame")
        .def(py::init([](Bit x, Bit z) { return PauliFrame{x, z}; }), py::arg("x") = 0, py::arg("z") = 0)
        .def_readwrite("x", &PauliFrame::x)
        .def_readwrite("z", &PauliFrame::z)
        .def_property_readonly("name", &PauliFrame::name)
        .def("as_pauli", &PauliFrame::as_pauli)
        .def(py::self == py::self)
        .def("__repr__", [](const PauliFrame &f) { return "PauliFrame(" + f.name() + ")"; });
    m.def("outcome_to_frame", &outcome_to_frame, py::arg("a"), py::arg("b"));
    m.def("compose_frames", &compose_frames);
    m.def("apply_frame", &apply_frame, py::arg("state"), py::arg("frame"), py::arg("qubit"));

    py::class_<OutcomeRecord>(m, "OutcomeRecord")
        .def(py::init([](TerminalId t, BellOutcome a, std::vector<Bit> b) { return OutcomeRecord{t, a, std::move(b)}; }),
             py::arg("terminal"), py::arg("a"), py::arg("b"))
        .def_readwrite("terminal", &OutcomeRecord::terminal)
        .def_readwrite("a", &OutcomeRecord::a)
        .def_readwrite("b", &OutcomeRecord::b)
        .def(py::self == py::self);

    py::class_<ParityMessage>(m, "ParityMessage")
        .def_property_readonly("channel", [](const ParityMessage &p) { return p.channel.name(); })
        .def_readonly("a", &ParityMessage::a)
        .def_readonly("b", &ParityMessage::b)
        .def("payload_bits", &ParityMessage::payload_bits)
        .def("serialize", &ParityMessage::serialize)
        .def_static("parse", &ParityMessage::parse)
        .def(py::self == py::self);
    m.def("encode_all_channels", [](const std::vector<OutcomeRecord> &r) { return encode_all_channels(r); });
    m.def(
        "reconstruct_record",
        [](const std::vector<ParityMessage> &msgs, TerminalId j) { return reconstruct_record(msgs, j); },
        py::arg("messages"), py::arg("terminal"));

    py::enum_<Chirality>(m, "Chirality")
        .value("CLOCKWISE", Chirality::kClockwise)
        .value("COUNTERCLOCKWISE", Chirality::kCounterclockwise);
    m.def("parse_chirality", &parse_chirality);

    py::class_<RoutingConfig>(m, "RoutingConfig")
        .def(py::init<std::size_t, Chirality>(), py::arg("n"), py::arg("chirality") = Chirality::kClockwise)
        .def_property_readonly("n", &RoutingConfig::n)
        .def("held_copy", &RoutingConfig::held_copy)
        .def("measured_copies", &RoutingConfig::measured_copies)
        .def("receiver_of", &RoutingConfig::receiver_of);
}

void bind_butterfly(py::module_ &m) {
    py::class_<InputAmplitudes>(m, "InputAmplitudes")
        .def(py::init([](Complex a, Complex b) { return InputAmplitudes{a, b}; }), py::arg("alpha"), py::arg("beta"))
        .def_readwrite("alpha", &InputAmplitudes::alpha)
        .def_readwrite("beta", &InputAmplitudes::beta);
    m.def("random_inputs", &random_inputs, py::arg("count"), py::arg("rng"));

    py::class_<ButterflyInstance>(m, "ButterflyInstance")
        .def_readonly("n", &ButterflyInstance::n)
        .def_readonly("inputs", &ButterflyInstance::input_amplitudes)
        .def_readwrite("ghz_copies", &ButterflyInstance::ghz_copies);
    m.def(
        "build_instance",
        [](std::size_t n, const std::vector<InputAmplitudes> &in) { return build_instance(n, in); }, py::arg("n"),
        py::arg("inputs"));

    py::class_<ProtocolTranscript>(m, "ProtocolTranscript")
        .def_readonly("n", &ProtocolTranscript::n)
        .def_readonly("branch_index", &ProtocolTranscript::branch_index)
        .def_readonly("probability", &ProtocolTranscript::probability)
        .def_readonly("outcomes", &ProtocolTranscript::outcomes)
        .def_readonly("messages", &ProtocolTranscript::messages)
        .def_readonly("own_frames", &ProtocolTranscript::own_frames)
        .def_readonly("corrections", &ProtocolTranscript::corrections)
        .def_readonly("received", &ProtocolTranscript::received)
        .def_readonly("final_states", &ProtocolTranscript::final_states)
        .def_readonly("final_fidelities", &ProtocolTranscript::final_fidelities)
        .def("format", &format_transcript);

    m.def("outcome_bit_count", &outcome_bit_count);
    m.def("run_round", &run_round, py::arg("instance"), py::arg("routing"), py::arg("rng"));
    m.def("run_branch", &run_branch, py::arg("instance"), py::arg("routing"), py::arg("branch_index"));
    m.def(
        "enumerate_branches",
        [](const ButterflyInstance &inst, const RoutingConfig &routing, std::size_t threads) {
            EnumerationOptions opt;
            opt.threads = threads;
            py::gil_scoped_release release;
            return enumerate_branches(inst, routing, opt);
        },
        py::arg("instance"), py::arg("routing"), py::arg("threads") = 1);
    m.def(
        "min_branch_fidelity",
        [](const ButterflyInstance &inst, const RoutingConfig &routing, std::size_t threads) {
            EnumerationOptions opt;
            opt.threads = threads;
            double worst = 1.0;
            std::uint64_t count = 0;
            py::gil_scoped_release release;
            for_each_branch(
                inst, routing,
                [&](const ProtocolTranscript &tr) {
                    count++;
                    if (!tr.possible()) return;
                    for (double f : tr.final_fidelities) worst = std::min(worst, f);
                },
                opt);
            return std::make_pair(count, worst);
        },
        py::arg("instance"), py::arg("routing"), py::arg("threads") = 1,
        "Enumerates every branch; returns (branch count, lowest final fidelity).");
}

void bind_recovery(py::module_ &m) {
    py::class_<NetworkTopology>(m, "NetworkTopology")
        .def(py::init<>())
        .def_static("parse",
                    [](const std::string &text) {
                        std::istringstream in(text);
                        return NetworkTopology::parse(in);
                    })
        .def_static("load", &NetworkTopology::load)
        .def("add_node", &NetworkTopology::add_node)
        .def("add_edge", &NetworkTopology::add_edge)
        .def("add_block", &NetworkTopology::add_block)
        .def("set_input", &NetworkTopology::set_input)
        .def_property_readonly("nodes", &NetworkTopology::nodes)
        .def_property_readonly("edges", &NetworkTopology::edges)
        .def_property_readonly("blocks", &NetworkTopology::blocks)
        .def("neighbors", &NetworkTopology::neighbors)
        .def("is_connected", &NetworkTopology::is_connected);

    py::enum_<NodeStatus>(m, "NodeStatus")
        .value("OPERATIVE", NodeStatus::kOperative)
        .value("FAILED", NodeStatus::kFailed)
        .value("EXCISED", NodeStatus::kExcised)
        .value("SUBSTITUTED", NodeStatus::kSubstituted);

    py::class_<DetectorModel>(m, "DetectorModel")
        .def(py::init([](double fnr, double fpr) { return DetectorModel{fnr, fpr}; }),
             py::arg("false_negative_rate") = 0.0, py::arg("false_positive_rate") = 0.0)
        .def_readwrite("false_negative_rate", &DetectorModel::false_negative_rate)
        .def_readwrite("false_positive_rate", &DetectorModel::false_positive_rate);

    py::register_exception<InputLost>(m, "InputLost");
    py::register_exception<ResourceExhausted>(m, "ResourceExhausted");
    py::register_exception<CriticalFailure>(m, "CriticalFailure");

    py::class_<GraphStateNetwork>(m, "GraphStateNetwork")
        .def_readonly("state", &GraphStateNetwork::state)
        .def_readonly("register_order", &GraphStateNetwork::register_order)
        .def_readonly("input_intact", &GraphStateNetwork::input_intact)
        .def_readonly("status", &GraphStateNetwork::status)
        .def_readonly("resource_consumed", &GraphStateNetwork::resource_consumed)
        .def_readonly("warnings", &GraphStateNetwork::warnings)
        .def("stabilizer_expectation", &stabilizer_expectation)
        .def("all_stabilizers_hold", &all_stabilizers_hold, py::arg("tol") = kProtocolTol);

    py::class_<StabilizerCheck>(m, "StabilizerCheck")
        .def_readonly("node", &StabilizerCheck::node)
        .def_readonly("expectation", &StabilizerCheck::expectation);

    py::enum_<Criticality>(m, "Criticality")
        .value("RECOVERABLE", Criticality::kRecoverable)
        .value("CRITICAL", Criticality::kCritical);

    py::class_<RecoveryReport>(m, "RecoveryReport")
        .def_property_readonly("outcome",
                               [](const RecoveryReport &r) { return std::string(recovery_outcome_name(r.outcome)); })
        .def_readonly("detected", &RecoveryReport::detected)
        .def_readonly("undetected", &RecoveryReport::undetected)
        .def_readonly("critical_blocks", &RecoveryReport::critical_blocks)
        .def_readonly("substituted", &RecoveryReport::substituted)
        .def_readonly("unrepaired", &RecoveryReport::unrepaired)
        .def_readonly("data_loss", &RecoveryReport::data_loss)
        .def_readonly("stabilizers", &RecoveryReport::stabilizers)
        .def_readonly("stabilizers_hold", &RecoveryReport::stabilizers_hold)
        .def_readonly("untouched_blocks_hold", &RecoveryReport::untouched_blocks_hold);

    m.def("prepare_graph_network", &prepare_graph_network, py::arg("topology"), py::arg("phi"));
    m.def("check_stabilizers", &check_stabilizers);
    m.def("excise_node", &excise_node, py::arg("network"), py::arg("node"), py::arg("rng"),
          py::arg("allow_input_loss") = false);
    m.def(
        "substitute_node",
        [](GraphStateNetwork net, NodeId failed, std::size_t block, RandomSource &rng) {
            return substitute_node(std::move(net), failed, block, rng);
        },
        py::arg("network"), py::arg("failed"), py::arg("block"), py::arg("rng"));
    m.def(
        "criticality_check", [](const NetworkTopology &t, const NodeSet &f) { return criticality_check(t, f); },
        py::arg("topology"), py::arg("failures"));
    m.def(
        "recover",
        [](GraphStateNetwork net, const NodeSet &failures, const DetectorModel &det, RandomSource &rng) {
            auto r = recover(std::move(net), failures, det, rng);
            return py::make_tuple(r.network, r.reported, r.report);
        },
        py::arg("network"), py::arg("failures"), py::arg("detector") = DetectorModel{}, py::arg("rng"));
}

void bind_analysis(py::module_ &m) {
    py::class_<BoundReport>(m, "BoundReport")
        .def_readonly("d", &BoundReport::d)
        .def_readonly("fidelities", &BoundReport::fidelities)
        .def_readonly("sum", &BoundReport::sum)
        .def_readonly("threshold", &BoundReport::threshold)
        .def_readonly("satisfied", &BoundReport::satisfied);

    m.def("bound_threshold", &bound_threshold);
    m.def(
        "check_bound", [](const std::vector<double> &f, std::size_t d) { return check_bound(f, d); },
        py::arg("fidelities"), py::arg("d"));
    m.def("baseline_no_entanglement", &baseline_no_entanglement, py::arg("n"),
          py::arg("chirality") = Chirality::kClockwise);
    m.def(
        "entangled_protocol_bound",
        [](std::size_t n, Chirality c) {
            py::gil_scoped_release release;
            return entangled_protocol_bound(n, c);
        },
        py::arg("n"), py::arg("chirality") = Chirality::kClockwise);
    m.def(
        "channel_fidelity",
        [](const std::string &name) {
            if (name == "identity") return entanglement_fidelity(identity_channel());
            if (name == "measure_and_resend") return entanglement_fidelity(measure_and_resend_channel());
            if (name == "replacement") return entanglement_fidelity(replacement_channel());
            throw py::value_error("unknown channel '" + name + "'");
        },
        py::arg("name"), "Entanglement fidelity of a built-in channel: identity, measure_and_resend or replacement.");
    m.def(
        "protocol_fidelity",
        [](const ButterflyInstance &inst, const RoutingConfig &routing, TerminalId receiver) {
            py::gil_scoped_release release;
            return entanglement_fidelity(protocol_channel(inst, routing, receiver));
        },
        py::arg("instance"), py::arg("routing"), py::arg("receiver"));
}

void bind_scenario(py::module_ &m) {
    py::register_exception<ScenarioError>(m, "ScenarioError", PyExc_ValueError);
    m.def(
        "run_scenario_file",
        [](const std::string &path, std::optional<std::uint64_t> seed, std::size_t threads) {
            Scenario s = load_scenario(path);
            std::string text;
            int code = 0;
            {
                py::gil_scoped_release release;
                Report r = run_scenario(s, {seed, threads});
                text = format_report(r);
                code = r.exit_code();
            }
            return py::make_tuple(text, code);
        },
        py::arg("path"), py::arg("seed") = py::none(), py::arg("threads") = 1,
        "Runs a scenario file; returns (report text, exit code).");
    m.def(
        "verify_correction_table",
        [](std::uint64_t seed, std::size_t trials) {
            Report r = verify_correction_table(seed, trials);
            return py::make_tuple(format_report(r), r.exit_code());
        },
        py::arg("seed") = 1, py::arg("trials") = 10);
    m.def("format_real", &format_real);
}

}  // namespace

PYBIND11_MODULE(_ghznet, m) {
    m.doc() = "Entanglement-assisted network coding and graph-state recovery simulator";
    m.attr("__version__") = std::string(library_version());
    bind_qsim(m);
    bind_coding(m);
    bind_butterfly(m);
    bind_recovery(m);
    bind_analysis(m);
    bind_scenario(m);
}
