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

#include "ghznet/recovery.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace ghznet {

namespace {

constexpr std::size_t kMaxNetworkNodes = 20;

std::pair<NodeId, NodeId> edge_key(NodeId a, NodeId b) {
    return a < b ? std::pair{a, b} : std::pair{b, a};
}

bool is_plus(const InputAmplitudes &phi) {
    auto s = prepare_arbitrary(phi.alpha, phi.beta);
    return overlap_fidelity(s, prepare_plus()) > 1.0 - kExactTol;
}

}  // namespace

void NetworkTopology::add_node(NodeId id) {
    nodes_.insert(id);
}

void NetworkTopology::add_edge(NodeId a, NodeId b) {
    if (a == b) {
        throw std::invalid_argument("self-loop on node " + std::to_string(a));
    }
    if (!has_node(a) || !has_node(b)) {
        throw std::invalid_argument("edge " + std::to_string(a) + "-" + std::to_string(b) +
                                    " references an unknown node");
    }
    edges_.insert(edge_key(a, b));
}

void NetworkTopology::add_block(std::vector<NodeId> members) {
    if (members.empty()) {
        throw std::invalid_argument("empty block");
    }
    std::sort(members.begin(), members.end());
    if (std::adjacent_find(members.begin(), members.end()) != members.end()) {
        throw std::invalid_argument("block lists a node twice");
    }
    for (NodeId m : members) {
        if (!has_node(m)) {
            throw std::invalid_argument("block references unknown node " + std::to_string(m));
        }
    }
    blocks_.push_back(std::move(members));
}

void NetworkTopology::set_input(NodeId id) {
    if (!has_node(id)) {
        throw std::invalid_argument("input node " + std::to_string(id) + " is not in the topology");
    }
    input_ = id;
}

NodeId NetworkTopology::input_node() const {
    if (input_) {
        return *input_;
    }
    if (nodes_.empty()) {
        throw std::logic_error("empty topology has no input node");
    }
    return *nodes_.begin();
}

bool NetworkTopology::has_edge(NodeId a, NodeId b) const {
    return edges_.contains(edge_key(a, b));
}

NodeSet NetworkTopology::neighbors(NodeId v) const {
    NodeSet out;
    for (auto [a, b] : edges_) {
        if (a == v) out.insert(b);
        if (b == v) out.insert(a);
    }
    return out;
}

bool NetworkTopology::is_connected() const {
    if (nodes_.empty()) {
        return true;
    }
    NodeSet seen{*nodes_.begin()};
    std::vector<NodeId> stack{*nodes_.begin()};
    while (!stack.empty()) {
        NodeId v = stack.back();
        stack.pop_back();
        for (NodeId u : neighbors(v)) {
            if (seen.insert(u).second) stack.push_back(u);
        }
    }
    return seen.size() == nodes_.size();
}

std::vector<std::size_t> NetworkTopology::blocks_containing(NodeId v) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < blocks_.size(); i++) {
        if (std::binary_search(blocks_[i].begin(), blocks_[i].end(), v)) out.push_back(i);
    }
    return out;
}

NodeSet NetworkTopology::boundary(std::size_t block) const {
    NodeSet out;
    for (NodeId m : blocks_.at(block)) {
        if (blocks_containing(m).size() > 1) out.insert(m);
    }
    return out;
}

void NetworkTopology::validate() const {
    if (blocks_.empty()) {
        return;
    }
    for (NodeId v : nodes_) {
        if (blocks_containing(v).empty()) {
            throw std::invalid_argument("node " + std::to_string(v) + " is not covered by any block");
        }
    }
}

NetworkTopology NetworkTopology::parse(std::istream &in) {
    NetworkTopology topo;
    std::string line;
    std::size_t line_no = 0;
    auto fail = [&](const std::string &what) {
        throw std::invalid_argument("topology line " + std::to_string(line_no) + ": " + what);
    };
    while (std::getline(in, line)) {
        line_no++;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream words(line);
        std::string keyword;
        if (!(words >> keyword)) continue;
        std::vector<NodeId> ids;
        std::string tok;
        while (words >> tok) {
            std::size_t used = 0;
            unsigned long long v = 0;
            try {
                v = std::stoull(tok, &used);
            } catch (const std::exception &) {
                used = 0;
            }
            if (used != tok.size() || tok.front() == '-') fail("bad node id '" + tok + "'");
            ids.push_back(static_cast<NodeId>(v));
        }
        try {
            if (keyword == "node") {
                if (ids.empty()) fail("node needs at least one id");
                for (NodeId id : ids) topo.add_node(id);
            } else if (keyword == "edge") {
                if (ids.size() != 2) fail("edge needs two ids");
                topo.add_edge(ids[0], ids[1]);
            } else if (keyword == "block") {
                topo.add_block(ids);
            } else if (keyword == "input") {
                if (ids.size() != 1) fail("input needs one id");
                topo.set_input(ids[0]);
            } else {
                fail("unknown keyword '" + keyword + "'");
            }
        } catch (const std::invalid_argument &e) {
            std::string msg = e.what();
            if (msg.rfind("topology line", 0) == 0) throw;
            fail(msg);
        }
    }
    topo.validate();
    return topo;
}

NetworkTopology NetworkTopology::load(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw std::invalid_argument("cannot open topology file " + path);
    }
    return parse(in);
}

std::string_view node_status_name(NodeStatus s) {
    switch (s) {
        case NodeStatus::kOperative:
            return "operative";
        case NodeStatus::kFailed:
            return "failed";
        case NodeStatus::kExcised:
            return "excised";
        case NodeStatus::kSubstituted:
            return "substituted";
    }
    return "?";
}

void DetectorModel::validate() const {
    auto ok = [](double p) { return p >= 0.0 && p <= 1.0; };
    if (!ok(false_negative_rate) || !ok(false_positive_rate)) {
        throw std::invalid_argument("detector rates must lie in [0, 1]");
    }
}

NodeSet critical_set(const NetworkTopology &topology, std::size_t block, const CriticalityRule &rule) {
    NodeSet bound = topology.boundary(block);
    if (bound.empty()) {
        return {};
    }
    const auto &members = topology.blocks()[block];
    // Flanks of every boundary run together are the boundary's outer neighborhood.
    NodeSet out = bound;
    for (NodeId v : bound) {
        for (NodeId u : topology.neighbors(v)) {
            if (bound.contains(u)) continue;
            if (rule.scope == FlankScope::kBlockInterior &&
                !std::binary_search(members.begin(), members.end(), u)) {
                continue;
            }
            out.insert(u);
        }
    }
    return out;
}

bool block_is_critical(const NetworkTopology &topology, std::size_t block, const NodeSet &failures,
                       const CriticalityRule &rule) {
    NodeSet need = critical_set(topology, block, rule);
    if (need.empty()) {
        return false;
    }
    return std::includes(failures.begin(), failures.end(), need.begin(), need.end());
}

Criticality criticality_check(const NetworkTopology &topology, const NodeSet &failures, const CriticalityRule &rule) {
    for (NodeId f : failures) {
        if (!topology.has_node(f)) {
            throw std::invalid_argument("failure set names unknown node " + std::to_string(f));
        }
    }
    for (std::size_t b = 0; b < topology.blocks().size(); b++) {
        if (block_is_critical(topology, b, failures, rule)) return Criticality::kCritical;
    }
    return Criticality::kRecoverable;
}

bool GraphStateNetwork::is_present(NodeId v) const {
    return std::find(register_order.begin(), register_order.end(), v) != register_order.end();
}

std::size_t GraphStateNetwork::position(NodeId v) const {
    auto it = std::find(register_order.begin(), register_order.end(), v);
    if (it == register_order.end()) {
        throw std::out_of_range("node " + std::to_string(v) + " is not present");
    }
    return static_cast<std::size_t>(it - register_order.begin());
}

NodeSet GraphStateNetwork::present_neighbors(NodeId v) const {
    NodeSet out;
    for (NodeId u : topology.neighbors(v)) {
        if (is_present(u)) out.insert(u);
    }
    return out;
}

std::vector<NodeId> GraphStateNetwork::stabilized_nodes() const {
    NodeId input = topology.input_node();
    bool skip = input_intact && is_present(input) && !is_plus(phi);
    std::vector<NodeId> out;
    for (NodeId v : topology.nodes()) {
        if (!is_present(v)) continue;
        if (skip && (v == input || topology.has_edge(v, input))) continue;
        out.push_back(v);
    }
    return out;
}

GraphStateNetwork prepare_graph_network(const NetworkTopology &topology, InputAmplitudes phi) {
    topology.validate();
    if (topology.nodes().empty()) {
        throw std::invalid_argument("topology has no nodes");
    }
    if (topology.nodes().size() > kMaxNetworkNodes) {
        throw std::length_error("graph networks are limited to " + std::to_string(kMaxNetworkNodes) + " nodes");
    }
    GraphStateNetwork net;
    net.topology = topology;
    net.phi = phi;
    NodeId input = topology.input_node();
    for (NodeId v : topology.nodes()) {
        net.register_order.push_back(v);
        net.state = tensor(net.state, v == input ? prepare_arbitrary(phi.alpha, phi.beta) : prepare_plus());
        net.status[v] = NodeStatus::kOperative;
    }
    for (auto [a, b] : topology.edges()) {
        net.state = apply_cphase(std::move(net.state), net.position(a), net.position(b));
    }
    net.resource_consumed.assign(topology.blocks().size(), false);
    if (!topology.is_connected()) {
        net.warnings.push_back("topology is disconnected");
    }
    return net;
}

double stabilizer_expectation(const GraphStateNetwork &network, NodeId v) {
    std::vector<PauliTerm> terms{{network.position(v), Pauli::X}};
    for (NodeId u : network.present_neighbors(v)) {
        terms.push_back({network.position(u), Pauli::Z});
    }
    return pauli_expectation(network.state, terms);
}

std::vector<StabilizerCheck> check_stabilizers(const GraphStateNetwork &network) {
    std::vector<StabilizerCheck> out;
    for (NodeId v : network.stabilized_nodes()) {
        out.push_back({v, stabilizer_expectation(network, v)});
    }
    return out;
}

bool all_stabilizers_hold(const GraphStateNetwork &network, double tol) {
    auto checks = check_stabilizers(network);
    return std::all_of(checks.begin(), checks.end(),
                       [&](const StabilizerCheck &c) { return std::abs(c.expectation - 1.0) <= tol; });
}

std::map<NodeId, NodeStatus> detect_failures(const GraphStateNetwork &network, const NodeSet &true_failures,
                                             const DetectorModel &detector, RandomSource &rng) {
    detector.validate();
    for (NodeId f : true_failures) {
        if (!network.topology.has_node(f)) {
            throw std::invalid_argument("failure names unknown node " + std::to_string(f));
        }
    }
    std::map<NodeId, NodeStatus> out;
    for (NodeId v : network.register_order) {
        bool failed = true_failures.contains(v);
        double flip_rate = failed ? detector.false_negative_rate : detector.false_positive_rate;
        bool flipped = flip_rate > 0.0 && rng.uniform() < flip_rate;
        out[v] = (failed != flipped) ? NodeStatus::kFailed : NodeStatus::kOperative;
    }
    return out;
}

std::vector<ParityMessage> broadcast_status(const std::vector<NodeId> &block,
                                            const std::map<NodeId, NodeStatus> &statuses) {
    std::vector<OutcomeRecord> records;
    for (std::size_t i = 0; i < block.size(); i++) {
        auto it = statuses.find(block[i]);
        if (it == statuses.end()) {
            throw std::invalid_argument("no status for node " + std::to_string(block[i]));
        }
        Bit up = (it->second == NodeStatus::kOperative || it->second == NodeStatus::kSubstituted) ? 1 : 0;
        records.push_back({i + 1, BellOutcome{}, {up}});
    }
    return encode_all_channels(records);
}

std::map<NodeId, Bit> decode_status(const std::vector<NodeId> &block, const std::vector<ParityMessage> &messages) {
    std::map<NodeId, Bit> out;
    for (std::size_t i = 0; i < block.size(); i++) {
        out[block[i]] = reconstruct_record(messages, i + 1).b.at(0);
    }
    return out;
}

GraphStateNetwork excise_node(GraphStateNetwork network, NodeId node, RandomSource &rng, bool allow_input_loss) {
    if (!network.topology.has_node(node)) {
        throw std::invalid_argument("unknown node " + std::to_string(node));
    }
    bool is_input = network.input_intact && node == network.topology.input_node();
    if (is_input && !allow_input_loss) {
        throw InputLost("excising node " + std::to_string(node) + " would lose the input state");
    }
    NodeSet nbrs = network.present_neighbors(node);
    auto m = measure_z(network.state, network.position(node), rng);
    network.state = std::move(m.state);
    network.register_order.erase(network.register_order.begin() + network.position(node));
    if (m.outcome) {
        for (NodeId u : nbrs) {
            network.state = apply_pauli(std::move(network.state), Pauli::Z, network.position(u));
        }
    }
    network.status[node] = NodeStatus::kExcised;
    if (is_input) {
        network.input_intact = false;
    }
    return network;
}

GraphStateNetwork substitute_node(GraphStateNetwork network, NodeId failed, std::size_t block, RandomSource &rng,
                                  const CriticalityRule &rule) {
    const auto &topo = network.topology;
    if (block >= topo.blocks().size()) {
        throw std::out_of_range("no block " + std::to_string(block));
    }
    const auto &members = topo.blocks()[block];
    if (!std::binary_search(members.begin(), members.end(), failed)) {
        throw std::invalid_argument("node " + std::to_string(failed) + " is not in block " + std::to_string(block));
    }
    if (network.is_present(failed)) {
        throw std::logic_error("node " + std::to_string(failed) + " must be excised before substitution");
    }
    if (network.resource_consumed.at(block)) {
        throw ResourceExhausted("GHZ resource of block " + std::to_string(block) + " already consumed");
    }
    NodeSet missing;
    for (NodeId v : topo.nodes()) {
        if (!network.is_present(v)) missing.insert(v);
    }
    if (block_is_critical(topo, block, missing, rule)) {
        throw CriticalFailure("block " + std::to_string(block) + " is critical");
    }
    auto sender_it = std::find_if(members.begin(), members.end(), [&](NodeId v) { return network.is_present(v); });
    if (sender_it == members.end()) {
        throw CriticalFailure("block " + std::to_string(block) + " has no operative node to send from");
    }
    std::size_t k = members.size();
    std::size_t sender = static_cast<std::size_t>(sender_it - members.begin());
    std::size_t host = static_cast<std::size_t>(std::find(members.begin(), members.end(), failed) - members.begin());

    // Local register: fresh |+> then one GHZ leg per block member, in block order.
    StateVector local = tensor(prepare_plus(), prepare_ghz(k));
    auto bell = measure_bell(local, 0, 1 + sender, rng);
    local = std::move(bell.state);
    std::vector<std::size_t> legs;
    for (std::size_t i = 0; i < k; i++) {
        if (i != sender) legs.push_back(i);
    }
    std::vector<OutcomeRecord> records(k);
    for (std::size_t i = 0; i < k; i++) {
        records[i] = {i + 1, BellOutcome{}, {0}};
    }
    records[sender].a = bell.outcome;
    for (std::size_t i = 0; i < legs.size();) {
        if (legs[i] == host) {
            i++;
            continue;
        }
        auto x = measure_x(local, i, rng);
        local = std::move(x.state);
        records[legs[i]].b[0] = x.outcome;
        legs.erase(legs.begin() + static_cast<std::ptrdiff_t>(i));
    }

    // The host learns every other record from E xor E_j.
    auto messages = encode_all_channels(records);
    Bit parity = 0;
    BellOutcome a{};
    for (std::size_t i = 0; i < k; i++) {
        if (i == host) continue;
        auto rec = reconstruct_record(messages, i + 1);
        parity ^= rec.b_parity();
        if (i == sender) a = rec.a;
    }
    local = apply_frame(std::move(local), outcome_to_frame(a, parity), 0);

    NodeSet former = network.present_neighbors(failed);
    network.state = tensor(network.state, local);
    network.register_order.push_back(failed);
    std::size_t pos = network.register_order.size() - 1;
    for (NodeId u : former) {
        network.state = apply_cphase(std::move(network.state), network.position(u), pos);
    }
    network.status[failed] = NodeStatus::kSubstituted;
    network.resource_consumed[block] = true;
    return network;
}

void replenish_resource(GraphStateNetwork &network, std::size_t block) {
    if (!network.allow_replenish) {
        throw std::logic_error("resource replenishment is disabled for this network");
    }
    network.resource_consumed.at(block) = false;
}

std::string_view recovery_outcome_name(RecoveryOutcome o) {
    switch (o) {
        case RecoveryOutcome::kUnchanged:
            return "unchanged";
        case RecoveryOutcome::kRecovered:
            return "recovered";
        case RecoveryOutcome::kPartial:
            return "partial";
        case RecoveryOutcome::kUnrecoverable:
            return "unrecoverable";
    }
    return "?";
}

RecoveryResult recover(GraphStateNetwork network, const NodeSet &true_failures, const DetectorModel &detector,
                       RandomSource &rng, const CriticalityRule &rule) {
    RecoveryResult result;
    RecoveryReport &report = result.report;
    result.reported = detect_failures(network, true_failures, detector, rng);
    for (auto [v, s] : result.reported) {
        if (s == NodeStatus::kFailed) report.detected.insert(v);
    }
    for (NodeId f : true_failures) {
        if (!report.detected.contains(f)) report.undetected.insert(f);
    }

    const auto &topo = network.topology;
    for (const auto &block : topo.blocks()) {
        std::map<NodeId, NodeStatus> statuses;
        for (NodeId v : block) {
            auto it = result.reported.find(v);
            statuses[v] = it != result.reported.end() ? it->second : network.status.at(v);
        }
        auto messages = broadcast_status(block, statuses);
        // Each member decodes independently; all must agree with one another and the reports.
        std::optional<std::map<NodeId, Bit>> first;
        for (std::size_t i = 0; i < block.size(); i++) {
            auto seen = decode_status(block, messages);
            if (first && seen != *first) report.broadcast_consistent = false;
            if (!first) first = seen;
        }
        for (NodeId v : block) {
            Bit expect = statuses[v] == NodeStatus::kFailed || statuses[v] == NodeStatus::kExcised ? 0 : 1;
            if (first->at(v) != expect) report.broadcast_consistent = false;
        }
    }

    for (NodeId v : report.detected) {
        network.status[v] = NodeStatus::kFailed;
        bool input = network.input_intact && v == topo.input_node();
        network = excise_node(std::move(network), v, rng, true);
        if (input) report.data_loss = true;
    }

    for (std::size_t b = 0; b < topo.blocks().size(); b++) {
        if (block_is_critical(topo, b, report.detected, rule)) report.critical_blocks.push_back(b);
    }
    auto critical = [&](std::size_t b) {
        return std::find(report.critical_blocks.begin(), report.critical_blocks.end(), b) !=
               report.critical_blocks.end();
    };

    for (NodeId v : report.detected) {
        bool done = false;
        for (std::size_t b : topo.blocks_containing(v)) {
            if (critical(b) || network.resource_consumed[b]) continue;
            try {
                network = substitute_node(std::move(network), v, b, rng, rule);
                report.substituted.emplace_back(v, b);
                done = true;
                break;
            } catch (const CriticalFailure &) {
            }
        }
        if (!done) report.unrepaired.insert(v);
    }

    report.stabilizers = check_stabilizers(network);
    report.stabilizers_hold = std::all_of(report.stabilizers.begin(), report.stabilizers.end(), [](const auto &c) {
        return std::abs(c.expectation - 1.0) <= kProtocolTol;
    });
    NodeSet touched = report.detected;
    touched.insert(true_failures.begin(), true_failures.end());
    for (const auto &block : topo.blocks()) {
        if (std::any_of(block.begin(), block.end(), [&](NodeId v) { return touched.contains(v); })) continue;
        for (NodeId v : block) {
            if (!network.is_present(v)) {
                report.untouched_blocks_hold = false;
                continue;
            }
            auto stab = network.stabilized_nodes();
            if (std::find(stab.begin(), stab.end(), v) == stab.end()) continue;
            if (std::abs(stabilizer_expectation(network, v) - 1.0) > kProtocolTol) report.untouched_blocks_hold = false;
        }
    }

    if (!report.critical_blocks.empty()) {
        report.outcome = RecoveryOutcome::kUnrecoverable;
    } else if (!report.unrepaired.empty() || !report.undetected.empty()) {
        report.outcome = RecoveryOutcome::kPartial;
    } else if (report.detected.empty()) {
        report.outcome = RecoveryOutcome::kUnchanged;
    } else {
        report.outcome = RecoveryOutcome::kRecovered;
    }
    result.network = std::move(network);
    return result;
}

}  // namespace ghznet
