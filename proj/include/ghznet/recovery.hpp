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

#ifndef GHZNET_RECOVERY_HPP
#define GHZNET_RECOVERY_HPP

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ghznet/butterfly.hpp"
#include "ghznet/coding.hpp"
#include "ghznet/qsim.hpp"

namespace ghznet {

using NodeId = std::size_t;
using NodeSet = std::set<NodeId>;

/// Graph of network nodes, tessellated into blocks that each own one GHZ resource.
class NetworkTopology {
   public:
    NetworkTopology() = default;

    void add_node(NodeId id);
    void add_edge(NodeId a, NodeId b);
    void add_block(std::vector<NodeId> members);
    void set_input(NodeId id);

    const NodeSet &nodes() const {
        return nodes_;
    }
    const std::set<std::pair<NodeId, NodeId>> &edges() const {
        return edges_;
    }
    const std::vector<std::vector<NodeId>> &blocks() const {
        return blocks_;
    }
    /// Node carrying the input state; defaults to the smallest id.
    NodeId input_node() const;

    bool has_node(NodeId id) const {
        return nodes_.contains(id);
    }
    bool has_edge(NodeId a, NodeId b) const;
    NodeSet neighbors(NodeId v) const;
    bool is_connected() const;
    /// Members of `block` that also belong to another block.
    NodeSet boundary(std::size_t block) const;
    std::vector<std::size_t> blocks_containing(NodeId v) const;

    /// Edges reference nodes, blocks are non-empty and cover every node. Throws on violation.
    void validate() const;

    /// Line format: `node <id>`, `edge <a> <b>`, `block <id>...`, `input <id>`; `#` comments.
    static NetworkTopology parse(std::istream &in);
    static NetworkTopology load(const std::string &path);

   private:
    NodeSet nodes_;
    std::set<std::pair<NodeId, NodeId>> edges_;
    std::vector<std::vector<NodeId>> blocks_;
    std::optional<NodeId> input_;
};

enum class NodeStatus { kOperative, kFailed, kExcised, kSubstituted };
std::string_view node_status_name(NodeStatus s);

struct DetectorModel {
    double false_negative_rate = 0.0;
    double false_positive_rate = 0.0;

    void validate() const;
};

class InputLost : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};
class ResourceExhausted : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};
class CriticalFailure : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// How far a boundary run's flanking nodes extend when testing criticality.
enum class FlankScope {
    /// Any graph neighbor of the run that is not in the run.
    kAnyNeighbor,
    /// Only neighbors of the run inside the same block.
    kBlockInterior,
};

struct CriticalityRule {
    FlankScope scope = FlankScope::kAnyNeighbor;
};

enum class Criticality { kRecoverable, kCritical };

/// Nodes whose failure, all together, makes `block` critical: its boundary plus the flanking
/// nodes of each connected run of boundary nodes. Empty if the block has no boundary.
NodeSet critical_set(const NetworkTopology &topology, std::size_t block, const CriticalityRule &rule = {});
bool block_is_critical(const NetworkTopology &topology, std::size_t block, const NodeSet &failures,
                       const CriticalityRule &rule = {});
Criticality criticality_check(const NetworkTopology &topology, const NodeSet &failures,
                              const CriticalityRule &rule = {});

/// The entangled network: one qubit per present node, in `register_order`.
///
/// The present graph is always the subgraph of the original topology induced by the present
/// nodes, so the state's stabilizers are K_v = X_v prod_{u in N(v), u present} Z_u.
struct GraphStateNetwork {
    NetworkTopology topology;
    StateVector state;
    std::vector<NodeId> register_order;
    InputAmplitudes phi;
    /// False once the node carrying phi has been lost.
    bool input_intact = true;
    std::map<NodeId, NodeStatus> status;
    std::vector<bool> resource_consumed;
    /// Allows replenish_resource to refill a consumed block resource.
    bool allow_replenish = false;
    /// Non-fatal notes from preparation, e.g. a disconnected topology.
    std::vector<std::string> warnings;

    bool is_present(NodeId v) const;
    std::size_t position(NodeId v) const;
    NodeSet present_neighbors(NodeId v) const;
    /// Nodes whose stabilizer is expected to hold: all present nodes, except those whose closed
    /// neighborhood contains an intact input node carrying a state other than |+>.
    std::vector<NodeId> stabilized_nodes() const;
};

GraphStateNetwork prepare_graph_network(const NetworkTopology &topology, InputAmplitudes phi);

/// <K_v> on the present graph.
double stabilizer_expectation(const GraphStateNetwork &network, NodeId v);

struct StabilizerCheck {
    NodeId node;
    double expectation;
};
std::vector<StabilizerCheck> check_stabilizers(const GraphStateNetwork &network);
bool all_stabilizers_hold(const GraphStateNetwork &network, double tol = kProtocolTol);

/// Per-node detector reports: kFailed or kOperative.
std::map<NodeId, NodeStatus> detect_failures(const GraphStateNetwork &network, const NodeSet &true_failures,
                                             const DetectorModel &detector, RandomSource &rng);

/// Encodes one status bit per block member (1 = operative) on the X lane of E and E_j.
std::vector<ParityMessage> broadcast_status(const std::vector<NodeId> &block,
                                            const std::map<NodeId, NodeStatus> &statuses);
/// Status vector (1 = operative) every block member reconstructs from the broadcast.
std::map<NodeId, Bit> decode_status(const std::vector<NodeId> &block, const std::vector<ParityMessage> &messages);

/// Removes a node from the graph state: Z-basis measurement, then Z on each present neighbor
/// when the outcome is 1. Throws InputLost for the intact input node unless allowed.
GraphStateNetwork excise_node(GraphStateNetwork network, NodeId node, RandomSource &rng,
                              bool allow_input_loss = false);

/// Reinstalls an excised node from the GHZ resource of `block` and links it to its present
/// former neighbors with CPHASE.
GraphStateNetwork substitute_node(GraphStateNetwork network, NodeId failed, std::size_t block, RandomSource &rng,
                                  const CriticalityRule &rule = {});

void replenish_resource(GraphStateNetwork &network, std::size_t block);

enum class RecoveryOutcome { kUnchanged, kRecovered, kPartial, kUnrecoverable };
std::string_view recovery_outcome_name(RecoveryOutcome o);

struct RecoveryReport {
    RecoveryOutcome outcome = RecoveryOutcome::kUnchanged;
    NodeSet detected;
    NodeSet undetected;
    /// Every block member decoded the same status vector.
    bool broadcast_consistent = true;
    std::vector<std::size_t> critical_blocks;
    std::vector<std::pair<NodeId, std::size_t>> substituted;
    NodeSet unrepaired;
    bool data_loss = false;
    std::vector<StabilizerCheck> stabilizers;
    bool stabilizers_hold = true;
    /// Stabilizers of members of blocks without any failure.
    bool untouched_blocks_hold = true;
};

struct RecoveryResult {
    GraphStateNetwork network;
    std::map<NodeId, NodeStatus> reported;
    RecoveryReport report;
};

RecoveryResult recover(GraphStateNetwork network, const NodeSet &true_failures, const DetectorModel &detector,
                       RandomSource &rng, const CriticalityRule &rule = {});

}  // namespace ghznet

#endif
