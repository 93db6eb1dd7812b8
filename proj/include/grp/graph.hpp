#pragma once

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "grp/diagnostic.hpp"
#include "grp/trace.hpp"

namespace grp {

// Sorted set of node ids.
class NodeSet {
 public:
  NodeSet() = default;
  NodeSet(std::initializer_list<NodeId> ids);
  explicit NodeSet(std::vector<NodeId> ids);

  bool contains(NodeId id) const;
  std::size_t size() const { return ids_.size(); }
  bool empty() const { return ids_.empty(); }
  const std::vector<NodeId>& ids() const { return ids_; }
  auto begin() const { return ids_.begin(); }
  auto end() const { return ids_.end(); }

  bool operator==(const NodeSet&) const = default;

 private:
  std::vector<NodeId> ids_;
};

struct GraphNode {
  NodeId id = 0;
  Label label = Label::Known;
  std::size_t block = 0;  // index of the enclosing tag block in the trace
  std::string content;
  // Indices into ReasoningGraph::nodes(). Parents always have smaller
  // indices than their children.
  std::vector<std::size_t> parents;
  std::vector<std::size_t> children;
};

// Directed reasoning graph. Nodes keep declaration order, which is a
// topological order. Immutable after construction.
class ReasoningGraph {
 public:
  ReasoningGraph() = default;

  const std::vector<GraphNode>& nodes() const { return nodes_; }
  std::size_t size() const { return nodes_.size(); }
  bool empty() const { return nodes_.empty(); }
  std::size_t edge_count() const { return edge_count_; }

  std::optional<std::size_t> index_of(NodeId id) const;
  const GraphNode& node(std::size_t index) const { return nodes_.at(index); }

  // In-degree-0 nodes.
  NodeSet premise_set() const;
  std::optional<NodeId> answer_id() const;
  std::optional<std::size_t> answer_index() const { return answer_; }

  const std::vector<Diagnostic>& diagnostics() const { return diagnostics_; }

 private:
  friend ReasoningGraph build_graph(const Trace&, std::vector<Diagnostic>);

  std::vector<GraphNode> nodes_;
  std::unordered_map<NodeId, std::size_t> index_;
  std::optional<std::size_t> answer_;
  std::size_t edge_count_ = 0;
  std::vector<Diagnostic> diagnostics_;
};

// Never fails. Repeated ids and parents not declared earlier are skipped, so
// the result is acyclic even for hand-built traces.
ReasoningGraph build_graph(const Trace& trace,
                           std::vector<Diagnostic> diagnostics = {});

// Weakly connected components. Throws grp::Error on an empty graph.
std::size_t component_count(const ReasoningGraph& graph);

// All v with a directed path v ~> target, target included. Throws grp::Error
// for an unknown id.
NodeSet ancestors_of(const ReasoningGraph& graph, NodeId target);

// Nodes reachable from the virtual source. The source attaches to every
// premise except the answer node itself, which is the sink.
NodeSet reachable_from_start(const ReasoningGraph& graph);

// Effective reasoning subgraph: nodes on some start ~> v ~> answer path.
// Empty when there is no answer.
NodeSet extract_ers(const ReasoningGraph& graph);

// Edges on the shortest start ~> answer path, if one exists.
std::optional<std::size_t> shortest_path_length(const ReasoningGraph& graph);

// "parent child" per line, preceded by a "# nodes:" comment listing every id
// so isolated nodes survive the export.
std::string to_edge_list(const ReasoningGraph& graph);

// Graphviz digraph with the node id and cognitive label as attributes.
std::string to_dot(const ReasoningGraph& graph);

}  // namespace grp
