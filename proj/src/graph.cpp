#include "grp/graph.hpp"

#include <algorithm>

#include "grp/error.hpp"

namespace grp {

NodeSet::NodeSet(std::initializer_list<NodeId> ids)
    : NodeSet(std::vector<NodeId>(ids)) {}

NodeSet::NodeSet(std::vector<NodeId> ids) : ids_(std::move(ids)) {
  std::sort(ids_.begin(), ids_.end());
  ids_.erase(std::unique(ids_.begin(), ids_.end()), ids_.end());
}

bool NodeSet::contains(NodeId id) const {
  return std::binary_search(ids_.begin(), ids_.end(), id);
}

std::optional<std::size_t> ReasoningGraph::index_of(NodeId id) const {
  const auto it = index_.find(id);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

NodeSet ReasoningGraph::premise_set() const {
  std::vector<NodeId> ids;
  for (const auto& n : nodes_) {
    if (n.parents.empty()) ids.push_back(n.id);
  }
  return NodeSet(std::move(ids));
}

std::optional<NodeId> ReasoningGraph::answer_id() const {
  if (!answer_) return std::nullopt;
  return nodes_[*answer_].id;
}

ReasoningGraph build_graph(const Trace& trace,
                           std::vector<Diagnostic> diagnostics) {
  ReasoningGraph g;
  g.diagnostics_ = std::move(diagnostics);
  for (std::size_t b = 0; b < trace.blocks.size(); ++b) {
    const TagBlock& block = trace.blocks[b];
    for (const auto& node : block.nodes) {
      if (g.index_.count(node.id)) continue;
      GraphNode gn;
      gn.id = node.id;
      gn.label = block.label;
      gn.block = b;
      gn.content = node.content;
      const std::size_t self = g.nodes_.size();
      for (NodeId p : node.parents) {
        const auto it = g.index_.find(p);
        if (it == g.index_.end()) continue;
        if (std::find(gn.parents.begin(), gn.parents.end(), it->second) !=
            gn.parents.end()) {
          continue;
        }
        gn.parents.push_back(it->second);
        g.nodes_[it->second].children.push_back(self);
        ++g.edge_count_;
      }
      g.index_[node.id] = self;
      g.nodes_.push_back(std::move(gn));
    }
  }
  if (trace.answer_node_id) {
    if (const auto idx = g.index_of(*trace.answer_node_id)) g.answer_ = idx;
  }
  return g;
}

std::size_t component_count(const ReasoningGraph& graph) {
  if (graph.empty()) {
    throw Error(ErrorKind::InvalidArgument,
                "component_count: graph has no nodes");
  }
  // Iterative DFS with edge direction ignored.
  std::vector<bool> seen(graph.size(), false);
  std::size_t components = 0;
  std::vector<std::size_t> stack;
  for (std::size_t s = 0; s < graph.size(); ++s) {
    if (seen[s]) continue;
    ++components;
    seen[s] = true;
    stack.push_back(s);
    while (!stack.empty()) {
      const std::size_t v = stack.back();
      stack.pop_back();
      const GraphNode& n = graph.node(v);
      for (const auto* adj : {&n.parents, &n.children}) {
        for (std::size_t u : *adj) {
          if (!seen[u]) {
            seen[u] = true;
            stack.push_back(u);
          }
        }
      }
    }
  }
  return components;
}

namespace {

std::vector<bool> backward_closure(const ReasoningGraph& graph,
                                   std::size_t target) {
  std::vector<bool> hit(graph.size(), false);
  hit[target] = true;
  // Parents precede children, so a single reverse sweep suffices.
  for (std::size_t v = target + 1; v-- > 0;) {
    if (!hit[v]) continue;
    for (std::size_t p : graph.node(v).parents) hit[p] = true;
  }
  return hit;
}

std::vector<bool> forward_from_start(const ReasoningGraph& graph) {
  std::vector<bool> hit(graph.size(), false);
  const auto answer = graph.answer_index();
  for (std::size_t v = 0; v < graph.size(); ++v) {
    const GraphNode& n = graph.node(v);
    if (n.parents.empty()) {
      hit[v] = v != answer;
    } else {
      hit[v] = std::any_of(n.parents.begin(), n.parents.end(),
                           [&](std::size_t p) { return hit[p]; });
    }
  }
  return hit;
}

NodeSet collect(const ReasoningGraph& graph, const std::vector<bool>& mask) {
  std::vector<NodeId> ids;
  for (std::size_t v = 0; v < graph.size(); ++v) {
    if (mask[v]) ids.push_back(graph.node(v).id);
  }
  return NodeSet(std::move(ids));
}

}  // namespace

NodeSet ancestors_of(const ReasoningGraph& graph, NodeId target) {
  const auto idx = graph.index_of(target);
  if (!idx) {
    throw Error(ErrorKind::InvalidArgument,
                "ancestors_of: unknown node id " + std::to_string(target));
  }
  return collect(graph, backward_closure(graph, *idx));
}

NodeSet reachable_from_start(const ReasoningGraph& graph) {
  return collect(graph, forward_from_start(graph));
}

NodeSet extract_ers(const ReasoningGraph& graph) {
  const auto answer = graph.answer_index();
  if (!answer) return {};
  const auto forward = forward_from_start(graph);
  auto mask = backward_closure(graph, *answer);
  for (std::size_t v = 0; v < graph.size(); ++v) mask[v] = mask[v] && forward[v];
  return collect(graph, mask);
}

std::optional<std::size_t> shortest_path_length(const ReasoningGraph& graph) {
  const auto answer = graph.answer_index();
  if (!answer) return std::nullopt;
  constexpr std::size_t kUnset = static_cast<std::size_t>(-1);
  std::vector<std::size_t> dist(graph.size(), kUnset);
  for (std::size_t v = 0; v < graph.size(); ++v) {
    const GraphNode& n = graph.node(v);
    if (n.parents.empty()) {
      if (v != *answer) dist[v] = 0;
      continue;
    }
    for (std::size_t p : n.parents) {
      if (dist[p] != kUnset) dist[v] = std::min(dist[v], dist[p] + 1);
    }
  }
  if (dist[*answer] == kUnset) return std::nullopt;
  return dist[*answer];
}

std::string to_edge_list(const ReasoningGraph& graph) {
  std::string out = "# nodes:";
  for (const auto& n : graph.nodes()) {
    out += ' ';
    out += std::to_string(n.id);
  }
  out += '\n';
  for (const auto& n : graph.nodes()) {
    for (std::size_t p : n.parents) {
      out += std::to_string(graph.node(p).id);
      out += ' ';
      out += std::to_string(n.id);
      out += '\n';
    }
  }
  return out;
}

namespace {

std::string dot_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') {
      out += '\\';
      out += c;
    } else if (c == '\n') {
      out += "\\n";
    } else if (c != '\r') {
      out += c;
    }
  }
  return out;
}

}  // namespace

std::string to_dot(const ReasoningGraph& graph) {
  std::string out = "digraph reasoning {\n";
  for (std::size_t v = 0; v < graph.size(); ++v) {
    const GraphNode& n = graph.node(v);
    const std::string id = std::to_string(n.id);
    out += "  n" + id + " [id=" + id + ", tag=\"" +
           std::string(to_string(n.label)) + "\", label=\"" +
           dot_escape(n.content) + "\"";
    if (graph.answer_index() == v) out += ", shape=doublecircle";
    out += "];\n";
  }
  for (const auto& n : graph.nodes()) {
    for (std::size_t p : n.parents) {
      out += "  n" + std::to_string(graph.node(p).id) + " -> n" +
             std::to_string(n.id) + ";\n";
    }
  }
  out += "}\n";
  return out;
}

}  // namespace grp
