#include "polygrow/dot.hpp"

#include <sstream>

namespace polygrow {

namespace {

std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string tree_dot(const FactorizationTree& t, const Alphabet& sigma) {
  std::ostringstream out;
  out << "digraph fft {\n  node [shape=box];\n";
  for (int i = 0; i < t.size(); ++i) {
    const FftNode& n = t.node(i);
    const std::string label = n.leaf ? sigma.symbol(n.letter) + " @" + std::to_string(n.first)
                                     : "s" + std::to_string(n.value) + " [" + std::to_string(n.first) + ".." +
                                           std::to_string(n.last) + "]";
    out << "  n" << i << " [label=" << quoted(label) << (n.leaf ? ", shape=plaintext" : "") << "];\n";
  }
  for (int i = 0; i < t.size(); ++i)
    for (int c : t.node(i).children) out << "  n" << i << " -> n" << c << ";\n";
  out << "}\n";
  return out.str();
}

std::string skeleton_dot(const Skeleton& s, const Alphabet& sigma) {
  std::ostringstream out;
  out << "digraph skeleton {\n  node [shape=box];\n";
  for (std::size_t i = 0; i < s.nodes.size(); ++i) {
    const SkeletonNode& n = s.nodes[i];
    std::string label = n.leaf ? sigma.symbol(n.letter) : "s" + std::to_string(n.label);
    std::string vars;
    for (std::size_t v = 0; v < s.variables.size(); ++v)
      if (n.vars & (VarMask{1} << v)) vars += (vars.empty() ? "" : ",") + s.variables[v];
    if (!vars.empty()) label += " {" + vars + "}";
    if (n.is_leftmost) label += " L";
    if (n.is_rightmost) label += " R";
    out << "  n" << i << " [label=" << quoted(label) << "];\n";
  }
  for (std::size_t i = 0; i < s.nodes.size(); ++i) {
    const SkeletonNode& n = s.nodes[i];
    for (int c : n.children) out << "  n" << i << " -> n" << c << ";\n";
    for (std::size_t k = 0; k + 1 < n.children.size(); ++k)
      if (!n.linked[k])
        out << "  n" << n.children[k] << " -> n" << n.children[k + 1]
            << " [style=dotted, arrowhead=none, constraint=false];\n";
  }
  out << "}\n";
  return out.str();
}

std::string config_tree_dot(const PebbleMachine& m, const RunTrace& trace) {
  const ConfigTree t = config_tree(trace);
  std::ostringstream out;
  out << "digraph configurations {\n  r [label=\"\", shape=point];\n";
  for (std::size_t i = 0; i < trace.configs.size(); ++i) {
    const Configuration& c = trace.configs[i];
    std::string label = m.states[c.state] + " [";
    for (std::size_t p = 0; p < c.stack.size(); ++p) label += (p ? "," : "") + std::to_string(c.stack[p]);
    label += "]";
    if (!trace.outputs[i].empty()) label += " / " + render_atom_word(trace.outputs[i]);
    out << "  n" << i << " [label=" << quoted(label) << "];\n";
  }
  for (std::size_t i = 0; i < trace.configs.size(); ++i)
    out << "  " << (t.parent[i] < 0 ? std::string("r") : "n" + std::to_string(t.parent[i])) << " -> n" << i << ";\n";
  out << "}\n";
  return out.str();
}

}  // namespace polygrow
