#include "srgg/graph_io.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace srgg {

namespace {

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), spec, v);
  return buf;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

}  // namespace

void atomic_write_file(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  const fs::path tmp = target.parent_path() / (target.filename().string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw InputError("short write to " + tmp.string());
  }
  fs::rename(tmp, target);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string hash_file_hex(const std::string& path) {
  const std::string bytes = read_text_file(path);
  const std::uint64_t h = fnv1a64(bytes.data(), bytes.size());
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string to_dot(const GraphicalModel& model) {
  std::string out = "graph srgg {\n";
  out += "  node [shape=ellipse];\n";
  for (std::size_t i = 0; i < model.labels.size(); ++i)
    out += "  v" + std::to_string(i) + " [label=\"" + dot_escape(model.labels[i]) + "\"];\n";
  for (const auto& e : model.edges)
    out += "  v" + std::to_string(e.i) + " -- v" + std::to_string(e.j) + " [label=\"" +
           fmt("%.4f", e.weight) + "\"];\n";
  out += "}\n";
  return out;
}

std::string to_graphml(const GraphicalModel& model) {
  std::string out =
      "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n"
      "  <key id=\"d0\" for=\"node\" attr.name=\"label\" attr.type=\"string\"/>\n"
      "  <key id=\"d1\" for=\"edge\" attr.name=\"weight\" attr.type=\"double\"/>\n"
      "  <graph id=\"G\" edgedefault=\"undirected\">\n";
  for (std::size_t i = 0; i < model.labels.size(); ++i)
    out += "    <node id=\"v" + std::to_string(i) + "\"><data key=\"d0\">" +
           xml_escape(model.labels[i]) + "</data></node>\n";
  for (const auto& e : model.edges)
    out += "    <edge source=\"v" + std::to_string(e.i) + "\" target=\"v" + std::to_string(e.j) +
           "\"><data key=\"d1\">" + fmt("%.17g", e.weight) + "</data></edge>\n";
  out += "  </graph>\n</graphml>\n";
  return out;
}

std::string graph_json(const GraphicalModel& model) {
  nlohmann::json j;
  j["tau"] = model.tau;
  j["nodes"] = model.labels;
  auto& edges = j["edges"] = nlohmann::json::array();
  for (const auto& e : model.edges) {
    nlohmann::json je;
    je["source"] = model.labels[e.i];
    je["target"] = model.labels[e.j];
    je["weight"] = e.weight;
    edges.push_back(je);
  }
  return j.dump(2) + "\n";
}

std::string to_edge_list_csv(const LargeNetwork& net) {
  std::string out = "i,j,m_ij\n";
  for (const auto& e : net.edges)
    out += std::to_string(e.i) + "," + std::to_string(e.j) + "," + fmt("%.17g", e.marginal) + "\n";
  return out;
}

std::string to_edge_list_csv(const GraphicalModel& model) {
  std::string out = "source,target,n_ij\n";
  for (const auto& e : model.edges)
    out += model.labels[e.i] + "," + model.labels[e.j] + "," + fmt("%.17g", e.weight) + "\n";
  return out;
}

std::string class_color(std::size_t index, std::size_t count) {
  // evenly spaced hues, fixed saturation/lightness
  const double h = count == 0 ? 0.0 : 360.0 * static_cast<double>(index) / static_cast<double>(count);
  const double s = 0.65, l = 0.5;
  const double c = (1.0 - std::abs(2.0 * l - 1.0)) * s;
  const double hp = h / 60.0;
  const double x = c * (1.0 - std::abs(std::fmod(hp, 2.0) - 1.0));
  double r = 0, g = 0, b = 0;
  if (hp < 1) { r = c; g = x; }
  else if (hp < 2) { r = x; g = c; }
  else if (hp < 3) { g = c; b = x; }
  else if (hp < 4) { g = x; b = c; }
  else if (hp < 5) { r = x; b = c; }
  else { r = c; b = x; }
  const double m = l - c / 2.0;
  char buf[8];
  std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", static_cast<int>(std::lround((r + m) * 255)),
                static_cast<int>(std::lround((g + m) * 255)),
                static_cast<int>(std::lround((b + m) * 255)));
  return buf;
}

std::string to_graphml(const LargeNetwork& net, const std::vector<std::string>& class_names) {
  std::string out =
      "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n"
      "  <key id=\"d0\" for=\"node\" attr.name=\"label\" attr.type=\"string\"/>\n"
      "  <key id=\"d1\" for=\"node\" attr.name=\"class\" attr.type=\"string\"/>\n"
      "  <key id=\"d2\" for=\"node\" attr.name=\"color\" attr.type=\"string\"/>\n"
      "  <key id=\"d3\" for=\"edge\" attr.name=\"marginal\" attr.type=\"double\"/>\n"
      "  <graph id=\"G\" edgedefault=\"undirected\">\n";
  for (std::uint32_t id : net.nodes) {
    out += "    <node id=\"n" + std::to_string(id) + "\"><data key=\"d0\">" +
           xml_escape(net.labels[id]) + "</data>";
    const int c = id < net.class_of.size() ? net.class_of[id] : -1;
    if (c >= 0 && static_cast<std::size_t>(c) < class_names.size()) {
      out += "<data key=\"d1\">" + xml_escape(class_names[c]) + "</data>";
      out += "<data key=\"d2\">" + class_color(static_cast<std::size_t>(c), class_names.size()) +
             "</data>";
    }
    out += "</node>\n";
  }
  for (const auto& e : net.edges)
    out += "    <edge source=\"n" + std::to_string(e.i) + "\" target=\"n" + std::to_string(e.j) +
           "\"><data key=\"d3\">" + fmt("%.17g", e.marginal) + "</data></edge>\n";
  out += "  </graph>\n</graphml>\n";
  return out;
}

std::string network_stats_json(const LargeNetwork& net, const ClassStats* class_stats) {
  nlohmann::json j;
  j["tau"] = net.tau;
  j["node_count"] = net.node_count();
  j["edge_count"] = net.edge_count();
  j["average_degree"] = net.average_degree();
  nlohmann::json hist = nlohmann::json::object();
  for (const auto& [deg, cnt] : degree_histogram(net)) hist[std::to_string(deg)] = cnt;
  j["degree_histogram"] = hist;
  if (class_stats) {
    auto& arr = j["class_stats"] = nlohmann::json::array();
    for (const auto& c : class_stats->classes) {
      nlohmann::json jc;
      jc["class"] = c.name;
      jc["members"] = c.members;
      jc["intra_variance"] = c.intra_variance;
      jc["inter_variance"] = c.inter_variance;
      jc["ratio"] = c.ratio;
      arr.push_back(jc);
    }
    j["classified_nodes"] = class_stats->classified_nodes;
  }
  return j.dump(2) + "\n";
}

std::string trace_to_csv(const ChainTrace& trace) {
  const std::size_t p = trace.p;
  std::string out = "t,log_u,accept_corr,accept_graph";
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = i + 1; j < p; ++j)
      out += ",g_" + std::to_string(i + 1) + "_" + std::to_string(j + 1);
  out += "\n";
  const std::size_t pairs = trace.n_pairs();
  for (std::size_t t = 0; t < trace.length(); ++t) {
    out += std::to_string(t) + "," + fmt("%.17g", trace.log_u[t]) + ",";
    out += trace.accept_corr.empty() ? "0" : std::to_string(trace.accept_corr[t]);
    out += ",";
    out += trace.accept_graph.empty() ? "0" : std::to_string(trace.accept_graph[t]);
    for (std::size_t k = 0; k < pairs; ++k)
      out += "," + std::to_string(static_cast<int>(trace.edge_bits[t * pairs + k]));
    out += "\n";
  }
  return out;
}

ChainTrace trace_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw ParseError("trace file is empty");
  std::size_t cols = 1;
  for (char c : line)
    if (c == ',') ++cols;
  if (cols < 5) throw ParseError("trace header has too few columns");
  const std::size_t pairs = cols - 4;
  // p from p(p-1)/2 = pairs
  const std::size_t p =
      static_cast<std::size_t>((1.0 + std::sqrt(1.0 + 8.0 * static_cast<double>(pairs))) / 2.0);
  if (pair_count(p) != pairs) throw ParseError("trace pair columns do not form a triangle");

  ChainTrace trace;
  trace.p = p;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    ++row;
    std::istringstream ls(line);
    std::string tok;
    std::vector<std::string> toks;
    while (std::getline(ls, tok, ',')) toks.push_back(tok);
    if (toks.size() != cols)
      throw ParseError("trace row " + std::to_string(row) + " has " +
                       std::to_string(toks.size()) + " cells, expected " + std::to_string(cols));
    try {
      trace.log_u.push_back(std::stod(toks[1]));
      trace.accept_corr.push_back(static_cast<std::uint8_t>(std::stoi(toks[2])));
      trace.accept_graph.push_back(static_cast<std::uint8_t>(std::stoi(toks[3])));
      for (std::size_t k = 0; k < pairs; ++k)
        trace.edge_bits.push_back(static_cast<std::uint8_t>(std::stoi(toks[4 + k])));
    } catch (const std::logic_error&) {
      throw ParseError("trace row " + std::to_string(row) + " has a non-numeric cell");
    }
  }
  if (trace.log_u.empty()) throw ParseError("trace file has no data rows");
  trace.n_iter = trace.log_u.size() - 1;
  return trace;
}

ChainTrace load_trace_csv(const std::string& path) { return trace_from_csv(read_text_file(path)); }

}  // namespace srgg
