#include "regret_lab/exchange.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <system_error>

#include "regret_lab/errors.hpp"

namespace regret_lab {

using nlohmann::json;

namespace {

json parse_document(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw FormatError("", std::string("invalid JSON: ") + e.what());
  }
}

template <typename T>
T field_as(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object() || !obj.contains(key)) throw FormatError(path + key, "missing");
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw FormatError(path + key, "has the wrong type");
  }
}

std::size_t as_node_id(const json& v, const std::string& field) {
  if (!v.is_number_integer() || v.get<long long>() < 0) {
    throw FormatError(field, "must be a non-negative integer node id");
  }
  return v.get<std::size_t>();
}

}  // namespace

std::string format_double(double v) {
  if (!std::isfinite(v)) return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string graph_to_json(const LabeledDigraph& g) {
  json doc;
  doc["nodes"] = json::array();
  for (std::size_t x = 0; x < g.node_count(); ++x) doc["nodes"].push_back(x);
  doc["edges"] = json::array();
  for (const Edge& e : g.edges()) {
    doc["edges"].push_back({{"from", e.from}, {"to", e.to}, {"label", to_int(e.label)}});
  }
  return doc.dump(2) + "\n";
}

LabeledDigraph graph_from_json(std::string_view text) {
  const json doc = parse_document(text);
  if (!doc.is_object()) throw FormatError("", "graph document must be an object");
  if (!doc.contains("nodes") || !doc["nodes"].is_array()) throw FormatError("nodes", "missing array");
  if (!doc.contains("edges") || !doc["edges"].is_array()) throw FormatError("edges", "missing array");

  const std::size_t n = doc["nodes"].size();
  std::vector<char> present(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t id = as_node_id(doc["nodes"][i], "nodes[" + std::to_string(i) + "]");
    if (id >= n || present[id]) {
      throw FormatError("nodes[" + std::to_string(i) + "]", "node ids must be 0..n-1 without repeats");
    }
    present[id] = 1;
  }
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < doc["edges"].size(); ++i) {
    const std::string path = "edges[" + std::to_string(i) + "].";
    const json& e = doc["edges"][i];
    if (!e.is_object()) throw FormatError("edges[" + std::to_string(i) + "]", "must be an object");
    if (!e.contains("from")) throw FormatError(path + "from", "missing");
    if (!e.contains("to")) throw FormatError(path + "to", "missing");
    const int label = field_as<int>(e, "label", path);
    if (label != 1 && label != -1) throw FormatError(path + "label", "must be 1 or -1");
    edges.push_back({as_node_id(e["from"], path + "from"), as_node_id(e["to"], path + "to"),
                     symbol_from_int(label)});
  }
  return LabeledDigraph::from_edges(n, edges);
}

std::string node_function_to_json(const NodeFunction& v) {
  // Keys in numeric order; json's std::map would sort them as strings.
  std::ostringstream out;
  out << "{\n";
  for (std::size_t x = 0; x < v.size(); ++x) {
    out << "  \"" << x << "\": " << format_double(v[x]) << (x + 1 < v.size() ? ",\n" : "\n");
  }
  out << "}\n";
  return out.str();
}

NodeFunction node_function_from_json(std::string_view text, std::size_t node_count) {
  const json doc = parse_document(text);
  if (!doc.is_object()) throw FormatError("", "node function must be an object");
  NodeFunction v(node_count);
  std::vector<char> seen(node_count, 0);
  for (const auto& [key, value] : doc.items()) {
    std::size_t id = 0;
    const auto res = std::from_chars(key.data(), key.data() + key.size(), id);
    if (res.ec != std::errc() || res.ptr != key.data() + key.size() || id >= node_count) {
      throw FormatError(key, "is not a node id of a " + std::to_string(node_count) + "-node graph");
    }
    if (!value.is_number()) throw FormatError(key, "value must be a number");
    v[id] = value.get<double>();
    if (!std::isfinite(v[id])) throw FormatError(key, "value must be finite");
    seen[id] = 1;
  }
  for (std::size_t x = 0; x < node_count; ++x) {
    if (!seen[x]) throw FormatError(std::to_string(x), "missing value");
  }
  return v;
}

std::string panel_to_json(const ExpertPanel& panel) {
  json doc;
  doc["d"] = panel.depth();
  doc["n"] = panel.experts();
  doc["mu"] = panel.mu();
  doc["q"] = json::object();
  for (std::size_t m = 0; m < panel.histories(); ++m) {
    const auto q = panel.q(m);
    doc["q"][MarketState(panel.depth(), static_cast<std::uint32_t>(m)).to_string()] =
        std::vector<double>(q.begin(), q.end());
  }
  return doc.dump(2) + "\n";
}

ExpertPanel panel_from_json(std::string_view text) {
  const json doc = parse_document(text);
  const int d = field_as<int>(doc, "d", "");
  const int n = field_as<int>(doc, "n", "");
  const double mu = field_as<double>(doc, "mu", "");
  if (d < 1 || d > kMaxDebruijnDepth) throw FormatError("d", "out of range");
  if (n < 2) throw FormatError("n", "must be at least 2");
  if (!(mu > 0.0 && mu < 1.0)) throw FormatError("mu", "must lie in (0, 1)");
  if (!doc.contains("q") || !doc["q"].is_object()) throw FormatError("q", "missing object");

  const std::size_t rows = std::size_t{1} << d;
  std::vector<std::vector<double>> q(rows);
  std::vector<char> seen(rows, 0);
  for (const auto& [key, value] : doc["q"].items()) {
    const std::string field = "q." + key;
    if (key.size() != static_cast<std::size_t>(d)) throw FormatError(field, "history length must equal d");
    std::size_t id = 0;
    try {
      id = MarketState::parse(key).id();
    } catch (const Error&) {
      throw FormatError(field, "history must use 0/1 or -/+ characters");
    }
    if (seen[id]) throw FormatError(field, "duplicate history");
    if (!value.is_array() || value.size() != static_cast<std::size_t>(n)) {
      throw FormatError(field, "must be an array of " + std::to_string(n) + " predictions");
    }
    for (const json& p : value) {
      if (!p.is_number()) throw FormatError(field, "predictions must be numbers");
      const double pv = p.get<double>();
      if (!(std::abs(pv) <= mu)) throw FormatError(field, "prediction exceeds mu");
      q[id].push_back(pv);
    }
    seen[id] = 1;
  }
  for (std::size_t m = 0; m < rows; ++m) {
    if (!seen[m]) {
      throw FormatError("q." + MarketState(d, static_cast<std::uint32_t>(m)).to_string(), "missing");
    }
  }
  return ExpertPanel(d, mu, std::move(q));
}

std::string lp_report_to_json(const LPReport& report) {
  json doc;
  doc["convention"] = std::string(to_string(report.convention));
  doc["mean_h"] = report.mean_h;
  doc["M_investor"] = report.M_investor;
  doc["M_market"] = report.M_market;
  doc["eulerian_average"] = report.eulerian_average;
  doc["tolerance"] = report.tolerance;
  doc["indifferent"] = report.indifferent;
  doc["cycle_count"] = report.cycle_rows.size();
  doc["cycle_rows"] = json::array();
  for (const CycleRow& row : report.cycle_rows) {
    doc["cycle_rows"].push_back({{"id", row.id}, {"length", row.length}, {"average", row.average}});
  }
  return doc.dump(2) + "\n";
}

std::string transcript_to_json(const GameTranscript& transcript, const std::string& investor,
                               const std::string& market) {
  json doc;
  doc["investor"] = investor;
  doc["market"] = market;
  doc["seed"] = transcript.seed;
  doc["steps"] = json::array();
  for (const TranscriptStep& s : transcript.steps) {
    doc["steps"].push_back(
        {{"m", s.m.to_string()}, {"f", s.f}, {"b", to_int(s.b)}, {"x", {s.x[0], s.x[1]}}});
  }
  doc["final_x"] = {transcript.final_x[0], transcript.final_x[1]};
  doc["final_payoff"] = transcript.final_payoff;
  return doc.dump() + "\n";
}

std::string rate_table_to_csv(const RateTable& table) {
  std::ostringstream out;
  out << "N,epsilon,gap,gap_over_eps,slope\n";
  for (const RateRow& row : table.rows) {
    out << row.horizon << ',' << format_double(row.epsilon) << ',' << format_double(row.gap) << ','
        << format_double(row.gap_over_eps) << ',' << format_double(table.slope) << '\n';
  }
  return out.str();
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open " + tmp.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw Error("failed writing " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error("cannot move output into place at " + path.string());
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace regret_lab
