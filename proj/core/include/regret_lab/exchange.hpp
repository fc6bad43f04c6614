#pragma once

// File formats shared with other tools:
//   graph          {"nodes": [ids], "edges": [{"from": id, "to": id, "label": 1|-1}]}
//   node function  {"<node id>": value, ...}
//   panel          {"d": int, "n": 2, "mu": real, "q": {"<history>": [q1, q2]}}
//   LP report, game transcript (JSON) and rate table (CSV).

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "regret_lab/corrector.hpp"
#include "regret_lab/errors.hpp"
#include "regret_lab/digraph.hpp"
#include "regret_lab/game.hpp"
#include "regret_lab/graph_calculus.hpp"
#include "regret_lab/panel.hpp"

namespace regret_lab {

/// Malformed exchange document; `field` names the offending key.
class FormatError : public Error {
 public:
  FormatError(std::string field, const std::string& what)
      : Error(field.empty() ? what : field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

std::string graph_to_json(const LabeledDigraph& g);
LabeledDigraph graph_from_json(std::string_view text);

std::string node_function_to_json(const NodeFunction& v);
/// Requires exactly one value per node 0..node_count-1.
NodeFunction node_function_from_json(std::string_view text, std::size_t node_count);

std::string panel_to_json(const ExpertPanel& panel);
ExpertPanel panel_from_json(std::string_view text);

std::string lp_report_to_json(const LPReport& report);
std::string transcript_to_json(const GameTranscript& transcript, const std::string& investor,
                               const std::string& market);

/// Header N,epsilon,gap,gap_over_eps,slope; the fitted slope repeats per row.
std::string rate_table_to_csv(const RateTable& table);

/// Shortest decimal text that parses back to the same double.
std::string format_double(double v);

/// Writes to a sibling temporary file and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);
std::string read_file(const std::filesystem::path& path);

/// 64-bit FNV-1a, used for run manifests.
std::uint64_t fnv1a64(std::string_view data);

}  // namespace regret_lab
