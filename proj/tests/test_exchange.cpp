#include <gtest/gtest.h>

#include <filesystem>

#include "oracles.hpp"
#include "regret_lab/exchange.hpp"

using namespace regret_lab;

TEST(Exchange, GraphRoundTrip) {
  auto g = random_eulerian_outdeg2(6, 3);
  auto back = graph_from_json(graph_to_json(g));
  ASSERT_EQ(back.node_count(), 6u);
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    EXPECT_EQ(back.edge(e).from, g.edge(e).from);
    EXPECT_EQ(back.edge(e).to, g.edge(e).to);
    EXPECT_EQ(back.edge(e).label, g.edge(e).label);
  }
}

TEST(Exchange, GraphErrorsNameTheField) {
  try {
    graph_from_json(R"({"nodes": [0, 1], "edges": [{"from": 0, "to": 1, "label": 2}]})");
    FAIL();
  } catch (const FormatError& e) {
    EXPECT_EQ(e.field(), "edges[0].label");
  }
  EXPECT_THROW(graph_from_json("{"), FormatError);
  EXPECT_THROW(graph_from_json(R"({"nodes": [0, 0], "edges": []})"), FormatError);
  EXPECT_THROW(graph_from_json(R"({"nodes": [0], "edges": [{"from": 0, "to": 0, "label": 1}]})"),
               StructuralError);
}

TEST(Exchange, NodeFunctionRoundTripIsExact) {
  auto v = oracle::random_function(12, 8, -1e3, 1e3);
  auto text = node_function_to_json(v);
  EXPECT_LT(text.find("\"2\""), text.find("\"10\""));
  EXPECT_EQ(node_function_from_json(text, 12), v);
  EXPECT_THROW(node_function_from_json(text, 13), FormatError);
  EXPECT_THROW(node_function_from_json(text, 11), FormatError);
  EXPECT_THROW(node_function_from_json(R"({"0": "x"})", 1), FormatError);
}

TEST(Exchange, PanelRoundTrip) {
  auto p = ExpertPanel::random(3, 2, 0.7, 5);
  auto back = panel_from_json(panel_to_json(p));
  EXPECT_EQ(back.depth(), 3);
  EXPECT_EQ(back.mu(), 0.7);
  for (std::size_t m = 0; m < 8; ++m) {
    EXPECT_EQ(back.q(m)[0], p.q(m)[0]);
    EXPECT_EQ(back.q(m)[1], p.q(m)[1]);
  }
  EXPECT_NE(panel_to_json(p).find("\"011\""), std::string::npos);
}

TEST(Exchange, PanelErrors) {
  auto field_of = [](const char* text) {
    try {
      panel_from_json(text);
    } catch (const FormatError& e) {
      return e.field();
    }
    return std::string("<none>");
  };
  EXPECT_EQ(field_of(R"({"d": 1, "n": 2, "mu": 1.5, "q": {}})"), "mu");
  EXPECT_EQ(field_of(R"({"d": 1, "n": 2, "mu": 0.5, "q": {"0": [0, 0]}})"), "q.1");
  EXPECT_EQ(field_of(R"({"d": 1, "n": 2, "mu": 0.5, "q": {"0": [0, 0], "1": [0.6, 0]}})"), "q.1");
  EXPECT_EQ(field_of(R"({"d": 1, "n": 2, "mu": 0.5, "q": {"0": [0, 0], "x": [0, 0]}})"), "q.x");
  EXPECT_EQ(field_of(R"({"n": 2, "mu": 0.5, "q": {}})"), "d");
}

TEST(Exchange, ReportsAndTables) {
  auto g = debruijn(2);
  auto report = verify_indifference(g, oracle::random_function(4, 2));
  auto text = lp_report_to_json(report);
  EXPECT_NE(text.find("\"indifferent\": true"), std::string::npos);
  EXPECT_NE(text.find("\"cycle_count\": 6"), std::string::npos);

  RateTable table;
  table.slope = 1.0;
  table.rows.push_back({4, 0.5, 0.25, 0.5});
  EXPECT_EQ(rate_table_to_csv(table), "N,epsilon,gap,gap_over_eps,slope\n4,0.5,0.25,0.5,1\n");
}

TEST(Exchange, FormatDoubleRoundTrips) {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 12345678.9}) {
    EXPECT_EQ(std::stod(format_double(v)), v);
  }
  EXPECT_EQ(format_double(0.5), "0.5");
}

TEST(Exchange, Fnv1a) {
  EXPECT_EQ(fnv1a64(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(fnv1a64("a"), 0xaf63dc4c8601ec8cULL);
}

TEST(Exchange, AtomicWrite) {
  auto dir = std::filesystem::temp_directory_path() / "regret_lab_exchange_test";
  std::filesystem::create_directories(dir);
  auto path = dir / "out.json";
  write_file_atomic(path, "first");
  write_file_atomic(path, "second");
  EXPECT_EQ(read_file(path), "second");
  EXPECT_FALSE(std::filesystem::exists(dir / "out.json.tmp"));
  std::filesystem::remove_all(dir);
  EXPECT_THROW(read_file(dir / "missing"), Error);
}
