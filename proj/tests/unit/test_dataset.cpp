#include <cmath>
#include <map>
#include <numeric>
#include <random>

#include "doctest.h"

#include "levelbn/errors.hpp"
#include "support/fixtures.hpp"

using namespace levelbn;
using namespace levelbn::testing;

namespace {

std::vector<std::uint32_t> col(const Dataset& d, int j) {
  auto c = d.column(j);
  return {c.begin(), c.end()};
}

// Reference counting with a std::map keyed by the tuple of member codes.
std::map<std::vector<std::uint32_t>, std::uint64_t> tuple_counts(const Dataset& d, VarSet s) {
  std::map<std::vector<std::uint32_t>, std::uint64_t> out;
  for (int i = 0; i < d.n(); ++i) {
    std::vector<std::uint32_t> key;
    s.for_each([&](int v) { key.push_back(d.cell(i, v)); });
    ++out[key];
  }
  return out;
}

}  // namespace

TEST_CASE("parse_csv reads string and integer columns") {
  const Dataset d = parse_csv("a,b,c\nred,3,1\nblue,1,0\nred,3,1\ngreen,7,1\n");
  CHECK(d.p() == 3);
  CHECK(d.n() == 4);
  CHECK(d.names() == std::vector<std::string>{"a", "b", "c"});
  // Strings: first appearance order.
  CHECK(d.arity(0) == 3);
  CHECK(col(d, 0) == std::vector<std::uint32_t>{0, 1, 0, 2});
  CHECK(d.variable(0).labels == std::vector<std::string>{"red", "blue", "green"});
  // Undeclared integers: compacted in ascending numeric order.
  CHECK(d.arity(1) == 3);
  CHECK(col(d, 1) == std::vector<std::uint32_t>{1, 0, 1, 2});
  CHECK(d.variable(1).labels == std::vector<std::string>{"1", "3", "7"});
  CHECK(d.arity(2) == 2);
}

TEST_CASE("declared arities keep integer codes literal") {
  LoadOptions opts;
  opts.declared_arities = {{"b", 8}};
  const Dataset d = parse_csv("a,b\n0,3\n1,1\n0,7\n", opts);
  CHECK(d.arity(1) == 8);
  CHECK(col(d, 1) == std::vector<std::uint32_t>{3, 1, 7});
  opts.declared_arities = {{"b", 5}};
  CHECK_THROWS_AS(parse_csv("a,b\n0,3\n1,1\n0,7\n", opts), IngestError);
  opts.declared_arities = {{"zzz", 5}};
  CHECK_THROWS_AS(parse_csv("a,b\n0,3\n", opts), IngestError);
}

TEST_CASE("quoted fields, blank lines and CRLF") {
  const Dataset d = parse_csv("\"x, y\",z\r\n\"a,\"\"b\"\"\",1\r\n\r\nplain,2\r\n");
  CHECK(d.names() == std::vector<std::string>{"x, y", "z"});
  CHECK(d.n() == 2);
  CHECK(d.variable(0).labels[0] == "a,\"b\"");
}

TEST_CASE("malformed input is rejected with row and column context") {
  CHECK_THROWS_AS(parse_csv(""), IngestError);
  CHECK_THROWS_AS(parse_csv("a,b\n"), IngestError);
  CHECK_THROWS_AS(parse_csv("a,a\n1,2\n"), IngestError);
  try {
    parse_csv("a,b\n1,2\n3\n");
    FAIL("ragged row accepted");
  } catch (const IngestError& e) {
    CHECK(std::string(e.what()).find("row 3") != std::string::npos);
  }
  try {
    parse_csv("a,b\n1,2\n3,\n");
    FAIL("missing cell accepted");
  } catch (const IngestError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("row 3") != std::string::npos);
    CHECK(msg.find("'b'") != std::string::npos);
  }
}

TEST_CASE("column selection") {
  LoadOptions opts;
  opts.columns = {"c", "a"};
  const Dataset d = parse_csv("a,b,c\n1,2,3\n4,5,6\n", opts);
  CHECK(d.names() == std::vector<std::string>{"c", "a"});
  LoadOptions first;
  first.first_columns = 2;
  CHECK(parse_csv("a,b,c\n1,2,3\n", first).names() == std::vector<std::string>{"a", "b"});
  opts.columns = {"nope"};
  CHECK_THROWS_AS(parse_csv("a,b\n1,2\n", opts), IngestError);
}

TEST_CASE("sidecar arities and explicit overrides") {
  TempDir dir;
  const auto csv = dir.file("data.csv");
  write_text(csv, "a,b\n0,1\n1,1\n");
  write_text(sidecar_path(csv), R"({"a": 3, "b": 4})");
  CHECK(sidecar_path(csv).filename() == "data.meta.json");
  Dataset d = load_csv(csv);
  CHECK(d.arity(0) == 3);
  CHECK(d.arity(1) == 4);
  LoadOptions opts;
  opts.declared_arities = {{"b", 2}};
  d = load_csv(csv, opts);
  CHECK(d.arity(1) == 2);
  opts.use_sidecar = false;
  opts.declared_arities.clear();
  CHECK(load_csv(csv, opts).arity(0) == 2);
  write_text(sidecar_path(csv), R"({"arities": {"a": 5}})");
  CHECK(load_csv(csv).arity(0) == 5);
  write_text(sidecar_path(csv), "{not json");
  CHECK_THROWS_AS(load_csv(csv), IngestError);
  CHECK_THROWS_AS(load_csv(dir.file("missing.csv")), IngestError);
}

TEST_CASE("write_csv and write_sidecar round trip") {
  TempDir dir;
  const SyntheticData s = generate_synthetic({.seed = 4, .p = 6, .n = 40, .max_arity = 4, .edge_prob = 0.4});
  const auto path = dir.file("s.csv");
  write_csv(s.data, path);
  write_sidecar(s.data, path);
  const Dataset back = load_csv(path);
  CHECK(back.fingerprint() == s.data.fingerprint());
}

TEST_CASE("Dataset validates its invariants") {
  CHECK_THROWS_AS(make_dataset({{0, 1, 2}}, {2}), ParameterError);
  CHECK_THROWS_AS(make_dataset({{0, 1}, {0}}, {2, 2}), ParameterError);
  CHECK_THROWS_AS(make_dataset({{}}, {2}), ParameterError);
  std::vector<std::vector<std::uint32_t>> cols(31, std::vector<std::uint32_t>{0});
  CHECK_THROWS_AS(make_dataset(cols, std::vector<int>(31, 1)), ParameterError);
  const Dataset d = make_dataset({{0, 1, 1}, {1, 0, 0}}, {2, 2});
  CHECK(d.index_of("V1") == 1);
  CHECK_FALSE(d.index_of("V9").has_value());
}

TEST_CASE("select, permute_rows and fingerprint") {
  const Dataset d = random_dataset(3, 4, 30, 3);
  const std::vector<int> cols{2, 0};
  const Dataset s = d.select(cols);
  CHECK(col(s, 0) == col(d, 2));
  CHECK(s.names() == std::vector<std::string>{"V2", "V0"});
  std::vector<std::size_t> perm(30);
  std::iota(perm.rbegin(), perm.rend(), 0);
  const Dataset r = d.permute_rows(perm);
  CHECK(r.cell(0, 1) == d.cell(29, 1));
  CHECK(r.fingerprint() != d.fingerprint());
  CHECK(d.permute_rows(perm).fingerprint() == r.fingerprint());
}

TEST_CASE("count_configurations matches tuple counting") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    const Dataset d = random_dataset(rng(), 5, 60, 4);
    const VarSet s(static_cast<std::uint32_t>(rng() % 31 + 1));
    const ContingencyCounts c = count_configurations(d, s);
    const auto ref = tuple_counts(d, s);
    REQUIRE(c.entries.size() == ref.size());
    CHECK(c.total() == 60);
    CHECK(c.mixed_radix);
    double sigma = 1;
    s.for_each([&](int v) { sigma *= d.arity(v); });
    CHECK(c.sigma == sigma);
    // Mixed-radix decode, first member least significant.
    for (const auto& [code, count] : c.entries) {
      std::vector<std::uint32_t> key;
      std::uint64_t rest = code;
      s.for_each([&](int v) {
        key.push_back(static_cast<std::uint32_t>(rest % static_cast<std::uint64_t>(d.arity(v))));
        rest /= static_cast<std::uint64_t>(d.arity(v));
      });
      REQUIRE(ref.count(key) == 1);
      CHECK(ref.at(key) == count);
    }
  }
  CHECK_THROWS_AS(count_configurations(random_dataset(1, 3, 5, 2), VarSet{}), ParameterError);
  CHECK_THROWS_AS(count_configurations(random_dataset(1, 3, 5, 2), VarSet::singleton(3)), ParameterError);
}

TEST_CASE("large joint spaces use the sparse and compacted paths") {
  // 25 variables of arity 4: 2^50 codes, beyond the dense limit.
  Dataset d = random_dataset(5, 25, 300, 4);
  ContingencyCounts c = count_configurations(d, VarSet::full(25));
  CHECK(c.total() == 300);
  CHECK(c.entries.size() == tuple_counts(d, VarSet::full(25)).size());

  // 30 variables of arity 5: 5^30 > 2^64, so codes are compacted.
  std::mt19937_64 rng(9);
  std::vector<std::vector<std::uint32_t>> cols(30);
  for (auto& column : cols) {
    for (int i = 0; i < 50; ++i) column.push_back(static_cast<std::uint32_t>(rng() % 5));
  }
  // Duplicate a row so at least one configuration repeats.
  for (auto& column : cols) column.push_back(column.front());
  d = make_dataset(cols, std::vector<int>(30, 5));
  c = count_configurations(d, VarSet::full(30));
  CHECK_FALSE(c.mixed_radix);
  CHECK(c.total() == 51);
  CHECK(c.entries.size() == tuple_counts(d, VarSet::full(30)).size());
  CHECK(c.sigma == doctest::Approx(std::pow(5.0, 30)));
}

TEST_CASE("synthetic generation is deterministic and honours its parameters") {
  const SyntheticSpec spec{.seed = 42, .p = 7, .n = 120, .max_arity = 3, .edge_prob = 0.5};
  const SyntheticData a = generate_synthetic(spec);
  const SyntheticData b = generate_synthetic(spec);
  CHECK(a.data.fingerprint() == b.data.fingerprint());
  CHECK(a.dag.parents == b.dag.parents);
  CHECK(a.data.p() == 7);
  CHECK(a.data.n() == 120);
  for (int j = 0; j < 7; ++j) {
    CHECK(a.data.arity(j) >= 2);
    CHECK(a.data.arity(j) <= 3);
  }
  // Parents come before children in the sampling order.
  VarSet placed;
  for (int v : a.dag.order) {
    CHECK(a.dag.parents[static_cast<std::size_t>(v)].is_subset_of(placed));
    placed = placed.with(v);
  }
  SyntheticSpec other = spec;
  other.seed = 43;
  CHECK(generate_synthetic(other).data.fingerprint() != a.data.fingerprint());
  other.n = 0;
  CHECK_THROWS_AS(generate_synthetic(other), ParameterError);
  other = spec;
  other.max_arity = 5;
  CHECK_THROWS_AS(generate_synthetic(other), ParameterError);
  CHECK(generate_synthetic({.seed = 1, .p = 5, .n = 10, .max_arity = 2, .edge_prob = 0.0}).dag.edge_count() == 0);
  CHECK(generate_synthetic({.seed = 1, .p = 5, .n = 10, .max_arity = 2, .edge_prob = 1.0}).dag.edge_count() == 10);
}
