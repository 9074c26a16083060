#include <cstdio>
#include <fstream>

#include "doctest.h"
#include "rdciag/config.hpp"
#include "rdciag/trace_io.hpp"

using namespace rdciag;

namespace {

const char* kMinimal = R"(%
[problem]
kind = best_approx
v = 1.0, 2.0
omega0 = box 0 0 : 1 1
constraint = halfspace 1 1 : 1.5

[method]
method = rdciag
alpha = 0.05

[run]
seeds = 1, 2
)";

std::string minimal() { return std::string(kMinimal).substr(2); }

}  // namespace

TEST_SUITE("config") {

TEST_CASE("minimal config fills defaults") {
  ParseResult r = parse_config_text(minimal());
  REQUIRE(r.ok());
  const ExperimentConfig& c = *r.config;
  CHECK(c.problem_kind == ProblemKind::best_approx);
  CHECK(c.method == Method::rdciag);
  CHECK(c.alpha == 0.05);
  CHECK(!c.alpha_auto);
  CHECK(c.max_iter == 100000);
  CHECK(c.gap_tol == 1e-8);
  CHECK(c.record_every == 0);
  CHECK(c.delay.kind == DelaySchedule::Kind::zero);
  CHECK(c.seeds.size() == 2);
  CHECK(!c.timing);
}

TEST_CASE("alpha auto without sigma or reference is rejected") {
  std::string text = minimal();
  size_t pos = text.find("alpha = 0.05");
  text.replace(pos, 12, "alpha = auto");
  ParseResult r = parse_config_text(text);
  CHECK(!r.ok());
  bool mentioned = false;
  for (const auto& e : r.errors)
    if (e.message.find("auto") != std::string::npos) mentioned = true;
  CHECK(mentioned);

  // with sigma present the same config parses
  text += "\n[method]\nsigma = 0.5\n";
  ParseResult r2 = parse_config_text(text);
  CHECK(r2.ok());
}

TEST_CASE("negative alpha names the offending line") {
  std::string text = minimal();
  size_t pos = text.find("alpha = 0.05");
  text.replace(pos, 12, "alpha = -1");
  ParseResult r = parse_config_text(text);
  REQUIRE(!r.ok());
  bool found = false;
  for (const auto& e : r.errors)
    if (e.line == 9 && e.message.find("alpha") != std::string::npos)
      found = true;
  CHECK(found);
}

TEST_CASE("all validation errors are reported in one pass") {
  std::string text = minimal();
  text += "bogus_key = 1\n";
  size_t pos = text.find("alpha = 0.05");
  text.replace(pos, 12, "alpha = -1");
  ParseResult r = parse_config_text(text);
  CHECK(r.errors.size() >= 2);
}

TEST_CASE("unknown section and key") {
  std::string text = minimal() + "\n[wat]\nx = 1\n";
  ParseResult r = parse_config_text(text);
  CHECK(!r.ok());
}

TEST_CASE("round trip through serialize/parse") {
  std::string text = minimal() +
                     "\n[delay]\nkind = random_bounded\ntau = 2\nseed = 7\n";
  ParseResult r = parse_config_text(text);
  REQUIRE(r.ok());
  std::string s1 = serialize_config(*r.config);
  ParseResult r2 = parse_config_text(s1);
  REQUIRE(r2.ok());
  std::string s2 = serialize_config(*r2.config);
  CHECK(s1 == s2);
}

TEST_CASE("num config parses sources and links") {
  const char* text = R"([problem]
kind = num
lambda = 0.1
source = log : 10
source = quad 1.0 0.5 : 4
link = 1.5 : 0 1

[method]
method = dual_pg
alpha = 0.02

[run]
seeds = 3
)";
  ParseResult r = parse_config_text(text);
  REQUIRE(r.ok());
  const auto& spec = std::get<NumSpec>(r.config->problem);
  REQUIRE(spec.sources.size() == 2);
  CHECK(spec.sources[0].utility == UtilityKind::log1p);
  CHECK(spec.sources[1].q == 1.0);
  CHECK(spec.sources[1].p == 0.5);
  CHECK(spec.capacities == std::vector<double>{1.5});
  REQUIRE(spec.link_sources.size() == 1);
  CHECK(spec.link_sources[0] == std::vector<int>{0, 1});

  std::string s1 = serialize_config(*r.config);
  ParseResult r2 = parse_config_text(s1);
  REQUIRE(r2.ok());
  CHECK(serialize_config(*r2.config) == s1);
}

TEST_CASE("trace csv round trip") {
  Trace t;
  t.rows.push_back({0, 1.25, 0.5, 0.1, 2.0, 0.3, 1, 0.0});
  t.rows.push_back(
      {10, -0.333333333333333315, 1e-9, 4e-17, 1.0000000001, 0.0, 2, 0.0});
  std::string path = "test_trace_roundtrip.csv";
  write_trace_csv(t, path);

  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  CHECK(header == "k,D,gap,dist2,gamma,primal_err2,max_age,seconds");

  Trace back = read_trace_csv(path);
  REQUIRE(back.rows.size() == 2);
  for (size_t r = 0; r < 2; ++r) {
    CHECK(back.rows[r].k == t.rows[r].k);
    CHECK(back.rows[r].D == t.rows[r].D);
    CHECK(back.rows[r].gap == t.rows[r].gap);
    CHECK(back.rows[r].dist2 == t.rows[r].dist2);
    CHECK(back.rows[r].gamma == t.rows[r].gamma);
    CHECK(back.rows[r].primal_err2 == t.rows[r].primal_err2);
    CHECK(back.rows[r].max_age == t.rows[r].max_age);
  }
  std::remove(path.c_str());
}

TEST_CASE("trace csv with missing reference writes empty fields") {
  Trace t;
  TraceRow r;
  r.k = 5;
  r.D = 1.0;
  r.gap = 0.25;
  r.dist2 = r.gamma = r.primal_err2 = std::numeric_limits<double>::quiet_NaN();
  r.max_age = 0;
  r.seconds = 0.0;
  t.rows.push_back(r);
  std::string path = "test_trace_empty.csv";
  write_trace_csv(t, path);
  std::ifstream in(path);
  std::string header, line;
  std::getline(in, header);
  std::getline(in, line);
  CHECK(line == "5,1,0.25,,,,0,0");
  Trace back = read_trace_csv(path);
  REQUIRE(back.rows.size() == 1);
  CHECK(std::isnan(back.rows[0].dist2));
  CHECK(std::isnan(back.rows[0].gamma));
  CHECK(std::isnan(back.rows[0].primal_err2));
  std::remove(path.c_str());
}

TEST_CASE("empty trace writes a header-only file") {
  Trace t;
  std::string path = "test_trace_headeronly.csv";
  write_trace_csv(t, path);
  std::ifstream in(path);
  std::string header, extra;
  CHECK(std::getline(in, header));
  CHECK(header == "k,D,gap,dist2,gamma,primal_err2,max_age,seconds");
  CHECK(!std::getline(in, extra));
  std::remove(path.c_str());
}

}  // TEST_SUITE
