#include <gtest/gtest.h>

#include <set>

#include "difftaylor/checker.hpp"
#include "difftaylor/errors.hpp"
#include "difftaylor/multiindex.hpp"

namespace difftaylor {
namespace {

CheckConfig small_config(std::vector<std::string> checks, std::size_t instances) {
  CheckConfig c;
  c.checks = std::move(checks);
  c.instances = instances;
  c.bounds = Bounds{2, 4, 2};
  return c;
}

TEST(Checker, RegistryNamesAreUnique) {
  std::set<std::string> names;
  for (const auto& info : registered_checks()) {
    EXPECT_TRUE(names.insert(info.name).second) << info.name;
    EXPECT_FALSE(info.description.empty());
  }
  for (const char* required : {"ring_axioms", "derivation_axioms", "hurwitz_ring_axioms", "tm1", "tm2", "ev1", "ev2",
                                "lemma83", "cor84", "homomorphism", "unit_inversion", "char_p_nilpotency"}) {
    EXPECT_TRUE(names.count(required)) << required;
  }
}

TEST(Checker, EveryCheckPassesOnSmallInstances) {
  const auto reports = run_suite(small_config({}, 15));
  ASSERT_EQ(reports.size(), registered_checks().size());
  for (std::size_t i = 0; i < reports.size(); ++i) {
    EXPECT_EQ(reports[i].check_name, registered_checks()[i].name);
    EXPECT_EQ(reports[i].instances, 15U);
    EXPECT_TRUE(reports[i].passed()) << reports[i].to_json().dump();
  }
}

TEST(Checker, ReportsDependOnlyOnTheConfig) {
  auto config = small_config({"tm1", "ev2", "cor84"}, 20);
  config.seed = 7;
  config.threads = 1;
  const auto serial = reports_to_jsonl(run_suite(config));
  config.threads = 4;
  EXPECT_EQ(reports_to_jsonl(run_suite(config)), serial);
  config.seed = 8;
  const auto reports = run_suite(config);
  EXPECT_EQ(reports.size(), 3U);
}

TEST(Checker, SingleCheckIsReplayable) {
  auto config = small_config({"tm1"}, 5);
  config.seed = 7;
  const auto reports = run_suite(config);
  ASSERT_EQ(reports.size(), 1U);
  EXPECT_EQ(reports[0].check_name, "tm1");
  bool failed = true;
  replay("tm1", 12345, "Q", Bounds{2, 4, 2}, &failed);
  EXPECT_FALSE(failed);
}

TEST(Checker, BinomialFaultIsDetected) {
  auto config = small_config({"hurwitz_ring_axioms", "ev2", "ring_axioms"}, 30);
  config.inject_fault = "binomial";
  config.max_failures = 1;
  const auto reports = run_suite(config);
  ASSERT_EQ(reports.size(), 3U);
  EXPECT_FALSE(reports[0].passed());
  EXPECT_FALSE(reports[1].passed());
  EXPECT_TRUE(reports[2].passed());
  ASSERT_EQ(reports[0].failures.size(), 1U);

  const auto& failure = reports[0].failures[0];
  bool failed = false;
  {
    fault::ScopedFault guard(fault::Kind::kBinomialTable);
    replay("hurwitz_ring_axioms", failure.seed, failure.field, failure.bounds, &failed);
  }
  EXPECT_TRUE(failed);
  replay("hurwitz_ring_axioms", failure.seed, failure.field, failure.bounds, &failed);
  EXPECT_FALSE(failed);
}

TEST(Checker, FailureRecordsAreShrunkAndSerialized) {
  auto config = small_config({"hurwitz_ring_axioms"}, 20);
  config.bounds = Bounds{3, 8, 3};
  config.inject_fault = "binomial";
  const auto reports = run_suite(config);
  ASSERT_FALSE(reports[0].passed());
  const auto json = reports[0].to_json();
  EXPECT_EQ(json["status"], "fail");
  const auto& f = json["failures"][0];
  for (const char* key : {"seed", "field", "bounds", "order", "inputs", "expected", "actual"}) {
    EXPECT_TRUE(f.contains(key)) << key;
  }

  const auto& failure = reports[0].failures[0];
  fault::ScopedFault guard(fault::Kind::kBinomialTable);
  bool failed = false;
  replay("hurwitz_ring_axioms", failure.seed, failure.field, failure.bounds, &failed);
  EXPECT_TRUE(failed);
  for (int dim = 0; dim < 3; ++dim) {
    Bounds lower = failure.bounds;
    if (dim == 0 && lower.degree > 0) --lower.degree;
    else if (dim == 1 && lower.trunc > 1) --lower.trunc;
    else if (dim == 2 && lower.m > 1) --lower.m;
    else continue;
    replay("hurwitz_ring_axioms", failure.seed, failure.field, lower, &failed);
    EXPECT_FALSE(failed) << "bound " << dim << " could still be lowered";
  }
}

TEST(Checker, ConfigParsing) {
  const auto c = parse_check_config(nlohmann::json::parse(
      R"({"seed": 9, "checks": ["ev1"], "instances": 12, "max_m": 1, "max_trunc": 5, "max_degree": 3, "fields": ["F7"]})"));
  EXPECT_EQ(c.seed, 9U);
  EXPECT_EQ(c.checks, std::vector<std::string>{"ev1"});
  EXPECT_EQ(c.instances, 12U);
  EXPECT_EQ(c.bounds, (Bounds{1, 5, 3}));
  EXPECT_EQ(c.fields, std::vector<std::string>{"F7"});

  auto path_of = [](const char* text) {
    try {
      parse_check_config(nlohmann::json::parse(text));
    } catch (const ValidationError& e) {
      return e.path();
    }
    return std::string("<no error>");
  };
  EXPECT_EQ(path_of(R"({"checks": ["ev1", "nosuch"]})"), "/checks/1");
  EXPECT_EQ(path_of(R"({"fields": ["F4"]})"), "/fields/0");
  EXPECT_EQ(path_of(R"({"max_trunc": 0})"), "/max_trunc");
  EXPECT_EQ(path_of(R"({"max_m": 4})"), "/max_m");
  EXPECT_EQ(path_of(R"({"colour": 1})"), "/colour");
  EXPECT_EQ(path_of(R"({"inject_fault": "other"})"), "/inject_fault");
  EXPECT_EQ(path_of(R"([1])"), "");
}

}  // namespace
}  // namespace difftaylor
