#include <cstdlib>
#include <string>

#include <gtest/gtest.h>

#include "pdrwm/errors.hpp"
#include "pdrwm/experiment/config.hpp"

namespace pdrwm::experiment {
namespace {

std::string config_error(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

TEST(Config, ParsesFullCustomConfig) {
  const auto c = parse_config(R"(
scenario: custom
target: {family: polynomial, p: 3}
field: {family: quadratic, offset: 2}
h: 0.5
start: [1.5]
n_steps: 100
seed: 9
output_dir: somewhere
)");
  EXPECT_EQ(c.scenario, Scenario::Custom);
  EXPECT_EQ(c.target.family, "polynomial");
  EXPECT_EQ(c.target.p, 3.0);
  EXPECT_EQ(c.field.offset, 2.0);
  EXPECT_EQ(*c.h, 0.5);
  EXPECT_EQ(*c.n_steps, 100u);
  EXPECT_EQ(c.seed, 9u);
  EXPECT_EQ(c.output_dir, "somewhere");
  EXPECT_EQ(c.digest.size(), 16u);
}

TEST(Config, DigestIgnoresFormattingButNotValues) {
  const auto a = parse_config("scenario: lemma2_drift\nseed: 4\ngrid: [20, 40]\n");
  const auto b = parse_config("# comment\nseed:    4\ngrid:\n  - 20.0\n  - 40\nscenario: lemma2_drift\n");
  const auto c = parse_config("scenario: lemma2_drift\nseed: 5\ngrid: [20, 40]\n");
  EXPECT_EQ(a.digest, b.digest);
  EXPECT_NE(a.digest, c.digest);
}

TEST(Config, ErrorsNameTheOffendingKey) {
  EXPECT_NE(config_error("scenario: custom\nn_steps: 10\nbogus: 1\n").find("bogus"), std::string::npos);
  EXPECT_NE(config_error("scenario: lemma2_drift\ntarget: {family: exponential, q: 1}\n").find("target.q"),
            std::string::npos);
  EXPECT_NE(config_error("scenario: lemma2_drift\nh: fast\n").find("'h'"), std::string::npos);
  EXPECT_NE(config_error("scenario: lemma2_drift\nn_samples: 999\n").find("n_samples"), std::string::npos);
  EXPECT_NE(config_error("scenario: custom\nn_steps: 0\n").find("n_steps"), std::string::npos);
  EXPECT_NE(config_error("scenario: custom\n").find("n_steps"), std::string::npos);
  EXPECT_NE(config_error("scenario: lemma99\n").find("scenario"), std::string::npos);
  EXPECT_NE(config_error("seed: 1\n").find("scenario"), std::string::npos);
  EXPECT_NE(config_error("scenario: [unclosed\n"), "");
  EXPECT_NE(config_error(""), "");
}

TEST(Config, SpecsAreResolvedEagerly) {
  EXPECT_NE(config_error("scenario: custom\nn_steps: 10\ntarget: {family: subexponential, beta: 1.5}\n"), "");
  EXPECT_NE(config_error("scenario: custom\nn_steps: 10\ntarget: {family: ridge}\nstart: [1]\n"), "");
  EXPECT_NE(config_error("scenario: custom\nn_steps: 10\nfield: {family: spiral}\n"), "");
  EXPECT_NE(config_error("scenario: lemma2_drift\nlyapunov: {kind: exp_abs, s: -1}\n"), "");
}

TEST(Config, ScenarioNamesRoundTrip) {
  EXPECT_EQ(all_scenarios().size(), 12u);
  for (Scenario s : all_scenarios()) {
    EXPECT_EQ(parse_scenario(to_string(s)), s);
    EXPECT_FALSE(summary(s).empty());
  }
}

TEST(Config, OutputDirEnvironmentOverride) {
  const auto c = parse_config("scenario: figure3_data\noutput_dir: a/b\n");
  unsetenv(kOutputDirEnv);
  EXPECT_EQ(resolve_output_dir(c), "a/b");
  setenv(kOutputDirEnv, "/tmp/elsewhere", 1);
  EXPECT_EQ(resolve_output_dir(c), "/tmp/elsewhere");
  unsetenv(kOutputDirEnv);
}

}  // namespace
}  // namespace pdrwm::experiment
