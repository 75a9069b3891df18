#include <gtest/gtest.h>

#include <algorithm>

#include "bbmsel/errors.hpp"
#include "cli/config_io.hpp"
#include "cli/manifest.hpp"

using namespace bbmsel;
using namespace bbmsel::cli;

namespace {

const char* kKilled = R"(
[law]
q = 0, 0, 1
[interval]
a = 10
[bbbm]
A = 1
[run]
mode = killed
horizon = 20
seed = 7
replicas = 2
)";

bool mentions(const std::vector<std::string>& w, const std::string& s) {
  return std::any_of(w.begin(), w.end(), [&](const std::string& x) { return x.find(s) != std::string::npos; });
}

}  // namespace

TEST(ConfigIo, MinimalKilled) {
  auto p = parse_config_text(kKilled);
  EXPECT_EQ(p.mode, Mode::Killed);
  EXPECT_DOUBLE_EQ(p.cfg.a.value(), 10.0);
  EXPECT_EQ(p.cfg.seed, 7u);
  EXPECT_TRUE(p.warnings.empty());
}

TEST(ConfigIo, BadLawNamesSection) {
  std::string text = kKilled;
  text.replace(text.find("0, 0, 1"), 7, "0, 0, 0.9");
  try {
    parse_config_text(text);
    FAIL();
  } catch (const DomainError& e) {
    EXPECT_NE(std::string(e.what()).find("[law]"), std::string::npos);
  }
}

TEST(ConfigIo, UnknownKeyRejected) {
  std::string text = kKilled;
  text.replace(text.find("a = 10"), 6, "a = 10\nb = 3");
  try {
    parse_config_text(text);
    FAIL();
  } catch (const DomainError& e) {
    EXPECT_NE(std::string(e.what()).find("interval.b"), std::string::npos);
  }
}

TEST(ConfigIo, MissingMode) {
  std::string text = kKilled;
  text.replace(text.find("mode = killed"), 13, "");
  EXPECT_THROW(parse_config_text(text), DomainError);
  EXPECT_EQ(parse_config_text(text, "killed").mode, Mode::Killed);
}

TEST(ConfigIo, AsymptoticRegimeWarning) {
  const char* text = R"(
[interval]
a = 20
[bbbm]
A = 5
epsilon = 0.2
eta = 1e-3
y = 3
zeta = 50
[run]
mode = bbbm
horizon = 10
)";
  auto p = parse_config_text(text);
  EXPECT_TRUE(mentions(p.warnings, "A^-17"));
}

TEST(ConfigIo, JsonRoundTrip) {
  auto p = parse_config_text(kKilled);
  auto j = config_to_json(p.cfg);
  EXPECT_EQ(config_to_json(config_from_json(j)).dump(), j.dump());
}

TEST(Manifest, Sha256KnownVector) {
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Manifest, RoundTrip) {
  ExperimentManifest m;
  auto p = parse_config_text(kKilled);
  m.cfg = p.cfg;
  m.mode = p.mode;
  m.code_version = code_version();
  m.events = true;
  m.outputs = {"series_0.csv", "summary.csv"};
  m.created_utc = "2000-01-01T00:00:00Z";
  auto text = serialize(m);
  auto back = parse_manifest(text);
  EXPECT_EQ(serialize(back), text);
  EXPECT_EQ(back.content_hash(), m.content_hash());
}

TEST(Manifest, HashIgnoresOutputsAndTime) {
  ExperimentManifest m;
  m.cfg = parse_config_text(kKilled).cfg;
  auto h = m.content_hash();
  m.outputs = {"x"};
  m.created_utc = "now";
  EXPECT_EQ(m.content_hash(), h);
  m.cfg.seed = 8;
  EXPECT_NE(m.content_hash(), h);
}

TEST(Manifest, TamperDetected) {
  ExperimentManifest m;
  m.cfg = parse_config_text(kKilled).cfg;
  m.code_version = code_version();
  auto text = serialize(m);
  text.replace(text.find("\"a\": 10"), 7, "\"a\": 11");
  EXPECT_THROW(parse_manifest(text), DomainError);
}
