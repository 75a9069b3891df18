#include "manifest.hpp"

#include <openssl/evp.h>

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <sstream>

#include "bbmsel/errors.hpp"
#include "config_io.hpp"

#ifndef BBMSEL_VERSION
#define BBMSEL_VERSION "0.0.0"
#endif

namespace bbmsel::cli {

using json = nlohmann::ordered_json;

namespace {

constexpr const char* kFormat = "bbmsel-manifest/1";

json hashed_part(const ExperimentManifest& m) {
  json j;
  j["format"] = kFormat;
  j["code_version"] = m.code_version;
  j["mode"] = to_string(m.mode);
  j["options"] = {{"timing", m.timing}, {"events", m.events}, {"checkpoint", m.checkpoint}};
  j["config"] = config_to_json(m.cfg);
  return j;
}

}  // namespace

const char* code_version() { return BBMSEL_VERSION; }

std::string sha256_hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("sha256: digest failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

std::string ExperimentManifest::content_hash() const { return sha256_hex(hashed_part(*this).dump()); }

std::string serialize(const ExperimentManifest& m) {
  json j = hashed_part(m);
  j["content_sha256"] = m.content_hash();
  j["outputs"] = m.outputs;
  j["created_utc"] = m.created_utc;
  return j.dump(2) + "\n";
}

ExperimentManifest parse_manifest(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw DomainError(std::string("manifest: ") + e.what());
  }
  try {
    if (j.at("format").get<std::string>() != kFormat) throw DomainError("manifest: unsupported format");
    ExperimentManifest m;
    m.code_version = j.at("code_version").get<std::string>();
    m.mode = parse_mode(j.at("mode").get<std::string>());
    m.cfg = config_from_json(j.at("config"));
    const auto& o = j.at("options");
    m.timing = o.at("timing").get<std::string>();
    m.events = o.at("events").get<bool>();
    m.checkpoint = o.at("checkpoint").get<bool>();
    m.outputs = j.value("outputs", std::vector<std::string>{});
    m.created_utc = j.value("created_utc", "");
    if (j.contains("content_sha256") && j["content_sha256"].get<std::string>() != m.content_hash())
      throw DomainError("manifest: content_sha256 does not match the recorded configuration");
    return m;
  } catch (const json::exception& e) {
    throw DomainError(std::string("manifest: ") + e.what());
  }
}

ExperimentManifest read_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("manifest: cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_manifest(ss.str());
}

std::string utc_now() {
  std::time_t t = 0;
  if (const char* env = std::getenv("SOURCE_DATE_EPOCH")) {
    t = static_cast<std::time_t>(std::strtoll(env, nullptr, 10));
  } else {
    t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  }
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace bbmsel::cli
