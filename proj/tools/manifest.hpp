// Copyright 2026 The sylemb Authors
// SPDX-License-Identifier: Apache-2.0

// Run manifests: resolved configuration, input checksums and the list of
// written artifacts.

#pragma once

#include <array>
#include <fstream>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>
#include <openssl/evp.h>

namespace sylemb::cli {

inline std::string sha256_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for checksum: " + path);
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) throw std::runtime_error("sha256 init failed");
  std::array<char, 1 << 16> buf{};
  while (in) {
    in.read(buf.data(), buf.size());
    if (in.gcount() > 0) EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), md.data(), &len);
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 0xf];
  }
  return out;
}

class Manifest {
 public:
  explicit Manifest(std::string command) : command_(std::move(command)) {}

  // Every option of the subcommand, given or defaulted.
  void record_options(const CLI::App& app) {
    for (const auto* opt : app.get_options()) {
      if (opt->get_lnames().empty()) continue;
      const auto& name = opt->get_lnames().front();
      if (name == "help") continue;
      if (opt->count() > 0) {
        const auto& res = opt->results();
        if (opt->get_expected_max() > 1) {
          config_[name] = res;
        } else if (opt->get_type_size() == 0) {
          config_[name] = true;
        } else {
          config_[name] = res.empty() ? "" : res.back();
        }
      } else if (opt->get_type_size() == 0) {
        config_[name] = false;
      } else if (!opt->get_default_str().empty()) {
        config_[name] = opt->get_default_str();
      } else {
        config_[name] = nullptr;
      }
    }
  }

  void input(const std::string& path) { inputs_[path] = sha256_file(path); }
  void output(const std::string& path) { outputs_.push_back(path); }
  void result(const std::string& key, nlohmann::json value) { results_[key] = std::move(value); }

  nlohmann::json to_json() const {
    return {{"tool", "sylemb"},       {"version", SYLEMB_VERSION}, {"command", command_},
            {"config", config_},      {"inputs", inputs_},         {"outputs", outputs_},
            {"results", results_}};
  }

  void write(const std::string& path) const {
    std::ofstream out(path);
    out << to_json().dump(2) << '\n';
    if (!out) throw std::runtime_error("failed writing manifest: " + path);
  }

 private:
  std::string command_;
  nlohmann::json config_ = nlohmann::json::object();
  nlohmann::json inputs_ = nlohmann::json::object();
  std::vector<std::string> outputs_;
  nlohmann::json results_ = nlohmann::json::object();
};

}  // namespace sylemb::cli
