#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>

#include "gfra/mlp.hpp"
#include "gfra/ted.hpp"

namespace gfra {

/// Malformed model file. `offset` is the byte position where parsing failed.
class FormatError : public std::runtime_error {
 public:
  FormatError(const std::string& what, std::uint64_t offset);
  std::uint64_t offset() const { return offset_; }

 private:
  std::uint64_t offset_;
};

inline constexpr const char* kModelMagic = "GFRA-MLP";
inline constexpr int kModelVersion = 1;

/// Text header (magic, version, M, S, t_max, layer sizes, normalizer kind and
/// constants in round-trip decimal), terminated by an `end` line, followed
/// by little-endian float64 data: W_0 row-major, b_0, W_1, b_1, ...
void save_model(std::ostream& out, const MlpModel& model);
MlpModel load_model(std::istream& in);
void save_model(const std::filesystem::path& path, const MlpModel& model);
MlpModel load_model(const std::filesystem::path& path);

/// Throws std::invalid_argument if the model was built for another M or S.
void check_model_matches(const MlpModel& model, int num_aps, int antennas_per_ap);

void save_ted(std::ostream& out, const TedModel& model);
TedModel load_ted(std::istream& in);
void save_ted(const std::filesystem::path& path, const TedModel& model);
TedModel load_ted(const std::filesystem::path& path);

}  // namespace gfra
