#include "gfra/model_io.hpp"

#include <bit>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <vector>

namespace gfra {

FormatError::FormatError(const std::string& what, std::uint64_t offset)
    : std::runtime_error(what + " (at byte " + std::to_string(offset) + ")"), offset_(offset) {}

namespace {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_f64_le(std::ostream& out, double v) {
  const auto bits = std::bit_cast<std::uint64_t>(v);
  char bytes[8];
  for (int i = 0; i < 8; ++i) bytes[i] = static_cast<char>((bits >> (8 * i)) & 0xff);
  out.write(bytes, 8);
}

/// Line-oriented reader that tracks the byte offset for error reports.
class HeaderReader {
 public:
  explicit HeaderReader(std::istream& in) : in_(in) {}

  std::uint64_t offset() const { return offset_; }

  std::string line() {
    std::string s;
    if (!std::getline(in_, s)) throw FormatError("unexpected end of header", offset_);
    offset_ += s.size() + 1;
    return s;
  }

  /// Reads `key v1 v2 ...` and returns the values as tokens.
  std::vector<std::string> keyed(const std::string& key) {
    const std::uint64_t at = offset_;
    std::istringstream ls(line());
    std::string k;
    ls >> k;
    if (k != key) throw FormatError("expected '" + key + "', found '" + k + "'", at);
    std::vector<std::string> vals;
    for (std::string t; ls >> t;) vals.push_back(t);
    return vals;
  }

  int keyed_int(const std::string& key) {
    const std::uint64_t at = offset_;
    auto v = keyed(key);
    if (v.size() != 1) throw FormatError("expected one value for '" + key + "'", at);
    return parse_int(v[0], at);
  }

  static int parse_int(const std::string& s, std::uint64_t at) {
    char* end = nullptr;
    const long v = std::strtol(s.c_str(), &end, 10);
    if (end == s.c_str() || *end != '\0') throw FormatError("bad integer '" + s + "'", at);
    return static_cast<int>(v);
  }

  static double parse_double(const std::string& s, std::uint64_t at) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0') throw FormatError("bad number '" + s + "'", at);
    return v;
  }

  double read_f64_le() {
    unsigned char bytes[8];
    in_.read(reinterpret_cast<char*>(bytes), 8);
    if (in_.gcount() != 8) throw FormatError("truncated parameter data", offset_ + in_.gcount());
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(bytes[i]) << (8 * i);
    offset_ += 8;
    return std::bit_cast<double>(bits);
  }

 private:
  std::istream& in_;
  std::uint64_t offset_ = 0;
};

Eigen::VectorXd parse_vector(HeaderReader& r, const std::string& key, int expected) {
  const std::uint64_t at = r.offset();
  const auto vals = r.keyed(key);
  if (static_cast<int>(vals.size()) != expected) {
    throw FormatError("'" + key + "' needs " + std::to_string(expected) + " values", at);
  }
  Eigen::VectorXd v(expected);
  for (int i = 0; i < expected; ++i) v(i) = HeaderReader::parse_double(vals[i], at);
  return v;
}

}  // namespace

void save_model(std::ostream& out, const MlpModel& model) {
  const auto& sizes = model.layer_sizes();
  out << kModelMagic << '\n' << "version " << kModelVersion << '\n';
  out << "M " << model.input_size() << '\n';
  out << "S " << model.antennas_per_ap << '\n';
  out << "t_max " << model.t_max() << '\n';
  out << "layers " << sizes.size();
  for (int n : sizes) out << ' ' << n;
  out << '\n';
  out << "normalizer " << to_string(model.normalizer.kind) << '\n';
  out << "shift";
  for (double v : model.normalizer.shift) out << ' ' << fmt_double(v);
  out << "\nscale";
  for (double v : model.normalizer.scale) out << ' ' << fmt_double(v);
  out << "\nend\n";
  for (int j = 0; j < model.num_weight_layers(); ++j) {
    const auto w = model.weight(j);
    for (Eigen::Index r = 0; r < w.rows(); ++r) {
      for (Eigen::Index c = 0; c < w.cols(); ++c) write_f64_le(out, w(r, c));
    }
    for (double v : model.bias(j)) write_f64_le(out, v);
  }
  if (!out) throw std::runtime_error("failed writing model");
}

MlpModel load_model(std::istream& in) {
  HeaderReader r(in);
  if (r.line() != kModelMagic) throw FormatError("bad magic, not a model file", 0);
  {
    const std::uint64_t at = r.offset();
    const int version = r.keyed_int("version");
    if (version != kModelVersion) {
      throw FormatError("unsupported model version " + std::to_string(version), at);
    }
  }
  const int m = r.keyed_int("M");
  const int s = r.keyed_int("S");
  const int t_max = r.keyed_int("t_max");
  std::vector<int> sizes;
  {
    const std::uint64_t at = r.offset();
    const auto vals = r.keyed("layers");
    if (vals.empty()) throw FormatError("missing layer count", at);
    const int count = HeaderReader::parse_int(vals[0], at);
    if (count < 2 || static_cast<int>(vals.size()) != count + 1) {
      throw FormatError("layer count does not match listed sizes", at);
    }
    for (int i = 1; i <= count; ++i) {
      const int n = HeaderReader::parse_int(vals[i], at);
      if (n < 1) throw FormatError("layer sizes must be positive", at);
      sizes.push_back(n);
    }
    if (sizes.front() != m || sizes.back() != t_max + 1) {
      throw FormatError("layer sizes inconsistent with M / t_max", at);
    }
  }
  NormalizerKind kind;
  {
    const std::uint64_t at = r.offset();
    const auto vals = r.keyed("normalizer");
    try {
      if (vals.size() != 1) throw std::invalid_argument("normalizer");
      kind = normalizer_from_string(vals[0]);
    } catch (const std::invalid_argument&) {
      throw FormatError("unknown normalizer", at);
    }
  }
  Eigen::VectorXd shift = parse_vector(r, "shift", m);
  Eigen::VectorXd scale = parse_vector(r, "scale", m);
  {
    const std::uint64_t at = r.offset();
    if (r.line() != "end") throw FormatError("missing 'end' header terminator", at);
  }

  MlpModel model(sizes);
  model.antennas_per_ap = s;
  model.normalizer.kind = kind;
  model.normalizer.shift = std::move(shift);
  model.normalizer.scale = std::move(scale);
  for (int j = 0; j < model.num_weight_layers(); ++j) {
    auto w = model.weight(j);
    for (Eigen::Index row = 0; row < w.rows(); ++row) {
      for (Eigen::Index c = 0; c < w.cols(); ++c) w(row, c) = r.read_f64_le();
    }
    auto b = model.bias(j);
    for (Eigen::Index i = 0; i < b.size(); ++i) b(i) = r.read_f64_le();
  }
  return model;
}

void save_model(const std::filesystem::path& path, const MlpModel& model) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  save_model(out, model);
}

MlpModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return load_model(in);
}

void check_model_matches(const MlpModel& model, int num_aps, int antennas_per_ap) {
  if (model.input_size() != num_aps || model.antennas_per_ap != antennas_per_ap) {
    throw std::invalid_argument(
        "model was trained for M=" + std::to_string(model.input_size()) +
        ", S=" + std::to_string(model.antennas_per_ap) + " but the configuration has M=" +
        std::to_string(num_aps) + ", S=" + std::to_string(antennas_per_ap));
  }
}

void save_ted(std::ostream& out, const TedModel& model) {
  out << "GFRA-TED\nversion 1\n";
  out << "t_max " << model.t_max << '\n';
  out << "scaling " << to_string(model.scaling) << ' ' << model.norm_min.size() << '\n';
  out << "norm_min";
  for (double v : model.norm_min) out << ' ' << fmt_double(v);
  out << "\nnorm_max";
  for (double v : model.norm_max) out << ' ' << fmt_double(v);
  out << '\n';
  out << "class_means";
  for (double v : model.class_means) out << ' ' << fmt_double(v);
  out << "\nend\n";
}

TedModel load_ted(std::istream& in) {
  HeaderReader r(in);
  if (r.line() != "GFRA-TED") throw FormatError("bad magic, not a T-ED file", 0);
  {
    const std::uint64_t at = r.offset();
    if (r.keyed_int("version") != 1) throw FormatError("unsupported T-ED version", at);
  }
  TedModel model;
  model.t_max = r.keyed_int("t_max");
  if (model.t_max < 0) throw FormatError("t_max must be >= 0", 0);
  int width = 0;
  {
    const std::uint64_t at = r.offset();
    const auto vals = r.keyed("scaling");
    if (vals.size() != 2) throw FormatError("expected 'scaling <kind> <count>'", at);
    try {
      model.scaling = ted_scaling_from_string(vals[0]);
    } catch (const std::invalid_argument&) {
      throw FormatError("unknown T-ED scaling", at);
    }
    width = HeaderReader::parse_int(vals[1], at);
    if (width < 1 || (model.scaling == TedScaling::kGlobal && width != 1)) {
      throw FormatError("bad normalization width", at);
    }
  }
  model.norm_min = parse_vector(r, "norm_min", width);
  model.norm_max = parse_vector(r, "norm_max", width);
  const Eigen::VectorXd means = parse_vector(r, "class_means", model.t_max + 1);
  {
    const std::uint64_t at = r.offset();
    if (r.line() != "end") throw FormatError("missing 'end' terminator", at);
  }
  model.class_means.assign(means.begin(), means.end());
  model.thresholds = ted_thresholds(model.class_means);
  return model;
}

void save_ted(const std::filesystem::path& path, const TedModel& model) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  save_ted(out, model);
}

TedModel load_ted(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return load_ted(in);
}

}  // namespace gfra
