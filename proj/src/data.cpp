#include "saddleflow/data.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#include "json.hpp"

namespace saddleflow {

using nlohmann::json;

Distribution parse_distribution(const std::string& name) {
  if (name == "gaussian") return Distribution::Gaussian;
  if (name == "cauchy") return Distribution::Cauchy;
  if (name == "uniform") return Distribution::Uniform;
  if (name == "gamma") return Distribution::Gamma;
  throw std::invalid_argument("unknown distribution '" + name + "'");
}

std::string to_string(Distribution distribution) {
  switch (distribution) {
    case Distribution::Gaussian:
      return "gaussian";
    case Distribution::Cauchy:
      return "cauchy";
    case Distribution::Uniform:
      return "uniform";
    case Distribution::Gamma:
      return "gamma";
  }
  return "unknown";
}

void GeneratorConfig::validate() const {
  if (m < 1 || d < 1 || horizon < 1) {
    throw std::invalid_argument("generator: m, d and T must be positive");
  }
  if (!(drift >= 0.0) || !std::isfinite(drift)) {
    throw std::invalid_argument("generator: drift must be a finite non-negative number");
  }
  blocks();
}

SimplexBlocks GeneratorConfig::blocks() const {
  if (block_offsets.empty()) return SimplexBlocks::single(static_cast<std::size_t>(d));
  SimplexBlocks blocks(block_offsets);
  if (blocks.dimension() != static_cast<std::size_t>(d)) {
    throw std::invalid_argument("generator: block offsets must end at d");
  }
  return blocks;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

RoundStream::RoundStream(std::uint64_t seed, std::uint64_t round)
    : engine_(splitmix64(seed ^ splitmix64(round + 1))) {}

double RoundStream::uniform01() {
  return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

double RoundStream::draw(Distribution distribution) {
  switch (distribution) {
    case Distribution::Gaussian: {
      const double u1 = uniform01();
      const double u2 = uniform01();
      return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }
    case Distribution::Cauchy:
      return std::tan(std::numbers::pi * (uniform01() - 0.5));
    case Distribution::Uniform:
      return 2.0 * uniform01() - 1.0;
    case Distribution::Gamma: {
      const double u1 = uniform01();
      const double u2 = uniform01();
      return -2.0 * (std::log(u1) + std::log(u2));
    }
  }
  return 0.0;
}

namespace {

template <typename Derived>
void fill_normalized(Eigen::MatrixBase<Derived>& out, RoundStream& stream,
                     Distribution distribution) {
  // Row-major fill order; redraw on the (probability zero) all-zero sample.
  while (true) {
    for (Eigen::Index i = 0; i < out.rows(); ++i) {
      for (Eigen::Index j = 0; j < out.cols(); ++j) out(i, j) = stream.draw(distribution);
    }
    const double norm = out.norm();
    if (norm > 0.0 && std::isfinite(norm)) {
      out /= norm;
      return;
    }
  }
}

}  // namespace

RoundData generate_round(const GeneratorConfig& config, std::uint64_t round) {
  RoundStream stream(config.seed, round);
  RoundData out;
  out.a.resize(config.m, config.d);
  out.b.resize(config.m);
  out.u.resize(config.d);
  fill_normalized(out.a, stream, config.distribution);
  fill_normalized(out.b, stream, config.distribution);
  fill_normalized(out.u, stream, config.distribution);
  out.blocks = config.blocks();
  return out;
}

Dataset generate(const GeneratorConfig& config) {
  config.validate();
  Dataset rounds;
  rounds.reserve(static_cast<std::size_t>(config.horizon));
  for (int t = 0; t < config.horizon; ++t) {
    rounds.push_back(generate_round(config, static_cast<std::uint64_t>(t)));
  }
  if (config.drift > 0.0) {
    // Noise for round t comes from a substream disjoint from the i.i.d. draws.
    const std::uint64_t noise_seed = splitmix64(config.seed ^ 0xD1B54A32D192ED03ULL);
    for (std::size_t t = 1; t < rounds.size(); ++t) {
      RoundStream stream(noise_seed, t);
      Matrix next = rounds[t - 1].a;
      for (Eigen::Index i = 0; i < next.rows(); ++i) {
        for (Eigen::Index j = 0; j < next.cols(); ++j) {
          next(i, j) += config.drift * stream.draw(config.distribution);
        }
      }
      const double norm = next.norm();
      rounds[t].a = norm > 0.0 ? Matrix(next / norm) : rounds[t - 1].a;
    }
  }
  return rounds;
}

std::string format_double(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

std::string serialize_round(const RoundData& round) {
  std::string out = "{\"A\": [";
  for (Eigen::Index i = 0; i < round.a.rows(); ++i) {
    if (i) out += ", ";
    out += '[';
    for (Eigen::Index j = 0; j < round.a.cols(); ++j) {
      if (j) out += ", ";
      out += format_double(round.a(i, j));
    }
    out += ']';
  }
  out += "], \"b\": [";
  for (Eigen::Index i = 0; i < round.b.size(); ++i) {
    if (i) out += ", ";
    out += format_double(round.b[i]);
  }
  out += "], \"u\": [";
  for (Eigen::Index j = 0; j < round.u.size(); ++j) {
    if (j) out += ", ";
    out += format_double(round.u[j]);
  }
  out += "], \"blocks\": [";
  const auto& offsets = round.blocks.offsets();
  for (std::size_t k = 0; k < offsets.size(); ++k) {
    if (k) out += ", ";
    out += std::to_string(offsets[k]);
  }
  out += "]}";
  return out;
}

void save_dataset(const std::filesystem::path& path, const Dataset& rounds) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DatasetError("cannot open '" + path.string() + "' for writing", 0);
  for (const RoundData& round : rounds) out << serialize_round(round) << '\n';
  if (!out) throw DatasetError("write failed for '" + path.string() + "'", 0);
}

namespace {

const json& require(const json& object, const char* field, std::size_t line) {
  const auto it = object.find(field);
  if (it == object.end()) throw DatasetError(std::string("missing field \"") + field + "\"", line);
  return *it;
}

Vector parse_vector(const json& value, const char* field, std::size_t line) {
  if (!value.is_array()) throw DatasetError(std::string("field \"") + field + "\" must be an array", line);
  Vector out(static_cast<Eigen::Index>(value.size()));
  for (std::size_t i = 0; i < value.size(); ++i) {
    if (!value[i].is_number()) {
      throw DatasetError(std::string("field \"") + field + "\" must contain numbers", line);
    }
    out[static_cast<Eigen::Index>(i)] = value[i].get<double>();
  }
  return out;
}

RoundData parse_round(const std::string& text, std::size_t line) {
  json object;
  try {
    object = json::parse(text);
  } catch (const json::parse_error& e) {
    throw DatasetError(std::string("malformed JSON: ") + e.what(), line);
  }
  if (!object.is_object()) throw DatasetError("expected a JSON object", line);

  const json& a = require(object, "A", line);
  const json& b = require(object, "b", line);
  const json& u = require(object, "u", line);
  const json& blocks = require(object, "blocks", line);

  RoundData round;
  round.b = parse_vector(b, "b", line);
  round.u = parse_vector(u, "u", line);
  if (!a.is_array()) throw DatasetError("field \"A\" must be an array of rows", line);
  round.a.resize(static_cast<Eigen::Index>(a.size()), round.u.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    const Vector row = parse_vector(a[i], "A", line);
    if (row.size() != round.u.size()) {
      throw DatasetError("row " + std::to_string(i) + " of \"A\" has length " +
                             std::to_string(row.size()) + ", expected len(u) = " +
                             std::to_string(round.u.size()),
                         line);
    }
    round.a.row(static_cast<Eigen::Index>(i)) = row.transpose();
  }
  if (!blocks.is_array()) throw DatasetError("field \"blocks\" must be an array", line);
  std::vector<std::size_t> offsets;
  for (const json& entry : blocks) {
    if (!entry.is_number_unsigned() && !(entry.is_number_integer() && entry.get<long long>() >= 0)) {
      throw DatasetError("field \"blocks\" must contain non-negative integers", line);
    }
    offsets.push_back(entry.get<std::size_t>());
  }
  try {
    round.blocks = SimplexBlocks(std::move(offsets));
    round.validate();
  } catch (const std::invalid_argument& e) {
    throw DatasetError(e.what(), line);
  }
  return round;
}

}  // namespace

Dataset parse_dataset(const std::string& text) {
  Dataset rounds;
  std::istringstream in(text);
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    RoundData round = parse_round(line, number);
    if (!rounds.empty() &&
        (round.m() != rounds.front().m() || round.d() != rounds.front().d())) {
      throw DatasetError("dimension inconsistency: expected m=" + std::to_string(rounds.front().m()) +
                             ", d=" + std::to_string(rounds.front().d()),
                         number);
    }
    rounds.push_back(std::move(round));
  }
  if (rounds.empty()) throw DatasetError("no rounds", 0);
  return rounds;
}

Dataset load_dataset(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DatasetError("cannot open '" + path.string() + "'", 0);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_dataset(buffer.str());
}

}  // namespace saddleflow
