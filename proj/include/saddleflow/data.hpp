#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "saddleflow/oracle.hpp"

namespace saddleflow {

enum class Distribution { Gaussian, Cauchy, Uniform, Gamma };

Distribution parse_distribution(const std::string& name);
std::string to_string(Distribution distribution);

/// Synthetic instance family. Every A_t is rescaled to unit Frobenius norm and
/// every b_t, u_t to unit Euclidean norm.
struct GeneratorConfig {
  Distribution distribution = Distribution::Gaussian;
  int m = 25;
  int d = 10;
  int horizon = 200;
  /// Block offsets; empty means a single block over all d coordinates.
  std::vector<std::size_t> block_offsets;
  std::uint64_t seed = 0;
  /// When positive, A_t follows A_{t+1} = normalize(A_t + drift * noise_{t+1})
  /// instead of being drawn independently per round.
  double drift = 0.0;

  void validate() const;
  SimplexBlocks blocks() const;
};

/// Random source for one round.
///
/// The engine is std::mt19937_64 (fully specified by the C++ standard) seeded
/// with splitmix64(seed ^ splitmix64(round + 1)), so round t draws the same
/// numbers regardless of the horizon. Variates are produced from raw 64-bit
/// outputs with explicit transforms rather than <random> distributions, whose
/// algorithms are implementation-defined:
///   uniform01   = ((x >> 11) + 0.5) * 2^-53         in (0, 1)
///   gaussian    = Box-Muller, cosine branch only     (two uniforms per draw)
///   cauchy      = tan(pi (u - 1/2))
///   uniform     = 2u - 1                             Uniform(-1, 1)
///   gamma(2, 2) = -2 (log u1 + log u2)               shape 2, scale 2
class RoundStream {
 public:
  RoundStream(std::uint64_t seed, std::uint64_t round);

  double uniform01();
  double draw(Distribution distribution);

 private:
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

/// Deterministic function of the config. Round t only depends on (seed, t).
Dataset generate(const GeneratorConfig& config);

/// Single round t (0-based) of an i.i.d. family (drift is ignored).
RoundData generate_round(const GeneratorConfig& config, std::uint64_t round);

/// I/O and parse failures; `line` is 1-based, 0 when not tied to a line.
class DatasetError : public std::runtime_error {
 public:
  DatasetError(const std::string& message, std::size_t line)
      : std::runtime_error(line ? "line " + std::to_string(line) + ": " + message : message),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// JSON Lines: one round per line,
///   {"A": [[...], ...], "b": [...], "u": [...], "blocks": [0, ..., d]}
/// with doubles written to 17 significant digits.
std::string serialize_round(const RoundData& round);
void save_dataset(const std::filesystem::path& path, const Dataset& rounds);
Dataset load_dataset(const std::filesystem::path& path);
Dataset parse_dataset(const std::string& text);

/// Formats a double with 17 significant digits (exact round trip).
std::string format_double(double value);

}  // namespace saddleflow
