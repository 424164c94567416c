#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace phasechain {

using Vector = Eigen::VectorXd;

enum class Label { valid, invalid, unknown };

std::string_view to_string(Label label);
Label parse_label(std::string_view text);

/// One reasoning chain: ordered step embeddings plus the question/goal
/// embedding they are measured against.
struct EmbeddedChain {
  std::string id;
  std::vector<Vector> steps;
  Vector reference;
  Label label = Label::unknown;
  std::vector<std::string> texts;  // empty, or one entry per step

  std::size_t size() const noexcept { return steps.size(); }
  Eigen::Index dimension() const noexcept { return reference.size(); }
};

/// Throws ValidationError unless: m >= 2, d >= 2, all vectors share d and are
/// finite, the reference has positive norm, texts is empty or has m entries.
void validate_chain(const EmbeddedChain& chain);

struct ChainDataset {
  std::vector<EmbeddedChain> chains;
  std::optional<Eigen::Index> dimension;  // unset while the dataset is empty
  std::string provenance;

  bool empty() const noexcept { return chains.empty(); }
};

/// Appends after validating the chain and the shared dimension. Id
/// uniqueness is checked by the loader.
void add_chain(ChainDataset& dataset, EmbeddedChain chain);

// JSONL interchange. One chain object per line:
//   {"id": "...", "label": "valid"|"invalid"|"unknown",
//    "reference": [..], "steps": [[..], ..], "texts": [..]?}
ChainDataset parse_dataset(std::istream& in, std::string provenance = {});
ChainDataset load_dataset(const std::filesystem::path& path);
void write_dataset(const ChainDataset& dataset, std::ostream& out);
void write_dataset(const ChainDataset& dataset, const std::filesystem::path& path);

enum class Pooling { mean, max, first };

Pooling parse_pooling(std::string_view text);

/// Collapses an n x d matrix of token embeddings (one token per row) into a
/// single d-vector.
Vector pool_tokens(const Eigen::MatrixXd& tokens, Pooling mode = Pooling::mean);

struct SynthParams {
  std::size_t n_valid = 100;
  std::size_t n_invalid = 100;
  Eigen::Index dimension = 16;
  std::size_t steps = 6;
  std::uint64_t seed = 1;
};

inline constexpr double kValidNoiseScale = 0.05;
inline constexpr double kInvalidWalkScale = 0.5;

/// Deterministic synthetic cohort. Valid chains walk linearly from a random
/// unit start to the reference with N(0, 0.05^2) jitter per component;
/// invalid chains are isotropic random walks with N(0, 0.5^2) increments and
/// an independently drawn reference.
ChainDataset synth_dataset(const SynthParams& params);

}  // namespace phasechain
