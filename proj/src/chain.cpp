#include "phasechain/chain.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

#include "phasechain/error.hpp"

namespace phasechain {

using json = nlohmann::json;

std::string_view to_string(Label label) {
  switch (label) {
    case Label::valid:
      return "valid";
    case Label::invalid:
      return "invalid";
    case Label::unknown:
      return "unknown";
  }
  return "unknown";
}

Label parse_label(std::string_view text) {
  if (text == "valid") return Label::valid;
  if (text == "invalid") return Label::invalid;
  if (text == "unknown") return Label::unknown;
  throw ValidationError("unknown label '" + std::string(text) + "'");
}

Pooling parse_pooling(std::string_view text) {
  if (text == "mean") return Pooling::mean;
  if (text == "max") return Pooling::max;
  if (text == "first") return Pooling::first;
  throw ValidationError("unknown pooling mode '" + std::string(text) + "'");
}

void validate_chain(const EmbeddedChain& chain) {
  const auto fail = [&](const std::string& what) {
    throw ValidationError("chain '" + chain.id + "': " + what);
  };
  if (chain.steps.size() < 2) fail("needs at least 2 steps, got " + std::to_string(chain.steps.size()));
  const Eigen::Index d = chain.reference.size();
  if (d < 2) fail("dimension must be >= 2");
  if (!chain.reference.allFinite()) fail("reference has a non-finite component");
  if (!(chain.reference.norm() > 0.0)) fail("reference vector has zero norm");
  for (std::size_t i = 0; i < chain.steps.size(); ++i) {
    const auto& step = chain.steps[i];
    if (step.size() != d) {
      fail("dimension mismatch: step " + std::to_string(i) + " has " + std::to_string(step.size()) +
           " components, reference has " + std::to_string(d));
    }
    if (!step.allFinite()) fail("step " + std::to_string(i) + " has a non-finite component");
  }
  if (!chain.texts.empty() && chain.texts.size() != chain.steps.size()) {
    fail("texts has " + std::to_string(chain.texts.size()) + " entries for " +
         std::to_string(chain.steps.size()) + " steps");
  }
}

void add_chain(ChainDataset& dataset, EmbeddedChain chain) {
  validate_chain(chain);
  if (dataset.dimension && *dataset.dimension != chain.dimension()) {
    throw ValidationError("chain '" + chain.id + "': dimension mismatch, dataset has d=" +
                          std::to_string(*dataset.dimension) + ", chain has d=" +
                          std::to_string(chain.dimension()));
  }
  dataset.dimension = chain.dimension();
  dataset.chains.push_back(std::move(chain));
}

namespace {

Vector vector_from_json(const json& node, const std::string& what) {
  if (!node.is_array()) throw ValidationError(what + " must be an array of numbers");
  Vector v(static_cast<Eigen::Index>(node.size()));
  for (std::size_t i = 0; i < node.size(); ++i) {
    if (!node[i].is_number()) throw ValidationError(what + " must be an array of numbers");
    v[static_cast<Eigen::Index>(i)] = node[i].get<double>();
  }
  return v;
}

json vector_to_json(const Vector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

EmbeddedChain chain_from_json(const json& obj) {
  if (!obj.is_object()) throw ValidationError("expected a JSON object");
  EmbeddedChain chain;
  if (!obj.contains("id") || !obj["id"].is_string()) throw ValidationError("missing string field 'id'");
  chain.id = obj["id"].get<std::string>();
  if (!obj.contains("label") || !obj["label"].is_string()) {
    throw ValidationError("chain '" + chain.id + "': missing string field 'label'");
  }
  chain.label = parse_label(obj["label"].get<std::string>());
  if (!obj.contains("reference")) throw ValidationError("chain '" + chain.id + "': missing 'reference'");
  chain.reference = vector_from_json(obj["reference"], "chain '" + chain.id + "': reference");
  if (!obj.contains("steps") || !obj["steps"].is_array()) {
    throw ValidationError("chain '" + chain.id + "': missing array 'steps'");
  }
  for (const auto& step : obj["steps"]) {
    chain.steps.push_back(vector_from_json(step, "chain '" + chain.id + "': step"));
  }
  if (obj.contains("texts") && !obj["texts"].is_null()) {
    if (!obj["texts"].is_array()) throw ValidationError("chain '" + chain.id + "': 'texts' must be an array");
    for (const auto& t : obj["texts"]) {
      if (!t.is_string()) throw ValidationError("chain '" + chain.id + "': 'texts' must hold strings");
      chain.texts.push_back(t.get<std::string>());
    }
  }
  return chain;
}

}  // namespace

ChainDataset parse_dataset(std::istream& in, std::string provenance) {
  ChainDataset dataset;
  dataset.provenance = std::move(provenance);
  std::unordered_set<std::string> ids;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      json obj;
      try {
        obj = json::parse(line);
      } catch (const json::out_of_range& e) {
        throw ValidationError(std::string("non-finite component: ") + e.what());
      } catch (const json::exception& e) {
        throw ValidationError(std::string("malformed JSON: ") + e.what());
      }
      EmbeddedChain chain = chain_from_json(obj);
      if (!ids.insert(chain.id).second) throw ValidationError("duplicate chain id '" + chain.id + "'");
      add_chain(dataset, std::move(chain));
    } catch (const ValidationError& e) {
      throw ValidationError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (in.bad()) throw IoError("read error after line " + std::to_string(line_no));
  return dataset;
}

ChainDataset load_dataset(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  return parse_dataset(in, path.string());
}

void write_dataset(const ChainDataset& dataset, std::ostream& out) {
  for (const auto& chain : dataset.chains) {
    json obj = json::object();
    obj["id"] = chain.id;
    obj["label"] = std::string(to_string(chain.label));
    obj["reference"] = vector_to_json(chain.reference);
    json steps = json::array();
    for (const auto& s : chain.steps) steps.push_back(vector_to_json(s));
    obj["steps"] = std::move(steps);
    if (!chain.texts.empty()) obj["texts"] = chain.texts;
    out << obj.dump() << '\n';
  }
}

void write_dataset(const ChainDataset& dataset, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  write_dataset(dataset, out);
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

Vector pool_tokens(const Eigen::MatrixXd& tokens, Pooling mode) {
  if (tokens.rows() < 1 || tokens.cols() < 1) throw ValidationError("empty token matrix");
  if (!tokens.allFinite()) throw ValidationError("token matrix has a non-finite entry");
  switch (mode) {
    case Pooling::mean:
      return tokens.colwise().mean().transpose();
    case Pooling::max:
      return tokens.colwise().maxCoeff().transpose();
    case Pooling::first:
      return tokens.row(0).transpose();
  }
  throw ValidationError("unknown pooling mode");
}

namespace {

Vector gaussian_vector(std::mt19937_64& rng, Eigen::Index d, double scale) {
  std::normal_distribution<double> normal(0.0, scale);
  Vector v(d);
  for (Eigen::Index i = 0; i < d; ++i) v[i] = normal(rng);
  return v;
}

Vector random_unit(std::mt19937_64& rng, Eigen::Index d) {
  for (;;) {
    Vector v = gaussian_vector(rng, d, 1.0);
    const double n = v.norm();
    if (n > 1e-12) return v / n;
  }
}

}  // namespace

ChainDataset synth_dataset(const SynthParams& params) {
  if (params.n_valid + params.n_invalid < 1) throw ValidationError("synthetic cohort needs at least one chain");
  if (params.dimension < 2) throw ValidationError("synthetic dimension must be >= 2");
  if (params.steps < 3) throw ValidationError("synthetic chains need at least 3 steps");

  std::mt19937_64 rng(params.seed);
  ChainDataset dataset;
  std::ostringstream prov;
  prov << "synthetic valid=" << params.n_valid << " invalid=" << params.n_invalid
       << " dim=" << params.dimension << " steps=" << params.steps << " seed=" << params.seed
       << "; reference = goal embedding";
  dataset.provenance = prov.str();

  const std::size_t total = params.n_valid + params.n_invalid;
  const auto m = params.steps;
  for (std::size_t c = 0; c < total; ++c) {
    EmbeddedChain chain;
    char id[32];
    std::snprintf(id, sizeof id, "syn-%05zu", c);
    chain.id = id;
    if (c < params.n_valid) {
      chain.label = Label::valid;
      chain.reference = random_unit(rng, params.dimension);
      const Vector start = random_unit(rng, params.dimension);
      for (std::size_t j = 0; j < m; ++j) {
        const double frac = static_cast<double>(j) / static_cast<double>(m - 1);
        chain.steps.push_back(start + frac * (chain.reference - start) +
                              gaussian_vector(rng, params.dimension, kValidNoiseScale));
      }
    } else {
      chain.label = Label::invalid;
      Vector state = random_unit(rng, params.dimension);
      chain.steps.push_back(state);
      for (std::size_t j = 1; j < m; ++j) {
        state += gaussian_vector(rng, params.dimension, kInvalidWalkScale);
        chain.steps.push_back(state);
      }
      chain.reference = random_unit(rng, params.dimension);
    }
    add_chain(dataset, std::move(chain));
  }
  return dataset;
}

}  // namespace phasechain
