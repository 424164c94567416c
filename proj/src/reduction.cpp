#include "phasechain/reduction.hpp"

#include <cmath>
#include <fstream>

#include "phasechain/error.hpp"
#include "phasechain/geometry.hpp"

namespace phasechain {

Vector PcaModel::project(const Vector& x) const { return project(x, rank()); }

Vector PcaModel::project(const Vector& x, Eigen::Index k) const {
  if (x.size() != dimension()) {
    throw ValidationError("projection: vector has dimension " + std::to_string(x.size()) + ", model expects " +
                          std::to_string(dimension()));
  }
  if (k < 1 || k > rank()) throw ValidationError("projection: k out of range");
  return components.topRows(k) * (x - mean);
}

Vector PcaModel::reconstruct(const Vector& coords) const {
  if (coords.size() != rank()) throw ValidationError("reconstruction: coordinate count does not match model rank");
  return mean + components.transpose() * coords;
}

PcaModel fit_pca(const Eigen::MatrixXd& samples, Eigen::Index k) {
  const Eigen::Index n = samples.rows();
  const Eigen::Index d = samples.cols();
  if (n < 2) throw ValidationError("PCA needs at least 2 samples");
  if (k < 1 || k > d || k > n) {
    throw ValidationError("PCA target dimension k=" + std::to_string(k) + " out of range for d=" +
                          std::to_string(d) + ", n=" + std::to_string(n));
  }
  if (!samples.allFinite()) throw ValidationError("PCA: non-finite sample");

  PcaModel model;
  model.mean = samples.colwise().mean().transpose();
  const Eigen::MatrixXd centered = samples.rowwise() - model.mean.transpose();
  const Eigen::MatrixXd cov = (centered.transpose() * centered) / static_cast<double>(n);
  model.total_variance = cov.trace();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
  if (eig.info() != Eigen::Success) throw NumericalError("PCA: eigendecomposition failed");
  // Eigen returns ascending eigenvalues.
  model.components.resize(k, d);
  model.explained_variance.resize(k);
  for (Eigen::Index j = 0; j < k; ++j) {
    const Eigen::Index src = d - 1 - j;
    Vector axis = eig.eigenvectors().col(src);
    Eigen::Index arg = 0;
    for (Eigen::Index i = 1; i < d; ++i) {
      if (std::fabs(axis[i]) > std::fabs(axis[arg])) arg = i;
    }
    if (axis[arg] < 0.0) axis = -axis;
    model.components.row(j) = axis.transpose();
    model.explained_variance[j] = std::max(eig.eigenvalues()[src], 0.0);
  }
  return model;
}

PcaModel fit_pca(const ChainDataset& dataset, Eigen::Index k) {
  if (dataset.empty() || !dataset.dimension) throw ValidationError("PCA: empty cohort");
  Eigen::Index rows = 0;
  for (const auto& c : dataset.chains) rows += static_cast<Eigen::Index>(c.steps.size());
  Eigen::MatrixXd samples(rows, *dataset.dimension);
  Eigen::Index r = 0;
  for (const auto& c : dataset.chains) {
    for (const auto& s : c.steps) samples.row(r++) = s.transpose();
  }
  return fit_pca(samples, k);
}

EmbeddedChain project_chain(const PcaModel& model, const EmbeddedChain& chain) {
  if (chain.dimension() != model.dimension()) {
    throw ValidationError("chain '" + chain.id + "': dimension " + std::to_string(chain.dimension()) +
                          " does not match PCA model dimension " + std::to_string(model.dimension()));
  }
  EmbeddedChain out;
  out.id = chain.id;
  out.label = chain.label;
  out.texts = chain.texts;
  out.reference = model.project(chain.reference);
  out.steps.reserve(chain.steps.size());
  for (const auto& s : chain.steps) out.steps.push_back(model.project(s));
  return out;
}

Vector chain_summary_features(const PcaModel& model, const EmbeddedChain& chain) {
  const Eigen::Index k = model.rank();
  if (k < 2) throw ValidationError("summary features need a model with at least 2 components");
  const EmbeddedChain projected = project_chain(model, chain);
  Vector features(k + 2);
  Vector centroid = Vector::Zero(k);
  for (const auto& s : projected.steps) centroid += s;
  features.head(k) = centroid / static_cast<double>(projected.steps.size());
  features[k] = geometry::trajectory_length(chain.steps);
  features[k + 1] = geometry::smoothness(chain.steps);
  return features;
}

namespace {

using ojson = nlohmann::ordered_json;

ojson vec_json(const Vector& v) {
  ojson a = ojson::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

Vector json_vec(const ojson& a) {
  Vector v(static_cast<Eigen::Index>(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i) v[static_cast<Eigen::Index>(i)] = a[i].get<double>();
  return v;
}

}  // namespace

ojson pca_to_json(const PcaModel& model) {
  ojson out;
  out["mean"] = vec_json(model.mean);
  ojson comps = ojson::array();
  for (Eigen::Index j = 0; j < model.rank(); ++j) comps.push_back(vec_json(model.components.row(j).transpose()));
  out["components"] = std::move(comps);
  out["explained_variance"] = vec_json(model.explained_variance);
  out["total_variance"] = model.total_variance;
  return out;
}

PcaModel pca_from_json(const ojson& node) {
  try {
    PcaModel model;
    model.mean = json_vec(node.at("mean"));
    const auto& comps = node.at("components");
    model.components.resize(static_cast<Eigen::Index>(comps.size()), model.mean.size());
    for (std::size_t j = 0; j < comps.size(); ++j) {
      const Vector row = json_vec(comps[j]);
      if (row.size() != model.mean.size()) throw ValidationError("PCA model: component dimension mismatch");
      model.components.row(static_cast<Eigen::Index>(j)) = row.transpose();
    }
    model.explained_variance = json_vec(node.at("explained_variance"));
    if (model.explained_variance.size() != model.rank()) throw ValidationError("PCA model: variance count mismatch");
    model.total_variance = node.at("total_variance").get<double>();
    return model;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("PCA model JSON: ") + e.what());
  }
}

void save_pca(const PcaModel& model, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << pca_to_json(model).dump(2) << '\n';
}

PcaModel load_pca(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  ojson node;
  try {
    in >> node;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("'" + path.string() + "': " + e.what());
  }
  return pca_from_json(node);
}

}  // namespace phasechain
