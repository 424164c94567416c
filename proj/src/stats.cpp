#include "phasechain/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <set>

#include "phasechain/error.hpp"

namespace phasechain::stats {

double mean(std::span<const double> xs) {
  if (xs.empty()) throw ValidationError("mean of an empty sample");
  return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

double variance(std::span<const double> xs, int ddof) {
  if (xs.size() <= static_cast<std::size_t>(ddof)) {
    throw ValidationError("variance needs more than " + std::to_string(ddof) + " values");
  }
  const double m = mean(xs);
  double ss = 0.0;
  for (double x : xs) ss += (x - m) * (x - m);
  return ss / static_cast<double>(xs.size() - static_cast<std::size_t>(ddof));
}

double stddev(std::span<const double> xs, int ddof) { return std::sqrt(variance(xs, ddof)); }

double standard_error(std::span<const double> xs) {
  return stddev(xs, 1) / std::sqrt(static_cast<double>(xs.size()));
}

namespace {

// Modified Lentz evaluation of the continued fraction for I_x(a, b).
double beta_continued_fraction(double a, double b, double x) {
  constexpr int kMaxIterations = 10000;
  constexpr double kEps = 1e-15;
  constexpr double kTiny = 1e-300;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIterations; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < kEps) return h;
  }
  throw NumericalError("incomplete beta continued fraction did not converge");
}

}  // namespace

double incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0)) throw ValidationError("incomplete beta needs a, b > 0");
  if (std::isnan(x) || x < 0.0 || x > 1.0) throw ValidationError("incomplete beta needs x in [0, 1]");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double log_front =
      std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_continued_fraction(a, b, x) / a;
  return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double student_t_cdf(double t, double df) {
  if (!(df > 0.0)) throw ValidationError("Student-t needs df > 0");
  if (std::isinf(t)) return t > 0 ? 1.0 : 0.0;
  const double tail = 0.5 * incomplete_beta(0.5 * df, 0.5, df / (df + t * t));
  return t > 0.0 ? 1.0 - tail : tail;
}

double f_sf(double f, double df1, double df2) {
  if (!(df1 > 0.0) || !(df2 > 0.0)) throw ValidationError("F distribution needs positive df");
  if (f <= 0.0) return 1.0;
  return incomplete_beta(0.5 * df2, 0.5 * df1, df2 / (df2 + df1 * f));
}

TTestResult welch_t_test(std::span<const double> a, std::span<const double> b) {
  if (a.size() < 2 || b.size() < 2) throw ValidationError("t-test needs at least 2 values per group");
  const double va = variance(a, 1) / static_cast<double>(a.size());
  const double vb = variance(b, 1) / static_cast<double>(b.size());
  if (!(va > 0.0) && !(vb > 0.0)) throw ValidationError("t-test undefined: both groups have zero variance");
  const double se2 = va + vb;
  TTestResult r;
  r.t = (mean(a) - mean(b)) / std::sqrt(se2);
  r.df = se2 * se2 /
         (va * va / static_cast<double>(a.size() - 1) + vb * vb / static_cast<double>(b.size() - 1));
  r.p = incomplete_beta(0.5 * r.df, 0.5, r.df / (r.df + r.t * r.t));
  r.p = std::clamp(r.p, 0.0, 1.0);
  return r;
}

double cohens_d(std::span<const double> a, std::span<const double> b) {
  if (a.size() < 2 || b.size() < 2) throw ValidationError("Cohen's d needs at least 2 values per group");
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  const double pooled =
      std::sqrt(((na - 1.0) * variance(a, 1) + (nb - 1.0) * variance(b, 1)) / (na + nb - 2.0));
  if (!(pooled > 0.0)) throw ValidationError("Cohen's d undefined: zero pooled standard deviation");
  return (mean(a) - mean(b)) / pooled;
}

double pearson_correlation(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw ValidationError("correlation needs equal-length samples");
  if (a.size() < 2) throw ValidationError("correlation needs at least 2 pairs");
  const double ma = mean(a);
  const double mb = mean(b);
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  if (!(saa > 0.0) || !(sbb > 0.0)) throw ValidationError("correlation undefined: zero variance");
  return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

ManovaResult manova_two_group(const Eigen::MatrixXd& features, const std::vector<bool>& group) {
  const Eigen::Index n = features.rows();
  const Eigen::Index p = features.cols();
  if (static_cast<std::size_t>(n) != group.size()) throw ValidationError("MANOVA: one group flag per sample");
  if (p < 1) throw ValidationError("MANOVA: no feature columns");
  const auto n1 = static_cast<Eigen::Index>(std::count(group.begin(), group.end(), true));
  const Eigen::Index n0 = n - n1;
  if (n0 < 4 || n1 < 4) throw ValidationError("MANOVA needs at least 4 samples per group");
  if (n - p - 1 < 1) throw ValidationError("MANOVA needs more samples than features + 1");

  Eigen::VectorXd sum0 = Eigen::VectorXd::Zero(p), sum1 = Eigen::VectorXd::Zero(p);
  for (Eigen::Index i = 0; i < n; ++i) (group[static_cast<std::size_t>(i)] ? sum1 : sum0) += features.row(i).transpose();
  const Eigen::VectorXd mean0 = sum0 / static_cast<double>(n0);
  const Eigen::VectorXd mean1 = sum1 / static_cast<double>(n1);
  const Eigen::VectorXd grand = (sum0 + sum1) / static_cast<double>(n);

  Eigen::MatrixXd within = Eigen::MatrixXd::Zero(p, p);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::VectorXd r = features.row(i).transpose() - (group[static_cast<std::size_t>(i)] ? mean1 : mean0);
    within.noalias() += r * r.transpose();
  }
  const Eigen::VectorXd d0 = mean0 - grand;
  const Eigen::VectorXd d1 = mean1 - grand;
  const Eigen::MatrixXd between =
      static_cast<double>(n0) * d0 * d0.transpose() + static_cast<double>(n1) * d1 * d1.transpose();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> within_eig(within, Eigen::EigenvaluesOnly);
  const auto& ev = within_eig.eigenvalues();
  if (!(ev.minCoeff() > 1e-12 * std::max(ev.maxCoeff(), std::numeric_limits<double>::min()))) {
    throw NumericalError("MANOVA: within-group scatter matrix is singular");
  }

  const Eigen::MatrixXd total = within + between;
  ManovaResult r;
  r.wilks_lambda = within.determinant() / total.determinant();
  r.pillai = (between * total.inverse()).trace();
  const Eigen::MatrixXd within_inv_between = within.ldlt().solve(between);
  r.hotelling_lawley = within_inv_between.trace();
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> gen(between, within, Eigen::EigenvaluesOnly);
  r.roy = gen.eigenvalues().maxCoeff();
  r.df1 = static_cast<double>(p);
  r.df2 = static_cast<double>(n - p - 1);
  r.f_approx = (1.0 - r.wilks_lambda) / r.wilks_lambda * r.df2 / r.df1;
  r.p = f_sf(r.f_approx, r.df1, r.df2);
  return r;
}

Eigen::VectorXd Standardizer::apply(const Eigen::VectorXd& x) const {
  return (x - mean).cwiseQuotient(scale);
}

namespace {

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// log(1 + exp(z)) without overflow.
double softplus(double z) { return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

}  // namespace

double Classifier::predict_proba(const Eigen::VectorXd& x) const {
  return sigmoid(weights.dot(standardizer.apply(x)) + bias);
}

Classifier fit_logistic(const Eigen::MatrixXd& features, const std::vector<bool>& labels,
                        const LogisticOptions& options) {
  const Eigen::Index n = features.rows();
  const Eigen::Index p = features.cols();
  if (static_cast<std::size_t>(n) != labels.size()) throw ValidationError("logistic: one label per sample");
  const auto positives = std::count(labels.begin(), labels.end(), true);
  if (positives < 2 || n - positives < 2) {
    throw ValidationError("logistic regression needs at least 2 samples of each class");
  }
  if (!features.allFinite()) throw ValidationError("logistic: non-finite feature");

  Classifier clf;
  clf.standardizer.mean = features.colwise().mean().transpose();
  clf.standardizer.scale.resize(p);
  for (Eigen::Index j = 0; j < p; ++j) {
    const double sd = std::sqrt((features.col(j).array() - clf.standardizer.mean[j]).square().mean());
    clf.standardizer.scale[j] = sd > 0.0 ? sd : 1.0;
  }
  Eigen::MatrixXd z(n, p);
  for (Eigen::Index i = 0; i < n; ++i) z.row(i) = clf.standardizer.apply(features.row(i).transpose()).transpose();
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) y[i] = labels[static_cast<std::size_t>(i)] ? 1.0 : 0.0;

  Eigen::VectorXd w = Eigen::VectorXd::Zero(p);
  double b = 0.0;
  const double inv_n = 1.0 / static_cast<double>(n);
  Eigen::VectorXd residual(n);
  int it = 0;
  for (; it < options.max_iterations; ++it) {
    const Eigen::VectorXd logits = (z * w).array() + b;
    for (Eigen::Index i = 0; i < n; ++i) residual[i] = sigmoid(logits[i]) - y[i];
    const Eigen::VectorXd grad_w = inv_n * (z.transpose() * residual) + options.l2 * w;
    const double grad_b = residual.mean();
    if (std::sqrt(grad_w.squaredNorm() + grad_b * grad_b) < options.gradient_tolerance) break;
    w -= options.learning_rate * grad_w;
    b -= options.learning_rate * grad_b;
  }
  const Eigen::VectorXd logits = (z * w).array() + b;
  double loss = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) loss += softplus(logits[i]) - y[i] * logits[i];
  clf.weights = std::move(w);
  clf.bias = b;
  clf.iterations = it;
  clf.final_loss = loss * inv_n + 0.5 * options.l2 * clf.weights.squaredNorm();
  return clf;
}

std::size_t ClassificationReport::total() const {
  return confusion[0][0] + confusion[0][1] + confusion[1][0] + confusion[1][1];
}

std::string ClassificationReport::to_text() const {
  std::string out;
  char line[128];
  std::snprintf(line, sizeof line, "%12s %10s %10s %10s %10s\n\n", "", "precision", "recall", "f1-score", "support");
  out += line;
  const char* names[2] = {"False", "True"};
  for (int c = 0; c < 2; ++c) {
    const auto& m = per_class[static_cast<std::size_t>(c)];
    std::snprintf(line, sizeof line, "%12s %10.2f %10.2f %10.2f %10zu\n", names[c], m.precision, m.recall, m.f1,
                  m.support);
    out += line;
  }
  out += "\n";
  std::snprintf(line, sizeof line, "%12s %10s %10s %10.2f %10zu\n", "accuracy", "", "", accuracy, total());
  out += line;
  std::snprintf(line, sizeof line, "%12s %10.2f %10.2f %10.2f %10zu\n", "macro avg", macro.precision, macro.recall,
                macro.f1, total());
  out += line;
  std::snprintf(line, sizeof line, "%12s %10.2f %10.2f %10.2f %10zu\n", "weighted avg", weighted.precision,
                weighted.recall, weighted.f1, total());
  out += line;
  return out;
}

ClassificationReport classification_report_from_confusion(std::size_t tn, std::size_t fp, std::size_t fn,
                                                          std::size_t tp) {
  ClassificationReport r;
  r.confusion = {{{tn, fp}, {fn, tp}}};
  const std::size_t n = r.total();
  if (n == 0) throw ValidationError("classification report needs at least one sample");
  for (std::size_t c = 0; c < 2; ++c) {
    auto& m = r.per_class[c];
    const std::size_t hit = r.confusion[c][c];
    const std::size_t predicted = r.confusion[0][c] + r.confusion[1][c];
    m.support = r.confusion[c][0] + r.confusion[c][1];
    m.undefined = predicted == 0 || m.support == 0;
    m.precision = predicted ? static_cast<double>(hit) / static_cast<double>(predicted) : 0.0;
    m.recall = m.support ? static_cast<double>(hit) / static_cast<double>(m.support) : 0.0;
    m.f1 = m.precision + m.recall > 0.0 ? 2.0 * m.precision * m.recall / (m.precision + m.recall) : 0.0;
  }
  r.accuracy = static_cast<double>(r.confusion[0][0] + r.confusion[1][1]) / static_cast<double>(n);
  const auto average = [&](bool weighted) {
    ClassMetrics avg;
    avg.support = n;
    for (const auto& m : r.per_class) {
      const double w = weighted ? static_cast<double>(m.support) / static_cast<double>(n) : 0.5;
      avg.precision += w * m.precision;
      avg.recall += w * m.recall;
      avg.f1 += w * m.f1;
      avg.undefined = avg.undefined || m.undefined;
    }
    return avg;
  };
  r.macro = average(false);
  r.weighted = average(true);
  return r;
}

ClassificationReport classification_report(const std::vector<bool>& predictions, const std::vector<bool>& labels) {
  if (predictions.size() != labels.size()) throw ValidationError("classification report: length mismatch");
  if (labels.empty()) throw ValidationError("classification report needs at least one sample");
  std::array<std::array<std::size_t, 2>, 2> c{};
  for (std::size_t i = 0; i < labels.size(); ++i) ++c[labels[i] ? 1 : 0][predictions[i] ? 1 : 0];
  return classification_report_from_confusion(c[0][0], c[0][1], c[1][0], c[1][1]);
}

double complexity_fit(std::span<const double> sizes, std::span<const double> runtimes) {
  if (sizes.size() != runtimes.size()) throw ValidationError("complexity fit: length mismatch");
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    if (!(sizes[i] > 0.0) || !(runtimes[i] > 0.0)) throw ValidationError("complexity fit needs positive values");
  }
  if (std::set<double>(sizes.begin(), sizes.end()).size() < 3) {
    throw ValidationError("complexity fit needs at least 3 distinct sizes");
  }
  std::vector<double> lx(sizes.size()), ly(sizes.size());
  std::transform(sizes.begin(), sizes.end(), lx.begin(), [](double v) { return std::log(v); });
  std::transform(runtimes.begin(), runtimes.end(), ly.begin(), [](double v) { return std::log(v); });
  const double mx = mean(lx);
  const double my = mean(ly);
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  return sxy / sxx;
}

std::uint64_t fnv1a64(std::string_view data, std::uint64_t seed) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  const auto mix = [&h](unsigned char byte) {
    h ^= byte;
    h *= 0x100000001b3ULL;
  };
  for (int i = 0; i < 8; ++i) mix(static_cast<unsigned char>(seed >> (8 * i)));
  for (char ch : data) mix(static_cast<unsigned char>(ch));
  return h;
}

bool in_test_split(std::string_view id, std::uint64_t salt) { return fnv1a64(id, salt) % 5 == 0; }

}  // namespace phasechain::stats
