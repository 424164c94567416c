#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace phasechain::stats {

double mean(std::span<const double> xs);
/// ddof = 0 gives the population variance, ddof = 1 the sample variance.
double variance(std::span<const double> xs, int ddof = 1);
double stddev(std::span<const double> xs, int ddof = 1);
/// Sample standard deviation over sqrt(n).
double standard_error(std::span<const double> xs);

/// Regularized incomplete beta I_x(a, b), continued-fraction evaluation with
/// relative tolerance 1e-15 (absolute error well below 1e-10 on [0, 1]).
double incomplete_beta(double a, double b, double x);
double student_t_cdf(double t, double df);
/// Upper tail P(F > f) of the F(df1, df2) distribution.
double f_sf(double f, double df1, double df2);

struct TTestResult {
  double t = 0.0;
  double p = 1.0;
  double df = 0.0;
};

/// Unequal-variance two-sample t-test, two-sided p-value.
TTestResult welch_t_test(std::span<const double> a, std::span<const double> b);

/// (mean a - mean b) / pooled sample standard deviation.
double cohens_d(std::span<const double> a, std::span<const double> b);

double pearson_correlation(std::span<const double> a, std::span<const double> b);

struct ManovaResult {
  double wilks_lambda = 1.0;
  double pillai = 0.0;
  double hotelling_lawley = 0.0;
  double roy = 0.0;
  double f_approx = 0.0;
  double df1 = 0.0;
  double df2 = 0.0;
  double p = 1.0;
};

/// Two-group one-way MANOVA. Rows of `features` are samples; `group[i]` says
/// which group row i belongs to. With two groups Rao's F is exact:
/// F = (1 - L) / L * (n - p - 1) / p on (p, n - p - 1) degrees of freedom.
ManovaResult manova_two_group(const Eigen::MatrixXd& features, const std::vector<bool>& group);

struct Standardizer {
  Eigen::VectorXd mean;
  Eigen::VectorXd scale;  // 1 where a feature has zero spread

  Eigen::VectorXd apply(const Eigen::VectorXd& x) const;
};

struct Classifier {
  Standardizer standardizer;
  Eigen::VectorXd weights;  // one per feature, in standardized units
  double bias = 0.0;
  int iterations = 0;
  double final_loss = 0.0;

  double predict_proba(const Eigen::VectorXd& x) const;
  bool predict(const Eigen::VectorXd& x) const { return predict_proba(x) >= 0.5; }
};

struct LogisticOptions {
  double learning_rate = 0.1;
  double l2 = 1e-4;
  double gradient_tolerance = 1e-8;
  int max_iterations = 10000;
};

/// Full-batch gradient descent on L2-regularized mean log loss, starting from
/// zero weights. Rows of `features` are samples. The bias is not penalized.
Classifier fit_logistic(const Eigen::MatrixXd& features, const std::vector<bool>& labels,
                        const LogisticOptions& options = {});

struct ClassMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t support = 0;
  bool undefined = false;  // zero support or no predictions for this class
};

/// Binary report. Index 0 is the negative class ("False"), index 1 the
/// positive class. confusion[true][predicted].
struct ClassificationReport {
  std::array<std::array<std::size_t, 2>, 2> confusion{};
  std::array<ClassMetrics, 2> per_class{};
  double accuracy = 0.0;
  ClassMetrics macro;
  ClassMetrics weighted;

  std::size_t total() const;
  /// Aligned text table: precision, recall, f1-score, support per class, then
  /// accuracy, macro avg and weighted avg rows.
  std::string to_text() const;
};

ClassificationReport classification_report(const std::vector<bool>& predictions, const std::vector<bool>& labels);
ClassificationReport classification_report_from_confusion(std::size_t tn, std::size_t fp, std::size_t fn,
                                                          std::size_t tp);

/// Least-squares slope of log(runtime) against log(size).
double complexity_fit(std::span<const double> sizes, std::span<const double> runtimes);

/// Stable 64-bit FNV-1a hash, used for the train/test split.
std::uint64_t fnv1a64(std::string_view data, std::uint64_t seed = 0);

/// True when `id` lands in the held-out fold (about 1 in 5 ids).
bool in_test_split(std::string_view id, std::uint64_t salt);

}  // namespace phasechain::stats
