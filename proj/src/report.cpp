#include "phasechain/report.hpp"

#include <charconv>
#include <cmath>
#include <fstream>

#include "phasechain/error.hpp"

namespace phasechain {

using ojson = nlohmann::ordered_json;

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

namespace {

template <typename Range>
ojson array_of(const Range& values) {
  ojson a = ojson::array();
  for (double v : values) a.push_back(v);
  return a;
}

ojson vector_json(const Vector& v) {
  ojson a = ojson::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

ojson ttest_json(const stats::TTestResult& t) { return {{"t", t.t}, {"p", t.p}, {"df", t.df}}; }

template <typename T, typename Fn>
ojson optional_json(const std::optional<T>& v, Fn&& fn) {
  return v ? fn(*v) : ojson(nullptr);
}

ojson comparison_json(const GroupComparison& c) {
  ojson o;
  o["valid_mean"] = c.valid_mean;
  o["invalid_mean"] = c.invalid_mean;
  o["t_test"] = ttest_json(c.t_test);
  o["cohens_d"] = c.cohens_d ? ojson(*c.cohens_d) : ojson(nullptr);
  return o;
}

ojson metrics_json(const stats::ClassMetrics& m) {
  return {{"precision", m.precision}, {"recall", m.recall}, {"f1", m.f1}, {"support", m.support},
          {"undefined", m.undefined}};
}

ojson chain_json(const ChainRecord& r) {
  ojson o;
  o["id"] = r.chain_id;
  o["label"] = std::string(to_string(r.label));
  o["steps"] = r.steps;
  o["energy"] = {{"T", array_of(r.energy.kinetic)},
                 {"V", array_of(r.energy.potential)},
                 {"H", array_of(r.energy.hamiltonian)},
                 {"mean_h", r.energy.mean_h},
                 {"conservation_score", r.energy.conservation_score}};
  ojson g;
  g["length"] = r.geometry.length;
  g["smoothness"] = r.geometry.smoothness ? ojson(*r.geometry.smoothness) : ojson(nullptr);
  g["v"] = array_of(r.geometry.magnitudes);
  g["theta"] = array_of(r.geometry.angles);
  g["kappa"] = array_of(r.geometry.curvatures);
  g["tau"] = array_of(r.geometry.torsions);
  g["tau_space"] = r.geometry.torsions.empty() ? ojson(nullptr)
                                               : ojson(r.torsion_from_reduction ? "pca-3d" : "native-3d");
  g["frenet_frames"] = r.frenet_frames;
  g["frenet_degenerate"] = r.frenet_degenerate;
  o["geometry"] = std::move(g);

  ojson projected = ojson::array();
  for (const auto& q : r.projected) projected.push_back(vector_json(q));
  o["projected"] = std::move(projected);

  ojson ph;
  std::vector<double> q0, p0;
  for (const auto& pt : r.phase.points) {
    q0.push_back(pt.q[0]);
    p0.push_back(pt.p[0]);
  }
  ph["q0"] = array_of(q0);
  ph["p0"] = array_of(p0);
  ph["action"] = array_of(r.phase.actions);
  ph["theta"] = array_of(r.phase.angles);
  ph["mean_action"] = r.phase.mean_action;
  ph["mean_action_normalized"] = r.normalized_action;
  ph["angle_range"] = r.phase.angle_range;
  o["phase"] = std::move(ph);

  o["conservation"] = optional_json(r.conservation, [](const canonical::ConservationReport& c) {
    return ojson{{"hamiltonian_se", c.hamiltonian_se},
                 {"angular_momentum_se", c.angular_momentum_se},
                 {"energy_like_se", c.energy_like_se}};
  });
  o["statmech"] = {{"entropy", r.statmech.entropy},
                   {"free_energy", r.statmech.free_energy},
                   {"temperature", r.statmech.temperature}};
  o["features"] = optional_json(r.features, [](const Vector& f) { return vector_json(f); });
  o["flags"] = r.flags;
  return o;
}

ojson statistics_json(const CohortStatistics& s) {
  ojson o;
  o["n_valid"] = s.n_valid;
  o["n_invalid"] = s.n_invalid;
  o["n_unknown"] = s.n_unknown;
  o["energy"] = optional_json(s.energy, [](const CohortEnergyStats& e) {
    ojson x;
    x["valid_mean_h"] = e.valid_mean_h;
    x["valid_std_h"] = e.valid_std_h;
    x["invalid_mean_h"] = e.invalid_mean_h;
    x["invalid_std_h"] = e.invalid_std_h;
    x["valid_mean_conservation_score"] = e.valid_mean_score;
    x["invalid_mean_conservation_score"] = e.invalid_mean_score;
    x["t_test"] = ttest_json(e.t_test);
    x["score_validity_correlation"] =
        e.score_validity_correlation ? ojson(*e.score_validity_correlation) : ojson(nullptr);
    return x;
  });
  o["trajectory_length"] = optional_json(s.length, comparison_json);
  o["smoothness"] = optional_json(s.smoothness, comparison_json);

  ojson pca;
  pca["granularity"] = std::string(to_string(s.granularity));
  ojson axes = ojson::array();
  for (const auto& a : s.pca_axes) axes.push_back(optional_json(a, comparison_json));
  pca["axes"] = std::move(axes);
  pca["samples"] = s.manova_samples;
  pca["manova"] = optional_json(s.manova, [](const stats::ManovaResult& m) {
    return ojson{{"wilks_lambda", m.wilks_lambda}, {"pillai", m.pillai},      {"hotelling_lawley", m.hotelling_lawley},
                 {"roy", m.roy},                   {"f", m.f_approx},         {"df1", m.df1},
                 {"df2", m.df2},                   {"p", m.p}};
  });
  o["pca"] = std::move(pca);

  o["action_angle"] = optional_json(s.action_angle, [](const canonical::ActionAngleCohortTest& a) {
    return ojson{{"valid_mean_action", a.valid_mean_action},
                 {"invalid_mean_action", a.invalid_mean_action},
                 {"action_t_test", ttest_json(a.action_test)},
                 {"valid_mean_angle_range", a.valid_mean_angle_range},
                 {"invalid_mean_angle_range", a.invalid_mean_angle_range},
                 {"angle_range_t_test", ttest_json(a.angle_range_test)}};
  });
  o["conservation"] = {{"hamiltonian_se", optional_json(s.hamiltonian_se, comparison_json)},
                       {"angular_momentum_se", optional_json(s.angular_momentum_se, comparison_json)},
                       {"energy_like_se", optional_json(s.energy_like_se, comparison_json)}};
  o["statmech"] = {{"entropy", optional_json(s.entropy, comparison_json)},
                   {"free_energy", optional_json(s.free_energy, comparison_json)}};
  o["classifier"] = optional_json(s.classifier, [](const ClassifierSummary& c) {
    ojson x;
    x["n_train"] = c.n_train;
    x["n_test"] = c.n_test;
    x["train_accuracy"] = c.train_accuracy;
    x["test_accuracy"] = c.test_accuracy;
    x["iterations"] = c.model.iterations;
    x["final_loss"] = c.model.final_loss;
    x["weights"] = vector_json(c.model.weights);
    x["bias"] = c.model.bias;
    x["confusion"] = c.report.confusion;
    x["per_class"] = {{"False", metrics_json(c.report.per_class[0])}, {"True", metrics_json(c.report.per_class[1])}};
    x["accuracy"] = c.report.accuracy;
    x["macro_avg"] = metrics_json(c.report.macro);
    x["weighted_avg"] = metrics_json(c.report.weighted);
    return x;
  });
  o["notes"] = s.notes;
  return o;
}

class CsvFile {
 public:
  CsvFile(const std::filesystem::path& path, std::string_view header) : path_(path), out_(path) {
    if (!out_) throw IoError("cannot write '" + path.string() + "'");
    out_ << header << '\n';
  }
  ~CsvFile() = default;

  std::ofstream& stream() { return out_; }

  void close() {
    out_.close();
    if (!out_) throw IoError("write failed for '" + path_.string() + "'");
  }

 private:
  std::filesystem::path path_;
  std::ofstream out_;
};

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

std::string cell(const std::vector<double>& values, std::size_t i) {
  return i < values.size() ? format_double(values[i]) : std::string();
}

}  // namespace

ojson report_to_json(const CohortReport& report) {
  ojson o;
  o["tool"] = kToolName;
  o["version"] = kToolVersion;
  o["generated_at"] = report.generated_at;
  const auto& c = report.config;
  o["config"] = {{"input", c.input.string()},
                 {"output_dir", c.output_dir.string()},
                 {"pca_k", c.pca_k},
                 {"temperature", c.temperature},
                 {"seed", c.seed},
                 {"granularity", std::string(to_string(c.granularity))},
                 {"plot", c.plot}};
  o["provenance"] = {{"input", report.provenance.input},
                     {"input_sha256", report.provenance.input_sha256},
                     {"dataset", report.provenance.dataset_note},
                     {"chain_count", report.provenance.chain_count},
                     {"dimension", report.provenance.dimension},
                     {"eigen_version", std::to_string(EIGEN_WORLD_VERSION) + "." +
                                           std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                           std::to_string(EIGEN_MINOR_VERSION)}};
  o["pca"] = pca_to_json(report.model);
  ojson chains = ojson::array();
  for (const auto& r : report.chains) chains.push_back(chain_json(r));
  o["chains"] = std::move(chains);
  o["statistics"] = statistics_json(report.statistics);
  return o;
}

void write_report_files(const CohortReport& report, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create '" + dir.string() + "': " + ec.message());

  {
    std::ofstream out(dir / "report.json");
    if (!out) throw IoError("cannot write '" + (dir / "report.json").string() + "'");
    out << report_to_json(report).dump(1) << '\n';
    if (!out) throw IoError("write failed for report.json");
  }
  save_pca(report.model, dir / "pca_model.json");

  CsvFile energy(dir / "energy.csv", "chain_id,step_index,T,V,H");
  CsvFile geometry(dir / "geometry.csv", "chain_id,step_index,length,smoothness,v,theta,kappa,tau");
  CsvFile phase(dir / "phase.csv", "chain_id,step,q0,p0,I,theta");
  CsvFile conservation(dir / "conservation.csv", "chain_id,hamiltonian_se,angular_momentum_se,energy_like_se");
  CsvFile statmech(dir / "statmech.csv", "chain_id,entropy,free_energy,temperature");

  for (const auto& r : report.chains) {
    const std::string id = csv_field(r.chain_id);
    for (std::size_t i = 0; i < r.energy.hamiltonian.size(); ++i) {
      energy.stream() << id << ',' << i << ',' << format_double(r.energy.kinetic[i]) << ','
                      << format_double(r.energy.potential[i]) << ',' << format_double(r.energy.hamiltonian[i])
                      << '\n';
    }
    const auto& g = r.geometry;
    const std::string smooth = g.smoothness ? format_double(*g.smoothness) : std::string();
    for (std::size_t i = 0; i < g.magnitudes.size(); ++i) {
      geometry.stream() << id << ',' << i << ',' << format_double(g.length) << ',' << smooth << ','
                        << cell(g.magnitudes, i) << ',' << cell(g.angles, i) << ',' << cell(g.curvatures, i) << ','
                        << cell(g.torsions, i) << '\n';
    }
    for (std::size_t i = 0; i < r.phase.points.size(); ++i) {
      phase.stream() << id << ',' << i << ',' << format_double(r.phase.points[i].q[0]) << ','
                     << format_double(r.phase.points[i].p[0]) << ',' << format_double(r.phase.actions[i]) << ','
                     << format_double(r.phase.angles[i]) << '\n';
    }
    if (r.conservation) {
      conservation.stream() << id << ',' << format_double(r.conservation->hamiltonian_se) << ','
                            << format_double(r.conservation->angular_momentum_se) << ','
                            << format_double(r.conservation->energy_like_se) << '\n';
    } else {
      conservation.stream() << id << ",,,\n";
    }
    statmech.stream() << id << ',' << format_double(r.statmech.entropy) << ','
                      << format_double(r.statmech.free_energy) << ',' << format_double(r.statmech.temperature)
                      << '\n';
  }
  energy.close();
  geometry.close();
  phase.close();
  conservation.close();
  statmech.close();

  std::ofstream text(dir / "classification.txt");
  if (!text) throw IoError("cannot write classification.txt");
  if (report.statistics.classifier) {
    const auto& c = *report.statistics.classifier;
    const auto& m = c.report.confusion;
    text << "held-out split: " << c.n_test << " chains (train " << c.n_train << ")\n"
         << "confusion (rows true, cols predicted; False, True):\n"
         << m[0][0] << ' ' << m[0][1] << '\n'
         << m[1][0] << ' ' << m[1][1] << "\n\n"
         << c.report.to_text();
  } else {
    text << "classifier not fitted\n";
  }
}

ojson load_report(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open report '" + path.string() + "'");
  try {
    ojson o;
    in >> o;
    return o;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("report '" + path.string() + "': " + e.what());
  }
}

}  // namespace phasechain
