#include "phasechain/plot.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>

#include "phasechain/error.hpp"

namespace phasechain::plot {

using ojson = nlohmann::ordered_json;

const std::vector<std::string>& kind_names() {
  static const std::vector<std::string> names = {"energy-hist", "phase-2d", "pca-3d", "conservation-hist",
                                                 "entropy-hist"};
  return names;
}

std::string_view to_string(PlotKind kind) { return kind_names()[static_cast<std::size_t>(kind)]; }

PlotKind parse_kind(std::string_view name) {
  const auto& names = kind_names();
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] == name) return static_cast<PlotKind>(i);
  }
  std::string valid;
  for (const auto& n : names) valid += (valid.empty() ? "" : ", ") + n;
  throw ValidationError("unknown plot kind '" + std::string(name) + "'; valid kinds: " + valid);
}

namespace {

constexpr const char* kValidColor = "#2ca02c";
constexpr const char* kInvalidColor = "#d62728";
constexpr const char* kUnknownColor = "#7f7f7f";

const char* label_color(const std::string& label) {
  if (label == "valid") return kValidColor;
  if (label == "invalid") return kInvalidColor;
  return kUnknownColor;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

std::string escape(std::string_view text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Range {
  double lo = INFINITY;
  double hi = -INFINITY;

  void add(double v) {
    if (!std::isfinite(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void finish() {
    if (!(lo <= hi)) lo = 0.0, hi = 1.0;
    if (hi - lo < 1e-12) lo -= 0.5, hi += 0.5;
  }
};

class Svg {
 public:
  Svg(double width, double height) : width_(width), height_(height) {}

  void text(double x, double y, std::string_view s, std::string_view anchor = "middle", int size = 12) {
    body_ << "<text x=\"" << num(x) << "\" y=\"" << num(y) << "\" font-size=\"" << size
          << "\" text-anchor=\"" << anchor << "\" font-family=\"sans-serif\">" << escape(s) << "</text>\n";
  }
  void line(double x1, double y1, double x2, double y2, std::string_view color = "#000") {
    body_ << "<line x1=\"" << num(x1) << "\" y1=\"" << num(y1) << "\" x2=\"" << num(x2) << "\" y2=\"" << num(y2)
          << "\" stroke=\"" << color << "\" stroke-width=\"1\"/>\n";
  }
  void rect(double x, double y, double w, double h, std::string_view fill, double opacity) {
    body_ << "<rect x=\"" << num(x) << "\" y=\"" << num(y) << "\" width=\"" << num(w) << "\" height=\"" << num(h)
          << "\" fill=\"" << fill << "\" fill-opacity=\"" << opacity << "\"/>\n";
  }
  void polyline(const std::vector<std::pair<double, double>>& pts, std::string_view color, std::string_view title) {
    body_ << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1\" stroke-opacity=\"0.6\" points=\"";
    for (std::size_t i = 0; i < pts.size(); ++i) body_ << (i ? " " : "") << num(pts[i].first) << ',' << num(pts[i].second);
    body_ << "\"><title>" << escape(title) << "</title></polyline>\n";
  }

  std::string str() const {
    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(width_) << "\" height=\"" << num(height_)
        << "\" viewBox=\"0 0 " << num(width_) << ' ' << num(height_) << "\">\n"
        << "<rect x=\"0\" y=\"0\" width=\"" << num(width_) << "\" height=\"" << num(height_)
        << "\" fill=\"#ffffff\"/>\n"
        << body_.str() << "</svg>\n";
    return out.str();
  }

 private:
  double width_;
  double height_;
  std::ostringstream body_;
};

// A rectangular plotting area with data-to-pixel mapping.
struct Panel {
  double x, y, w, h;
  Range xr, yr;

  double px(double v) const { return x + (v - xr.lo) / (xr.hi - xr.lo) * w; }
  double py(double v) const { return y + h - (v - yr.lo) / (yr.hi - yr.lo) * h; }

  void axes(Svg& svg, std::string_view title, std::string_view xlabel, std::string_view ylabel) const {
    svg.line(x, y + h, x + w, y + h);
    svg.line(x, y, x, y + h);
    for (int i = 0; i <= 4; ++i) {
      const double fx = xr.lo + (xr.hi - xr.lo) * i / 4.0;
      const double fy = yr.lo + (yr.hi - yr.lo) * i / 4.0;
      svg.line(px(fx), y + h, px(fx), y + h + 4);
      svg.text(px(fx), y + h + 16, tick(fx), "middle", 10);
      svg.line(x - 4, py(fy), x, py(fy));
      svg.text(x - 6, py(fy) + 3, tick(fy), "end", 10);
    }
    svg.text(x + w / 2, y - 8, title, "middle", 13);
    svg.text(x + w / 2, y + h + 32, xlabel, "middle", 11);
    svg.text(x - 40, y + h / 2, ylabel, "middle", 11);
  }
};

void legend(Svg& svg, double x, double y) {
  const std::array<std::pair<const char*, const char*>, 2> entries = {
      {{"valid", kValidColor}, {"invalid", kInvalidColor}}};
  for (std::size_t i = 0; i < entries.size(); ++i) {
    svg.rect(x, y + 16.0 * static_cast<double>(i), 10, 10, entries[i].second, 0.8);
    svg.text(x + 14, y + 9 + 16.0 * static_cast<double>(i), entries[i].first, "start", 11);
  }
}

const ojson& chains_of(const ojson& report) {
  if (!report.contains("chains") || !report["chains"].is_array()) {
    throw ValidationError("report has no 'chains' section");
  }
  return report["chains"];
}

using Extractor = std::optional<double> (*)(const ojson& chain);

std::optional<double> number_at(const ojson& chain, std::initializer_list<const char*> path) {
  const ojson* node = &chain;
  for (const char* key : path) {
    if (!node->is_object() || !node->contains(key)) return std::nullopt;
    node = &(*node)[key];
  }
  if (!node->is_number()) return std::nullopt;
  return node->get<double>();
}

void histogram_panel(Svg& svg, const Panel& frame, const ojson& chains, Extractor get, std::string_view title,
                     std::string_view xlabel) {
  constexpr int kBins = 20;
  Panel panel = frame;
  std::vector<std::pair<std::string, double>> samples;
  for (const auto& c : chains) {
    if (const auto v = get(c); v && std::isfinite(*v)) {
      samples.emplace_back(c.value("label", "unknown"), *v);
      panel.xr.add(*v);
    }
  }
  panel.xr.finish();
  std::array<std::array<int, kBins>, 3> counts{};
  for (const auto& [label, v] : samples) {
    int bin = static_cast<int>((v - panel.xr.lo) / (panel.xr.hi - panel.xr.lo) * kBins);
    bin = std::clamp(bin, 0, kBins - 1);
    const int group = label == "valid" ? 0 : label == "invalid" ? 1 : 2;
    ++counts[static_cast<std::size_t>(group)][static_cast<std::size_t>(bin)];
  }
  int peak = 1;
  for (const auto& g : counts) peak = std::max(peak, *std::max_element(g.begin(), g.end()));
  panel.yr = {0.0, static_cast<double>(peak)};
  const double bw = panel.w / kBins;
  const std::array<const char*, 3> colors = {kValidColor, kInvalidColor, kUnknownColor};
  for (std::size_t g = 0; g < 3; ++g) {
    for (int b = 0; b < kBins; ++b) {
      const int n = counts[g][static_cast<std::size_t>(b)];
      if (n == 0) continue;
      const double top = panel.py(n);
      svg.rect(panel.x + b * bw, top, bw, panel.y + panel.h - top, colors[g], 0.45);
    }
  }
  panel.axes(svg, title, xlabel, "chains");
}

std::string render_histogram(const ojson& report, Extractor get, std::string_view title, std::string_view xlabel) {
  const auto& chains = chains_of(report);
  Svg svg(640, 420);
  histogram_panel(svg, {70, 40, 500, 320, {}, {}}, chains, get, title, xlabel);
  legend(svg, 580, 40);
  return svg.str();
}

std::string render_conservation(const ojson& report) {
  const auto& chains = chains_of(report);
  bool any = false;
  for (const auto& c : chains) any = any || (c.contains("conservation") && c["conservation"].is_object());
  if (!any) throw ValidationError("report has no conservation section");
  Svg svg(1080, 420);
  const std::array<std::pair<Extractor, const char*>, 3> panels = {{
      {[](const ojson& c) { return number_at(c, {"conservation", "hamiltonian_se"}); }, "Hamiltonian"},
      {[](const ojson& c) { return number_at(c, {"conservation", "angular_momentum_se"}); }, "Angular momentum"},
      {[](const ojson& c) { return number_at(c, {"conservation", "energy_like_se"}); }, "Energy-like quantity"},
  }};
  for (std::size_t i = 0; i < panels.size(); ++i) {
    histogram_panel(svg, {70.0 + 340.0 * static_cast<double>(i), 40, 260, 320, {}, {}}, chains, panels[i].first,
                    panels[i].second, "standard error");
  }
  legend(svg, 1000, 8);
  return svg.str();
}

std::string render_polylines(const ojson& report, bool three_d) {
  const auto& chains = chains_of(report);
  std::vector<std::vector<std::pair<double, double>>> paths;
  Panel panel{70, 40, 500, 320, {}, {}};
  // Fixed oblique view for 3-D coordinates.
  const double cx = std::cos(0.6), sx = std::sin(0.6);
  for (const auto& c : chains) {
    std::vector<std::pair<double, double>> pts;
    if (three_d) {
      if (!c.contains("projected") || !c["projected"].is_array()) throw ValidationError("report has no PCA coordinates");
      for (const auto& q : c["projected"]) {
        if (!q.is_array() || q.size() < 3) {
          throw ValidationError("report has no 3-D PCA coordinates (rerun analyze with --pca-k 3)");
        }
        const double x = q[0].get<double>(), y = q[1].get<double>(), z = q[2].get<double>();
        pts.emplace_back(x * cx - y * sx, z + 0.5 * (x * sx + y * cx));
      }
    } else {
      if (!c.contains("phase") || !c["phase"].contains("q0") || !c["phase"].contains("p0")) {
        throw ValidationError("report has no phase-space section");
      }
      const auto& q0 = c["phase"]["q0"];
      const auto& p0 = c["phase"]["p0"];
      for (std::size_t i = 0; i < q0.size() && i < p0.size(); ++i) pts.emplace_back(q0[i].get<double>(), p0[i].get<double>());
    }
    for (const auto& [x, y] : pts) {
      panel.xr.add(x);
      panel.yr.add(y);
    }
    paths.push_back(std::move(pts));
  }
  panel.xr.finish();
  panel.yr.finish();
  Svg svg(640, 420);
  if (three_d) {
    panel.axes(svg, "Trajectories in 3-D PCA space (oblique view)", "view x", "view y");
  } else {
    panel.axes(svg, "Phase portrait, leading reduced coordinate", "q", "p");
  }
  for (std::size_t i = 0; i < paths.size(); ++i) {
    std::vector<std::pair<double, double>> px;
    for (const auto& [x, y] : paths[i]) px.emplace_back(panel.px(x), panel.py(y));
    const std::string label = chains[i].value("label", "unknown");
    svg.polyline(px, label_color(label), chains[i].value("id", ""));
  }
  legend(svg, 580, 40);
  return svg.str();
}

}  // namespace

std::string render(const ojson& report, PlotKind kind) {
  switch (kind) {
    case PlotKind::energy_hist:
      return render_histogram(
          report, [](const ojson& c) { return number_at(c, {"energy", "mean_h"}); }, "Distribution of mean chain energy",
          "mean H");
    case PlotKind::entropy_hist:
      return render_histogram(
          report, [](const ojson& c) { return number_at(c, {"statmech", "entropy"}); }, "Trajectory entropy",
          "entropy (nats)");
    case PlotKind::conservation_hist:
      return render_conservation(report);
    case PlotKind::phase_2d:
      return render_polylines(report, false);
    case PlotKind::pca_3d:
      return render_polylines(report, true);
  }
  throw ValidationError("unknown plot kind");
}

std::vector<std::filesystem::path> write_plots(const ojson& report, const std::vector<PlotKind>& kinds,
                                               const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create '" + out_dir.string() + "': " + ec.message());
  std::vector<std::filesystem::path> written;
  for (const auto kind : kinds) {
    const std::string svg = render(report, kind);
    const auto path = out_dir / (std::string(to_string(kind)) + ".svg");
    std::ofstream out(path);
    if (!out) throw IoError("cannot write '" + path.string() + "'");
    out << svg;
    if (!out) throw IoError("write failed for '" + path.string() + "'");
    written.push_back(path);
  }
  return written;
}

}  // namespace phasechain::plot
