#include "distort/report.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <system_error>

#include "distort/error.hpp"

namespace distort {

std::string format_number(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

namespace {

std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

const char* const kPalette[] = {"#4e79a7", "#f28e2b", "#59a14f", "#e15759", "#76b7b2"};

}  // namespace

std::string render_bar_chart(const std::string& title, const std::vector<Bar>& bars) {
  std::vector<std::string> labels, series;
  for (const auto& b : bars) {
    if (std::find(labels.begin(), labels.end(), b.label) == labels.end()) labels.push_back(b.label);
    if (std::find(series.begin(), series.end(), b.series) == series.end()) series.push_back(b.series);
  }
  double max_value = 0.0;
  for (const auto& b : bars) max_value = std::max(max_value, b.value);
  if (max_value <= 0.0) max_value = 1.0;

  constexpr double kBarWidth = 14.0, kGap = 10.0, kPlotHeight = 300.0;
  constexpr double kLeft = 50.0, kTop = 40.0;
  const double group_width = kBarWidth * static_cast<double>(series.size()) + kGap;
  const double width = kLeft + group_width * static_cast<double>(labels.size()) + 20.0;
  const double height = kTop + kPlotHeight + 90.0;

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
      << height << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
  svg << "  <title>" << xml_escape(title) << "</title>\n";
  svg << "  <text class=\"title\" x=\"" << kLeft << "\" y=\"20\" font-size=\"14\">"
      << xml_escape(title) << "</text>\n";
  for (std::size_t s = 0; s < series.size(); ++s) {
    svg << "  <text class=\"legend\" x=\"" << kLeft + 120.0 * static_cast<double>(s)
        << "\" y=\"" << height - 10 << "\" font-size=\"11\" fill=\"" << kPalette[s % 5] << "\">"
        << xml_escape(series[s]) << "</text>\n";
  }
  svg << "  <line x1=\"" << kLeft << "\" y1=\"" << kTop + kPlotHeight << "\" x2=\"" << width - 10
      << "\" y2=\"" << kTop + kPlotHeight << "\" stroke=\"#333\"/>\n";
  for (const auto& b : bars) {
    const auto li = std::find(labels.begin(), labels.end(), b.label) - labels.begin();
    const auto si = std::find(series.begin(), series.end(), b.series) - series.begin();
    const double h = kPlotHeight * std::max(0.0, b.value) / max_value;
    const double x = kLeft + group_width * static_cast<double>(li) + kBarWidth * static_cast<double>(si);
    const double y = kTop + kPlotHeight - h;
    svg << "  <rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << kBarWidth - 1
        << "\" height=\"" << h << "\" fill=\"" << kPalette[si % 5] << "\"/>\n";
    svg << "  <text class=\"value\" data-label=\"" << xml_escape(b.label) << "\" data-series=\""
        << xml_escape(b.series) << "\" x=\"" << x << "\" y=\"" << y - 2
        << "\" font-size=\"7\">" << format_number(b.value) << "</text>\n";
  }
  for (std::size_t li = 0; li < labels.size(); ++li) {
    const double x = kLeft + group_width * static_cast<double>(li);
    svg << "  <text class=\"label\" x=\"" << x << "\" y=\"" << kTop + kPlotHeight + 12
        << "\" font-size=\"8\" transform=\"rotate(60 " << x << ' ' << kTop + kPlotHeight + 12
        << ")\">" << xml_escape(labels[li]) << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

std::string per_query_csv(const ExperimentReport& report) {
  std::ostringstream out;
  out << "query_id,pattern,retrieved,relevant,precision\n";
  for (const auto& q : report.queries) {
    out << csv_field(q.query_id) << ',' << csv_field(q.pattern) << ',' << q.retrieved << ','
        << q.relevant << ',' << (q.precision ? format_number(*q.precision) : "") << '\n';
  }
  return out.str();
}

std::string attack_csv(const ExperimentReport& report) {
  std::ostringstream out;
  out << "classifier,folds,overall_accuracy,tp,tn,fp,fn\n";
  for (const auto& a : report.attack) {
    out << csv_field(a.classifier) << ',' << a.folds << ',' << format_number(a.overall_accuracy)
        << ',' << a.confusion.tp << ',' << a.confusion.tn << ',' << a.confusion.fp << ','
        << a.confusion.fn << '\n';
  }
  return out.str();
}

std::string exposure_csv(const ExperimentReport& report) {
  std::ostringstream out;
  out << "category,ads\n";
  for (const auto& [category, count] : report.exposure.conceptual_breakdown) {
    out << csv_field(category) << ',' << count << '\n';
  }
  return out.str();
}

std::vector<std::filesystem::path> emit_report(const ExperimentReport& report,
                                               const std::filesystem::path& out_dir) {
  std::vector<Bar> retrieval, accuracy, ads;
  for (const auto& q : report.queries) {
    retrieval.push_back({q.query_id, "retrieved", static_cast<double>(q.retrieved)});
    retrieval.push_back({q.query_id, "relevant", static_cast<double>(q.relevant)});
  }
  for (const auto& a : report.attack) {
    accuracy.push_back({a.classifier, "accuracy", a.overall_accuracy});
  }
  for (const auto& [category, count] : report.exposure.conceptual_breakdown) {
    ads.push_back({category, "ads", static_cast<double>(count)});
  }

  const std::vector<std::pair<std::string, std::string>> files = {
      {"report.json", dump_report(report)},
      {"per_query.csv", per_query_csv(report)},
      {"attack.csv", attack_csv(report)},
      {"exposure.csv", exposure_csv(report)},
      {"retrieved_vs_relevant.svg",
       render_bar_chart("Retrieved vs relevant documents per query", retrieval)},
      {"classifier_accuracy.svg", render_bar_chart("Attack accuracy per classifier", accuracy)},
      {"ad_categories.svg", render_bar_chart("Ads served per category", ads)},
  };

  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw io_error("cannot create " + out_dir.string() + ": " + ec.message());
  std::vector<std::filesystem::path> written;
  for (const auto& [name, content] : files) {
    const auto path = out_dir / name;
    std::ofstream out(path, std::ios::binary);
    out << content;
    if (!out) throw io_error("cannot write " + path.string());
    written.push_back(path);
  }
  return written;
}

}  // namespace distort
