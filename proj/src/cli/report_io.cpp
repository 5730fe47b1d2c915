#include "tracelab/cli/report_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "tracelab/errors.hpp"

namespace tracelab::cli {

using nlohmann::json;

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

json number_or_label(double v) {
  if (std::isfinite(v)) return v;
  return format_double(v);
}

void dump_value(std::ostringstream& out, const json& v, int depth) {
  const std::string pad(static_cast<std::size_t>(2 * (depth + 1)), ' ');
  const std::string close_pad(static_cast<std::size_t>(2 * depth), ' ');
  switch (v.type()) {
    case json::value_t::object: {
      if (v.empty()) {
        out << "{}";
        return;
      }
      out << "{\n";
      bool first = true;
      for (auto it = v.begin(); it != v.end(); ++it) {
        if (!first) out << ",\n";
        first = false;
        out << pad << json(it.key()).dump() << ": ";
        dump_value(out, it.value(), depth + 1);
      }
      out << '\n' << close_pad << '}';
      return;
    }
    case json::value_t::array: {
      if (v.empty()) {
        out << "[]";
        return;
      }
      // Short numeric rows (series points) stay on one line.
      const bool inline_row = v.size() <= 2 && std::all_of(v.begin(), v.end(), [](const json& e) {
                                return e.is_number() || e.is_string();
                              });
      if (inline_row) {
        out << '[';
        for (std::size_t i = 0; i < v.size(); ++i) {
          if (i) out << ", ";
          dump_value(out, v[i], depth + 1);
        }
        out << ']';
        return;
      }
      out << "[\n";
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out << ",\n";
        out << pad;
        dump_value(out, v[i], depth + 1);
      }
      out << '\n' << close_pad << ']';
      return;
    }
    case json::value_t::number_float: {
      const double d = v.get<double>();
      if (std::isfinite(d))
        out << format_double(d);
      else
        out << json(format_double(d)).dump();
      return;
    }
    default:
      out << v.dump();
      return;
  }
}

}  // namespace

json to_json(const CheckReport& report) {
  json j;
  j["name"] = report.name;
  j["verdict"] = to_string(report.verdict);
  j["residuals"] = json::object();
  for (const auto& [k, v] : report.residuals) j["residuals"][k] = number_or_label(v);
  j["tolerances"] = json::object();
  for (const auto& [k, v] : report.tolerances) j["tolerances"][k] = number_or_label(v);
  j["metadata"] = json::object();
  for (const auto& [k, v] : report.metadata) {
    std::visit(
        [&](const auto& value) {
          using T = std::decay_t<decltype(value)>;
          if constexpr (std::is_same_v<T, double>)
            j["metadata"][k] = number_or_label(value);
          else
            j["metadata"][k] = value;
        },
        v);
  }
  j["series"] = json::object();
  for (const auto& [k, pts] : report.series) {
    json arr = json::array();
    for (const auto& [x, y] : pts) arr.push_back(json::array({number_or_label(x), number_or_label(y)}));
    j["series"][k] = std::move(arr);
  }
  return j;
}

std::string canonical_dump(const json& doc) {
  std::ostringstream out;
  dump_value(out, doc, 0);
  out << '\n';
  return out.str();
}

json report_document(const json& config, const std::vector<CheckReport>& reports) {
  json doc;
  doc["version"] = kToolVersion;
  doc["config"] = config;
  doc["reports"] = json::array();
  for (const auto& r : reports) doc["reports"].push_back(to_json(r));
  return doc;
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string reports_to_csv(const std::vector<CheckReport>& reports) {
  std::ostringstream out;
  out << "report,index,verdict,residual,value,tolerance\n";
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const auto& r = reports[i];
    for (const auto& [key, value] : r.residuals) {
      auto tol = r.tolerances.find(key);
      out << csv_field(r.name) << ',' << i << ',' << to_string(r.verdict) << ',' << csv_field(key) << ','
          << format_double(value) << ',' << (tol == r.tolerances.end() ? std::string() : format_double(tol->second))
          << '\n';
    }
  }
  return out.str();
}

std::string reports_to_svg(const std::vector<CheckReport>& reports, const std::string& title) {
  struct Curve {
    std::string label;
    std::vector<std::pair<double, double>> pts;
  };
  std::vector<Curve> curves;
  constexpr std::size_t kMaxReportsPlotted = 8;
  for (std::size_t i = 0; i < reports.size() && i < kMaxReportsPlotted; ++i) {
    for (const auto& [name, pts] : reports[i].series) {
      Curve c;
      c.label = reports.size() > 1 ? reports[i].name + "#" + std::to_string(i) + " " + name : name;
      for (const auto& p : pts)
        if (std::isfinite(p.first) && std::isfinite(p.second)) c.pts.push_back(p);
      if (!c.pts.empty()) curves.push_back(std::move(c));
    }
  }
  if (curves.empty()) return {};

  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  for (const auto& c : curves)
    for (const auto& [x, y] : c.pts) {
      xmin = std::min(xmin, x);
      xmax = std::max(xmax, x);
      ymin = std::min(ymin, y);
      ymax = std::max(ymax, y);
    }
  const bool log_x = xmin > 0.0 && xmax / xmin > 100.0;
  auto tx = [&](double x) { return log_x ? std::log10(x) : x; };
  double x0 = tx(xmin), x1 = tx(xmax);
  if (x1 == x0) x1 = x0 + 1.0;
  if (ymax == ymin) {
    ymin -= 0.5;
    ymax += 0.5;
  }

  constexpr double width = 720, height = 440, left = 70, right = 20, top = 40, bottom = 50;
  const double plot_w = width - left - right;
  const double plot_h = height - top - bottom;
  auto px = [&](double x) { return left + (tx(x) - x0) / (x1 - x0) * plot_w; };
  auto py = [&](double y) { return top + (ymax - y) / (ymax - ymin) * plot_h; };
  auto fmt = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return std::string(buf);
  };
  auto escape = [](const std::string& s) {
    std::string out;
    for (char c : s) {
      if (c == '<') out += "&lt;";
      else if (c == '>') out += "&gt;";
      else if (c == '&') out += "&amp;";
      else out += c;
    }
    return out;
  };
  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#17becf", "#7f7f7f"};

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(width) << "\" height=\"" << fmt(height)
      << "\" viewBox=\"0 0 " << fmt(width) << ' ' << fmt(height) << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << fmt(left) << "\" y=\"24\" font-family=\"sans-serif\" font-size=\"14\">" << escape(title)
      << "</text>\n";
  out << "<rect x=\"" << fmt(left) << "\" y=\"" << fmt(top) << "\" width=\"" << fmt(plot_w) << "\" height=\""
      << fmt(plot_h) << "\" fill=\"none\" stroke=\"black\"/>\n";
  const double label_y = height - bottom + 18;
  out << "<text x=\"" << fmt(left) << "\" y=\"" << fmt(label_y) << "\" font-family=\"sans-serif\" font-size=\"11\">"
      << fmt(xmin) << "</text>\n";
  out << "<text x=\"" << fmt(width - right) << "\" y=\"" << fmt(label_y)
      << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">" << fmt(xmax)
      << (log_x ? " (log scale)" : "") << "</text>\n";
  out << "<text x=\"" << fmt(left - 6) << "\" y=\"" << fmt(top + 10)
      << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">" << fmt(ymax) << "</text>\n";
  out << "<text x=\"" << fmt(left - 6) << "\" y=\"" << fmt(top + plot_h)
      << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">" << fmt(ymin) << "</text>\n";
  for (std::size_t c = 0; c < curves.size(); ++c) {
    const char* color = palette[c % std::size(palette)];
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t k = 0; k < curves[c].pts.size(); ++k) {
      if (k) out << ' ';
      out << fmt(px(curves[c].pts[k].first)) << ',' << fmt(py(curves[c].pts[k].second));
    }
    out << "\"/>\n";
    out << "<text x=\"" << fmt(left + 8) << "\" y=\"" << fmt(top + 16 + 14 * static_cast<double>(c))
        << "\" font-family=\"sans-serif\" font-size=\"11\" fill=\"" << color << "\">" << escape(curves[c].label)
        << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

void write_file_atomically(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write '" + tmp.string() + "'");
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("write failed for '" + tmp.string() + "'");
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw std::runtime_error("cannot rename '" + tmp.string() + "' to '" + path + "': " + ec.message());
  }
}

}  // namespace tracelab::cli
