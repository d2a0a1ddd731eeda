#include "pcbench/dataset_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"
#include "pcbench/errors.hpp"
#include "pcbench/metrics.hpp"

namespace pcbench {

namespace {

using nlohmann::json;

json parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DatasetError("cannot open '" + path + "'");
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw DatasetError("cannot parse '" + path + "': " + e.what());
  }
  return doc;
}

PCMatrix parse_pcm(const json& cells, const std::string& ref_id) {
  if (!cells.is_array() || cells.empty()) {
    throw DatasetError("reference '" + ref_id + "': pcm must be a square array");
  }
  const int n = static_cast<int>(cells.size());
  if (n < 2) throw DatasetError("reference '" + ref_id + "': pcm needs n >= 2");
  PCMatrix pcm(n, 0.0);
  for (int i = 0; i < n; ++i) {
    if (!cells[i].is_array() || static_cast<int>(cells[i].size()) != n) {
      throw DatasetError("reference '" + ref_id + "': row " + std::to_string(i) +
                         " is not length " + std::to_string(n));
    }
    for (int j = 0; j < n; ++j) {
      if (!cells[i][j].is_number()) {
        throw DatasetError("reference '" + ref_id + "': cell (" + std::to_string(i) +
                           ", " + std::to_string(j) + ") is not a number");
      }
      const double v = cells[i][j].get<double>();
      if (i == j) {
        if (v != 0.0) {
          throw DatasetError("reference '" + ref_id + "': diagonal cell (" +
                             std::to_string(i) + ", " + std::to_string(j) +
                             ") must be zero");
        }
        continue;
      }
      if (!(v >= 0.0) || !std::isfinite(v)) {
        throw DatasetError("reference '" + ref_id + "': cell (" + std::to_string(i) +
                           ", " + std::to_string(j) + ") must be finite and nonnegative");
      }
      pcm.set(i, j, v);
    }
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (pcm.pair_total(i, j) <= 0.0) {
        throw DatasetError("reference '" + ref_id + "': incomplete design, no votes on pair (" +
                           std::to_string(i) + ", " + std::to_string(j) + ")");
      }
    }
  }
  return pcm;
}

std::string format_fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
  return buf;
}

}  // namespace

bool dataset_is_empirical(const std::string& path) {
  const json doc = parse_file(path);
  if (!doc.contains("references") || !doc["references"].is_array() ||
      doc["references"].empty()) {
    throw DatasetError("'" + path + "' has no references");
  }
  return doc["references"][0].contains("pcm");
}

LoadedDataset load_dataset(const std::string& path) {
  const json doc = parse_file(path);
  LoadedDataset out;
  out.name = doc.value("name", std::string("dataset"));
  out.subjects = doc.value("subjects", 0);
  if (!doc.contains("references") || !doc["references"].is_array() ||
      doc["references"].empty()) {
    throw DatasetError("'" + path + "' has no references");
  }
  int index = 0;
  for (const json& ref : doc["references"]) {
    const std::string id = ref.value("id", "ref" + std::to_string(index));
    if (!ref.contains("pcm")) {
      throw DatasetError("reference '" + id + "' has no pcm");
    }
    PCMatrix pcm = parse_pcm(ref["pcm"], id);
    if (ref.contains("n") && ref["n"].get<int>() != pcm.size()) {
      throw DatasetError("reference '" + id + "': declared n=" +
                         std::to_string(ref["n"].get<int>()) + " but pcm is " +
                         std::to_string(pcm.size()) + "x" + std::to_string(pcm.size()));
    }
    out.references.push_back({id, std::move(pcm)});
    ++index;
  }
  return out;
}

SyntheticSpec load_synthetic_spec(const std::string& path) {
  const json doc = parse_file(path);
  SyntheticSpec out;
  out.name = doc.value("name", std::string("synthetic"));
  if (!doc.contains("references") || !doc["references"].is_array() ||
      doc["references"].empty()) {
    throw DatasetError("'" + path + "' has no references");
  }
  int index = 0;
  for (const json& ref : doc["references"]) {
    const std::string id = ref.value("id", "synth-" + std::to_string(index));
    try {
      std::vector<double> mu = ref.at("mu").get<std::vector<double>>();
      std::vector<double> sigma = ref.at("sigma").get<std::vector<double>>();
      const double flip = ref.value("flip_prob", 0.1);
      const int subjects = ref.value("subjects", 15);
      out.references.push_back(
          {id, SyntheticOracle(std::move(mu), std::move(sigma), flip, subjects)});
    } catch (const json::exception& e) {
      throw DatasetError("reference '" + id + "': " + e.what());
    }
    ++index;
  }
  return out;
}

void save_synthetic_spec(const SyntheticSpec& spec, const std::string& path) {
  json doc;
  doc["name"] = spec.name;
  doc["references"] = json::array();
  for (const auto& ref : spec.references) {
    json r;
    r["id"] = ref.id;
    r["mu"] = ref.oracle.mu();
    r["sigma"] = ref.oracle.sigma();
    r["flip_prob"] = ref.oracle.flip_prob();
    r["subjects"] = ref.oracle.subjects();
    doc["references"].push_back(std::move(r));
  }
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path + "'");
  out << doc.dump(2) << '\n';
}

ResultsTable to_results_table(const std::string& dataset,
                              const std::vector<AggregateRow>& aggregate) {
  ResultsTable table;
  table.rows.reserve(aggregate.size());
  for (const AggregateRow& row : aggregate) {
    table.rows.push_back({dataset, row.sampler, row.fraction, row.plcc_mean,
                          row.plcc_std, row.srocc_mean, row.srocc_std,
                          row.repetitions, row.references});
  }
  return table;
}

static const char kCsvHeader[] =
    "dataset,sampler,budget_fraction,plcc_mean,plcc_std,srocc_mean,srocc_std,"
    "repetitions,references";

void write_results(const ResultsTable& table, const std::string& path) {
  if (table.rows.empty()) throw Error("results table is empty");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out << kCsvHeader << '\n';
  for (const ResultsTable::Row& row : table.rows) {
    out << row.dataset << ',' << row.sampler << ','
        << format_fixed(row.budget_fraction, 4) << ','
        << format_fixed(row.plcc_mean, 6) << ',' << format_fixed(row.plcc_std, 6)
        << ',' << format_fixed(row.srocc_mean, 6) << ','
        << format_fixed(row.srocc_std, 6) << ',' << row.repetitions << ','
        << row.references << '\n';
  }
}

ResultsTable read_results(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) {
    throw Error("'" + path + "' is not a results CSV (bad header)");
  }
  ResultsTable table;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (fields.size() != 9) {
      throw Error("'" + path + "' row has " + std::to_string(fields.size()) +
                  " fields, expected 9");
    }
    ResultsTable::Row row;
    row.dataset = fields[0];
    row.sampler = fields[1];
    row.budget_fraction = std::stod(fields[2]);
    row.plcc_mean = std::stod(fields[3]);
    row.plcc_std = std::stod(fields[4]);
    row.srocc_mean = std::stod(fields[5]);
    row.srocc_std = std::stod(fields[6]);
    row.repetitions = std::stoi(fields[7]);
    row.references = std::stoi(fields[8]);
    table.rows.push_back(std::move(row));
  }
  return table;
}

namespace {

// fixed palette keyed by canonical sampler order; extras cycle
const char* curve_color(std::size_t index) {
  static const char* kColors[] = {"#4477aa", "#ee6677", "#228833",
                                  "#ccbb44", "#66ccee", "#aa3377",
                                  "#bbbbbb", "#222222"};
  return kColors[index % (sizeof(kColors) / sizeof(kColors[0]))];
}

struct Panel {
  double x0, y0, width, height;  // plot area in svg coordinates
};

std::string svg_polyline(const Panel& panel, const std::vector<double>& xs,
                         const std::vector<double>& ys, double x_min, double x_max,
                         double y_min, double y_max, const char* color) {
  std::string svg = "  <polyline fill=\"none\" stroke=\"" + std::string(color) +
                    "\" stroke-width=\"1.5\" points=\"";
  std::string markers;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    const double px =
        panel.x0 + (xs[k] - x_min) / (x_max - x_min) * panel.width;
    const double py =
        panel.y0 + panel.height - (ys[k] - y_min) / (y_max - y_min) * panel.height;
    svg += format_fixed(px, 2) + "," + format_fixed(py, 2) + " ";
    markers += "  <circle cx=\"" + format_fixed(px, 2) + "\" cy=\"" +
               format_fixed(py, 2) + "\" r=\"2.2\" fill=\"" + color + "\"/>\n";
  }
  svg += "\"/>\n" + markers;
  return svg;
}

std::string svg_axes(const Panel& panel, double x_min, double x_max, double y_min,
                     double y_max, const std::string& title,
                     const std::string& y_label) {
  std::string svg;
  svg += "  <rect x=\"" + format_fixed(panel.x0, 2) + "\" y=\"" +
         format_fixed(panel.y0, 2) + "\" width=\"" + format_fixed(panel.width, 2) +
         "\" height=\"" + format_fixed(panel.height, 2) +
         "\" fill=\"none\" stroke=\"#333333\"/>\n";
  svg += "  <text x=\"" + format_fixed(panel.x0 + panel.width / 2, 2) + "\" y=\"" +
         format_fixed(panel.y0 - 8, 2) +
         "\" text-anchor=\"middle\" font-size=\"13\" font-family=\"sans-serif\">" +
         title + "</text>\n";
  const int ticks = 5;
  for (int t = 0; t <= ticks; ++t) {
    const double fx = x_min + (x_max - x_min) * t / ticks;
    const double px = panel.x0 + panel.width * t / ticks;
    svg += "  <line x1=\"" + format_fixed(px, 2) + "\" y1=\"" +
           format_fixed(panel.y0 + panel.height, 2) + "\" x2=\"" +
           format_fixed(px, 2) + "\" y2=\"" +
           format_fixed(panel.y0 + panel.height + 4, 2) + "\" stroke=\"#333333\"/>\n";
    svg += "  <text x=\"" + format_fixed(px, 2) + "\" y=\"" +
           format_fixed(panel.y0 + panel.height + 16, 2) +
           "\" text-anchor=\"middle\" font-size=\"10\" font-family=\"sans-serif\">" +
           format_fixed(fx, 2) + "</text>\n";
    const double fy = y_min + (y_max - y_min) * t / ticks;
    const double py = panel.y0 + panel.height - panel.height * t / ticks;
    svg += "  <line x1=\"" + format_fixed(panel.x0 - 4, 2) + "\" y1=\"" +
           format_fixed(py, 2) + "\" x2=\"" + format_fixed(panel.x0, 2) +
           "\" y2=\"" + format_fixed(py, 2) + "\" stroke=\"#333333\"/>\n";
    svg += "  <text x=\"" + format_fixed(panel.x0 - 7, 2) + "\" y=\"" +
           format_fixed(py + 3, 2) +
           "\" text-anchor=\"end\" font-size=\"10\" font-family=\"sans-serif\">" +
           format_fixed(fy, 2) + "</text>\n";
  }
  svg += "  <text x=\"" + format_fixed(panel.x0 + panel.width / 2, 2) + "\" y=\"" +
         format_fixed(panel.y0 + panel.height + 32, 2) +
         "\" text-anchor=\"middle\" font-size=\"11\" font-family=\"sans-serif\">budget fraction</text>\n";
  svg += "  <text x=\"" + format_fixed(panel.x0 - 38, 2) + "\" y=\"" +
         format_fixed(panel.y0 + panel.height / 2, 2) +
         "\" text-anchor=\"middle\" font-size=\"11\" font-family=\"sans-serif\" transform=\"rotate(-90 " +
         format_fixed(panel.x0 - 38, 2) + " " +
         format_fixed(panel.y0 + panel.height / 2, 2) + ")\">" + y_label +
         "</text>\n";
  return svg;
}

}  // namespace

void emit_plot(const ResultsTable& table, const std::string& path, bool use_fisher) {
  if (table.rows.empty()) throw Error("results table is empty");

  // curves keyed by (dataset, sampler), insertion ordered
  std::vector<std::string> keys;
  std::map<std::string, std::vector<std::pair<double, const ResultsTable::Row*>>> curves;
  bool multi_dataset = false;
  for (const ResultsTable::Row& row : table.rows) {
    if (row.dataset != table.rows.front().dataset) multi_dataset = true;
  }
  for (const ResultsTable::Row& row : table.rows) {
    const std::string key =
        multi_dataset ? row.dataset + "/" + row.sampler : row.sampler;
    if (!curves.contains(key)) keys.push_back(key);
    curves[key].push_back({row.budget_fraction, &row});
  }
  for (auto& [key, points] : curves) {
    std::sort(points.begin(), points.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
  }

  double x_min = 0.0, x_max = 0.0, p_min = 0.0, p_max = 1.0, s_min = 0.0, s_max = 1.0;
  bool first = true;
  for (const ResultsTable::Row& row : table.rows) {
    const double p = use_fisher ? fisher_z(std::clamp(row.plcc_mean, -1.0, 1.0))
                                : row.plcc_mean;
    if (first) {
      x_min = x_max = row.budget_fraction;
      p_min = p_max = p;
      s_min = s_max = row.srocc_mean;
      first = false;
    } else {
      x_min = std::min(x_min, row.budget_fraction);
      x_max = std::max(x_max, row.budget_fraction);
      p_min = std::min(p_min, p);
      p_max = std::max(p_max, p);
      s_min = std::min(s_min, row.srocc_mean);
      s_max = std::max(s_max, row.srocc_mean);
    }
  }
  auto pad = [](double& lo, double& hi) {
    const double margin = std::max(0.05 * (hi - lo), 1e-3);
    lo -= margin;
    hi += margin;
  };
  if (x_max == x_min) x_max = x_min + 1e-3;
  pad(p_min, p_max);
  pad(s_min, s_max);

  const Panel left{60, 40, 320, 260};
  const Panel right{470, 40, 320, 260};
  const double legend_height = 16.0 * keys.size() + 10;
  const double height = std::max(360.0, 60 + legend_height);

  std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"940\" height=\"" +
                    format_fixed(height, 0) + "\" viewBox=\"0 0 940 " +
                    format_fixed(height, 0) + "\">\n";
  svg += "  <rect width=\"940\" height=\"" + format_fixed(height, 0) +
         "\" fill=\"white\"/>\n";
  svg += svg_axes(left, x_min, x_max, p_min, p_max,
                  use_fisher ? "mean PLCC (Fisher z)" : "mean PLCC",
                  use_fisher ? "arctanh(PLCC)" : "PLCC");
  svg += svg_axes(right, x_min, x_max, s_min, s_max, "mean SROCC", "SROCC");

  std::size_t color_index = 0;
  for (const std::string& key : keys) {
    const char* color = curve_color(color_index);
    std::vector<double> xs, plcc_ys, srocc_ys;
    for (const auto& [fraction, row] : curves[key]) {
      xs.push_back(fraction);
      plcc_ys.push_back(use_fisher ? fisher_z(std::clamp(row->plcc_mean, -1.0, 1.0))
                                   : row->plcc_mean);
      srocc_ys.push_back(row->srocc_mean);
    }
    svg += svg_polyline(left, xs, plcc_ys, x_min, x_max, p_min, p_max, color);
    svg += svg_polyline(right, xs, srocc_ys, x_min, x_max, s_min, s_max, color);

    const double ly = 50.0 + 16.0 * color_index;
    svg += "  <rect x=\"810\" y=\"" + format_fixed(ly - 8, 2) +
           "\" width=\"12\" height=\"3\" fill=\"" + color + "\"/>\n";
    svg += "  <text x=\"828\" y=\"" + format_fixed(ly - 3, 2) +
           "\" font-size=\"11\" font-family=\"sans-serif\">" + key + "</text>\n";
    ++color_index;
  }
  svg += "</svg>\n";

  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out << svg;
}

}  // namespace pcbench
