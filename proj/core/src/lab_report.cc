//
// Copyright 2026 The augwork Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "augwork/csv.h"
#include "augwork/error.h"
#include "augwork/lab.h"
#include "augwork/text.h"

namespace augwork::lab {
namespace {

std::string exact(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_double(std::string_view s, const char* what) {
  const std::string str(text::trim(s));
  try {
    std::size_t used = 0;
    const double v = std::stod(str, &used);
    if (used != str.size()) throw std::invalid_argument(str);
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorCode::kMalformedRecord, std::string("bad ") + what + " value: " + str);
  }
}

std::vector<std::pair<std::size_t, std::size_t>> report_pairs(const ExperimentReport& report) {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  if (report.config.contains("pairs")) {
    for (const auto& p : report.config.at("pairs")) {
      pairs.emplace_back(p.at(0).get<std::size_t>(), p.at(1).get<std::size_t>());
    }
  }
  for (const auto* c : report.all_cells()) {
    std::pair<std::size_t, std::size_t> p{c->key.base, c->key.add};
    if (std::find(pairs.begin(), pairs.end(), p) == pairs.end()) pairs.push_back(p);
  }
  if (pairs.empty()) pairs = {{5, 5}, {5, 10}, {10, 10}, {10, 20}};
  return pairs;
}

nlohmann::json cell_json(const CellResult& c) {
  nlohmann::json j;
  j["id"] = c.key.id();
  j["dataset"] = c.key.dataset;
  j["kind"] = to_string(c.key.kind);
  j["tuning"] = c.key.tuning;
  j["method"] = c.key.method;
  j["base"] = c.key.base;
  j["add"] = c.key.add;
  j["per_iteration"] = nlohmann::json::array();
  for (const auto& s : c.per_iteration) {
    j["per_iteration"].push_back({{"micro_f1", s.micro_f1},
                                  {"macro_f1", s.macro_f1},
                                  {"per_class_f1", s.per_class_f1},
                                  {"train_size", s.train_size},
                                  {"shortfall", s.shortfall}});
  }
  j["mean_micro"] = c.mean_micro;
  j["mean_macro"] = c.mean_macro;
  if (c.failure) j["failure"] = *c.failure;
  return j;
}

CellResult cell_from_json(const nlohmann::json& j) {
  CellResult c;
  c.key.dataset = j.at("dataset").get<std::string>();
  c.key.kind = parse_row_kind(j.at("kind").get<std::string>());
  c.key.tuning = j.at("tuning").get<std::string>();
  c.key.method = j.at("method").get<std::string>();
  c.key.base = j.at("base").get<std::size_t>();
  c.key.add = j.at("add").get<std::size_t>();
  for (const auto& s : j.at("per_iteration")) {
    IterationScore it;
    it.micro_f1 = s.at("micro_f1").get<double>();
    it.macro_f1 = s.at("macro_f1").get<double>();
    it.per_class_f1 = s.value("per_class_f1", std::map<std::string, double>{});
    it.train_size = s.value("train_size", std::size_t{0});
    it.shortfall = s.value("shortfall", std::size_t{0});
    c.per_iteration.push_back(std::move(it));
  }
  c.mean_micro = j.at("mean_micro").get<double>();
  c.mean_macro = j.at("mean_macro").get<double>();
  if (j.contains("failure")) c.failure = j.at("failure").get<std::string>();
  return c;
}

std::string markdown(const ExperimentReport& report) {
  const auto pairs = report_pairs(report);
  std::ostringstream out;
  out << "| Dataset | DA type | Tuning type | DA method |";
  for (const char* metric : {"Micro-F1", "Macro-F1"}) {
    for (const auto& [b, a] : pairs) out << ' ' << metric << ' ' << b << "base +" << a << "add |";
  }
  out << "\n|---|---|---|---|";
  for (std::size_t i = 0; i < 2 * pairs.size(); ++i) out << "---|";
  out << '\n';

  std::set<std::pair<std::string, std::string>> starred;  // (row id, metric)
  for (const auto& t : report.ttests) {
    if (t.result.significant) starred.emplace(t.best_row, t.metric);
  }

  std::vector<std::string> datasets;
  std::vector<std::string> row_order;
  std::map<std::string, std::map<std::pair<std::size_t, std::size_t>, const CellResult*>> rows;
  std::map<std::string, const CellKey*> row_keys;
  auto add_group = [&](const std::vector<CellResult>& group, std::initializer_list<RowKind> kinds) {
    for (RowKind kind : kinds) {
      for (const auto& c : group) {
        if (c.key.kind != kind) continue;
        if (std::find(datasets.begin(), datasets.end(), c.key.dataset) == datasets.end()) {
          datasets.push_back(c.key.dataset);
        }
        const auto rid = c.key.row_id();
        if (!rows.count(rid)) {
          row_order.push_back(rid);
          row_keys[rid] = &c.key;
        }
        rows[rid][{c.key.base, c.key.add}] = &c;
      }
    }
  };
  add_group(report.baselines, {RowKind::kNone});
  add_group(report.cells, {RowKind::kGenerated});
  add_group(report.baselines, {RowKind::kWordReplacement, RowKind::kSentenceReplacement});
  add_group(report.upperbound, {RowKind::kUpperbound});

  for (const auto& ds : datasets) {
    for (const auto& rid : row_order) {
      const CellKey& k = *row_keys[rid];
      if (k.dataset != ds) continue;
      if (k.kind == RowKind::kUpperbound) {
        out << "| " << ds << " | Original data (upperbound) | - | - |";
      } else {
        out << "| " << ds << " | " << to_string(k.kind) << " | " << k.tuning << " | " << k.method
            << " |";
      }
      for (const std::string metric : {"micro", "macro"}) {
        const bool star = starred.count({rid, metric}) > 0;
        for (const auto& p : pairs) {
          auto it = rows[rid].find(p);
          if (it == rows[rid].end() || !it->second->ok()) {
            out << " - |";
            continue;
          }
          const double v = metric == "micro" ? it->second->mean_micro : it->second->mean_macro;
          out << ' ' << format_score(v) << (star ? "*" : "") << " |";
        }
      }
      out << '\n';
    }
  }
  if (!report.ttests.empty()) {
    out << "\n| Dataset | Metric | Best row | t | df | p | alpha | Significant |\n";
    out << "|---|---|---|---|---|---|---|---|\n";
    const double alpha = report.config.value("alpha", 0.05);
    for (const auto& t : report.ttests) {
      char buf[160];
      std::snprintf(buf, sizeof buf, " %.4f | %.0f | %.4g | %.2f |", t.result.t_statistic,
                    t.result.degrees_of_freedom, t.result.p_value, alpha);
      out << "| " << t.dataset << " | " << t.metric << " | " << t.best_row << " |" << buf << ' '
          << (t.result.significant ? "yes" : "no") << " |\n";
    }
  }
  return out.str();
}

const std::vector<std::string> kCsvHeader = {
    "dataset", "kind",       "tuning",       "method",       "base",   "add",
    "iterations", "mean_micro", "mean_macro", "micro_scores", "macro_scores", "failure"};

std::string join_scores(const std::vector<double>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out.push_back(';');
    out += exact(xs[i]);
  }
  return out;
}

std::string csv_text(const ExperimentReport& report) {
  std::string out = csv::format_row(kCsvHeader) + "\n";
  for (const auto* c : report.all_cells()) {
    out += csv::format_row({c->key.dataset, std::string(to_string(c->key.kind)), c->key.tuning,
                            c->key.method, std::to_string(c->key.base), std::to_string(c->key.add),
                            std::to_string(c->per_iteration.size()), exact(c->mean_micro),
                            exact(c->mean_macro), join_scores(c->micro_scores()),
                            join_scores(c->macro_scores()), c->failure.value_or("")});
    out += "\n";
  }
  return out;
}

}  // namespace

std::string format_score(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  std::string s = buf;
  if (s.rfind("0.", 0) == 0) s.erase(0, 1);
  return s;
}

ReportFormat parse_report_format(std::string_view s) {
  if (s == "markdown" || s == "md") return ReportFormat::kMarkdown;
  if (s == "csv") return ReportFormat::kCsv;
  if (s == "json") return ReportFormat::kJson;
  throw Error(ErrorCode::kUsage, "unknown report format: " + std::string(s));
}

nlohmann::json report_to_json(const ExperimentReport& report) {
  nlohmann::json j;
  j["report_version"] = 1;
  j["config"] = report.config;
  j["provenance"] = report.provenance;
  for (const char* k : {"cells", "baselines", "upperbound", "ttests"}) j[k] = nlohmann::json::array();
  for (const auto& c : report.cells) j["cells"].push_back(cell_json(c));
  for (const auto& c : report.baselines) j["baselines"].push_back(cell_json(c));
  for (const auto& c : report.upperbound) j["upperbound"].push_back(cell_json(c));
  for (const auto& t : report.ttests) {
    auto r = t.result.to_json();
    r["dataset"] = t.dataset;
    r["metric"] = t.metric;
    r["best_row"] = t.best_row;
    r["none_row"] = t.none_row;
    r["n_best"] = t.n_best;
    r["n_none"] = t.n_none;
    j["ttests"].push_back(std::move(r));
  }
  return j;
}

ExperimentReport report_from_json(const nlohmann::json& j) {
  try {
    if (j.value("report_version", 0) != 1) {
      throw Error(ErrorCode::kMalformedRecord, "unsupported report_version");
    }
    ExperimentReport r;
    r.config = j.value("config", nlohmann::json::object());
    r.provenance = j.value("provenance", nlohmann::json::object());
    for (const auto& c : j.at("cells")) r.cells.push_back(cell_from_json(c));
    for (const auto& c : j.at("baselines")) r.baselines.push_back(cell_from_json(c));
    for (const auto& c : j.at("upperbound")) r.upperbound.push_back(cell_from_json(c));
    for (const auto& t : j.at("ttests")) {
      TTestRecord rec;
      rec.dataset = t.at("dataset").get<std::string>();
      rec.metric = t.at("metric").get<std::string>();
      rec.best_row = t.at("best_row").get<std::string>();
      rec.none_row = t.value("none_row", std::string());
      rec.n_best = t.value("n_best", std::size_t{0});
      rec.n_none = t.value("n_none", std::size_t{0});
      rec.result.t_statistic = t.at("t_statistic").get<double>();
      rec.result.degrees_of_freedom = t.at("degrees_of_freedom").get<double>();
      rec.result.p_value = t.at("p_value").get<double>();
      rec.result.significant = t.at("significant").get<bool>();
      r.ttests.push_back(std::move(rec));
    }
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kMalformedRecord, std::string("report json: ") + e.what());
  }
}

std::string emit_report(const ExperimentReport& report, ReportFormat format) {
  switch (format) {
    case ReportFormat::kMarkdown: return markdown(report);
    case ReportFormat::kCsv: return csv_text(report);
    case ReportFormat::kJson: return report_to_json(report).dump(2) + "\n";
  }
  throw Error(ErrorCode::kUsage, "unknown report format");
}

std::vector<CellResult> cells_from_csv(std::string_view text) {
  std::istringstream in{std::string(text)};
  csv::Reader reader(in);
  auto header = reader.next();
  if (!header || header->fields != kCsvHeader) {
    throw Error(ErrorCode::kMalformedRecord, "report csv has an unexpected header");
  }
  std::vector<CellResult> out;
  while (auto row = reader.next()) {
    const auto& f = row->fields;
    if (f.size() != kCsvHeader.size()) {
      throw Error(ErrorCode::kMalformedRecord,
                  "line " + std::to_string(row->line) + ": expected 12 fields");
    }
    CellResult c;
    c.key.dataset = f[0];
    c.key.kind = parse_row_kind(f[1]);
    c.key.tuning = f[2];
    c.key.method = f[3];
    c.key.base = static_cast<std::size_t>(parse_double(f[4], "base"));
    c.key.add = static_cast<std::size_t>(parse_double(f[5], "add"));
    c.mean_micro = parse_double(f[7], "mean_micro");
    c.mean_macro = parse_double(f[8], "mean_macro");
    auto split = [](const std::string& s) {
      std::vector<double> xs;
      std::string_view rest = s;
      while (!rest.empty()) {
        const auto semi = rest.find(';');
        xs.push_back(parse_double(rest.substr(0, semi), "score"));
        if (semi == std::string_view::npos) break;
        rest.remove_prefix(semi + 1);
      }
      return xs;
    };
    const auto micro = split(f[9]);
    const auto macro = split(f[10]);
    if (micro.size() != macro.size()) {
      throw Error(ErrorCode::kMalformedRecord, "line " + std::to_string(row->line) + ": score count mismatch");
    }
    for (std::size_t i = 0; i < micro.size(); ++i) {
      IterationScore s;
      s.micro_f1 = micro[i];
      s.macro_f1 = macro[i];
      c.per_iteration.push_back(s);
    }
    if (!f[11].empty()) c.failure = f[11];
    out.push_back(std::move(c));
  }
  return out;
}

std::vector<double> read_sample_column(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open sample file: " + path);
  csv::Reader reader(in);
  std::vector<double> out;
  bool first = true;
  while (auto row = reader.next()) {
    if (row->fields.empty() || text::trim(row->fields[0]).empty()) continue;
    try {
      out.push_back(parse_double(row->fields[0], "sample"));
    } catch (const Error&) {
      if (!first) throw;
    }
    first = false;
  }
  return out;
}

nlohmann::json strip_volatile(nlohmann::json j) {
  if (j.contains("provenance")) {
    for (const char* k : {"started_at", "finished_at", "duration_ms"}) j["provenance"].erase(k);
  }
  return j;
}

}  // namespace augwork::lab
