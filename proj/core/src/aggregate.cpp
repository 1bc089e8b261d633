// Copyright 2026 The Tooka Authors
//
// Licensed under the Apache License, Version 2.0.
// See the LICENSE file for details.
// SPDX-License-Identifier: Apache-2.0

#include "tooka/aggregate.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "tooka/common.hpp"
#include "tooka/util.hpp"

namespace tooka {

namespace {

using ordered_json = nlohmann::ordered_json;

MetricBundle bundle_from_json(const ordered_json& j) {
  if (!j.is_object() || j.empty()) {
    throw Error("metrics must be a non-empty JSON object");
  }
  MetricBundle bundle;
  for (const auto& [name, value] : j.items()) {
    double v = value.get<double>();
    if (!(v >= 0.0 && v <= 100.0)) {
      throw Error("metric " + name + " must lie in [0, 100]");
    }
    bundle.emplace_back(name, v);
  }
  return bundle;
}

std::vector<std::string> sorted_task_names(const std::vector<TaskScore>& tasks) {
  std::vector<std::string> names;
  names.reserve(tasks.size());
  for (const TaskScore& t : tasks) {
    names.push_back(t.task);
  }
  std::sort(names.begin(), names.end());
  return names;
}

}  // namespace

void SweepConfig::validate() const {
  if (learning_rates.empty()) {
    throw Error("sweep must declare at least one learning rate");
  }
  for (double lr : learning_rates) {
    if (!(lr > 0)) {
      throw Error("learning rates must be positive");
    }
  }
  if (max_epoch < 1) {
    throw Error("sweep must allow at least one epoch");
  }
}

bool SweepConfig::allows_learning_rate(double lr) const {
  for (double s : learning_rates) {
    if (std::abs(lr - s) <= 1e-12 * s) {
      return true;
    }
  }
  return false;
}

double bundle_mean(const MetricBundle& bundle) {
  if (bundle.empty()) {
    throw Error("metric bundle is empty");
  }
  double sum = 0;
  for (const auto& [name, value] : bundle) {
    sum += value;
  }
  return sum / static_cast<double>(bundle.size());
}

const RunRecord& select_best_run(const std::vector<RunRecord>& runs) {
  if (runs.empty()) {
    throw Error("select_best_run requires at least one run");
  }
  const RunRecord* best = &runs[0];
  double best_mean = bundle_mean(best->metrics);
  for (const RunRecord& run : runs) {
    if (run.model != runs[0].model || run.task != runs[0].task) {
      throw Error("select_best_run saw mixed model/task groups: " + runs[0].model + "/" +
                  runs[0].task + " vs " + run.model + "/" + run.task);
    }
    double mean = bundle_mean(run.metrics);
    if (mean > best_mean ||
        (mean == best_mean && (run.epoch < best->epoch ||
                               (run.epoch == best->epoch &&
                                run.learning_rate < best->learning_rate)))) {
      best = &run;
      best_mean = mean;
    }
  }
  return *best;
}

TaskScore make_task_score(std::string task, MetricBundle metrics) {
  TaskScore score;
  score.task = std::move(task);
  score.task_mean = bundle_mean(metrics);
  score.metrics = std::move(metrics);
  return score;
}

ModelRow make_model_row(std::string model, std::vector<TaskScore> tasks) {
  if (tasks.empty()) {
    throw Error("model row needs at least one task");
  }
  ModelRow row;
  row.model = std::move(model);
  double sum = 0;
  for (const TaskScore& t : tasks) {
    sum += t.task_mean;
  }
  row.average = sum / static_cast<double>(tasks.size());
  row.tasks = std::move(tasks);
  return row;
}

double headline_gap(const std::vector<TaskScore>& a, const std::vector<TaskScore>& b) {
  if (a.empty() || sorted_task_names(a) != sorted_task_names(b)) {
    throw Error("headline_gap requires both models to cover the same task set");
  }
  double sum_a = 0, sum_b = 0;
  for (const TaskScore& t : a) {
    sum_a += t.task_mean;
  }
  for (const TaskScore& t : b) {
    sum_b += t.task_mean;
  }
  return (sum_a - sum_b) / static_cast<double>(a.size());
}

std::string render_table(const std::vector<ModelRow>& rows, TableFormat format) {
  if (rows.empty()) {
    throw Error("render_table requires at least one row");
  }
  std::vector<std::string> header{"Model"};
  for (const TaskScore& t : rows[0].tasks) {
    header.push_back(t.task);
  }
  header.push_back("Avg.");
  for (const ModelRow& row : rows) {
    if (row.tasks.size() != rows[0].tasks.size()) {
      throw Error("ragged rows: model " + row.model + " lists a different task count");
    }
    for (size_t i = 0; i < row.tasks.size(); ++i) {
      if (row.tasks[i].task != rows[0].tasks[i].task) {
        throw Error("ragged rows: model " + row.model + " orders tasks differently");
      }
    }
  }

  auto cells_of = [](const ModelRow& row) {
    std::vector<std::string> cells{row.model};
    for (const TaskScore& t : row.tasks) {
      std::string cell;
      for (size_t i = 0; i < t.metrics.size(); ++i) {
        if (i > 0) cell += '/';
        cell += format_1dp(t.metrics[i].second);
      }
      cells.push_back(std::move(cell));
    }
    cells.push_back(format_1dp(row.average));
    return cells;
  };

  std::ostringstream out;
  if (format == TableFormat::kTsv) {
    for (size_t i = 0; i < header.size(); ++i) {
      out << (i ? "\t" : "") << header[i];
    }
    out << '\n';
    for (const ModelRow& row : rows) {
      auto cells = cells_of(row);
      for (size_t i = 0; i < cells.size(); ++i) {
        out << (i ? "\t" : "") << cells[i];
      }
      out << '\n';
    }
  } else {
    out << '|';
    for (const std::string& h : header) {
      out << ' ' << h << " |";
    }
    out << "\n|";
    for (size_t i = 0; i < header.size(); ++i) {
      out << " --- |";
    }
    out << '\n';
    for (const ModelRow& row : rows) {
      out << '|';
      for (const std::string& cell : cells_of(row)) {
        out << ' ' << cell << " |";
      }
      out << '\n';
    }
  }
  return out.str();
}

std::vector<RunRecord> parse_run_records(std::istream& in, const SweepConfig& sweep) {
  sweep.validate();
  std::vector<RunRecord> runs;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) {
      continue;
    }
    ordered_json j;
    try {
      j = ordered_json::parse(line);
      RunRecord run;
      run.model = j.at("model").get<std::string>();
      run.task = j.at("task").get<std::string>();
      run.learning_rate = j.at("lr").get<double>();
      run.epoch = j.at("epoch").get<int>();
      run.metrics = bundle_from_json(j.at("metrics"));
      if (!sweep.allows_learning_rate(run.learning_rate)) {
        throw Error("learning rate " + std::to_string(run.learning_rate) +
                    " is not in the sweep");
      }
      if (run.epoch < 1 || run.epoch > sweep.max_epoch) {
        throw Error("epoch " + std::to_string(run.epoch) + " is outside 1.." +
                    std::to_string(sweep.max_epoch));
      }
      runs.push_back(std::move(run));
    } catch (const nlohmann::json::exception& e) {
      throw Error("runs line " + std::to_string(line_no) + ": " + e.what());
    } catch (const Error& e) {
      throw Error("runs line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return runs;
}

std::vector<ModelRow> aggregate_runs(const std::vector<RunRecord>& runs) {
  if (runs.empty()) {
    throw Error("no runs to aggregate");
  }
  std::vector<std::string> models;
  std::vector<std::string> tasks;
  std::map<std::pair<std::string, std::string>, std::vector<RunRecord>> groups;
  for (const RunRecord& run : runs) {
    if (std::find(models.begin(), models.end(), run.model) == models.end()) {
      models.push_back(run.model);
    }
    if (std::find(tasks.begin(), tasks.end(), run.task) == tasks.end()) {
      tasks.push_back(run.task);
    }
    groups[{run.model, run.task}].push_back(run);
  }
  std::vector<ModelRow> rows;
  rows.reserve(models.size());
  for (const std::string& model : models) {
    std::vector<TaskScore> scores;
    scores.reserve(tasks.size());
    for (const std::string& task : tasks) {
      auto it = groups.find({model, task});
      if (it == groups.end()) {
        throw Error("model " + model + " has no runs for task " + task);
      }
      const RunRecord& best = select_best_run(it->second);
      scores.push_back(make_task_score(task, best.metrics));
    }
    rows.push_back(make_model_row(model, std::move(scores)));
  }
  return rows;
}

TableFixture parse_table_fixture(const std::string& json_text) {
  ordered_json j;
  try {
    j = ordered_json::parse(json_text);
    TableFixture fixture;
    fixture.model = j.at("model").get<std::string>();
    fixture.table = j.at("table").get<int>();
    fixture.published_average = j.at("published_average").get<double>();
    std::vector<TaskScore> scores;
    for (const auto& entry : j.at("tasks")) {
      scores.push_back(make_task_score(entry.at("task").get<std::string>(),
                                       bundle_from_json(entry.at("metrics"))));
    }
    fixture.row = make_model_row(fixture.model, std::move(scores));
    return fixture;
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed table fixture: ") + e.what());
  }
}

TableFixture load_table_fixture(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error("cannot open fixture " + path);
  }
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) {
    throw Error("failed to read fixture " + path);
  }
  try {
    return parse_table_fixture(text);
  } catch (const Error& e) {
    throw Error(path + ": " + e.what());
  }
}

}  // namespace tooka
