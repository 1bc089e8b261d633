// Copyright 2026 The Tooka Authors
//
// Licensed under the Apache License, Version 2.0.
// See the LICENSE file for details.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <istream>
#include <string>
#include <vector>

#include "tooka/metrics.hpp"

namespace tooka {

struct SweepConfig {
  std::vector<double> learning_rates = {3e-5, 3e-6, 7e-5, 7e-6};
  int max_epoch = 8;

  void validate() const;
  bool allows_learning_rate(double lr) const;
};

struct RunRecord {
  std::string model;
  std::string task;
  double learning_rate = 0;
  int epoch = 0;
  MetricBundle metrics;
};

// Arithmetic mean of the bundle's values; errors on an empty bundle.
double bundle_mean(const MetricBundle& bundle);

// The run maximizing bundle_mean; exact ties go to the earlier epoch, then
// the smaller learning rate. All runs must share one model and task.
const RunRecord& select_best_run(const std::vector<RunRecord>& runs);

struct TaskScore {
  std::string task;
  MetricBundle metrics;
  double task_mean = 0;
};

TaskScore make_task_score(std::string task, MetricBundle metrics);

struct ModelRow {
  std::string model;
  std::vector<TaskScore> tasks;
  double average = 0;  // mean of task means, full precision
};

ModelRow make_model_row(std::string model, std::vector<TaskScore> tasks);

// Mean task_mean of a minus mean task_mean of b; both sides must cover the
// same task set (order-insensitive).
double headline_gap(const std::vector<TaskScore>& a, const std::vector<TaskScore>& b);

enum class TableFormat { kTsv, kMarkdown };

// One row per model, one column per task (metric values joined by '/'),
// trailing Avg. column; every value rendered half-up to one decimal. Rows
// must share one task ordering.
std::string render_table(const std::vector<ModelRow>& rows, TableFormat format);

// JSONL, one run per line: {"model","task","lr","epoch","metrics":{...}}.
// Metric order inside a bundle follows the JSON object order. Validates
// learning rates and epochs against the sweep.
std::vector<RunRecord> parse_run_records(std::istream& in, const SweepConfig& sweep);

// Best run per (model, task), models and tasks ordered by first appearance;
// errors when some model lacks a task seen elsewhere.
std::vector<ModelRow> aggregate_runs(const std::vector<RunRecord>& runs);

// Published-table fixture: per-task metric bundles plus the printed average.
struct TableFixture {
  std::string model;
  int table = 0;
  double published_average = 0;
  ModelRow row;  // average recomputed from the bundles, not read from the file
};

TableFixture parse_table_fixture(const std::string& json_text);
TableFixture load_table_fixture(const std::string& path);

}  // namespace tooka
