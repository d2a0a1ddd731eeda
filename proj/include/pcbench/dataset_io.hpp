#pragma once

#include <string>
#include <vector>

#include "pcbench/harness.hpp"
#include "pcbench/oracle.hpp"

namespace pcbench {

// Empirical dataset file: JSON with a name, optional subject count, and one
// complete-design count matrix per reference. See README for the schema.
struct LoadedDataset {
  std::string name;
  int subjects = 0;  // 0 when the file does not state it
  struct ReferenceData {
    std::string id;
    PCMatrix pcm;
  };
  std::vector<ReferenceData> references;
};

// Parses and validates an empirical dataset. Throws DatasetError naming the
// offending reference and cell on any schema or completeness violation.
LoadedDataset load_dataset(const std::string& path);

// Synthetic oracle spec file: per-reference (mu, sigma) vectors plus flip
// probability and subject count, as written by the `synth` subcommand.
struct SyntheticSpec {
  std::string name;
  struct ReferenceSpec {
    std::string id;
    SyntheticOracle oracle;
  };
  std::vector<ReferenceSpec> references;
};

SyntheticSpec load_synthetic_spec(const std::string& path);
void save_synthetic_spec(const SyntheticSpec& spec, const std::string& path);

// True when the file at `path` carries pcm matrices (empirical layout)
// rather than mu/sigma vectors.
bool dataset_is_empirical(const std::string& path);

// Aggregate results keyed by dataset for persistence and plotting.
struct ResultsTable {
  struct Row {
    std::string dataset;
    std::string sampler;
    double budget_fraction = 0.0;
    double plcc_mean = 0.0;
    double plcc_std = 0.0;
    double srocc_mean = 0.0;
    double srocc_std = 0.0;
    int repetitions = 0;
    int references = 0;
  };
  std::vector<Row> rows;
};

ResultsTable to_results_table(const std::string& dataset,
                              const std::vector<AggregateRow>& aggregate);

// CSV with the fixed header
//   dataset,sampler,budget_fraction,plcc_mean,plcc_std,srocc_mean,srocc_std,repetitions,references
// fractions formatted with 4 decimals and statistics with 6.
void write_results(const ResultsTable& table, const std::string& path);
ResultsTable read_results(const std::string& path);

// Two-panel SVG (PLCC left, SROCC right), one curve per sampler over the
// budget fractions. With use_fisher the PLCC panel plots arctanh(PLCC).
void emit_plot(const ResultsTable& table, const std::string& path, bool use_fisher);

}  // namespace pcbench
