#ifndef LANESIM_HARNESS_HPP
#define LANESIM_HARNESS_HPP

#include <filesystem>

#include "lanesim/metrics.hpp"

namespace lanesim {

/// Fig. 5 bar order; also the summary.csv row order.
inline const std::vector<PolicyId> kDefaultPolicyOrder{
    PolicyId::Lc2017, PolicyId::Mobil,      PolicyId::IdmLc,
    PolicyId::Continuous, PolicyId::Mlca,   PolicyId::None};

struct ExperimentPlan {
  std::vector<PolicyId> policies = kDefaultPolicyOrder;
  std::vector<int> av_counts{1, 3};
  int iterations = 100;
  uint64_t base_seed = 42;
  std::filesystem::path out_dir = "out";
  bool validation = false;
  bool strict = false;  // partial figure data becomes an error
  int jobs = 1;
  SimConfig config;
  std::filesystem::path log_dir;  // optional: per-iteration event logs
};

struct SummaryRow {
  PolicyId policy = PolicyId::Mlca;
  int avs = 1;
  TrialAverages avg;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitValidationFailure = 3;

/// Runs the experiment matrix, writes trials_<policy>_<avs>.csv, summary.csv,
/// the fig*.dat tables, and prints the paper-target deviation report.
/// Returns a kExit* code.
int run_experiment(const ExperimentPlan& plan);

/// As run_experiment but also hands back the summary rows (for tests).
int run_experiment(const ExperimentPlan& plan, std::vector<SummaryRow>* rows);

std::string summary_csv(const std::vector<SummaryRow>& rows);
std::vector<SummaryRow> parse_summary_csv(const std::filesystem::path& path);

/// Writes fig2.dat .. fig5.dat from summary rows. Returns the number of
/// figure files fully emitted; missing rows produce a warning on stderr.
int emit_figure_data(const std::vector<SummaryRow>& rows,
                     const std::filesystem::path& out_dir);

/// Human-readable comparison against the paper's charted values.
std::string deviation_report(const std::vector<SummaryRow>& rows);

}  // namespace lanesim

#endif  // LANESIM_HARNESS_HPP
