#include "lanesim/harness.hpp"

#include <mutex>
#include <atomic>
#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

namespace lanesim {

namespace {

struct Cell {
  PolicyId policy;
  int avs;
  SimConfig config;
};

std::string trials_filename(PolicyId policy, int avs) {
  return "trials_" + to_string(policy) + "_" + std::to_string(avs) + ".csv";
}

void write_file(const std::filesystem::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << body;
}

std::string trials_csv(const std::vector<TrialSummary>& trials) {
  std::string s = "seed,c5,c10,c15,c20,collisions\n";
  char buf[128];
  for (const TrialSummary& t : trials) {
    std::snprintf(buf, sizeof(buf), "%llu,%d,%d,%d,%d,%d\n",
                  static_cast<unsigned long long>(t.seed),
                  t.checkpoints.counts[0], t.checkpoints.counts[1],
                  t.checkpoints.counts[2], t.checkpoints.counts[3],
                  t.collision_count);
    s += buf;
  }
  return s;
}

}  // namespace

std::string summary_csv(const std::vector<SummaryRow>& rows) {
  std::string s =
      "policy,avs,mean_c5,mean_c10,mean_c15,mean_c20,mean_collisions,"
      "pres_c5,pres_c10,pres_c15,pres_c20,pres_collisions\n";
  char buf[256];
  for (const SummaryRow& r : rows) {
    std::snprintf(buf, sizeof(buf),
                  "%s,%d,%.4f,%.4f,%.4f,%.4f,%.4f,%d,%d,%d,%d,%d\n",
                  to_string(r.policy).c_str(), r.avs,
                  r.avg.mean_checkpoints[0], r.avg.mean_checkpoints[1],
                  r.avg.mean_checkpoints[2], r.avg.mean_checkpoints[3],
                  r.avg.mean_collisions, r.avg.presentation[0],
                  r.avg.presentation[1], r.avg.presentation[2],
                  r.avg.presentation[3], r.avg.presentation_collisions);
    s += buf;
  }
  return s;
}

std::vector<SummaryRow> parse_summary_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string());
  std::string line;
  std::getline(in, line);  // header
  std::vector<SummaryRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (fields.size() != 12)
      throw ConfigError("malformed summary row: " + line);
    SummaryRow r;
    auto p = policy_from_string(fields[0]);
    if (!p) throw ConfigError("unknown policy in summary: " + fields[0]);
    r.policy = *p;
    r.avs = std::stoi(fields[1]);
    for (int c = 0; c < 4; ++c)
      r.avg.mean_checkpoints[c] = std::stod(fields[2 + c]);
    r.avg.mean_collisions = std::stod(fields[6]);
    for (int c = 0; c < 4; ++c) r.avg.presentation[c] = std::stoi(fields[7 + c]);
    r.avg.presentation_collisions = std::stoi(fields[11]);
    rows.push_back(r);
  }
  return rows;
}

namespace {

const SummaryRow* find_row(const std::vector<SummaryRow>& rows, PolicyId policy,
                           int avs) {
  for (const SummaryRow& r : rows)
    if (r.policy == policy && r.avs == avs) return &r;
  return nullptr;
}

bool write_checkpoint_figure(const std::vector<SummaryRow>& rows,
                             const std::filesystem::path& path,
                             const std::vector<std::pair<PolicyId, int>>& want) {
  std::string body = "# series c5 c10 c15 c20\n";
  for (auto [policy, avs] : want) {
    const SummaryRow* r = find_row(rows, policy, avs);
    if (!r) return false;
    char buf[128];
    std::snprintf(buf, sizeof(buf), "%s_%dAV %d %d %d %d\n",
                  to_string(policy).c_str(), avs, r->avg.presentation[0],
                  r->avg.presentation[1], r->avg.presentation[2],
                  r->avg.presentation[3]);
    body += buf;
  }
  write_file(path, body);
  return true;
}

}  // namespace

int emit_figure_data(const std::vector<SummaryRow>& rows,
                     const std::filesystem::path& out_dir) {
  int emitted = 0;
  const std::vector<std::pair<std::string,
                              std::vector<std::pair<PolicyId, int>>>> figures{
      {"fig2.dat",
       {{PolicyId::Lc2017, 1}, {PolicyId::Mobil, 1}, {PolicyId::Lc2017, 3},
        {PolicyId::Mobil, 3}}},
      {"fig3.dat",
       {{PolicyId::IdmLc, 1}, {PolicyId::Continuous, 1}, {PolicyId::IdmLc, 3},
        {PolicyId::Continuous, 3}}},
      {"fig4.dat",
       {{PolicyId::Mlca, 1}, {PolicyId::None, 1}, {PolicyId::Mlca, 3},
        {PolicyId::None, 3}}},
  };
  for (const auto& [name, want] : figures) {
    if (write_checkpoint_figure(rows, out_dir / name, want))
      ++emitted;
    else
      std::cerr << "warning: missing rows for " << name << "\n";
  }

  // fig5: average collisions per policy, Fig. 5 bar order, 1-AV scenario.
  std::string body = "# collisions: LC2017 MOBIL IDM_LC CONTINUOUS MLCA NONE\n";
  bool complete = true;
  for (PolicyId policy : kDefaultPolicyOrder) {
    const SummaryRow* r = find_row(rows, policy, 1);
    if (!r) {
      complete = false;
      break;
    }
    body += std::to_string(r->avg.presentation_collisions);
    body += policy == PolicyId::None ? "\n" : " ";
  }
  if (complete) {
    write_file(out_dir / "fig5.dat", body);
    ++emitted;
  } else {
    std::cerr << "warning: missing rows for fig5.dat\n";
  }
  return emitted;
}

namespace {

struct PaperTarget {
  PolicyId policy;
  int avs;
  std::array<int, 4> checkpoints;
};

// Charted values from the source figures (checkpoint counts and the
// per-policy collision bars).
const std::vector<PaperTarget> kCheckpointTargets{
    {PolicyId::Lc2017, 1, {1, 2, 4, 5}},   {PolicyId::Mobil, 1, {1, 2, 3, 4}},
    {PolicyId::Lc2017, 3, {2, 6, 9, 14}},  {PolicyId::Mobil, 3, {2, 5, 9, 13}},
    {PolicyId::IdmLc, 1, {1, 2, 4, 6}},    {PolicyId::Continuous, 1, {0, 1, 3, 4}},
    {PolicyId::IdmLc, 3, {3, 7, 8, 13}},   {PolicyId::Continuous, 3, {3, 6, 9, 12}},
    {PolicyId::Mlca, 1, {0, 1, 2, 4}},     {PolicyId::None, 1, {1, 3, 5, 8}},
    {PolicyId::Mlca, 3, {4, 7, 11, 13}},   {PolicyId::None, 3, {5, 9, 17, 20}},
};

const std::vector<std::pair<PolicyId, int>> kCollisionTargets{
    {PolicyId::Lc2017, 0}, {PolicyId::Mobil, 2},  {PolicyId::IdmLc, 1},
    {PolicyId::Continuous, 0}, {PolicyId::Mlca, 1}, {PolicyId::None, 6},
};

}  // namespace

std::string deviation_report(const std::vector<SummaryRow>& rows) {
  std::ostringstream out;
  out << "deviation report (presentation values vs charted targets)\n";
  out << "lane-change checkpoints, tolerance +/-3:\n";
  for (const PaperTarget& t : kCheckpointTargets) {
    const SummaryRow* r = find_row(rows, t.policy, t.avs);
    if (!r) continue;
    int max_dev = 0;
    out << "  " << to_string(t.policy) << " " << t.avs << "AV:";
    for (int c = 0; c < 4; ++c) {
      const int dev = r->avg.presentation[c] - t.checkpoints[c];
      max_dev = std::max(max_dev, std::abs(dev));
      out << " " << r->avg.presentation[c] << "(" << (dev >= 0 ? "+" : "")
          << dev << ")";
    }
    out << (max_dev <= 3 ? "  within" : "  OUTSIDE") << " tolerance\n";
  }
  out << "collisions (1 AV), tolerance +/-2:\n";
  for (const auto& [policy, target] : kCollisionTargets) {
    const SummaryRow* r = find_row(rows, policy, 1);
    if (!r) continue;
    const int dev = r->avg.presentation_collisions - target;
    out << "  " << to_string(policy) << ": " << r->avg.presentation_collisions
        << " (" << (dev >= 0 ? "+" : "") << dev << ")"
        << (std::abs(dev) <= 2 ? "  within" : "  OUTSIDE") << " tolerance\n";
  }
  return out.str();
}

int run_experiment(const ExperimentPlan& plan) {
  return run_experiment(plan, nullptr);
}

int run_experiment(const ExperimentPlan& plan, std::vector<SummaryRow>* rows_out) {
  try {
    if (plan.iterations < 1) throw ConfigError("iterations must be >= 1");
    if (plan.policies.empty()) throw ConfigError("no policies selected");
    for (int avs : plan.av_counts)
      if (avs != 1 && avs != 3) throw ConfigError("av_counts entries must be 1 or 3");
    build_network(plan.config.scenario);

    std::filesystem::create_directories(plan.out_dir);
    if (!plan.log_dir.empty()) std::filesystem::create_directories(plan.log_dir);

    std::vector<Cell> cells;
    for (PolicyId policy : plan.policies) {
      for (int avs : plan.av_counts) {
        Cell cell{policy, avs, plan.config};
        cell.config.scenario.n_tracked = avs;
        cell.config.engine.validate = plan.validation;
        cells.push_back(std::move(cell));
      }
    }

    struct Task {
      std::size_t cell;
      int iter;
    };
    std::vector<Task> tasks;
    for (std::size_t c = 0; c < cells.size(); ++c)
      for (int i = 0; i < plan.iterations; ++i) tasks.push_back({c, i});

    std::vector<std::vector<TrialSummary>> results(cells.size());
    std::vector<std::vector<std::string>> logs(cells.size());
    for (std::size_t c = 0; c < cells.size(); ++c) {
      results[c].resize(plan.iterations);
      if (!plan.log_dir.empty()) logs[c].resize(plan.iterations);
    }

    std::atomic<std::size_t> next_task{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto worker = [&] {
      for (;;) {
        const std::size_t t = next_task.fetch_add(1);
        if (t >= tasks.size()) return;
        const Task& task = tasks[t];
        const Cell& cell = cells[task.cell];
        try {
          const uint64_t seed = plan.base_seed + task.iter;
          IterationLog log =
              run_iteration(cell.config, cell.policy, seed);
          results[task.cell][task.iter] =
              summarize(log, cell.policy, cell.avs);
          if (!plan.log_dir.empty())
            logs[task.cell][task.iter] = log.serialize();
        } catch (...) {
          std::lock_guard<std::mutex> lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          next_task.store(tasks.size());
          return;
        }
      }
    };

    const int jobs = std::max(1, plan.jobs);
    if (jobs == 1) {
      worker();
    } else {
      std::vector<std::thread> pool;
      for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
      for (auto& t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);

    // Single writer; results are already ordered by seed within each cell.
    std::vector<SummaryRow> rows;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      const Cell& cell = cells[c];
      write_file(plan.out_dir / trials_filename(cell.policy, cell.avs),
                 trials_csv(results[c]));
      if (!plan.log_dir.empty()) {
        for (int i = 0; i < plan.iterations; ++i) {
          const std::string name = to_string(cell.policy) + "_" +
                                   std::to_string(cell.avs) + "AV_" +
                                   std::to_string(plan.base_seed + i) + ".log";
          write_file(plan.log_dir / name, logs[c][i]);
        }
      }
      rows.push_back({cell.policy, cell.avs, average_trials(results[c])});
    }
    write_file(plan.out_dir / "summary.csv", summary_csv(rows));

    const int emitted = emit_figure_data(rows, plan.out_dir);
    std::cout << deviation_report(rows);
    if (rows_out) *rows_out = rows;
    if (plan.strict && emitted < 4) return kExitConfigError;
    return kExitOk;
  } catch (const MlcaViolation& e) {
    std::cerr << "validation failure: " << e.what() << "\n";
    return kExitValidationFailure;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  }
}

}  // namespace lanesim
