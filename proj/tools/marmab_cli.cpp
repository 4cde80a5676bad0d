#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "marmab/adherence.hpp"
#include "marmab/csv.hpp"
#include "marmab/harness.hpp"
#include "marmab/instance_io.hpp"
#include "marmab/lambda_q.hpp"
#include "marmab/oracles.hpp"

namespace fs = std::filesystem;
using namespace marmab;

namespace {

nlohmann::json load_config(const fs::path& path) { return read_json_file(path); }

int cmd_gen(const fs::path& config_path, std::uint64_t seed, const fs::path& out, const fs::path& traces_out,
            int n_patients) {
  if (!traces_out.empty()) {
    Engine rng = make_engine(seed, streams::kTraces);
    write_traces(gen_synthetic_traces(n_patients, default_trace_modes(), rng), traces_out);
    std::cout << "wrote " << traces_out.string() << '\n';
  }
  if (config_path.empty()) return 0;
  const auto j = load_config(config_path);
  const auto instance = make_instance(j.at("domain"), seed, config_path.parent_path());
  save_instance(instance, out);
  std::cout << "wrote " << out.string() << " (" << instance.n_arms() << " arms, budget " << instance.budget() << ")\n";
  return 0;
}

int cmd_run(const fs::path& config_path, const std::string& output_dir, int threads) {
  auto configs = configs_from_json(load_config(config_path));
  int status = 0;
  for (auto& c : configs) {
    if (!output_dir.empty()) c.output_dir = output_dir;
    if (threads > 0) c.threads = threads;
    const auto summary = run(c, config_path.parent_path());
    std::cout << c.algorithm << ": " << summary.seeds.size() << " seeds -> " << (c.output_dir / c.algorithm).string()
              << (summary.partial ? " (PARTIAL)" : "") << '\n';
    for (const auto& s : summary.seeds) {
      if (!s.ok) {
        std::cerr << "  seed " << s.seed << " failed: " << s.error << '\n';
        status = 2;
      }
    }
  }
  return status;
}

int cmd_oracle(const fs::path& config_path, std::uint64_t seed, const fs::path& out_dir, int n_lam) {
  const auto configs = configs_from_json(load_config(config_path));
  const auto& c = configs.front();
  const auto instance = make_instance(c.domain, seed, config_path.parent_path());
  const int grid_points = n_lam > 0 ? n_lam : c.params.n_lam;
  double lmax = c.params.lambda_max ? *c.params.lambda_max : lambda_max_bound(instance);
  if (lmax <= 0.0) lmax = 1.0;
  const OracleQ oracle(instance, LambdaGrid(lmax, grid_points));
  fs::create_directories(out_dir);

  std::ofstream q(out_dir / "oracle_q.csv", std::ios::binary);
  q << "arm,s,a,lambda_p,Q\n";
  for (std::size_t i = 0; i < instance.n_arms(); ++i) {
    const auto& table = oracle.tables()[i];
    for (int s = 0; s < table.n_states(); ++s) {
      for (int a = 0; a < table.n_actions(); ++a) {
        for (int p = 0; p < table.n_points(); ++p) {
          q << i << ',' << s << ',' << a << ',' << format_double(oracle.grid().point(p)) << ','
            << format_double(table.at(s, a, p)) << '\n';
        }
      }
    }
  }
  std::ofstream idx(out_dir / "oracle_index.csv", std::ios::binary);
  idx << "arm,s,a,index\n";
  for (std::size_t i = 0; i < instance.n_arms(); ++i) {
    const auto& arm = instance.arm(i);
    for (int s = 0; s < arm.n_states; ++s) {
      for (int j = 1; j < arm.n_actions; ++j) {
        idx << i << ',' << s << ',' << j << ',';
        try {
          idx << format_double(oracle_index(arm, s, j, instance.discount()));
        } catch (const NotIndexable& e) {
          idx << "nan";
          std::cerr << "arm " << i << ": " << e.what() << '\n';
        }
        idx << '\n';
      }
    }
  }
  std::cout << "wrote " << (out_dir / "oracle_q.csv").string() << " and " << (out_dir / "oracle_index.csv").string()
            << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-action restless bandit learners, oracles and experiment harness"};
  app.require_subcommand(1);

  fs::path gen_config, gen_out = "instance.json", traces_out;
  std::uint64_t gen_seed = 0;
  int n_patients = 200;
  auto* gen = app.add_subcommand("gen", "Write an instance file (and optionally synthetic adherence traces)");
  gen->add_option("-c,--config", gen_config, "Run config whose domain block is sampled");
  gen->add_option("-s,--seed", gen_seed, "Seed");
  gen->add_option("-o,--out", gen_out, "Instance output path");
  gen->add_option("--traces-out", traces_out, "Also write synthetic 168-day traces here");
  gen->add_option("--patients", n_patients, "Number of synthetic patients");

  fs::path run_config;
  std::string run_output;
  int run_threads = 0;
  auto* run_cmd = app.add_subcommand("run", "Execute a run config");
  run_cmd->add_option("config", run_config, "Run config")->required()->check(CLI::ExistingFile);
  run_cmd->add_option("-o,--output-dir", run_output, "Override output_dir");
  run_cmd->add_option("-j,--threads", run_threads, "Worker threads (0 = all cores)");

  fs::path oracle_config, oracle_out = "oracle";
  std::uint64_t oracle_seed = 0;
  int oracle_nlam = 0;
  auto* oracle = app.add_subcommand("oracle", "Export oracle Q-tables and indexes for one seed's instance");
  oracle->add_option("config", oracle_config, "Run config")->required()->check(CLI::ExistingFile);
  oracle->add_option("-s,--seed", oracle_seed, "Seed");
  oracle->add_option("-o,--out", oracle_out, "Output directory");
  oracle->add_option("--n-lam", oracle_nlam, "Grid size (default from config)");

  fs::path agg_dir;
  std::size_t agg_window = 100;
  auto* agg = app.add_subcommand("aggregate", "Recompute aggregate CSVs from per-seed CSVs");
  agg->add_option("dir", agg_dir, "Directory holding seed_*.csv")->required()->check(CLI::ExistingDirectory);
  agg->add_option("-w,--window", agg_window, "Moving-average window");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*gen) return cmd_gen(gen_config, gen_seed, gen_out, traces_out, n_patients);
    if (*run_cmd) return cmd_run(run_config, run_output, run_threads);
    if (*oracle) return cmd_oracle(oracle_config, oracle_seed, oracle_out, oracle_nlam);
    if (*agg) {
      for (const auto& f : aggregate_directory(agg_dir, agg_window)) std::cout << "wrote " << f.string() << '\n';
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
