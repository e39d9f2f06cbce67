#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <numbers>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "pavinglab/block.hpp"
#include "pavinglab/dempty.hpp"
#include "pavinglab/errors.hpp"
#include "pavinglab/expander.hpp"
#include "pavinglab/ideals.hpp"
#include "pavinglab/io.hpp"
#include "pavinglab/norms.hpp"
#include "pavinglab/paving.hpp"
#include "pavinglab/rng.hpp"
#include "pavinglab/symmetry.hpp"
#include "report.hpp"

namespace {

using namespace pavinglab;
using cli::ordered_json;
using ConfigMap = std::map<std::string, ordered_json>;

struct CommonOptions {
  std::uint64_t seed = 0;
  std::string out;
  std::string format;
  int jobs = 0;
  bool no_timestamp = false;
};

void add_common(CLI::App* sub, CommonOptions& common,
                const std::string& default_format) {
  common.format = default_format;
  sub->add_option("--seed", common.seed, "base PRNG seed");
  sub->add_option("--out", common.out, "report path");
  sub->add_option("--format", common.format, "report format")
      ->check(CLI::IsMember({"json", "csv"}));
  sub->add_option("--jobs", common.jobs, "worker threads (0 = runtime default)");
  sub->add_flag("--no-timestamp", common.no_timestamp,
                "omit the timestamp field from the report");
}

std::string trimmed(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t");
  return s.substr(begin, end - begin + 1);
}

// Expands `--config FILE` into the file's `key = value` lines, injected as
// --key=value arguments. Keys the command line already carries are skipped,
// so explicit flags always win over the file.
std::vector<std::string> expand_config(std::vector<std::string> args) {
  std::string config_path;
  for (size_t i = 0; i < args.size();) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      config_path = args[i + 1];
      args.erase(args.begin() + i, args.begin() + i + 2);
    } else if (args[i].rfind("--config=", 0) == 0) {
      config_path = args[i].substr(9);
      args.erase(args.begin() + i);
    } else {
      ++i;
    }
  }
  if (config_path.empty()) return args;

  std::set<std::string> given;
  for (const std::string& arg : args) {
    if (arg.rfind("--", 0) == 0) given.insert(arg.substr(0, arg.find('=')));
  }
  std::ifstream in(config_path);
  if (!in) throw IoError("config: cannot open " + config_path);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string text = trimmed(line);
    if (text.empty() || text[0] == '#' || text[0] == ';') continue;
    const auto eq = text.find('=');
    if (eq == std::string::npos) {
      throw IoError("config: line " + std::to_string(lineno) +
                    " is not in key = value form");
    }
    const std::string key = trimmed(text.substr(0, eq));
    const std::string value = trimmed(text.substr(eq + 1));
    if (key.empty()) {
      throw IoError("config: empty key on line " + std::to_string(lineno));
    }
    if (!given.contains("--" + key)) {
      args.push_back("--" + key + "=" + value);
    }
  }
  return args;
}

std::string resolve_out(const CommonOptions& common, const std::string& name) {
  if (!common.out.empty()) return common.out;
  return name + "-report." + common.format;
}

std::map<std::string, std::string> csv_config(const ConfigMap& config) {
  std::map<std::string, std::string> flat;
  for (const auto& [key, value] : config) {
    flat[key] = value.is_string() ? value.get<std::string>() : value.dump();
  }
  return flat;
}

void fill_common_config(ConfigMap& config, const CommonOptions& common) {
  config["seed"] = common.seed;
  config["format"] = common.format;
  config["jobs"] = common.jobs;
}

Mat random_complex_mat(Rng& rng, int n) {
  Mat a(n, n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) a(i, j) = rng.complex_normal();
  }
  return a;
}

Mat random_hollow(Rng& rng, int n) {
  Mat a = random_complex_mat(rng, n);
  a.diagonal().setZero();
  return a;
}

Mat random_self_adjoint_hollow(Rng& rng, int n) {
  const Mat a = random_hollow(rng, n);
  return Mat((a + a.adjoint()) / 2.0);
}

Vec random_unit(Rng& rng, int n) {
  Vec v(n);
  for (int i = 0; i < n; ++i) v(i) = rng.complex_normal();
  return v.normalized();
}

Mat random_d_empty_mat(Rng& rng, int n, int d) {
  Mat b = Mat::Zero(n, n);
  for (int t = 0; t < d; ++t) {
    const std::vector<int> perm = rng.permutation(n);
    for (int i = 0; i < n; ++i) {
      if (rng.uniform() < 0.8) b(i, perm[i]) += rng.complex_normal();
    }
  }
  return b;
}

// ---------------------------------------------------------------------------
// symmetry: Haar identity / commutator lower bounds over the sign group
// ---------------------------------------------------------------------------

struct SymmetryOptions {
  CommonOptions common;
  std::string check = "haar";
  int n = 6;
  long samples = 200;
};

std::string run_symmetry(const SymmetryOptions& opt) {
  ConfigMap config;
  fill_common_config(config, opt.common);
  config["check"] = opt.check;
  config["n"] = opt.n;
  config["samples"] = opt.samples;

  ordered_json trials = ordered_json::array();
  double worst_rel = 0.0;
  double min_margin = std::numeric_limits<double>::infinity();
  for (long t = 0; t < opt.samples; ++t) {
    const std::uint64_t trial_seed = derive_seed(opt.common.seed, t);
    Rng rng(trial_seed);
    ordered_json row;
    row["trial"] = t;
    row["seed"] = trial_seed;
    if (opt.check == "haar") {
      const Mat x = random_hollow(rng, opt.n);
      const double mean = haar_average_commutator_sq(x);
      const double expect = 2.0 * two_norm(x) * two_norm(x);
      const double rel =
          std::abs(mean - expect) / std::max(expect, 1e-300);
      worst_rel = std::max(worst_rel, rel);
      row["mean"] = mean;
      row["expected"] = expect;
      row["rel_error"] = rel;
    } else if (opt.check == "bound2") {
      const Mat x = random_hollow(rng, opt.n);
      const auto res = max_commutator_two_norm(x);
      const double bound = std::sqrt(2.0) * two_norm(x);
      min_margin = std::min(min_margin, res.value - bound);
      row["max"] = res.value;
      row["bound"] = bound;
      row["margin"] = res.value - bound;
    } else {
      const Mat x = random_self_adjoint_hollow(rng, opt.n);
      const auto res = max_commutator_op_norm(x);
      const double bound = op_norm(x);
      min_margin = std::min(min_margin, res.value - bound);
      row["max"] = res.value;
      row["bound"] = bound;
      row["margin"] = res.value - bound;
    }
    trials.push_back(std::move(row));
  }

  ordered_json results;
  ordered_json summary;
  if (opt.check == "haar") {
    summary["max_rel_error"] = worst_rel;
    std::cerr << "haar identity over " << opt.samples
              << " samples: max relative error " << format_double(worst_rel)
              << "\n";
  } else {
    summary["min_margin"] = min_margin;
    std::cerr << opt.check << " over " << opt.samples
              << " samples: min margin " << format_double(min_margin) << "\n";
  }
  results["summary"] = std::move(summary);
  results["trials"] = std::move(trials);

  const std::string path = resolve_out(opt.common, "symmetry");
  if (opt.common.format == "json") {
    cli::write_json_report(path, "symmetry", config, results,
                           !opt.common.no_timestamp);
  } else {
    std::vector<std::string> rows;
    for (const auto& row : results["trials"]) {
      std::string line = std::to_string(row["trial"].get<long>()) + "," +
                         std::to_string(row["seed"].get<std::uint64_t>());
      if (opt.check == "haar") {
        line += "," + format_double(row["mean"].get<double>()) + "," +
                format_double(row["expected"].get<double>()) + "," +
                format_double(row["rel_error"].get<double>());
      } else {
        line += "," + format_double(row["max"].get<double>()) + "," +
                format_double(row["bound"].get<double>()) + "," +
                format_double(row["margin"].get<double>());
      }
      rows.push_back(std::move(line));
    }
    const std::string header = opt.check == "haar"
                                   ? "trial,seed,mean,expected,rel_error"
                                   : "trial,seed,max,bound,margin";
    cli::write_csv_report(path, "symmetry", csv_config(config), header, rows,
                          !opt.common.no_timestamp);
  }
  return path;
}

// ---------------------------------------------------------------------------
// pave / pave-abelian
// ---------------------------------------------------------------------------

struct PaveOptions {
  CommonOptions common;
  std::string input;
  std::string gen = "zero-diagonal";
  std::vector<int> ns;
  int m = 2;
  std::string mode = "exhaustive";
  long trials = 32;
  long local_moves = 128;
};

std::string run_pave(const PaveOptions& opt) {
  BlockOperator b;
  if (!opt.input.empty()) {
    b = read_block_operator(opt.input);
  } else {
    if (opt.ns.empty()) {
      throw DomainError("pave: provide --input or --n block sizes");
    }
    std::vector<Mat> blocks;
    for (size_t k = 0; k < opt.ns.size(); ++k) {
      Rng rng(derive_seed(opt.common.seed, k));
      blocks.push_back(opt.gen == "self-adjoint"
                           ? random_self_adjoint_hollow(rng, opt.ns[k])
                           : random_hollow(rng, opt.ns[k]));
    }
    b = BlockOperator(std::move(blocks));
  }

  ConfigMap config;
  fill_common_config(config, opt.common);
  config["input"] = opt.input;
  config["gen"] = opt.gen;
  config["n"] = opt.ns;
  config["m"] = opt.m;
  config["mode"] = opt.mode;
  config["trials"] = opt.trials;
  config["local_moves"] = opt.local_moves;

  PavingPartition part;
  double value = 0.0;
  ordered_json results;
  if (opt.mode == "exhaustive") {
    std::tie(part, value) = exhaustive_pave(b, opt.m);
  } else {
    std::tie(part, value) = random_pave(b, opt.m, opt.trials, opt.common.seed,
                                        opt.local_moves);
    ordered_json seeds = ordered_json::array();
    for (long t = 0; t < opt.trials; ++t) {
      seeds.push_back(opt.common.seed + static_cast<std::uint64_t>(t));
    }
    results["trial_seeds"] = std::move(seeds);
  }
  results["paving_norm"] = value;
  results["partition"] = nlohmann::ordered_json::parse(partition_to_json(part));

  std::cerr << "paving norm " << format_double(value) << " with m = " << opt.m
            << " (" << opt.mode << ")\n";
  const std::string path = resolve_out(opt.common, "pave");
  cli::write_json_report(path, "pave", config, results,
                         !opt.common.no_timestamp);
  return path;
}

struct PaveAbelianOptions {
  CommonOptions common;
  std::vector<int> ns{1024};
  double eps = 0.1;
};

std::string run_pave_abelian(const PaveAbelianOptions& opt) {
  if (opt.eps <= 0.0 || opt.eps >= 1.0) {
    throw DomainError("pave-abelian: eps must lie in (0,1)");
  }
  ConfigMap config;
  fill_common_config(config, opt.common);
  config["n"] = opt.ns;
  config["eps"] = opt.eps;

  PavingPartition part;
  part.m = 1;
  double worst = 0.0;
  int class_count = 0;
  ordered_json blocks = ordered_json::array();
  for (size_t k = 0; k < opt.ns.size(); ++k) {
    const std::uint64_t block_seed = derive_seed(opt.common.seed, k);
    Rng rng(block_seed);
    const Vec v = random_unit(rng, opt.ns[k]);
    auto [colors, norm] = pave_unit_vector(v, opt.eps);
    int used = 0;
    for (int c : colors) used = std::max(used, c);
    class_count = std::max(class_count, used);
    part.m = std::max(part.m, used);
    worst = std::max(worst, norm);
    ordered_json row;
    row["n"] = opt.ns[k];
    row["seed"] = block_seed;
    row["classes"] = used;
    row["norm"] = norm;
    blocks.push_back(std::move(row));
    part.colors.push_back(std::move(colors));
  }

  ordered_json results;
  results["paving_norm"] = worst;
  results["class_count"] = class_count;
  results["bound"] = 2.0 * opt.eps;
  results["blocks"] = std::move(blocks);
  results["partition"] = nlohmann::ordered_json::parse(partition_to_json(part));

  std::cerr << "abelian paving norm " << format_double(worst) << " < "
            << format_double(2.0 * opt.eps) << " using " << class_count
            << " classes\n";
  const std::string path = resolve_out(opt.common, "pave-abelian");
  cli::write_json_report(path, "pave-abelian", config, results,
                         !opt.common.no_timestamp);
  return path;
}

// ---------------------------------------------------------------------------
// decompose
// ---------------------------------------------------------------------------

struct DecomposeOptions {
  CommonOptions common;
  std::string input;
  std::vector<int> ns{8};
  int d = 3;
  bool check_only = false;
};

std::string run_decompose(const DecomposeOptions& opt) {
  BlockOperator b;
  if (!opt.input.empty()) {
    b = read_block_operator(opt.input);
  } else {
    std::vector<Mat> blocks;
    for (size_t k = 0; k < opt.ns.size(); ++k) {
      Rng rng(derive_seed(opt.common.seed, k));
      blocks.push_back(random_d_empty_mat(rng, opt.ns[k], opt.d));
    }
    b = BlockOperator(std::move(blocks));
  }

  ConfigMap config;
  fill_common_config(config, opt.common);
  config["input"] = opt.input;
  config["n"] = opt.ns;
  config["d"] = opt.d;
  config["check_only"] = opt.check_only;

  const DEmptyCheck check = check_d_empty(b, opt.d);
  ordered_json results;
  results["d"] = opt.d;
  results["d_empty"] = check.ok;
  if (!check.ok) {
    ordered_json viol;
    viol["block"] = check.violation->block;
    viol["index"] = check.violation->index;
    viol["line"] = check.violation->is_row ? "row" : "column";
    viol["count"] = check.violation->count;
    results["violation"] = std::move(viol);
  }
  if (opt.check_only) {
    std::cerr << (check.ok ? "operator is d-empty\n"
                           : "operator is not d-empty\n");
    const std::string path = resolve_out(opt.common, "decompose");
    cli::write_json_report(path, "decompose", config, results,
                           !opt.common.no_timestamp);
    return path;
  }
  if (!check.ok) {
    throw DomainError("decompose: operator is not d-empty with d = " +
                      std::to_string(opt.d));
  }

  const auto decomp = decompose_d_empty(b, opt.d);
  const std::vector<int> dims = b.dims();
  // exact reconstruction check, reported rather than assumed
  double err = 0.0;
  for (int k = 0; k < b.block_count(); ++k) {
    Mat sum = Mat::Zero(dims[k], dims[k]);
    for (size_t i = 0; i < decomp.patterns.size(); ++i) {
      for (int r = 0; r < dims[k]; ++r) {
        const int c = decomp.patterns[i].col_of_row[k][r];
        if (c >= 0) sum(r, c) += decomp.coefficients[i].diagonal(k)(r);
      }
    }
    err = std::max(err, max_abs(Mat(sum - b.block(k))));
  }

  results["pair_count"] = decomp.patterns.size();
  results["reconstruction_error"] = err;
  ordered_json pairs = ordered_json::array();
  for (size_t i = 0; i < decomp.patterns.size(); ++i) {
    ordered_json pair;
    ordered_json patterns = ordered_json::array();
    ordered_json diagonals = ordered_json::array();
    for (size_t k = 0; k < dims.size(); ++k) {
      ordered_json cols = ordered_json::array();
      for (int c : decomp.patterns[i].col_of_row[k]) {
        cols.push_back(c + 1);  // 1-based, 0 = unmapped
      }
      patterns.push_back(std::move(cols));
      ordered_json diag = ordered_json::array();
      const Vec& dv = decomp.coefficients[i].diagonal(k);
      for (int r = 0; r < dims[k]; ++r) {
        diag.push_back({dv(r).real(), dv(r).imag()});
      }
      diagonals.push_back(std::move(diag));
    }
    pair["pattern"] = std::move(patterns);
    pair["diagonal"] = std::move(diagonals);
    pairs.push_back(std::move(pair));
  }
  results["pairs"] = std::move(pairs);

  std::cerr << "decomposed into " << decomp.patterns.size()
            << " diagonal x almost-permutation pairs, reconstruction error "
            << format_double(err) << "\n";
  const std::string path = resolve_out(opt.common, "decompose");
  cli::write_json_report(path, "decompose", config, results,
                         !opt.common.no_timestamp);
  return path;
}

// ---------------------------------------------------------------------------
// expander
// ---------------------------------------------------------------------------

struct ExpanderOptions {
  CommonOptions common;
  int n = 2000;
  int d = 10;
  long trials = 100;
};

std::string run_expander(const ExpanderOptions& opt) {
  if (opt.trials < 1) throw DomainError("expander: trials must be positive");
  if (opt.d < 2 || opt.d % 2 != 0) {
    throw DomainError("expander: d must be even and >= 2");
  }
  if (opt.d >= opt.n) throw DomainError("expander: requires d < n");
  ConfigMap config;
  fill_common_config(config, opt.common);
  config["n"] = opt.n;
  config["d"] = opt.d;
  config["trials"] = opt.trials;
  const double bound = friedman_bound(opt.d);

  struct TrialRow {
    std::uint64_t seed;
    double lambda2;
  };
  std::vector<TrialRow> rows(opt.trials);
  std::vector<std::exception_ptr> errors(opt.trials);
#pragma omp parallel for schedule(dynamic)
  for (long t = 0; t < opt.trials; ++t) {
    try {
      const std::uint64_t trial_seed = derive_seed(opt.common.seed, t);
      auto [ps, s] = random_permutation_sum(opt.n, opt.d, trial_seed);
      rows[t] = TrialRow{trial_seed, second_eigenvalue(s, 1e-9)};
    } catch (...) {
      errors[t] = std::current_exception();
    }
  }
  for (long t = 0; t < opt.trials; ++t) {
    if (errors[t]) std::rethrow_exception(errors[t]);
  }

  long accepted = 0;
  std::vector<std::string> csv_rows;
  ordered_json trials = ordered_json::array();
  for (long t = 0; t < opt.trials; ++t) {
    const bool ok = rows[t].lambda2 <= bound;
    if (ok) ++accepted;
    csv_rows.push_back(std::to_string(opt.n) + "," + std::to_string(opt.d) +
                       "," + std::to_string(rows[t].seed) + "," +
                       std::to_string(t) + "," +
                       format_double(rows[t].lambda2) + "," +
                       format_double(bound) + "," + (ok ? "1" : "0"));
    ordered_json row;
    row["n"] = opt.n;
    row["d"] = opt.d;
    row["seed"] = rows[t].seed;
    row["attempt"] = t;
    row["lambda2"] = rows[t].lambda2;
    row["bound"] = bound;
    row["accepted"] = ok;
    trials.push_back(std::move(row));
  }

  std::cerr << "second eigenvalue within the bound "
            << format_double(bound) << " in " << accepted << "/" << opt.trials
            << " trials\n";
  const std::string path = resolve_out(opt.common, "expander");
  if (opt.common.format == "csv") {
    cli::write_csv_report(path, "expander", csv_config(config),
                          "n,d,seed,attempt,lambda2,bound,accepted", csv_rows,
                          !opt.common.no_timestamp);
  } else {
    ordered_json results;
    results["bound"] = bound;
    results["accepted"] = accepted;
    results["trials"] = std::move(trials);
    cli::write_json_report(path, "expander", config, results,
                           !opt.common.no_timestamp);
  }
  return path;
}

// ---------------------------------------------------------------------------
// hadamard
// ---------------------------------------------------------------------------

struct HadamardOptions {
  CommonOptions common;
  int n = 500;
  double delta = 0.75;
  long samples = 50;
  int max_attempts = 64;
  int n0 = 0;
};

std::string run_hadamard(const HadamardOptions& opt) {
  ConfigMap config;
  fill_common_config(config, opt.common);
  config["n"] = opt.n;
  config["delta"] = opt.delta;
  config["samples"] = opt.samples;
  config["max_attempts"] = opt.max_attempts;
  config["n0"] = opt.n0;

  const auto approx = approximate_all_ones(
      opt.delta, {opt.n}, opt.common.seed, opt.max_attempts,
      opt.n0 > 0 ? std::optional<int>(opt.n0) : std::nullopt);
  const Mat& c0 = approx.c.block(0);
  const double base = op_norm(Mat(all_ones_projection(opt.n) - c0));

  double max_chain = 0.0, max_dev = 0.0;
  ordered_json samples = ordered_json::array();
  for (long k = 0; k < opt.samples; ++k) {
    const std::uint64_t sample_seed = derive_seed(opt.common.seed, 1000 + k);
    Rng rng(sample_seed);
    std::vector<double> theta(opt.n);
    for (double& t : theta) t = rng.uniform(0.0, 2.0 * std::numbers::pi);
    const Mat q = hadamard_projection(theta);
    const double chain = op_norm(Mat(q - conjugate_by_phase(theta, c0)));
    const double dev = std::abs(chain - base);
    max_chain = std::max(max_chain, chain);
    max_dev = std::max(max_dev, dev);
    ordered_json row;
    row["sample"] = k;
    row["seed"] = sample_seed;
    row["chain_norm"] = chain;
    row["deviation"] = dev;
    samples.push_back(std::move(row));
  }

  ordered_json results;
  results["d"] = approx.d;
  results["n0"] = approx.n0;
  results["attempts"] = approx.blocks[0].attempts;
  results["accepted_seed"] = approx.blocks[0].seed;
  results["lambda2"] = approx.blocks[0].lambda2;
  if (approx.blocks[0].perms) {
    results["accepted_perms"] =
        ordered_json::parse(permutation_set_to_json(*approx.blocks[0].perms));
  }
  results["base_norm"] = base;
  results["max_chain_norm"] = max_chain;
  results["max_deviation"] = max_dev;
  results["samples"] = std::move(samples);

  std::cerr << "hadamard chain norm max " << format_double(max_chain) << " < "
            << format_double(opt.delta) << ", deviation from ||p - c|| max "
            << format_double(max_dev) << "\n";
  const std::string path = resolve_out(opt.common, "hadamard");
  cli::write_json_report(path, "hadamard", config, results,
                         !opt.common.no_timestamp);
  return path;
}

// ---------------------------------------------------------------------------
// ideals
// ---------------------------------------------------------------------------

struct IdealsOptions {
  CommonOptions common;
  std::string family = "all-ones-abelian";
  int rank_param = 1;
  double rank_coeff = 1.0;
  double rank_power = 0.0;
  std::vector<int> probes;
  double tol = 1e-2;
  double spectral_t = 0.0;
  std::string spec_path;
};

std::string run_ideals(IdealsOptions opt) {
  if (!opt.spec_path.empty()) {
    std::ifstream in(opt.spec_path);
    if (!in) throw IoError("ideals: cannot open spec " + opt.spec_path);
    nlohmann::json doc;
    try {
      in >> doc;
    } catch (const nlohmann::json::exception& e) {
      throw IoError(std::string("ideals: bad spec JSON: ") + e.what());
    }
    opt.family = doc.at("family").get<std::string>();
    if (doc.contains("params")) {
      const auto& params = doc["params"];
      if (params.contains("r")) opt.rank_param = params["r"].get<int>();
      if (params.contains("rank_coeff")) {
        opt.rank_coeff = params["rank_coeff"].get<double>();
      }
      if (params.contains("rank_power")) {
        opt.rank_power = params["rank_power"].get<double>();
      }
    }
    if (doc.contains("probes")) {
      opt.probes = doc["probes"].get<std::vector<int>>();
    }
  }
  if (opt.probes.empty()) opt.probes = default_probes();

  BlockSequenceSpec spec;
  spec.family = family_from_name(opt.family);
  spec.rank_param = opt.rank_param;
  spec.rank_coeff = opt.rank_coeff;
  spec.rank_power = opt.rank_power;

  ConfigMap config;
  fill_common_config(config, opt.common);
  config["family"] = opt.family;
  config["r"] = opt.rank_param;
  config["rank_coeff"] = opt.rank_coeff;
  config["rank_power"] = opt.rank_power;
  config["probes"] = opt.probes;
  config["tol"] = opt.tol;
  config["t"] = opt.spectral_t;
  config["spec"] = opt.spec_path;

  const auto profile = norm_profile(spec, opt.probes);
  std::vector<int> spectral_ranks;
  if (opt.spectral_t > 0.0) {
    spectral_ranks = spectral_rank_profile(spec, opt.spectral_t, opt.probes);
  }
  std::optional<FamilyDiagnostics> verdicts;
  if (opt.probes.size() >= 6) {
    verdicts = classify(spec, opt.probes, opt.tol);
  }

  const std::string path = resolve_out(opt.common, "ideals");
  if (opt.common.format == "csv") {
    auto flat = csv_config(config);
    if (verdicts) {
      flat["verdict_compact"] = verdict_name(verdicts->compact);
      flat["verdict_two_norm_decay"] = verdict_name(verdicts->two_norm_decay);
      flat["verdict_bounded_rank"] = verdict_name(verdicts->bounded_rank);
      flat["verdict_kind"] = "heuristic";
    }
    std::vector<std::string> rows;
    for (size_t i = 0; i < profile.size(); ++i) {
      std::string line = std::to_string(profile[i].n) + "," +
                         format_double(profile[i].op_norm) + "," +
                         format_double(profile[i].two_norm) + "," +
                         std::to_string(profile[i].rank);
      if (!spectral_ranks.empty()) {
        line += "," + std::to_string(spectral_ranks[i]);
      }
      rows.push_back(std::move(line));
    }
    const std::string header = spectral_ranks.empty()
                                   ? "n,op_norm,two_norm,rank"
                                   : "n,op_norm,two_norm,rank,spectral_rank";
    cli::write_csv_report(path, "ideals", flat, header, rows,
                          !opt.common.no_timestamp);
  } else {
    ordered_json results;
    ordered_json rows = ordered_json::array();
    for (size_t i = 0; i < profile.size(); ++i) {
      ordered_json row;
      row["n"] = profile[i].n;
      row["op_norm"] = profile[i].op_norm;
      row["two_norm"] = profile[i].two_norm;
      row["rank"] = profile[i].rank;
      if (!spectral_ranks.empty()) row["spectral_rank"] = spectral_ranks[i];
      rows.push_back(std::move(row));
    }
    results["profile"] = std::move(rows);
    if (verdicts) {
      ordered_json v;
      v["compact"] = verdict_name(verdicts->compact);
      v["two_norm_decay"] = verdict_name(verdicts->two_norm_decay);
      v["bounded_rank"] = verdict_name(verdicts->bounded_rank);
      v["kind"] = "heuristic";
      results["verdicts"] = std::move(v);
    }
    cli::write_json_report(path, "ideals", config, results,
                           !opt.common.no_timestamp);
  }
  if (verdicts) {
    std::cerr << "family " << opt.family
              << ": op->0 " << verdict_name(verdicts->compact)
              << ", 2-norm->0 " << verdict_name(verdicts->two_norm_decay)
              << ", bounded rank " << verdict_name(verdicts->bounded_rank)
              << " (heuristic finite-probe verdicts)\n";
  } else {
    std::cerr << "profile over " << opt.probes.size()
              << " probes written (too few probes for verdicts)\n";
  }
  return path;
}

// ---------------------------------------------------------------------------
// compress
// ---------------------------------------------------------------------------

struct CompressOptions {
  CommonOptions common;
  int n = 1024;
  int rank = -1;
  long samples = 100;
};

std::string run_compress(const CompressOptions& opt) {
  if (opt.n < 1) throw DomainError("compress: n must be positive");
  ConfigMap config;
  fill_common_config(config, opt.common);
  config["n"] = opt.n;
  config["rank"] = opt.rank;
  config["samples"] = opt.samples;

  double max_err = 0.0, max_pq_err = 0.0;
  ordered_json samples = ordered_json::array();
  for (long s = 0; s < opt.samples; ++s) {
    const std::uint64_t sample_seed = derive_seed(opt.common.seed, s);
    Rng rng(sample_seed);
    const int rank = opt.rank >= 0
                         ? std::min(opt.rank, opt.n)
                         : static_cast<int>(rng.uniform_int(opt.n + 1));
    std::vector<int> support;
    {
      std::vector<int> perm = rng.permutation(opt.n);
      support.assign(perm.begin(), perm.begin() + rank);
      std::sort(support.begin(), support.end());
    }
    const CompressionCheck res = compression_check(support, opt.n);
    const double err = std::abs(res.measured - res.predicted);
    const double pq_err = std::abs(res.pq_measured - res.pq_predicted);
    max_err = std::max(max_err, err);
    max_pq_err = std::max(max_pq_err, pq_err);
    ordered_json row;
    row["sample"] = s;
    row["seed"] = sample_seed;
    row["rank"] = rank;
    row["measured"] = res.measured;
    row["predicted"] = res.predicted;
    row["error"] = err;
    row["pq_measured"] = res.pq_measured;
    row["pq_predicted"] = res.pq_predicted;
    row["pq_error"] = pq_err;
    samples.push_back(std::move(row));
  }

  ordered_json results;
  results["max_error"] = max_err;
  results["max_pq_error"] = max_pq_err;
  results["samples"] = std::move(samples);

  std::cerr << "compression identity over " << opt.samples
            << " samples: max |measured - rank/n| = " << format_double(max_err)
            << "\n";
  const std::string path = resolve_out(opt.common, "compress");
  cli::write_json_report(path, "compress", config, results,
                         !opt.common.no_timestamp);
  return path;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"paving-lab: diagonal paving, sign-symmetry scans and "
               "permutation-sum expander experiments on block operators"};
  app.require_subcommand(1);

  SymmetryOptions sym;
  auto* sym_cmd = app.add_subcommand(
      "symmetry", "sign-group commutator identities and lower bounds");
  add_common(sym_cmd, sym.common, "json");
  sym_cmd->add_option("--check", sym.check, "haar | bound2 | boundop")
      ->check(CLI::IsMember({"haar", "bound2", "boundop"}));
  sym_cmd->add_option("--n", sym.n, "matrix dimension");
  sym_cmd->add_option("--samples", sym.samples, "number of random matrices");

  PaveOptions pave;
  auto* pave_cmd =
      app.add_subcommand("pave", "minimize the paving norm over colorings");
  add_common(pave_cmd, pave.common, "json");
  pave_cmd->add_option("--input", pave.input, "block operator manifest");
  pave_cmd->add_option("--gen", pave.gen, "zero-diagonal | self-adjoint")
      ->check(CLI::IsMember({"zero-diagonal", "self-adjoint"}));
  pave_cmd->add_option("--n", pave.ns, "generated block sizes")->delimiter(',');
  pave_cmd->add_option("--m", pave.m, "number of classes");
  pave_cmd->add_option("--mode", pave.mode, "exhaustive | random")
      ->check(CLI::IsMember({"exhaustive", "random"}));
  pave_cmd->add_option("--trials", pave.trials, "random restarts");
  pave_cmd->add_option("--local-moves", pave.local_moves,
                       "hill-climbing move budget per trial");

  PaveAbelianOptions pab;
  auto* pab_cmd = app.add_subcommand(
      "pave-abelian", "constructive paving of a random abelian projection");
  add_common(pab_cmd, pab.common, "json");
  pab_cmd->add_option("--n", pab.ns, "block sizes")->delimiter(',');
  pab_cmd->add_option("--eps", pab.eps, "target accuracy in (0,1)");

  DecomposeOptions dec;
  auto* dec_cmd = app.add_subcommand(
      "decompose", "write a d-empty operator as diagonal x almost-permutation"
                   " pairs");
  add_common(dec_cmd, dec.common, "json");
  dec_cmd->add_option("--input", dec.input, "block operator manifest");
  dec_cmd->add_option("--n", dec.ns, "generated block sizes")->delimiter(',');
  dec_cmd->add_option("--d", dec.d, "line budget d");
  dec_cmd->add_flag("--check-only", dec.check_only,
                    "only verify d-emptiness and report the certificate");

  ExpanderOptions expd;
  auto* exp_cmd = app.add_subcommand(
      "expander", "second eigenvalues of random permutation sums");
  add_common(exp_cmd, expd.common, "csv");
  exp_cmd->add_option("--n", expd.n, "block size");
  exp_cmd->add_option("--d", expd.d, "even degree");
  exp_cmd->add_option("--trials", expd.trials, "independent samples");

  HadamardOptions had;
  auto* had_cmd = app.add_subcommand(
      "hadamard", "phase-conjugated approximants of unimodular projections");
  add_common(had_cmd, had.common, "json");
  had_cmd->add_option("--n", had.n, "block size");
  had_cmd->add_option("--delta", had.delta, "target accuracy in (0,1)");
  had_cmd->add_option("--samples", had.samples, "random phase vectors");
  had_cmd->add_option("--max-attempts", had.max_attempts,
                      "resampling budget per block");
  had_cmd->add_option("--n0", had.n0, "exact-copy cutoff (0 = default d^2+1)");

  IdealsOptions ide;
  auto* ide_cmd = app.add_subcommand(
      "ideals", "norm decay profiles and heuristic tail verdicts");
  add_common(ide_cmd, ide.common, "csv");
  ide_cmd->add_option("--family", ide.family,
                      "constant-rank-diagonal | power-of-two-rank | "
                      "all-ones-abelian | harmonic-diagonal | fourier-rank");
  ide_cmd->add_option("--r", ide.rank_param, "rank parameter");
  ide_cmd->add_option("--rank-coeff", ide.rank_coeff, "fourier-rank: c");
  ide_cmd->add_option("--rank-power", ide.rank_power, "fourier-rank: p");
  ide_cmd->add_option("--probes", ide.probes, "block sizes to instantiate")
      ->delimiter(',');
  ide_cmd->add_option("--tol", ide.tol, "tail decay tolerance");
  ide_cmd->add_option("--t", ide.spectral_t,
                      "also profile spectral ranks outside (-t, t)");
  ide_cmd->add_option("--spec", ide.spec_path, "family spec JSON file");

  CompressOptions cmp;
  auto* cmp_cmd = app.add_subcommand(
      "compress", "diagonal compressions of the all-ones projection");
  add_common(cmp_cmd, cmp.common, "json");
  cmp_cmd->add_option("--n", cmp.n, "block size");
  cmp_cmd->add_option("--rank", cmp.rank, "projection rank (-1 = random)");
  cmp_cmd->add_option("--samples", cmp.samples, "random projections");

  try {
    std::vector<std::string> args =
        expand_config(std::vector<std::string>(argv + 1, argv + argc));
    std::reverse(args.begin(), args.end());  // CLI11 consumes reversed args
    app.parse(std::move(args));
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n\n" << app.help() << "\n";
    return 2;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  const CommonOptions* common = nullptr;
  if (*sym_cmd) common = &sym.common;
  if (*pave_cmd) common = &pave.common;
  if (*pab_cmd) common = &pab.common;
  if (*dec_cmd) common = &dec.common;
  if (*exp_cmd) common = &expd.common;
  if (*had_cmd) common = &had.common;
  if (*ide_cmd) common = &ide.common;
  if (*cmp_cmd) common = &cmp.common;
#ifdef _OPENMP
  if (common != nullptr && common->jobs > 0) {
    omp_set_num_threads(common->jobs);
  }
#endif

  try {
    std::string path;
    if (*sym_cmd) path = run_symmetry(sym);
    if (*pave_cmd) path = run_pave(pave);
    if (*pab_cmd) path = run_pave_abelian(pab);
    if (*dec_cmd) path = run_decompose(dec);
    if (*exp_cmd) path = run_expander(expd);
    if (*had_cmd) path = run_hadamard(had);
    if (*ide_cmd) path = run_ideals(ide);
    if (*cmp_cmd) path = run_compress(cmp);
    std::cout << path << "\n";
    return 0;
  } catch (const NumericError& e) {
    std::cerr << "numeric failure: " << e.what()
              << " (best estimate " << format_double(e.best_estimate) << ")\n";
    return 3;
  } catch (const SamplingError& e) {
    std::cerr << "sampling failure: " << e.what() << " (best lambda2 "
              << format_double(e.best_lambda2) << " on block "
              << e.block_dim << ")\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
