#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "conered/dimred.hpp"
#include "conered/eval.hpp"
#include "conered/hottopixx.hpp"
#include "conered/matrix_io.hpp"
#include "conered/redic.hpp"
#include "conered/reduce.hpp"
#include "conered/synth.hpp"

namespace fs = std::filesystem;
using namespace conered;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;
constexpr int kExitNumerical = 4;
constexpr int kExitInfeasible = 5;

int exit_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_argument:
      return kExitUsage;
    case ErrorCode::io:
    case ErrorCode::parse:
      return kExitIo;
    case ErrorCode::zero_column:
    case ErrorCode::degenerate_vector:
    case ErrorCode::max_iterations:
    case ErrorCode::iteration_limit:
    case ErrorCode::numerical_breakdown:
    case ErrorCode::degenerate_diagonal:
      return kExitNumerical;
    case ErrorCode::dimension_mismatch:
    case ErrorCode::rank_too_large:
    case ErrorCode::bad_rank:
    case ErrorCode::insufficient_columns:
    case ErrorCode::duplicate_match:
    case ErrorCode::zero_noise:
    case ErrorCode::too_many_columns:
    case ErrorCode::k_smaller_than_r:
      return kExitInfeasible;
  }
  return kExitNumerical;
}

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

// Timings vary run to run, so they go to stderr and stdout stays stable.
void report_time(const std::string& label, double seconds) {
  std::cerr << label << "_seconds=" << format_double(seconds) << "\n";
}

HsiMatrix load_hsi(const std::string& path) { return HsiMatrix(load_matrix(path)); }

void store(const Matrix& M, const std::string& path, const std::string& format) {
  if (format.empty()) {
    store_matrix(M, path);
  } else {
    store_matrix(M, path, parse_matrix_format(format));
  }
}

std::string join(const std::vector<double>& values) {
  std::string out;
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (k) out += ',';
    out += format_double(values[k]);
  }
  return out;
}

DistanceMetric parse_metric(const std::string& name) { return name == "l1" ? DistanceMetric::l1 : DistanceMetric::mrsa; }

struct Common {
  unsigned threads = 1;
  std::string format;
};

// ---- reduce ---------------------------------------------------------------

struct ReduceArgs {
  std::string input;
  std::string out;
  Index p = 30;
  Index r = 0;
  double eps_feas = 1e-8;
  double tol_nnls = 1e-10;
  std::uint64_t seed = 0;
};

int run_reduce(const ReduceArgs& a, const Common& c) {
  const HsiMatrix A = load_hsi(a.input);
  Stopwatch clock;
  const Matrix data = a.r > 0 ? reduce_dimension(A.data(), a.r) : A.data();
  const DrsResult res = drs(data, a.p, a.seed, ReduceOptions{a.eps_feas, a.tol_nnls}, c.threads);
  const double elapsed = clock.seconds();
  store_indices(res.kept.values(), a.out);

  KeyValues kv;
  kv["k"] = std::to_string(res.kept.size());
  kv["groups"] = std::to_string(res.partition.size());
  kv["intermediate"] = std::to_string(res.intermediate.size());
  kv["reconstruction_error"] = format_double(reconstruction_error(data, res.kept, a.tol_nnls));
  std::cout << format_key_values(kv);
  report_time("reduce", elapsed);
  return 0;
}

// ---- extract --------------------------------------------------------------

struct ExtractArgs {
  std::string input;
  std::string out;
  std::string report;
  std::string lp_export;
  RedicConfig cfg;
};

int run_extract(ExtractArgs a, const Common& c) {
  const HsiMatrix A = load_hsi(a.input);
  Stopwatch clock;
  const EndmemberEstimate est = redic(A, a.cfg, c.threads);
  const double elapsed = clock.seconds();
  store(est.W_hat, a.out, c.format);

  KeyValues kv;
  kv["seed"] = std::to_string(a.cfg.seed);
  kv["r"] = std::to_string(a.cfg.r);
  kv["lambda"] = std::to_string(a.cfg.lambda);
  kv["tau"] = std::to_string(a.cfg.tau);
  kv["p"] = std::to_string(a.cfg.p);
  kv["k"] = std::to_string(est.reduced.size());
  for (std::size_t j = 0; j < est.per_rep.size(); ++j) {
    const std::string key = "rep" + std::to_string(j + 1) + ".";
    kv[key + "indices"] = format_index_list(est.selected_indices[j]);
    kv[key + "augmented"] = format_index_list(est.trace[j].augmented.values());
    kv[key + "objective"] = format_double(est.trace[j].lp.objective);
  }
  const std::string report = a.report.empty() ? a.out + ".report" : a.report;
  store_key_values(kv, report);
  std::cout << format_key_values(kv);

  if (!a.lp_export.empty()) {
    // Rebuild the first repetition's model; every step is deterministic.
    const Matrix Ap = reduce_dimension(A.data(), a.cfg.r);
    const IndexSet S = est.reduced.set_union(est.trace[0].augmented);
    const ModelH model(select_columns(Ap, S), a.cfg.r);
    std::ofstream out(a.lp_export);
    if (!out) throw Error(ErrorCode::io, "cannot open " + a.lp_export + " for writing");
    model.write_lp(out);
    if (!out) throw Error(ErrorCode::io, "failed writing " + a.lp_export);
  }
  report_time("extract", elapsed);
  return 0;
}

// ---- eval -----------------------------------------------------------------

struct EvalArgs {
  std::string ref;
  std::string est;
  std::string data;
  std::string indices;
  std::string metric = "mrsa";
};

int run_eval(const EvalArgs& a) {
  const Matrix W_ref = load_matrix(a.ref);
  const DistanceMetric metric = parse_metric(a.metric);
  KeyValues kv;
  kv["metric"] = a.metric;
  Matrix W_est;
  if (!a.est.empty()) {
    W_est = load_matrix(a.est);
  } else {
    // A column subset of any size: report the dictionary distance, and the
    // matched score as well when the subset has exactly r columns.
    const Matrix A = load_matrix(a.data);
    const IndexSet K = IndexSet::from_unsorted(load_indices(a.indices));
    K.check_bounds(A.cols());
    kv["k"] = std::to_string(K.size());
    kv["distance"] = format_double(dict_distance(A, K, W_ref, metric));
    W_est = select_columns(A, K);
  }
  if (a.est.empty() && W_est.cols() != W_ref.cols()) {
    std::cout << format_key_values(kv);
    return 0;
  }
  const MatchScore s = match_columns(W_ref, W_est, metric);
  kv["score"] = format_double(s.score);
  kv["per_col"] = join(s.per_col);
  kv["sigma"] = format_index_list(s.sigma);
  std::cout << format_key_values(kv);
  return 0;
}

// ---- synth ----------------------------------------------------------------

struct SynthArgs {
  std::string out;
  std::string sidecar;
  std::string w_out;
  std::string h_out;
  std::string v_out;
  std::string from;
  std::string ident;
  Index d = 20;
  Index n = 200;
  Index r = 3;
  std::uint64_t seed = 0;
  double noise_norm = 1.0;
  std::optional<double> nu;
  std::optional<double> nu_over_rho;
};

int run_synth(const SynthArgs& a, const Common& c) {
  const bool derived = !a.from.empty();
  const SynthInstance inst = derived ? derive_whv(load_hsi(a.from), load_matrix(a.ident), c.threads)
                                     : random_separable(a.d, a.n, a.r, a.seed, a.noise_norm);
  KeyValues kv;
  double nu = derived ? inst.nu : 0.0;
  if (a.nu) nu = *a.nu;
  if (a.nu_over_rho) {
    const double rw = rho(inst.W);
    kv["rho"] = format_double(rw);
    nu = *a.nu_over_rho * rw;
  }
  store(assemble(inst, nu).data(), a.out, c.format);
  if (!a.w_out.empty()) store(inst.W, a.w_out, c.format);
  if (!a.h_out.empty()) store(inst.H, a.h_out, c.format);
  if (!a.v_out.empty()) store(inst.V, a.v_out, c.format);

  kv["mode"] = derived ? "derived" : "random";
  kv["d"] = std::to_string(inst.bands());
  kv["n"] = std::to_string(inst.pixels());
  kv["r"] = std::to_string(inst.rank());
  kv["nu"] = format_double(nu);
  kv["noise_norm"] = format_double(matrix_l1_norm(inst.V));
  kv["pure_indices"] = format_index_list(inst.pure_indices);
  if (!derived) kv["seed"] = std::to_string(a.seed);
  store_key_values(kv, a.sidecar.empty() ? a.out + ".meta" : a.sidecar);
  std::cout << format_key_values(kv);
  return 0;
}

// ---- rho ------------------------------------------------------------------

int run_rho(const std::string& path) {
  std::cout << "rho=" << format_double(rho(load_matrix(path))) << "\n";
  return 0;
}

// ---- sweep ----------------------------------------------------------------

struct SweepArgs {
  Index d = 20;
  Index n = 200;
  Index r = 3;
  std::uint64_t seed = 0;
  Index p = 30;
  double eps_feas = 1e-8;
  std::string out;
  double nu_max = 1.5;
  double nu_step = 0.1;
  double nu = 0.5;
  std::vector<double> percents{0.0, 1.0, 2.0};
  Index draws = 20;
  Index tau = 1;
  bool score = false;
};

void emit_csv(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::io, "cannot open " + path + " for writing");
  out << text;
  if (!out) throw Error(ErrorCode::io, "failed writing " + path);
}

int run_sweep_noise(const SweepArgs& a, const Common& c) {
  const SynthInstance inst = random_separable(a.d, a.n, a.r, a.seed);
  const ReduceOptions opts{a.eps_feas, 1e-10};
  std::ostringstream csv;
  csv << "nu,k,reconstruction_error,l1_distance,mrsa_distance\n";
  Stopwatch clock;
  const auto steps = static_cast<int>(std::floor(a.nu_max / a.nu_step + 1e-9));
  for (int s = 0; s <= steps; ++s) {
    const double nu = s * a.nu_step;
    const HsiMatrix A = assemble(inst, nu);
    const Matrix Ap = reduce_dimension(A.data(), a.r);
    const IndexSet K = drs(Ap, a.p, a.seed, opts, c.threads).kept;
    csv << format_double(nu) << ',' << K.size() << ',' << format_double(reconstruction_error(Ap, K)) << ','
        << format_double(dict_distance(A.data(), K, inst.W, DistanceMetric::l1)) << ','
        << format_double(dict_distance(A.data(), K, inst.W, DistanceMetric::mrsa)) << '\n';
  }
  emit_csv(csv.str(), a.out);
  report_time("sweep", clock.seconds());
  return 0;
}

int run_sweep_lambda(const SweepArgs& a, const Common& c) {
  const SynthInstance inst = random_separable(a.d, a.n, a.r, a.seed);
  const HsiMatrix A = assemble(inst, a.nu);
  const Matrix Ap = reduce_dimension(A.data(), a.r);
  const IndexSet K = drs(Ap, a.p, a.seed, ReduceOptions{a.eps_feas, 1e-10}, c.threads).kept;

  std::ostringstream csv;
  csv << "percent,lambda,k,mean_l1_distance,mean_mrsa_distance";
  if (a.score) csv << ",mrsa_score";
  csv << '\n';
  Stopwatch clock;
  for (double pct : a.percents) {
    const auto lambda = static_cast<Index>(std::llround(pct * static_cast<double>(a.n) / 100.0));
    double l1 = 0.0;
    double ms = 0.0;
    for (Index t = 0; t < a.draws; ++t) {
      const IndexSet S = K.set_union(draw_augmentation(K, a.n, lambda, a.seed, static_cast<std::uint64_t>(t) + 1));
      l1 += dict_distance(A.data(), S, inst.W, DistanceMetric::l1);
      ms += dict_distance(A.data(), S, inst.W, DistanceMetric::mrsa);
    }
    csv << format_double(pct) << ',' << lambda << ',' << K.size() << ',' << format_double(l1 / a.draws) << ','
        << format_double(ms / a.draws);
    if (a.score) {
      RedicConfig cfg;
      cfg.r = a.r;
      cfg.lambda = lambda;
      cfg.tau = a.tau;
      cfg.p = a.p;
      cfg.seed = a.seed;
      cfg.tolerances.eps_feas = a.eps_feas;
      csv << ',' << format_double(mrsa_score(inst.W, redic(A, cfg, c.threads).W_hat).score);
    }
    csv << '\n';
  }
  emit_csv(csv.str(), a.out);
  report_time("sweep", clock.seconds());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Conical-hull data reduction and endmember extraction for hyperspectral matrices"};
  app.require_subcommand(1);
  Common common;
  app.add_option("--threads", common.threads, "Worker threads for independent subproblems")
      ->envname("CONERED_THREADS")
      ->check(CLI::PositiveNumber);
  app.add_option("--format", common.format, "Output matrix format (csv or hsm1); default from extension")
      ->check(CLI::IsMember({"csv", "hsm1"}));

  ReduceArgs ra;
  auto* reduce = app.add_subcommand("reduce", "Reduce the columns of a matrix to a conical generating set");
  reduce->add_option("input", ra.input, "Matrix file (d x n)")->required();
  reduce->add_option("--out", ra.out, "Index file to write (1-based)")->required();
  reduce->add_option("--p", ra.p, "k-means groups")->check(CLI::PositiveNumber);
  reduce->add_option("--r", ra.r, "Project onto the top-r singular subspace first (0 = no projection)")
      ->check(CLI::NonNegativeNumber);
  reduce->add_option("--eps-feas", ra.eps_feas, "Cone-membership residual threshold")->check(CLI::PositiveNumber);
  reduce->add_option("--tol-nnls", ra.tol_nnls, "NNLS optimality tolerance")->check(CLI::PositiveNumber);
  reduce->add_option("--seed", ra.seed, "k-means seed");

  ExtractArgs ea;
  auto* extract = app.add_subcommand("extract", "Estimate r endmember signatures");
  extract->add_option("input", ea.input, "Matrix file (d x n)")->required();
  extract->add_option("--out", ea.out, "Endmember matrix to write (d x r)")->required();
  extract->add_option("--r", ea.cfg.r, "Number of endmembers")->required()->check(CLI::PositiveNumber);
  extract->add_option("--lambda", ea.cfg.lambda, "Columns added per repetition")->check(CLI::NonNegativeNumber);
  extract->add_option("--tau", ea.cfg.tau, "Repetitions")->check(CLI::PositiveNumber);
  extract->add_option("--p", ea.cfg.p, "k-means groups")->check(CLI::PositiveNumber);
  extract->add_option("--seed", ea.cfg.seed, "Seed for k-means and augmentation draws");
  extract->add_option("--eps-feas", ea.cfg.tolerances.eps_feas, "Cone-membership residual threshold")
      ->check(CLI::PositiveNumber);
  extract->add_option("--report", ea.report, "Report file (default: <out>.report)");
  extract->add_option("--lp-export", ea.lp_export, "Write the first repetition's LP in CPLEX LP format");

  EvalArgs va;
  auto* eval = app.add_subcommand("eval", "Score estimated signatures against reference signatures");
  eval->add_option("--ref", va.ref, "Reference matrix (d x r)")->required();
  auto* est_opt = eval->add_option("--est", va.est, "Estimated matrix (d x r)");
  auto* data_opt = eval->add_option("--data", va.data, "Data matrix whose columns are selected by --indices");
  auto* idx_opt = eval->add_option("--indices", va.indices, "Index file (1-based)");
  est_opt->excludes(data_opt)->excludes(idx_opt);
  data_opt->needs(idx_opt);
  idx_opt->needs(data_opt);
  eval->add_option("--metric", va.metric, "mrsa (x100) or l1")->check(CLI::IsMember({"mrsa", "l1"}));

  SynthArgs sa;
  auto* synth = app.add_subcommand("synth", "Generate a nearly separable instance");
  synth->add_option("--out", sa.out, "Assembled matrix A")->required();
  synth->add_option("--sidecar", sa.sidecar, "Metadata file (default: <out>.meta)");
  synth->add_option("--w-out", sa.w_out, "Write W");
  synth->add_option("--h-out", sa.h_out, "Write H");
  synth->add_option("--v-out", sa.v_out, "Write the noise direction V");
  auto* from_opt = synth->add_option("--from", sa.from, "Derive W, H, V from this data matrix");
  auto* ident_opt = synth->add_option("--ident", sa.ident, "Identified signatures for --from (d x r)");
  from_opt->needs(ident_opt);
  ident_opt->needs(from_opt);
  synth->add_option("--d", sa.d, "Bands")->check(CLI::PositiveNumber);
  synth->add_option("--n", sa.n, "Pixels")->check(CLI::PositiveNumber);
  synth->add_option("--r", sa.r, "Endmembers")->check(CLI::PositiveNumber);
  synth->add_option("--seed", sa.seed, "Generator seed");
  synth->add_option("--noise-norm", sa.noise_norm, "||V||_1 of the random noise direction")
      ->check(CLI::NonNegativeNumber);
  auto* nu_opt = synth->add_option("--nu", sa.nu, "Noise level (default 0; ||V||_1 with --from)")
                     ->check(CLI::NonNegativeNumber);
  synth->add_option("--nu-over-rho", sa.nu_over_rho, "Set nu to this multiple of rho(W)")
      ->check(CLI::NonNegativeNumber)
      ->excludes(nu_opt);

  std::string rho_path;
  auto* rho_cmd = app.add_subcommand("rho", "Print rho(W) = min ||W x||_1 over ||x||_1 = 1");
  rho_cmd->add_option("matrix", rho_path, "Matrix file")->required();

  SweepArgs wa;
  auto* sweep = app.add_subcommand("sweep", "CSV sweeps on a random instance");
  sweep->require_subcommand(1);
  for (auto* sub : {sweep->add_subcommand("noise", "Reduction quality against noise level"),
                    sweep->add_subcommand("lambda", "Dictionary distance against augmentation size")}) {
    sub->add_option("--d", wa.d, "Bands")->check(CLI::PositiveNumber);
    sub->add_option("--n", wa.n, "Pixels")->check(CLI::PositiveNumber);
    sub->add_option("--r", wa.r, "Endmembers")->check(CLI::PositiveNumber);
    sub->add_option("--seed", wa.seed, "Seed");
    sub->add_option("--p", wa.p, "k-means groups")->check(CLI::PositiveNumber);
    sub->add_option("--eps-feas", wa.eps_feas, "Cone-membership residual threshold")->check(CLI::PositiveNumber);
    sub->add_option("--out", wa.out, "CSV file (default: stdout)");
  }
  auto* sweep_noise = sweep->get_subcommand("noise");
  sweep_noise->add_option("--nu-max", wa.nu_max, "Largest noise level")->check(CLI::NonNegativeNumber);
  sweep_noise->add_option("--nu-step", wa.nu_step, "Noise level increment")->check(CLI::PositiveNumber);
  auto* sweep_lambda = sweep->get_subcommand("lambda");
  sweep_lambda->add_option("--nu", wa.nu, "Noise level")->check(CLI::NonNegativeNumber);
  sweep_lambda->add_option("--percent", wa.percents, "Augmentation sizes as percentages of n")
      ->delimiter(',')
      ->check(CLI::NonNegativeNumber);
  sweep_lambda->add_option("--draws", wa.draws, "Augmentation draws per size")->check(CLI::PositiveNumber);
  sweep_lambda->add_flag("--score", wa.score, "Also run the full extraction and report its MRSA score");
  sweep_lambda->add_option("--tau", wa.tau, "Repetitions for --score")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }
  if (*eval && va.est.empty() && va.data.empty()) {
    std::cerr << "eval: give --est or --data with --indices\n";
    return kExitUsage;
  }

  try {
    if (*reduce) return run_reduce(ra, common);
    if (*extract) return run_extract(ea, common);
    if (*eval) return run_eval(va);
    if (*synth) return run_synth(sa, common);
    if (*rho_cmd) return run_rho(rho_path);
    if (*sweep_noise) return run_sweep_noise(wa, common);
    if (*sweep_lambda) return run_sweep_lambda(wa, common);
  } catch (const Error& e) {
    std::cerr << "error (" << to_string(e.code()) << "): " << e.what() << "\n";
    return exit_code(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitUsage;
}
