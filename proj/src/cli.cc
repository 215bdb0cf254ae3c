#include "walshlab/cli.h"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <optional>
#include <ostream>

#include "walshlab/counterexample.h"
#include "walshlab/csv.h"
#include "walshlab/parallel.h"
#include "walshlab/summability.h"
#include "walshlab/verify.h"
#include "walshlab/walsh.h"

namespace walshlab {
namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  double p = 1.0;
  double alpha = 0.0;
  long long n = 0;
  long long m = -1;
  int bits = 10;
  int levels = 2;
  unsigned threads = 0;
  std::string phi;
  std::string norm = "strong";
  std::string variant = "W";
  std::string suite = "all";
  std::string in;
  std::string out;
  bool literal = false;
};

void deliver(const RunConfig& cfg, const std::string& text, std::ostream& out) {
  if (cfg.out.empty()) {
    out << text;
  } else {
    write_text_file(cfg.out, text);
  }
}

int cmd_kernel(const RunConfig& cfg, std::ostream& out) {
  if (cfg.n < 0) throw UsageError("--n must be nonnegative");
  const Resolution res(cfg.bits);
  check_cap_1d(res, Limits{});
  const auto n = static_cast<std::uint64_t>(cfg.n);
  const StepFn1 d = cfg.literal ? dirichlet_kernel(n, res) : dirichlet_closed(n, res);
  deliver(cfg, render_grid(d), out);
  return 0;
}

int cmd_transform(const RunConfig& cfg, std::ostream& out) {
  const GridFile g = read_grid(cfg.in);
  std::string text;
  if (g.kind == "stepfn") {
    text = g.dim == 1 ? render_grid(forward_transform(g.as_stepfn1()))
                      : render_grid(forward_transform(g.as_stepfn2()));
  } else {
    text = g.dim == 1 ? render_grid(inverse_transform(g.as_spectrum1()))
                      : render_grid(inverse_transform(g.as_spectrum2()));
  }
  deliver(cfg, text, out);
  return 0;
}

int cmd_partial_sum(const RunConfig& cfg, std::ostream& out) {
  const GridFile g = read_grid(cfg.in);
  if (g.dim == 1) {
    const Spectrum1 s = g.kind == "stepfn" ? forward_transform(g.as_stepfn1()) : g.as_spectrum1();
    deliver(cfg, render_grid(partial_sum(s, static_cast<Index>(cfg.n))), out);
    return 0;
  }
  const Spectrum2 s = g.kind == "stepfn" ? forward_transform(g.as_stepfn2()) : g.as_spectrum2();
  const long long m = cfg.m < 0 ? cfg.n : cfg.m;
  deliver(cfg, render_grid(rectangular_partial_sum(s, static_cast<Index>(cfg.n),
                                                   static_cast<Index>(m))),
          out);
  return 0;
}

std::vector<std::pair<Index, Index>> dyadic_scales(Index n, Index m) {
  std::vector<std::pair<Index, Index>> out;
  for (Index s = 2;; s *= 2) {
    out.emplace_back(std::min(s, n), std::min(s, m));
    if (s >= n && s >= m) break;
  }
  return out;
}

int cmd_summability(const RunConfig& cfg, std::ostream& out) {
  const Index n = cfg.n;
  const Index m = cfg.m < 0 ? cfg.n : cfg.m;
  if (n < 2 || m < 2) throw UsageError("--n and --m must be >= 2");
  const NormKind kind = norm_kind_from_string(cfg.norm);
  std::string variant = cfg.variant;
  if (!cfg.phi.empty() && variant == "W") variant = "PHI";
  std::optional<Variant> diag;
  if (variant != "W" && variant != "PHI") diag = variant_from_string(variant);
  std::optional<WeightFunction> phi;
  if (variant == "PHI") {
    phi = weight_from_name(cfg.phi.empty() ? "log4" : cfg.phi);
    if (!(cfg.p > 0.0 && cfg.p < 1.0)) throw UsageError("PHI sums need 0 < p < 1");
    if (!(cfg.alpha > 0.0)) throw UsageError("PHI sums need alpha > 0");
  } else if (!(cfg.p > 0.0 && cfg.p <= 1.0)) {
    throw UsageError("--p must lie in (0, 1]");
  }
  if (cfg.alpha < 0.0) throw UsageError("--alpha must be >= 0");

  const Martingale2 f(read_grid(cfg.in).as_stepfn2());
  const double hp = hardy_quasinorm(f, cfg.p);
  const double hp_p = std::pow(hp, cfg.p);
  std::vector<CsvRow> rows;
  auto ratio = [&](double v) { return hp_p > 0.0 ? v / hp_p : 0.0; };

  if (diag) {
    for (const auto& [N, unused] : dyadic_scales(n, n)) {
      const double v = diagonal_variant_sum(f, *diag, cfg.p, N);
      rows.push_back({std::string(to_string(*diag)), cfg.p, 0.0, static_cast<long long>(N),
                      static_cast<long long>(N), std::string("strong"), v, hp, ratio(v)});
    }
  } else {
    PartialSumNorms norms(f, cfg.p, kind);
    for (const auto& [ni, mi] : dyadic_scales(n, m)) {
      const double v = phi ? phi_cone_sum(norms, cfg.alpha, *phi, ni, mi)
                           : weisz_functional(norms, cfg.alpha, ni, mi);
      rows.push_back({variant, cfg.p, cfg.alpha, static_cast<long long>(ni),
                      static_cast<long long>(mi), std::string(to_string(kind)), v, hp,
                      ratio(v)});
    }
  }
  deliver(cfg,
          render_csv({"variant", "p", "alpha", "n", "m", "norm_kind", "value", "hp_norm", "ratio"},
                     rows),
          out);
  return 0;
}

int cmd_counterexample(const RunConfig& cfg, std::ostream& out) {
  if (!(cfg.p > 0.0 && cfg.p < 1.0)) throw UsageError("--p must lie in (0, 1)");
  if (!(cfg.alpha > 0.0)) throw UsageError("--alpha must be positive");
  if (cfg.levels < 0) throw UsageError("--levels must be nonnegative");
  const WeightFunction phi = weight_from_name(cfg.phi.empty() ? "log4" : cfg.phi);
  const Counterexample ce = build_counterexample(cfg.p, cfg.alpha, phi, cfg.levels);
  const auto table = divergence_table(ce, cfg.p, cfg.alpha, phi, cfg.levels);
  std::vector<CsvRow> rows;
  for (const auto& r : table) {
    rows.push_back({static_cast<long long>(r.k), static_cast<long long>(r.alpha_k),
                    r.lambda_k, r.v_k, r.lower_bound, r.t_k, r.g_k, r.ratio(),
                    std::string(r.regime())});
  }
  const std::string text = render_csv(
      {"k", "alpha_k", "lambda_k", "v_k", "lower_bound", "T_k", "G_k", "ratio", "regime"}, rows);
  deliver(cfg, text, out);
  if (!cfg.out.empty()) {
    bool increasing = true;
    for (std::size_t k = 1; k < table.size(); ++k) {
      increasing = increasing && table[k].t_k > table[k - 1].t_k;
    }
    out << table.size() << " blocks, T_k strictly increasing: "
        << (increasing ? "yes" : "no") << ", H_p upper bound "
        << format_number(ce.hp_upper_bound) << "\n";
  }
  return 0;
}

int cmd_verify(const RunConfig& cfg, std::ostream& out) {
  if (cfg.bits < 1 || cfg.bits > 16) throw UsageError("--bits must lie in [1, 16]");
  const auto results = run_suite(cfg.suite, cfg.bits);
  int passed = 0;
  for (const auto& r : results) {
    out << format_result(r) << "\n";
    passed += r.passed;
  }
  out << passed << "/" << results.size() << " checks passed\n";
  return passed == static_cast<int>(results.size()) ? 0 : 1;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Walsh-Fourier analysis on the dyadic group", "walsh-lab"};
  app.require_subcommand(1);
  RunConfig cfg;
  app.add_option("--threads", cfg.threads, "Worker thread cap (0 = hardware)");

  auto* kernel = app.add_subcommand("kernel", "Walsh-Dirichlet kernel D_n as a step function");
  kernel->add_option("--n", cfg.n, "Kernel index")->required();
  kernel->add_option("--bits", cfg.bits, "Resolution")->check(CLI::Range(0, 24));
  kernel->add_flag("--literal", cfg.literal, "Sum Walsh functions instead of the closed form");
  kernel->add_option("--out", cfg.out, "Output CSV (default: stdout)");

  auto* transform = app.add_subcommand("transform", "Forward (stepfn) or inverse (spectrum) transform");
  transform->add_option("--in", cfg.in, "Input grid CSV")->required();
  transform->add_option("--out", cfg.out, "Output CSV (default: stdout)");

  auto* psum = app.add_subcommand("partial-sum", "Rectangular partial sum S_{n,m}");
  psum->add_option("--in", cfg.in, "Input stepfn or spectrum CSV")->required();
  psum->add_option("--n", cfg.n, "Frequencies kept along x")->required()->check(CLI::NonNegativeNumber);
  psum->add_option("--m", cfg.m, "Frequencies kept along y (default: n)")->check(CLI::NonNegativeNumber);
  psum->add_option("--out", cfg.out, "Output CSV (default: stdout)");

  auto* summ = app.add_subcommand("summability", "Strong summability functionals of a 2D function");
  summ->add_option("--in", cfg.in, "Input 2D stepfn CSV (square grid)")->required();
  summ->add_option("--p", cfg.p, "Exponent p");
  summ->add_option("--alpha", cfg.alpha, "Cone aperture");
  summ->add_option("--n", cfg.n, "Largest x index")->required();
  summ->add_option("--m", cfg.m, "Largest y index (default: n)");
  summ->add_option("--norm", cfg.norm, "strong or weak")->check(CLI::IsMember({"strong", "weak"}));
  summ->add_option("--variant", cfg.variant, "W, PHI, W1, W2, TH or TH1")
      ->check(CLI::IsMember({"W", "PHI", "W1", "W2", "TH", "TH1"}));
  summ->add_option("--phi", cfg.phi, "Weight for PHI sums: log4, loglog or const:<c>");
  summ->add_option("--out", cfg.out, "Output CSV (default: stdout)");

  auto* ce = app.add_subcommand("counterexample", "Divergence report for the sharpness construction");
  ce->add_option("--p", cfg.p, "Exponent p in (0, 1)");
  ce->add_option("--alpha", cfg.alpha, "Cone aperture > 0");
  ce->add_option("--phi", cfg.phi, "Weight: log4, loglog or const:<c>");
  ce->add_option("--levels", cfg.levels, "Highest block index K");
  ce->add_option("--out", cfg.out, "Output CSV (default: stdout)");

  auto* verify = app.add_subcommand("verify", "Run verification suites");
  verify->add_option("--suite", cfg.suite, "kernels, transform, hardy, summability, counterexample, all")
      ->check(CLI::IsMember({"kernels", "transform", "hardy", "summability", "counterexample", "all"}));
  verify->add_option("--bits", cfg.bits, "Resolution for the kernel identities");

  for (auto* sub : {kernel, transform, psum, summ, ce, verify}) sub->fallthrough();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "walsh-lab: " << e.what() << "\n";
    return 2;
  }

  // Defaults that differ per command.
  if (ce->parsed()) {
    if (ce->count("--p") == 0) cfg.p = 0.5;
    if (ce->count("--alpha") == 0) cfg.alpha = 1.0;
  }

  set_max_threads(cfg.threads);
  try {
    if (kernel->parsed()) return cmd_kernel(cfg, out);
    if (transform->parsed()) return cmd_transform(cfg, out);
    if (psum->parsed()) return cmd_partial_sum(cfg, out);
    if (summ->parsed()) return cmd_summability(cfg, out);
    if (ce->parsed()) return cmd_counterexample(cfg, out);
    if (verify->parsed()) return cmd_verify(cfg, out);
  } catch (const std::exception& e) {
    err << "walsh-lab: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

}  // namespace walshlab
