// entspec: command-line front end. Every command writes machine-readable
// output; see `entspec <command> --help`.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "entspec/coulomb_oracle.hpp"
#include "entspec/critical.hpp"
#include "entspec/errors.hpp"
#include "entspec/haar_sampler.hpp"
#include "entspec/phase_solver.hpp"
#include "entspec/spectrum.hpp"
#include "entspec/verify.hpp"

using nlohmann::ordered_json;
using namespace entspec;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitDomain = 3;
constexpr int kExitNumerical = 4;

/// Bad flag combination or an unwritable output path.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Raised after a command has written its report but must still exit non-zero.
struct ChecksFailed : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// 17 significant digits, "." decimal point regardless of locale.
std::string num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, r.ptr);
}

std::string iso_timestamp() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

ordered_json nullable(double v) { return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr); }

struct Manifest {
  std::string command;
  ordered_json parameters = ordered_json::object();
  std::optional<std::uint64_t> seed;

  ordered_json to_json() const {
    ordered_json j;
    j["command"] = command;
    j["parameters"] = parameters;
    j["tool_version"] = ENTSPEC_VERSION;
    j["seed"] = seed ? ordered_json(*seed) : ordered_json(nullptr);
    j["timestamp"] = iso_timestamp();
    return j;
  }
};

class Csv {
 public:
  explicit Csv(std::vector<std::string> header) : header_(std::move(header)) {}

  void row(const std::vector<std::string>& cells) { rows_.push_back(cells); }

  std::string str() const {
    std::string s;
    auto line = [&s](const std::vector<std::string>& cells) {
      for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) s += ',';
        s += cells[i];
      }
      s += '\n';
    };
    line(header_);
    for (const auto& r : rows_) line(r);
    return s;
  }

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot open " + path + " for writing");
  f << content;
  if (!f) throw UsageError("write to " + path + " failed");
}

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

// Output routing shared by all data commands. With --out PREFIX the command
// writes PREFIX.csv, PREFIX.json and PREFIX.manifest.json (kept apart so the
// data files are byte-identical across runs); otherwise --format picks what
// goes to standard output.
struct Output {
  std::string prefix;
  std::string format;  // empty: the command's default

  void emit(const Manifest& m, const std::vector<std::pair<std::string, Csv>>& tables, const ordered_json& meta) const {
    if (!prefix.empty()) {
      for (const auto& [suffix, csv] : tables) write_file(prefix + suffix + ".csv", csv.str());
      write_file(prefix + ".json", dump(meta));
      write_file(prefix + ".manifest.json", dump(m.to_json()));
      return;
    }
    if (format == "json") {
      ordered_json j = meta;
      j["manifest"] = m.to_json();
      std::cout << dump(j);
    } else {
      // the first table is the primary one
      std::cout << tables.front().second.str();
    }
  }
};

void add_output_options(CLI::App* cmd, Output& out) {
  cmd->add_option("--out", out.prefix, "Write PREFIX.csv, PREFIX.json and PREFIX.manifest.json");
  cmd->add_option("--format", out.format, "Standard-output format without --out (default csv; json for classify)")
      ->check(CLI::IsMember({"csv", "json"}));
}

ordered_json solution_json(const SpectrumSolution& s) {
  ordered_json j;
  j["phase"] = std::string(to_string(s.phase));
  j["boundary"] = s.boundary;
  j["q"] = s.point.q;
  j["u"] = s.point.u;
  j["N"] = s.point.N ? ordered_json(*s.point.N) : ordered_json(nullptr);
  j["a"] = s.support.a;
  j["b"] = s.support.b;
  j["alpha"] = s.support.alpha;
  j["delta"] = s.support.delta;
  j["A"] = s.A;
  j["B"] = s.B;
  j["beta"] = s.beta;
  j["xi"] = s.xi;
  if (s.mu) j["mu"] = *s.mu;
  return j;
}

// ---------------------------------------------------------------------------

struct PointArgs {
  double q = 1.0;
  double u = 0.0;
  std::int64_t N = 0;

  PhasePoint point() const { return {q, u, N > 0 ? std::optional<std::int64_t>(N) : std::nullopt}; }
};

void add_point_options(CLI::App* cmd, PointArgs& p) {
  cmd->add_option("--q", p.q, "Renyi order q")->required();
  cmd->add_option("--u", p.u, "Entropy deficit u = ln N - S_q")->required();
  cmd->add_option("--N", p.N, "Dimension N (required beyond the evaporation line)");
}

void run_classify(const PointArgs& p, const Output& out) {
  const PhasePoint pt = p.point();
  const Phase phase = classify(pt);
  const RegionTags tags = region_tags(pt);
  ordered_json j;
  j["q"] = pt.q;
  j["u"] = pt.u;
  j["phase"] = std::string(to_string(phase));
  j["boundary"] = phase == Phase::Typical && solve_typical(pt).boundary;
  j["u_C"] = u_C(pt.q);
  j["u_E"] = u_E(pt.q);
  j["regions"] = {{"EIES", tags.eies}, {"EISS", tags.eiss}};
  Csv csv({"q", "u", "phase"});
  csv.row({num(pt.q), num(pt.u), std::string(to_string(phase))});
  Manifest m{"classify", {{"q", p.q}, {"u", p.u}, {"N", p.N}}, std::nullopt};
  Output o = out;
  if (o.format.empty()) o.format = "json";  // a single record reads better as JSON
  o.emit(m, {{"", csv}}, j);
}

void run_spectrum(const PointArgs& p, int grid_points, const Output& out) {
  const SpectrumSolution s = solve(p.point());
  const Density d(s);
  const DensityGrid g = d.export_grid(grid_points);
  Csv csv({"lambda", "density"});
  for (std::size_t k = 0; k < g.lambdas.size(); ++k) csv.row({num(g.lambdas[k]), num(g.densities[k])});
  ordered_json meta = solution_json(s);
  meta["grid_points"] = grid_points;
  meta["left_divergent"] = g.left_divergent;
  meta["grid_mass"] = g.mass;
  Manifest m{"spectrum", {{"q", p.q}, {"u", p.u}, {"N", p.N}, {"grid_points", grid_points}}, std::nullopt};
  ordered_json full = meta;
  if (out.prefix.empty() && out.format == "json") {
    full["lambda"] = g.lambdas;
    full["density"] = g.densities;
  }
  out.emit(m, {{"", csv}}, out.prefix.empty() ? full : meta);
}

// Linear grid in q plus every integer inside the range, so the closed-form
// orders always appear as rows.
std::vector<double> critical_grid(double q_min, double q_max, int steps) {
  std::vector<double> qs;
  for (int k = 0; k < steps; ++k) qs.push_back(q_min + (q_max - q_min) * k / (steps - 1));
  qs.back() = q_max;
  for (double n = std::ceil(q_min); n <= q_max; n += 1.0) qs.push_back(n);
  std::sort(qs.begin(), qs.end());
  qs.erase(std::unique(qs.begin(), qs.end()), qs.end());
  return qs;
}

void run_critical(double q_min, double q_max, int steps, const Output& out) {
  if (!(q_min > 0.5 && q_min < q_max)) throw DomainError("critical: need 1/2 < q_min < q_max");
  if (steps < 2) throw DomainError("critical: steps must be >= 2");
  Csv csv({"q", "u_C", "u_E", "delta_C", "A_C", "B_C"});
  ordered_json rows = ordered_json::array();
  for (double q : critical_grid(q_min, q_max, steps)) {
    const CriticalValues v = critical_values(q);
    csv.row({num(v.q), num(v.u_C), num(v.u_E), num(v.delta_C), num(v.A_C), num(v.B_C)});
    rows.push_back({{"q", v.q}, {"u_C", v.u_C}, {"u_E", v.u_E}, {"delta_C", v.delta_C}, {"A_C", v.A_C}, {"B_C", v.B_C}});
  }
  const UcMinimum mn = u_C_minimum();
  ordered_json summary;
  summary["u_C_min"] = {{"q", mn.q_star}, {"u", mn.u_star}};
  summary["asymptotes"] = {{"u_C", kConcentrationAsymptote}, {"u_E", kEvaporationAsymptote}};
  Manifest m{"critical", {{"q_min", q_min}, {"q_max", q_max}, {"steps", steps}}, std::nullopt};
  ordered_json full = summary;
  if (out.prefix.empty()) full["rows"] = rows;
  out.emit(m, {{"", csv}}, full);
}

void run_verify_cmd(const std::string& level, std::uint64_t seed) {
  const VerifyReport r = run_verify(level == "full" ? VerifyLevel::Full : VerifyLevel::Fast, seed);
  ordered_json j;
  j["level"] = level;
  j["seed"] = seed;
  j["passed"] = r.all_passed();
  ordered_json checks = ordered_json::array();
  std::vector<std::string> failures;
  for (const auto& c : r.checks) {
    ordered_json e;
    e["name"] = c.name;
    e["passed"] = c.passed;
    e["residual"] = nullable(c.residual);
    e["tolerance"] = c.tolerance;
    if (!c.detail.empty()) e["detail"] = c.detail;
    checks.push_back(e);
    if (!c.passed) failures.push_back(c.name);
  }
  j["checks"] = checks;
  j["manifest"] = Manifest{"verify", {{"level", level}}, seed}.to_json();
  std::cout << dump(j);
  if (!failures.empty()) {
    std::string list;
    for (const auto& f : failures) list += (list.empty() ? "" : ", ") + f;
    throw ChecksFailed(std::to_string(failures.size()) + " check(s) failed: " + list);
  }
}

// ---------------------------------------------------------------------------

struct OracleArgs {
  std::int64_t N = 64;
  double q = 2.0;
  std::optional<double> u;
  std::optional<double> beta;
  std::string method = "newton";
  std::uint64_t seed = 0;
  int sweeps = 2000;
  int burn_in = -1;
  int thin = -1;
  std::string checkpoint;
  std::string resume;
};

ordered_json comparison_json(const Comparison& c) {
  return {{"wasserstein1", c.wasserstein1}, {"ks", c.ks}, {"u_gap", c.u_gap}};
}

// Analytic counterpart at (q, u); null when u lies outside the phase diagram
// accessible at this N.
std::optional<SpectrumSolution> analytic_at(double q, double u, std::int64_t N) {
  try {
    return solve({q, u, N});
  } catch (const Error&) {
    return std::nullopt;
  }
}

ordered_json checkpoint_json(const OracleConfig& cfg, const ChainResult& r) {
  ordered_json j;
  j["format"] = "entspec-chain-checkpoint";
  j["version"] = 1;
  j["N"] = cfg.N;
  j["q"] = cfg.q;
  j["beta"] = *cfg.target_beta;
  j["seed"] = cfg.seed;
  j["rng_counter"] = r.rng_counter;
  j["step"] = r.step;
  j["scaled"] = r.final_scaled;
  return j;
}

void load_checkpoint(const std::string& path, OracleConfig& cfg, ChainOptions& opt) {
  std::ifstream f(path);
  if (!f) throw UsageError("cannot read checkpoint " + path);
  ordered_json j;
  try {
    j = ordered_json::parse(f);
    if (j.at("format") != "entspec-chain-checkpoint" || j.at("version") != 1) {
      throw UsageError(path + " is not a version 1 chain checkpoint");
    }
    cfg.N = j.at("N").get<std::int64_t>();
    cfg.q = j.at("q").get<double>();
    cfg.target_beta = j.at("beta").get<double>();
    cfg.seed = j.at("seed").get<std::uint64_t>();
    opt.rng_counter = j.at("rng_counter").get<std::uint64_t>();
    opt.step = j.at("step").get<double>();
    opt.initial_scaled = j.at("scaled").get<std::vector<double>>();
  } catch (const ordered_json::exception& e) {
    throw UsageError("malformed checkpoint " + path + ": " + e.what());
  }
  // a resumed chain is already in equilibrium
  opt.burn_in_sweeps = 0;
}

void run_oracle(const OracleArgs& a, const Output& out) {
  OracleConfig cfg;
  cfg.N = a.N;
  cfg.q = a.q;
  cfg.seed = a.seed;
  Manifest m{"oracle", {{"N", a.N}, {"q", a.q}, {"method", a.method}}, a.seed};
  if (a.u) m.parameters["u"] = *a.u;
  if (a.beta) m.parameters["beta"] = *a.beta;

  if (a.method == "newton") {
    if (!a.u || a.beta) throw UsageError("oracle --method newton needs --u (and no --beta)");
    if (!a.checkpoint.empty() || !a.resume.empty()) throw UsageError("checkpoints apply to --method metropolis only");
    cfg.target_u = *a.u;
    const CoulombGasState s = minimize_potential(cfg);
    Csv csv({"j", "lambda", "scaled"});
    const auto x = s.scaled();
    for (std::size_t k = 0; k < x.size(); ++k) csv.row({std::to_string(k), num(s.eigenvalues[k]), num(x[k])});
    ordered_json meta;
    meta["method"] = "newton";
    meta["N"] = cfg.N;
    meta["q"] = cfg.q;
    meta["u"] = *a.u;
    meta["beta"] = s.beta;
    meta["xi"] = s.xi;
    meta["energy"] = s.energy;
    meta["residual"] = s.residual;
    meta["iterations"] = s.iterations;
    meta["restarts"] = s.restarts;
    meta["wall_contact"] = s.wall_contact;
    if (const auto sol = analytic_at(cfg.q, *a.u, cfg.N)) {
      meta["analytic"] = solution_json(*sol);
      meta["comparison"] = comparison_json(compare(s, *sol));
      if (sol->mu) meta["largest_scaled_vs_N_mu"] = {{"oracle", x.back()}, {"analytic", static_cast<double>(cfg.N) * *sol->mu}};
    }
    out.emit(m, {{"", csv}}, meta);
    return;
  }

  // metropolis
  if (a.u) throw UsageError("oracle --method metropolis needs --beta (not --u)");
  ChainOptions opt;
  opt.burn_in_sweeps = a.burn_in;
  opt.thin_sweeps = a.thin;
  if (!a.resume.empty()) {
    load_checkpoint(a.resume, cfg, opt);
    m.parameters["resume"] = a.resume;
    m.seed = cfg.seed;
  } else {
    if (!a.beta) throw UsageError("oracle --method metropolis needs --beta");
    cfg.target_beta = *a.beta;
  }
  m.parameters["sweeps"] = a.sweeps;
  const ChainResult r = metropolis_sample(cfg, a.sweeps, opt);
  if (!a.checkpoint.empty()) write_file(a.checkpoint, dump(checkpoint_json(cfg, r)));

  Csv csv({"state", "j", "scaled"});
  std::vector<double> pooled;
  double mean_u = 0.0;
  for (std::size_t i = 0; i < r.states.size(); ++i) {
    const auto x = r.states[i].scaled();
    for (std::size_t k = 0; k < x.size(); ++k) csv.row({std::to_string(i), std::to_string(k), num(x[k])});
    pooled.insert(pooled.end(), x.begin(), x.end());
    mean_u += r.states[i].energy / static_cast<double>(r.states.size());
  }
  ordered_json meta;
  meta["method"] = "metropolis";
  meta["N"] = cfg.N;
  meta["q"] = cfg.q;
  meta["beta"] = *cfg.target_beta;
  meta["states"] = r.states.size();
  meta["mean_u"] = mean_u;
  meta["acceptance"] = r.acceptance;
  meta["step"] = r.step;
  meta["warning"] = r.warning;
  meta["rng_counter"] = r.rng_counter;
  // analytic point at the chain's own u; the sea is compared without the largest eigenvalue
  if (const auto sol = analytic_at(cfg.q, mean_u, cfg.N); sol && !r.states.empty()) {
    meta["analytic"] = solution_json(*sol);
    std::vector<double> sea;
    for (const auto& st : r.states) {
      auto x = st.scaled();
      if (sol->phase == Phase::Separable) x.pop_back();
      sea.insert(sea.end(), x.begin(), x.end());
    }
    meta["comparison"] = comparison_json(compare_samples(sea, mean_u, *sol));
  }
  if (r.warning) std::cerr << dump({{"warning", "acceptance " + num(r.acceptance) + " outside [0.1, 0.9]"}});
  out.emit(m, {{"", csv}}, meta);
}

// ---------------------------------------------------------------------------

void run_haar(std::int64_t N, int samples, const std::vector<double>& qs, std::uint64_t seed, const Output& out) {
  if (samples < 1) throw DomainError("haar: samples must be >= 1");
  for (double q : qs) {
    if (!(q > 0.0)) throw DomainError("haar: every q must be positive");
  }
  const auto draws = sample_spectra(N, samples, seed);
  Csv pooled_csv({"sample", "j", "scaled"});
  Csv u_csv({"sample", "q", "u"});
  std::vector<double> pooled;
  std::map<double, std::vector<double>> us;
  for (std::size_t i = 0; i < draws.size(); ++i) {
    const auto& x = draws[i].scaled_eigenvalues;
    for (std::size_t k = 0; k < x.size(); ++k) pooled_csv.row({std::to_string(i), std::to_string(k), num(x[k])});
    pooled.insert(pooled.end(), x.begin(), x.end());
    for (double q : qs) {
      const double u = u_estimate(draws[i], q);
      u_csv.row({std::to_string(i), num(q), num(u)});
      us[q].push_back(u);
    }
  }
  ordered_json mean_u = ordered_json::object();
  ordered_json std_u = ordered_json::object();
  ordered_json u_E_ref = ordered_json::object();
  for (const auto& [q, v] : us) {
    double m = 0.0;
    for (double x : v) m += x / static_cast<double>(v.size());
    double ss = 0.0;
    for (double x : v) ss += (x - m) * (x - m);
    const double sd = v.size() > 1 ? std::sqrt(ss / static_cast<double>(v.size() - 1)) : 0.0;
    mean_u[num(q)] = m;
    std_u[num(q)] = sd;
    u_E_ref[num(q)] = u_E(q);
  }
  ordered_json meta;
  meta["N"] = N;
  meta["samples"] = samples;
  meta["seed"] = seed;
  meta["mean_u"] = mean_u;
  meta["std_u"] = std_u;
  meta["u_E"] = u_E_ref;
  meta["ks_vs_MP"] = ks_distance(std::span<const double>(pooled), marchenko_pastur_cdf);
  meta["wasserstein1_vs_MP"] = wasserstein1(pooled, CdfTable::marchenko_pastur());
  Manifest m{"haar", {{"N", N}, {"samples", samples}, {"q", qs}}, seed};
  out.emit(m, {{"", pooled_csv}, {"_u", u_csv}}, meta);
}

int report_error(const std::string& type, const std::string& message, int code) {
  ordered_json j;
  j["error"] = {{"type", type}, {"message", message}};
  j["exit_code"] = code;
  std::cerr << j.dump() << "\n";
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Entanglement spectra of random pure states at fixed Renyi entropy"};
  app.set_version_flag("--version", std::string(ENTSPEC_VERSION));
  app.require_subcommand(1);

  PointArgs point;
  Output out;
  int grid_points = 256;

  auto* classify_cmd = app.add_subcommand("classify", "Phase and region tags of a point (q, u[, N])");
  add_point_options(classify_cmd, point);
  add_output_options(classify_cmd, out);

  auto* spectrum_cmd = app.add_subcommand("spectrum", "Analytic density sigma(lambda) on a grid");
  add_point_options(spectrum_cmd, point);
  spectrum_cmd->add_option("--grid-points", grid_points, "Grid size (>= 16)")->capture_default_str();
  add_output_options(spectrum_cmd, out);

  double q_min = 0.6;
  double q_max = 20.0;
  int steps = 200;
  auto* critical_cmd = app.add_subcommand("critical", "Tabulate the critical lines u_C(q) and u_E(q)");
  critical_cmd->add_option("--q-min", q_min, "Smallest q (> 1/2)")->capture_default_str();
  critical_cmd->add_option("--q-max", q_max, "Largest q")->capture_default_str();
  critical_cmd->add_option("--steps", steps, "Grid intervals; integer q in range are added")->capture_default_str();
  add_output_options(critical_cmd, out);

  std::string level = "fast";
  std::uint64_t seed = 0;
  auto* verify_cmd = app.add_subcommand("verify", "Run the invariant suite and report per-check residuals");
  verify_cmd->add_option("--level", level, "fast: analytic checks; full: adds oracle, Metropolis and Haar")
      ->check(CLI::IsMember({"fast", "full"}))
      ->capture_default_str();
  verify_cmd->add_option("--seed", seed, "Seed for the stochastic checks")->capture_default_str();

  OracleArgs oracle;
  auto* oracle_cmd = app.add_subcommand("oracle", "Finite-N Coulomb gas: Newton saddle point or Metropolis chain");
  oracle_cmd->add_option("--N", oracle.N, "Number of eigenvalues")->capture_default_str();
  oracle_cmd->add_option("--q", oracle.q, "Renyi order q")->capture_default_str();
  oracle_cmd->add_option("--u", oracle.u, "Target u (newton)");
  oracle_cmd->add_option("--beta", oracle.beta, "Target beta (metropolis)");
  oracle_cmd->add_option("--method", oracle.method)
      ->check(CLI::IsMember({"newton", "metropolis"}))
      ->capture_default_str();
  oracle_cmd->add_option("--seed", oracle.seed, "Chain seed")->capture_default_str();
  oracle_cmd->add_option("--sweeps", oracle.sweeps, "Production sweeps (metropolis)")->capture_default_str();
  oracle_cmd->add_option("--burn-in", oracle.burn_in, "Burn-in sweeps, default 10 N (metropolis)");
  oracle_cmd->add_option("--thin", oracle.thin, "Sweeps between kept states, default N (metropolis)");
  oracle_cmd->add_option("--checkpoint", oracle.checkpoint, "Write the chain's resume point to this file");
  oracle_cmd->add_option("--resume", oracle.resume,
                         "Continue a chain from a checkpoint; N, q, beta and seed are taken from the file");
  add_output_options(oracle_cmd, out);

  std::int64_t haar_n = 256;
  int samples = 100;
  std::vector<double> haar_q{1.0, 2.0};
  auto* haar_cmd = app.add_subcommand("haar", "Spectra of Haar-random balanced bipartite states");
  haar_cmd->add_option("--N", haar_n, "Subsystem dimension")->capture_default_str();
  haar_cmd->add_option("--samples", samples, "Number of independent states")->capture_default_str();
  haar_cmd->add_option("--q", haar_q, "Orders for u estimates")->delimiter(',')->capture_default_str();
  haar_cmd->add_option("--seed", seed, "Base seed; draw k uses its own counter stream")->capture_default_str();
  add_output_options(haar_cmd, out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report_error("usage", e.what(), kExitUsage);
  }

  try {
    if (*classify_cmd) run_classify(point, out);
    if (*spectrum_cmd) run_spectrum(point, grid_points, out);
    if (*critical_cmd) run_critical(q_min, q_max, steps, out);
    if (*verify_cmd) run_verify_cmd(level, seed);
    if (*oracle_cmd) run_oracle(oracle, out);
    if (*haar_cmd) run_haar(haar_n, samples, haar_q, seed, out);
  } catch (const UsageError& e) {
    return report_error("usage", e.what(), kExitUsage);
  } catch (const DomainError& e) {
    return report_error("domain", e.what(), kExitDomain);
  } catch (const PhaseError& e) {
    return report_error("phase", e.what(), kExitDomain);
  } catch (const AccuracyError& e) {
    return report_error("accuracy", e.what(), kExitNumerical);
  } catch (const NumericalError& e) {
    return report_error("numerical", e.what(), kExitNumerical);
  } catch (const ChecksFailed& e) {
    return report_error("verification", e.what(), kExitNumerical);
  } catch (const std::exception& e) {
    return report_error("internal", e.what(), kExitNumerical);
  }
  return 0;
}
