#include "gaussent/cli.hpp"

#include <cmath>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "gaussent/channels.hpp"
#include "gaussent/decomp.hpp"
#include "gaussent/errors.hpp"
#include "gaussent/measures.hpp"
#include "gaussent/oracle.hpp"
#include "gaussent/parallel.hpp"

namespace gaussent::cli {
namespace {

constexpr const char* kVersion = GAUSSENT_VERSION;

using io::Json;

// Options every subcommand understands.
struct CommonOptions {
  std::uint64_t seed = 1;
  std::string format;  // empty: the subcommand's default
  std::string out;
  unsigned threads = 0;

  void attach(CLI::App* cmd) {
    cmd->add_option("--seed", seed, "Seed recorded in the output (and used by samplers)");
    cmd->add_option("--format", format, "Output format")
        ->check(CLI::IsMember({"csv", "json-lines"}));
    cmd->add_option("--out", out, "Write records to PATH instead of standard output");
    cmd->add_option("--threads", threads, "Worker threads (0: one per core)");
  }

  RunConfig config(const std::string& command, io::Format default_format) const {
    RunConfig cfg;
    cfg.command = command;
    cfg.seed = seed;
    cfg.output_path = out;
    cfg.format = format.empty() ? default_format : io::format_from_string(format);
    return cfg;
  }
};

// A single state from the command line, or a corpus file.
struct StateInput {
  std::vector<double> values;
  std::vector<double> dense;
  std::optional<double> tmsv_r;
  std::string input_path;

  void attach(CLI::App* cmd) {
    cmd->add_option("state", values, "Standard-form parameters a b c1 c2");
    cmd->add_option("--dense", dense, "Dense covariance matrix, 16 numbers row-major")
        ->expected(16);
    cmd->add_option("--tmsv", tmsv_r, "Two-mode squeezed vacuum with squeezing R");
    cmd->add_option("--input", input_path, "Corpus file with one JSON state per line");
  }

  std::vector<StandardForm> states() const {
    const int sources = !values.empty() + !dense.empty() + tmsv_r.has_value() +
                        !input_path.empty();
    if (sources != 1)
      throw InvalidArgument(
          "give exactly one state input: a b c1 c2, --dense, --tmsv or --input");
    if (!values.empty()) {
      if (values.size() != 4)
        throw InvalidArgument("expected 4 numbers a b c1 c2, got " +
                              std::to_string(values.size()));
      return {StandardForm::make(values[0], values[1], values[2], values[3])};
    }
    if (!dense.empty()) return {to_standard_form(io::dense_from_values(dense))};
    if (tmsv_r) {
      if (!(*tmsv_r >= 0.0)) throw InvalidArgument("--tmsv needs a squeezing >= 0");
      return {tmsv(*tmsv_r)};
    }
    std::ifstream in(input_path);
    if (!in) throw InvalidArgument("cannot open input file '" + input_path + "'");
    auto states = io::read_corpus(in);
    if (states.empty()) throw DomainError("input file '" + input_path + "' has no states");
    return states;
  }
};

io::Metadata metadata(const RunConfig& cfg, io::Metadata extra = {}) {
  io::Metadata m{{"tool", "gaussent"},
                 {"version", kVersion},
                 {"command", cfg.command},
                 {"seed", std::to_string(cfg.seed)},
                 {"convention", std::string(io::kConvention)}};
  for (const auto& [name, value] : cfg.tolerances)
    m.emplace_back("tol_" + name, io::format_number(value));
  for (auto& kv : extra) m.push_back(std::move(kv));
  return m;
}

void require_positive(const RunConfig& cfg) {
  for (const auto& [name, value] : cfg.tolerances)
    if (!(value > 0.0)) throw InvalidArgument("tolerance '" + name + "' must be positive");
}

Json state_fields(const StandardForm& sf) {
  return {{"a", io::number(sf.a())},
          {"b", io::number(sf.b())},
          {"c1", io::number(sf.c1())},
          {"c2", io::number(sf.c2())}};
}

// ---------------------------------------------------------------------------

int cmd_measure(const RunConfig& cfg, const std::vector<StandardForm>& states,
                std::ostream& os) {
  io::RecordWriter writer(os, cfg.format, metadata(cfg));
  for (const auto& sf : states) writer.write(io::measure_record(sf));
  return kOk;
}

int cmd_lowerbound(const RunConfig& cfg, const std::vector<StandardForm>& states,
                   std::ostream& os) {
  io::RecordWriter writer(os, cfg.format, metadata(cfg));
  for (const auto& sf : states) writer.write(io::lower_bound_record(sf));
  return kOk;
}

struct EofOutcome {
  Json record;
  std::string budget_message;  // non-empty when the budget ran out
};

int cmd_exact_eof(const RunConfig& cfg, const EofOptions& base,
                  const std::vector<StandardForm>& states, unsigned threads, std::ostream& os,
                  std::ostream& err) {
  auto outcomes = parallel_map<EofOutcome>(
      states.size(),
      [&](std::size_t i) {
        const auto& sf = states[i];
        EofOptions opt = base;
        opt.seed = cfg.seed + i;
        EofOutcome outcome;
        EofResult result;
        try {
          result = exact_eof(sf, opt);
        } catch (const EofBudgetExceeded& e) {
          result = e.best_so_far();
          outcome.budget_message = e.what();
        }
        const auto lb = lower_bound(sf);
        Json j;
        j["state"] = state_fields(sf);
        const Json fields = io::to_json(result);
        for (const auto& [k, v] : fields.items()) j[k] = v;
        j["r_tilde_minus"] = io::number(lb.interval.r_minus);
        j["E_F_lower_bound"] = io::number(lb.eof);
        j["status"] = outcome.budget_message.empty() ? "ok" : "budget-exceeded";
        outcome.record = std::move(j);
        return outcome;
      },
      threads);

  io::RecordWriter writer(os, cfg.format,
                          metadata(cfg, {{"strategy", base.strategy == EofStrategy::Nested
                                                          ? "nested"
                                                          : "simplex3"}}));
  int code = kOk;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    writer.write(outcomes[i].record);
    if (!outcomes[i].budget_message.empty()) {
      err << "error: state " << i << ": " << outcomes[i].budget_message
          << " (best-so-far written)\n";
      code = kBudget;
    }
  }
  return code;
}

int cmd_sample(const RunConfig& cfg, int n, const SamplerConfig& sc, std::ostream& os) {
  if (n < 1) throw InvalidArgument("--n must be at least 1");
  StateSampler sampler(cfg.seed, sc);
  std::vector<StandardForm> states;
  states.reserve(n);
  for (int i = 0; i < n; ++i) states.push_back(sampler.next());

  io::RecordWriter writer(os, cfg.format, metadata(cfg, {{"sampler", sampler.describe()}}));
  for (const auto& sf : states) writer.write(io::state_to_json(sf));
  return kOk;
}

int cmd_fig2(const RunConfig& cfg, int n, const SamplerConfig& sc, const EofOptions& base,
             unsigned threads, std::ostream& os) {
  if (n < 1) throw InvalidArgument("--n must be at least 1");
  StateSampler sampler(cfg.seed, sc);
  std::vector<StandardForm> states;
  states.reserve(n);
  for (int i = 0; i < n; ++i) states.push_back(sampler.next());

  auto rows = parallel_map<Json>(
      states.size(),
      [&](std::size_t i) {
        const auto& sf = states[i];
        EofOptions opt = base;
        opt.seed = cfg.seed + i;
        const double r_tilde = lower_bound(sf).r_minus_clamped;
        const double r_o = exact_eof(sf, opt).r_o;
        Json j = state_fields(sf);
        j["x"] = io::number(std::exp(-2.0 * r_tilde));
        j["y"] = io::number(std::exp(-2.0 * r_o));
        return j;
      },
      threads);

  io::RecordWriter writer(os, cfg.format, metadata(cfg, {{"sampler", sampler.describe()}}));
  for (const auto& row : rows) writer.write(row);
  return kOk;
}

int cmd_fig3(const RunConfig& cfg, double r, int n_tau, int mode, std::ostream& os) {
  if (!(r > 0.0)) throw InvalidArgument("--r must be positive");
  if (n_tau < 2) throw InvalidArgument("--n-tau must be at least 2");
  const double chi = std::tanh(r);
  const StandardForm input = tmsv(r);

  auto rows = parallel_map<Json>(static_cast<std::size_t>(n_tau), [&](std::size_t k) {
    const double tau = static_cast<double>(k) / (n_tau - 1);
    const auto ch = ChannelSpec::lossy(tau);
    const auto det = deterministic_bound(ch, mode);
    Json j;
    j["tau"] = io::number(tau);
    j["E_F"] = io::number(eof_from_squeezing(closed_form_r_o(chi, ch)));
    j["E_N"] = io::number(log_negativity(apply_channel(input, ch, mode)));
    j["E_F_det"] = io::number(det.eof);
    j["E_N_det"] = io::number(det.log_negativity);
    return j;
  });

  io::RecordWriter writer(os, cfg.format,
                          metadata(cfg, {{"r", io::format_number(r)},
                                         {"channel", "lossy"},
                                         {"mode", std::to_string(mode)}}));
  for (const auto& row : rows) writer.write(row);
  return kOk;
}

std::vector<double> linspace(double lo, double hi, int n) {
  if (n < 1) throw InvalidArgument("grid needs at least one point");
  if (n == 1) return {lo};
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = lo + (hi - lo) * i / (n - 1);
  return v;
}

struct ChannelGrid {
  std::string kind;
  std::vector<double> chi;
  std::vector<double> param;
  int chi_points = 50;
  double chi_max = 0.99;
  int param_points = 50;
  std::optional<double> param_min;
  std::optional<double> param_max;
  int mode = 2;
};

int cmd_channel(const RunConfig& cfg, const ChannelGrid& g, std::ostream& os) {
  const ChannelKind kind = channel_kind_from_string(g.kind);
  if (!(g.chi_max >= 0.0 && g.chi_max < 1.0))
    throw InvalidArgument("--chi-max must lie in [0, 1)");

  std::vector<double> chis = g.chi.empty() ? linspace(0.0, g.chi_max, g.chi_points) : g.chi;
  std::vector<double> params = g.param;
  if (params.empty()) {
    double lo = 0.0, hi = 1.0;
    if (kind == ChannelKind::Amplifier) lo = 1.0, hi = 5.0;
    if (kind == ChannelKind::ClassicalNoise) lo = 0.0, hi = 5.0;
    params = linspace(g.param_min.value_or(lo), g.param_max.value_or(hi), g.param_points);
  }
  for (double p : params) ChannelSpec{kind, p}.validate();
  for (double c : chis)
    if (!(c >= 0.0 && c < 1.0)) throw InvalidArgument("chi must lie in [0, 1)");

  auto bounds = parallel_map<DeterministicBound>(
      params.size(), [&](std::size_t j) { return deterministic_bound({kind, params[j]}, g.mode); });

  const std::size_t total = chis.size() * params.size();
  auto rows = parallel_map<Json>(total, [&](std::size_t idx) {
    const double chi = chis[idx / params.size()];
    const std::size_t pj = idx % params.size();
    const ChannelSpec ch{kind, params[pj]};
    const double r_o = closed_form_r_o(chi, ch);
    const StandardForm out_state = apply_channel(tmsv(std::atanh(chi)), ch, g.mode);
    Json j;
    j["chi"] = io::number(chi);
    j["param"] = io::number(params[pj]);
    j["r_o"] = io::number(r_o);
    j["r_tilde_minus"] = io::number(lower_bound(out_state).r_minus_clamped);
    j["E_F"] = io::number(eof_from_squeezing(r_o));
    j["E_N"] = io::number(log_negativity(out_state));
    j["E_F_det"] = io::number(bounds[pj].eof);
    j["E_N_det"] = io::number(bounds[pj].log_negativity);
    return j;
  });

  io::RecordWriter writer(os, cfg.format,
                          metadata(cfg, {{"channel", std::string(to_string(kind))},
                                         {"mode", std::to_string(g.mode)}}));
  for (const auto& row : rows) writer.write(row);
  return kOk;
}

void emit(const RunConfig& cfg, const std::string& text, std::ostream& out) {
  if (cfg.output_path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(cfg.output_path, std::ios::binary | std::ios::trunc);
  if (!file) throw InvalidArgument("cannot open output file '" + cfg.output_path + "'");
  file << text;
  if (!file.flush()) throw InvalidArgument("failed writing '" + cfg.output_path + "'");
}

void add_sampler_options(CLI::App* cmd, SamplerConfig& sc) {
  cmd->add_option("--a-max", sc.a_max, "Upper end of the local variances")
      ->check(CLI::Range(1.0, 1e6));
  cmd->add_option("--max-attempts", sc.max_attempts, "Rejection budget per state");
  cmd->add_flag("--symmetric", sc.symmetric, "Only symmetric states (a = b)");
  cmd->add_flag("--balanced", sc.balanced, "Only balanced correlations (c2 = -c1)");
}

void add_eof_options(CLI::App* cmd, EofOptions& opt, std::string& strategy) {
  cmd->add_option("--tol", opt.tol, "Bracket width on the optimal squeezing");
  cmd->add_option("--max-iter", opt.max_outer_iterations, "Simplex iteration budget");
  cmd->add_option("--restarts", opt.random_restarts, "Extra simplex runs from random seeds");
  cmd->add_option("--strategy", strategy, "Search strategy")
      ->check(CLI::IsMember({"nested", "simplex3"}));
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Entanglement measures for two-mode Gaussian states", "gaussent"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  CommonOptions common;
  StateInput input;
  SamplerConfig sampler;
  EofOptions eof;
  std::string strategy = "nested";
  int n_states = 10;
  double fig3_r = 1.0;
  int n_tau = 101;
  int mode = 2;
  ChannelGrid grid;

  auto* measure = app.add_subcommand("measure", "Log-negativity and the closed-form E_F bound");
  auto* lowerbound = app.add_subcommand("lowerbound", "Disentangling squeezing interval and locals");
  auto* exact = app.add_subcommand("exact-eof", "Entanglement of formation by direct search");
  auto* channel = app.add_subcommand("channel", "TMSV through a one-mode channel, over a grid");
  auto* sample = app.add_subcommand("sample", "Seeded corpus of random states");
  auto* fig2 = app.add_subcommand("fig2", "Lower bound against exact E_F on random states");
  auto* fig3 = app.add_subcommand("fig3", "E_F and E_N of a TMSV through a lossy channel");

  for (auto* cmd : {measure, lowerbound, exact, channel, sample, fig2, fig3}) common.attach(cmd);
  for (auto* cmd : {measure, lowerbound, exact}) input.attach(cmd);

  add_eof_options(exact, eof, strategy);
  add_eof_options(fig2, eof, strategy);

  sample->add_option("--n", n_states, "Number of states");
  sample->add_flag("--entangled", sampler.entangled_only, "Only entangled states");
  add_sampler_options(sample, sampler);

  fig2->add_option("--n", n_states, "Number of entangled states")->default_val(1000);
  add_sampler_options(fig2, sampler);

  fig3->add_option("--r", fig3_r, "Two-mode squeezing of the input");
  fig3->add_option("--n-tau", n_tau, "Number of transmissivities in [0, 1]");
  fig3->add_option("--mode", mode, "Mode sent through the channel")
      ->check(CLI::IsMember({1, 2}));

  channel->add_option("--kind", grid.kind, "lossy, amplifier or classical-noise")
      ->required()
      ->check(CLI::IsMember({"lossy", "amplifier", "classical-noise"}));
  channel->add_option("--chi", grid.chi, "Explicit chi = tanh r values");
  channel->add_option("--chi-points", grid.chi_points, "Chi grid size over [0, chi-max]");
  channel->add_option("--chi-max", grid.chi_max, "Upper end of the chi grid");
  channel->add_option("--param", grid.param, "Explicit channel parameters");
  channel->add_option("--param-points", grid.param_points, "Parameter grid size");
  channel->add_option("--param-min", grid.param_min, "Lower end of the parameter grid");
  channel->add_option("--param-max", grid.param_max, "Upper end of the parameter grid");
  channel->add_option("--mode", grid.mode, "Mode sent through the channel")
      ->check(CLI::IsMember({1, 2}));

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(std::move(reversed));
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    std::ostringstream buffer;
    RunConfig cfg;
    int code = kOk;
    eof.strategy = strategy == "simplex3" ? EofStrategy::Simplex3 : EofStrategy::Nested;

    if (measure->parsed()) {
      cfg = common.config("measure", io::Format::JsonLines);
      code = cmd_measure(cfg, input.states(), buffer);
    } else if (lowerbound->parsed()) {
      cfg = common.config("lowerbound", io::Format::JsonLines);
      code = cmd_lowerbound(cfg, input.states(), buffer);
    } else if (exact->parsed()) {
      cfg = common.config("exact-eof", io::Format::JsonLines);
      cfg.tolerances["r_o"] = eof.tol;
      require_positive(cfg);
      code = cmd_exact_eof(cfg, eof, input.states(), common.threads, buffer, err);
    } else if (sample->parsed()) {
      cfg = common.config("sample", io::Format::JsonLines);
      code = cmd_sample(cfg, n_states, sampler, buffer);
    } else if (fig2->parsed()) {
      cfg = common.config("fig2", io::Format::Csv);
      cfg.tolerances["r_o"] = eof.tol;
      require_positive(cfg);
      sampler.entangled_only = true;
      code = cmd_fig2(cfg, n_states, sampler, eof, common.threads, buffer);
    } else if (fig3->parsed()) {
      cfg = common.config("fig3", io::Format::Csv);
      code = cmd_fig3(cfg, fig3_r, n_tau, mode, buffer);
    } else if (channel->parsed()) {
      cfg = common.config("channel", io::Format::Csv);
      code = cmd_channel(cfg, grid, buffer);
    }
    emit(cfg, buffer.str(), out);
    return code;
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const BudgetExceeded& e) {
    err << "error: " << e.what() << '\n';
    return kBudget;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kDomain;
  }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, out, err);
}

}  // namespace gaussent::cli
