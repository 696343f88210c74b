#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "ddmag/decay.hpp"
#include "ddmag/dynamics.hpp"
#include "ddmag/io.hpp"
#include "ddmag/response.hpp"
#include "ddmag/sensitivity.hpp"
#include "ddmag/sequences.hpp"

namespace {

using json = nlohmann::json;
using std::numbers::pi;
using namespace ddmag;

constexpr const char* kVersion = "1.0.0";

struct CommonOpts {
  std::string out = "-";
  std::string format = "csv";
  std::uint64_t seed = 12345;
  std::string units = "hz";  // frequencies on the command line
  int threads = 0;
};

void add_common(CLI::App* cmd, CommonOpts& c) {
  cmd->add_option("--out", c.out, "Output path ('-' for stdout)");
  cmd->add_option("--format", c.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--seed", c.seed, "Random seed");
  cmd->add_option("--units", c.units, "Unit of command-line frequencies")
      ->check(CLI::IsMember({"hz", "rads"}));
  cmd->add_option("--threads", c.threads, "Worker threads (0 = auto)");
}

double to_rads(double freq, const CommonOpts& c) {
  return c.units == "hz" ? 2.0 * pi * freq : freq;
}

// scheme parameters shared by most subcommands
struct SeqOpts {
  std::string scheme = "re";
  int k = 1;
  int n = 1;
  double omega = 0.0;   // CLI units
  double period = 0.0;  // seconds, PDD only
};

void add_seq(CLI::App* cmd, SeqOpts& s) {
  cmd->add_option("--scheme", s.scheme, "Sequence scheme")
      ->check(CLI::IsMember({"re", "pdd", "constant", "spinlock"}));
  cmd->add_option("--k", s.k, "Echo index (re only)")->check(CLI::PositiveNumber);
  cmd->add_option("--n", s.n, "Cycle count")->check(CLI::PositiveNumber);
  cmd->add_option("--omega", s.omega, "Rabi frequency (CLI units)");
  cmd->add_option("--period", s.period, "Cycle period in seconds (pdd)");
}

SequenceSpec make_seq(const SeqOpts& s, const CommonOpts& c) {
  const Scheme scheme = scheme_from_name(s.scheme);
  if (scheme == Scheme::PDD) {
    if (s.period <= 0) throw std::invalid_argument("pdd requires --period > 0");
    return SequenceSpec::pdd(s.period, s.n);
  }
  if (s.omega <= 0) throw std::invalid_argument(s.scheme + " requires --omega > 0");
  const double omega = to_rads(s.omega, c);
  switch (scheme) {
    case Scheme::RotaryEcho: return SequenceSpec::rotary_echo(omega, s.k, s.n);
    case Scheme::Constant: return SequenceSpec::constant_drive(omega, s.n);
    case Scheme::SpinLock: return SequenceSpec::spin_lock(omega, s.n);
    default: throw std::invalid_argument("bad scheme");
  }
}

json base_config(const std::string& command, const CommonOpts& c) {
  // the worker-thread count never affects results and is deliberately not
  // echoed, so outputs stay byte-identical across thread counts
  return json{{"version", kVersion},
              {"command", command},
              {"format", c.format},
              {"seed", c.seed},
              {"units", c.units}};
}

void emit(const CommonOpts& c, const json& config, const CsvTable& table) {
  std::ostringstream body;
  if (c.format == "csv") {
    CsvTable t = table;
    t.comments.insert(t.comments.begin(), "config = " + config.dump());
    t.write(body);
  } else {
    json rows = json::array();
    for (const auto& row : table.rows) {
      json r = json::object();
      for (std::size_t i = 0; i < table.columns.size(); ++i) {
        r[table.columns[i]] = row[i];
      }
      rows.push_back(r);
    }
    json doc{{"config", config}, {"rows", rows}};
    body << doc.dump(2) << "\n";
  }
  if (c.out == "-") {
    std::cout << body.str();
  } else {
    std::ofstream f(c.out, std::ios::binary);
    if (!f) throw std::invalid_argument("cannot open output file '" + c.out + "'");
    f << body.str();
  }
}

struct GridSpec {
  double lo = 0.05, hi = 4.0;
  std::size_t count = 2000;
};

GridSpec parse_grid(const std::string& text) {
  GridSpec g;
  char c1 = 0, c2 = 0;
  std::istringstream is(text);
  if (!(is >> g.lo >> c1 >> g.hi >> c2 >> g.count) || c1 != ':' || c2 != ':' ||
      g.count < 2 || g.hi <= g.lo || g.lo <= 0) {
    throw std::invalid_argument("bad --grid, expected lo:hi:count with 0 < lo < hi");
  }
  return g;
}

int cmd_weight(const CommonOpts& c, const SeqOpts& s, const std::string& grid_text) {
  const SequenceSpec seq = make_seq(s, c);
  const GridSpec g = parse_grid(grid_text);
  // the grid is relative to the scheme's base frequency
  const double base = (seq.scheme == Scheme::PDD || seq.scheme == Scheme::RotaryEcho)
                          ? 2.0 * pi * (seq.scheme == Scheme::RotaryEcho ? 2 * seq.k : 1) /
                                seq.period
                          : seq.omega;
  const WeightProfile profile =
      weight_profile(seq, g.lo * base, g.hi * base, g.count);

  json config = base_config("weight", c);
  config["sequence"] = seq;
  config["grid"] = {{"lo", g.lo}, {"hi", g.hi}, {"count", g.count}};
  CsvTable t;
  t.columns = {"omega_rad_s", "omega_over_Omega", "W"};
  for (std::size_t i = 0; i < profile.omega.size(); ++i) {
    t.rows.push_back({profile.omega[i], profile.omega[i] / base, profile.w[i]});
  }
  emit(c, config, t);
  return 0;
}

int cmd_passbands(const CommonOpts& c, const SeqOpts& s, int p_max) {
  SeqOpts ropts = s;
  ropts.scheme = "re";
  const SequenceSpec seq = make_seq(ropts, c);
  const auto bands = passbands(seq.k, seq.period, seq.n, p_max);
  json config = base_config("passbands", c);
  config["sequence"] = seq;
  config["p_max"] = p_max;
  CsvTable t;
  t.columns = {"p", "center_rad_s", "center_hz", "height"};
  for (const PassBand& b : bands) {
    t.rows.push_back({double(b.p), b.center, b.center / (2.0 * pi), b.height});
  }
  emit(c, config, t);
  return 0;
}

int cmd_decay(const CommonOpts& c, const SeqOpts& s, double sigma, double tau_c,
              int n_max, std::size_t mc_traj, int spp) {
  if (sigma < 0 || tau_c <= 0) {
    throw std::invalid_argument("decay requires --sigma >= 0 and --tauc > 0");
  }
  if (mc_traj > 1000000) {
    throw std::invalid_argument("--mc-traj capped at 1e6");
  }
  SeqOpts one = s;
  one.n = 1;
  const SequenceSpec base = make_seq(one, c);
  const Scheme scheme = base.scheme;
  if (scheme == Scheme::Constant || scheme == Scheme::SpinLock) {
    if (mc_traj == 0) {
      throw std::invalid_argument(
          "no analytic envelope for this scheme; pass --mc-traj");
    }
  }

  json config = base_config("decay", c);
  config["sequence"] = base;
  config["sigma"] = sigma;
  config["tau_c"] = tau_c;
  config["n_max"] = n_max;
  config["mc_trajectories"] = mc_traj;
  config["steps_per_period"] = spp;

  CsvTable t;
  t.columns = {"t_s", "envelope"};
  if (mc_traj > 0) {
    t.columns.push_back("mc_envelope");
    t.columns.push_back("mc_stderr");
  }
  OUNoise noise{sigma, tau_c, c.seed};
  bool cancellation = false;
  for (int n = 1; n <= n_max; ++n) {
    SequenceSpec seq = base;
    seq.n = n;
    const double time = seq.total_time();
    double envelope = 1.0;
    if (sigma > 0) {
      switch (scheme) {
        case Scheme::RotaryEcho: {
          const CumulantCoeffs cc = cumulant_coeffs(sigma, tau_c, seq.k, n, seq.period);
          cancellation = cancellation || cc.cancellation;
          envelope = envelope_re(cc);
          break;
        }
        case Scheme::PDD: {
          const double rate = gamma2_long_tc(Scheme::PDD, sigma, tau_c, 1);
          const double x = rate * time;
          envelope = std::exp(-x * x * x / (double(n) * n));
          break;
        }
        default:
          envelope = std::nan("");
          break;
      }
    }
    std::vector<double> row{time, envelope};
    if (mc_traj > 0) {
      const TrajectoryResult r = mc_signal(seq, noise, std::max<std::size_t>(mc_traj, 100),
                                           default_readout(scheme), spp, c.threads);
      row.push_back(2.0 * r.signal - 1.0);
      row.push_back(2.0 * r.std_error);
    }
    t.rows.push_back(std::move(row));
  }
  emit(c, config, t);
  if (cancellation) {
    std::cerr << json{{"error", "catastrophic cancellation in cumulant coefficients"}}
                     .dump()
              << "\n";
    return 3;
  }
  return 0;
}

int cmd_sensitivity(const CommonOpts& c, const SeqOpts& s, const std::string& axis_name,
                    double lo, double hi, std::size_t count, double t2, double sigma,
                    double tau_c, double readout_c, double gamma_g,
                    std::optional<double> phi, std::size_t mc_traj, int harmonic) {
  ScanRequest req;
  req.axis = scan_axis_from_name(axis_name);
  req.seq = make_seq(s, c);
  req.phi = phi;
  req.sensor.readout_c = readout_c;
  req.sensor.gamma_g = gamma_g;
  req.harmonic_m = harmonic;
  if (t2 > 0) {
    req.decay.kind = DecayModel::Kind::T2;
    req.decay.t2 = t2;
  } else if (sigma > 0) {
    req.decay.kind = DecayModel::Kind::OU;
    req.decay.noise = OUNoise{sigma, tau_c, c.seed};
    req.decay.mc_trajectories = std::max<std::size_t>(mc_traj, 100);
  }

  switch (req.axis) {
    case ScanAxis::Time:
      if (lo <= 0 || hi <= lo) {
        throw std::invalid_argument("time scan requires --lo and --hi in seconds");
      }
      break;
    case ScanAxis::Frequency:
      if (lo <= 0 || hi <= lo) {
        throw std::invalid_argument("frequency scan requires --lo and --hi");
      }
      lo = to_rads(lo, c);
      hi = to_rads(hi, c);
      break;
    case ScanAxis::K:
    case ScanAxis::N:
      if (lo <= 0) lo = 1;
      if (hi <= lo) hi = 8;
      break;
  }
  req.lo = lo;
  req.hi = hi;
  req.count = count;

  const std::vector<SensitivityResult> results = scan(req);

  json config = base_config("sensitivity", c);
  config["sequence"] = req.seq;
  config["axis"] = axis_name;
  config["lo"] = lo;
  config["hi"] = hi;
  config["count"] = count;
  config["t2"] = t2;
  config["sigma"] = sigma;
  config["tau_c"] = tau_c;
  config["readout_c"] = readout_c;
  config["gamma_g"] = gamma_g;
  config["phi"] = phi.has_value() ? json(*phi) : json(nullptr);
  config["harmonic"] = harmonic;

  CsvTable t;
  t.columns = {"axis_value", "eta_ideal_T_sqrtHz", "Phi", "W",
               "D",          "eta_eff_T_sqrtHz",   "matched_freq_Hz"};
  for (const SensitivityResult& r : results) {
    double axis_value = r.axis_value;
    if (req.axis == ScanAxis::Frequency) axis_value = r.axis_value / (2.0 * pi);
    t.rows.push_back({axis_value, r.eta_ideal, r.phase_factor, r.weight, r.envelope,
                      r.eta_effective, r.matched_freq / (2.0 * pi)});
  }
  emit(c, config, t);
  return 0;
}

int cmd_montecarlo(const CommonOpts& c, const SeqOpts& s, double sigma, double tau_c,
                   std::size_t n_traj, int spp) {
  if (sigma < 0 || tau_c <= 0) {
    throw std::invalid_argument("montecarlo requires --sigma >= 0 and --tauc > 0");
  }
  if (n_traj > 1000000) throw std::invalid_argument("--traj capped at 1e6");
  const SequenceSpec seq = make_seq(s, c);
  OUNoise noise{sigma, tau_c, c.seed};
  const TrajectoryResult r = mc_signal(seq, noise, std::max<std::size_t>(n_traj, 100),
                                       default_readout(seq.scheme), spp, c.threads);
  json config = base_config("montecarlo", c);
  config["sequence"] = seq;
  config["sigma"] = sigma;
  config["tau_c"] = tau_c;
  config["trajectories"] = n_traj;
  config["steps_per_period"] = spp;
  CsvTable t;
  t.columns = {"signal", "std_error", "n_traj"};
  t.rows.push_back({r.signal, r.std_error, double(r.n_traj)});
  emit(c, config, t);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"AC magnetometry toolkit: weight functions, decay envelopes and "
               "sensitivities of driven two-level sensors"};
  app.require_subcommand(1);

  CommonOpts common;
  SeqOpts seq;

  auto* weight = app.add_subcommand("weight", "Tabulate the weight function W(omega)");
  std::string grid = "0.05:4.0:2000";
  add_common(weight, common);
  add_seq(weight, seq);
  weight->add_option("--grid", grid, "lo:hi:count relative to the base frequency");

  auto* bands = app.add_subcommand("passbands", "List rotary-echo pass bands");
  int p_max = 5;
  add_common(bands, common);
  add_seq(bands, seq);
  bands->add_option("--pmax", p_max, "Highest band index");

  auto* decay = app.add_subcommand("decay", "Decay envelope vs total time");
  double sigma = 0.0, tau_c = 1.0;
  int n_max = 10, spp = 1024;
  std::size_t mc_traj = 0;
  add_common(decay, common);
  add_seq(decay, seq);
  decay->add_option("--sigma", sigma, "OU noise dispersion, rad/s");
  decay->add_option("--tauc", tau_c, "OU correlation time, s");
  decay->add_option("--nmax", n_max, "Cycle counts 1..nmax")->check(CLI::PositiveNumber);
  decay->add_option("--mc-traj", mc_traj, "Monte Carlo trajectories (0 = analytic only)");
  decay->add_option("--spp", spp, "Integration steps per period");

  auto* sens = app.add_subcommand("sensitivity", "Sensitivity scan");
  std::string axis = "time";
  double lo = 0.0, hi = 0.0, t2 = 0.0, readout_c = 0.03, gamma_g = 1.760859e11;
  double phi_value = 0.0;
  std::size_t count = 100, sens_traj = 2000;
  int harmonic = 0;
  add_common(sens, common);
  add_seq(sens, seq);
  sens->add_option("--axis", axis, "Scan axis")
      ->check(CLI::IsMember({"time", "frequency", "k", "n"}));
  sens->add_option("--lo", lo, "Axis lower bound");
  sens->add_option("--hi", hi, "Axis upper bound");
  sens->add_option("--count", count, "Grid points")->check(CLI::PositiveNumber);
  sens->add_option("--t2", t2, "Coherence time for the cubic envelope model, s");
  sens->add_option("--sigma", sigma, "OU noise dispersion, rad/s");
  sens->add_option("--tauc", tau_c, "OU correlation time, s");
  sens->add_option("--c", readout_c, "Readout-efficiency parameter C");
  sens->add_option("--gamma", gamma_g, "Gyromagnetic ratio, rad/s/T");
  auto* phi_opt = sens->add_option("--phi", phi_value, "Field phase, rad (omit: unknown)");
  sens->add_option("--mc-traj", sens_traj, "Trajectories for Monte Carlo envelopes");
  sens->add_option("--harmonic", harmonic, "Rotary-echo band harmonic (0 = optimal)");

  auto* mc = app.add_subcommand("montecarlo", "Ensemble signal under OU dephasing");
  std::size_t n_traj = 10000;
  add_common(mc, common);
  add_seq(mc, seq);
  mc->add_option("--sigma", sigma, "OU noise dispersion, rad/s");
  mc->add_option("--tauc", tau_c, "OU correlation time, s");
  mc->add_option("--traj", n_traj, "Trajectory count");
  mc->add_option("--spp", spp, "Integration steps per period");

  try {
    app.parse(argc, argv);
    if (weight->parsed()) return cmd_weight(common, seq, grid);
    if (bands->parsed()) return cmd_passbands(common, seq, p_max);
    if (decay->parsed())
      return cmd_decay(common, seq, sigma, tau_c, n_max, mc_traj, spp);
    if (sens->parsed()) {
      std::optional<double> phi;
      if (phi_opt->count() > 0) phi = phi_value;
      return cmd_sensitivity(common, seq, axis, lo, hi, count, t2, sigma, tau_c,
                             readout_c, gamma_g, phi, sens_traj, harmonic);
    }
    if (mc->parsed())
      return cmd_montecarlo(common, seq, sigma, tau_c, n_traj, spp);
    throw std::invalid_argument("no subcommand given");
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    std::cerr << nlohmann::json{{"error", e.what()}}.dump() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << nlohmann::json{{"error", e.what()}}.dump() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << nlohmann::json{{"error", e.what()}}.dump() << "\n";
    return 3;
  }
}
