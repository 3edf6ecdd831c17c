// eclim: energy-constrained norms, energy-limitedness certificates and the bounds built on them.

#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "eclim/eclim.hpp"
#include "eclim/io.hpp"
#include "eclim/selftest.hpp"

namespace {

using eclim::io::Json;
using eclim::io::format_double;

constexpr int kOk = 0;
constexpr int kViolation = 1;
constexpr int kInputError = 2;

void print_error(const std::string& code, const std::string& message) {
  Json j;
  j["code"] = code;
  j["message"] = message;
  std::cerr << j.dump() << "\n";
}

Json cert_json(const eclim::AffineCertificate& c) {
  return {{"lambda", c.slope}, {"e0", c.offset}, {"residual", c.residual}, {"verified", c.verified}};
}

Json stability_json(const eclim::StabilityCertificate& c) {
  return {{"omega", c.omega}, {"e0", c.e0}, {"residual", c.residual}, {"verified", c.verified}};
}

// Writes to --out when given, stdout otherwise.
void emit(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw eclim::Error(eclim::ErrorCode::invalid_input, "cannot write '" + path + "'");
  out << text;
}

std::vector<int> parse_int_list(const std::string& s, const std::string& what) {
  std::vector<int> out;
  for (double x : eclim::io::parse_list(s, what)) {
    if (x < 1 || x != static_cast<int>(x)) {
      throw eclim::Error(eclim::ErrorCode::invalid_input, what + ": expected positive integers");
    }
    out.push_back(static_cast<int>(x));
  }
  return out;
}

eclim::RealVector parse_vec3(const std::string& s, const std::string& what) {
  const auto v = eclim::io::parse_list(s, what);
  if (v.size() != 3) throw eclim::Error(eclim::ErrorCode::invalid_input, what + ": expected 3 coefficients");
  return eclim::RealVector::Map(v.data(), 3);
}

struct Options {
  std::string op, ref, ref_in, ref_out, channel, minus, gen, gen1, gen2, state, out;
  std::string times, grid, e0_grid, n_list, rule, scenario = "left", cx, cy;
  double energy = 0.0, tmax = 0.6, time = 1.0, omega = 1.0, coupling = 0.3, nu = 0.5, e0 = 2.0;
  int restarts = 64, ancilla = -1, cutoff = 40, qubits = 7, steps = 60, states = 20;
  std::uint64_t seed = 0;
  bool seesaw = false, primal = false, symmetric = false, first_order = false;
};

int run_eco_norm(const Options& o) {
  const eclim::Matrix a = eclim::io::read_operator(o.op);
  const auto g = eclim::io::read_reference(o.ref);
  eclim::require_same_dim(a.cols(), g.dim(), "eco-norm: operator vs reference");
  const auto r = eclim::eco_norm(a, g, o.energy);
  Json j{{"value", r.value}, {"lambda", r.cert.slope}, {"e0", r.cert.offset}};
  if (o.primal) {
    const auto p = eclim::eco_norm_primal(a, g, o.energy, o.restarts, o.seed);
    j["primal"] = p.value;
  }
  std::cout << j.dump() << "\n";
  return kOk;
}

int run_ecd_norm(const Options& o) {
  const auto t = eclim::io::read_channel(o.channel);
  const auto g = eclim::io::read_reference(o.ref);
  eclim::require_same_dim(t.dim_in(), g.dim(), "ecd-norm: channel input vs reference");
  if (!o.seesaw && o.minus.empty()) {
    const auto r = eclim::ecd_norm_cp(t, g, o.energy);
    std::cout << Json{{"value", r.value}, {"kind", "exact_dual"}, {"lambda", r.cert.slope}, {"e0", r.cert.offset}}.dump()
              << "\n";
    return kOk;
  }
  auto s = eclim::CpDifference::of(t);
  if (!o.minus.empty()) s = s - eclim::CpDifference::of(eclim::io::read_channel(o.minus));
  eclim::SeesawOptions opt;
  opt.ancilla_dim = o.ancilla;
  opt.restarts = o.restarts;
  opt.seed = o.seed;
  const auto r = eclim::ecd_norm_seesaw(s, g, o.energy, opt);
  std::cout << Json{{"value", r.value}, {"kind", "seesaw_lower"}, {"restarts_used", r.restarts_used},
                    {"ancilla", o.ancilla < 0 ? g.dim() : o.ancilla}}
                   .dump()
            << "\n";
  return kOk;
}

int run_output_energy(const Options& o) {
  const auto t = eclim::io::read_channel(o.channel);
  const auto gin = eclim::io::read_reference(o.ref_in);
  const auto gout = eclim::io::read_reference(o.ref_out);
  eclim::require_same_dim(t.dim_in(), gin.dim(), "output-energy: channel input vs reference");
  eclim::require_same_dim(t.dim_out(), gout.dim(), "output-energy: channel output vs reference");
  if (!o.grid.empty()) {
    const auto curve = eclim::energy_curve(t, gin, gout, eclim::io::parse_list(o.grid, "--grid"));
    Json certs = Json::array();
    for (const auto& c : curve.certificates) certs.push_back(cert_json(c));
    std::cout << Json{{"grid", curve.grid}, {"values", curve.values}, {"certificates", certs},
                      {"concave_nondecreasing", curve.concave_nondecreasing()}}
                     .dump()
              << "\n";
    return kOk;
  }
  const auto r = eclim::max_output_energy(t, gin, gout, o.energy);
  Json j = cert_json(r.cert);
  j["value"] = r.value;
  std::cout << j.dump() << "\n";
  return kOk;
}

std::vector<double> e0_grid(const Options& o, const eclim::ReferenceHamiltonian& g) {
  return o.e0_grid.empty() ? eclim::default_e0_grid(g) : eclim::io::parse_list(o.e0_grid, "--e0-grid");
}

int run_certify(const Options& o) {
  const auto gen = eclim::io::read_generator(o.gen);
  const auto g = eclim::io::read_reference(o.ref);
  eclim::require_same_dim(gen.dim(), g.dim(), "certify: generator vs reference");
  Json certs = Json::array();
  for (const auto& c : eclim::stability_curve(gen, g, e0_grid(o, g), o.symmetric)) certs.push_back(stability_json(c));
  std::cout << Json{{"formally_conservative", gen.formally_conservative()}, {"certificates", certs}}.dump() << "\n";
  return kOk;
}

int run_simulate(const Options& o) {
  const auto gen = eclim::io::read_generator(o.gen);
  const auto g = eclim::io::read_reference(o.ref);
  const auto rho = eclim::io::read_state(o.state);
  eclim::require_same_dim(gen.dim(), g.dim(), "simulate: generator vs reference");
  eclim::require_same_dim(rho.dim(), g.dim(), "simulate: state vs reference");
  const auto times = eclim::io::parse_list(o.times, "--times");
  const eclim::Semigroup semigroup(gen);
  const auto certs = eclim::stability_curve(gen, g, e0_grid(o, g));
  // The bound at each time is the best over the certificate curve.
  std::vector<eclim::EnergyBoundReport> reports;
  for (const auto& c : certs) reports.push_back(eclim::verify_energy_bound(semigroup, g, c, rho, times));
  Json rows = Json::array();
  bool holds = true;
  for (std::size_t i = 0; i < times.size(); ++i) {
    std::size_t best = 0;
    for (std::size_t k = 1; k < reports.size(); ++k)
      if (reports[k].rows[i].bound < reports[best].rows[i].bound) best = k;
    const auto& row = reports[best].rows[i];
    const double slack = 1e-7 * (1.0 + eclim::energy(g, rho) + certs[best].e0);
    const double trace = semigroup.evolve(rho.matrix(), times[i]).trace().real();
    rows.push_back({{"time", row.time}, {"energy", row.energy}, {"trace", trace}, {"bound", row.bound},
                    {"omega", certs[best].omega}, {"e0", certs[best].e0}, {"margin", row.margin}});
    holds = holds && row.margin >= -slack;
  }
  std::cout << Json{{"rows", rows}, {"holds", holds}}.dump() << "\n";
  return holds ? kOk : kViolation;
}

int run_gaussian(const Options& o) {
  const auto gen = eclim::io::gaussian_generator_from_json(eclim::io::read_json_file(o.gen), o.gen);
  const auto s = eclim::io::gaussian_state_from_json(eclim::io::read_json_file(o.state), o.state);
  eclim::require_same_dim(gen.modes(), s.modes(), "gaussian: generator modes vs state modes");
  const auto times = eclim::io::parse_list(o.times, "--times");
  const auto stab = eclim::gaussian::gaussian_stability(gen);
  const double e = eclim::gaussian::state_energy(s);
  std::ostringstream csv;
  csv << "time,energy,bound\n";
  bool holds = true;
  for (double t : times) {
    if (t < 0.0) throw eclim::Error(eclim::ErrorCode::invalid_input, "--times: negative time");
    const double et = eclim::gaussian::state_energy(eclim::gaussian::evolve_gaussian(gen, s, t));
    const double bound = stab.energy_bound(e, t);
    holds = holds && et <= bound + 1e-7;
    csv << format_double(t) << ',' << format_double(et) << ',' << format_double(bound) << '\n';
  }
  emit(o.out, csv.str());
  return holds ? kOk : kViolation;
}

int run_birth(const Options& o) {
  const auto rates = eclim::models::BirthRates::parse(o.rule);
  if (o.cutoff < 2) throw eclim::Error(eclim::ErrorCode::invalid_input, "--cutoff must be >= 2");
  const auto n = static_cast<std::size_t>(o.cutoff);
  const auto tau = eclim::models::birth_tau(rates, n);
  const auto cert = eclim::models::birth_epsilons(rates, n);
  const eclim::Semigroup semigroup(eclim::models::birth_generator(rates, n));
  const auto rho = eclim::DensityState::pure(eclim::Vector::Unit(static_cast<Eigen::Index>(n + 1), 0));
  Json traces = Json::array();
  for (double t : eclim::io::parse_list(o.times.empty() ? "0.5,1,2,3" : o.times, "--times")) {
    if (t < 0.0) throw eclim::Error(eclim::ErrorCode::invalid_input, "--times: negative time");
    traces.push_back({{"time", t}, {"trace", semigroup.evolve(rho, t).matrix().trace().real()}});
  }
  std::cout << Json{{"rule", o.rule},
                    {"cutoff", o.cutoff},
                    {"tau_partial", tau.tau_partial},
                    {"verdict", eclim::models::to_string(tau.verdict)},
                    {"traces", traces},
                    {"certificate",
                     {{"omega", cert.omega}, {"e0", cert.e0}, {"min_residual", cert.min_residual}, {"tail_ratio", cert.tail_ratio}}}}
                   .dump()
            << "\n";
  return kOk;
}

int run_rabi(const Options& o) {
  if (o.cutoff < 2) throw eclim::Error(eclim::ErrorCode::invalid_input, "--cutoff must be >= 2");
  const auto model = eclim::models::rabi_hamiltonian(o.omega, o.coupling, o.nu, static_cast<std::size_t>(o.cutoff));
  const auto c = eclim::models::rabi_certificate(model, o.e0);
  Json j = stability_json(c);
  j["cutoff"] = o.cutoff;
  std::cout << j.dump() << "\n";
  return kOk;
}

int run_speedlimit(const Options& o) {
  if (o.qubits < 1 || o.qubits > 10) throw eclim::Error(eclim::ErrorCode::invalid_input, "--qubits must be in 1..10");
  if (o.steps < 1 || !(o.tmax > 0.0)) throw eclim::Error(eclim::ErrorCode::invalid_input, "--tmax and --steps must be positive");
  eclim::apps::SpeedLimitConfig cfg;
  cfg.n_qubits = o.qubits;
  cfg.scenario = eclim::apps::parse_scenario(o.scenario);
  cfg.times = eclim::apps::uniform_grid(o.tmax, o.steps);
  cfg.seed = o.seed;
  cfg.first_order = o.first_order;
  const auto r = eclim::apps::speedlimit_run(cfg);
  std::ostringstream csv;
  csv << "time,actualError,energyBound,uniformBound\n";
  for (const auto& row : r.rows) {
    csv << format_double(row.time) << ',' << format_double(row.actual_error) << ',' << format_double(row.energy_bound)
        << ',' << format_double(row.uniform_bound) << '\n';
  }
  emit(o.out, csv.str());
  return r.ordering_holds ? kOk : kViolation;
}

int run_trotter(const Options& o) {
  const auto gen1 = eclim::io::read_generator(o.gen1);
  const auto gen2 = eclim::io::read_generator(o.gen2);
  const auto g = eclim::io::read_reference(o.ref);
  eclim::SeesawOptions opt;
  opt.restarts = o.restarts;
  opt.seed = o.seed;
  const auto r = eclim::apps::trotter_run(gen1, gen2, g, o.energy, o.time, parse_int_list(o.n_list, "--n"), o.states,
                                          o.seed, opt);
  Json rows = Json::array();
  for (const auto& row : r.rows)
    rows.push_back({{"n", row.steps}, {"lhs", row.lhs}, {"rhs", row.rhs}, {"status", eclim::apps::to_string(row.status)}});
  Json j{{"rows", rows}, {"joint", stability_json(r.joint)}, {"commutator_norm", r.commutator_norm},
         {"status", eclim::apps::to_string(r.status)}};
  j["decay_exponent"] = r.decay_exponent ? Json(*r.decay_exponent) : Json(nullptr);
  std::cout << j.dump() << "\n";
  return r.status == eclim::apps::CheckStatus::fail ? kViolation : kOk;
}

int run_group_qsl(const Options& o) {
  if (o.qubits < 1 || o.qubits > 10) throw eclim::Error(eclim::ErrorCode::invalid_input, "--qubits must be in 1..10");
  const auto spin = eclim::models::spin_system(o.qubits);
  eclim::Vector psi;
  if (!o.state.empty()) {
    const eclim::Matrix m = eclim::io::read_operator(o.state);
    if (m.cols() != 1) throw eclim::Error(eclim::ErrorCode::invalid_input, "--state: expected a column vector (cols = 1)");
    psi = m.col(0);
  } else {
    eclim::Rng rng(o.seed);
    psi = eclim::random::haar_state(rng, spin.sx.dim());
  }
  const auto r = eclim::apps::group_qsl(spin, parse_vec3(o.cx, "--cx"), parse_vec3(o.cy, "--cy"), psi);
  std::cout << Json{{"lhs", r.lhs}, {"rhs", r.rhs}, {"omega", r.omega}, {"holds", r.holds}}.dump() << "\n";
  return r.holds ? kOk : kViolation;
}

int run_selftest(const Options&) { return eclim::selftest::run(std::cout) == 0 ? kOk : kViolation; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Energy-constrained norms and energy-limitedness certificates"};
  app.set_version_flag("--version", std::string("eclim ") + eclim::kVersion + " (format " +
                                        std::to_string(eclim::kFormatVersion) + ")");
  app.require_subcommand(1);
  Options o;
  std::function<int(const Options&)> handler;
  auto add = [&](const char* name, const char* help, int (*fn)(const Options&)) {
    auto* sub = app.add_subcommand(name, help);
    sub->callback([&handler, fn] { handler = fn; });
    return sub;
  };
  auto positive = CLI::PositiveNumber;

  auto* eco = add("eco-norm", "energy-constrained operator norm of an operator", run_eco_norm);
  eco->add_option("--op", o.op, "operator JSON")->required();
  eco->add_option("--ref", o.ref, "reference Hamiltonian JSON")->required();
  eco->add_option("--energy", o.energy, "energy budget E")->required()->check(positive);
  eco->add_flag("--primal", o.primal, "also report the primal ascent value");
  eco->add_option("--restarts", o.restarts, "primal ascent restarts")->check(CLI::PositiveNumber);
  eco->add_option("--seed", o.seed, "seed");

  auto* ecd = add("ecd-norm", "energy-constrained diamond norm of a channel or channel difference", run_ecd_norm);
  ecd->add_option("--channel", o.channel, "channel JSON (the positive part)")->required();
  ecd->add_option("--minus", o.minus, "channel JSON subtracted from --channel (implies --seesaw)");
  ecd->add_option("--ref", o.ref, "reference Hamiltonian JSON")->required();
  ecd->add_option("--energy", o.energy, "energy budget E")->required()->check(positive);
  ecd->add_flag("--seesaw", o.seesaw, "certified lower bound by see-saw");
  ecd->add_option("--ancilla", o.ancilla, "ancilla dimension (default: system dimension)")->check(CLI::PositiveNumber);
  ecd->add_option("--restarts", o.restarts, "see-saw restarts")->check(CLI::PositiveNumber);
  ecd->add_option("--seed", o.seed, "seed");

  auto* oe = add("output-energy", "maximal output energy f_T(E) with affine certificates", run_output_energy);
  oe->add_option("--channel", o.channel, "channel JSON")->required();
  oe->add_option("--ref-in", o.ref_in, "input reference Hamiltonian JSON")->required();
  oe->add_option("--ref-out", o.ref_out, "output reference Hamiltonian JSON")->required();
  auto* oe_energy = oe->add_option("--energy", o.energy, "energy budget E")->check(positive);
  auto* oe_grid = oe->add_option("--grid", o.grid, "comma-separated energy grid");
  oe_energy->excludes(oe_grid);
  oe->require_option(1);

  auto* cert = add("certify", "stability constants (omega, E0) of a Lindblad generator", run_certify);
  cert->add_option("--gen", o.gen, "generator JSON")->required();
  cert->add_option("--ref", o.ref, "reference Hamiltonian JSON")->required();
  cert->add_option("--e0-grid", o.e0_grid, "comma-separated E0 values (default: 2^-6..2^6 times the top of G)");
  cert->add_flag("--symmetric", o.symmetric, "certify +-M (reversible dynamics)");

  auto* sim = add("simulate", "evolve a state and check the certified energy bound", run_simulate);
  sim->add_option("--gen", o.gen, "generator JSON")->required();
  sim->add_option("--state", o.state, "density matrix JSON")->required();
  sim->add_option("--times", o.times, "comma-separated times")->required();
  sim->add_option("--ref", o.ref, "reference Hamiltonian JSON")->required();
  sim->add_option("--e0-grid", o.e0_grid, "comma-separated E0 values");

  auto* gs = add("gaussian", "Gaussian semigroup energies against the stability bound (CSV)", run_gaussian);
  gs->add_option("--gen", o.gen, "Gaussian generator JSON")->required();
  gs->add_option("--state", o.state, "Gaussian state JSON")->required();
  gs->add_option("--times", o.times, "comma-separated times")->required();
  gs->add_option("--out", o.out, "CSV path (default: stdout)");

  auto* birth = add("birth", "pure birth process: explosion diagnostics and truncated evolution", run_birth);
  birth->add_option("--rule", o.rule, "power:p | geometric:r | constant[:c] | list:a,b,...")->required();
  birth->add_option("--cutoff", o.cutoff, "truncation level N");
  birth->add_option("--times", o.times, "comma-separated times (default 0.5,1,2,3)");

  auto* rabi = add("rabi", "interior stability certificate of the truncated Rabi model", run_rabi);
  rabi->add_option("--omega", o.omega, "oscillator frequency");
  rabi->add_option("--g", o.coupling, "coupling");
  rabi->add_option("--nu", o.nu, "qubit splitting");
  rabi->add_option("--cutoff", o.cutoff, "oscillator truncation N");
  rabi->add_option("--e0", o.e0, "E0")->check(positive);

  auto* sl = add("speedlimit", "energy-constrained quantum speed limit on collective spins (CSV)", run_speedlimit);
  sl->add_option("--scenario", o.scenario, "left | right");
  sl->add_option("--qubits", o.qubits, "number of qubits");
  sl->add_option("--tmax", o.tmax, "final time");
  sl->add_option("--steps", o.steps, "number of time steps");
  sl->add_option("--seed", o.seed, "seed");
  sl->add_flag("--first-order", o.first_order, "use the unevolved budget E instead of f_t(E)");
  sl->add_option("--out", o.out, "CSV path (default: stdout)");

  auto* tr = add("trotter", "Trotter product error against the commutator bound", run_trotter);
  tr->add_option("--gen1", o.gen1, "first generator JSON")->required();
  tr->add_option("--gen2", o.gen2, "second generator JSON")->required();
  tr->add_option("--ref", o.ref, "reference Hamiltonian JSON")->required();
  tr->add_option("--energy", o.energy, "energy budget E")->required()->check(positive);
  tr->add_option("--time", o.time, "total time t")->check(positive);
  tr->add_option("--n", o.n_list, "comma-separated step counts")->default_val("4,8,16,32,64");
  tr->add_option("--states", o.states, "random input states")->check(CLI::PositiveNumber);
  tr->add_option("--restarts", o.restarts, "see-saw restarts")->check(CLI::PositiveNumber);
  tr->add_option("--seed", o.seed, "seed");

  auto* gq = add("group-qsl", "Lie-group speed limit for su(2) on collective spins", run_group_qsl);
  gq->add_option("--qubits", o.qubits, "number of qubits");
  gq->add_option("--cx", o.cx, "coefficients of X, e.g. 0.1,0.2,0.3")->required();
  gq->add_option("--cy", o.cy, "coefficients of Y")->required();
  gq->add_option("--state", o.state, "state vector JSON (rows = 2^n, cols = 1); Haar random from --seed otherwise");
  gq->add_option("--seed", o.seed, "seed");

  add("selftest", "run the built-in example suite", run_selftest);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    print_error("usage", e.what());
    std::cerr << app.help();
    return kInputError;
  }

  try {
    return handler(o);
  } catch (const eclim::Error& e) {
    print_error(std::string(eclim::to_string(e.code())), e.what());
    return e.code() == eclim::ErrorCode::verification_failed ? kViolation : kInputError;
  } catch (const std::exception& e) {
    print_error("internal", e.what());
    return kInputError;
  }
}
