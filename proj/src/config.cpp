#include "acns/config.hpp"

#include "acns/io.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>
#include <thread>

namespace acns {

using nlohmann::json;

ConfigError::ConfigError(std::vector<std::string> list)
    : std::runtime_error([&list] {
        std::ostringstream os;
        os << "invalid configuration (" << list.size() << " issue"
           << (list.size() == 1 ? "" : "s") << "):";
        for (const auto& s : list) os << "\n  - " << s;
        return os.str();
      }()),
      issues(std::move(list)) {}

namespace {

template <typename T>
void get_to(const json& j, const char* key, T& out) {
  if (j.contains(key)) j.at(key).get_to(out);
}

void parse_sections(const json& j, RunConfig& c,
                    std::vector<std::string>& issues) {
  if (j.contains("schema_version")) j.at("schema_version").get_to(c.schema_version);
  if (c.schema_version != 1)
    issues.push_back("schema_version: unsupported value");

  if (j.contains("grid")) {
    const auto& g = j.at("grid");
    get_to(g, "nx", c.nx);
    get_to(g, "ny", c.ny);
    get_to(g, "Lx", c.Lx);
    get_to(g, "Ly", c.Ly);
  }
  if (j.contains("physics")) {
    const auto& p = j.at("physics");
    get_to(p, "nu", c.nu);
    get_to(p, "beta", c.beta);
    get_to(p, "theta", c.theta);
    get_to(p, "theta0", c.theta0);
    get_to(p, "s0", c.s0);
  }
  if (j.contains("noise")) {
    const auto& n = j.at("noise");
    get_to(n, "sigma0", c.sigma0);
    get_to(n, "decay_a", c.decay_a);
    get_to(n, "M", c.M);
    get_to(n, "K_active", c.K_active);
    get_to(n, "gamma_k", c.gamma_k);
    get_to(n, "q", c.q);
    get_to(n, "u_single_phase", c.u_single_phase);
    // single-seed shorthand; the top-level list takes precedence
    if (n.contains("seed") && !j.contains("seeds"))
      c.seeds = {n.at("seed").get<std::uint64_t>()};
  }
  if (j.contains("stepper")) {
    const auto& s = j.at("stepper");
    get_to(s, "dt", c.dt);
    get_to(s, "horizon", c.horizon);
    get_to(s, "snapshot_stride", c.snapshot_stride);
    get_to(s, "sample_stride", c.sample_stride);
    get_to(s, "burn_in_fraction", c.burn_in_fraction);
  }
  if (j.contains("nudge")) {
    const auto& n = j.at("nudge");
    get_to(n, "N", c.nudge_N);
    if (n.contains("eta")) {
      if (n.at("eta").is_string()) {
        if (n.at("eta").get<std::string>() != "auto")
          issues.push_back("nudge.eta: must be a number or \"auto\"");
        c.nudge_eta_auto = true;
      } else {
        c.nudge_eta_auto = false;
        n.at("eta").get_to(c.nudge_eta);
      }
    }
  }
  if (j.contains("initial")) {
    const auto& i = j.at("initial");
    get_to(i, "kind", c.initial.kind);
    get_to(i, "u_amplitude", c.initial.u_amplitude);
    get_to(i, "u_decay", c.initial.u_decay);
    get_to(i, "u_modes", c.initial.u_modes);
    get_to(i, "phi_amplitude", c.initial.phi_amplitude);
    get_to(i, "phi_decay", c.initial.phi_decay);
    get_to(i, "phi_modes", c.initial.phi_modes);
    get_to(i, "phi_max", c.initial.phi_max);
    get_to(i, "seed", c.initial.seed);
    get_to(i, "u_seed", c.initial.u_seed);
    get_to(i, "phi_seed", c.initial.phi_seed);
  }
  get_to(j, "seeds", c.seeds);
  get_to(j, "constants", c.constants_path);
  get_to(j, "threads", c.threads);
}

void validate(const RunConfig& c, std::vector<std::string>& issues) {
  auto bad = [&issues](const std::string& msg) { issues.push_back(msg); };

  if (c.nx < 8 || c.nx % 2 != 0) bad("grid.nx: must be even and >= 8");
  if (c.ny < 8 || c.ny % 2 != 0) bad("grid.ny: must be even and >= 8");
  if (!(c.Lx > 0)) bad("grid.Lx: must be positive");
  if (!(c.Ly > 0)) bad("grid.Ly: must be positive");

  if (!(c.nu > 0)) bad("physics.nu: must be positive");
  if (!(c.beta > 0)) bad("physics.beta: must be positive");
  if (!(c.theta > 0)) bad("physics.theta: must be positive");
  if (!(c.theta0 > c.theta))
    bad("physics.theta0: requires theta0 > theta (semiconvexity of the "
        "potential fails otherwise)");
  if (c.s0 < 2) bad("physics.s0: must be an integer >= 2 (s0 > 2*s_F - 1)");

  if (!(c.sigma0 >= 0)) bad("noise.sigma0: must be >= 0");
  if (!(c.decay_a >= 1)) bad("noise.decay_a: must be >= 1");
  if (c.M < 0) bad("noise.M: must be >= 0");
  if (c.K_active < c.M) bad("noise.K_active: must be >= M");
  if (c.M > 0 && c.sigma0 == 0)
    bad("noise.sigma0: low-mode non-degeneracy needs sigma0 > 0 when M > 0");
  if (c.M > 0 && c.u_single_phase)
    bad("noise.u_single_phase: incompatible with M > 0 (the sine channels "
        "would be degenerate)");
  if (c.q < c.s0 + 1)
    bad("noise.q: requires q >= s0 + 1 so that g_k * Psi_{s0+1} stays "
        "bounded");
  for (std::size_t k = 0; k < c.gamma_k.size(); ++k)
    if (!(c.gamma_k[k] >= 0) || !std::isfinite(c.gamma_k[k]))
      bad("noise.gamma_k[" + std::to_string(k) + "]: must be finite and >= 0");

  if (!(c.dt > 0)) bad("stepper.dt: must be positive");
  if (!(c.horizon > 0)) bad("stepper.horizon: must be positive");
  if (c.dt > 0 && c.horizon > 0) {
    const double n = c.horizon / c.dt;
    if (std::abs(n - std::llround(n)) > 1e-9 * std::max(1.0, n))
      bad("stepper.horizon: dt must divide the horizon");
  }
  if (c.snapshot_stride < 0) bad("stepper.snapshot_stride: must be >= 0");
  if (c.sample_stride < 1) bad("stepper.sample_stride: must be >= 1");
  if (!(c.burn_in_fraction >= 0 && c.burn_in_fraction < 1))
    bad("stepper.burn_in_fraction: must lie in [0, 1)");

  if (c.nudge_N < 0) bad("nudge.N: must be >= 0");
  if (!c.nudge_eta_auto && !(c.nudge_eta >= 0)) bad("nudge.eta: must be >= 0");
  if (c.nudge_N > 0 && c.nudge_N > c.M)
    bad("nudge.N: requires N <= noise.M (the controlled modes must be "
        "stochastically forced)");
  if (c.nudge_N > 0 && c.u_single_phase)
    bad("noise.u_single_phase: incompatible with nudging");

  if (c.seeds.empty()) bad("seeds: must be nonempty");
  if (c.threads < 0) bad("threads: must be >= 0");

  if (c.initial.kind != "zero" && c.initial.kind != "random")
    bad("initial.kind: must be \"zero\" or \"random\"");
  if (!(c.initial.phi_max >= 0 && c.initial.phi_max < 1))
    bad("initial.phi_max: must lie in [0, 1)");
  if (c.initial.u_modes < 0) bad("initial.u_modes: must be >= 0");
  if (c.initial.phi_modes < 0) bad("initial.phi_modes: must be >= 0");

  // grid-dependent bounds (only when the grid itself is valid)
  if (issues.empty()) {
    SpectralGrid g(c.nx, c.ny, c.Lx, c.Ly);
    if (c.K_active > g.n_modes())
      bad("noise.K_active: exceeds the " + std::to_string(g.n_modes()) +
          " solenoidal modes of the grid");
    if (c.nudge_N > g.n_modes())
      bad("nudge.N: exceeds the available solenoidal modes");
  }
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError({std::string("parse error: ") + e.what()});
  }
  RunConfig c;
  std::vector<std::string> issues;
  try {
    parse_sections(j, c, issues);
  } catch (const json::exception& e) {
    issues.push_back(std::string("type error: ") + e.what());
  }
  validate(c, issues);
  if (!issues.empty()) throw ConfigError(std::move(issues));
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError({"cannot open config file " + path.string()});
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

SpectralGrid RunConfig::make_grid() const {
  return SpectralGrid(nx, ny, Lx, Ly);
}

PotentialSpec RunConfig::make_potential() const {
  return PotentialSpec::make(theta, theta0);
}

BarrierFamily RunConfig::make_barrier() const { return BarrierFamily::make(s0); }

StepperConfig RunConfig::make_stepper() const {
  StepperConfig s;
  s.dt = dt;
  s.nu = nu;
  s.beta = beta;
  return s;
}

VelocityNoiseSpec RunConfig::make_velocity_noise(const SpectralGrid& g) const {
  return VelocityNoiseSpec::make(g, sigma0, decay_a, M, K_active,
                                 u_single_phase);
}

PhaseNoiseSpec RunConfig::make_phase_noise(const PotentialSpec& pot) const {
  return PhaseNoiseSpec::make(gamma_k, q, s0, pot);
}

NudgeConfig RunConfig::make_nudge_config(const SpectralGrid& g) const {
  if (nudge_eta_auto) return make_nudge(g, nudge_N, nu);
  return NudgeConfig{nudge_N, nudge_eta};
}

CoupledState RunConfig::make_initial(const SpectralGrid& g) const {
  CoupledState s = CoupledState::zero(g);
  if (initial.kind == "random") {
    const std::uint64_t us = initial.u_seed ? initial.u_seed : initial.seed;
    const std::uint64_t ps = initial.phi_seed ? initial.phi_seed : initial.seed;
    s.u = random_solenoidal(g, NoisePath{us, 0}, initial.u_amplitude,
                            initial.u_decay, initial.u_modes);
    s.phi = random_scalar(g, NoisePath{ps, 0}, initial.phi_amplitude,
                          initial.phi_decay, initial.phi_modes,
                          initial.phi_max);
  }
  return s;
}

ConstantsTable RunConfig::resolve_constants(const SpectralGrid& g,
                                            const VelocityNoiseSpec& vspec,
                                            const PhaseNoiseSpec& pspec) const {
  const double gamma = (s0 + 1) / PotentialSpec::s_F;
  ConstantsTable table = measure_constants(g, 1000, 0xACE5u, gamma);
  table.L_G1 = vspec.L_G1();
  table.L_G2 = pspec.L_G2;
  if (!constants_path.empty()) table = load_constants(constants_path, table);
  table.validate();
  return table;
}

int RunConfig::resolve_threads() const {
  if (threads > 0) return threads;
  const unsigned hc = std::thread::hardware_concurrency();
  return hc > 0 ? static_cast<int>(hc) : 1;
}

std::string RunConfig::canonical_json() const {
  json j;
  j["schema_version"] = schema_version;
  j["grid"] = {{"nx", nx}, {"ny", ny}, {"Lx", Lx}, {"Ly", Ly}};
  j["physics"] = {{"nu", nu},
                  {"beta", beta},
                  {"theta", theta},
                  {"theta0", theta0},
                  {"s0", s0}};
  j["noise"] = {{"sigma0", sigma0},   {"decay_a", decay_a},
                {"M", M},             {"K_active", K_active},
                {"gamma_k", gamma_k}, {"q", q},
                {"u_single_phase", u_single_phase}};
  j["stepper"] = {{"dt", dt},
                  {"horizon", horizon},
                  {"snapshot_stride", snapshot_stride},
                  {"sample_stride", sample_stride},
                  {"burn_in_fraction", burn_in_fraction}};
  if (nudge_eta_auto)
    j["nudge"] = {{"N", nudge_N}, {"eta", "auto"}};
  else
    j["nudge"] = {{"N", nudge_N}, {"eta", nudge_eta}};
  j["initial"] = {{"kind", initial.kind},
                  {"u_amplitude", initial.u_amplitude},
                  {"u_decay", initial.u_decay},
                  {"u_modes", initial.u_modes},
                  {"phi_amplitude", initial.phi_amplitude},
                  {"phi_decay", initial.phi_decay},
                  {"phi_modes", initial.phi_modes},
                  {"phi_max", initial.phi_max},
                  {"seed", initial.seed},
                  {"u_seed", initial.u_seed},
                  {"phi_seed", initial.phi_seed}};
  j["seeds"] = seeds;
  j["constants"] = constants_path;
  return j.dump();
}

std::uint64_t RunConfig::hash() const { return fnv1a(canonical_json()); }

ConstantsTable load_constants(const std::filesystem::path& path,
                              ConstantsTable t) {
  std::ifstream in(path);
  if (!in)
    throw std::runtime_error("cannot open constants file " + path.string());
  json j = json::parse(in);
  get_to(j, "K_L", t.K_L);
  get_to(j, "K_GN", t.K_GN);
  get_to(j, "K_Delta", t.K_Delta);
  get_to(j, "K4", t.K4);
  get_to(j, "K_ratio", t.K_ratio);
  get_to(j, "C4", t.C4);
  get_to(j, "c1", t.c1);
  get_to(j, "c2", t.c2);
  get_to(j, "c3", t.c3);
  get_to(j, "L_G1", t.L_G1);
  get_to(j, "L_G2", t.L_G2);
  get_to(j, "gamma", t.gamma);
  return t;
}

}  // namespace acns
