#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <boost/version.hpp>
#include <openssl/evp.h>

#include <CLI11.hpp>
#include <json.hpp>

#include "config.hpp"
#include "qd/darwin.hpp"
#include "qd/envariance.hpp"
#include "qd/photonenv.hpp"
#include "qd/qbm.hpp"
#include "qd/spinmodels.hpp"

using json = nlohmann::json;
using qd::cplx;
using qd::CVec;
using qdlab::Config;
using qdlab::ConfigError;

namespace {

constexpr const char* kVersion = "1.0.0";

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::string csv() const {
    std::string out;
    auto line = [&](const std::vector<std::string>& cells) {
      for (std::size_t i = 0; i < cells.size(); ++i) out += (i ? "," : "") + cells[i];
      out += "\n";
    };
    line(header);
    for (const auto& r : rows) line(r);
    return out;
  }
};

// Object id of the content as a git blob.
std::string gitBlobHash(const std::string& content) {
  const std::string head = "blob " + std::to_string(content.size()) + std::string(1, '\0');
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  EVP_DigestInit_ex(ctx, EVP_sha1(), nullptr);
  EVP_DigestUpdate(ctx, head.data(), head.size());
  EVP_DigestUpdate(ctx, content.data(), content.size());
  EVP_DigestFinal_ex(ctx, md, &len);
  EVP_MD_CTX_free(ctx);
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

struct Units {
  double scale = 1.0;
  std::string name = "nats";
};

Units unitsFrom(const Config& cfg) {
  const std::string u = cfg.getString("run.units", "nats");
  if (u == "nats") return {};
  if (u == "bits") return {1.0 / std::numbers::ln2, "bits"};
  throw ConfigError("field 'run.units': expected nats or bits, got '" + u + "'");
}

std::uint64_t seedFrom(const Config& cfg, bool stochastic) {
  if (stochastic) return cfg.requireUint64("run.seed");
  return cfg.getUint64("run.seed", 0);
}

int positive(const Config& cfg, const std::string& key, int fallback) {
  const int v = cfg.getInt(key, fallback);
  if (v <= 0) throw ConfigError("field '" + key + "': must be positive");
  return v;
}

Table pipTable(const qd::PartialInfoPlot& pip, const Units& u) {
  Table t{{"f", "sharpF", "meanI_" + u.name, "stddev", "samples"}, {}};
  for (const auto& p : pip.points)
    t.rows.push_back({num(p.f), std::to_string(p.sharpF), num(p.meanI * u.scale), num(p.stddev * u.scale),
                      std::to_string(p.samples)});
  return t;
}

json reportJson(const qd::RedundancyReport& r) {
  json j{{"delta", r.delta},       {"f_delta", r.f_delta},           {"sharpF_delta", r.sharpF_delta},
         {"R_delta", r.R_delta},   {"interpolated", r.interpolated}, {"plateauReached", r.plateauReached}};
  if (r.R_deltaD) j["R_deltaD"] = *r.R_deltaD;
  return j;
}

std::vector<int> sizeGrid(const Config& cfg, int n) {
  const std::string g = cfg.getString("run.grid", "default");
  if (g == "default") return qd::defaultSizeGrid(n);
  if (g == "all") {
    std::vector<int> all(n + 1);
    for (int k = 0; k <= n; ++k) all[k] = k;
    return all;
  }
  throw ConfigError("field 'run.grid': expected default or all, got '" + g + "'");
}

qd::OhmicBathParams bathFrom(const Config& cfg, const std::string& sec) {
  qd::OhmicBathParams b;
  b.systemMass = cfg.getDouble(sec + ".mass", b.systemMass);
  b.omega0 = cfg.getDouble(sec + ".omega0", b.omega0);
  b.gamma0 = cfg.getDouble(sec + ".gamma0", b.gamma0);
  b.cutoff = cfg.getDouble(sec + ".cutoff", b.cutoff);
  b.bands = cfg.getInt(sec + ".bands", b.bands);
  b.validate();
  return b;
}

qd::Squeeze squeezeFrom(const Config& cfg, const std::string& key) {
  const std::string s = cfg.getString(key, "x");
  if (s == "x") return qd::Squeeze::X;
  if (s == "p") return qd::Squeeze::P;
  throw ConfigError("field '" + key + "': expected x or p");
}

struct Model {
  std::unique_ptr<qd::PipSource> source;
  json params;
};

bool stochasticModel(const std::string& name) { return name != "cnot" && name != "photon"; }

Model makeModel(const Config& cfg, std::uint64_t seed) {
  const std::string name = cfg.getString("model.name", "cnot");
  Model m;
  m.params["name"] = name;
  if (name == "cnot") {
    const int n = positive(cfg, "model.n", 50);
    const double p0 = cfg.getDouble("model.p0", 0.5);
    if (!(p0 >= 0.0 && p0 <= 1.0)) throw ConfigError("field 'model.p0': outside [0, 1]");
    m.source = std::make_unique<qd::BranchingSource>(qd::cnotModel(std::sqrt(p0), std::sqrt(1.0 - p0), n), "cnot");
    m.params.update({{"n", n}, {"p0", p0}});
  } else if (name == "central-spin") {
    const int n = positive(cfg, "model.n", 50);
    const double t = cfg.getDouble("model.t", 4.0);
    m.source = std::make_unique<qd::BranchingSource>(qd::centralSpinBranching(qd::randomCentralSpin(n, t, seed)),
                                                     "central-spin");
    m.params.update({{"n", n}, {"t", t}});
  } else if (name == "interacting") {
    const int n = positive(cfg, "model.n", 16);
    const double t = cfg.getDouble("model.t", 10.0);
    const double sd = cfg.getDouble("model.sigma_d", 0.1);
    const double sm = cfg.getDouble("model.sigma_m", 0.001);
    const cplx a(1.0 / std::sqrt(2.0));
    auto p = qd::randomInteracting(n, sd, sm, t, seed);
    m.source = std::make_unique<qd::DenseSource>(qd::interactingEvolve(p, a, a), 1, "interacting");
    m.params.update({{"n", n}, {"t", t}, {"sigma_d", sd}, {"sigma_m", sm}});
  } else if (name == "hazy") {
    const int n = positive(cfg, "model.n", 10);
    const double t = cfg.getDouble("model.t", 3.0);
    const double h = cfg.getDouble("model.h", 0.0);
    m.source = std::make_unique<qd::HazyCentralSpin>(qd::randomCentralSpin(n, t, seed), qd::HazyParams{h});
    m.params.update({{"n", n}, {"t", t}, {"h_nats", h}});
  } else if (name == "photon") {
    const int n = positive(cfg, "model.n", 1000);
    const double x = cfg.getDouble("model.t_over_tau", 10.0);
    m.source = std::make_unique<qd::PhotonSource>(x, n, cfg.getString("model.illumination", "point") == "isotropic");
    m.params.update({{"n", n}, {"t_over_tau", x}});
  } else if (name == "qbm") {
    auto bath = bathFrom(cfg, "model");
    if (cfg.has("model.n")) {
      if (cfg.has("model.bands")) throw ConfigError("field 'model.n': conflicts with 'model.bands'");
      bath.bands = positive(cfg, "model.n", bath.bands);
      bath.validate();
    }
    const double s = cfg.getDouble("model.s", 1000.0);
    const double t = cfg.getDouble("model.t", 4.0);
    auto run = qd::qbmEvolve(bath, s, squeezeFrom(cfg, "model.squeeze"), t);
    m.source = std::make_unique<qd::GaussianSource>(run.state);
    m.params.update({{"s", s}, {"t", t}, {"bands", bath.bands}, {"beyondRecurrence", run.beyondRecurrence}});
  } else if (name == "haar") {
    const int n = positive(cfg, "model.n", 12);
    qd::CounterRng rng(seed);
    m.source = std::make_unique<qd::DenseSource>(qd::haarRandomState(qd::HilbertShape::qubits(n + 1), rng), 1, "haar");
    m.params.update({{"n", n}});
  } else {
    throw ConfigError("field 'model.name': unknown model '" + name + "'");
  }
  return m;
}

std::uint64_t samplingSeed(std::uint64_t seed) { return qd::CounterRng(seed, 1)(); }

struct Outcome {
  Table table;
  json summary;
};

Outcome runPip(const Config& cfg) {
  const std::string name = cfg.getString("model.name", "cnot");
  const std::uint64_t seed = seedFrom(cfg, stochasticModel(name));
  const Units u = unitsFrom(cfg);
  Model m = makeModel(cfg, seed);
  const int samples = positive(cfg, "run.samples", 16);
  const double delta = cfg.getDouble("run.delta", 0.1);
  auto pip = qd::buildPIP(*m.source, sizeGrid(cfg, m.source->envSize()), samples, samplingSeed(seed));
  json s{{"model", m.params}, {"H_S", pip.HS * u.scale}, {"units", u.name}, {"samples", samples}};
  s["redundancy"] = reportJson(qd::redundancy(pip, delta));
  return {pipTable(pip, u), s};
}

Outcome runRedundancy(const Config& cfg) {
  const std::string name = cfg.getString("model.name", "cnot");
  const std::uint64_t seed = seedFrom(cfg, stochasticModel(name));
  Model m = makeModel(cfg, seed);
  const int samples = positive(cfg, "run.samples", 16);
  const auto deltas = cfg.getDoubleList("redundancy.deltas", {0.02, 0.05, 0.1, 0.2, 0.3, 0.4});
  const auto sizes = sizeGrid(cfg, m.source->envSize());
  auto pip = qd::buildPIP(*m.source, sizes, samples, samplingSeed(seed));
  const bool withDecoherence = m.source->decoheredEntropy({}).has_value();
  Table t{{"delta", "f_delta", "sharpF_delta", "R_delta", "R_deltaD", "plateau_reached"}, {}};
  json reports = json::array();
  for (double d : deltas) {
    if (!(d > 0.0 && d < 1.0)) throw ConfigError("field 'redundancy.deltas': each delta must lie in (0, 1)");
    auto r = qd::redundancy(pip, d);
    if (withDecoherence) r.R_deltaD = qd::redundancyOfDecoherence(*m.source, d, sizes, samples, samplingSeed(seed));
    t.rows.push_back({num(d), num(r.f_delta), num(r.sharpF_delta), num(r.R_delta),
                      r.R_deltaD ? num(*r.R_deltaD) : "nan", r.plateauReached ? "1" : "0"});
    reports.push_back(reportJson(r));
  }
  return {t, {{"model", m.params}, {"H_S_nats", pip.HS}, {"reports", reports}}};
}

Outcome runSweep(const Config& cfg) {
  const std::uint64_t seed = seedFrom(cfg, true);
  const int n = positive(cfg, "sweep.n", 16);
  const double t = cfg.getDouble("sweep.t", 4.0);
  const int steps = positive(cfg, "sweep.mu_steps", 33);
  const int frag = positive(cfg, "sweep.fragment_size", 3);
  const double delta = cfg.getDouble("sweep.delta", 0.1);
  const int samples = positive(cfg, "run.samples", 16);
  if (frag > n) throw ConfigError("field 'sweep.fragment_size': exceeds sweep.n");
  const Units u = unitsFrom(cfg);
  auto b = qd::centralSpinBranching(qd::randomCentralSpin(n, t, seed));
  std::vector<double> mus;
  for (int i = 0; i < steps; ++i) mus.push_back(steps == 1 ? 0.0 : std::numbers::pi * i / (steps - 1));
  auto rows = qd::observableSweep(b, mus, frag, samples, samplingSeed(seed), delta);
  Table tab{{"mu_rad", "chi_" + u.name, "chi_stddev", "entropy_" + u.name, "cond_entropy_" + u.name,
             "chi_bound_" + u.name, "bound_allows_redundancy", "R_delta"},
            {}};
  for (const auto& r : rows)
    tab.rows.push_back({num(r.mu), num(r.chi * u.scale), num(r.chiStddev * u.scale), num(r.entropy * u.scale),
                        num(r.condEntropy * u.scale), num(r.chiBound * u.scale), r.boundAllowsRedundancy ? "1" : "0",
                        num(r.R_delta)});
  return {tab, {{"n", n}, {"t", t}, {"fragment_size", frag}, {"delta", delta}, {"units", u.name}}};
}

Outcome runQbm(const Config& cfg) {
  const std::uint64_t seed = seedFrom(cfg, true);
  const auto bath = bathFrom(cfg, "qbm");
  const double s = cfg.getDouble("qbm.s", 1000.0);
  const double t = cfg.getDouble("qbm.t", 4.0);
  const int samples = positive(cfg, "run.samples", 32);
  const Units u = unitsFrom(cfg);
  auto run = qd::qbmEvolve(bath, s, squeezeFrom(cfg, "qbm.squeeze"), t);
  qd::GaussianSource src(run.state);
  auto pip = qd::buildPIP(src, sizeGrid(cfg, src.envSize()), samples, samplingSeed(seed));
  Table tab = pipTable(pip, u);
  tab.header.push_back("universal_" + u.name);
  for (std::size_t i = 0; i < pip.points.size(); ++i) {
    const double f = pip.points[i].f;
    tab.rows[i].push_back(f > 0.0 && f < 1.0 ? num(qd::universalPIP(pip.HS, f) * u.scale) : "nan");
  }
  json reds = json::array();
  for (double d : {0.1, 0.25}) {
    json r = reportJson(qd::redundancy(pip, d));
    r["predicted"] = qd::qbmRedundancy(s, d);
    reds.push_back(r);
  }
  return {tab,
          {{"s", s},
           {"t", t},
           {"bands", bath.bands},
           {"H_S_nats", pip.HS},
           {"ln_s", std::log(s)},
           {"beyondRecurrence", run.beyondRecurrence},
           {"redundancy", reds}}};
}

Outcome runPhoton(const Config& cfg) {
  qd::PhotonHaloParams p;
  const std::string preset = cfg.getString("photon.preset", "dust-grain-sunlight");
  if (preset == "dust-grain-sunlight")
    p = qd::PhotonHaloParams::dustGrainSunlight();
  else if (preset != "none")
    throw ConfigError("field 'photon.preset': unknown preset '" + preset + "'");
  p.radius = cfg.getDouble("photon.radius_m", p.radius);
  p.permittivity = cfg.getDouble("photon.permittivity", p.permittivity);
  p.irradiance = cfg.getDouble("photon.irradiance_W_per_m2", p.irradiance);
  p.temperature = cfg.getDouble("photon.temperature_K", p.temperature);
  p.separation = cfg.getDouble("photon.separation_m", p.separation);
  p.angle = cfg.getDouble("photon.angle_rad", p.angle);
  p.time = cfg.getDouble("photon.time_s", p.time);
  const std::string mode = cfg.getString("photon.radius_mode", "printed");
  if (mode == "printed")
    p.radiusMode = qd::RadiusMode::Printed;
  else if (mode == "clausius-mossotti")
    p.radiusMode = qd::RadiusMode::ClausiusMossotti;
  else
    throw ConfigError("field 'photon.radius_mode': expected printed or clausius-mossotti");
  const double delta = cfg.getDouble("photon.delta", 0.1);
  try {
    p.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }

  const auto dip = qd::decoherenceRateDipole(p);
  const auto sat = qd::decoherenceRateSaturated(p);
  const double rate = qd::decoherenceRate(p);
  const double x = rate * p.time;
  const double rFormula = qd::photonRedundancy(x, delta);
  // exp(-t/tau) underflows long before the inversion stops being informative.
  const double rInversion = x <= 700.0 ? qd::photonRedundancyByInversion(x, delta) : std::nan("");
  const char* regimes[] = {"dipole", "crossover", "saturated"};
  Table tab{{"quantity", "value", "unit"}, {}};
  auto row = [&](const std::string& q, const std::string& v, const std::string& unit) {
    tab.rows.push_back({q, v, unit});
  };
  row("effective_radius", num(qd::effectiveRadius(p.radius, p.permittivity, p.radiusMode)), "m");
  row("thermal_wavelength", num(p.thermalWavelength()), "m");
  row("regime", regimes[static_cast<int>(p.regime())], "");
  row("rate_dipole", num(dip.value), "1/s");
  row("rate_dipole_valid", dip.regimeValid ? "1" : "0", "");
  row("rate_saturated", num(sat.value), "1/s");
  row("rate_saturated_valid", sat.regimeValid ? "1" : "0", "");
  row("rate_used", num(rate), "1/s");
  row("tau_D", num(1.0 / rate), "s");
  row("t_over_tau", num(x), "");
  row("delta", num(delta), "");
  row("R_delta_formula", num(rFormula), "");
  row("R_delta_inversion", num(rInversion), "");
  return {tab, {{"preset", preset}, {"time_s", p.time}, {"R_delta", rFormula}, {"t_over_tau", x}}};
}

Outcome runEnvariance(const Config& cfg) {
  const std::string spec = cfg.getString("envariance.finegraining", "2:1");
  qd::FineGrainSpec fg;
  for (const auto& item : qdlab::splitList(spec, ':')) {
    try {
      std::size_t pos = 0;
      const long long v = std::stoll(item, &pos);
      if (pos != item.size()) throw std::invalid_argument(item);
      fg.mu.push_back(v);
    } catch (const std::exception&) {
      throw ConfigError("field 'envariance.finegraining': expected integers separated by ':'");
    }
  }
  fg.cap = cfg.getInt("envariance.cap", static_cast<int>(fg.cap));
  try {
    fg.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  auto r = qd::fineGrainDetailed(fg);
  Table tab{{"outcome", "mu", "branches", "probability_exact", "probability"}, {}};
  for (std::size_t k = 0; k < fg.mu.size(); ++k) {
    std::ostringstream exact;
    exact << r.exact[k].numerator() << "/" << r.exact[k].denominator();
    tab.rows.push_back({std::to_string(k), std::to_string(fg.mu[k]), std::to_string(r.branchCounts[k]), exact.str(),
                        num(r.probabilities[k])});
  }
  return {tab, {{"finegraining", spec}, {"M", r.totalBranches}, {"max_amplitude_spread", r.maxAmplitudeSpread}}};
}

Outcome runReversal(const Config& cfg) {
  const auto amps = cfg.getDoubleList("reversal.amplitudes", {std::sqrt(0.5), std::sqrt(0.5)});
  CVec a(static_cast<Eigen::Index>(amps.size()));
  for (std::size_t i = 0; i < amps.size(); ++i) a(static_cast<Eigen::Index>(i)) = amps[i];
  if (a.size() == 0 || std::abs(a.squaredNorm() - 1.0) > qd::policy().stateTol)
    throw ConfigError("field 'reversal.amplitudes': must be a normalized list");
  auto r = qd::reversalDemo(a);
  Table tab{{"s", "rho_ss_with_copy", "expected", "max_offdiag"}, {}};
  const auto& m = r.withCopy.matrix();
  for (Eigen::Index s = 0; s < a.size(); ++s) {
    double off = 0.0;
    for (Eigen::Index k = 0; k < a.size(); ++k)
      if (k != s) off = std::max(off, std::abs(m(s, k)));
    tab.rows.push_back({std::to_string(s), num(m(s, s).real()), num(std::norm(a(s))), num(off)});
  }
  return {tab, {{"fidelity_without_copy", r.withoutCopy}, {"fidelity_with_copy", r.withCopyFidelity}}};
}

Outcome runBaseline(const Config& cfg) {
  const std::uint64_t seed = seedFrom(cfg, true);
  const int n = positive(cfg, "baseline.n", 12);
  const int states = positive(cfg, "baseline.states", 20);
  const double delta = cfg.getDouble("baseline.delta", 0.1);
  const int samples = positive(cfg, "run.samples", 16);
  const Units u = unitsFrom(cfg);
  std::vector<int> sizes(n + 1);
  for (int k = 0; k <= n; ++k) sizes[k] = k;
  std::vector<std::vector<double>> curves;
  std::vector<double> rs;
  std::vector<int> counts(n + 1, 0);
  qd::CounterRng root(seed);
  for (int i = 0; i < states; ++i) {
    qd::CounterRng rng = root.split(static_cast<std::uint64_t>(i));
    qd::DenseSource src(qd::haarRandomState(qd::HilbertShape::qubits(n + 1), rng), 1, "haar");
    auto pip = qd::buildPIP(src, sizes, samples, rng());
    std::vector<double> c;
    for (std::size_t k = 0; k < pip.points.size(); ++k) {
      c.push_back(pip.points[k].meanI);
      counts[k] += pip.points[k].samples;
    }
    curves.push_back(c);
    rs.push_back(qd::redundancy(pip, delta).R_delta);
  }
  Table tab{{"f", "sharpF", "meanI_" + u.name, "stddev", "samples"}, {}};
  for (int k = 0; k <= n; ++k) {
    double mean = 0.0, var = 0.0;
    for (const auto& c : curves) mean += c[k];
    mean /= states;
    for (const auto& c : curves) var += (c[k] - mean) * (c[k] - mean);
    const double sd = states > 1 ? std::sqrt(var / (states - 1)) : 0.0;
    tab.rows.push_back({num(static_cast<double>(k) / n), std::to_string(k), num(mean * u.scale), num(sd * u.scale),
                        std::to_string(counts[k])});
  }
  double meanR = 0.0;
  for (double r : rs) meanR += r;
  meanR /= states;
  return {tab, {{"n", n}, {"states", states}, {"delta", delta}, {"mean_R_delta", meanR}, {"R_delta", rs}}};
}

void writeFile(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot write output file '" + path + "'");
  f << content;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qdlab: quantum Darwinism numerical laboratory"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  std::string configPath;
  std::vector<std::string> sets;
  std::map<std::string, std::string> slots;
  std::vector<std::pair<CLI::Option*, std::string>> bound;

  app.add_option("--config", configPath, "Sectioned key=value configuration file");
  app.add_option("--set", sets, "Override a configuration field: section.key=value");
  auto global = [&](const std::string& flag, const std::string& key, const std::string& help) {
    bound.emplace_back(app.add_option(flag, slots[key], help), key);
  };
  global("--seed", "run.seed", "Generator seed");
  global("--samples", "run.samples", "Fragments sampled per size");
  global("--units", "run.units", "nats or bits");
  global("--grid", "run.grid", "Fragment size grid: default or all");
  global("--delta", "run.delta", "Information deficit for the reported redundancy");
  global("--out", "run.out", "CSV output path ('-' for stdout)");
  global("--manifest", "run.manifest", "JSON manifest path");

  struct Sub {
    const char* name;
    const char* help;
    std::vector<std::string> sections;
  };
  const std::vector<Sub> subs = {
      {"pip", "Partial information plot of a model", {"model"}},
      {"redundancy", "Redundancy versus information deficit", {"model", "redundancy"}},
      {"sweep", "Observable sweep around the pointer basis", {"sweep"}},
      {"qbm", "Quantum Brownian motion partial information plot", {"qbm"}},
      {"photon", "Photon-scattering decoherence rate and redundancy", {"photon"}},
      {"envariance", "Born's rule from finegraining and branch counting", {"envariance"}},
      {"reversal", "Reversal of a measurement with and without a copy", {"reversal"}},
      {"baseline", "Haar-random pure-state baseline", {"baseline"}},
  };
  std::map<std::string, CLI::App*> apps;
  for (const auto& s : subs) {
    auto* sub = app.add_subcommand(s.name, s.help);
    sub->fallthrough();
    apps[s.name] = sub;
  }
  auto flag = [&](const std::string& subName, const std::string& flagName, const std::string& key,
                  const std::string& help) {
    bound.emplace_back(apps.at(subName)->add_option("--" + flagName, slots[key], help), key);
  };
  for (const char* s : {"pip", "redundancy"}) {
    flag(s, "model", "model.name", "cnot, central-spin, interacting, hazy, photon, qbm or haar");
    flag(s, "n", "model.n", "Number of environment subsystems");
    flag(s, "t", "model.t", "Evolution time (model units)");
    flag(s, "hazy-entropy", "model.h", "Initial entropy per environment qubit, nats (hazy)");
    flag(s, "sigma-d", "model.sigma_d", "Coupling spread to the system (interacting)");
    flag(s, "sigma-m", "model.sigma_m", "Coupling spread within the environment (interacting)");
    flag(s, "t-over-tau", "model.t_over_tau", "Elapsed time in decoherence times (photon)");
    flag(s, "s", "model.s", "Squeezing (qbm)");
  }
  flag("redundancy", "deltas", "redundancy.deltas", "Comma separated deficits");
  flag("sweep", "n", "sweep.n", "Number of environment qubits");
  flag("sweep", "t", "sweep.t", "Evolution time");
  flag("sweep", "mu-steps", "sweep.mu_steps", "Grid points in [0, pi]");
  flag("sweep", "fragment-size", "sweep.fragment_size", "Fragment size");
  flag("qbm", "s", "qbm.s", "Squeezing");
  flag("qbm", "t", "qbm.t", "Evolution time");
  flag("qbm", "bands", "qbm.bands", "Number of bath bands");
  flag("qbm", "squeeze", "qbm.squeeze", "Squeezed quadrature: x or p");
  flag("photon", "preset", "photon.preset", "dust-grain-sunlight or none");
  flag("photon", "t", "photon.time_s", "Elapsed time, seconds");
  flag("photon", "separation", "photon.separation_m", "Superposition separation, meters");
  flag("photon", "radius-mode", "photon.radius_mode", "printed or clausius-mossotti");
  flag("envariance", "finegraining", "envariance.finegraining", "Integer weights, e.g. 2:1");
  flag("reversal", "amplitudes", "reversal.amplitudes", "Comma separated real amplitudes");
  flag("baseline", "n", "baseline.n", "Number of environment qubits");
  flag("baseline", "states", "baseline.states", "Number of random states");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    Config cfg = configPath.empty() ? Config() : Config::load(configPath);
    for (const auto& s : sets) cfg.applyOverride(s);
    for (const auto& [opt, key] : bound)
      if (opt->count() > 0) cfg.set(key, slots[key]);

    int threads = 1;
    if (const char* env = std::getenv("QDLAB_THREADS")) {
      try {
        threads = std::stoi(env);
      } catch (const std::exception&) {
        threads = 0;
      }
      if (threads <= 0) throw ConfigError("QDLAB_THREADS must be a positive integer");
    }

    std::string which;
    std::vector<std::string> sections{"run"};
    for (const auto& s : subs)
      if (apps[s.name]->parsed()) {
        which = s.name;
        sections.insert(sections.end(), s.sections.begin(), s.sections.end());
      }

    Outcome out;
    if (which == "pip") out = runPip(cfg);
    else if (which == "redundancy") out = runRedundancy(cfg);
    else if (which == "sweep") out = runSweep(cfg);
    else if (which == "qbm") out = runQbm(cfg);
    else if (which == "photon") out = runPhoton(cfg);
    else if (which == "envariance") out = runEnvariance(cfg);
    else if (which == "reversal") out = runReversal(cfg);
    else out = runBaseline(cfg);

    const std::string outPath = cfg.getString("run.out", "-");
    std::string manifestPath = cfg.getString("run.manifest", outPath == "-" ? "" : outPath + ".json");
    for (const auto& key : cfg.unusedKeys()) {
      const std::string sec = key.substr(0, key.find('.'));
      if (std::find(sections.begin(), sections.end(), sec) != sections.end())
        throw ConfigError("unknown field '" + key + "' for subcommand " + which);
    }

    const std::string csv = out.table.csv();
    if (outPath == "-")
      std::cout << csv;
    else
      writeFile(outPath, csv);

    if (!manifestPath.empty()) {
      json m;
      m["tool"] = "qdlab";
      m["version"] = kVersion;
      m["experiment"] = which;
      m["config"] = cfg.values();
      m["threads"] = threads;
      m["libraries"] = {{"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                      std::to_string(EIGEN_MINOR_VERSION)},
                        {"boost", BOOST_LIB_VERSION},
                        {"compiler", __VERSION__}};
      m["outputs"] = json::array({{{"path", outPath}, {"bytes", csv.size()}, {"git_blob_sha1", gitBlobHash(csv)}}});
      m["summary"] = out.summary;
      writeFile(manifestPath, m.dump(2) + "\n");
    }
    std::cerr << which << ": " << out.summary.dump() << "\n";
    return 0;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const qd::CapExceeded& e) {
    std::cerr << "cap exceeded: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid parameter: " << e.what() << "\n";
    return 1;
  } catch (const std::domain_error& e) {
    std::cerr << "invalid parameter: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
