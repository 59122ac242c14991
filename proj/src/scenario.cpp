#include "ramseylab/scenario.hpp"

#include <atomic>
#include <chrono>
#include <fstream>
#include <random>
#include <thread>

#include "ramseylab/evp.hpp"

namespace ramseylab {

namespace {

std::uint64_t param_u64(const Json& params, const char* key,
                        std::uint64_t fallback) {
  if (!params.contains(key)) return fallback;
  return params.at(key).get<std::uint64_t>();
}

struct SeedOutcome {
  Json result;
  // how the seed lands in the summary
  bool ok = false;
  bool fuel_exhausted = false;
  bool error = false;
  bool verification_failure = false;
  std::vector<Point> emitted;  // reduce only, feeds the pair block
  bool has_emitted = false;
};

SeedOutcome error_outcome(const Point& seed, const std::string& what) {
  SeedOutcome out;
  out.error = true;
  out.result = Json{{"seed", point_literal(seed)},
                    {"status", "error"},
                    {"error", what}};
  return out;
}

SeedOutcome run_ramsey_seed(const Scenario& sc, const Json& params,
                            const Point& seed) {
  Coloring coloring = Coloring::from_spec(sc.coloring_spec);
  ExtractionParams ep;
  ep.target = param_u64(params, "target", 4);
  ep.horizon = param_u64(params, "horizon", 64);
  std::uint64_t fuel = param_u64(params, "fuel", 2000000);

  ExtractionOutcome res =
      extract_monochromatic(sc.space, coloring, seed, ep, fuel);
  SeedOutcome out;
  out.ok = res.status == RunStatus::ok;
  out.fuel_exhausted = res.status == RunStatus::fuel_exhausted;
  out.error = res.status == RunStatus::error;
  out.verification_failure = !res.certificate.verified;
  out.result = Json{{"seed", point_literal(seed)},
                    {"status", run_status_name(res.status)},
                    {"thin_evidence", res.thin_evidence},
                    {"fuel_used", res.fuel_used},
                    {"note", res.note},
                    {"certificate", res.certificate.to_json()}};
  return out;
}

SeedOutcome run_reduce_seed(const Scenario& sc, const Json& params,
                            const Point& seed) {
  Coloring coloring = Coloring::from_spec(sc.coloring_spec);
  std::size_t i_max = param_u64(params, "i_max", 8);
  std::uint64_t stage_fuel = param_u64(params, "fuel", 10000);

  ReductionEngine engine(sc.space, coloring, stage_fuel);
  ReductionTrace trace = engine.build(seed, i_max);

  SeedOutcome out;
  bool verified = false;
  if (trace.chosen_color) {
    MonoCertificate cert;
    cert.points = trace.emitted;
    cert.color = *trace.chosen_color;
    verified = trace.emitted_distinct &&
               verify_certificate(sc.space, coloring, cert);
    out.ok = true;
    out.verification_failure = !verified;
    out.emitted = trace.emitted;
    out.has_emitted = true;
  } else {
    bool any_fuel = false;
    for (const auto& t : trace.tracks) {
      for (const auto& s : t.stages) {
        if (s.status == StageStatus::fuel_exhausted) any_fuel = true;
      }
    }
    out.fuel_exhausted = any_fuel;
    out.error = !any_fuel;
  }
  std::string status = trace.chosen_color
                           ? "ok"
                           : (out.fuel_exhausted ? "fuel-exhausted" : "error");
  out.result = Json{{"seed", point_literal(seed)},
                    {"status", status},
                    {"verified", verified},
                    {"trace", trace.to_json()}};
  return out;
}

SeedOutcome run_check_seed(const Scenario& sc, const Json& params,
                           const Point& seed) {
  Coloring coloring = Coloring::from_spec(sc.coloring_spec);
  auto side = [&](const char* key) {
    std::vector<Point> pts;
    if (params.contains(key)) {
      for (const auto& lit : params.at(key)) {
        pts.push_back(parse_point(lit.get<std::string>()));
      }
    }
    return pts;
  };
  std::vector<Point> b1 = side("b1");
  std::vector<Point> b2 = side("b2");
  std::uint64_t horizon = param_u64(params, "horizon", 64);
  if (b1.empty() && b2.empty()) {
    // default side sets slide along the enumeration from the seed
    std::size_t n = static_cast<std::size_t>(coloring.dimension());
    for (std::size_t i = 0; i + 1 < n; ++i) {
      b1.push_back(sc.space.enumerate_at(seed, i));
      b2.push_back(sc.space.enumerate_at(seed, i + 1));
    }
  }
  std::vector<Point> a_set{seed};
  for (const auto& p : b1) a_set.push_back(p);
  for (const auto& p : b2) a_set.push_back(p);
  std::sort(a_set.begin(), a_set.end(), point_less);
  a_set.erase(std::unique(a_set.begin(), a_set.end()), a_set.end());

  TransitivityReport rep =
      almost_transitivity_check(sc.space, coloring, a_set, b1, b2, horizon);
  SeedOutcome out;
  out.ok = true;
  out.result = Json{{"seed", point_literal(seed)},
                    {"status", "ok"},
                    {"verdict", verdict_name(rep.verdict)},
                    {"report", transitivity_to_json(rep)}};
  return out;
}

// --- props bundles ------------------------------------------------------

struct CheckTally {
  std::string name;
  std::uint64_t passed = 0;
  std::uint64_t failed = 0;
};

std::string random_bits(std::mt19937_64& gen, std::size_t len) {
  std::string s;
  s.reserve(len);
  for (std::size_t i = 0; i < len; ++i) s.push_back((gen() & 1) ? '1' : '0');
  return s;
}

EvpSeq random_canonical(std::mt19937_64& gen) {
  std::size_t plen = gen() % 8;
  std::size_t qlen = 1 + gen() % 5;
  return EvpSeq::canonical(random_bits(gen, plen), random_bits(gen, qlen));
}

FiniteFlip random_flip(std::mt19937_64& gen, std::uint64_t max_index) {
  return FiniteFlip::from_index(gen() % max_index);
}

std::vector<CheckTally> props_parity(const Space& space, const Point& seed,
                                     std::uint64_t samples,
                                     std::mt19937_64& gen) {
  const EvpSeq& base = std::get<EvpSeq>(seed);
  CheckTally flips{"flip-parity"};
  CheckTally symmetry{"symmetry"};
  CheckTally blocks{"block-transitivity"};
  for (std::uint64_t s = 0; s < samples; ++s) {
    EvpSeq x = act(random_flip(gen, 4096), base);
    FiniteFlip g = FiniteFlip::from_index(1 + gen() % 4095);
    EvpSeq y = act(g, x);
    bool even = g.size() % 2 == 0;
    (parity_color(x, y) == (even ? 1 : 2) ? flips.passed : flips.failed) += 1;
    (parity_color(x, y) == parity_color(y, x) ? symmetry.passed
                                              : symmetry.failed) += 1;

    EvpSeq a = act(random_flip(gen, 4096), base);
    EvpSeq b = act(random_flip(gen, 4096), base);
    EvpSeq c = act(random_flip(gen, 4096), base);
    if (a == b || b == c || a == c) {
      blocks.passed += 1;  // implication needs three distinct points
      continue;
    }
    int ab = parity_color(a, b);
    int bc = parity_color(b, c);
    int ac = parity_color(a, c);
    bool holds = true;
    if (ab == 1 && bc == 1) holds = ac == 1;
    if (ab == 2 && bc == 2) holds = ac == 1;  // two blocks fold back
    (holds ? blocks.passed : blocks.failed) += 1;
  }
  (void)space;
  return {flips, symmetry, blocks};
}

std::vector<CheckTally> props_arithmetic(std::uint64_t samples,
                                         std::mt19937_64& gen) {
  CheckTally round{"rational-roundtrip"};
  CheckTally plus{"odometer-plus-one"};
  CheckTally inverse{"odometer-inverse"};
  for (std::uint64_t s = 0; s < samples; ++s) {
    EvpSeq x = random_canonical(gen);
    (from_rational(to_rational(x)) == x ? round.passed : round.failed) += 1;

    TwoAdicInt before = to_rational(x);
    TwoAdicInt after = to_rational(odometer(x));
    bool plus_one =
        after.num() * before.den() == (before.num() + before.den()) * after.den();
    (plus_one ? plus.passed : plus.failed) += 1;

    bool inv = odometer_inverse(odometer(x)) == x &&
               odometer(odometer_inverse(x)) == x;
    (inv ? inverse.passed : inverse.failed) += 1;
  }
  return {round, plus, inverse};
}

std::vector<CheckTally> props_order(const Space& space, const Point& seed,
                                    std::uint64_t samples,
                                    std::mt19937_64& gen) {
  const EvpSeq& base = std::get<EvpSeq>(seed);
  CheckTally succ{"successor-increases"};
  CheckTally diff{"successor-difference"};
  CheckTally trans{"order-transitivity"};
  for (std::uint64_t s = 0; s < samples; ++s) {
    EvpSeq x = act(random_flip(gen, 4096), base);
    Point px = x;
    Point sx = space.zeta_successor(px);
    (space.zeta_compare(px, sx) == std::strong_ordering::less ? succ.passed
                                                              : succ.failed) += 1;
    (integer_difference(x, std::get<EvpSeq>(sx)) == 1 ? diff.passed
                                                      : diff.failed) += 1;

    EvpSeq a = act(random_flip(gen, 4096), base);
    EvpSeq b = act(random_flip(gen, 4096), base);
    EvpSeq c = act(random_flip(gen, 4096), base);
    auto lt = [&](const EvpSeq& u, const EvpSeq& v) {
      return !(u == v) &&
             space.zeta_compare(u, v) == std::strong_ordering::less;
    };
    bool holds = !(lt(a, b) && lt(b, c)) || lt(a, c);
    (holds ? trans.passed : trans.failed) += 1;
  }
  return {succ, diff, trans};
}

SeedOutcome run_props_seed(const Scenario& sc, const Json& params,
                           const Point& seed, std::uint64_t rng_seed,
                           std::size_t seed_index) {
  if (sc.space.backend() != Space::Backend::e0) {
    throw BackendMismatchError("props bundles run on the binary sequence backend");
  }
  std::string bundle = params.value("bundle", std::string("parity"));
  std::uint64_t samples = param_u64(params, "samples", 200);
  std::mt19937_64 gen(splitmix64(rng_seed ^ (0x9e3779b9ull * (seed_index + 1))));

  std::vector<CheckTally> checks;
  if (bundle == "parity") {
    checks = props_parity(sc.space, seed, samples, gen);
  } else if (bundle == "arithmetic") {
    checks = props_arithmetic(samples, gen);
  } else if (bundle == "order") {
    checks = props_order(sc.space, seed, samples, gen);
  } else {
    throw ParseError("unknown props bundle: " + bundle);
  }

  SeedOutcome out;
  out.ok = true;
  std::uint64_t failed_total = 0;
  Json arr = Json::array();
  for (const auto& c : checks) {
    failed_total += c.failed;
    arr.push_back(Json{{"name", c.name},
                       {"passed", c.passed},
                       {"failed", c.failed}});
  }
  out.verification_failure = failed_total > 0;
  out.result = Json{{"seed", point_literal(seed)},
                    {"status", "ok"},
                    {"bundle", bundle},
                    {"samples", samples},
                    {"failed_total", failed_total},
                    {"checks", std::move(arr)}};
  return out;
}

SeedOutcome run_seed(const Scenario& sc, const Json& params, std::size_t index,
                     std::uint64_t rng_seed) {
  const Point& seed = sc.seeds[index];
  try {
    if (sc.engine == "ramsey") return run_ramsey_seed(sc, params, seed);
    if (sc.engine == "reduce") return run_reduce_seed(sc, params, seed);
    if (sc.engine == "check-coloring") return run_check_seed(sc, params, seed);
    if (sc.engine == "props")
      return run_props_seed(sc, params, seed, rng_seed, index);
    throw ParseError("unknown engine: " + sc.engine);
  } catch (const std::exception& e) {
    return error_outcome(seed, e.what());
  }
}

}  // namespace

Scenario Scenario::from_json(const Json& doc) {
  if (!doc.is_object()) throw ParseError("scenario must be a JSON object");
  Scenario sc;
  sc.raw = doc;

  if (!doc.contains("backend")) throw ParseError("scenario needs a backend");
  const Json& backend = doc.at("backend");
  std::string backend_name =
      backend.is_object() ? backend.at("type").get<std::string>()
                          : backend.get<std::string>();
  if (backend_name == "e0") {
    sc.space = Space::e0();
  } else if (backend_name == "smooth_product") {
    sc.space = Space::smooth_product();
  } else {
    throw ParseError("unknown backend: " + backend_name);
  }

  if (!doc.contains("engine")) throw ParseError("scenario needs an engine");
  sc.engine = doc.at("engine").get<std::string>();
  if (sc.engine != "ramsey" && sc.engine != "reduce" &&
      sc.engine != "check-coloring" && sc.engine != "props") {
    throw ParseError("unknown engine: " + sc.engine);
  }

  if (!doc.contains("seeds") || !doc.at("seeds").is_array() ||
      doc.at("seeds").empty()) {
    throw ParseError("scenario needs a non-empty seeds array");
  }
  for (const auto& lit : doc.at("seeds")) {
    Point p = parse_point(lit.get<std::string>());
    sc.space.require(p);
    sc.seeds.push_back(std::move(p));
  }

  bool needs_coloring = sc.engine != "props";
  if (needs_coloring) {
    if (!doc.contains("coloring")) {
      throw ParseError("engine " + sc.engine + " needs a coloring spec");
    }
    sc.coloring_spec = doc.at("coloring");
    Coloring::from_spec(sc.coloring_spec);  // validate eagerly
  }

  if (doc.contains("params")) {
    if (!doc.at("params").is_object()) {
      throw ParseError("params must be an object");
    }
    sc.params = doc.at("params");
  }
  if (doc.contains("output")) {
    sc.output_path = doc.at("output").get<std::string>();
  }
  return sc;
}

Scenario Scenario::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open scenario file: " + path);
  Json doc = Json::parse(in);
  return from_json(doc);
}

RunReport run_scenario(const Scenario& scenario, const RunOptions& options) {
  auto started = std::chrono::steady_clock::now();

  Json params = scenario.params;
  if (options.fuel_override) params["fuel"] = *options.fuel_override;
  if (options.rng_seed_override) params["rng_seed"] = *options.rng_seed_override;
  std::uint64_t rng_seed = param_u64(params, "rng_seed", 1);

  std::vector<SeedOutcome> outcomes(scenario.seeds.size());
  unsigned jobs = std::max(1u, options.jobs);
  jobs = std::min<unsigned>(jobs, scenario.seeds.size());
  if (jobs <= 1) {
    for (std::size_t i = 0; i < scenario.seeds.size(); ++i) {
      outcomes[i] = run_seed(scenario, params, i, rng_seed);
    }
  } else {
    std::atomic<std::size_t> cursor{0};
    auto worker = [&]() {
      for (;;) {
        std::size_t i = cursor.fetch_add(1);
        if (i >= scenario.seeds.size()) return;
        outcomes[i] = run_seed(scenario, params, i, rng_seed);
      }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  Json results = Json::array();
  std::uint64_t ok = 0, fuel = 0, errors = 0, vfail = 0;
  for (const auto& o : outcomes) {
    results.push_back(o.result);
    if (o.error) {
      errors += 1;
    } else if (o.fuel_exhausted) {
      fuel += 1;
    } else if (o.verification_failure) {
      vfail += 1;
    } else if (o.ok) {
      ok += 1;
    }
  }

  Json report;
  report["engine_version"] = kEngineVersion;
  report["scenario"] = scenario.raw;
  report["results"] = std::move(results);

  if (scenario.engine == "reduce") {
    // agreement indices between reduction sequences of related seeds
    Json pairs = Json::array();
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
      for (std::size_t j = i + 1; j < outcomes.size(); ++j) {
        if (!outcomes[i].has_emitted || !outcomes[j].has_emitted) continue;
        if (!scenario.space.related(scenario.seeds[i], scenario.seeds[j])) {
          continue;
        }
        auto agree = compare_e1(outcomes[i].emitted, outcomes[j].emitted);
        pairs.push_back(
            Json{{"left", i},
                 {"right", j},
                 {"agreement_from", agree ? Json(*agree) : Json(nullptr)},
                 {"distinct", outcomes[i].emitted != outcomes[j].emitted}});
      }
    }
    report["pairs"] = std::move(pairs);
  }

  report["summary"] = Json{{"seeds", scenario.seeds.size()},
                           {"ok", ok},
                           {"fuel_exhausted", fuel},
                           {"errors", errors},
                           {"verification_failures", vfail}};

  auto elapsed = std::chrono::duration<double>(
                     std::chrono::steady_clock::now() - started)
                     .count();
  report["timing"] = Json{{"seconds", elapsed}};

  RunReport out;
  out.document = std::move(report);
  out.exit_code = (errors > 0 || vfail > 0) ? 1 : (fuel > 0 ? 2 : 0);
  return out;
}

std::string stable_report_text(const Json& report) {
  Json copy = report;
  copy.erase("timing");
  return copy.dump(2) + "\n";
}

}  // namespace ramseylab
