#include "bbs_cli/experiment.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "bbs/carrier.hpp"
#include "bbs/classify.hpp"
#include "bbs/continuum.hpp"
#include "bbs/dynamics.hpp"
#include "bbs/errors.hpp"
#include "bbs/lattice.hpp"
#include "bbs/pitman.hpp"
#include "bbs/random.hpp"
#include "bbs/rng.hpp"
#include "bbs/simplex.hpp"
#include "bbs/stats.hpp"

namespace bbs::cli {

void to_json(json& j, const ExperimentSpec& s) {
  j = json{{"command", s.command}, {"params", s.params}, {"outputs", s.outputs}};
  j["seed"] = s.seed ? json(*s.seed) : json(nullptr);
}

void from_json(const json& j, ExperimentSpec& s) {
  s.command = j.at("command").get<std::string>();
  s.params = j.value("params", json::object());
  s.outputs = j.value("outputs", std::map<std::string, std::string>{});
  if (j.contains("seed") && !j["seed"].is_null())
    s.seed = j["seed"].get<std::uint64_t>();
  else
    s.seed.reset();
}

ExperimentSpec load_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cli", "cannot open spec '" + path + "'");
  try {
    return json::parse(in).get<ExperimentSpec>();
  } catch (const json::exception& e) {
    throw ParseError("cli", std::string("malformed spec: ") + e.what());
  }
}

void save_spec(const ExperimentSpec& spec, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cli", "cannot write '" + path + "'");
  out << json(spec).dump(2) << '\n';
}

std::string version() { return BBS_VERSION; }

std::uint64_t resolve_seed(const ExperimentSpec& spec) {
  if (spec.seed) return *spec.seed;
  if (const char* env = std::getenv("BBS_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw ParseError("cli", "BBS_SEED is not an unsigned integer");
    }
  }
  return 1;
}

namespace {

template <class T>
T param(const json& p, const char* key, T fallback) {
  if (!p.contains(key) || p[key].is_null()) return fallback;
  try {
    return p[key].get<T>();
  } catch (const json::exception&) {
    throw ParseError("cli", std::string("parameter '") + key + "' has the wrong type");
  }
}

template <class T>
T required(const json& p, const char* key) {
  if (!p.contains(key) || p[key].is_null())
    throw InvalidArgument("cli", std::string("missing parameter '") + key + "'");
  return param<T>(p, key, T{});
}

std::vector<double> number_list(const json& p, const char* key) {
  const json& v = p.contains(key) ? p[key] : json(nullptr);
  if (v.is_array()) return v.get<std::vector<double>>();
  if (v.is_string()) {
    std::vector<double> out;
    std::stringstream ss(v.get<std::string>());
    std::string item;
    while (std::getline(ss, item, ',')) {
      try {
        out.push_back(std::stod(item));
      } catch (const std::exception&) {
        throw ParseError("cli", std::string("bad number in '") + key + "'");
      }
    }
    return out;
  }
  throw InvalidArgument("cli", std::string("missing parameter '") + key + "'");
}

Configuration load_config(const json& p) {
  if (p.contains("config_file")) return read_configuration_file(p["config_file"].get<std::string>());
  if (p.contains("config")) return parse_configuration(p["config"].get<std::string>());
  throw InvalidArgument("cli", "need --config or --config-file");
}

std::string spaced(const std::vector<int>& cells) {
  std::string s;
  for (std::size_t k = 0; k < cells.size(); ++k) {
    if (k) s += ' ';
    s += symbol_char(cells[k]);
  }
  return s;
}

json decision_json(Decision d) { return std::string(to_string(d)); }

json config_json(const Configuration& c) {
  return json{{"kappa", c.kappa},
              {"offset", c.offset},
              {"cells", cells_to_string(c.cells)},
              {"boundary", std::string(to_string(c.boundary))}};
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw ParseError("cli", "cannot write '" + path + "'");
  out << content;
}

struct Context {
  const ExperimentSpec& spec;
  std::ostream& out;
  std::ostream& err;
  bool json_out;
  std::uint64_t seed;
  json results = json::object();
  json diagnostics = json::object();
  int exit_code = kOk;
};

// ---- basis ---------------------------------------------------------------

void cmd_basis(Context& c) {
  const int kappa = required<int>(c.spec.params, "kappa");
  const SimplexBasis b = build_simplex_basis(kappa);
  c.results["kappa"] = kappa;
  c.results["vectors"] = b.vectors();
  c.results["gram_deviation"] = gram_report(b);
  if (!c.json_out) {
    c.out << std::setprecision(17);
    for (std::size_t i = 0; i < b.size(); ++i) {
      c.out << "e_" << i << " =";
      for (double x : b[i]) c.out << ' ' << x;
      c.out << '\n';
    }
    c.out << "gram deviation " << gram_report(b) << '\n';
  }
}

// ---- evolve / invert -----------------------------------------------------

Word inverse_word(const Word& w) {
  Word inv(w.rbegin(), w.rend());
  for (auto& l : inv) l.inverse = !l.inverse;
  return inv;
}

std::string letter_name(const Letter& l) {
  return "T" + std::to_string(l.color) + (l.inverse ? "^-1" : "");
}

void cmd_evolve(Context& c, bool invert) {
  const json& p = c.spec.params;
  const Configuration start = load_config(p);
  Word word = p.contains("word") ? parse_word(p["word"].get<std::string>()) : full_update(start.kappa);
  for (const auto& l : word)
    if (l.color > start.kappa) throw InvalidArgument("cli", "word uses a colour above kappa");
  const bool full = word == full_update(start.kappa);
  if (invert) word = inverse_word(word);
  const int steps = param<int>(p, "steps", 1);
  if (steps < 0) throw InvalidArgument("cli", "steps must be >= 0");
  const std::string route = param<std::string>(p, "route", "both");
  if (route != "pitman" && route != "direct" && route != "both")
    throw InvalidArgument("cli", "route must be pitman, direct or both");
  const bool trace = param<bool>(p, "trace", false);
  const bool compact = param<bool>(p, "compact", false);
  const auto period = param<std::int64_t>(p, "periodic", 0);
  if (start.boundary == Boundary::Windowed && period <= 0)
    throw UndecidableError("cli", "windowed configurations need --periodic to fix the edge loads");

  const std::string unit = full ? "T" : "W";
  auto power = [&](int s) {
    std::string base = invert ? unit + "^-" : unit + "^";
    if (s == 0) return std::string("eta");
    if (s == 1) return (invert ? unit + "^-1" : unit) + " eta";
    return base + std::to_string(s) + " eta";
  };

  std::vector<std::pair<std::string, Configuration>> states{{"eta", start}};
  PathEncoding path = encode(start);
  Configuration direct = start;
  const bool use_pitman = route != "direct", use_direct = route != "pitman";
  for (int s = 1; s <= steps; ++s) {
    std::string prefix;
    for (std::size_t k = 0; k < word.size(); ++k) {
      const Letter& l = word[k];
      if (use_pitman) {
        if (period > 0) {
          path = encode(apply_word_periodic(decode(path), Word{l}, static_cast<std::size_t>(period)));
        } else {
          path = l.inverse ? apply_Ti_inverse(path, l.color) : apply_Ti(path, l.color);
        }
      }
      if (use_direct) {
        std::optional<std::int64_t> load;
        if (period > 0)
          load = periodic_edge_load(direct, l.color, static_cast<std::size_t>(period),
                                    l.inverse ? Side::Right : Side::Left);
        direct = l.inverse ? apply_Ti_inverse_direct(direct, l.color, load)
                           : apply_Ti_direct(direct, l.color, load);
      }
      const Configuration now = use_pitman ? decode(path) : direct;
      if (use_pitman && use_direct && !same_state(now, direct)) {
        c.err << "error: route mismatch at step " << s << ", letter " << k << " (" << letter_name(l)
              << ")\n  pitman: " << cells_to_string(now.cells) << "\n  direct: " << cells_to_string(direct.cells)
              << '\n';
        c.diagnostics["mismatch"] = {{"step", s}, {"letter", k}};
        c.exit_code = kUsage;
        return;
      }
      prefix = letter_name(l) + " " + prefix;
      if (trace && k + 1 < word.size()) states.emplace_back(prefix + power(s - 1), now);
    }
    states.emplace_back(power(s), use_pitman ? decode(path) : direct);
  }

  // Common display window.
  std::int64_t lo = start.first(), hi = start.last();
  if (start.boundary == Boundary::FiniteSupport) {
    for (const auto& [_, st] : states) {
      const Configuration t = trimmed(st);
      if (!t.cells.empty()) {
        lo = std::min(lo, t.first());
        hi = std::max(hi, t.last());
      }
    }
  }
  std::size_t width = 0;
  for (const auto& [label, _] : states) width = std::max(width, label.size());
  json lines = json::array();
  for (const auto& [label, st] : states) {
    const Configuration shown = st.boundary == Boundary::FiniteSupport ? rewindow(st, lo, hi) : st;
    lines.push_back({{"label", label}, {"offset", shown.offset}, {"cells", cells_to_string(shown.cells)}});
    if (!c.json_out) {
      c.out << std::left << std::setw(static_cast<int>(width)) << label << "  "
            << (compact ? cells_to_string(shown.cells) : spaced(shown.cells)) << '\n';
    }
  }
  c.results["word"] = format_word(word);
  c.results["route"] = route;
  c.results["states"] = lines;
  c.results["routes_agree"] = use_pitman && use_direct;
}

// ---- carrier ---------------------------------------------------------------

void cmd_carrier(Context& c) {
  const json& p = c.spec.params;
  const Configuration config = load_config(p);
  const int color = required<int>(p, "color");
  std::optional<std::int64_t> edge;
  if (p.contains("edge_load")) edge = p["edge_load"].get<std::int64_t>();
  const CarrierTrace t = run_carrier(config, color, edge);
  const CarrierTrace h = carrier_from_heights(encode(config), color, edge);
  if (t.loads != h.loads) {
    c.err << "error: carrier recurrence and sup A - A disagree\n";
    c.exit_code = kUsage;
    return;
  }
  std::ostringstream csv;
  csv << "n,eta,W\n";
  for (std::size_t k = 0; k < t.loads.size(); ++k)
    csv << config.offset + static_cast<std::int64_t>(k) << ',' << config.cells[k] << ',' << t.loads[k] << '\n';
  if (auto it = c.spec.outputs.find("csv"); it != c.spec.outputs.end()) write_file(it->second, csv.str());
  c.results["color"] = color;
  c.results["offset"] = t.offset;
  c.results["initial"] = t.initial;
  c.results["loads"] = t.loads;
  c.results["max_load"] = t.max_load();
  if (!c.json_out) c.out << csv.str();
}

// ---- pitman ----------------------------------------------------------------

ScalarPath read_scalar_csv(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw ParseError("cli", "cannot open '" + file + "'");
  std::string line;
  std::vector<std::pair<std::int64_t, double>> rows;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    if (lineno == 1 && (line[0] == 'n' || line[0] == 'N')) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw ParseError("cli", "expected 'n,value' on line " + std::to_string(lineno));
    try {
      rows.emplace_back(std::stoll(line.substr(0, comma)), std::stod(line.substr(comma + 1)));
    } catch (const std::exception&) {
      throw ParseError("cli", "bad number on line " + std::to_string(lineno));
    }
  }
  if (rows.empty()) throw ParseError("cli", "empty path file");
  ScalarPath s;
  s.lo = rows.front().first;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    if (rows[k].first != s.lo + static_cast<std::int64_t>(k))
      throw ParseError("cli", "indices must be consecutive");
    s.values.push_back(rows[k].second);
  }
  return s;
}

Tail tail_from(const json& p, const char* slope_key, const char* inf_key) {
  if (p.contains(slope_key)) return Tail::with_slope(p[slope_key].get<double>());
  if (p.contains(inf_key)) return Tail::open(p[inf_key].get<double>());
  return Tail::open();
}

void cmd_pitman(Context& c) {
  const json& p = c.spec.params;
  ScalarPath pi = read_scalar_csv(required<std::string>(p, "input"));
  pi.left = tail_from(p, "left_slope", "left_inf");
  pi.right = tail_from(p, "right_slope", "right_inf");
  const std::string dir = param<std::string>(p, "direction", "forward");
  ScalarPath out;
  if (dir == "forward")
    out = pitman_two_sided(pi);
  else if (dir == "inverse")
    out = pitman_inverse(pi);
  else if (dir == "one-sided")
    out = pitman_one_sided(pi);
  else
    throw InvalidArgument("cli", "direction must be forward, inverse or one-sided");
  const double step = param<double>(p, "step", 1.0);
  if (dir != "one-sided") {
    c.results["domain"] = {
        {"R_P1", decision_json(in_domain(pi, PitmanDomain::R_P1, step))},
        {"R_P1inv", decision_json(in_domain(pi, PitmanDomain::R_P1inv, step))},
        {"R_P1invP1", decision_json(in_domain(pi, PitmanDomain::R_P1invP1, step))},
        {"R_P1P1inv", decision_json(in_domain(pi, PitmanDomain::R_P1P1inv, step))},
    };
  }
  std::ostringstream csv;
  csv << std::setprecision(17) << "n,value\n";
  for (std::int64_t n = out.lo; n <= out.hi(); ++n) csv << n << ',' << out.at(n) << '\n';
  if (auto it = c.spec.outputs.find("csv"); it != c.spec.outputs.end()) write_file(it->second, csv.str());
  c.results["direction"] = dir;
  c.results["lo"] = out.lo;
  c.results["values"] = out.values;
  if (!c.json_out) c.out << csv.str();
}

// ---- classify / examples ------------------------------------------------------

json class_json(const ClassReport& r) {
  auto num = [](double x) { return std::isfinite(x) ? json(x) : json(x > 0 ? "inf" : "-inf"); };
  json ratios = json::array();
  for (const auto& pt : r.ratios) ratios.push_back({pt.n, pt.ratio ? json(*pt.ratio) : json(nullptr)});
  return json{{"color", r.color},
              {"boundary", std::string(to_string(r.boundary))},
              {"exact", r.exact},
              {"M0", num(r.M0)},
              {"I0", num(r.I0)},
              {"Minf", num(r.Minf)},
              {"Iminf", num(r.Iminf)},
              {"max_carrier_load", r.max_carrier_load},
              {"T_inv_T", decision_json(r.t_inv_t)},
              {"T_T_inv", decision_json(r.t_t_inv)},
              {"reversible", decision_json(r.reversible)},
              {"subcritical_minus", decision_json(r.subcritical_minus)},
              {"subcritical_plus", decision_json(r.subcritical_plus)},
              {"critical_minus", decision_json(r.critical_minus)},
              {"critical_plus", decision_json(r.critical_plus)},
              {"ratios", ratios}};
}

json good_json(const GoodSetReport& g) {
  json colors = json::array(), pairs = json::array();
  for (const auto& c : g.colors)
    colors.push_back({{"color", c.color},
                      {"ratio_plus", decision_json(c.ratio_plus)},
                      {"ratio_minus", decision_json(c.ratio_minus)},
                      {"min_ratio_plus", c.min_ratio_plus},
                      {"max_ratio_plus", c.max_ratio_plus},
                      {"min_ratio_minus", c.min_ratio_minus},
                      {"max_ratio_minus", c.max_ratio_minus}});
  for (const auto& p : g.pairs)
    pairs.push_back({{"i", p.i}, {"j", p.j}, {"max_ratio", p.max_ratio}, {"bounded", decision_json(p.bounded)}});
  return json{{"horizon",
               {{"left", g.horizon.left},
                {"right", g.horizon.right},
                {"tolerance", g.horizon.tolerance},
                {"pair_bound", g.horizon.pair_bound}}},
              {"colors", colors},
              {"pairs", pairs},
              {"good", decision_json(g.good)}};
}

void cmd_classify(Context& c) {
  const json& p = c.spec.params;
  const Configuration config = load_config(p);
  const PathEncoding path = encode(config);
  json reports = json::array();
  if (p.contains("color")) {
    reports.push_back(class_json(reversibility_report(path, p["color"].get<int>())));
  } else {
    for (int i = 1; i <= config.kappa; ++i) reports.push_back(class_json(reversibility_report(path, i)));
  }
  c.results["reports"] = reports;
  Horizon h;
  const std::int64_t H = param<std::int64_t>(p, "horizon", 0);
  if (H > 0) {
    h.left = -H;
    h.right = H;
  } else {
    h.left = std::min<std::int64_t>(path.first_index(), 0);
    h.right = std::max<std::int64_t>(path.last_index(), 0);
  }
  h.tolerance = param<double>(p, "tolerance", 0.1);
  h.pair_bound = param<double>(p, "pair_bound", 100.0);
  c.results["good_set"] = good_json(good_set_check(path, h));
  if (!c.json_out) c.out << json{{"reports", reports}, {"good_set", c.results["good_set"]}}.dump(2) << '\n';
}

void cmd_examples(Context& c) {
  const json& p = c.spec.params;
  const std::string name = required<std::string>(p, "name");
  const int epochs = param<int>(p, "epochs", 3);
  const Configuration ex = example_config(name, epochs);
  c.results["config"] = config_json(ex);
  if (!c.json_out) c.out << format_configuration(ex) << '\n';
  if (param<bool>(p, "t2", false)) {
    const Configuration t2 = ex.boundary == Boundary::FiniteSupport
                                 ? decode(apply_Ti(encode(ex), 2))
                                 : apply_word_periodic(ex, Word{{2, false}}, 3);
    c.results["T2"] = config_json(t2);
    if (!c.json_out) c.out << format_configuration(t2) << '\n';
  }
}

// ---- sample / invariance -----------------------------------------------------------

void cmd_sample(Context& c) {
  const json& p = c.spec.params;
  const ColorLaw law = ColorLaw::from_probs(number_list(p, "probs"));
  std::int64_t lo = param<std::int64_t>(p, "lo", 0), hi = param<std::int64_t>(p, "hi", -1);
  if (p.contains("sites")) {
    lo = 0;
    hi = p["sites"].get<std::int64_t>() - 1;
  }
  if (hi < lo) throw InvalidArgument("cli", "need --sites N or --lo/--hi");
  const Configuration conf = sample_iid(law, lo, hi, c.seed);
  const std::string line = format_configuration(conf);
  if (auto it = c.spec.outputs.find("config"); it != c.spec.outputs.end())
    write_file(it->second, line + "\n");
  else if (!c.json_out)
    c.out << line << '\n';
  if (conf.last() >= 1 && conf.first() <= 1) {
    json d = json::array();
    for (const auto& e : density_check(conf, law))
      d.push_back({{"color", e.color}, {"n", e.n}, {"height", e.height}, {"ratio", e.ratio}, {"z", e.z}});
    c.results["density"] = d;
  }
  c.results["sites"] = conf.cells.size();
  c.diagnostics["rng"] = std::string(kRngName);
}

void cmd_invariance(Context& c) {
  const json& p = c.spec.params;
  InvarianceSettings s;
  s.law = ColorLaw::from_probs(number_list(p, "probs"));
  if (p.contains("kappa") && p["kappa"].get<int>() != s.law.kappa)
    throw InvalidArgument("cli", "--kappa does not match the number of probabilities");
  s.color = param<int>(p, "color", 1);
  s.sites = param<std::int64_t>(p, "sites", 1'000'000);
  s.word_length = param<int>(p, "word", 2);
  s.trials = param<int>(p, "trials", 10);
  s.threshold = param<double>(p, "threshold", 1e-3);
  s.required_passes = param<int>(p, "required", static_cast<int>(std::ceil(0.9 * s.trials)));
  s.threads = param<unsigned>(p, "threads", 0);
  s.seed = c.seed;
  const InvarianceReport r = invariance_test(s);

  auto trials_json = [](const InvarianceReport& rep) {
    json t = json::array();
    for (const auto& tr : rep.trials)
      t.push_back({{"seed", tr.seed},
                   {"contaminated", tr.contaminated},
                   {"statistic", tr.statistic},
                   {"df", tr.df},
                   {"p_value", tr.p_value},
                   {"pass", tr.pass}});
    return t;
  };
  c.results["trials"] = trials_json(r);
  c.results["used"] = r.used;
  c.results["excluded"] = r.excluded;
  c.results["passes"] = r.passes;
  c.results["pass"] = r.pass;
  c.diagnostics["rng"] = r.rng;

  bool control_ok = true;
  if (param<bool>(p, "control", true)) {
    InvarianceSettings cs = s;
    cs.null_law = swapped_law(s.law, s.color);
    const InvarianceReport cr = invariance_test(cs);
    c.results["control"] = {{"max_p", cr.max_p}, {"passes", cr.passes}, {"rejects", cr.max_p < 1e-6}};
    control_ok = cr.max_p < 1e-6;
  }

  std::ostringstream csv;
  csv << "pattern,observed,expected\n";
  const std::size_t base = static_cast<std::size_t>(s.law.kappa) + 1;
  for (std::size_t k = 0; k < r.pattern_counts.size(); ++k) {
    std::string pat(static_cast<std::size_t>(s.word_length), '0');
    std::size_t q = k;
    for (int d = s.word_length - 1; d >= 0; --d) {
      pat[static_cast<std::size_t>(d)] = symbol_char(static_cast<int>(q % base));
      q /= base;
    }
    csv << pat << ',' << r.pattern_counts[k] << ',' << r.pattern_expected[k] * r.used << '\n';
  }
  if (auto it = c.spec.outputs.find("csv"); it != c.spec.outputs.end()) write_file(it->second, csv.str());

  if (!r.pass || !control_ok) c.exit_code = kStatFailure;
  if (!c.json_out) {
    c.out << "invariance T_" << s.color << ": " << r.passes << "/" << r.used << " trials with p > "
          << s.threshold << " (" << r.excluded << " excluded) -> " << (r.pass ? "PASS" : "FAIL") << '\n';
    if (c.results.contains("control"))
      c.out << "control (swapped null): max p = " << c.results["control"]["max_p"].get<double>() << " -> "
            << (control_ok ? "rejected" : "NOT rejected") << '\n';
  }
}

// ---- continuum ---------------------------------------------------------------------

void cmd_donsker(Context& c) {
  const json& p = c.spec.params;
  const std::vector<double> coeff = number_list(p, "c");
  const int kappa = static_cast<int>(coeff.size()) - 1;
  if (p.contains("kappa") && p["kappa"].get<int>() != kappa)
    throw InvalidArgument("cli", "--kappa does not match the number of coefficients");
  const SimplexBasis basis = build_simplex_basis(kappa);
  const auto n = param<std::int64_t>(p, "n", 10'000);
  const int samples = param<int>(p, "samples", 10'000);
  const double x = param<double>(p, "x", 1.0);
  const double threshold = param<double>(p, "threshold", 0.02);
  const double cov_bound = param<double>(p, "cov_bound", 0.05);
  const unsigned threads = param<unsigned>(p, "threads", 0);
  if (samples < 2) throw InvalidArgument("cli", "need at least two samples");
  const Vec D = basis.combine(coeff);
  (void)near_critical_law(kappa, coeff, static_cast<double>(n));

  std::vector<Vec> values(static_cast<std::size_t>(samples));
  parallel_for(values.size(), threads, [&](std::size_t s) {
    values[s] = donsker_value(basis, coeff, n, x, derive_seed(c.seed, s));
  });
  bool pass = true;
  json comps = json::array();
  std::vector<std::vector<double>> cols(static_cast<std::size_t>(kappa));
  for (int j = 0; j < kappa; ++j) {
    auto& col = cols[static_cast<std::size_t>(j)];
    for (const auto& v : values) col.push_back(v[static_cast<std::size_t>(j)]);
    const double mu = D[static_cast<std::size_t>(j)] * x;
    const KsResult ks = ks_one_sample(col, [&](double y) { return normal_cdf(y, mu, std::sqrt(x)); });
    pass = pass && ks.distance < threshold;
    comps.push_back({{"component", j + 1},
                     {"mean", mean(col)},
                     {"expected_mean", mu},
                     {"variance", variance(col)},
                     {"ks", ks.distance},
                     {"p_value", ks.p_value}});
  }
  json cov = json::array();
  for (int a = 0; a < kappa; ++a)
    for (int b = a + 1; b < kappa; ++b) {
      const double v = covariance(cols[static_cast<std::size_t>(a)], cols[static_cast<std::size_t>(b)]) / x;
      pass = pass && std::abs(v) < cov_bound;
      cov.push_back({{"i", a + 1}, {"j", b + 1}, {"covariance", v}});
    }
  c.results["drift"] = D;
  c.results["components"] = comps;
  c.results["cross_covariance"] = cov;
  c.results["pass"] = pass;
  c.diagnostics["rng"] = std::string(kRngName);
  if (auto it = c.spec.outputs.find("path_csv"); it != c.spec.outputs.end()) {
    const SampledPath path = donsker_rescale(basis, coeff, n, x, c.seed, param<std::int64_t>(p, "subsample", 1));
    std::ostringstream csv;
    csv << std::setprecision(12) << 'x';
    for (int j = 1; j <= kappa; ++j) csv << ",S" << j;
    csv << '\n';
    for (std::int64_t k = -path.m; k <= path.m; ++k) {
      csv << path.x(k);
      for (double v : path.node(k)) csv << ',' << v;
      csv << '\n';
    }
    write_file(it->second, csv.str());
  }
  if (!pass) c.exit_code = kStatFailure;
  if (!c.json_out) {
    for (const auto& comp : comps)
      c.out << "component " << comp["component"] << ": KS to Normal(" << comp["expected_mean"].get<double>()
            << ", " << x << ") = " << comp["ks"].get<double>() << '\n';
    for (const auto& cv : cov)
      c.out << "cov(" << cv["i"] << "," << cv["j"] << ") = " << cv["covariance"].get<double>() << '\n';
    c.out << (pass ? "PASS" : "FAIL") << '\n';
  }
}

void cmd_bm(Context& c) {
  const json& p = c.spec.params;
  BmSettings s;
  s.spec.c = number_list(p, "c");
  s.spec.kappa = static_cast<int>(s.spec.c.size()) - 1;
  if (p.contains("kappa") && p["kappa"].get<int>() != s.spec.kappa)
    throw InvalidArgument("cli", "--kappa does not match the number of coefficients");
  s.L = param<double>(p, "L", 50.0);
  s.h = param<double>(p, "h", 0.01);
  s.Lprime = param<double>(p, "Lprime", s.L / 2);
  s.Lsecond = param<double>(p, "Lsecond", s.Lprime / 2);
  s.seeds = param<int>(p, "seeds", 5000);
  s.threshold = param<double>(p, "threshold", 0.035);
  s.threads = param<unsigned>(p, "threads", 0);
  s.seed = c.seed;
  const BmReport r = bm_invariance_test(s);
  json f = json::array();
  for (const auto& fr : r.functionals)
    f.push_back({{"color", fr.color},
                 {"functional", fr.name},
                 {"ks", fr.ks},
                 {"p_value", fr.p_value},
                 {"control_ks", fr.control_ks},
                 {"pass", fr.pass}});
  c.results["functionals"] = f;
  c.results["excluded"] = r.excluded;
  c.results["max_ks"] = r.max_ks;
  c.results["control_max_ks"] = r.control_max_ks;
  c.results["pass"] = r.pass;
  c.results["control_rejects"] = r.control_rejects;
  c.diagnostics["rng"] = r.rng;
  if (!r.pass || !r.control_rejects) c.exit_code = kStatFailure;
  if (!c.json_out) {
    for (const auto& fr : r.functionals)
      c.out << "T_" << fr.color << ' ' << fr.name << ": KS " << fr.ks << " (control " << fr.control_ks << ")\n";
    c.out << "max KS " << r.max_ks << ", control max KS " << r.control_max_ks << " -> "
          << (r.pass && r.control_rejects ? "PASS" : "FAIL") << '\n';
  }
}

}  // namespace

RunResult run(const ExperimentSpec& spec, std::ostream& out, std::ostream& err) {
  RunResult result;
  const auto t0 = std::chrono::steady_clock::now();
  ExperimentSpec resolved = spec;
  try {
    resolved.seed = resolve_seed(spec);
    Context c{resolved, out, err, param<bool>(spec.params, "json", false), *resolved.seed};
    const std::string& cmd = spec.command;
    if (cmd == "basis")
      cmd_basis(c);
    else if (cmd == "evolve")
      cmd_evolve(c, false);
    else if (cmd == "invert")
      cmd_evolve(c, true);
    else if (cmd == "carrier")
      cmd_carrier(c);
    else if (cmd == "pitman")
      cmd_pitman(c);
    else if (cmd == "classify")
      cmd_classify(c);
    else if (cmd == "examples")
      cmd_examples(c);
    else if (cmd == "sample")
      cmd_sample(c);
    else if (cmd == "invariance-test")
      cmd_invariance(c);
    else if (cmd == "donsker")
      cmd_donsker(c);
    else if (cmd == "bm-invariance")
      cmd_bm(c);
    else
      throw InvalidArgument("cli", "unknown subcommand '" + cmd + "'");
    c.diagnostics["elapsed_seconds"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    result.exit_code = c.exit_code;
    result.report = json{{"spec", resolved}, {"results", c.results}, {"diagnostics", c.diagnostics},
                         {"version", version()}};
    if (c.json_out) out << result.report.dump(2) << '\n';
    if (auto it = spec.outputs.find("report"); it != spec.outputs.end())
      write_file(it->second, result.report.dump(2) + "\n");
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    result.exit_code = kUsage;
    result.report = json{{"spec", resolved},
                         {"results", nullptr},
                         {"diagnostics", {{"error", e.what()}, {"module", e.module()}}},
                         {"version", version()}};
  } catch (const json::exception& e) {
    err << "error: cli: " << e.what() << '\n';
    result.exit_code = kUsage;
  }
  return result;
}

}  // namespace bbs::cli
