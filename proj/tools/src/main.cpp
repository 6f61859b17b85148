#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bbs/errors.hpp"
#include "bbs_cli/experiment.hpp"

namespace {

using bbs::cli::json;

enum class Kind { Int, UInt, Double, String, Flag };

struct Opt {
  const char* flag;
  const char* key;
  Kind kind;
  const char* help;
};

struct Output {
  const char* flag;
  const char* key;
  const char* help;
};

struct Command {
  const char* name;
  const char* help;
  std::vector<Opt> opts;
  std::vector<Output> outputs;
};

const Opt kConfig{"--config", "config", Kind::String, "configuration line, e.g. \"kappa=3 offset=-2 cells=0120\""};
const Opt kConfigFile{"--config-file", "config_file", Kind::String, "file holding a configuration line"};

std::vector<Command> commands() {
  return {
      {"basis", "print the simplex vectors e_0..e_kappa", {{"--kappa", "kappa", Kind::Int, "number of colours"}}, {}},
      {"evolve",
       "apply a word of T_i / T_i^-1 (default: the full update T_k...T_1)",
       {kConfig,
        kConfigFile,
        {"--word", "word", Kind::String, "letters such as \"+1+2-3\" or \"1 2 3\""},
        {"--steps", "steps", Kind::Int, "number of times the word is applied"},
        {"--route", "route", Kind::String, "pitman, direct or both (default both)"},
        {"--trace", "trace", Kind::Flag, "print the state after every letter"},
        {"--compact", "compact", Kind::Flag, "print cells without spaces"},
        {"--periodic", "periodic", Kind::Int, "edge period for windowed configurations"}},
       {}},
      {"invert",
       "apply the inverse of a word",
       {kConfig,
        kConfigFile,
        {"--word", "word", Kind::String, "word whose inverse is applied"},
        {"--steps", "steps", Kind::Int, "number of times"},
        {"--route", "route", Kind::String, "pitman, direct or both"},
        {"--trace", "trace", Kind::Flag, "print the state after every letter"},
        {"--compact", "compact", Kind::Flag, "print cells without spaces"},
        {"--periodic", "periodic", Kind::Int, "edge period for windowed configurations"}},
       {}},
      {"carrier",
       "carrier loads W_n for one colour",
       {kConfig,
        kConfigFile,
        {"--color", "color", Kind::Int, "colour i"},
        {"--edge-load", "edge_load", Kind::Int, "load entering at the left edge (windowed input)"}},
       {{"--csv", "csv", "write n,eta,W to this file"}}},
      {"pitman",
       "Pitman transform of a scalar path given as n,value CSV",
       {{"--input", "input", Kind::String, "CSV file"},
        {"--direction", "direction", Kind::String, "forward, inverse or one-sided"},
        {"--left-slope", "left_slope", Kind::Double, "linear left tail increment"},
        {"--right-slope", "right_slope", Kind::Double, "linear right tail increment"},
        {"--left-inf", "left_inf", Kind::Double, "known infimum of the open left tail"},
        {"--right-inf", "right_inf", Kind::Double, "known infimum of the open right tail"},
        {"--step", "step", Kind::Double, "step magnitude c for the domain checks"}},
       {{"--csv", "csv", "write the transformed path here"}}},
      {"classify",
       "reversibility and good-set report",
       {kConfig,
        kConfigFile,
        {"--color", "color", Kind::Int, "restrict to one colour"},
        {"--horizon", "horizon", Kind::Int, "check ratios on [-H, H]"},
        {"--tolerance", "tolerance", Kind::Double, "ratio tolerance"},
        {"--pair-bound", "pair_bound", Kind::Double, "bound on A_j / A_i"}},
       {}},
      {"examples",
       "built-in example configurations a, b, c",
       {{"--name", "name", Kind::String, "a, b or c"},
        {"--epochs", "epochs", Kind::Int, "number of epochs"},
        {"--t2", "t2", Kind::Flag, "also print T_2 of the example"}},
       {}},
      {"sample",
       "i.i.d. configuration",
       {{"--probs", "probs", Kind::String, "p_0,...,p_kappa"},
        {"--sites", "sites", Kind::Int, "sites 0..N-1"},
        {"--lo", "lo", Kind::Int, "first site"},
        {"--hi", "hi", Kind::Int, "last site"}},
       {{"--out", "config", "write the configuration line here"}}},
      {"invariance-test",
       "chi-square test that T_i preserves the i.i.d. law",
       {{"--kappa", "kappa", Kind::Int, "number of colours (checked against --probs)"},
        {"--probs", "probs", Kind::String, "p_0,...,p_kappa"},
        {"--color", "color", Kind::Int, "colour i"},
        {"--sites", "sites", Kind::Int, "half-width N of the sampled window"},
        {"--word", "word", Kind::Int, "block length"},
        {"--trials", "trials", Kind::Int, "independent trials"},
        {"--required", "required", Kind::Int, "trials that must pass"},
        {"--threshold", "threshold", Kind::Double, "p-value threshold"},
        {"--no-control", "no_control", Kind::Flag, "skip the swapped-law control"}},
       {{"--csv", "csv", "write pattern counts here"}}},
      {"donsker",
       "near-critical walk against Brownian motion with drift",
       {{"--kappa", "kappa", Kind::Int, "number of colours (checked against --c)"},
        {"--c", "c", Kind::String, "c_0,...,c_kappa"},
        {"--n", "n", Kind::Int, "scaling parameter"},
        {"--samples", "samples", Kind::Int, "number of walks"},
        {"--x", "x", Kind::Double, "time at which X is compared"},
        {"--threshold", "threshold", Kind::Double, "KS distance threshold"},
        {"--cov-bound", "cov_bound", Kind::Double, "bound on cross covariances"},
        {"--subsample", "subsample", Kind::Int, "node spacing for --path-csv"}},
       {{"--path-csv", "path_csv", "write one rescaled path here"}}},
      {"bm-invariance",
       "two-sample KS test that T_i preserves Brownian motion with drift",
       {{"--kappa", "kappa", Kind::Int, "number of colours (checked against --c)"},
        {"--c", "c", Kind::String, "c_0,...,c_kappa"},
        {"--L", "L", Kind::Double, "half-width of the sampled path"},
        {"--grid-step", "h", Kind::Double, "grid step"},
        {"--Lprime", "Lprime", Kind::Double, "truncation half-width"},
        {"--Lsecond", "Lsecond", Kind::Double, "contamination check half-width"},
        {"--seeds", "seeds", Kind::Int, "samples per set"},
        {"--threshold", "threshold", Kind::Double, "KS distance threshold"}},
       {}},
  };
}

json convert(const Opt& o, const std::string& text) {
  try {
    switch (o.kind) {
      case Kind::Int: {
        std::size_t pos = 0;
        const long long v = std::stoll(text, &pos);
        if (pos != text.size()) break;
        return v;
      }
      case Kind::UInt: {
        std::size_t pos = 0;
        const unsigned long long v = std::stoull(text, &pos);
        if (pos != text.size()) break;
        return v;
      }
      case Kind::Double: {
        std::size_t pos = 0;
        const double v = std::stod(text, &pos);
        if (pos != text.size()) break;
        return v;
      }
      case Kind::String:
        return text;
      case Kind::Flag:
        return true;
    }
  } catch (const std::exception&) {
  }
  throw bbs::ParseError("cli", std::string("bad value for ") + o.flag + ": '" + text + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"kappa-colour box-ball system via Pitman transforms"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", bbs::cli::version());

  std::optional<std::uint64_t> seed;
  bool as_json = false;
  unsigned threads = 0;
  std::string report, save;
  app.add_option("--seed", seed, "RNG seed (default $BBS_SEED, else 1)");
  app.add_flag("--json", as_json, "print the JSON report instead of text");
  app.add_option("--threads", threads, "worker threads (0 = all cores)");
  app.add_option("--report", report, "write the JSON report here");
  app.add_option("--save-spec", save, "write the experiment spec here before running");

  const auto cmds = commands();
  struct Bound {
    CLI::App* app;
    const Command* cmd;
    std::vector<std::string> values;
    std::vector<std::string> outs;
  };
  std::vector<Bound> bound(cmds.size());
  for (std::size_t k = 0; k < cmds.size(); ++k) {
    Bound& b = bound[k];
    b.cmd = &cmds[k];
    b.app = app.add_subcommand(cmds[k].name, cmds[k].help);
    b.values.resize(cmds[k].opts.size());
    b.outs.resize(cmds[k].outputs.size());
  }
  // Bind after sizing so the stored references stay valid.
  std::vector<std::unique_ptr<bool>> flag_store;
  std::vector<std::vector<bool*>> flag_ptrs(cmds.size());
  for (std::size_t k = 0; k < cmds.size(); ++k) {
    Bound& b = bound[k];
    for (std::size_t o = 0; o < b.cmd->opts.size(); ++o) {
      const Opt& opt = b.cmd->opts[o];
      if (opt.kind == Kind::Flag) {
        flag_store.push_back(std::make_unique<bool>(false));
        flag_ptrs[k].push_back(flag_store.back().get());
        b.app->add_flag(opt.flag, *flag_store.back(), opt.help);
      } else {
        flag_ptrs[k].push_back(nullptr);
        b.app->add_option(opt.flag, b.values[o], opt.help);
      }
    }
    for (std::size_t o = 0; o < b.cmd->outputs.size(); ++o)
      b.app->add_option(b.cmd->outputs[o].flag, b.outs[o], b.cmd->outputs[o].help);
  }
  std::string spec_file;
  CLI::App* run_cmd = app.add_subcommand("run", "run an experiment spec (JSON)");
  run_cmd->add_option("--spec", spec_file, "spec file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : bbs::cli::kUsage;
  }

  bbs::cli::ExperimentSpec spec;
  try {
    if (run_cmd->parsed()) {
      spec = bbs::cli::load_spec(spec_file);
    } else {
      for (std::size_t k = 0; k < bound.size(); ++k) {
        const Bound& b = bound[k];
        if (!b.app->parsed()) continue;
        spec.command = b.cmd->name;
        for (std::size_t o = 0; o < b.cmd->opts.size(); ++o) {
          const Opt& opt = b.cmd->opts[o];
          if (b.app->count(opt.flag) == 0) continue;
          if (opt.kind == Kind::Flag) {
            if (std::string(opt.key) == "no_control")
              spec.params["control"] = false;
            else
              spec.params[opt.key] = *flag_ptrs[k][o];
          } else {
            spec.params[opt.key] = convert(opt, b.values[o]);
          }
        }
        for (std::size_t o = 0; o < b.cmd->outputs.size(); ++o)
          if (b.app->count(b.cmd->outputs[o].flag) > 0) spec.outputs[b.cmd->outputs[o].key] = b.outs[o];
      }
    }
    if (seed) spec.seed = seed;
    if (as_json) spec.params["json"] = true;
    if (app.count("--threads")) spec.params["threads"] = threads;
    if (!report.empty()) spec.outputs["report"] = report;
    if (!save.empty()) bbs::cli::save_spec(spec, save);
  } catch (const bbs::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return bbs::cli::kUsage;
  }
  return bbs::cli::run(spec, std::cout, std::cerr).exit_code;
}
