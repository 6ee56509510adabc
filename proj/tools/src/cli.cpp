#include <chrono>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "experiments.hpp"
#include "qdlab/error.hpp"
#include "qdlab_cli/commands.hpp"

#ifndef QDLAB_VERSION
#define QDLAB_VERSION "0.0.0"
#endif

namespace qdlab::cli {
namespace {

bool has_seed_or_random_generator(const Json& c) {
  return c.at("input").get<std::string>().empty() && c.at("generator").get<std::string>() != "ap" &&
         c.at("generator").get<std::string>() != "singletons" && c.at("generator").get<std::string>() != "identity";
}

bool always(const Json&) { return true; }

Json ints(std::initializer_list<int> v) { return Json(std::vector<int>(v)); }

std::vector<Subcommand> build_registry() {
  using K = ParamKind;
  std::vector<Subcommand> out;
  out.push_back({"disc",
                 "combinatorial discrepancy of a set system (exact or heuristic)",
                 {{"input", K::String, "", "set-system JSON file; overrides the generator"},
                  {"generator", K::String, "ap", "ap | random | singletons"},
                  {"n", K::Int, 8, "ground set size"},
                  {"m", K::Int, 8, "number of sets (random generator)"},
                  {"heuristic", K::Bool, false, "use randomized local search instead of enumeration"},
                  {"trials", K::Int, 64, "local-search restarts"},
                  {"cap", K::Int, 24, "largest N enumerated exactly"}},
                 [](const Json& c) { return c.at("heuristic").get<bool>() || has_seed_or_random_generator(c); },
                 detail::run_disc});
  out.push_back({"qdisc",
                 "upper estimate of quantum discrepancy",
                 {{"input", K::String, "", "set-system or projection-system JSON file"},
                  {"generator", K::String, "ap", "ap | random | singletons | random_projections | identity"},
                  {"n", K::Int, 8, "dimension"},
                  {"m", K::Int, 8, "number of sets or projections"},
                  {"restarts", K::Int, 4, "Haar restarts per plus-count"},
                  {"sweeps", K::Int, 2, "plane-rotation sweeps per start"},
                  {"refine_top", K::Int, 0, "refine only the best plus-counts (0 = all)"},
                  {"warm_start", K::Bool, true, "seed the search with the exact combinatorial witness"},
                  {"cap", K::Int, 24, "largest N for the warm-start enumeration"}},
                 always,
                 detail::run_qdisc});
  out.push_back({"ubound",
                 "fraction of random colorings meeting every Delta_P threshold",
                 {{"n", K::Int, 32, "dimension"},
                  {"m_grid", K::IntList, ints({4, 64, 1024}), "numbers of random projections"},
                  {"trials", K::Int, 1000, "random colorings per M"},
                  {"c", K::Double, nullptr, "constant in Delta_P; fitted by the concentration probe when unset"},
                  {"probe_trials", K::Int, 10000, "trials for the concentration probe"},
                  {"deltas", K::DoubleList, nullptr, "deviation grid for the probe"}},
                 always,
                 detail::run_ubound});
  out.push_back({"lbound",
                 "quantum discrepancy estimates of random projection systems over an (N, M) grid",
                 {{"n_grid", K::IntList, ints({8, 16, 32}), "dimensions"},
                  {"m_cap", K::Int, 1024, "largest M generated"},
                  {"restarts", K::Int, 2, "Haar restarts per plus-count"},
                  {"sweeps", K::Int, 1, "plane-rotation sweeps"},
                  {"refine_top", K::Int, 2, "plus-counts refined"},
                  {"alpha", K::Double, 1.0, "regime constant, log M <= alpha N"}},
                 always,
                 detail::run_lbound});
  out.push_back({"dpp",
                 "sample a determinantal process or check the sampler against exact laws",
                 {{"action", K::String, "check", "sample | check"},
                  {"kernel", K::String, "random", "random | diagonal | projection | half | identity | zero"},
                  {"input", K::String, "", "kernel JSON file (2-D array of [re, im])"},
                  {"n", K::Int, 6, "ground set size"},
                  {"rank", K::Int, nullptr, "rank of a projection kernel (default N/2)"},
                  {"samples", K::Int, nullptr, "draws (default 100000 for check, 1000 for sample)"},
                  {"tv_gate", K::Double, 0.02, "largest accepted total-variation distance"},
                  {"z_gate", K::Double, 4.0, "largest accepted singleton z-score"}},
                 always,
                 detail::run_dpp});
  out.push_back({"compare",
                 "combinatorial versus quantum discrepancy on a corpus",
                 {{"n_min", K::Int, 6, "smallest arithmetic-progression system"},
                  {"n_max", K::Int, 12, "largest arithmetic-progression system"},
                  {"random_count", K::Int, 5, "random set systems"},
                  {"random_n", K::Int, 8, "ground set size of random systems"},
                  {"random_m", K::Int, 8, "sets per random system"},
                  {"include_singletons", K::Bool, true, "add the singleton system on n_min points"},
                  {"restarts", K::Int, 4, "Haar restarts per plus-count"},
                  {"sweeps", K::Int, 2, "plane-rotation sweeps"},
                  {"refine_top", K::Int, 0, "plus-counts refined (0 = all)"},
                  {"cap", K::Int, 24, "largest N enumerated exactly"},
                  {"c_grid", K::DoubleList, nullptr, "grid of c values (default geometric 0.01..100)"}},
                 always,
                 detail::run_compare});
  out.push_back({"haar",
                 "Monte Carlo checks of exact Haar moment formulas",
                 {{"n_min", K::Int, 2, "smallest N"},
                  {"n_max", K::Int, 8, "largest N"},
                  {"trials", K::Int, 100000, "Haar draws per N"},
                  {"z_gate", K::Double, 4.0, "largest accepted |z|"}},
                 always,
                 detail::run_haar});
  return out;
}

bool matches_kind(ParamKind kind, const Json& v) {
  switch (kind) {
    case ParamKind::Int:
      return v.is_number_integer();
    case ParamKind::UInt64:
      return v.is_number_unsigned() || (v.is_number_integer() && v.get<std::int64_t>() >= 0);
    case ParamKind::Double:
      return v.is_number();
    case ParamKind::Bool:
      return v.is_boolean();
    case ParamKind::String:
      return v.is_string();
    case ParamKind::IntList:
    case ParamKind::DoubleList:
      if (!v.is_array()) return false;
      for (const auto& x : v) {
        if (kind == ParamKind::IntList ? !x.is_number_integer() : !x.is_number()) return false;
      }
      return true;
  }
  return false;
}

const ParamSpec* find_param(const Subcommand& cmd, const std::string& key) {
  for (const auto& p : common_params()) {
    if (p.key == key) return &p;
  }
  for (const auto& p : cmd.params) {
    if (p.key == key) return &p;
  }
  return nullptr;
}

void merge(const Subcommand& cmd, Json& into, const Json& from, const char* origin) {
  if (from.is_null()) return;
  if (!from.is_object()) throw UsageError(std::string(origin) + " must be a JSON object");
  for (const auto& [key, value] : from.items()) {
    if (key == "subcommand") {
      if (!value.is_string() || value.get<std::string>() != cmd.name) {
        throw UsageError(std::string(origin) + ": subcommand does not match '" + cmd.name + "'");
      }
      continue;
    }
    const ParamSpec* spec = find_param(cmd, key);
    if (spec == nullptr) throw UsageError(std::string(origin) + ": unknown key '" + key + "' for " + cmd.name);
    if (!(value.is_null() && spec->default_value.is_null()) && !matches_kind(spec->kind, value)) {
      throw UsageError(std::string(origin) + ": key '" + key + "' has the wrong type");
    }
    into[key] = value;
  }
}

std::string dashed(std::string key) {
  std::replace(key.begin(), key.end(), '_', '-');
  return key;
}

std::string header_version() { return QDLAB_VERSION; }

}  // namespace

const std::vector<Subcommand>& subcommands() {
  static const std::vector<Subcommand> registry = build_registry();
  return registry;
}

const Subcommand& find_subcommand(const std::string& name) {
  for (const auto& c : subcommands()) {
    if (c.name == name) return c;
  }
  throw UsageError("unknown subcommand '" + name + "'");
}

const std::vector<ParamSpec>& common_params() {
  static const std::vector<ParamSpec> params = {
      {"seed", ParamKind::UInt64, nullptr, "random seed (required for stochastic runs)"},
      {"out", ParamKind::String, "", "report path (stdout when empty)"},
      {"format", ParamKind::String, "csv", "csv | json"},
      {"threads", ParamKind::Int, 1, "worker threads"},
  };
  return params;
}

Json resolve_config(const Subcommand& cmd, const Json& file_config, const Json& overrides) {
  Json c = Json::object();
  for (const auto& p : common_params()) c[p.key] = p.default_value;
  for (const auto& p : cmd.params) c[p.key] = p.default_value;
  merge(cmd, c, file_config, "config file");
  merge(cmd, c, overrides, "command line");
  const std::string fmt = c.at("format").get<std::string>();
  if (fmt != "csv" && fmt != "json") throw UsageError("format must be csv or json");
  if (c.at("threads").get<int>() < 1) throw UsageError("threads must be >= 1");
  if (c.at("seed").is_null() && cmd.stochastic(c)) throw UsageError(cmd.name + " is stochastic and needs --seed");
  return c;
}

Json parse_value(ParamKind kind, const std::string& raw) {
  auto whole = [&](auto parse) {
    std::size_t used = 0;
    auto v = parse(raw, &used);
    if (used != raw.size()) throw UsageError("malformed value '" + raw + "'");
    return v;
  };
  try {
    switch (kind) {
      case ParamKind::Int:
        return whole([](const std::string& s, std::size_t* u) { return std::stoll(s, u); });
      case ParamKind::UInt64:
        if (!raw.empty() && raw[0] == '-') throw UsageError("seed must be non-negative");
        return whole([](const std::string& s, std::size_t* u) { return std::stoull(s, u); });
      case ParamKind::Double:
        return whole([](const std::string& s, std::size_t* u) { return std::stod(s, u); });
      case ParamKind::Bool:
        if (raw == "true" || raw == "1") return true;
        if (raw == "false" || raw == "0") return false;
        throw UsageError("malformed boolean '" + raw + "'");
      case ParamKind::String:
        return raw;
      case ParamKind::IntList:
      case ParamKind::DoubleList: {
        Json arr = Json::array();
        std::stringstream ss(raw);
        std::string item;
        while (std::getline(ss, item, ',')) {
          arr.push_back(parse_value(kind == ParamKind::IntList ? ParamKind::Int : ParamKind::Double, item));
        }
        return arr;
      }
    }
  } catch (const std::logic_error&) {
    throw UsageError("malformed value '" + raw + "'");
  }
  return nullptr;
}

Report run_subcommand(const Subcommand& cmd, const Json& config) {
  Report report = cmd.run(config);
  Json echo = Json::object();
  for (const auto& [key, value] : config.items()) {
    if (key != "out") echo[key] = value;
  }
  Json header = Json::object();
  header["program"] = "qdlab";
  header["version"] = header_version();
  header["format_version"] = kReportFormatVersion;
  header["subcommand"] = cmd.name;
  header["config"] = std::move(echo);
  report.header = std::move(header);
  return report;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"qdlab: discrepancy, determinantal process and Haar moment experiments"};
  app.require_subcommand(1, 1);
  app.set_version_flag("--version", header_version());

  std::map<std::string, std::string> raw;
  std::map<std::string, bool> flags;
  std::map<std::string, CLI::Option*> options;
  std::map<std::string, std::string> config_paths;
  bool timing = false;
  for (const auto& cmd : subcommands()) {
    CLI::App* sub = app.add_subcommand(cmd.name, cmd.description);
    sub->add_option("--config", config_paths[cmd.name], "JSON configuration file");
    sub->add_flag("--timing", timing, "record wall time in the report header");
    std::vector<ParamSpec> all = common_params();
    all.insert(all.end(), cmd.params.begin(), cmd.params.end());
    for (const auto& p : all) {
      const std::string id = cmd.name + "/" + p.key;
      if (p.kind == ParamKind::Bool) {
        options[id] = sub->add_flag("--" + dashed(p.key) + ",!--no-" + dashed(p.key), flags[id], p.help);
      } else {
        options[id] = sub->add_option("--" + dashed(p.key), raw[id], p.help);
      }
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  const Subcommand& cmd = find_subcommand(app.get_subcommands().front()->get_name());
  try {
    Json overrides = Json::object();
    std::vector<ParamSpec> all = common_params();
    all.insert(all.end(), cmd.params.begin(), cmd.params.end());
    for (const auto& p : all) {
      const std::string id = cmd.name + "/" + p.key;
      if (options.at(id)->count() == 0) continue;
      overrides[p.key] = p.kind == ParamKind::Bool ? Json(flags.at(id)) : parse_value(p.kind, raw.at(id));
    }

    Json file_config = nullptr;
    if (const std::string& path = config_paths.at(cmd.name); !path.empty()) {
      std::ifstream in(path);
      if (!in) throw UsageError("cannot open config file " + path);
      try {
        file_config = Json::parse(in);
      } catch (const Json::exception& e) {
        throw UsageError("config file " + path + ": " + e.what());
      }
    }
    const Json config = resolve_config(cmd, file_config, overrides);

    const auto start = std::chrono::steady_clock::now();
    Report report = run_subcommand(cmd, config);
    if (timing) {
      report.header["wall_time_s"] =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }

    const Format fmt = parse_format(config.at("format").get<std::string>());
    const std::string out_path = config.at("out").get<std::string>();
    if (out_path.empty()) {
      write_report(report, fmt, out);
    } else {
      std::ofstream file(out_path, std::ios::binary);
      if (!file) throw Error(ErrorCode::InvalidArgument, "cannot write " + out_path);
      write_report(report, fmt, file);
    }
    if (!report.gates_passed) {
      err << "qdlab " << cmd.name << ": acceptance gate failed\n";
      return 3;
    }
    return 0;
  } catch (const UsageError& e) {
    err << "qdlab " << cmd.name << ": " << e.what() << '\n';
    return 1;
  } catch (const Error& e) {
    err << "qdlab " << cmd.name << ": " << to_string(e.code()) << ": " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "qdlab " << cmd.name << ": " << e.what() << '\n';
    return 2;
  }
}

}  // namespace qdlab::cli
