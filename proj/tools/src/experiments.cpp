#include "experiments.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "qdlab/combdisc.hpp"
#include "qdlab/concentration.hpp"
#include "qdlab/dpp.hpp"
#include "qdlab/error.hpp"
#include "qdlab/parallel.hpp"
#include "qdlab/qdisc.hpp"
#include "qdlab/randmat.hpp"
#include "qdlab/setsys.hpp"

namespace qdlab::cli::detail {
namespace {

int int_of(const Json& c, const char* key) { return c.at(key).get<int>(); }
double double_of(const Json& c, const char* key) { return c.at(key).get<double>(); }
std::string string_of(const Json& c, const char* key) { return c.at(key).get<std::string>(); }
bool bool_of(const Json& c, const char* key) { return c.at(key).get<bool>(); }
std::uint64_t seed_of(const Json& c) { return c.at("seed").is_null() ? 0 : c.at("seed").get<std::uint64_t>(); }
int threads_of(const Json& c) { return std::max(1, int_of(c, "threads")); }

void require_positive(const Json& c, const char* key) {
  if (int_of(c, key) < 1) throw Error(ErrorCode::InvalidArgument, std::string(key) + " must be >= 1");
}

nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, path + ": " + e.what());
  }
}

Json to_ordered(const nlohmann::json& j) { return Json::parse(j.dump()); }

Json signs_json(const Coloring& c) {
  Json out = Json::array();
  for (int s : c.signs()) out.push_back(s);
  return out;
}

std::string subset_string(const Subset& s) {
  std::string out = "{";
  for (std::size_t i = 0; i < s.size(); ++i) out += (i ? "," : "") + std::to_string(s[i]);
  return out + "}";
}

SetSystem singletons(int n) {
  std::vector<Subset> sets;
  for (int i = 1; i <= n; ++i) sets.push_back({i});
  return SetSystem(n, std::move(sets));
}

SetSystem generated_sets(const Json& c) {
  const std::string gen = string_of(c, "generator");
  const int n = int_of(c, "n");
  if (gen == "ap") return arithmetic_progressions(n);
  if (gen == "random") return random_set_system(n, int_of(c, "m"), seed_of(c));
  if (gen == "singletons") return singletons(n);
  throw Error(ErrorCode::InvalidArgument, "unknown set generator '" + gen + "'");
}

SetSystem load_sets(const Json& c) {
  const std::string input = string_of(c, "input");
  if (!input.empty()) return set_system_from_json(read_json_file(input));
  return generated_sets(c);
}

}  // namespace

Report run_disc(const Json& c) {
  const SetSystem sys = load_sets(c);
  const bool heuristic = bool_of(c, "heuristic");
  if (heuristic) require_positive(c, "trials");
  const DiscResult res =
      heuristic ? disc_heuristic(sys, int_of(c, "trials"), seed_of(c)) : disc_exact(sys, int_of(c, "cap"));

  Report r;
  r.columns = {"set_index", "size", "signed_sum"};
  const auto sums = evaluate_coloring(sys, res.witness);
  for (std::size_t i = 0; i < sys.size(); ++i) {
    r.add_row({static_cast<std::int64_t>(i), static_cast<std::int64_t>(sys[i].size()), sums[i]});
  }
  r.summary["n"] = sys.ground_size();
  r.summary["m"] = sys.size();
  r.summary["method"] = heuristic ? "heuristic" : "exact";
  r.summary["value"] = res.value;
  r.summary["witness"] = signs_json(res.witness);
  return r;
}

Report run_qdisc(const Json& c) {
  require_positive(c, "restarts");
  const std::string input = string_of(c, "input");
  const std::string gen = string_of(c, "generator");
  const int n = int_of(c, "n");

  std::optional<SetSystem> sets;
  std::optional<ProjectionSystem> projections;
  if (!input.empty()) {
    const nlohmann::json doc = read_json_file(input);
    if (doc.is_object() && doc.contains("projections")) {
      projections.emplace(projection_system_from_json(doc));
    } else {
      sets.emplace(set_system_from_json(doc));
    }
  } else if (gen == "random_projections") {
    projections.emplace(random_projection_system(n, int_of(c, "m"), derive_seed(seed_of(c), 1)));
  } else if (gen == "identity") {
    projections.emplace(std::vector<OrthogonalProjection>{
        OrthogonalProjection::from_basis(Matrix::Identity(n, n))});
  } else {
    sets.emplace(generated_sets(c));
  }

  QdiscOptions opts;
  opts.restarts = int_of(c, "restarts");
  opts.sweeps = int_of(c, "sweeps");
  opts.refine_top = int_of(c, "refine_top");
  opts.seed = derive_seed(seed_of(c), 2);
  opts.threads = threads_of(c);

  Report r;
  std::optional<DiscResult> disc;
  if (sets) {
    projections.emplace(to_projection_system(*sets));
    if (bool_of(c, "warm_start") && sets->ground_size() <= int_of(c, "cap")) {
      disc = disc_exact(*sets, int_of(c, "cap"));
      opts.warm_starts.push_back(QuantumColoring::diagonal(disc->witness.signs()));
    }
  }

  const QdiscEstimate est = qdisc_estimate(*projections, opts);
  r.columns = {"projection_index", "rank", "trace_term", "commutator_term", "objective"};
  for (std::size_t j = 0; j < projections->size(); ++j) {
    const ObjectiveValue ov = objective(est.witness, (*projections)[j]);
    r.add_row({static_cast<std::int64_t>(j), (*projections)[j].rank(), ov.trace_term, ov.commutator_term, ov.value});
  }
  r.summary["n"] = projections->dim();
  r.summary["m"] = projections->size();
  r.summary["estimate"] = est.value;
  r.summary["estimate_kind"] = "upper";
  r.summary["plus_count"] = est.plus_count;
  r.summary["restarts"] = est.restarts_used;
  r.summary["converged"] = est.converged;
  if (disc) {
    r.summary["disc"] = disc->value;
    r.summary["sandwich_holds"] = est.value <= disc->value + 1e-9;
  }
  r.summary["witness"] = to_ordered(matrix_to_json(est.witness.matrix()));
  return r;
}

Report run_ubound(const Json& c) {
  require_positive(c, "trials");
  const int n = int_of(c, "n");
  const int trials = int_of(c, "trials");
  const std::uint64_t seed = seed_of(c);
  const int threads = threads_of(c);

  Report r;
  double cval;
  if (c.at("c").is_null()) {
    std::vector<double> deltas = c.at("deltas").is_null() ? default_delta_grid()
                                                           : c.at("deltas").get<std::vector<double>>();
    const ConcentrationProbe probe =
        concentration_probe(n, int_of(c, "probe_trials"), deltas, derive_seed(seed, 0), threads);
    cval = probe.c_hat();
    r.summary["c_source"] = "concentration_probe";
    r.summary["c_trace_valid"] = probe.trace_fit.c_valid;
    r.summary["c_commutator_valid"] = probe.commutator_fit.c_valid;
    r.summary["c_trace_least_squares"] = probe.trace_fit.c_least_squares;
    r.summary["c_commutator_least_squares"] = probe.commutator_fit.c_least_squares;
    if (!std::isfinite(cval) || cval <= 0.0) {
      throw Error(ErrorCode::ConvergenceFailure, "concentration probe found no usable constant");
    }
  } else {
    cval = double_of(c, "c");
    r.summary["c_source"] = "config";
  }
  r.summary["c"] = cval;

  r.columns = {"n", "m", "c", "trials", "satisfied", "fraction", "ci_low", "ci_high", "max_delta", "ratio"};
  const auto m_grid = c.at("m_grid").get<std::vector<int>>();
  bool all_pass = true;
  for (std::size_t i = 0; i < m_grid.size(); ++i) {
    const int m = m_grid[i];
    if (m < 1) throw Error(ErrorCode::InvalidArgument, "M must be >= 1");
    const ProjectionSystem sys = random_projection_system(n, m, derive_seed(seed, 1 + i));
    const SystemEvaluator eval(sys);
    std::vector<double> thresholds;
    for (const auto& p : sys.projections()) thresholds.push_back(delta_p(p, sys.size(), cval));
    const double max_delta = *std::max_element(thresholds.begin(), thresholds.end());

    std::vector<char> ok(static_cast<std::size_t>(trials), 0);
    const std::uint64_t stream_seed = derive_seed(seed, 1000 + i);
    parallel_for(ok.size(), threads, [&](std::size_t t) {
      Rng rng = make_rng(stream_seed, t);
      const auto sq = eval.squared_objectives(random_quantum_coloring(n, rng));
      bool all = true;
      for (std::size_t j = 0; j < sq.size() && all; ++j) all = std::sqrt(std::max(0.0, sq[j])) <= thresholds[j];
      ok[t] = all ? 1 : 0;
    });
    const auto satisfied = static_cast<std::uint64_t>(std::count(ok.begin(), ok.end(), 1));
    const double frac = static_cast<double>(satisfied) / trials;
    const Interval ci = wilson_interval(satisfied, static_cast<std::uint64_t>(trials));
    all_pass = all_pass && frac >= 0.5;
    r.add_row({n, m, cval, trials, satisfied, frac, ci.low, ci.high, max_delta,
               max_delta / std::sqrt(n + std::log(static_cast<double>(m)))});
  }
  r.summary["gate"] = "fraction >= 0.5 for every M";
  r.summary["gates_passed"] = all_pass;
  r.gates_passed = all_pass;
  return r;
}

Report run_lbound(const Json& c) {
  require_positive(c, "restarts");
  const double alpha = double_of(c, "alpha");
  const LowerBoundConstants lbc = lower_bound_constants(alpha);
  const auto n_grid = c.at("n_grid").get<std::vector<int>>();
  const auto m_cap = static_cast<std::uint64_t>(int_of(c, "m_cap"));
  const std::uint64_t seed = seed_of(c);

  Report r;
  r.columns = {"n", "m", "m_requested", "estimate", "ratio", "plus_count", "converged", "log_m_over_n"};
  Json warnings = Json::array();
  double ratio_min = std::numeric_limits<double>::infinity();
  double ratio_max = 0.0;
  for (int n : n_grid) {
    if (n < 2) throw Error(ErrorCode::DegenerateDim, "N must be >= 2");
    const std::uint64_t nn = static_cast<std::uint64_t>(n);
    const std::uint64_t half_pow = n / 2 >= 63 ? std::numeric_limits<std::uint64_t>::max() : (1ULL << (n / 2));
    std::vector<std::uint64_t> done;
    for (std::uint64_t requested : {nn, nn * nn, half_pow}) {
      const std::uint64_t m = std::min(requested, m_cap);
      if (m != requested) {
        warnings.push_back("N=" + std::to_string(n) + ": M=" + std::to_string(requested) + " capped at " +
                           std::to_string(m));
      }
      if (std::find(done.begin(), done.end(), m) != done.end()) continue;
      done.push_back(m);
      const double log_m = std::log(static_cast<double>(m));
      if (log_m > alpha * n || m < nn) {
        warnings.push_back("N=" + std::to_string(n) + ", M=" + std::to_string(m) +
                           " is outside N <= M, log M <= alpha N");
      }
      const std::uint64_t inst = derive_seed(derive_seed(seed, nn), m);
      const ProjectionSystem sys = random_projection_system(n, static_cast<int>(m), inst);
      QdiscOptions opts;
      opts.restarts = int_of(c, "restarts");
      opts.sweeps = int_of(c, "sweeps");
      opts.refine_top = int_of(c, "refine_top");
      opts.seed = derive_seed(inst, 1);
      opts.threads = threads_of(c);
      const QdiscEstimate est = qdisc_estimate(sys, opts);
      const double ratio = est.value / std::sqrt(n + log_m);
      ratio_min = std::min(ratio_min, ratio);
      ratio_max = std::max(ratio_max, ratio);
      r.add_row({n, m, requested, est.value, ratio, est.plus_count, est.converged, log_m / n});
    }
  }
  r.summary["alpha"] = alpha;
  r.summary["epsilon"] = lbc.epsilon;
  r.summary["zeta"] = lbc.zeta;
  r.summary["condition_margin"] = lbc.condition_margin;
  r.summary["ratio_min"] = ratio_min;
  r.summary["ratio_max"] = ratio_max;
  r.summary["warnings"] = warnings;
  return r;
}

namespace {

DPPKernel make_kernel(const Json& c, Rng& rng) {
  const std::string input = string_of(c, "input");
  if (!input.empty()) {
    const nlohmann::json doc = read_json_file(input);
    const nlohmann::json& m = doc.is_object() ? doc.at("kernel") : doc;
    return validate_kernel(make_hermitian(matrix_from_json(m)));
  }
  const std::string kind = string_of(c, "kernel");
  const int n = int_of(c, "n");
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "N must be >= 1");
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  if (kind == "zero") return validate_kernel(make_hermitian(Matrix::Zero(n, n)));
  if (kind == "identity") return validate_kernel(make_hermitian(Matrix::Identity(n, n)));
  if (kind == "half") return validate_kernel(make_hermitian(0.5 * Matrix::Identity(n, n)));
  if (kind == "diagonal") {
    RealVector lam(n);
    for (int i = 0; i < n; ++i) lam(i) = unif(rng);
    return validate_kernel(HermitianMatrix::diagonal(lam));
  }
  const Matrix v = haar_unitary(n, rng);
  if (kind == "projection") {
    const int rank = c.at("rank").is_null() ? n / 2 : int_of(c, "rank");
    if (rank < 0 || rank > n) throw Error(ErrorCode::InvalidArgument, "rank outside [0, N]");
    return validate_kernel(make_projection_from_vectors(v.leftCols(rank)).hermitian());
  }
  if (kind == "random") {
    RealVector lam(n);
    for (int i = 0; i < n; ++i) lam(i) = unif(rng);
    return validate_kernel(make_hermitian(v * lam.cast<Complex>().asDiagonal() * v.adjoint()));
  }
  throw Error(ErrorCode::InvalidArgument, "unknown kernel '" + kind + "'");
}

bool is_projection_kernel(const DPPKernel& k) {
  const auto& ev = k.spectrum().eigenvalues;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev(i) != 0.0 && ev(i) != 1.0) return false;
  }
  return true;
}

}  // namespace

Report run_dpp(const Json& c) {
  const std::string action = string_of(c, "action");
  const std::uint64_t seed = seed_of(c);
  Rng kernel_rng = make_rng(seed, 0);
  const DPPKernel k = make_kernel(c, kernel_rng);
  const int n = k.dim();
  const bool check = action == "check";
  if (!check && action != "sample") throw Error(ErrorCode::InvalidArgument, "action must be sample or check");
  const int samples = c.at("samples").is_null() ? (check ? 100000 : 1000) : int_of(c, "samples");
  if (samples < 1) throw Error(ErrorCode::InvalidArgument, "samples must be >= 1");
  if (check && n > kExactDistributionCap) {
    throw Error(ErrorCode::GroundSetTooLarge, "check needs N <= " + std::to_string(kExactDistributionCap));
  }

  std::vector<Subset> draws(static_cast<std::size_t>(samples));
  const std::uint64_t sample_seed = derive_seed(seed, 1);
  parallel_for(draws.size(), threads_of(c), [&](std::size_t i) {
    Rng rng = make_rng(sample_seed, i);
    draws[i] = sample(k, rng).points;
  });

  Report r;
  r.summary["n"] = n;
  r.summary["samples"] = samples;
  r.summary["trace_k"] = k.matrix().trace().real();
  if (!check) {
    r.columns = {"sample_index", "size", "points"};
    double total = 0.0;
    for (std::size_t i = 0; i < draws.size(); ++i) {
      r.add_row({static_cast<std::int64_t>(i), static_cast<std::int64_t>(draws[i].size()), subset_string(draws[i])});
      total += static_cast<double>(draws[i].size());
    }
    r.summary["mean_size"] = total / samples;
    return r;
  }

  const std::vector<double> exact = exact_distribution(k);
  const std::vector<double> sizes = size_pmf(k);
  std::vector<std::uint64_t> counts(exact.size(), 0);
  std::vector<std::uint64_t> size_counts(static_cast<std::size_t>(n) + 1, 0);
  std::vector<std::uint64_t> singleton(static_cast<std::size_t>(n), 0);
  for (const auto& s : draws) {
    ++counts[subset_mask(s)];
    ++size_counts[s.size()];
    for (int i : s) ++singleton[static_cast<std::size_t>(i - 1)];
  }
  const double total = samples;

  r.columns = {"subset", "size", "exact", "empirical"};
  double tv = 0.0;
  for (std::size_t mask = 0; mask < exact.size(); ++mask) {
    const Subset s = mask_subset(mask, n);
    const double emp = static_cast<double>(counts[mask]) / total;
    tv += std::abs(emp - exact[mask]);
    r.add_row({subset_string(s), static_cast<std::int64_t>(s.size()), exact[mask], emp});
  }
  tv *= 0.5;
  double tv_size = 0.0;
  for (std::size_t j = 0; j < sizes.size(); ++j) {
    tv_size += std::abs(static_cast<double>(size_counts[j]) / total - sizes[j]);
  }
  tv_size *= 0.5;

  const double z_gate = double_of(c, "z_gate");
  double max_z = 0.0;
  bool singleton_ok = true;
  for (int i = 0; i < n; ++i) {
    const double p = joint_intensity(k, {i + 1});
    const double emp = static_cast<double>(singleton[static_cast<std::size_t>(i)]) / total;
    const double se = std::sqrt(p * (1.0 - p) / total);
    if (se > 0.0) {
      max_z = std::max(max_z, std::abs(emp - p) / se);
    } else if (std::abs(emp - p) > 1e-9) {
      singleton_ok = false;
    }
  }
  singleton_ok = singleton_ok && max_z <= z_gate;

  const double gate = double_of(c, "tv_gate");
  bool pass = tv <= gate && tv_size <= gate && singleton_ok;
  r.summary["tv_subset"] = tv;
  r.summary["tv_size"] = tv_size;
  r.summary["max_abs_singleton_z"] = max_z;
  if (is_projection_kernel(k)) {
    const int rank = static_cast<int>(std::lround(k.matrix().trace().real()));
    const auto constant = size_counts[static_cast<std::size_t>(rank)];
    r.summary["projection_rank"] = rank;
    r.summary["constant_size_fraction"] = static_cast<double>(constant) / total;
    pass = pass && constant == static_cast<std::uint64_t>(samples);
  }
  r.summary["gates_passed"] = pass;
  r.gates_passed = pass;
  return r;
}

Report run_compare(const Json& c) {
  require_positive(c, "restarts");
  const std::uint64_t seed = seed_of(c);
  const std::vector<double> grid =
      c.at("c_grid").is_null() ? default_c_grid() : c.at("c_grid").get<std::vector<double>>();

  std::vector<std::pair<std::string, SetSystem>> corpus;
  for (int n = int_of(c, "n_min"); n <= int_of(c, "n_max"); ++n) {
    corpus.emplace_back("ap_" + std::to_string(n), arithmetic_progressions(n));
  }
  for (int i = 0; i < int_of(c, "random_count"); ++i) {
    corpus.emplace_back("random_" + std::to_string(i),
                        random_set_system(int_of(c, "random_n"), int_of(c, "random_m"), derive_seed(seed, 1 + i)));
  }
  if (bool_of(c, "include_singletons")) {
    const int n = int_of(c, "n_min");
    corpus.emplace_back("singletons_" + std::to_string(n), singletons(n));
  }

  Report r;
  r.columns = {"system_id", "N", "M", "disc", "qdisc_est", "min_feasible_c_variant_i", "min_feasible_c_variant_ii"};
  int violations = 0;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    QdiscOptions opts;
    opts.restarts = int_of(c, "restarts");
    opts.sweeps = int_of(c, "sweeps");
    opts.refine_top = int_of(c, "refine_top");
    opts.seed = derive_seed(seed, 1000 + i);
    opts.threads = threads_of(c);
    const ComparisonReport rep = comparison_check(corpus[i].second, grid, opts, int_of(c, "cap"));
    if (!rep.sandwich_holds) ++violations;
    r.add_row({corpus[i].first, rep.n, rep.m, rep.disc, rep.qdisc_estimate,
               rep.min_c_log ? Json(*rep.min_c_log) : Json(nullptr),
               rep.min_c_sqrt_log ? Json(*rep.min_c_sqrt_log) : Json(nullptr)});
  }
  r.summary["instances"] = corpus.size();
  r.summary["sandwich_violations"] = violations;
  r.summary["gates_passed"] = violations == 0;
  r.gates_passed = violations == 0;
  return r;
}

namespace {

struct Gate {
  std::string name;
  int n;
  int param;
  double exact;
};

}  // namespace

Report run_haar(const Json& c) {
  require_positive(c, "trials");
  const int n_min = int_of(c, "n_min");
  const int n_max = int_of(c, "n_max");
  if (n_min < 2 || n_max < n_min) throw Error(ErrorCode::InvalidArgument, "need 2 <= n_min <= n_max");
  const int trials = int_of(c, "trials");
  const double z_gate = double_of(c, "z_gate");
  const std::uint64_t seed = seed_of(c);

  Report r;
  r.columns = {"gate", "n", "param", "exact", "estimate", "std_error", "z", "pass"};
  bool all_pass = true;
  double max_abs_z = 0.0;
  for (int n = n_min; n <= n_max; ++n) {
    const int half = n / 2;
    std::vector<Gate> gates;
    for (int rr = 0; rr <= n; ++rr) gates.push_back({"mean_trace", n, rr, exact_mean_trace(n, rr)});
    for (int rr = 0; rr <= n; ++rr) gates.push_back({"mean_trace_sq", n, rr, exact_mean_trace_sq(n, rr)});
    for (int k = 0; k <= n; ++k) {
      gates.push_back({"mean_trace_sq_fixed_coloring", n, 2 * k - n, exact_mean_trace_sq_fixed_coloring(n, 2 * k - n)});
    }
    const HaarFourthMoments fm = haar_fourth_moments(n);
    gates.push_back({"abs4", n, 0, fm.abs4});
    gates.push_back({"abs2_shared_row", n, 0, fm.abs2_shared_line});
    gates.push_back({"abs2_shared_column", n, 0, fm.abs2_shared_line});
    gates.push_back({"abs2_disjoint", n, 0, fm.abs2_disjoint});
    gates.push_back({"cross", n, 0, fm.cross});
    const std::size_t width = gates.size();

    std::vector<double> values(width * static_cast<std::size_t>(trials));
    const std::uint64_t stream_seed = derive_seed(seed, static_cast<std::uint64_t>(n));
    parallel_for(static_cast<std::size_t>(trials), threads_of(c), [&](std::size_t t) {
      Rng rng = make_rng(stream_seed, t);
      const Matrix u = haar_unitary(n, rng);
      double* out = values.data() + t * width;
      // chi = U D U* with plus count floor(N/2); P = first r coordinates.
      Matrix chi = -u * u.adjoint();
      chi += 2.0 * u.leftCols(half) * u.leftCols(half).adjoint();
      double tr = 0.0;
      for (int rr = 0; rr <= n; ++rr) {
        out[rr] = tr;
        if (rr < n) tr += chi(rr, rr).real();
      }
      for (int rr = 0; rr <= n; ++rr) {
        out[n + 1 + rr] = rr == 0 ? 0.0 : chi.topLeftCorner(rr, rr).squaredNorm();
      }
      // fixed chi = D_k, P = U Pi U* of rank floor(N/2)
      const Matrix p = u.leftCols(half) * u.leftCols(half).adjoint();
      for (int k = 0; k <= n; ++k) {
        double s = 0.0;
        for (int a = 0; a < n; ++a) {
          for (int b = 0; b < n; ++b) {
            const double da = a < k ? 1.0 : -1.0;
            const double db = b < k ? 1.0 : -1.0;
            s += da * db * std::norm(p(a, b));
          }
        }
        out[2 * (n + 1) + k] = s;
      }
      double* f = out + 3 * (n + 1);
      f[0] = std::norm(u(0, 0)) * std::norm(u(0, 0));
      f[1] = std::norm(u(0, 0)) * std::norm(u(0, 1));
      f[2] = std::norm(u(0, 0)) * std::norm(u(1, 0));
      f[3] = std::norm(u(0, 0)) * std::norm(u(1, 1));
      f[4] = (u(0, 0) * u(1, 1) * std::conj(u(1, 0)) * std::conj(u(0, 1))).real();
    });

    for (std::size_t g = 0; g < width; ++g) {
      MeanAccumulator acc;
      for (int t = 0; t < trials; ++t) acc.add(values[static_cast<std::size_t>(t) * width + g]);
      const double se = acc.standard_error();
      const double diff = acc.mean() - gates[g].exact;
      double z = 0.0;
      bool pass;
      if (se > 1e-12) {
        z = diff / se;
        pass = std::abs(z) <= z_gate;
      } else {
        pass = std::abs(diff) <= 1e-9;
      }
      max_abs_z = std::max(max_abs_z, std::abs(z));
      all_pass = all_pass && pass;
      r.add_row({gates[g].name, n, gates[g].param, gates[g].exact, acc.mean(), se, z, pass});
    }
  }
  r.summary["max_abs_z"] = max_abs_z;
  r.summary["gates_passed"] = all_pass;
  r.gates_passed = all_pass;
  return r;
}

}  // namespace qdlab::cli::detail
