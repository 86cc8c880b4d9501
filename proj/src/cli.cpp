#include "cpca/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cpca/csv.hpp"
#include "cpca/datagen.hpp"
#include "cpca/error.hpp"
#include "cpca/estimator.hpp"
#include "cpca/incremental.hpp"
#include "cpca/mle.hpp"

namespace cpca::cli {

namespace {

using nlohmann::json;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct InputFlags {
  std::string path = "-";
  bool header = false;
};

struct NeighborhoodFlags {
  std::size_t k = 0;
  double eps = 0.0;
  CLI::Option* k_opt = nullptr;
  CLI::Option* eps_opt = nullptr;

  NeighborhoodSpec spec() const {
    const bool has_k = k_opt->count() > 0;
    const bool has_eps = eps_opt->count() > 0;
    if (has_k == has_eps) throw UsageError("give exactly one of --k or --eps");
    return has_k ? NeighborhoodSpec::nearest(k) : NeighborhoodSpec::ball(eps);
  }
};

void add_input(CLI::App* cmd, InputFlags& flags) {
  cmd->add_option("-i,--input", flags.path, "CSV file, or - for standard input");
  cmd->add_flag("--header", flags.header, "Skip the first non-comment line");
}

void add_neighborhood(CLI::App* cmd, NeighborhoodFlags& flags) {
  flags.k_opt = cmd->add_option("-k,--k", flags.k, "Neighborhood size (k nearest points)");
  flags.eps_opt = cmd->add_option("--eps", flags.eps, "Neighborhood radius (strict)");
}

void add_criteria(CLI::App* cmd, IdCriteria& criteria) {
  cmd->add_option("--alpha", criteria.alpha, "Spectral-gap ratio threshold")->capture_default_str();
  cmd->add_option("--beta", criteria.beta, "Cumulative variance threshold")->capture_default_str();
  cmd->add_option("--noise-p", criteria.noise_p, "Cumulative threshold marking the noise tail")
      ->capture_default_str();
  cmd->add_option("--noise-cap", criteria.noise_pc_cap, "Max tail components in the noise floor")
      ->capture_default_str();
}

PointSet load_points(const InputFlags& flags, std::istream& in) {
  const CsvOptions options{flags.header};
  if (flags.path == "-") return read_csv(in, options, "<stdin>");
  return read_csv_file(flags.path, options);
}

std::vector<std::string> parse_methods(const std::vector<std::string>& methods) {
  if (methods.empty()) throw UsageError("select at least one method");
  std::vector<std::string> out;
  for (const std::string& m : methods) {
    if (m != "cpca" && m != "lpca" && m != "mle") {
      throw UsageError("unknown method '" + m + "' (expected cpca, lpca or mle)");
    }
    if (std::find(out.begin(), out.end(), m) == out.end()) out.push_back(m);
  }
  return out;
}

std::string fixed(double v, int digits = 6) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(digits) << v;
  return s.str();
}

struct NoiseSummary {
  double mean = 0.0;
  double min = 0.0;
  double max = 0.0;
};

NoiseSummary noise_summary(const GlobalEstimate& g) {
  NoiseSummary s;
  if (g.locals.empty()) return s;
  s.min = std::numeric_limits<double>::infinity();
  s.max = -std::numeric_limits<double>::infinity();
  for (const LocalEstimate& l : g.locals) {
    s.mean += l.noise_var();
    s.min = std::min(s.min, l.noise_var());
    s.max = std::max(s.max, l.noise_var());
  }
  s.mean /= static_cast<double>(g.locals.size());
  return s;
}

json optional_id(const std::optional<std::size_t>& id) {
  return id ? json(*id) : json(nullptr);
}

json pca_json(const std::string& method, const GlobalEstimate& g) {
  const NoiseSummary noise = noise_summary(g);
  json locals = json::array();
  for (std::size_t i = 0; i < g.locals.size(); ++i) {
    const LocalEstimate& l = g.locals[i];
    json entry = {
        {"subset", l.subset_index},
        {"size", l.spectrum.subset_size},
        {"local_id", l.local_id()},
        {"noise_var", l.noise_var()},
        {"noise_start", l.denoised.noise_start},
        {"noise_dominated", l.denoised.noise_dominated},
        {"flat", l.denoised.flat},
        {"ratio_id", optional_id(l.decision.ratio_id)},
        {"pct_id", l.decision.pct_id},
        {"spectrum", l.spectrum.eigenvalues},
    };
    if (i < g.cover.subsets.size()) {
      entry["center"] = g.cover.subsets[i].center;
      entry["radius"] = g.cover.subsets[i].radius;
    }
    locals.push_back(std::move(entry));
  }
  return {
      {"method", method},
      {"global_id", g.global_id()},
      {"mean_local_id", g.mean_local_id},
      {"subset_count", g.subset_count},
      {"ratio_id", optional_id(g.decision.ratio_id)},
      {"pct_id", g.decision.pct_id},
      {"aggregated", g.aggregated},
      {"aggregated_noise_var", g.aggregated_denoised.noise_var},
      {"noise_var", {{"mean", noise.mean}, {"min", noise.min}, {"max", noise.max}}},
      {"locals", std::move(locals)},
  };
}

json mle_json(const MleEstimate& m) {
  return {
      {"method", "mle"},
      {"k", m.k},
      {"estimate", m.global_value},
      {"direct_mean", m.direct_mean},
      {"infinite_count", m.infinite_count},
      {"degenerate_count", m.degenerate_count},
  };
}

json neighborhood_json(const NeighborhoodSpec& spec) {
  if (spec.mode == NeighborhoodSpec::Mode::knn) return {{"mode", "knn"}, {"k", spec.k}};
  return {{"mode", "eps"}, {"eps", spec.eps}};
}

json criteria_json(const IdCriteria& c) {
  return {{"alpha", c.alpha},
          {"beta", c.beta},
          {"noise_p", c.noise_p},
          {"noise_pc_cap", c.noise_pc_cap}};
}

// ---------------------------------------------------------------------------
// generate

struct GenerateFlags {
  std::string kind = "mobius";
  std::optional<std::size_t> n;
  std::size_t d = 2;
  std::size_t ambient = 10;
  unsigned twists = 10;
  double radius = 1.0;
  double width = 0.2;
  std::uint64_t seed = 0;
  double noise = 0.0;
  std::size_t embed_dim = 0;
  std::string output = "-";
};

ManifoldSpec manifold_spec(const GenerateFlags& f) {
  ManifoldSpec spec;
  spec.seed = f.seed;
  if (f.kind == "mobius") {
    spec.kind = Mobius{f.n.value_or(1200), f.twists, f.radius, f.width};
  } else if (f.kind == "sphere") {
    spec.kind = Hypersphere{f.n.value_or(1000), f.d};
  } else if (f.kind == "cube") {
    spec.kind = Cube{f.n.value_or(1000), f.d};
  } else if (f.kind == "swiss-roll") {
    spec.kind = SwissRoll{f.n.value_or(1000)};
  } else {
    spec.kind = Subspace{f.n.value_or(1000), f.d, f.ambient};
  }
  return spec;
}

int cmd_generate(const GenerateFlags& f, std::ostream& out) {
  PointSet points = generate(manifold_spec(f));
  if (f.noise > 0.0 || f.embed_dim != 0) {
    points = corrupt(points, CorruptionSpec{f.noise, f.embed_dim, f.seed + 1});
  }
  if (f.output == "-") {
    write_csv(out, points);
    return kOk;
  }
  write_file_atomic(f.output, [&](std::ostream& o) { write_csv(o, points); });
  const json meta = {
      {"kind", f.kind},      {"n", points.size()},         {"dim", points.dim()},
      {"d", f.d},            {"ambient", f.ambient},       {"half_twists", f.twists},
      {"radius", f.radius},  {"half_width", f.width},      {"seed", f.seed},
      {"noise_variance", f.noise}, {"embed_dim", f.embed_dim}, {"corruption_seed", f.seed + 1},
  };
  write_file_atomic(f.output + ".meta.json", [&](std::ostream& o) { o << meta.dump(2) << '\n'; });
  return kOk;
}

// ---------------------------------------------------------------------------
// estimate

struct EstimateFlags {
  InputFlags input;
  NeighborhoodFlags neighborhood;
  IdCriteria criteria;
  std::vector<std::string> methods{"cpca"};
  std::string format = "table";
};

int cmd_estimate(const EstimateFlags& f, std::istream& in, std::ostream& out) {
  const std::vector<std::string> methods = parse_methods(f.methods);
  const NeighborhoodSpec spec = f.neighborhood.spec();
  f.criteria.validate();
  const PointSet points = load_points(f.input, in);
  spec.validate(points.size());
  const bool wants_mle = std::count(methods.begin(), methods.end(), "mle") > 0;
  if (wants_mle && spec.mode != NeighborhoodSpec::Mode::knn) {
    throw UsageError("mle needs --k");
  }
  if (wants_mle && spec.k < 2) throw UsageError("mle needs k >= 2");

  const DistanceMatrix dist = distance_matrix(points);
  json report = {{"n", points.size()},
                 {"dim", points.dim()},
                 {"neighborhood", neighborhood_json(spec)},
                 {"criteria", criteria_json(f.criteria)},
                 {"methods", json::array()}};

  struct Row {
    std::string method;
    std::string estimate;
    std::string global_id = "NA";
    std::string subsets = "NA";
    std::string noise = "NA";
  };
  std::vector<Row> rows;

  for (const std::string& method : methods) {
    if (method == "mle") {
      const MleEstimate m = mle_global(dist, spec.k);
      report["methods"].push_back(mle_json(m));
      rows.push_back({method, fixed(m.global_value)});
      continue;
    }
    const IdCriteria criteria = method == "cpca" ? f.criteria : f.criteria.without_filter();
    const GlobalEstimate g = estimate_batch(points, dist, spec, criteria);
    report["methods"].push_back(pca_json(method, g));
    rows.push_back({method, fixed(g.mean_local_id), std::to_string(g.global_id()),
                    std::to_string(g.subset_count), fixed(noise_summary(g).mean, 8)});
  }

  if (f.format == "json") {
    out << report.dump(2) << '\n';
  } else if (f.format == "tsv") {
    out << "method\testimate\tglobal_id\tsubsets\tnoise_var_mean\n";
    for (const Row& r : rows) {
      out << r.method << '\t' << r.estimate << '\t' << r.global_id << '\t' << r.subsets << '\t'
          << r.noise << '\n';
    }
  } else {
    out << "points " << points.size() << ", dimension " << points.dim() << "\n\n";
    out << std::left << std::setw(8) << "method" << std::setw(12) << "estimate" << std::setw(11)
        << "global_id" << std::setw(9) << "subsets"
        << "noise_var_mean\n";
    for (const Row& r : rows) {
      out << std::setw(8) << r.method << std::setw(12) << r.estimate << std::setw(11)
          << r.global_id << std::setw(9) << r.subsets << r.noise << '\n';
    }
  }
  return kOk;
}

// ---------------------------------------------------------------------------
// sweep

struct SweepFlags {
  InputFlags input;
  IdCriteria criteria;
  std::size_t k_min = 4;
  std::size_t k_max = 40;
  std::size_t k_step = 4;
  std::vector<std::string> methods{"cpca", "lpca", "mle"};
  std::string output = "-";
};

void write_sweep(const SweepFlags& f, const std::vector<std::string>& methods,
                 const PointSet& points, std::ostream& out) {
  const DistanceMatrix dist = distance_matrix(points);
  out << "k\tmethod\testimate\tglobal_id\n";
  for (std::size_t k = f.k_min; k <= f.k_max; k += f.k_step) {
    for (const std::string& method : methods) {
      if (method == "mle") {
        out << k << '\t' << method << '\t' << fixed(mle_global(dist, k).global_value)
            << "\tNA\n";
        continue;
      }
      const IdCriteria criteria = method == "cpca" ? f.criteria : f.criteria.without_filter();
      const GlobalEstimate g = estimate_batch(points, dist, NeighborhoodSpec::nearest(k), criteria);
      out << k << '\t' << method << '\t' << fixed(g.mean_local_id) << '\t' << g.global_id()
          << '\n';
    }
  }
}

int cmd_sweep(const SweepFlags& f, std::istream& in, std::ostream& out) {
  const std::vector<std::string> methods = parse_methods(f.methods);
  f.criteria.validate();
  if (f.k_step < 1) throw UsageError("--k-step must be positive");
  if (f.k_min < 1 || f.k_min > f.k_max) throw UsageError("need 1 <= k-min <= k-max");
  const bool wants_mle = std::count(methods.begin(), methods.end(), "mle") > 0;
  if (wants_mle && f.k_min < 2) throw UsageError("mle needs k >= 2");

  const PointSet points = load_points(f.input, in);
  if (f.k_max + 1 > points.size()) {
    throw UsageError("k-max must be at most n-1 (n=" + std::to_string(points.size()) + ")");
  }
  if (f.output == "-") {
    write_sweep(f, methods, points, out);
  } else {
    write_file_atomic(f.output, [&](std::ostream& o) { write_sweep(f, methods, points, o); });
  }
  return kOk;
}

// ---------------------------------------------------------------------------
// incremental

struct IncrementalFlags {
  std::string state;
  std::string init;
  bool init_header = false;
  InputFlags input;
  NeighborhoodFlags neighborhood;
  IdCriteria criteria;
  bool emit = false;
  std::string format = "tsv";
};

void write_report(std::ostream& out, const std::string& format, const std::string& event,
                  const IncrementalEstimator& state) {
  const GlobalEstimate g = state.estimate();
  if (format == "json") {
    const json line = {{"event", event},
                       {"global_id", g.global_id()},
                       {"mean_local_id", g.mean_local_id},
                       {"subsets", g.subset_count},
                       {"accepted", state.accepted_count()},
                       {"outliers", state.outlier_count()},
                       {"aggregated", g.aggregated}};
    out << line.dump() << '\n';
    return;
  }
  out << event << '\t' << g.global_id() << '\t' << fixed(g.mean_local_id) << '\t'
      << g.subset_count << '\t' << state.accepted_count() << '\t' << state.outlier_count()
      << '\n';
}

int cmd_incremental(const IncrementalFlags& f, std::istream& in, std::ostream& out) {
  if (f.format != "tsv" && f.format != "json") throw UsageError("format must be tsv or json");

  std::optional<IncrementalEstimator> state;
  if (!f.init.empty()) {
    const NeighborhoodSpec spec = f.neighborhood.spec();
    f.criteria.validate();
    const PointSet seed = read_csv_file(f.init, CsvOptions{f.init_header});
    spec.validate(seed.size());
    state = IncrementalEstimator::initialize(seed, spec, f.criteria);
  } else {
    std::ifstream file(f.state);
    if (!file) throw IoError("cannot open state file " + f.state + " (use --init to create one)");
    state = IncrementalEstimator::load(file);
  }

  if (f.format == "tsv") out << "event\tglobal_id\tmean_local_id\tsubsets\taccepted\toutliers\n";
  if (f.emit) write_report(out, f.format, "initial", *state);

  std::ifstream file;
  std::istream* source = &in;
  std::string source_name = "<stdin>";
  if (f.input.path != "-") {
    file.open(f.input.path);
    if (!file) throw IoError("cannot open " + f.input.path);
    source = &file;
    source_name = f.input.path;
  }
  CsvRowReader reader(*source, CsvOptions{f.input.header}, source_name);
  reader.expect_columns(state->dim());
  std::vector<double> row;
  while (reader.next(row)) {
    const InsertResult r = state->insert(row);
    if (f.emit && r.accepted) write_report(out, f.format, "insert", *state);
  }

  write_report(out, f.format, "final", *state);
  write_file_atomic(f.state, [&](std::ostream& o) { state->save(o); });
  return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::istream& in, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Intrinsic dimension estimation with cover-based local PCA"};
  app.require_subcommand(1);

  GenerateFlags gen;
  CLI::App* generate_cmd = app.add_subcommand("generate", "Write a synthetic manifold as CSV");
  generate_cmd->add_option("--kind", gen.kind, "mobius, sphere, cube, swiss-roll or subspace")
      ->check(CLI::IsMember({"mobius", "sphere", "cube", "swiss-roll", "subspace"}))
      ->capture_default_str();
  generate_cmd->add_option("-n,--n", gen.n, "Number of points (mobius 1200, others 1000)");
  generate_cmd->add_option("-d,--d", gen.d, "Intrinsic dimension (sphere, cube, subspace)")
      ->capture_default_str();
  generate_cmd->add_option("--ambient", gen.ambient, "Ambient dimension (subspace)")
      ->capture_default_str();
  generate_cmd->add_option("--twists", gen.twists, "Mobius half twists")->capture_default_str();
  generate_cmd->add_option("--radius", gen.radius, "Mobius ring radius")->capture_default_str();
  generate_cmd->add_option("--width", gen.width, "Mobius band half width")->capture_default_str();
  generate_cmd->add_option("--seed", gen.seed, "RNG seed")->capture_default_str();
  generate_cmd->add_option("--noise", gen.noise, "Additive Gaussian noise variance");
  generate_cmd->add_option("--embed-dim", gen.embed_dim, "Isometric embedding dimension");
  generate_cmd->add_option("-o,--output", gen.output, "Output CSV, or - for standard output");

  EstimateFlags est;
  CLI::App* estimate_cmd = app.add_subcommand("estimate", "Estimate the intrinsic dimension");
  add_input(estimate_cmd, est.input);
  add_neighborhood(estimate_cmd, est.neighborhood);
  add_criteria(estimate_cmd, est.criteria);
  estimate_cmd->add_option("--methods", est.methods, "Comma list of cpca, lpca, mle")
      ->delimiter(',');
  estimate_cmd->add_option("--format", est.format, "table, json or tsv")
      ->check(CLI::IsMember({"table", "json", "tsv"}))
      ->capture_default_str();

  SweepFlags sweep;
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "Estimate over a range of k, as TSV");
  add_input(sweep_cmd, sweep.input);
  add_criteria(sweep_cmd, sweep.criteria);
  sweep_cmd->add_option("--k-min", sweep.k_min)->capture_default_str();
  sweep_cmd->add_option("--k-max", sweep.k_max)->capture_default_str();
  sweep_cmd->add_option("--k-step", sweep.k_step)->capture_default_str();
  sweep_cmd->add_option("--methods", sweep.methods, "Comma list of cpca, lpca, mle")
      ->delimiter(',');
  sweep_cmd->add_option("-o,--output", sweep.output, "Output TSV, or - for standard output");

  IncrementalFlags inc;
  CLI::App* incremental_cmd =
      app.add_subcommand("incremental", "Feed points into a persistent estimator state");
  incremental_cmd->add_option("--state", inc.state, "State file (rewritten on exit)")->required();
  incremental_cmd->add_option("--init", inc.init, "Seed CSV; builds a fresh state");
  incremental_cmd->add_flag("--init-header", inc.init_header, "Seed CSV has a header line");
  add_input(incremental_cmd, inc.input);
  add_neighborhood(incremental_cmd, inc.neighborhood);
  add_criteria(incremental_cmd, inc.criteria);
  incremental_cmd->add_flag("--emit", inc.emit, "Report after every accepted point");
  incremental_cmd->add_option("--format", inc.format, "tsv or json")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  try {
    if (*generate_cmd) return cmd_generate(gen, out);
    if (*estimate_cmd) return cmd_estimate(est, in, out);
    if (*sweep_cmd) return cmd_sweep(sweep, in, out);
    if (*incremental_cmd) return cmd_incremental(inc, in, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kIo;
  } catch (const DataError& e) {
    err << "error: " << e.what() << '\n';
    return kData;
  } catch (const NumericalError& e) {
    err << "error: " << e.what() << '\n';
    return kNumerical;
  }
  return kUsage;
}

}  // namespace cpca::cli
