#include "cpca/incremental.hpp"

#include <cmath>
#include <cstdlib>
#include <ios>
#include <istream>
#include <limits>
#include <ostream>
#include <string>

#include "cpca/error.hpp"

namespace cpca {

namespace {

constexpr const char* kMagic = "cpca-state";
constexpr int kVersion = 1;

class TokenReader {
 public:
  explicit TokenReader(std::istream& in) : in_(in) {}

  std::string word() {
    std::string tok;
    if (!(in_ >> tok)) throw DataError("corrupt state file: unexpected end of input");
    return tok;
  }

  void expect(const std::string& keyword) {
    const std::string tok = word();
    if (tok != keyword) {
      throw DataError("corrupt state file: expected '" + keyword + "', found '" + tok + "'");
    }
  }

  std::size_t count() {
    const std::string tok = word();
    char* end = nullptr;
    const unsigned long long v = std::strtoull(tok.c_str(), &end, 10);
    if (tok.empty() || *end != '\0' || tok[0] == '-') {
      throw DataError("corrupt state file: bad integer '" + tok + "'");
    }
    return static_cast<std::size_t>(v);
  }

  double real() {
    const std::string tok = word();
    char* end = nullptr;
    const double v = std::strtod(tok.c_str(), &end);
    if (tok.empty() || *end != '\0' || !std::isfinite(v)) {
      throw DataError("corrupt state file: bad number '" + tok + "'");
    }
    return v;
  }

 private:
  std::istream& in_;
};

}  // namespace

IncrementalEstimator IncrementalEstimator::initialize(const PointSet& seed,
                                                      const NeighborhoodSpec& spec,
                                                      const IdCriteria& criteria) {
  criteria.validate();
  const DistanceMatrix dist = distance_matrix(seed);
  const Cover cover = minimum_cover(build_neighborhoods(dist, spec), dist);
  std::vector<LocalEstimate> locals = estimate_subsets(seed, cover, criteria);

  IncrementalEstimator state;
  state.dim_ = seed.dim();
  state.criteria_ = criteria;
  state.aggregated_ = aggregate_spectra(locals);
  state.subsets_.reserve(cover.subsets.size());
  for (std::size_t s = 0; s < cover.subsets.size(); ++s) {
    const Neighborhood& nb = cover.subsets[s];
    StoredSubset stored;
    stored.center_index = nb.center;
    stored.radius = nb.radius;
    stored.members = seed.subset(nb.members).coords();
    stored.local = std::move(locals[s]);
    state.subsets_.push_back(std::move(stored));
  }
  return state;
}

InsertResult IncrementalEstimator::insert(std::span<const double> x) {
  if (x.size() != dim_) {
    throw DataError("point has " + std::to_string(x.size()) + " coordinates, state expects " +
                    std::to_string(dim_));
  }
  const Eigen::Map<const Eigen::RowVectorXd> point(x.data(), static_cast<Eigen::Index>(x.size()));
  if (!point.allFinite()) throw DataError("point coordinates must be finite");

  InsertResult result;
  result.distance = std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < subsets_.size(); ++s) {
    const double d = (subsets_[s].center() - point).norm();
    if (d < result.distance) {
      result.distance = d;
      result.subset = s;
    }
  }

  StoredSubset& target = subsets_[result.subset];
  if (result.distance > target.radius) {
    ++outliers_;
    return result;
  }

  const Eigen::Index rows = target.members.rows();
  target.members.conservativeResize(rows + 1, Eigen::NoChange);
  target.members.row(rows) = point;

  LocalEstimate updated = local_id(PointSet(target.members), criteria_);
  updated.subset_index = result.subset;

  const std::vector<double>& before = target.local.spectrum.eigenvalues;
  const std::vector<double>& after = updated.spectrum.eigenvalues;
  if (after.size() > aggregated_.size()) aggregated_.resize(after.size(), 0.0);
  for (std::size_t j = 0; j < aggregated_.size(); ++j) {
    const double old_j = j < before.size() ? before[j] : 0.0;
    const double new_j = j < after.size() ? after[j] : 0.0;
    aggregated_[j] = aggregated_[j] + new_j - old_j;
  }
  target.local = std::move(updated);

  ++accepted_;
  result.accepted = true;
  return result;
}

GlobalEstimate IncrementalEstimator::estimate() const {
  std::vector<LocalEstimate> locals;
  locals.reserve(subsets_.size());
  for (const StoredSubset& s : subsets_) locals.push_back(s.local);
  return summarize(std::move(locals), aggregated_, criteria_);
}

std::vector<double> IncrementalEstimator::recompute_aggregate() const {
  std::vector<LocalEstimate> locals;
  locals.reserve(subsets_.size());
  for (const StoredSubset& s : subsets_) locals.push_back(s.local);
  return aggregate_spectra(locals);
}

void IncrementalEstimator::save(std::ostream& out) const {
  const auto old_flags = out.flags();
  out << std::hexfloat;
  out << kMagic << ' ' << kVersion << '\n';
  out << "dim " << dim_ << '\n';
  out << "criteria " << criteria_.alpha << ' ' << criteria_.beta << ' ' << criteria_.noise_p
      << ' ' << criteria_.noise_pc_cap << ' ' << (criteria_.filter_noise ? 1 : 0) << '\n';
  out << "counts " << accepted_ << ' ' << outliers_ << '\n';
  out << "aggregated " << aggregated_.size();
  for (double v : aggregated_) out << ' ' << v;
  out << '\n';
  out << "subsets " << subsets_.size() << '\n';
  for (const StoredSubset& s : subsets_) {
    const Spectrum& spectrum = s.local.spectrum;
    out << "subset " << s.center_index << ' ' << s.radius << ' ' << s.members.rows() << '\n';
    out << "spectrum " << spectrum.subset_size << ' ' << spectrum.size();
    for (double v : spectrum.eigenvalues) out << ' ' << v;
    out << '\n';
    for (Eigen::Index r = 0; r < s.members.rows(); ++r) {
      for (Eigen::Index c = 0; c < s.members.cols(); ++c) {
        out << (c == 0 ? "" : " ") << s.members(r, c);
      }
      out << '\n';
    }
  }
  out << "end\n";
  out.flags(old_flags);
  if (!out) throw IoError("failed to write state");
}

IncrementalEstimator IncrementalEstimator::load(std::istream& in) {
  TokenReader reader(in);
  reader.expect(kMagic);
  const std::size_t version = reader.count();
  if (version != kVersion) {
    throw DataError("unsupported state file version " + std::to_string(version));
  }

  IncrementalEstimator state;
  reader.expect("dim");
  state.dim_ = reader.count();
  if (state.dim_ < 1) throw DataError("corrupt state file: dimension must be positive");

  reader.expect("criteria");
  state.criteria_.alpha = reader.real();
  state.criteria_.beta = reader.real();
  state.criteria_.noise_p = reader.real();
  state.criteria_.noise_pc_cap = reader.count();
  state.criteria_.filter_noise = reader.count() != 0;
  try {
    state.criteria_.validate();
  } catch (const InvalidArgument& e) {
    throw DataError(std::string("corrupt state file: ") + e.what());
  }

  reader.expect("counts");
  state.accepted_ = reader.count();
  state.outliers_ = reader.count();

  reader.expect("aggregated");
  state.aggregated_.resize(reader.count());
  for (double& v : state.aggregated_) v = reader.real();

  reader.expect("subsets");
  const std::size_t subset_count = reader.count();
  if (subset_count < 1) throw DataError("corrupt state file: no subsets");
  state.subsets_.reserve(subset_count);
  for (std::size_t s = 0; s < subset_count; ++s) {
    StoredSubset stored;
    reader.expect("subset");
    stored.center_index = reader.count();
    stored.radius = reader.real();
    const std::size_t rows = reader.count();
    if (rows < 1) throw DataError("corrupt state file: empty subset");
    if (stored.radius < 0.0) throw DataError("corrupt state file: negative radius");

    reader.expect("spectrum");
    Spectrum spectrum;
    spectrum.subset_size = reader.count();
    spectrum.eigenvalues.resize(reader.count());
    for (double& v : spectrum.eigenvalues) v = reader.real();

    stored.members.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(state.dim_));
    for (Eigen::Index r = 0; r < stored.members.rows(); ++r) {
      for (Eigen::Index c = 0; c < stored.members.cols(); ++c) stored.members(r, c) = reader.real();
    }
    stored.local = estimate_from_spectrum(std::move(spectrum), state.criteria_);
    stored.local.subset_index = s;
    state.subsets_.push_back(std::move(stored));
  }
  reader.expect("end");
  std::string extra;
  if (in >> extra) throw DataError("corrupt state file: unexpected '" + extra + "' after end");
  return state;
}

bool operator==(const IncrementalEstimator& a, const IncrementalEstimator& b) {
  const auto same_criteria = [](const IdCriteria& x, const IdCriteria& y) {
    return x.alpha == y.alpha && x.beta == y.beta && x.noise_p == y.noise_p &&
           x.noise_pc_cap == y.noise_pc_cap && x.filter_noise == y.filter_noise;
  };
  if (a.dim_ != b.dim_ || !same_criteria(a.criteria_, b.criteria_) ||
      a.aggregated_ != b.aggregated_ || a.outliers_ != b.outliers_ ||
      a.accepted_ != b.accepted_ || a.subsets_.size() != b.subsets_.size()) {
    return false;
  }
  for (std::size_t s = 0; s < a.subsets_.size(); ++s) {
    const StoredSubset& x = a.subsets_[s];
    const StoredSubset& y = b.subsets_[s];
    if (x.center_index != y.center_index || x.radius != y.radius ||
        x.members.rows() != y.members.rows() || x.members != y.members ||
        x.local.spectrum.eigenvalues != y.local.spectrum.eigenvalues ||
        x.local.spectrum.subset_size != y.local.spectrum.subset_size ||
        x.local.local_id() != y.local.local_id() || x.local.noise_var() != y.local.noise_var()) {
      return false;
    }
  }
  return true;
}

}  // namespace cpca
